//! Generate a planted instance, write it out, read it back and check it with
//! the exact GF(2) solver.
//!
//! ```text
//! cargo run --release --example generate_verify -- 64 7
//! ```

use r3x::xorsat::{self, evaluate, generate_3r3x, gf2_solve};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(64, |a| a.parse().expect("spin count"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));

    let inst = generate_3r3x(n, seed).expect("even size of at least 8");
    let text = xorsat::serialize(&inst);
    println!("{} variables, {} clauses, label {}", inst.num_vars(), inst.clauses().len(), inst.label());
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));

    let back = xorsat::parse(&text).expect("own output parses");
    assert_eq!(back, inst);

    let space = gf2_solve(&inst).expect("planted instances are consistent");
    println!(
        "rank {}, 2^{} solution(s), particular solution violates {} clause(s)",
        space.rank,
        space.log2_solution_count(),
        evaluate(&inst, &space.particular).unwrap()
    );
    println!("planted assignment is a solution: {}", space.contains(inst.planted().unwrap()));
}
