//! Quadratize an instance into an Ising model and check that the energy with
//! optimal ancillas counts violated clauses.

use r3x::ising::{decode, encode, write_ising, xorsat_to_ising};
use r3x::rng::stream;
use r3x::xorsat::{evaluate, generate_3r3x};
use rand::Rng;

fn main() {
    let inst = generate_3r3x(16, 3).unwrap();
    let (model, map) = xorsat_to_ising(&inst);
    println!("{} spins, {} couplings, offset {}", model.n(), model.couplings().len(), model.offset());

    let planted = encode(&inst, &map, inst.planted().unwrap());
    println!("planted state energy: {}", model.energy(&planted).unwrap());

    let mut rng = stream(1);
    for _ in 0..5 {
        let x: Vec<bool> = (0..inst.num_vars()).map(|_| rng.random()).collect();
        let s = encode(&inst, &map, &x);
        assert_eq!(decode(&s, &map), x);
        println!(
            "random assignment: {} violated, energy {}",
            evaluate(&inst, &x).unwrap(),
            model.energy(&s).unwrap()
        );
    }

    print!("{}", write_ising(&model).lines().take(5).collect::<Vec<_>>().join("\n"));
    println!("\n...");
}
