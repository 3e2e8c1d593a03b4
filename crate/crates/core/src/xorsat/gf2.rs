//! Gauss-Jordan elimination over GF(2) on packed 64-bit rows.

use super::{XorSatError, XorSatInstance};

const WORD: usize = 64;

/// A bit vector packed into machine words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.toggle(i);
        }
    }

    /// `self ^= other`, touching only words at or after `from_word`.
    #[inline]
    fn xor_from(&mut self, other: &BitRow, from_word: usize) {
        for (a, b) in self.words[from_word..]
            .iter_mut()
            .zip(&other.words[from_word..])
        {
            *a ^= *b;
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Affine solution set `particular ^ span(nullspace_basis)` of an XOR system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: Vec<bool>,
    pub nullspace_basis: Vec<Vec<bool>>,
    pub rank: usize,
    free_cols: Vec<usize>,
}

impl SolutionSpace {
    pub fn num_vars(&self) -> usize {
        self.particular.len()
    }

    /// log2 of the number of solutions.
    pub fn log2_solution_count(&self) -> usize {
        self.num_vars() - self.rank
    }

    /// The solution selected by the low bits of `mask` over the basis.
    pub fn solution(&self, mask: u64) -> Vec<bool> {
        let mut x = self.particular.clone();
        for (b, basis) in self.nullspace_basis.iter().enumerate() {
            if b < 64 && (mask >> b) & 1 == 1 {
                for (xi, &bi) in x.iter_mut().zip(basis) {
                    *xi ^= bi;
                }
            }
        }
        x
    }

    /// Membership test: whether `assignment` lies in the affine solution set.
    pub fn contains(&self, assignment: &[bool]) -> bool {
        if assignment.len() != self.num_vars() {
            return false;
        }
        // Each basis vector is the unit vector on its free column plus pivot
        // entries, so the combination is read off the free coordinates.
        let mut x = self.particular.clone();
        for (basis, &f) in self.nullspace_basis.iter().zip(&self.free_cols) {
            if assignment[f] != self.particular[f] {
                for (xi, &bi) in x.iter_mut().zip(basis) {
                    *xi ^= bi;
                }
            }
        }
        x == assignment
    }
}

/// Solve a general XOR system. Each equation lists the variables whose XOR
/// equals the parity; repeated variables cancel.
pub fn solve_system<'a, I>(num_vars: usize, equations: I) -> Result<SolutionSpace, XorSatError>
where
    I: IntoIterator<Item = (&'a [usize], bool)>,
{
    let rhs = num_vars;
    let mut rows: Vec<BitRow> = equations
        .into_iter()
        .map(|(vars, parity)| {
            let mut row = BitRow::zeros(num_vars + 1);
            for &v in vars {
                row.toggle(v);
            }
            row.set(rhs, parity);
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut free_cols = Vec::new();
    let mut next = 0usize;
    for col in 0..num_vars {
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            free_cols.push(col);
            continue;
        };
        rows.swap(next, found);
        let from_word = col / WORD;
        let (before, rest) = rows.split_at_mut(next);
        let (pivot, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row.get(col) {
                row.xor_from(pivot, from_word);
            }
        }
        pivot_cols.push(col);
        next += 1;
    }
    let rank = next;

    if rows[rank..].iter().any(|r| r.get(rhs)) {
        return Err(XorSatError::Inconsistent);
    }

    let mut particular = vec![false; num_vars];
    for (r, &p) in pivot_cols.iter().enumerate() {
        particular[p] = rows[r].get(rhs);
    }

    let nullspace_basis = free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![false; num_vars];
            v[f] = true;
            for (r, &p) in pivot_cols.iter().enumerate() {
                if rows[r].get(f) {
                    v[p] = true;
                }
            }
            v
        })
        .collect();

    Ok(SolutionSpace {
        particular,
        nullspace_basis,
        rank,
        free_cols,
    })
}

/// Exact solution set of an instance's parity system.
pub fn gf2_solve(instance: &XorSatInstance) -> Result<SolutionSpace, XorSatError> {
    solve_system(
        instance.num_vars(),
        instance
            .clauses()
            .iter()
            .map(|c| (c.vars.as_slice(), c.parity)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xorsat::{evaluate, evaluate_clauses, generate_3r3x, Clause};

    /// Exhaustive count of satisfying assignments, independent of elimination.
    fn brute_force_count(num_vars: usize, eqs: &[(Vec<usize>, bool)]) -> usize {
        (0u64..1 << num_vars)
            .filter(|mask| {
                eqs.iter().all(|(vars, parity)| {
                    vars.iter().fold(false, |acc, &v| acc ^ ((mask >> v) & 1 == 1)) == *parity
                })
            })
            .count()
    }

    fn solve(num_vars: usize, eqs: &[(Vec<usize>, bool)]) -> Result<SolutionSpace, XorSatError> {
        solve_system(num_vars, eqs.iter().map(|(v, p)| (v.as_slice(), *p)))
    }

    #[test]
    fn two_equation_system() {
        let eqs = vec![(vec![0, 1], true), (vec![1], true)];
        let space = solve(2, &eqs).unwrap();
        assert_eq!(space.particular, vec![false, true]);
        assert!(space.nullspace_basis.is_empty());
        assert_eq!(space.rank, 2);
        assert_eq!(brute_force_count(2, &eqs), 1);
    }

    #[test]
    fn single_three_term_equation() {
        let eqs = vec![(vec![0, 1, 2], false)];
        let space = solve(3, &eqs).unwrap();
        assert_eq!(brute_force_count(3, &eqs), 4);
        assert_eq!(1usize << space.log2_solution_count(), 4);
        assert_eq!(space.log2_solution_count(), 2);
    }

    #[test]
    fn empty_system_counts_all() {
        let space = solve(3, &[]).unwrap();
        assert_eq!(space.log2_solution_count(), 3);
        assert_eq!(space.rank, 0);
    }

    #[test]
    fn unique_solution_has_zero_exponent() {
        let eqs = vec![(vec![0], true), (vec![1], false), (vec![0, 1, 2], false)];
        let space = solve(3, &eqs).unwrap();
        assert_eq!(space.log2_solution_count(), 0);
        assert_eq!(space.particular, vec![true, false, true]);
    }

    #[test]
    fn contradiction_is_inconsistent() {
        let eqs = vec![(vec![0, 1, 2], false), (vec![0, 1, 2], true)];
        assert_eq!(solve(3, &eqs), Err(XorSatError::Inconsistent));
    }

    #[test]
    fn generated_particular_solutions_satisfy() {
        for seed in 0..20 {
            let inst = generate_3r3x(200, seed).unwrap();
            let space = gf2_solve(&inst).unwrap();
            assert_eq!(evaluate(&inst, &space.particular).unwrap(), 0);
            assert!(space.contains(inst.planted().unwrap()));
            for basis in &space.nullspace_basis {
                let zero = vec![false; inst.num_vars()];
                let homogeneous: Vec<Clause> = inst
                    .clauses()
                    .iter()
                    .map(|c| Clause::new(c.vars, false))
                    .collect();
                assert_eq!(evaluate_clauses(&homogeneous, basis), 0);
                assert_ne!(basis, &zero);
            }
        }
    }

    #[test]
    fn solution_count_matches_enumeration() {
        for seed in 0..30 {
            let inst = generate_3r3x(2 * (4 + (seed as usize % 13)), seed).unwrap();
            let v = inst.num_vars();
            let eqs: Vec<(Vec<usize>, bool)> = inst
                .clauses()
                .iter()
                .map(|c| (c.vars.to_vec(), c.parity))
                .collect();
            let space = gf2_solve(&inst).unwrap();
            assert_eq!(1usize << space.log2_solution_count(), brute_force_count(v, &eqs));
            assert_eq!(space.rank + space.nullspace_basis.len(), v);
            for mask in 0..(1u64 << space.nullspace_basis.len()) {
                let x = space.solution(mask);
                assert_eq!(evaluate(&inst, &x).unwrap(), 0);
                assert!(space.contains(&x));
            }
        }
    }
}
