use rand::seq::SliceRandom;
use rand::Rng;

use super::{Clause, XorSatError, XorSatInstance};
use crate::rng;

/// Re-shuffle attempts per clause with a repeated variable.
pub const MAX_LOCAL_RETRIES: usize = 100;
/// Full re-draws of the stub matching before giving up.
pub const MAX_FULL_RESTARTS: usize = 100;

/// Generate a planted 3-regular 3-XORSAT instance for an `n_spins`-spin
/// Ising target, i.e. with `n_spins / 2` variables and clauses.
///
/// Three stubs per variable are matched to three slots per clause by a
/// uniform permutation. Clauses that receive a variable twice are repaired by
/// swapping the duplicate stub with a random stub elsewhere. Parities are then
/// fixed by a uniformly drawn planted assignment. Identical clauses are
/// allowed.
pub fn generate_3r3x(n_spins: usize, seed: u64) -> Result<XorSatInstance, XorSatError> {
    if n_spins % 2 != 0 {
        return Err(XorSatError::OddSize(n_spins));
    }
    if n_spins < 8 {
        return Err(XorSatError::TooSmall(n_spins));
    }
    let num_vars = n_spins / 2;
    let mut rng = rng::stream(seed);

    let stubs = (0..MAX_FULL_RESTARTS)
        .find_map(|_| match_stubs(num_vars, &mut rng))
        .ok_or(XorSatError::GenerationStall {
            restarts: MAX_FULL_RESTARTS,
        })?;

    let planted: Vec<bool> = (0..num_vars).map(|_| rng.random::<bool>()).collect();
    let clauses = stubs
        .chunks_exact(3)
        .map(|slot| {
            let mut vars = [slot[0], slot[1], slot[2]];
            vars.sort_unstable();
            let parity = planted[vars[0]] ^ planted[vars[1]] ^ planted[vars[2]];
            Clause::new(vars, parity)
        })
        .collect();

    XorSatInstance::new(num_vars, clauses, Some(planted), seed)
}

/// Index of a slot in clause `c` holding a variable already seen earlier in
/// the same clause.
fn duplicate_slot(stubs: &[usize], c: usize) -> Option<usize> {
    let base = 3 * c;
    let s = &stubs[base..base + 3];
    if s[1] == s[0] {
        Some(base + 1)
    } else if s[2] == s[0] || s[2] == s[1] {
        Some(base + 2)
    } else {
        None
    }
}

fn duplicate_count(stubs: &[usize], c: usize) -> usize {
    let s = &stubs[3 * c..3 * c + 3];
    usize::from(s[0] == s[1]) + usize::from(s[0] == s[2]) + usize::from(s[1] == s[2])
}

/// One attempt at a valid matching; `None` means a clause could not be
/// repaired within the retry budget.
fn match_stubs(num_vars: usize, rng: &mut impl Rng) -> Option<Vec<usize>> {
    let mut stubs: Vec<usize> = (0..num_vars).flat_map(|v| [v, v, v]).collect();
    stubs.shuffle(rng);
    let total = stubs.len();

    for c in 0..num_vars {
        let mut retries = 0;
        while let Some(slot) = duplicate_slot(&stubs, c) {
            if retries == MAX_LOCAL_RETRIES {
                return None;
            }
            retries += 1;
            let other = rng.random_range(0..total);
            let other_clause = other / 3;
            if other_clause == c {
                continue;
            }
            let before = duplicate_count(&stubs, c);
            stubs.swap(slot, other);
            if duplicate_count(&stubs, other_clause) > 0 || duplicate_count(&stubs, c) >= before {
                stubs.swap(slot, other);
            }
        }
    }
    Some(stubs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xorsat::{evaluate, serialize};

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(generate_3r3x(33, 0), Err(XorSatError::OddSize(33)));
        assert_eq!(generate_3r3x(6, 0), Err(XorSatError::TooSmall(6)));
        assert!(generate_3r3x(8, 0).is_ok());
    }

    #[test]
    fn thirty_two_spins_gives_sixteen_clauses() {
        let inst = generate_3r3x(32, 99).unwrap();
        assert_eq!(inst.num_vars(), 16);
        assert_eq!(inst.clauses().len(), 16);
        assert!(inst.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn deterministic_for_seed() {
        let a = serialize(&generate_3r3x(32, 5).unwrap());
        let b = serialize(&generate_3r3x(32, 5).unwrap());
        let c = serialize(&generate_3r3x(32, 6).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn planted_satisfies_for_many_seeds() {
        for seed in 0..100 {
            let inst = generate_3r3x(64, seed).unwrap();
            assert_eq!(evaluate(&inst, inst.planted().unwrap()).unwrap(), 0);
        }
    }

    #[test]
    fn smallest_size_is_reachable() {
        // 4 variables leave very little room for repair
        for seed in 0..200 {
            generate_3r3x(8, seed).unwrap();
        }
    }

    #[test]
    fn parity_fraction_near_half() {
        let mut ones = 0usize;
        let mut total = 0usize;
        for seed in 0..200 {
            let inst = generate_3r3x(128, seed).unwrap();
            ones += inst.clauses().iter().filter(|c| c.parity).count();
            total += inst.clauses().len();
        }
        let frac = ones as f64 / total as f64;
        let sigma = (0.25 / total as f64).sqrt();
        assert!((frac - 0.5).abs() < 4.0 * sigma, "parity fraction {frac}");
    }
}
