//! Parity-clause quadratization.
//!
//! Each clause `x_i ^ x_j ^ x_k = b` becomes the binary penalty
//! `(x_i + x_j + x_k - 2a - b)^2` with one ancilla bit `a`. Over the ancilla
//! the penalty minimises to 0 on satisfying assignments and to 1 otherwise.
//! Binaries map to spins through `x = (1 - s) / 2`.

use std::collections::BTreeMap;

use super::{Coupling, IsingModel, SpinState};
use crate::xorsat::XorSatInstance;

/// How bits relate to spins. Only one convention is used in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinConvention {
    /// spin +1 is bit 0, spin −1 is bit 1.
    #[default]
    PlusIsZero,
}

/// Placement of original variables and clause ancillas among the spins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableMap {
    pub var_spin: Vec<usize>,
    pub ancilla_spin: Vec<usize>,
    pub convention: SpinConvention,
}

impl VariableMap {
    /// Variables first, then one ancilla per clause.
    pub fn contiguous(num_vars: usize, num_clauses: usize) -> Self {
        Self {
            var_spin: (0..num_vars).collect(),
            ancilla_spin: (num_vars..num_vars + num_clauses).collect(),
            convention: SpinConvention::PlusIsZero,
        }
    }

    pub fn num_spins(&self) -> usize {
        self.var_spin.len() + self.ancilla_spin.len()
    }
}

#[inline]
fn bit_to_spin(bit: bool) -> i8 {
    if bit {
        -1
    } else {
        1
    }
}

/// Binary penalty `(x_i + x_j + x_k - 2a - b)^2`.
pub fn clause_penalty(values: [bool; 3], ancilla: bool, parity: bool) -> u32 {
    let sum: i32 = values.iter().map(|&x| i32::from(x)).sum();
    let d = sum - 2 * i32::from(ancilla) - i32::from(parity);
    (d * d) as u32
}

/// Ancilla value minimising the clause penalty. The only tie
/// (`Σx - b == 1`, penalty 1 either way) resolves to `true`.
pub fn optimal_ancilla(values: [bool; 3], parity: bool) -> bool {
    let sum: i32 = values.iter().map(|&x| i32::from(x)).sum();
    sum - i32::from(parity) >= 1
}

/// Quadratize an instance into an Ising model on `2 * num_vars` spins whose
/// energy, minimised over ancillas, equals the number of violated clauses.
pub fn xorsat_to_ising(instance: &XorSatInstance) -> (IsingModel, VariableMap) {
    let num_vars = instance.num_vars();
    let map = VariableMap::contiguous(num_vars, instance.clauses().len());
    let n = map.num_spins();

    let mut h = vec![0.0f64; n];
    let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut offset = 0.0f64;

    for (c, clause) in instance.clauses().iter().enumerate() {
        let [i, j, k] = clause.vars;
        let terms = [
            (map.var_spin[i], 1.0),
            (map.var_spin[j], 1.0),
            (map.var_spin[k], 1.0),
            (map.ancilla_spin[c], -2.0),
        ];
        let constant = -f64::from(u8::from(clause.parity));

        // (Σ w_t y_t + c)^2 = c^2 + Σ (w_t^2 + 2 c w_t) y_t + Σ_{t<u} 2 w_t w_u y_t y_u
        offset += constant * constant;
        for &(t, w) in &terms {
            let lin = w * w + 2.0 * constant * w;
            // y = (1 - s)/2
            offset += lin / 2.0;
            h[t] -= lin / 2.0;
        }
        for (a, &(t, wt)) in terms.iter().enumerate() {
            for &(u, wu) in &terms[a + 1..] {
                let quad = 2.0 * wt * wu;
                // y_t y_u = (1 - s_t - s_u + s_t s_u)/4
                offset += quad / 4.0;
                h[t] -= quad / 4.0;
                h[u] -= quad / 4.0;
                *pairs.entry((t.min(u), t.max(u))).or_insert(0.0) += quad / 4.0;
            }
        }
    }

    let couplings = pairs
        .into_iter()
        .filter(|&(_, v)| v != 0.0)
        .map(|((i, j), value)| Coupling { i, j, value })
        .collect();
    let model = IsingModel::new(h, couplings, offset)
        .expect("quadratization emits valid couplings")
        .with_label(instance.label())
        .with_source_map(map.clone());
    (model, map)
}

/// Spin state for `assignment` with every ancilla at its optimal value.
pub fn encode(instance: &XorSatInstance, map: &VariableMap, assignment: &[bool]) -> SpinState {
    let mut spins = vec![1i8; map.num_spins()];
    for (v, &bit) in assignment.iter().enumerate() {
        spins[map.var_spin[v]] = bit_to_spin(bit);
    }
    for (c, clause) in instance.clauses().iter().enumerate() {
        let values = clause.vars.map(|v| assignment[v]);
        spins[map.ancilla_spin[c]] = bit_to_spin(optimal_ancilla(values, clause.parity));
    }
    SpinState::new(spins).expect("spins are ±1")
}

/// Original variable assignment carried by `state`; ancillas are dropped.
pub fn decode(state: &SpinState, map: &VariableMap) -> Vec<bool> {
    map.var_spin.iter().map(|&s| state.get(s) == -1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xorsat::{evaluate, generate_3r3x};

    #[test]
    fn optimal_ancilla_cases() {
        assert!(optimal_ancilla([true, true, true], true));
        assert_eq!(clause_penalty([true, true, true], true, true), 0);
        assert!(!optimal_ancilla([false, false, false], false));
        // Σx = 2, b = 1: both ancilla values cost 1
        assert_eq!(clause_penalty([true, true, false], false, true), 1);
        assert_eq!(clause_penalty([true, true, false], true, true), 1);
        assert!(optimal_ancilla([true, true, false], true));
    }

    #[test]
    fn optimal_ancilla_minimises_by_enumeration() {
        for bits in 0u8..8 {
            let values = [bits & 1 == 1, bits & 2 == 2, bits & 4 == 4];
            for parity in [false, true] {
                let best = clause_penalty(values, false, parity).min(clause_penalty(values, true, parity));
                assert_eq!(clause_penalty(values, optimal_ancilla(values, parity), parity), best);
            }
        }
    }

    #[test]
    fn single_clause_examples() {
        // clause (x,y,z | 1)
        let min_over_a = |v: [bool; 3]| clause_penalty(v, false, true).min(clause_penalty(v, true, true));
        assert_eq!(min_over_a([true, false, false]), 0);
        assert_eq!(min_over_a([true, true, false]), 1);
    }

    #[test]
    fn decode_conventions() {
        let map = VariableMap::contiguous(4, 4);
        assert_eq!(decode(&SpinState::all_up(8), &map), vec![false; 4]);
        let inst = generate_3r3x(8, 2).unwrap();
        for mask in 0u64..16 {
            let a: Vec<bool> = (0..4).map(|i| (mask >> i) & 1 == 1).collect();
            assert_eq!(decode(&encode(&inst, &map, &a), &map), a);
        }
    }

    #[test]
    fn model_shape_and_planted_energy() {
        let inst = generate_3r3x(64, 11).unwrap();
        let (model, map) = xorsat_to_ising(&inst);
        assert_eq!(model.n(), 64);
        assert_eq!(map.num_spins(), 64);
        let ground = encode(&inst, &map, inst.planted().unwrap());
        assert_eq!(model.energy(&ground).unwrap(), 0.0);
    }

    #[test]
    fn encoded_energy_equals_unsat_count() {
        let inst = generate_3r3x(12, 7).unwrap();
        let (model, map) = xorsat_to_ising(&inst);
        for mask in 0u64..64 {
            let a: Vec<bool> = (0..6).map(|i| (mask >> i) & 1 == 1).collect();
            let e = model.energy(&encode(&inst, &map, &a)).unwrap();
            assert_eq!(e, evaluate(&inst, &a).unwrap() as f64);
        }
    }
}
