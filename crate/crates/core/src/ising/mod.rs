//! Two-body Ising Hamiltonians `H(s) = offset + Σ h_i s_i + Σ_{i<j} J_ij s_i s_j`
//! over spins `s_i ∈ {-1, +1}`.

mod export;
mod quadratize;

pub use export::{parse_ising, write_ising};
pub use quadratize::{
    clause_penalty, decode, encode, optimal_ancilla, xorsat_to_ising, SpinConvention, VariableMap,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsingError {
    #[error("state has length {got}, model has {expected} spins")]
    LengthMismatch { expected: usize, got: usize },
    #[error("spin index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid coupling ({i}, {j}): {reason}")]
    InvalidCoupling { i: usize, j: usize, reason: &'static str },
    #[error("spin value {0} is not ±1")]
    InvalidSpin(i8),
    #[error("field vector has length {got}, expected {expected}")]
    FieldLength { expected: usize, got: usize },
    #[error("syntax error on line {line}: {message}")]
    SyntaxError { line: usize, message: String },
}

/// One upper-triangular coupling `J_ij`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// A spin configuration with entries in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self, IsingError> {
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(IsingError::InvalidSpin(bad));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// State whose bit `i` of `mask` set means spin `i` is −1. Spins past
    /// the 64th are +1.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|i| if mask.checked_shr(i as u32).unwrap_or(0) & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn set(&mut self, i: usize, up: bool) {
        self.0[i] = if up { 1 } else { -1 };
    }
}

/// A validated Ising model with a per-spin adjacency index for O(degree)
/// local-field queries.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    h: Vec<f64>,
    couplings: Vec<Coupling>,
    offset: f64,
    source_map: Option<VariableMap>,
    label: String,
    adj_start: Vec<usize>,
    adj: Vec<(usize, f64)>,
}

impl IsingModel {
    pub fn new(
        h: Vec<f64>,
        couplings: Vec<Coupling>,
        offset: f64,
    ) -> Result<Self, IsingError> {
        let n = h.len();
        let mut seen = std::collections::HashSet::with_capacity(couplings.len());
        for c in &couplings {
            if c.i >= n || c.j >= n {
                return Err(IsingError::InvalidCoupling {
                    i: c.i,
                    j: c.j,
                    reason: "index out of range",
                });
            }
            if c.i >= c.j {
                return Err(IsingError::InvalidCoupling {
                    i: c.i,
                    j: c.j,
                    reason: "expected i < j",
                });
            }
            if !seen.insert((c.i, c.j)) {
                return Err(IsingError::InvalidCoupling {
                    i: c.i,
                    j: c.j,
                    reason: "pair appears twice",
                });
            }
        }

        let mut degree = vec![0usize; n];
        for c in &couplings {
            degree[c.i] += 1;
            degree[c.j] += 1;
        }
        let mut adj_start = Vec::with_capacity(n + 1);
        adj_start.push(0);
        for d in &degree {
            adj_start.push(adj_start.last().unwrap() + d);
        }
        let mut fill = adj_start[..n].to_vec();
        let mut adj = vec![(0usize, 0.0f64); adj_start[n]];
        for c in &couplings {
            adj[fill[c.i]] = (c.j, c.value);
            fill[c.i] += 1;
            adj[fill[c.j]] = (c.i, c.value);
            fill[c.j] += 1;
        }

        Ok(Self {
            n,
            h,
            couplings,
            offset,
            source_map: None,
            label: String::new(),
            adj_start,
            adj,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_source_map(mut self, map: VariableMap) -> Self {
        self.source_map = Some(map);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn source_map(&self) -> Option<&VariableMap> {
        self.source_map.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Neighbours of spin `k` with their coupling values.
    #[inline]
    pub fn neighbors(&self, k: usize) -> &[(usize, f64)] {
        &self.adj[self.adj_start[k]..self.adj_start[k + 1]]
    }

    pub fn max_abs_coupling(&self) -> f64 {
        self.couplings
            .iter()
            .map(|c| c.value.abs())
            .fold(0.0, f64::max)
    }

    fn check_len(&self, state: &SpinState) -> Result<(), IsingError> {
        if state.len() != self.n {
            return Err(IsingError::LengthMismatch {
                expected: self.n,
                got: state.len(),
            });
        }
        Ok(())
    }

    pub fn energy(&self, state: &SpinState) -> Result<f64, IsingError> {
        self.check_len(state)?;
        Ok(self.energy_of(state.spins()))
    }

    /// Energy without the length check; `spins.len()` must equal `n`.
    pub fn energy_of(&self, spins: &[i8]) -> f64 {
        let linear: f64 = self
            .h
            .iter()
            .zip(spins)
            .map(|(h, &s)| h * f64::from(s))
            .sum();
        let quadratic: f64 = self
            .couplings
            .iter()
            .map(|c| c.value * f64::from(spins[c.i] * spins[c.j]))
            .sum();
        self.offset + linear + quadratic
    }

    /// `h_k + Σ_j J_kj s_j`.
    #[inline]
    pub fn local_field(&self, spins: &[i8], k: usize) -> f64 {
        self.h[k]
            + self
                .neighbors(k)
                .iter()
                .map(|&(j, v)| v * f64::from(spins[j]))
                .sum::<f64>()
    }

    /// Energy change from flipping spin `flip_index`.
    pub fn energy_delta(&self, state: &SpinState, flip_index: usize) -> Result<f64, IsingError> {
        self.check_len(state)?;
        if flip_index >= self.n {
            return Err(IsingError::IndexOutOfRange {
                index: flip_index,
                n: self.n,
            });
        }
        let s = state.spins();
        Ok(-2.0 * f64::from(s[flip_index]) * self.local_field(s, flip_index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(j: f64) -> IsingModel {
        IsingModel::new(
            vec![0.0, 0.0],
            vec![Coupling {
                i: 0,
                j: 1,
                value: j,
            }],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn two_spin_hand_sum() {
        let m = pair(1.0);
        let up = SpinState::new(vec![1, 1]).unwrap();
        let anti = SpinState::new(vec![1, -1]).unwrap();
        assert_eq!(m.energy(&up).unwrap(), 1.0);
        assert_eq!(m.energy(&anti).unwrap(), -1.0);
        assert_eq!(m.energy_delta(&up, 0).unwrap(), -2.0);
    }

    #[test]
    fn empty_model_is_zero() {
        let m = IsingModel::new(vec![0.0; 5], vec![], 0.0).unwrap();
        for mask in 0..32 {
            assert_eq!(m.energy(&SpinState::from_mask(5, mask)).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_malformed_couplings() {
        let c = |i, j| Coupling { i, j, value: 1.0 };
        assert!(IsingModel::new(vec![0.0; 3], vec![c(1, 1)], 0.0).is_err());
        assert!(IsingModel::new(vec![0.0; 3], vec![c(2, 1)], 0.0).is_err());
        assert!(IsingModel::new(vec![0.0; 3], vec![c(0, 3)], 0.0).is_err());
        assert!(IsingModel::new(vec![0.0; 3], vec![c(0, 1), c(0, 1)], 0.0).is_err());
    }

    #[test]
    fn length_and_index_errors() {
        let m = pair(1.0);
        let short = SpinState::all_up(1);
        assert!(matches!(m.energy(&short), Err(IsingError::LengthMismatch { .. })));
        let up = SpinState::all_up(2);
        assert!(matches!(
            m.energy_delta(&up, 2),
            Err(IsingError::IndexOutOfRange { index: 2, n: 2 })
        ));
        assert!(SpinState::new(vec![1, 0]).is_err());
    }

    #[test]
    fn coupling_order_does_not_matter() {
        let cs = vec![
            Coupling { i: 0, j: 1, value: 0.5 },
            Coupling { i: 1, j: 2, value: -1.0 },
            Coupling { i: 0, j: 2, value: 2.0 },
        ];
        let mut rev = cs.clone();
        rev.reverse();
        let a = IsingModel::new(vec![0.25, -0.5, 1.0], cs, 0.75).unwrap();
        let b = IsingModel::new(vec![0.25, -0.5, 1.0], rev, 0.75).unwrap();
        for mask in 0..8 {
            let s = SpinState::from_mask(3, mask);
            assert_eq!(a.energy(&s).unwrap(), b.energy(&s).unwrap());
        }
    }
}
