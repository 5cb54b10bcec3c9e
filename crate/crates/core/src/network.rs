//! Crosstalk in a register of `N` data qubits joined pairwise by buses.
//!
//! Qubits are numbered from 1. The interaction is
//! `H_I = sum_{k<l} k lambda_kl sigma_x^(l) sigma_x^(k)`, where the factor `k`
//! counts the bus paths through which qubit `k` reaches the later qubits.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{embed_named, CompositeSpace, LocalOp, Operator, SubsystemSpec};

/// Largest register for which the `2^N`-dimensional operator is built.
pub const MAX_EXPLICIT_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArchitectureState {
    n: usize,
    /// `couplings[k][l]` for 0-based qubit indices; symmetric with a zero
    /// diagonal.
    couplings: Vec<Vec<f64>>,
}

impl ArchitectureState {
    /// Every pair coupled with strength `lambda`.
    pub fn uniform(n: usize, lambda: f64) -> Result<Self> {
        Self::from_fn(n, |_, _| lambda)
    }

    /// `lambda(k, l)` with 1-based `k < l`.
    pub fn from_fn(n: usize, lambda: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("a register needs at least two qubits, got {n}")));
        }
        let mut couplings = vec![vec![0.0; n]; n];
        for k in 0..n {
            for l in k + 1..n {
                let v = lambda(k + 1, l + 1);
                if !v.is_finite() {
                    return Err(Error::invalid(format!("coupling ({}, {}) is not finite", k + 1, l + 1)));
                }
                couplings[k][l] = v;
                couplings[l][k] = v;
            }
        }
        Ok(Self { n, couplings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coupling between 1-based qubits `k` and `l`.
    pub fn coupling(&self, k: usize, l: usize) -> f64 {
        self.couplings[k - 1][l - 1]
    }

    /// Coefficient of `sigma_x^(k) sigma_x^(l)` in `H_I` for 1-based `k < l`.
    pub fn pair_coefficient(&self, k: usize, l: usize) -> f64 {
        let (k, l) = (k.min(l), k.max(l));
        k as f64 * self.coupling(k, l)
    }
}

pub fn interaction_hamiltonian(state: &ArchitectureState) -> Result<Operator> {
    let n = state.n();
    if n > MAX_EXPLICIT_QUBITS {
        return Err(Error::invalid(format!(
            "explicit operator limited to {MAX_EXPLICIT_QUBITS} qubits, got {n}; use residual_on_last_qubit"
        )));
    }
    let subsystems = (1..=n).map(|k| SubsystemSpec::qubit(format!("q{k}"))).collect();
    let space = Arc::new(CompositeSpace::new(subsystems)?);
    let sx = (0..n)
        .map(|i| embed_named(LocalOp::SigmaX, i, &space))
        .collect::<Result<Vec<_>>>()?;
    let mut h = Operator::zeros(space.clone());
    for k in 1..n {
        for l in k + 1..=n {
            let c = state.pair_coefficient(k, l);
            if c != 0.0 {
                h = &h + &(c * &(&sx[l - 1] * &sx[k - 1]));
            }
        }
    }
    Ok(h)
}

/// Total `sigma_x sigma_x` coefficient acting on 1-based qubit `q`, read off
/// the operator as `sum_k <0|H|e_k + e_q>` where `e_k` flips qubit `k`.
///
/// Treating the other qubits as one effective qubit, this is the coupling
/// that acts on `q`.
pub fn coefficient_sum_on_qubit(h: &Operator, q: usize) -> Result<f64> {
    let n = h.space().len();
    if q == 0 || q > n {
        return Err(Error::invalid(format!("qubit {q} out of range 1..={n}")));
    }
    let mut occ = vec![0; n];
    let mut sum = 0.0;
    for k in (1..=n).filter(|&k| k != q) {
        occ[k - 1] = 1;
        occ[q - 1] = 1;
        let j = h.space().index_of(&occ)?;
        sum += h.get(0, j).re;
        occ[k - 1] = 0;
        occ[q - 1] = 0;
    }
    Ok(sum)
}

/// `lambda_off N (N - 1) / 2`, the residual interaction on qubit `N` when
/// every pair is switched off.
pub fn residual_on_last_qubit(n: usize, lambda_off: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid(format!("a register needs at least two qubits, got {n}")));
    }
    Ok(lambda_off * (n * (n - 1)) as f64 / 2.0)
}

/// `|lambda_on| / |residual_on_last_qubit|`; infinite when the residual
/// vanishes.
pub fn network_on_off_ratio(n: usize, lambda_on: f64, lambda_off: f64) -> Result<f64> {
    let residual = residual_on_last_qubit(n, lambda_off)?;
    if residual == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((lambda_on / residual).abs())
}
