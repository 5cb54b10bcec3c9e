use std::sync::Arc;

use faer::c64;
use serde::Serialize;

use super::eigen::{diagonalize, Spectrum};
use crate::bus::{build_bus_hamiltonian, build_hamiltonian, full_space, BusParams, ModelVariant};
use crate::error::{Error, Result};
use crate::ops::{CompositeSpace, Ket};

/// Bus couplings below this magnitude are dropped from the perturbative sum.
const G_FLOOR: f64 = 1e-14;
/// A bus level closer than this to the data-qubit frequency is a resonance.
const RESONANCE_TOL: f64 = 1e-9;
/// Number of low eigenpairs searched when identifying dressed states.
const LOW_STATES: usize = 80;

/// Effective data-qubit coupling obtained by one or more methods. All values
/// are the signed coefficient of `sigma_x sigma_x` unless noted.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EffectiveCoupling {
    pub lambda_s1: f64,
    pub lambda_s2: f64,
    /// Second-order sum over bus eigenstates through the co-rotating
    /// intermediate states only.
    pub lambda_eff_sum: Option<f64>,
    /// The same sum including the intermediate states in which both data
    /// qubits are excited.
    pub lambda_eff_sum_cr: Option<f64>,
    /// Half the splitting of the one-excitation doublet (positive).
    pub lambda_eff_split: Option<f64>,
    /// Signed splitting, `(E_+ - E_-)/2` for the symmetric/antisymmetric states.
    pub lambda_xx_split: Option<f64>,
    pub lambda_eff_sw: Option<f64>,
    /// `lambda <k|X_1|0>` and `lambda <k|X_2|0>` over the bus eigenstates.
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    /// `E_k - E_0` of the bus.
    pub delta_e: Vec<f64>,
}

/// `omega_q - lambda^2 / (omega_c + omega_q)`
pub fn dressed_qubit_frequency(params: &BusParams) -> f64 {
    params.omega_q - params.lambda * params.lambda / (params.omega_c + params.omega_q)
}

/// Bus spectrum and the data-qubit couplings `g_k^(i)` to each bus eigenstate.
#[derive(Clone, Debug)]
pub struct BusCouplings {
    pub spectrum: Spectrum,
    pub g1: Vec<c64>,
    pub g2: Vec<c64>,
}

impl BusCouplings {
    pub fn delta_e(&self) -> Vec<f64> {
        let e0 = self.spectrum.energies()[0];
        self.spectrum.energies().iter().map(|e| e - e0).collect()
    }

    pub fn ground(&self) -> Ket {
        self.spectrum.state(0)
    }
}

pub fn bus_couplings(params: &BusParams, variant: ModelVariant) -> Result<BusCouplings> {
    let bus = build_bus_hamiltonian(params, variant)?;
    let spectrum = diagonalize(&bus.hamiltonian, None)?;
    let ground = spectrum.state(0);
    let g = |i: usize| -> Vec<c64> {
        let xg = bus.quadratures[i].apply(&ground);
        spectrum.overlaps(&xg).into_iter().map(|v| v * params.lambda).collect()
    };
    Ok(BusCouplings {
        g1: g(0),
        g2: g(1),
        spectrum,
    })
}

/// Second-order level shift of each data qubit's transition caused by the bus,
/// `sum_k |g_k|^2 [1/(w_q - dE_k) + 1/(w_q + dE_k)]`.
pub fn bus_induced_shifts(params: &BusParams, couplings: &BusCouplings) -> (f64, f64) {
    let de = couplings.delta_e();
    let shift = |g: &[c64]| -> f64 {
        (1..de.len())
            .map(|k| g[k].norm_sqr() * (1.0 / (params.omega_q - de[k]) + 1.0 / (params.omega_q + de[k])))
            .sum()
    };
    (shift(&couplings.g1), shift(&couplings.g2))
}

/// `lambda_eff = sum_k g_k^(1) g_k^(2) / (omega_q - dE_k)` over all bus
/// eigenstates.
pub fn effective_coupling_sum(params: &BusParams) -> Result<EffectiveCoupling> {
    effective_coupling_sum_variant(params, ModelVariant::Full)
}

pub fn effective_coupling_sum_variant(params: &BusParams, variant: ModelVariant) -> Result<EffectiveCoupling> {
    let bc = bus_couplings(params, variant)?;
    let de = bc.delta_e();
    let wq = params.omega_q;
    let mut sum = 0.0;
    let mut sum_cr = 0.0;
    for k in 1..de.len() {
        let (g1, g2) = (bc.g1[k], bc.g2[k]);
        if g1.norm() < G_FLOOR || g2.norm() < G_FLOOR {
            continue;
        }
        let detuning = wq - de[k];
        if detuning.abs() < RESONANCE_TOL {
            return Err(Error::Resonance {
                index: k,
                delta_e: de[k],
                omega_q: wq,
            });
        }
        if detuning.abs() < 10.0 * g1.norm().max(g2.norm()) {
            log::warn!(
                "bus state {k} at dE = {:.6} is not dispersive (detuning {detuning:.3e})",
                de[k]
            );
        }
        let num = (g1.conj() * g2).re;
        sum += num / detuning;
        sum_cr += num / detuning - num / (wq + de[k]);
    }
    Ok(EffectiveCoupling {
        lambda_s1: params.lambda_s1,
        lambda_s2: params.lambda_s2,
        lambda_eff_sum: Some(sum),
        lambda_eff_sum_cr: Some(sum_cr),
        g1: bc.g1.iter().map(|g| g.re).collect(),
        g2: bc.g2.iter().map(|g| g.re).collect(),
        delta_e: de,
        ..EffectiveCoupling::default()
    })
}

/// `data ⊗ bus` on the full space, where `data` holds amplitudes over the two
/// data qubits in row-major order.
pub fn data_bus_product(space: &Arc<CompositeSpace>, data: &[c64], bus: &Ket) -> Result<Ket> {
    let nb = bus.dim();
    if data.len() * nb != space.total_dim() {
        return Err(Error::invalid("data and bus dimensions do not match the space"));
    }
    let amps = data
        .iter()
        .flat_map(|&d| bus.amplitudes().iter().map(move |&b| d * b))
        .collect();
    Ket::new(space.clone(), amps)
}

/// Data amplitudes for `|ab>` of the two data qubits.
pub fn data_basis(levels: usize, a: usize, b: usize) -> Vec<c64> {
    let mut v = vec![c64::new(0.0, 0.0); levels * levels];
    v[a * levels + b] = c64::new(1.0, 0.0);
    v
}

/// `(|10> + |01>)/sqrt2` and `(|10> - |01>)/sqrt2` on the data qubits.
pub fn swap_doublet_data(levels: usize) -> (Vec<c64>, Vec<c64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (x, y) = (data_basis(levels, 1, 0), data_basis(levels, 0, 1));
    let plus = x.iter().zip(&y).map(|(a, b)| (a + b) * s).collect();
    let minus = x.iter().zip(&y).map(|(a, b)| (a - b) * s).collect();
    (plus, minus)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubletSplit {
    pub index_plus: usize,
    pub index_minus: usize,
    pub overlap_plus: f64,
    pub overlap_minus: f64,
    /// `(E_+ - E_-)/2`
    pub lambda_xx: f64,
}

/// Eigenstates closer in energy than this are treated as one degenerate level.
const DEGENERACY_TOL: f64 = 1e-12;

/// Eigenstate of largest overlap with `target`, and the target's weight on
/// the degenerate level containing it.
fn best_match(spectrum: &Spectrum, target: &Ket) -> (usize, f64) {
    let w: Vec<f64> = spectrum.overlaps(target).iter().map(|o| o.norm_sqr()).collect();
    let k = w
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (k, &x)| if x > best.1 { (k, x) } else { best })
        .0;
    let e = spectrum.energies();
    let level = (0..w.len())
        .filter(|&j| (e[j] - e[k]).abs() < DEGENERACY_TOL)
        .map(|j| w[j])
        .sum();
    (k, level)
}

/// Locates the eigenstates closest to the symmetric and antisymmetric
/// reference states and returns half their signed splitting. An exactly
/// degenerate doublet gives zero.
pub fn split_from_spectrum(spectrum: &Spectrum, plus: &Ket, minus: &Ket) -> Result<DoubletSplit> {
    let (ip, op) = best_match(spectrum, plus);
    let (im, om) = best_match(spectrum, minus);
    for (what, o) in [("symmetric swap state", op), ("antisymmetric swap state", om)] {
        if o < 0.5 {
            return Err(Error::Hybridization {
                what: what.to_string(),
                overlap: o,
            });
        }
    }
    let e = spectrum.energies();
    let delta = e[ip] - e[im];
    Ok(DoubletSplit {
        index_plus: ip,
        index_minus: im,
        overlap_plus: op,
        overlap_minus: om,
        lambda_xx: if delta.abs() < DEGENERACY_TOL { 0.0 } else { 0.5 * delta },
    })
}

/// Reference swap-doublet states `(|10> ± |01>)/sqrt2 ⊗ |0~>_bus`.
pub fn swap_reference_states(params: &BusParams, bus_ground: &Ket) -> Result<(Ket, Ket)> {
    let space = full_space(params)?;
    let (p, m) = swap_doublet_data(params.data_levels);
    Ok((
        data_bus_product(&space, &p, bus_ground)?,
        data_bus_product(&space, &m, bus_ground)?,
    ))
}

/// Half the splitting of the dressed one-excitation doublet of the full
/// Hamiltonian.
pub fn effective_coupling_split(params: &BusParams, variant: ModelVariant) -> Result<EffectiveCoupling> {
    let h = build_hamiltonian(params, variant)?;
    let spectrum = diagonalize(&h, Some(LOW_STATES))?;
    let bc = bus_couplings(params, variant)?;
    let (plus, minus) = swap_reference_states(params, &bc.ground())?;
    let split = split_from_spectrum(&spectrum, &plus, &minus)?;
    Ok(EffectiveCoupling {
        lambda_s1: params.lambda_s1,
        lambda_s2: params.lambda_s2,
        lambda_eff_split: Some(split.lambda_xx.abs()),
        lambda_xx_split: Some(split.lambda_xx),
        ..EffectiveCoupling::default()
    })
}

/// Result of the truncation convergence policy.
#[derive(Clone, Debug, Serialize)]
pub struct FockConvergence {
    pub n_ph: usize,
    /// `(n_ph, lambda_eff_sum)` for every truncation tried.
    pub history: Vec<(usize, f64)>,
}

/// Raises `n_ph` from its current value until the second-order coupling
/// changes by less than `tol` (relative) on the next increment.
pub fn converge_fock(params: &BusParams, tol: f64, max_n_ph: usize) -> Result<FockConvergence> {
    let value = |n: usize| -> Result<f64> {
        let p = params.clone().with_n_ph(n);
        Ok(effective_coupling_sum(&p)?.lambda_eff_sum.unwrap_or(0.0))
    };
    let mut n = params.n_ph;
    let mut history = vec![(n, value(n)?)];
    while n < max_n_ph {
        let next = value(n + 1)?;
        let cur = history.last().unwrap().1;
        history.push((n + 1, next));
        let scale = cur.abs().max(next.abs());
        if scale == 0.0 || (next - cur).abs() <= tol * scale {
            return Ok(FockConvergence { n_ph: n, history });
        }
        n += 1;
    }
    Err(Error::Numerical(format!(
        "Fock truncation not converged to {tol} up to n_ph = {max_n_ph}: {history:?}"
    )))
}
