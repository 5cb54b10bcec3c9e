//! Three-junction flux qubit in a plane-wave basis and the coupling switch
//! built from it.
//!
//! With `phi_± = (phi_1 ± phi_2)/2` the Hamiltonian in units of `E_C` is
//!
//! `H = s [P_+^2 + P_-^2/(1 + 2 alpha)] - (E_J/E_C)[2 cos phi_+ cos phi_- + alpha cos(2 pi f + 2 phi_+)]`
//!
//! where `s` is the kinetic scale. Plane waves `e^{i(m phi_+ + n phi_-)}`
//! with `m + n` even are single valued in the junction phases. The potential
//! is even in `phi_-`, and the two lowest states lie in the even sector, so
//! the diagonalization is restricted to it.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::BrentRoot;
use faer::{c64, Mat, Side};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bus::{BusParams, ModelVariant};
use crate::error::{Error, Result};
use crate::spectral::{bus_couplings, bus_induced_shifts, effective_coupling_sum};

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
/// Relative level change tolerated when the basis grows by `CONVERGENCE_STEP`.
const CONVERGENCE_TOL: f64 = 1e-4;
const CONVERGENCE_STEP: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxQubitParams {
    pub ej_over_ec: f64,
    pub ec_ghz: f64,
    pub alpha: f64,
    /// Reduced external flux `Phi_ext / Phi_0`.
    pub f: f64,
    /// Prefactor of the kinetic term.
    pub kinetic_scale: f64,
}

impl Default for FluxQubitParams {
    fn default() -> Self {
        Self {
            ej_over_ec: 35.0,
            ec_ghz: 27.1,
            alpha: 0.8,
            f: 0.5,
            kinetic_scale: DEFAULT_KINETIC_SCALE,
        }
    }
}

/// Puts the symmetric-point transition of the default circuit at 12 GHz,
/// see [`calibrate_kinetic_scale`].
pub const DEFAULT_KINETIC_SCALE: f64 = 0.644605;

impl FluxQubitParams {
    pub fn at_flux(&self, f: f64) -> Self {
        Self { f, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ej_over_ec", self.ej_over_ec),
            ("ec_ghz", self.ec_ghz),
            ("kinetic_scale", self.kinetic_scale),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.f) {
            return Err(Error::invalid(format!("f must lie in [0, 1], got {}", self.f)));
        }
        if self.alpha >= 1.0 {
            log::warn!("alpha = {} is outside the usual range (0, 1)", self.alpha);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxSpectrum {
    pub f: f64,
    /// Lowest eigenenergies in units of `E_C`, ascending.
    pub levels: Vec<f64>,
    /// `|<g|sin(2 pi f + 2 phi_+)|e>|`
    pub dipole: f64,
    /// `E_1 - E_0` in units of `E_C`.
    pub omega_f: f64,
    pub omega_f_ghz: f64,
}

struct Solved {
    levels: Vec<f64>,
    dipole: f64,
}

fn solve(params: &FluxQubitParams, basis_size: usize, n_levels: usize) -> Result<Solved> {
    let nb = basis_size as i64;
    // even sector: (|m,n> + |m,-n>)/sqrt 2 for n > 0, |m,0>
    let sector: Vec<(i64, i64)> = (-nb..=nb)
        .flat_map(|m| (0..=nb).map(move |n| (m, n)))
        .filter(|(m, n)| (m + n) % 2 == 0)
        .collect();
    let index: HashMap<(i64, i64), usize> = sector.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let dim = sector.len();
    let ej = params.ej_over_ec;
    let phase = c64::from_polar(1.0, 2.0 * PI * params.f);
    let mut h = Mat::<c64>::zeros(dim, dim);
    let mut s = Mat::<c64>::zeros(dim, dim);
    let norm = |n: i64| if n == 0 { 1.0 } else { FRAC_1_SQRT_2 };
    for (i, &(m, n)) in sector.iter().enumerate() {
        let (mf, nf) = (m as f64, n as f64);
        h[(i, i)] += c64::new(
            params.kinetic_scale * (mf * mf + nf * nf / (1.0 + 2.0 * params.alpha)),
            0.0,
        );
        // Components of the sector state on plane waves, hopped by the
        // potential and projected back onto the sector.
        let signs: &[i64] = if n == 0 { &[1] } else { &[1, -1] };
        for &sn in signs {
            let src = norm(n);
            let nn = sn * n;
            let add = |mat: &mut Mat<c64>, m2: i64, n2: i64, amp: c64| {
                if let Some(&j) = index.get(&(m2, n2.abs())) {
                    mat[(j, i)] += amp * (src * norm(n2.abs()));
                }
            };
            for dm in [1, -1] {
                for dn in [1, -1] {
                    add(&mut h, m + dm, nn + dn, c64::new(-ej / 2.0, 0.0));
                }
            }
            add(&mut h, m + 2, nn, phase * (-ej * params.alpha / 2.0));
            add(&mut h, m - 2, nn, phase.conj() * (-ej * params.alpha / 2.0));
            add(&mut s, m + 2, nn, phase / c64::new(0.0, 2.0));
            add(&mut s, m - 2, nn, -phase.conj() / c64::new(0.0, 2.0));
        }
    }
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("flux-qubit eigensolver failed: {e:?}")))?;
    let u = evd.U();
    let levels = (0..n_levels.min(dim)).map(|k| evd.S()[k].re).collect();
    let se = &s * u.col(1);
    let dipole = (0..dim)
        .map(|i| u[(i, 0)].conj() * se[i])
        .fold(ZERO, |a, b| a + b)
        .norm();
    Ok(Solved { levels, dipole })
}

/// Lowest levels and transition dipole at `params.f`, checked for
/// convergence against a basis larger by four plane waves in each direction.
pub fn flux_spectrum(params: &FluxQubitParams, basis_size: usize) -> Result<FluxSpectrum> {
    params.validate()?;
    if basis_size < 2 {
        return Err(Error::invalid("basis_size must be at least 2"));
    }
    let n_levels = 4;
    let a = solve(params, basis_size, n_levels)?;
    let b = solve(params, basis_size + CONVERGENCE_STEP, n_levels)?;
    for k in 0..2 {
        let rel = (a.levels[k] - b.levels[k]).abs() / b.levels[k].abs().max(1.0);
        if rel > CONVERGENCE_TOL {
            return Err(Error::Numerical(format!(
                "flux-qubit level {k} moved by {rel:.2e} (relative) from basis {basis_size} to {}",
                basis_size + CONVERGENCE_STEP
            )));
        }
    }
    let omega_f = a.levels[1] - a.levels[0];
    Ok(FluxSpectrum {
        f: params.f,
        omega_f,
        omega_f_ghz: omega_f * params.ec_ghz,
        dipole: a.dipole,
        levels: a.levels,
    })
}

pub fn flux_sweep(params: &FluxQubitParams, fluxes: &[f64], basis_size: usize) -> Vec<Result<FluxSpectrum>> {
    fluxes
        .par_iter()
        .map(|&f| flux_spectrum(&params.at_flux(f), basis_size))
        .collect()
}

struct Calibration<'a> {
    params: &'a FluxQubitParams,
    basis_size: usize,
    target_ghz: f64,
}

impl CostFunction for Calibration<'_> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, s: &f64) -> std::result::Result<f64, argmin::core::Error> {
        let p = FluxQubitParams {
            kinetic_scale: *s,
            ..self.params.clone()
        };
        let sol = solve(&p, self.basis_size, 2)?;
        Ok((sol.levels[1] - sol.levels[0]) * p.ec_ghz - self.target_ghz)
    }
}

/// Kinetic scale in `[lo, hi]` for which the transition at `params.f` equals
/// `target_ghz`.
pub fn calibrate_kinetic_scale(
    params: &FluxQubitParams,
    target_ghz: f64,
    (lo, hi): (f64, f64),
    basis_size: usize,
) -> Result<f64> {
    params.validate()?;
    let problem = Calibration {
        params,
        basis_size,
        target_ghz,
    };
    let res = Executor::new(problem, BrentRoot::new(lo, hi, 1e-10))
        .configure(|s| s.max_iters(200))
        .run()
        .map_err(|e| Error::Numerical(format!("kinetic-scale calibration failed: {e}")))?;
    res.state
        .best_param
        .ok_or_else(|| Error::Numerical("kinetic-scale calibration returned no value".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleSwitch {
    /// Data-qubit coupling with only `f_2` switched off.
    pub residual: f64,
    pub on_off_ratio: f64,
    /// Difference of the bus-induced frequency shifts, `dw_a - dw_b`.
    pub partner_shift: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchAnalysis {
    pub f_on: f64,
    pub f_off: f64,
    pub omega_f_on_ghz: f64,
    pub omega_f_off_ghz: f64,
    pub freq_ratio: f64,
    pub dipole_ratio: f64,
    pub lambda_eff_on: f64,
    pub lambda_eff_off: f64,
    pub on_off_ratio: f64,
    pub single_off: SingleSwitch,
}

/// Frequency and dipole of the flux qubit at `f_on = 0.5` and at `fq_off.f`.
pub fn switch_ratios(fq_off: &FluxQubitParams, basis_size: usize) -> Result<(FluxSpectrum, FluxSpectrum)> {
    let on = flux_spectrum(&fq_off.at_flux(0.5), basis_size)?;
    let off = flux_spectrum(fq_off, basis_size)?;
    Ok((on, off))
}

/// Switches the flux qubits off by moving their frequency to `omega_f(f_off)`
/// and scaling their coupling by the dipole ratio, then recomputes the
/// effective data-qubit coupling.
pub fn switch_analysis(fq_off: &FluxQubitParams, bus: &BusParams, basis_size: usize) -> Result<SwitchAnalysis> {
    bus.validate()?;
    let (on, off) = switch_ratios(fq_off, basis_size)?;
    let freq_ratio = off.omega_f / on.omega_f;
    let dipole_ratio = off.dipole / on.dipole;
    switch_analysis_with_ratios(bus, freq_ratio, dipole_ratio).map(|mut s| {
        s.f_on = on.f;
        s.f_off = off.f;
        s.omega_f_on_ghz = on.omega_f_ghz;
        s.omega_f_off_ghz = off.omega_f_ghz;
        s
    })
}

/// [`switch_analysis`] with the flux-qubit ratios given directly.
pub fn switch_analysis_with_ratios(bus: &BusParams, freq_ratio: f64, dipole_ratio: f64) -> Result<SwitchAnalysis> {
    if !(freq_ratio > 0.0 && dipole_ratio > 0.0) {
        return Err(Error::invalid("switch ratios must be positive"));
    }
    let lambda = |p: &BusParams| -> Result<f64> {
        effective_coupling_sum(p)?
            .lambda_eff_sum
            .ok_or_else(|| Error::Numerical("missing coupling sum".into()))
    };
    let lambda_eff_on = lambda(bus)?;
    let both = BusParams {
        omega_f1: bus.omega_f1 * freq_ratio,
        omega_f2: bus.omega_f2 * freq_ratio,
        lambda_s1: bus.lambda_s1 * dipole_ratio,
        lambda_s2: bus.lambda_s2 * dipole_ratio,
        ..bus.clone()
    };
    let lambda_eff_off = lambda(&both)?;
    let single = BusParams {
        omega_f2: bus.omega_f2 * freq_ratio,
        lambda_s2: bus.lambda_s2 * dipole_ratio,
        ..bus.clone()
    };
    let residual = lambda(&single)?;
    let (da, db) = bus_induced_shifts(&single, &bus_couplings(&single, ModelVariant::Full)?);
    let ratio = |on: f64, off: f64| if off == 0.0 { f64::INFINITY } else { (on / off).abs() };
    Ok(SwitchAnalysis {
        f_on: 0.5,
        f_off: f64::NAN,
        omega_f_on_ghz: f64::NAN,
        omega_f_off_ghz: f64::NAN,
        freq_ratio,
        dipole_ratio,
        lambda_eff_on,
        lambda_eff_off,
        on_off_ratio: ratio(lambda_eff_on, lambda_eff_off),
        single_off: SingleSwitch {
            residual,
            on_off_ratio: ratio(lambda_eff_on, residual),
            partner_shift: da - db,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_rotor_levels() {
        // E_J -> 0: levels s (m^2 + n^2/(1 + 2 alpha)) with m + n even, n >= 0
        let p = FluxQubitParams {
            ej_over_ec: 1e-9,
            kinetic_scale: 1.0,
            ..FluxQubitParams::default()
        };
        let sol = solve(&p, 6, 4).unwrap();
        let c = 1.0 / 2.6;
        let mut expected = [0.0, 1.0 + c, 1.0 + c, 4.0, 4.0, 4.0 * c];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for k in 0..4 {
            assert!(
                (sol.levels[k] - expected[k]).abs() < 1e-6,
                "{k}: {} vs {}",
                sol.levels[k],
                expected[k]
            );
        }
    }

    #[test]
    fn symmetric_point_is_a_minimum() {
        let p = FluxQubitParams::default();
        let w = |f: f64| flux_spectrum(&p.at_flux(f), 12).unwrap().omega_f;
        let w0 = w(0.5);
        assert!(w(0.49) > w0 && w(0.51) > w0);
        assert!((w(0.49) - w(0.51)).abs() < 1e-8 * w0.max(1.0));
    }

    #[test]
    fn default_scale_is_calibrated() {
        let p = FluxQubitParams::default();
        let s = flux_spectrum(&p, 12).unwrap();
        assert!((s.omega_f_ghz - 12.0).abs() < 1e-4, "{}", s.omega_f_ghz);
        let k = calibrate_kinetic_scale(&p, 12.0, (0.5, 0.8), 12).unwrap();
        assert!((k - DEFAULT_KINETIC_SCALE).abs() < 1e-5, "{k}");
    }

    #[test]
    fn unit_ratios_leave_the_coupling_unchanged() {
        let bus = BusParams::default().with_lambda_s_ratio(0.2);
        let s = switch_analysis_with_ratios(&bus, 1.0, 1.0).unwrap();
        assert!((s.on_off_ratio - 1.0).abs() < 1e-12);
        assert!((s.single_off.on_off_ratio - 1.0).abs() < 1e-12);
        assert!(s.single_off.partner_shift.abs() < 1e-12);
    }

    #[test]
    fn undersized_basis_is_rejected() {
        let p = FluxQubitParams::default();
        assert!(matches!(flux_spectrum(&p, 2), Err(Error::Numerical(_))));
    }
}
