use std::f64::consts::{FRAC_1_SQRT_2, PI};

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use faer::{c64, Mat};
use rayon::prelude::*;

use crate::dynamics::{mesolve, LindbladModel, SolverOptions};
use crate::error::{Error, Result};

const D: usize = 4;
const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
const GRID: usize = 72;

pub fn ideal_sqrt_iswap() -> Mat<c64> {
    let s = FRAC_1_SQRT_2;
    let mut u = Mat::<c64>::identity(D, D);
    u[(1, 1)] = c64::new(s, 0.0);
    u[(2, 2)] = c64::new(s, 0.0);
    u[(1, 2)] = c64::new(0.0, s);
    u[(2, 1)] = c64::new(0.0, s);
    u
}

/// `exp(-i theta sigma_z / 2)` on each qubit, `diag(e^{-i theta/2}, e^{i theta/2})`.
pub fn rz_pair(theta_a: f64, theta_b: f64) -> Mat<c64> {
    let rz = |t: f64| [c64::from_polar(1.0, -t / 2.0), c64::from_polar(1.0, t / 2.0)];
    let (a, b) = (rz(theta_a), rz(theta_b));
    Mat::from_fn(D, D, |i, j| if i == j { a[i / 2] * b[i % 2] } else { ZERO })
}

/// A linear map on two-qubit operators, stored as its action on the matrix
/// units `|i><j|`.
#[derive(Clone, Debug)]
pub struct Channel {
    outputs: Vec<Mat<c64>>,
}

impl Channel {
    /// `outputs[4 i + j] = E(|i><j|)`
    pub fn new(outputs: Vec<Mat<c64>>) -> Result<Self> {
        if outputs.len() != D * D || outputs.iter().any(|m| m.nrows() != D || m.ncols() != D) {
            return Err(Error::invalid("a two-qubit channel needs 16 outputs of size 4x4"));
        }
        Ok(Self { outputs })
    }

    pub fn identity() -> Self {
        Self::from_unitary(&Mat::identity(D, D))
    }

    pub fn from_unitary(u: &Mat<c64>) -> Self {
        let outputs = (0..D * D)
            .map(|ij| {
                let (i, j) = (ij / D, ij % D);
                Mat::from_fn(D, D, |a, b| u[(a, i)] * u[(b, j)].conj())
            })
            .collect();
        Self { outputs }
    }

    pub fn output(&self, i: usize, j: usize) -> &Mat<c64> {
        &self.outputs[i * D + j]
    }

    pub fn apply(&self, rho: &Mat<c64>) -> Mat<c64> {
        let mut out = Mat::<c64>::zeros(D, D);
        for i in 0..D {
            for j in 0..D {
                let r = rho[(i, j)];
                if r != ZERO {
                    let e = self.output(i, j);
                    for a in 0..D {
                        for b in 0..D {
                            out[(a, b)] += e[(a, b)] * r;
                        }
                    }
                }
            }
        }
        out
    }

    /// `rho -> u E(rho) u^dag`
    pub fn followed_by(&self, u: &Mat<c64>) -> Self {
        Self {
            outputs: self.outputs.iter().map(|m| u * m * u.adjoint()).collect(),
        }
    }

    /// `Tr E(I)`; equals 4 for a trace-preserving map.
    pub fn trace_of_identity(&self) -> f64 {
        (0..D)
            .map(|i| (0..D).map(|a| self.output(i, i)[(a, a)].re).sum::<f64>())
            .sum()
    }

    /// Average population lost from the logical span.
    pub fn leakage(&self) -> f64 {
        1.0 - self.trace_of_identity() / D as f64
    }
}

/// Average of `<psi|U^dag E(|psi><psi|) U|psi>` over the Haar measure,
///
/// `F = (sum_ij <i|U^dag E(|i><j|) U|j> + Tr E(I)) / (d (d + 1))`,
///
/// which is the closed form of the integral for any linear map `E`,
/// trace-preserving or not.
pub fn average_gate_fidelity(channel: &Channel, target: &Mat<c64>) -> f64 {
    let mut s = ZERO;
    for i in 0..D {
        for j in 0..D {
            let m = target.adjoint() * channel.output(i, j) * target;
            s += m[(i, j)];
        }
    }
    (s.re + channel.trace_of_identity()) / (D * (D + 1)) as f64
}

/// Evolves each matrix unit `|i><j|` of the logical span through `model` for
/// `t_gate` and projects the result back onto the span.
///
/// `logical` has the four logical states as columns in the model basis.
pub fn process_channel(
    model: &LindbladModel,
    logical: &Mat<c64>,
    t_gate: f64,
    opts: &SolverOptions,
) -> Result<Channel> {
    if logical.ncols() != D || logical.nrows() != model.dim() {
        return Err(Error::invalid("logical states do not match the model dimension"));
    }
    if !(t_gate >= 0.0 && t_gate.is_finite()) {
        return Err(Error::invalid(format!("gate time must be non-negative, got {t_gate}")));
    }
    let outputs = (0..D * D)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / D, ij % D);
            let m = model.dim();
            let rho0 = Mat::from_fn(m, m, |a, b| logical[(a, i)] * logical[(b, j)].conj());
            let tr = mesolve(model, &rho0, &[t_gate], opts)?;
            Ok(logical.adjoint() * &tr.states[0] * logical)
        })
        .collect::<Result<Vec<_>>>()?;
    Channel::new(outputs)
}

#[derive(Clone, Debug)]
pub struct PhaseCompensation {
    pub theta_a: f64,
    pub theta_b: f64,
    pub fidelity: f64,
    pub uncompensated: f64,
    pub channel: Channel,
}

struct CompensationCost<'a> {
    channel: &'a Channel,
    target: &'a Mat<c64>,
}

impl CostFunction for CompensationCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(-average_gate_fidelity(
            &self.channel.followed_by(&rz_pair(p[0], p[1])),
            self.target,
        ))
    }
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Maximizes the fidelity over `Rz(theta_a) ⊗ Rz(theta_b)` applied after the
/// channel: a uniform grid over both angles, then a Nelder–Mead polish.
pub fn optimize_phase_compensation(channel: &Channel, target: &Mat<c64>) -> Result<PhaseCompensation> {
    let cost = CompensationCost { channel, target };
    let eval = |a: f64, b: f64| -cost.cost(&vec![a, b]).unwrap();
    let uncompensated = average_gate_fidelity(channel, target);
    let step = 2.0 * PI / GRID as f64;
    let mut best = (uncompensated, 0.0, 0.0);
    for ia in 0..GRID {
        for ib in 0..GRID {
            let (a, b) = (-PI + step * ia as f64, -PI + step * ib as f64);
            let f = eval(a, b);
            if f > best.0 {
                best = (f, a, b);
            }
        }
    }
    let (a0, b0) = (best.1, best.2);
    let simplex = vec![vec![a0, b0], vec![a0 + 0.2 * step, b0], vec![a0, b0 + 0.2 * step]];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-15)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let res = Executor::new(CompensationCost { channel, target }, solver)
        .configure(|s| s.max_iters(2000))
        .run()
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let p = res.state.best_param.clone().unwrap_or_else(|| vec![a0, b0]);
    let (mut ta, mut tb) = (p[0], p[1]);
    if eval(ta, tb) < best.0 {
        ta = a0;
        tb = b0;
    }
    let (ta, tb) = (wrap(ta), wrap(tb));
    let compensated = channel.followed_by(&rz_pair(ta, tb));
    Ok(PhaseCompensation {
        theta_a: ta,
        theta_b: tb,
        fidelity: average_gate_fidelity(&compensated, target),
        uncompensated,
        channel: compensated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_iswap_squared_is_iswap() {
        let u = ideal_sqrt_iswap();
        let u2 = &u * &u;
        assert!((u2[(1, 2)] - c64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(u2[(1, 1)].norm() < 1e-15);
        let uu = u.adjoint() * &u;
        for i in 0..D {
            for j in 0..D {
                let t = if i == j { 1.0 } else { 0.0 };
                assert!((uu[(i, j)] - c64::new(t, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn fidelity_reference_values() {
        let u = ideal_sqrt_iswap();
        assert!((average_gate_fidelity(&Channel::from_unitary(&u), &u) - 1.0).abs() < 1e-14);
        let expected = ((2.0 + 2f64.sqrt()).powi(2) + 4.0) / 20.0;
        assert!((average_gate_fidelity(&Channel::identity(), &u) - expected).abs() < 1e-14);
        // rho -> Tr(rho) I/d
        let outputs = (0..16)
            .map(|ij| {
                if ij / 4 == ij % 4 {
                    Mat::from_fn(4, 4, |a, b| c64::new(if a == b { 0.25 } else { 0.0 }, 0.0))
                } else {
                    Mat::zeros(4, 4)
                }
            })
            .collect();
        let dep = Channel::new(outputs).unwrap();
        assert!((average_gate_fidelity(&dep, &u) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn global_phase_of_target_is_irrelevant() {
        let u = ideal_sqrt_iswap();
        let v = Mat::from_fn(4, 4, |a, b| u[(a, b)] * c64::from_polar(1.0, 0.7));
        let ch = Channel::from_unitary(&rz_pair(0.1, 0.2)).followed_by(&u);
        assert!((average_gate_fidelity(&ch, &u) - average_gate_fidelity(&ch, &v)).abs() < 1e-14);
    }

    #[test]
    fn recovers_known_z_rotations() {
        let u = ideal_sqrt_iswap();
        let ch = Channel::from_unitary(&(rz_pair(0.3, -0.2) * &u));
        let pc = optimize_phase_compensation(&ch, &u).unwrap();
        assert!((pc.theta_a + 0.3).abs() < 1e-4, "{}", pc.theta_a);
        assert!((pc.theta_b - 0.2).abs() < 1e-4, "{}", pc.theta_b);
        assert!((pc.fidelity - 1.0).abs() < 1e-9);
        let ideal = optimize_phase_compensation(&Channel::from_unitary(&u), &u).unwrap();
        assert!(ideal.theta_a.abs() < 1e-6 && ideal.theta_b.abs() < 1e-6);
    }
}
