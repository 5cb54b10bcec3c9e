use faer::{c64, Mat};

use super::decoherence::RatedChannel;
use super::integrate::{dopri5, SolverOptions};
use crate::bus::ChannelKind;
use crate::error::{Error, Result};
use crate::spectral::Spectrum;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
/// Transitions between levels closer than this are not relaxation channels.
const DEGENERATE_GAP: f64 = 1e-12;

/// Jump operator in the basis of a [`LindbladModel`].
#[derive(Clone, Debug)]
pub enum Jump {
    /// `amp |to><from|`
    RankOne {
        to: usize,
        from: usize,
        amp: c64,
    },
    /// `sum_k d_k |k><k|`
    Diagonal(Vec<c64>),
    Dense(Mat<c64>),
}

/// `drho/dt = -i[H, rho] + sum_j rate_j (L_j rho L_j^dag - {L_j^dag L_j, rho}/2)`
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: Mat<c64>,
    jumps: Vec<(Jump, f64)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Mat<c64>, jumps: Vec<(Jump, f64)>) -> Result<Self> {
        let m = hamiltonian.nrows();
        if hamiltonian.ncols() != m {
            return Err(Error::invalid("Hamiltonian must be square"));
        }
        for (j, rate) in &jumps {
            if !(rate.is_finite() && *rate >= 0.0) {
                return Err(Error::invalid(format!("jump rate must be non-negative, got {rate}")));
            }
            let ok = match j {
                Jump::RankOne { to, from, .. } => *to < m && *from < m,
                Jump::Diagonal(d) => d.len() == m,
                Jump::Dense(l) => l.nrows() == m && l.ncols() == m,
            };
            if !ok {
                return Err(Error::invalid("jump operator does not match the model dimension"));
            }
        }
        Ok(Self { hamiltonian, jumps })
    }

    /// Model in the eigenbasis of `spectrum`, whose Hamiltonian is diagonal.
    pub fn dressed(spectrum: &Spectrum, jumps: Vec<(Jump, f64)>) -> Result<Self> {
        let e = spectrum.energies();
        let h = Mat::from_fn(e.len(), e.len(), |i, j| if i == j { c64::new(e[i], 0.0) } else { ZERO });
        Self::new(h, jumps)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &Mat<c64> {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(Jump, f64)] {
        &self.jumps
    }

    pub fn without_dissipation(&self) -> Self {
        Self {
            hamiltonian: self.hamiltonian.clone(),
            jumps: Vec::new(),
        }
    }
}

/// Zero-temperature jump operators between the lowest `m` eigenstates.
///
/// A relaxation channel `c` yields `<j|c|k> |j><k|` for every `E_k > E_j`; a
/// dephasing channel yields its diagonal part in the eigenbasis.
pub fn dressed_jump_operators(spectrum: &Spectrum, channels: &[RatedChannel], m: usize) -> Result<Vec<(Jump, f64)>> {
    if m < 4 {
        return Err(Error::invalid(format!(
            "truncation M = {m} cannot hold a two-qubit computational subspace"
        )));
    }
    if m > spectrum.len() {
        return Err(Error::invalid(format!(
            "truncation M = {m} exceeds the {} computed eigenstates",
            spectrum.len()
        )));
    }
    let spec = spectrum.truncated(m)?;
    let e = spec.energies();
    let mut jumps = Vec::new();
    for ch in channels.iter().filter(|c| c.rate > 0.0) {
        let me = spec.matrix_elements(&ch.operator);
        match ch.kind {
            ChannelKind::Relaxation => {
                for k in 0..m {
                    for j in 0..m {
                        if e[k] - e[j] > DEGENERATE_GAP && me[(j, k)].norm() > 0.0 {
                            jumps.push((
                                Jump::RankOne {
                                    to: j,
                                    from: k,
                                    amp: me[(j, k)],
                                },
                                ch.rate,
                            ));
                        }
                    }
                }
            }
            ChannelKind::Dephasing => {
                jumps.push((Jump::Diagonal((0..m).map(|k| me[(k, k)]).collect()), ch.rate));
            }
        }
    }
    Ok(jumps)
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Mat<c64>>,
}

impl Trajectory {
    pub fn trace(&self, i: usize) -> c64 {
        let r = &self.states[i];
        (0..r.nrows()).map(|k| r[(k, k)]).sum()
    }

    /// Largest `|rho - rho^dag|` entry over all recorded states.
    pub fn hermiticity_error(&self) -> f64 {
        self.states
            .iter()
            .map(|r| {
                let mut e: f64 = 0.0;
                for i in 0..r.nrows() {
                    for j in 0..r.ncols() {
                        e = e.max((r[(i, j)] - r[(j, i)].conj()).norm());
                    }
                }
                e
            })
            .fold(0.0, f64::max)
    }

    /// Most negative eigenvalue over all recorded states (0 if none).
    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|r| {
                let n = r.nrows();
                let h = Mat::<c64>::from_fn(n, n, |i, j| (r[(i, j)] + r[(j, i)].conj()) * 0.5);
                h.self_adjoint_eigenvalues(faer::Side::Lower)
                    .map(|v| v.into_iter().fold(f64::INFINITY, f64::min))
                    .unwrap_or(f64::NAN)
            })
            .fold(0.0, f64::min)
    }
}

/// The dissipator split by structure: population feeding from rank-one jumps,
/// an elementwise factor on every entry from rank-one and diagonal jumps, and
/// the remaining dense jumps.
struct Dissipator {
    feed: Vec<(usize, usize, f64)>,
    coefficient: Mat<c64>,
    dense: Vec<(Mat<c64>, Mat<c64>, f64)>,
}

impl Dissipator {
    fn new(model: &LindbladModel) -> Self {
        let m = model.dim();
        let mut out = vec![0.0; m];
        let mut feed = Vec::new();
        let mut coefficient = Mat::<c64>::zeros(m, m);
        let mut dense = Vec::new();
        for (jump, rate) in &model.jumps {
            match jump {
                Jump::RankOne { to, from, amp } => {
                    let r = rate * amp.norm_sqr();
                    feed.push((*to, *from, r));
                    out[*from] += r;
                }
                Jump::Diagonal(d) => {
                    for a in 0..m {
                        for b in 0..m {
                            coefficient[(a, b)] +=
                                (d[a] * d[b].conj() - c64::new(0.5 * (d[a].norm_sqr() + d[b].norm_sqr()), 0.0)) * *rate;
                        }
                    }
                }
                Jump::Dense(l) => {
                    let ldl = l.adjoint() * l;
                    dense.push((l.clone(), ldl, *rate));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                coefficient[(a, b)] -= c64::new(0.5 * (out[a] + out[b]), 0.0);
            }
        }
        Self {
            feed,
            coefficient,
            dense,
        }
    }

    /// `drho += D(rho)` on column-major flattened matrices.
    fn apply(&self, m: usize, rho: &[c64], drho: &mut [c64]) {
        for b in 0..m {
            for a in 0..m {
                drho[a + b * m] += self.coefficient[(a, b)] * rho[a + b * m];
            }
        }
        for &(to, from, r) in &self.feed {
            drho[to + to * m] += rho[from + from * m] * r;
        }
        if !self.dense.is_empty() {
            let rm = Mat::<c64>::from_fn(m, m, |a, b| rho[a + b * m]);
            for (l, ldl, rate) in &self.dense {
                let t = l * &rm * l.adjoint();
                let s = ldl * &rm + &rm * ldl;
                for b in 0..m {
                    for a in 0..m {
                        drho[a + b * m] += (t[(a, b)] - s[(a, b)] * 0.5) * *rate;
                    }
                }
            }
        }
    }
}

fn flatten(r: &Mat<c64>) -> Vec<c64> {
    let m = r.nrows();
    (0..m * m).map(|i| r[(i % m, i / m)]).collect()
}

fn unflatten(m: usize, v: &[c64]) -> Mat<c64> {
    Mat::from_fn(m, m, |a, b| v[a + b * m])
}

/// Integrates the master equation with adaptive Dormand–Prince steps.
///
/// When the Hamiltonian is diagonal and no dense jumps are present the
/// equation is integrated in the interaction picture, where it has no fast
/// phases, and rotated back at each output time.
pub fn mesolve(model: &LindbladModel, rho0: &Mat<c64>, times: &[f64], opts: &SolverOptions) -> Result<Trajectory> {
    let m = model.dim();
    if rho0.nrows() != m || rho0.ncols() != m {
        return Err(Error::invalid("initial state does not match the model dimension"));
    }
    let dis = Dissipator::new(model);
    let h = &model.hamiltonian;
    let diagonal_h = (0..m).all(|a| (0..m).all(|b| a == b || h[(a, b)] == ZERO));
    let states = if diagonal_h && dis.dense.is_empty() {
        let e: Vec<f64> = (0..m).map(|a| h[(a, a)].re).collect();
        let rhs = |_t: f64, y: &[c64], dy: &mut [c64]| {
            dy.iter_mut().for_each(|x| *x = ZERO);
            dis.apply(m, y, dy);
        };
        let raw = dopri5(rhs, 0.0, flatten(rho0), times, opts)?;
        raw.iter()
            .zip(times)
            .map(|(y, &t)| Mat::from_fn(m, m, |a, b| y[a + b * m] * c64::from_polar(1.0, -(e[a] - e[b]) * t)))
            .collect()
    } else {
        let rhs = |_t: f64, y: &[c64], dy: &mut [c64]| {
            let r = unflatten(m, y);
            let hr = h * &r;
            let rh = &r * h;
            for b in 0..m {
                for a in 0..m {
                    dy[a + b * m] = c64::new(0.0, -1.0) * (hr[(a, b)] - rh[(a, b)]);
                }
            }
            dis.apply(m, y, dy);
        };
        dopri5(rhs, 0.0, flatten(rho0), times, opts)?
            .iter()
            .map(|y| unflatten(m, y))
            .collect()
    };
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}
