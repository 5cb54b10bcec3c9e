//! Dormand–Prince 5(4) integration of complex linear systems.

use faer::c64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (equal to the last row of `A`, first-same-as-last).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dy/dt = f(t, y)` from `t0` and records `y` at each of the
/// ascending `times` (all `>= t0`).
pub fn dopri5<F>(f: F, t0: f64, y0: Vec<c64>, times: &[f64], opts: &SolverOptions) -> Result<Vec<Vec<c64>>>
where
    F: Fn(f64, &[c64], &mut [c64]),
{
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
        return Err(Error::invalid(
            "output times must be ascending and not before the start time",
        ));
    }
    let n = y0.len();
    let mut y = y0;
    let mut t = t0;
    let mut k: Vec<Vec<c64>> = vec![vec![c64::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![c64::new(0.0, 0.0); n];
    let mut y5 = vec![c64::new(0.0, 0.0); n];
    f(t, &y, &mut k[0]);

    let span = times.last().map_or(0.0, |&tl| tl - t0);
    let mut h = initial_step(&y, &k[0], span, opts);
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0;
    for &target in times {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::Numerical(format!(
                    "exceeded {} integration steps at t = {t}",
                    opts.max_steps
                )));
            }
            steps += 1;
            let last = target - t <= h;
            let hs = if last { target - t } else { h };
            if hs <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { time: t });
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        if A[s][j] != 0.0 {
                            acc += kj[i] * (hs * A[s][j]);
                        }
                    }
                    tmp[i] = acc;
                }
                let (_, tail) = k.split_at_mut(s);
                f(t + C[s] * hs, &tmp, &mut tail[0]);
            }
            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut hi = c64::new(0.0, 0.0);
                let mut lo = c64::new(0.0, 0.0);
                for s in 0..7 {
                    hi += k[s][i] * B5[s];
                    lo += k[s][i] * B4[s];
                }
                y5[i] = y[i] + hi * hs;
                let e = ((hi - lo) * hs).norm();
                let sc = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
                err = err.max(e / sc);
            }
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                std::mem::swap(&mut y, &mut y5);
                k.swap(0, 6);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 && last {
                // keep the unclipped step size for the next interval
                h = h.max(hs * factor);
            } else {
                h = hs * factor;
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step(y: &[c64], dy: &[c64], span: f64, opts: &SolverOptions) -> f64 {
    let scale = |i: usize| opts.atol + opts.rtol * y[i].norm();
    let d0 = (0..y.len()).map(|i| y[i].norm() / scale(i)).fold(0.0, f64::max);
    let d1 = (0..y.len()).map(|i| dy[i].norm() / scale(i)).fold(0.0, f64::max);
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    if span > 0.0 {
        h.min(span)
    } else {
        h
    }
}
