//! Checks shared by the integration suites and the acceptance report. Each
//! returns the measured error so callers choose how to judge it.
#![allow(dead_code)]

pub mod algebra;
pub mod dynamics;

pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
