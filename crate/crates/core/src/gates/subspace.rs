use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::ops::Ket;
use crate::spectral::Spectrum;

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

/// Dressed computational states `|00>, |01>, |10>, |11>`.
#[derive(Clone, Debug)]
pub struct LogicalSubspace {
    /// Column `c` holds logical state `c` in the eigenbasis of the spectrum.
    coefficients: Mat<c64>,
    states: Vec<Ket>,
    /// `|<reference_c|logical_c>|^2`
    overlaps: [f64; 4],
}

impl LogicalSubspace {
    pub fn coefficients(&self) -> &Mat<c64> {
        &self.coefficients
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    pub fn overlaps(&self) -> [f64; 4] {
        self.overlaps
    }

    /// Largest eigenstate index used by any logical state.
    pub fn max_index(&self) -> usize {
        let c = &self.coefficients;
        (0..c.nrows())
            .filter(|&k| (0..4).any(|j| c[(k, j)] != ZERO))
            .max()
            .unwrap_or(0)
    }

    /// Projector onto the logical span in the eigenbasis.
    pub fn projector(&self) -> Mat<c64> {
        &self.coefficients * self.coefficients.adjoint()
    }
}

fn argmax(values: impl Iterator<Item = f64>, exclude: &[usize]) -> usize {
    values
        .enumerate()
        .filter(|(k, _)| !exclude.contains(k))
        .fold((0, f64::NEG_INFINITY), |b, (k, v)| if v > b.1 { (k, v) } else { b })
        .0
}

/// Picks the dressed eigenstates matching the bare `references`
/// (`|00>, |01>, |10>, |11>` with the bus in its vacuum).
///
/// `|00>` and `|11>` are the eigenstates of largest overlap. For the
/// near-degenerate pair the two eigenstates with the largest weight on
/// span{`|01>`, `|10>`} are rotated back onto the references by the unitary
/// polar factor of their overlap matrix, which maximizes the bare overlap.
/// Phases are chosen so that each overlap is real and positive.
pub fn logical_subspace(spectrum: &Spectrum, references: &[Ket; 4]) -> Result<LogicalSubspace> {
    let n = spectrum.len();
    if n < 4 {
        return Err(Error::invalid("spectrum has fewer than four states"));
    }
    // o[c][k] = <k|ref_c>
    let o: Vec<Vec<c64>> = references.iter().map(|r| spectrum.overlaps(r)).collect();
    let mut coefficients = Mat::<c64>::zeros(n, 4);

    let i00 = argmax(o[0].iter().map(|x| x.norm()), &[]);
    let i11 = argmax(o[3].iter().map(|x| x.norm()), &[i00]);
    for (c, k) in [(0, i00), (3, i11)] {
        let v = o[c][k];
        coefficients[(k, c)] = if v.norm() > 0.0 {
            v / v.norm()
        } else {
            c64::new(1.0, 0.0)
        };
    }

    let weight = |k: usize| o[1][k].norm_sqr() + o[2][k].norm_sqr();
    let d1 = argmax((0..n).map(weight), &[i00, i11]);
    let d2 = argmax((0..n).map(weight), &[i00, i11, d1]);
    let (lo, hi) = (d1.min(d2), d1.max(d2));
    let sub = Mat::<c64>::from_fn(2, 2, |a, b| o[1 + b][[lo, hi][a]]);
    let svd = sub
        .svd()
        .map_err(|e| Error::Numerical(format!("SVD of the doublet overlap failed: {e:?}")))?;
    let polar = svd.U() * svd.V().adjoint();
    for (a, &k) in [lo, hi].iter().enumerate() {
        coefficients[(k, 1)] = polar[(a, 0)];
        coefficients[(k, 2)] = polar[(a, 1)];
    }

    let u = spectrum.vectors();
    let full = u * &coefficients;
    let states = (0..4)
        .map(|c| {
            Ket::new(
                spectrum.space().clone(),
                (0..full.nrows()).map(|i| full[(i, c)]).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut overlaps = [0.0; 4];
    for c in 0..4 {
        overlaps[c] = references[c].inner(&states[c]).norm_sqr();
    }
    let names = ["|00>", "|01>", "|10>", "|11>"];
    for c in 0..4 {
        if overlaps[c] < 0.5 {
            return Err(Error::Hybridization {
                what: format!("logical {}", names[c]),
                overlap: overlaps[c],
            });
        }
    }
    Ok(LogicalSubspace {
        coefficients,
        states,
        overlaps,
    })
}
