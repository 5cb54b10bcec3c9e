use std::sync::Arc;

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::ops::{CompositeSpace, Ket, Operator};

/// Relative anti-Hermitian part above which `diagonalize` refuses its input.
const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenpairs of a Hermitian operator, ascending in energy.
///
/// The phase of each eigenvector is fixed so that its largest component is
/// real and positive, which makes results reproducible across runs.
#[derive(Clone, Debug)]
pub struct Spectrum {
    energies: Vec<f64>,
    vectors: Mat<c64>,
    space: Arc<CompositeSpace>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Columns are the eigenvectors in the product basis.
    pub fn vectors(&self) -> MatRef<'_, c64> {
        self.vectors.as_ref()
    }

    pub fn space(&self) -> &Arc<CompositeSpace> {
        &self.space
    }

    pub fn state(&self, k: usize) -> Ket {
        let amps = (0..self.dim()).map(|i| self.vectors[(i, k)]).collect();
        Ket::new(self.space.clone(), amps).expect("eigenvector has the space dimension")
    }

    /// `<k|psi>` for every retained eigenstate.
    pub fn overlaps(&self, psi: &Ket) -> Vec<c64> {
        let a = psi.amplitudes();
        (0..self.len())
            .map(|k| (0..self.dim()).map(|i| self.vectors[(i, k)].conj() * a[i]).sum())
            .collect()
    }

    /// `<j|op|k>` over the retained eigenstates.
    pub fn matrix_elements(&self, op: &Operator) -> Mat<c64> {
        let ov = op.matrix().mul_dense(&self.vectors);
        self.vectors.adjoint() * &ov
    }

    /// The lowest `m` eigenpairs.
    pub fn truncated(&self, m: usize) -> Result<Spectrum> {
        if m > self.len() {
            return Err(Error::invalid(format!("cannot keep {m} of {} eigenstates", self.len())));
        }
        Ok(Spectrum {
            energies: self.energies[..m].to_vec(),
            vectors: self.vectors.as_ref().subcols(0, m).to_owned(),
            space: self.space.clone(),
        })
    }

    /// `max |<j|k> - delta_jk|`
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors;
        let mut err: f64 = 0.0;
        for j in 0..g.nrows() {
            for k in 0..g.ncols() {
                let target = if j == k { 1.0 } else { 0.0 };
                err = err.max((g[(j, k)] - c64::new(target, 0.0)).norm());
            }
        }
        err
    }

    /// `max_k ||H|k> - E_k|k>||`
    pub fn residual(&self, h: &Operator) -> f64 {
        let hv = h.matrix().mul_dense(&self.vectors);
        let mut worst: f64 = 0.0;
        for k in 0..self.len() {
            let r: f64 = (0..self.dim())
                .map(|i| (hv[(i, k)] - self.vectors[(i, k)] * self.energies[k]).norm_sqr())
                .sum();
            worst = worst.max(r.sqrt());
        }
        worst
    }
}

struct BlockEigen {
    indices: Vec<usize>,
    energies: Vec<f64>,
    vectors: Mat<c64>,
}

fn block_eigen(h: &Operator, indices: Vec<usize>, keep: usize) -> Result<BlockEigen> {
    let block = h.matrix().dense_block(&indices);
    let n = indices.len();
    let keep = keep.min(n);
    let fail = |e| Error::Numerical(format!("eigensolver failed on a block of size {n}: {e:?}"));
    let real = (0..n).all(|i| (0..n).all(|j| block[(i, j)].im == 0.0));
    let (energies, vectors) = if real {
        let re = Mat::<f64>::from_fn(n, n, |i, j| block[(i, j)].re);
        let evd = re.self_adjoint_eigen(Side::Lower).map_err(fail)?;
        let e: Vec<f64> = (0..keep).map(|k| evd.S()[k]).collect();
        let u = evd.U();
        (e, Mat::<c64>::from_fn(n, keep, |i, k| c64::new(u[(i, k)], 0.0)))
    } else {
        let evd = block.self_adjoint_eigen(Side::Lower).map_err(fail)?;
        let e: Vec<f64> = (0..keep).map(|k| evd.S()[k].re).collect();
        (e, evd.U().subcols(0, keep).to_owned())
    };
    Ok(BlockEigen {
        indices,
        energies,
        vectors,
    })
}

fn fix_phase(v: &mut [c64]) {
    let max = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|x| x.norm() >= max * (1.0 - 1e-9)).unwrap();
    let phase = v[pivot].conj() / v[pivot].norm();
    v.iter_mut().for_each(|x| *x *= phase);
}

/// Eigendecomposition of a Hermitian operator; `k` limits the result to the
/// lowest `k` eigenpairs.
///
/// The matrix is split into the blocks it leaves invariant (connected
/// components of its sparsity graph) and each block is solved densely.
pub fn diagonalize(h: &Operator, k: Option<usize>) -> Result<Spectrum> {
    let herm = h.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(Error::invalid(format!(
            "operator is not Hermitian (relative error {herm:.3e})"
        )));
    }
    let dim = h.dim();
    let keep = k.unwrap_or(dim).min(dim);
    let blocks = h
        .matrix()
        .connected_blocks()
        .into_iter()
        .map(|idx| block_eigen(h, idx, keep))
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<(f64, usize, usize)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, blk)| blk.energies.iter().enumerate().map(move |(j, &e)| (e, b, j)))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    order.truncate(keep);

    let mut vectors = Mat::<c64>::zeros(dim, keep);
    let mut column = vec![c64::new(0.0, 0.0); dim];
    for (col, &(_, b, j)) in order.iter().enumerate() {
        let blk = &blocks[b];
        column.iter_mut().for_each(|x| *x = c64::new(0.0, 0.0));
        for (p, &i) in blk.indices.iter().enumerate() {
            column[i] = blk.vectors[(p, j)];
        }
        fix_phase(&mut column);
        for (i, &v) in column.iter().enumerate() {
            vectors[(i, col)] = v;
        }
    }
    Ok(Spectrum {
        energies: order.iter().map(|o| o.0).collect(),
        vectors,
        space: h.space().clone(),
    })
}
