use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use faer::{c64, Mat};

use super::space::CompositeSpace;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// Named single-subsystem operators.
///
/// Qubit conventions: level 0 is the ground state. `SigmaZ` is the textbook
/// Pauli matrix `diag(1, -1)`, so the bare qubit energy `(w/2)(|1><1| - |0><0|)`
/// is `-(w/2) SigmaZ`. `SigmaPlus = |1><0|` raises the excitation number, like
/// a creation operator. On a subsystem with more than two levels the Pauli
/// operators act on levels {0, 1} only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalOp {
    SigmaX,
    SigmaZ,
    SigmaPlus,
    SigmaMinus,
    Annihilate,
    Create,
    /// `a + a^dagger` on the truncated ladder.
    Quadrature,
    Number,
    Identity,
}

pub fn local_operator(kind: LocalOp, dim: usize) -> Result<Mat<c64>> {
    if dim < 2 {
        return Err(Error::invalid(format!("{kind:?} needs dim >= 2, got {dim}")));
    }
    let one = c64::new(1.0, 0.0);
    let mut m = Mat::<c64>::zeros(dim, dim);
    match kind {
        LocalOp::SigmaX => {
            m[(0, 1)] = one;
            m[(1, 0)] = one;
        }
        LocalOp::SigmaZ => {
            m[(0, 0)] = one;
            m[(1, 1)] = -one;
        }
        LocalOp::SigmaPlus => m[(1, 0)] = one,
        LocalOp::SigmaMinus => m[(0, 1)] = one,
        LocalOp::Annihilate | LocalOp::Create | LocalOp::Quadrature => {
            for n in 1..dim {
                let amp = c64::new((n as f64).sqrt(), 0.0);
                if kind != LocalOp::Create {
                    m[(n - 1, n)] = amp;
                }
                if kind != LocalOp::Annihilate {
                    m[(n, n - 1)] = amp;
                }
            }
        }
        LocalOp::Number => {
            for n in 0..dim {
                m[(n, n)] = c64::new(n as f64, 0.0);
            }
        }
        LocalOp::Identity => {
            for n in 0..dim {
                m[(n, n)] = one;
            }
        }
    }
    Ok(m)
}

/// A linear operator on a [`CompositeSpace`], stored sparse.
#[derive(Clone, Debug)]
pub struct Operator {
    space: Arc<CompositeSpace>,
    matrix: SparseMatrix,
}

impl Operator {
    pub fn new(space: Arc<CompositeSpace>, matrix: SparseMatrix) -> Result<Self> {
        if matrix.dim() != space.total_dim() {
            return Err(Error::invalid(format!(
                "matrix dim {} does not match space dim {}",
                matrix.dim(),
                space.total_dim()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: Arc<CompositeSpace>) -> Self {
        let matrix = SparseMatrix::zeros(space.total_dim());
        Self { space, matrix }
    }

    pub fn identity(space: Arc<CompositeSpace>) -> Self {
        let matrix = SparseMatrix::identity(space.total_dim());
        Self { space, matrix }
    }

    pub fn space(&self) -> &Arc<CompositeSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn to_dense(&self) -> Mat<c64> {
        self.matrix.to_dense()
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.matrix.get(i, j)
    }

    pub fn adjoint(&self) -> Self {
        self.with_matrix(self.matrix.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.with_matrix(self.matrix.scale(c64::new(s, 0.0)))
    }

    pub fn scale_complex(&self, s: c64) -> Self {
        self.with_matrix(self.matrix.scale(s))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.check_same_space(other);
        self.with_matrix(self.matrix.mul(&other.matrix).sub(&other.matrix.mul(&self.matrix)))
    }

    pub fn norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    /// `||A - A^dagger|| / ||A||` in Frobenius norm (0 for the zero operator).
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.matrix.sub(&self.matrix.adjoint()).frobenius_norm() / n
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(ket.dim(), self.dim());
        Ket {
            space: self.space.clone(),
            amplitudes: self.matrix.matvec(&ket.amplitudes),
        }
    }

    /// `<bra| self |ket>`
    pub fn matrix_element(&self, bra: &Ket, ket: &Ket) -> c64 {
        bra.inner(&self.apply(ket))
    }

    fn with_matrix(&self, matrix: SparseMatrix) -> Self {
        Self {
            space: self.space.clone(),
            matrix,
        }
    }

    fn check_same_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space,
            "operators live on different spaces"
        );
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        self.with_matrix(self.matrix.add(&rhs.matrix))
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        self.with_matrix(self.matrix.sub(&rhs.matrix))
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.check_same_space(rhs);
        self.with_matrix(self.matrix.mul(&rhs.matrix))
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

/// Lifts a local matrix on subsystem `index` to the composite space,
/// `I ⊗ .. ⊗ local ⊗ .. ⊗ I`.
pub fn embed(local: &Mat<c64>, index: usize, space: &Arc<CompositeSpace>) -> Result<Operator> {
    let sub = space
        .subsystems()
        .get(index)
        .ok_or_else(|| Error::invalid(format!("subsystem index {index} out of range")))?;
    let d = sub.dim();
    if local.nrows() != d || local.ncols() != d {
        return Err(Error::invalid(format!(
            "local matrix is {}x{}, subsystem '{}' has dim {d}",
            local.nrows(),
            local.ncols(),
            sub.label()
        )));
    }
    let stride = space.stride(index);
    let n = space.total_dim();
    let mut trip = Vec::new();
    for row in 0..n {
        let digit = (row / stride) % d;
        let base = row - digit * stride;
        for c in 0..d {
            let v = local[(digit, c)];
            if v != c64::new(0.0, 0.0) {
                trip.push((row, base + c * stride, v));
            }
        }
    }
    Operator::new(space.clone(), SparseMatrix::from_triplets(n, trip))
}

/// Convenience: `embed(local_operator(kind, dim_i), i, space)`.
pub fn embed_named(kind: LocalOp, index: usize, space: &Arc<CompositeSpace>) -> Result<Operator> {
    let d = space
        .subsystems()
        .get(index)
        .ok_or_else(|| Error::invalid(format!("subsystem index {index} out of range")))?
        .dim();
    embed(&local_operator(kind, d)?, index, space)
}

/// State vector on a composite space.
#[derive(Clone, Debug)]
pub struct Ket {
    space: Arc<CompositeSpace>,
    amplitudes: Vec<c64>,
}

impl Ket {
    pub fn new(space: Arc<CompositeSpace>, amplitudes: Vec<c64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::invalid(format!(
                "{} amplitudes for a space of dim {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> &Arc<CompositeSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Ket) -> c64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    pub fn scaled(mut self, s: c64) -> Self {
        self.amplitudes.iter_mut().for_each(|a| *a *= s);
        self
    }

    pub fn add(&self, other: &Ket) -> Ket {
        assert_eq!(self.dim(), other.dim());
        Ket {
            space: self.space.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Tensor product `self ⊗ other` on the concatenated space.
    pub fn tensor(&self, other: &Ket, space: Arc<CompositeSpace>) -> Result<Ket> {
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket::new(space, amps)
    }
}

/// Product basis state with the given occupation per subsystem.
pub fn basis_ket(space: &Arc<CompositeSpace>, occupation: &[usize]) -> Result<Ket> {
    let idx = space.index_of(occupation)?;
    let mut amps = vec![c64::new(0.0, 0.0); space.total_dim()];
    amps[idx] = c64::new(1.0, 0.0);
    Ket::new(space.clone(), amps)
}
