//! Compressed-row complex matrices.
//!
//! The composite Hilbert spaces here reach a few thousand states while the
//! Hamiltonians carry only a handful of nonzeros per row, so everything is
//! assembled sparse and densified block-by-block only where a dense
//! factorization is needed.

use faer::{c64, Mat};

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<c64>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![c64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[c64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, c64)>) -> Self {
        let mut rows: Vec<Vec<(usize, c64)>> = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            assert!(i < dim && j < dim, "triplet ({i}, {j}) outside {dim}x{dim}");
            rows[i].push((j, v));
        }
        Self::from_rows(dim, rows)
    }

    fn from_rows(dim: usize, rows: Vec<Vec<(usize, c64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut acc = ZERO;
                while k < row.len() && row[k].0 == j {
                    acc += row[k].1;
                    k += 1;
                }
                if acc != ZERO {
                    cols.push(j);
                    vals.push(acc);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn from_dense(m: &Mat<c64>, drop_tol: f64) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let n = m.nrows();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if v.norm() > drop_tol {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, trip)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, c64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, c64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.dim, self.dim);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn scale(&self, s: c64) -> Self {
        if s == ZERO {
            return Self::zeros(self.dim);
        }
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(c64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(c64::new(-1.0, 0.0), other)
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: c64, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sparse add");
        let rows = (0..self.dim)
            .map(|i| {
                self.row(i)
                    .chain(other.row(i).map(|(j, v)| (j, alpha * v)))
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::from_rows(self.dim, rows)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sparse product");
        let n = self.dim;
        let mut acc = vec![ZERO; n];
        let mut seen = vec![false; n];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            let mut row = Vec::with_capacity(touched.len());
            for &j in &touched {
                row.push((j, acc[j]));
                acc[j] = ZERO;
                seen[j] = false;
            }
            touched.clear();
            rows.push(row);
        }
        Self::from_rows(n, rows)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.iter().map(|(i, j, v)| (j, i, v.conj())))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let n = self.dim * other.dim;
        let trip = self.iter().flat_map(|(i, j, a)| {
            other
                .iter()
                .map(move |(k, l, b)| (i * other.dim + k, j * other.dim + l, a * b))
        });
        Self::from_triplets(n, trip)
    }

    pub fn matvec(&self, x: &[c64]) -> Vec<c64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Sparse times dense, `self * b`.
    pub fn mul_dense(&self, b: &Mat<c64>) -> Mat<c64> {
        assert_eq!(b.nrows(), self.dim);
        let mut out = Mat::<c64>::zeros(self.dim, b.ncols());
        for c in 0..b.ncols() {
            for i in 0..self.dim {
                let mut s = ZERO;
                for (j, v) in self.row(i) {
                    s += v * b[(j, c)];
                }
                out[(i, c)] = s;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.vals.iter().all(|v| v.im.abs() <= tol)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.iter().all(|(i, j, v)| i == j || v.norm() <= tol)
    }

    /// Partition of the index set into classes not connected by any nonzero
    /// entry. A Hermitian matrix is block diagonal over these classes.
    pub fn connected_blocks(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, j, _) in self.iter() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; self.dim];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.dim {
            let r = find(&mut parent, i);
            if label[r] == usize::MAX {
                label[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[label[r]].push(i);
        }
        blocks
    }

    /// Dense principal submatrix on `indices` (in the given order).
    pub fn dense_block(&self, indices: &[usize]) -> Mat<c64> {
        let mut pos = vec![usize::MAX; self.dim];
        for (p, &i) in indices.iter().enumerate() {
            pos[i] = p;
        }
        let mut m = Mat::<c64>::zeros(indices.len(), indices.len());
        for (p, &i) in indices.iter().enumerate() {
            for (j, v) in self.row(i) {
                if pos[j] != usize::MAX {
                    m[(p, pos[j])] = v;
                }
            }
        }
        m
    }
}
