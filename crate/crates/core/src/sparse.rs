use num_complex::Complex64;

use crate::error::{KgError, Result};

/// Compressed sparse row matrix over the complex numbers. Column indices are
/// strictly increasing within each row and stored values are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// A diagonal matrix from its entries; exact zeros are dropped.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let triplets: Vec<(usize, usize, Complex64)> = entries
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, v))
            .collect();
        Self::from_triplets(n, n, triplets)
    }

    /// Builds from (row, col, value) triplets, summing duplicates and
    /// dropping exact zeros.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut i = 0;
        while i < triplets.len() {
            let (r, c, mut v) = triplets[i];
            debug_assert!(r < nrows && c < ncols);
            i += 1;
            while i < triplets.len() && triplets[i].0 == r && triplets[i].1 == c {
                v += triplets[i].2;
                i += 1;
            }
            if v != Complex64::ZERO {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseMatrix { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        (0..self.nrows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let triplets = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (r, c, v * s))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(KgError::Dimension(format!(
                "add: {}x{} vs {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut triplets = self.triplets();
        triplets.extend(other.triplets());
        Ok(Self::from_triplets(self.nrows, self.ncols, triplets))
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(KgError::Dimension(format!(
                "mul: {}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut triplets = Vec::new();
        for r in 0..self.nrows {
            let mut acc: std::collections::BTreeMap<usize, Complex64> = Default::default();
            for (m, a) in self.row(r) {
                for (c, b) in other.row(m) {
                    *acc.entry(c).or_insert(Complex64::ZERO) += a * b;
                }
            }
            triplets.extend(acc.into_iter().map(|(c, v)| (r, c, v)));
        }
        Ok(Self::from_triplets(self.nrows, other.ncols, triplets))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let triplets = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect();
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    pub fn kron(&self, other: &SparseMatrix) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (ra, ca, va) in self.triplets() {
            for (rb, cb, vb) in other.triplets() {
                triplets.push((ra * other.nrows + rb, ca * other.ncols + cb, va * vb));
            }
        }
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, triplets)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.ncols);
        let mut y = vec![Complex64::ZERO; self.nrows];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                y[r] += v * x[c];
            }
        }
        y
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        let mut y = vec![Complex64::ZERO; self.nrows];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                if c == j {
                    y[r] = v;
                }
            }
        }
        y
    }

    /// Conjugation `p * self * p` by a permutation matrix `p` given as the
    /// image map (`perm[i]` = image of index `i`). Requires a square matrix.
    pub fn permute(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(self.nrows, self.ncols);
        let triplets = self
            .triplets()
            .into_iter()
            .map(|(r, c, v)| (perm[r], perm[c], v))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::ZERO; self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }
}
