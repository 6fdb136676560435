//! Exact linear algebra: matrices over a [`Field`], rank, kernels, images,
//! linear solves and intersections of row spaces.
//!
//! Vectors are sparse, sorted `(column, value)` lists without explicit zeros.
//! A matrix represents the map `x -> M x`; "row space" operations treat the
//! rows of a matrix as a list of vectors.

mod echelon;
mod fraction_free;

pub use echelon::Echelon;
pub use fraction_free::{fraction_free_rank, modular_rank};

use thiserror::Error;

use crate::field::Field;

/// Below this fraction of nonzero entries a matrix is stored row-sparse.
pub const SPARSE_DENSITY_THRESHOLD: f64 = 1.0 / 8.0;

pub type SparseVec<F> = Vec<(usize, F)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Clone, Debug, PartialEq)]
enum Storage<F> {
    Dense(Vec<F>),
    Sparse(Vec<SparseVec<F>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    nrows: usize,
    ncols: usize,
    storage: Storage<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            storage: Storage::Sparse(vec![Vec::new(); nrows]),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sparse_rows(n, (0..n).map(|i| vec![(i, F::one())]).collect())
    }

    /// Builds a matrix from sparse rows. Entries may be unsorted and may
    /// repeat a column (they are summed); zeros are dropped.
    pub fn from_sparse_rows(ncols: usize, rows: Vec<SparseVec<F>>) -> Self {
        let nrows = rows.len();
        let rows: Vec<SparseVec<F>> = rows.into_iter().map(normalize).collect();
        for r in &rows {
            if let Some((c, _)) = r.last() {
                assert!(*c < ncols, "column index {c} out of range {ncols}");
            }
        }
        Matrix {
            nrows,
            ncols,
            storage: Storage::Sparse(rows),
        }
        .with_chosen_storage()
    }

    pub fn from_dense_rows(ncols: usize, rows: Vec<Vec<F>>) -> Self {
        let sparse = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged dense row");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(ncols, sparse)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_dense_rows(
            ncols,
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
    }

    fn with_chosen_storage(self) -> Self {
        let cells = self.nrows * self.ncols;
        let dense_wanted =
            cells > 0 && (self.nnz() as f64) >= SPARSE_DENSITY_THRESHOLD * cells as f64;
        match (&self.storage, dense_wanted) {
            (Storage::Sparse(rows), true) => {
                let mut data = vec![F::zero(); cells];
                for (i, r) in rows.iter().enumerate() {
                    for (c, v) in r {
                        data[i * self.ncols + c] = v.clone();
                    }
                }
                Matrix {
                    storage: Storage::Dense(data),
                    ..self
                }
            }
            _ => self,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse(rows) => rows.iter().map(Vec::len).sum(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        match &self.storage {
            Storage::Dense(d) => d[r * self.ncols + c].clone(),
            Storage::Sparse(rows) => rows[r]
                .binary_search_by_key(&c, |(k, _)| *k)
                .map(|i| rows[r][i].1.clone())
                .unwrap_or_else(|_| F::zero()),
        }
    }

    pub fn row(&self, r: usize) -> SparseVec<F> {
        match &self.storage {
            Storage::Dense(d) => d[r * self.ncols..(r + 1) * self.ncols]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
            Storage::Sparse(rows) => rows[r].clone(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = SparseVec<F>> + '_ {
        (0..self.nrows).map(move |r| self.row(r))
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        (0..self.nrows)
            .map(|r| (0..self.ncols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseVec<F>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows().enumerate() {
            for (c, v) in row {
                cols[c].push((r, v));
            }
        }
        Self::from_sparse_rows(self.nrows, cols)
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.ncols != rhs.nrows {
            return Err(LinalgError::DimensionMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let rhs_rows: Vec<SparseVec<F>> = rhs.rows().collect();
        let rows = self
            .rows()
            .map(|row| {
                let mut acc: SparseVec<F> = Vec::new();
                for (k, a) in row {
                    for (c, b) in &rhs_rows[k] {
                        acc.push((*c, a.clone() * b.clone()));
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_sparse_rows(rhs.ncols, rows))
    }

    pub fn mul_vec(&self, x: &[F]) -> Result<Vec<F>, LinalgError> {
        if x.len() != self.ncols {
            return Err(LinalgError::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.into_iter()
                    .fold(F::zero(), |acc, (c, v)| acc + v * x[c].clone())
            })
            .collect())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        if self.ncols != other.ncols {
            return Err(LinalgError::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self::from_sparse_rows(
            self.ncols,
            self.rows().chain(other.rows()).collect(),
        ))
    }
}

/// Sorts by column, merges duplicates and drops zeros.
pub fn normalize<F: Field>(mut v: SparseVec<F>) -> SparseVec<F> {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx = lx.clone() + x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a * x + b * y` for sorted sparse vectors.
pub fn combine<F: Field>(a: &F, x: &[(usize, F)], b: &F, y: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some((cx, _)), Some((cy, _))) => cx.cmp(cy),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        let (c, v) = match take {
            std::cmp::Ordering::Less => {
                i += 1;
                (x[i - 1].0, a.clone() * x[i - 1].1.clone())
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (y[j - 1].0, b.clone() * y[j - 1].1.clone())
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (
                    x[i - 1].0,
                    a.clone() * x[i - 1].1.clone() + b.clone() * y[j - 1].1.clone(),
                )
            }
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

pub fn scale<F: Field>(a: &F, x: &[(usize, F)]) -> SparseVec<F> {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(c, v)| (*c, a.clone() * v.clone())).collect()
}

/// Exact rank, using the field's preferred elimination.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    F::rank_of(m)
}

/// Rank by plain sparse elimination with deterministic pivoting.
pub fn echelon_rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut e = Echelon::new(m.ncols());
    for row in m.rows() {
        e.insert(row);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}`, one basis vector per row of the result.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut e = Echelon::new(m.ncols());
    for row in m.rows() {
        e.insert(row);
    }
    let (rows, pivots) = e.into_reduced();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..m.ncols()).filter(|c| !pivot_set.contains(c)) {
        let mut v: SparseVec<F> = vec![(free, F::one())];
        for (row, &p) in rows.iter().zip(&pivots) {
            if let Ok(i) = row.binary_search_by_key(&free, |(c, _)| *c) {
                v.push((p, -row[i].1.clone()));
            }
        }
        basis.push(v);
    }
    Matrix::from_sparse_rows(m.ncols(), basis)
}

/// Basis of the column space of `M`, one basis vector per row of the result.
pub fn image_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    row_space_basis(&m.transpose())
}

/// Echelon basis of the row space.
pub fn row_space_basis<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut e = Echelon::new(m.ncols());
    for row in m.rows() {
        e.insert(row);
    }
    Matrix::from_sparse_rows(m.ncols(), e.into_rows())
}

/// Some `x` with `M x = b`, or `None` when the system is inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
    if b.len() != m.nrows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve",
            left: m.shape(),
            right: (b.len(), 1),
        });
    }
    // Row-reduce the augmented matrix [M | b].
    let n = m.ncols();
    let mut e = Echelon::new(n + 1);
    for (r, row) in m.rows().enumerate() {
        let mut aug = row;
        if !b[r].is_zero() {
            aug.push((n, b[r].clone()));
        }
        e.insert(aug);
    }
    let (rows, pivots) = e.into_reduced();
    if pivots.contains(&n) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[p] = v.clone();
            }
        }
    }
    Ok(Some(x))
}

/// Basis of `rowspace(A) ∩ rowspace(B)`.
pub fn intersect_rowspaces<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
) -> Result<Matrix<F>, LinalgError> {
    if a.ncols() != b.ncols() {
        return Err(LinalgError::DimensionMismatch {
            op: "intersect_rowspaces",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let a = row_space_basis(a);
    let b = row_space_basis(b);
    // (y, z) with y A + z B = 0 gives y A in the intersection.
    let stacked = a.vstack(&b)?;
    let relations = kernel_basis(&stacked.transpose());
    let ra = a.nrows();
    let a_rows: Vec<SparseVec<F>> = a.rows().collect();
    let vectors: Vec<SparseVec<F>> = relations
        .rows()
        .map(|rel| {
            let mut acc: SparseVec<F> = Vec::new();
            for (i, coeff) in rel.into_iter().filter(|(i, _)| *i < ra) {
                acc = combine(&F::one(), &acc, &coeff, &a_rows[i]);
            }
            acc
        })
        .collect();
    Ok(row_space_basis(&Matrix::from_sparse_rows(
        a.ncols(),
        vectors,
    )))
}
