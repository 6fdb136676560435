use super::{combine, SparseVec};
use crate::field::Field;

/// Incrementally built row-echelon basis of a subspace of `k^ncols`.
///
/// Each stored row has leading coefficient 1 at a column no other stored row
/// leads with. Rows are accepted in insertion order, so the pivot structure
/// depends only on the sequence of inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    /// pivot column -> index into `rows`
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Canonical residual of `v` modulo the stored subspace: the unique
    /// vector congruent to `v` that vanishes on every pivot column.
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        let mut v = v;
        let mut pos = 0;
        while pos < v.len() {
            let (c, ref x) = v[pos];
            match self.pivot_row[c] {
                Some(r) => {
                    let factor = -x.clone();
                    v = combine(&F::one(), &v, &factor, &self.rows[r]);
                    // entries before `c` are untouched and `c` is now zero
                }
                None => pos += 1,
            }
        }
        v
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead_inv = r[0].1.inv();
        let row: SparseVec<F> = if lead_inv.is_one() {
            r
        } else {
            r.into_iter()
                .map(|(c, x)| (c, x * lead_inv.clone()))
                .collect()
        };
        debug_assert!(row.iter().all(|(_, x)| !x.is_zero()));
        self.pivot_row[row[0].0] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn into_rows(self) -> Vec<SparseVec<F>> {
        self.rows
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    /// Reduced row-echelon form, rows sorted by pivot column, together with
    /// the pivot columns.
    pub fn into_reduced(self) -> (Vec<SparseVec<F>>, Vec<usize>) {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let mut pivot_index = vec![None; self.ncols];
        for (i, &p) in pivots.iter().enumerate() {
            pivot_index[p] = Some(i);
        }
        // clear entries above pivots, last pivot first
        for i in (0..rows.len()).rev() {
            let p = pivots[i];
            for j in 0..i {
                if let Ok(k) = rows[j].binary_search_by_key(&p, |(c, _)| *c) {
                    let factor = -rows[j][k].1.clone();
                    let reduced = combine(&F::one(), &rows[j], &factor, &rows[i]);
                    rows[j] = reduced;
                }
            }
        }
        (rows, pivots)
    }
}
