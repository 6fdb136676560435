use std::collections::HashMap;

use dashmap::DashMap;
use num_traits::{One, Zero};

use super::{ComplexError, Face, SimplicialComplex};
use crate::field::{Characteristic, Field};
use crate::linalg::{rank, Matrix};
use crate::with_field;

/// Reduced Betti numbers `(β̃_0, ..., β̃_dim)` over a field of the given
/// characteristic. The complex `{∅}` yields an empty vector (its only
/// nonzero reduced Betti number sits in degree -1).
pub fn reduced_betti(
    c: &SimplicialComplex,
    ch: Characteristic,
) -> Result<Vec<usize>, ComplexError> {
    with_field!(ch, F => Ok(betti_over::<F>(c)),
        else Err(ComplexError::Characteristic(ch.to_string())))
}

fn boundary_matrix<F: Field>(c: &SimplicialComplex, k: usize) -> Matrix<F> {
    // columns: faces with k+1 vertices; rows: faces with k vertices
    let rows = c.faces_of_size(k);
    let cols = c.faces_of_size(k + 1);
    let row_index: HashMap<&Face, usize> = rows.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let columns: Vec<Vec<(usize, F)>> = cols
        .iter()
        .map(|f| {
            f.vertices()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let sign = if i % 2 == 0 { F::one() } else { -F::one() };
                    (row_index[&f.without(v)], sign)
                })
                .collect()
        })
        .collect();
    // build transposed, then flip
    Matrix::from_sparse_rows(rows.len(), columns).transpose()
}

fn betti_over<F: Field>(c: &SimplicialComplex) -> Vec<usize> {
    let dim = c.dim();
    if dim < 0 {
        return Vec::new();
    }
    let dim = dim as usize;
    // rank of ∂ from size-(k+1) faces to size-k faces, for k = 0..=dim+1
    let ranks: Vec<usize> = (0..=dim + 1)
        .map(|k| {
            if c.faces_of_size(k + 1).is_empty() {
                0
            } else {
                rank(&boundary_matrix::<F>(c, k))
            }
        })
        .collect();
    (0..=dim)
        .map(|d| {
            let chains = c.faces_of_size(d + 1).len();
            chains - ranks[d] - ranks[d + 1]
        })
        .collect()
}

/// Trivial reduced homology in every degree, including -1.
pub fn is_acyclic(betti: &[usize], c: &SimplicialComplex) -> bool {
    !c.is_void() && betti.iter().all(Zero::is_zero)
}

/// Reduced homology of a `dim`-sphere (with `dim = -1` meaning `{∅}`).
pub fn has_sphere_homology(betti: &[usize], c: &SimplicialComplex, dim: isize) -> bool {
    if dim < 0 {
        return c.is_void();
    }
    if c.dim() != dim {
        return false;
    }
    betti.iter().enumerate().all(|(i, b)| {
        if i as isize == dim {
            b.is_one()
        } else {
            b.is_zero()
        }
    })
}

/// Memo of reduced Betti numbers keyed by complex and characteristic.
/// Safe to share between threads; lookups are atomic get-or-insert.
#[derive(Debug, Default)]
pub struct BettiCache {
    map: DashMap<(Vec<Face>, u64), Vec<usize>>,
}

impl BettiCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        c: &SimplicialComplex,
        ch: Characteristic,
    ) -> Result<Vec<usize>, ComplexError> {
        let key = (c.facets().to_vec(), ch.value());
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let betti = reduced_betti(c, ch)?;
        Ok(self.map.entry(key).or_insert(betti).clone())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
