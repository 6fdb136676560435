use rayon::prelude::*;

use super::{index_set_elements, index_sets, LocalError, LocalSetup};
use crate::face_ring::{IdealSlice, IndexSet};
use crate::field::Field;
use crate::linalg::{rank, Matrix, SparseVec};

/// One graded piece of the complex
/// `0 → C_d → … → C_1 → C_0 = I → L → 0`, with `C_k = ⊕_{|S|=k} I_S[-k]`.
#[derive(Clone, Debug)]
pub struct ResolutionDegree<F> {
    pub degree: usize,
    /// `blocks[k]` lists the summands of `C_k` in degree `m`: the slice of
    /// `I_S` in degree `m - k` for each `S` of size `k`.
    pub blocks: Vec<Vec<IdealSlice>>,
    /// `differentials[k-1]`: matrix of `C_k → C_{k-1}` for `k = 1..=d`.
    pub differentials: Vec<Matrix<F>>,
    /// `I_m → (R/θR)_m`, each column the canonical residue of a monomial.
    pub augmentation: Matrix<F>,
    /// `dim L_m`.
    pub ell: usize,
}

impl<F: Field> ResolutionDegree<F> {
    /// `dim (C_k)_m`.
    pub fn term_dim(&self, k: usize) -> usize {
        self.blocks[k].iter().map(IdealSlice::len).sum()
    }
}

#[derive(Clone, Debug)]
pub struct ResolutionComplex<F> {
    pub d: usize,
    /// `terms[k]`: the index sets `S` with `|S| = k`, in summand order.
    pub terms: Vec<Vec<IndexSet>>,
    pub degrees: Vec<ResolutionDegree<F>>,
}

/// Builds the signed differentials degree by degree up to `m_max`. The
/// component `I_S → I_{S∖i_j}` is `(-1)^j θ_{i_j}` for `S = {i_0 < … < i_k}`.
pub fn build_resolution<F: Field>(
    setup: &LocalSetup<'_, F>,
    m_max: usize,
) -> Result<ResolutionComplex<F>, LocalError> {
    let d = setup.d();
    let terms: Vec<Vec<IndexSet>> = (0..=d).map(|k| index_sets(d, k)).collect();
    let degrees = (0..=m_max)
        .into_par_iter()
        .map(|m| build_degree(setup, &terms, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResolutionComplex { d, terms, degrees })
}

fn build_degree<F: Field>(
    setup: &LocalSetup<'_, F>,
    terms: &[Vec<IndexSet>],
    m: usize,
) -> Result<ResolutionDegree<F>, LocalError> {
    let ring = setup.ring();
    let forms = setup.lsop().forms();
    let blocks: Vec<Vec<IdealSlice>> = terms
        .iter()
        .enumerate()
        .map(|(k, sets)| {
            sets.iter()
                .map(|&s| match m.checked_sub(k) {
                    Some(deg) => setup.ideal(s, deg),
                    None => IdealSlice {
                        s,
                        degree: 0,
                        members: Vec::new(),
                    },
                })
                .collect()
        })
        .collect();

    let mut differentials = Vec::new();
    for k in 1..terms.len() {
        let source = &blocks[k];
        let target = &blocks[k - 1];
        let offsets = block_offsets(target);
        let target_dim: usize = target.iter().map(IdealSlice::len).sum();
        let mut columns: Vec<SparseVec<F>> = Vec::new();
        for slice in source {
            let elements = index_set_elements(slice.s);
            let basis = ring.basis(slice.degree);
            for &idx in &slice.members {
                let x = basis.get(idx);
                let mut col: SparseVec<F> = Vec::new();
                for (j, &i) in elements.iter().enumerate() {
                    let t_pos = target
                        .iter()
                        .position(|b| b.s == slice.s & !(1 << i))
                        .expect("target summand exists");
                    let product = ring.form_times_monomial(&forms[i], x);
                    for (r, c) in product {
                        let local = target[t_pos].members.binary_search(&r).map_err(|_| {
                            LocalError::Trap(format!(
                                "θ_{} · {:?} leaves I_S for S = {:?}",
                                i + 1,
                                x,
                                index_set_elements(target[t_pos].s)
                            ))
                        })?;
                        let c = if j % 2 == 0 { c } else { -c };
                        col.push((offsets[t_pos] + local, c));
                    }
                }
                columns.push(col);
            }
        }
        differentials.push(Matrix::from_sparse_rows(target_dim, columns).transpose());
    }

    let ideal = &blocks[0][0];
    let red = setup.reduction();
    let n_basis = ring.basis(m).len();
    let augmentation_cols: Vec<SparseVec<F>> = ideal
        .members
        .iter()
        .map(|&i| red.residue(vec![(i, F::one())], m))
        .collect();
    let augmentation = Matrix::from_sparse_rows(n_basis, augmentation_cols).transpose();
    let ell = setup.representatives(m).len();
    Ok(ResolutionDegree {
        degree: m,
        blocks,
        differentials,
        augmentation,
        ell,
    })
}

fn block_offsets(blocks: &[IdealSlice]) -> Vec<usize> {
    let mut acc = 0;
    blocks
        .iter()
        .map(|b| {
            let o = acc;
            acc += b.len();
            o
        })
        .collect()
}

/// Outcome of the exactness checks in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: usize,
    /// `[dim L_m, dim (C_0)_m, …, dim (C_d)_m]`.
    pub dims: Vec<usize>,
    /// `[rank ε, rank ∂_1, …, rank ∂_d]`.
    pub ranks: Vec<usize>,
    pub alternating_sum: i64,
    /// `(position, reason)`; position 0 is `L`, position `k + 1` is `C_k`.
    pub failures: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub degrees: Vec<DegreeCheck>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.failures.is_empty())
    }
}

/// Checks `∂∘∂ = 0`, `ε∘∂_1 = 0`, exactness at every position by ranks, and
/// the vanishing of the alternating dimension sum, in every built degree.
pub fn verify_exactness<F: Field>(res: &ResolutionComplex<F>) -> ExactnessReport {
    let degrees = res
        .degrees
        .par_iter()
        .map(|deg| check_degree(res.d, deg))
        .collect();
    ExactnessReport { degrees }
}

fn check_degree<F: Field>(d: usize, deg: &ResolutionDegree<F>) -> DegreeCheck {
    let mut failures = Vec::new();
    let term_dims: Vec<usize> = (0..=d).map(|k| deg.term_dim(k)).collect();
    let mut dims = vec![deg.ell];
    dims.extend(&term_dims);

    let mut ranks = vec![rank(&deg.augmentation)];
    ranks.extend(deg.differentials.iter().map(rank));

    // compositions
    if let Some(d1) = deg.differentials.first() {
        if !deg
            .augmentation
            .mul(d1)
            .map(|p| p.is_zero())
            .unwrap_or(false)
        {
            failures.push((1, "ε ∘ ∂_1 ≠ 0".to_string()));
        }
    }
    for k in 1..deg.differentials.len() {
        let composed = deg.differentials[k - 1].mul(&deg.differentials[k]);
        if !composed.map(|p| p.is_zero()).unwrap_or(false) {
            failures.push((k + 1, format!("∂_{k} ∘ ∂_{} ≠ 0", k + 1)));
        }
    }

    // L: ε is onto L by construction; its rank must be dim L_m
    if ranks[0] != deg.ell {
        failures.push((0, format!("rank ε = {} but dim L = {}", ranks[0], deg.ell)));
    }
    // C_k: dim C_k - rank(out of C_k) = rank(into C_k)
    for k in 0..=d {
        let outgoing = ranks[k];
        let incoming = if k < d { ranks[k + 1] } else { 0 };
        if term_dims[k] - outgoing != incoming {
            failures.push((
                k + 1,
                format!(
                    "kernel dimension {} differs from image dimension {incoming}",
                    term_dims[k] - outgoing
                ),
            ));
        }
    }

    let mut alternating_sum = deg.ell as i64;
    for (k, &x) in term_dims.iter().enumerate() {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        alternating_sum += sign * x as i64;
    }
    if alternating_sum != 0 {
        failures.push((
            0,
            format!("alternating sum of dimensions is {alternating_sum}"),
        ));
    }
    DegreeCheck {
        degree: deg.degree,
        dims,
        ranks,
        alternating_sum,
        failures,
    }
}
