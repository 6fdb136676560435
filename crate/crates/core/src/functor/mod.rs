//! Maps `φ: L(Γ,E) → L(Γ,E')` between local face modules for `E ⊆ E'`,
//! their composition and monotonicity checks, and the combinatorial face
//! structure behind vanishing local h-vectors.

mod audit;
mod structure;

pub use audit::{
    vanishing_structure_audit, AnalysisReport, AuditCheck, Verdict, Witness, WitnessKind,
};
pub use structure::{
    face_structure, internal_edge_graph, ComponentShape, EdgeComponent, FaceStructure,
    InternalEdgeGraph, MAX_PARTITION_FACE,
};

use dashmap::DashMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::face_ring::{nonzero_coefficient, Frame, LinearForm, LsopConfig, Monomial, SpecialLsop};
use crate::field::Field;
use crate::linalg::{combine, kernel_basis, solve, Echelon, Matrix, SparseVec};
use crate::local::{LocalError, LocalSetup};

/// Draws allowed per missing basis vector when extending `ζ`.
const EXTENSION_DRAWS: usize = 64;

/// `φ` in one degree, in the bases of `L_m` and `L'_m` given by monomial
/// representatives.
#[derive(Clone, Debug)]
pub struct MapDegree<F> {
    pub degree: usize,
    pub source_reps: Vec<Monomial>,
    pub target_reps: Vec<Monomial>,
    /// `ℓ'_m × ℓ_m`.
    pub matrix: Matrix<F>,
}

/// The map of graded pieces induced by `E ⊆ E'` for a fixed special
/// l.s.o.p. `θ` of `k[lk(E)]`.
pub struct InducedMap<'a, F> {
    e: Face,
    target: LocalSetup<'a, F>,
    star: SimplicialComplex,
    restricted: Vec<LinearForm<F>>,
    zeta_sources: Vec<usize>,
    substitutions: Vec<(VertexId, LinearForm<F>)>,
    degrees: Vec<MapDegree<F>>,
    memo: DashMap<Monomial, SparseVec<F>>,
}

impl<'a, F: Field> InducedMap<'a, F> {
    pub fn e(&self) -> &Face {
        &self.e
    }

    pub fn e_prime(&self) -> &Face {
        self.target.e()
    }

    /// `L(Γ,E')` with its special l.s.o.p. `ζ`.
    pub fn target(&self) -> &LocalSetup<'a, F> {
        &self.target
    }

    /// Closed star of `E' ∖ E` in `lk(E)`.
    pub fn star(&self) -> &SimplicialComplex {
        &self.star
    }

    /// `θ'_i = θ_i|_{Star(E'∖E)}`.
    pub fn restricted_forms(&self) -> &[LinearForm<F>] {
        &self.restricted
    }

    pub fn zeta(&self) -> &[LinearForm<F>] {
        self.target.lsop().forms()
    }

    /// For `k < b'`, `ζ_{k+1} = θ_{i+1}|_{lk(E')}` with `i = zeta_sources[k]`.
    pub fn zeta_sources(&self) -> &[usize] {
        &self.zeta_sources
    }

    /// `φ(x^u)` for `u ∈ E' ∖ E`, a form supported on `lk(E')`.
    pub fn substitutions(&self) -> &[(VertexId, LinearForm<F>)] {
        &self.substitutions
    }

    pub fn degrees(&self) -> &[MapDegree<F>] {
        &self.degrees
    }

    /// Image of a variable of `k[lk(E)]` as a form on `lk(E')`.
    fn variable_image(&self, v: VertexId) -> LinearForm<F> {
        if let Some((_, r)) = self.substitutions.iter().find(|(u, _)| *u == v) {
            r.clone()
        } else if self.target.link().vertices().binary_search(&v).is_ok() {
            LinearForm::var(v)
        } else {
            LinearForm::zero()
        }
    }

    /// Residue of the product of the images of `vars` in `(R'/ζR')_m`,
    /// ignoring whether `vars` spans a face.
    fn product_residue(&self, vars: &Monomial) -> SparseVec<F> {
        if let Some(v) = self.memo.get(vars) {
            return v.clone();
        }
        let out = match vars.split_last() {
            None => vec![(0, F::one())],
            Some((rest, v)) => {
                let p = self.product_residue(&rest);
                let ring = self.target.ring();
                let prod = ring.form_times(&self.variable_image(v), &p, rest.degree());
                self.target.reduction().residue(prod, vars.degree())
            }
        };
        self.memo.insert(vars.clone(), out.clone());
        out
    }

    /// `φ(x^α)` as a canonical residue in `(R'/ζR')_m`.
    pub fn image(&self, x: &Monomial) -> SparseVec<F> {
        if !self.star.contains(&x.support()) {
            return Vec::new();
        }
        self.product_residue(x)
    }

    /// `φ` of a linear form of `k[lk(E)]`.
    pub fn image_of_form(&self, theta: &LinearForm<F>) -> SparseVec<F> {
        let mut acc = Vec::new();
        for (v, c) in theta.terms() {
            acc = combine(&F::one(), &acc, c, &self.image(&Monomial::var(*v)));
        }
        acc
    }

    /// `φ` of an element of `k[lk(E)]_m` given over the degree-`m` basis.
    pub fn apply(
        &self,
        source_ring: &crate::face_ring::FaceRing,
        p: &[(usize, F)],
        m: usize,
    ) -> SparseVec<F> {
        let basis = source_ring.basis(m);
        let mut acc = Vec::new();
        for (i, c) in p {
            acc = combine(&F::one(), &acc, c, &self.image(basis.get(*i)));
        }
        acc
    }
}

/// Builds `φ: L(Γ,E) → L(Γ,E')` up to degree `m_max`.
///
/// `ζ` starts with `θ_i|_{lk(E')}` for the directions `v_i ∈ σ(E')^c` in the
/// order of `V`, and is extended to a basis of
/// `k[lk(E')]_1 ∩ (θ'_1, …, θ'_d)` by random combinations drawn from `seed`.
pub fn induced_map<'a, F: Field>(
    source: &LocalSetup<'a, F>,
    e_prime: &Face,
    seed: u64,
    m_max: usize,
) -> Result<InducedMap<'a, F>, LocalError> {
    let t = source.triangulation();
    let e = source.e().clone();
    if !e.is_subset(e_prime) {
        return Err(LocalError::Precondition(format!(
            "{e:?} is not contained in {e_prime:?}"
        )));
    }
    if !t.complex().contains(e_prime) {
        return Err(LocalError::Precondition(format!(
            "{e_prime:?} is not a face"
        )));
    }
    let diff = e_prime.difference(&e);
    let star = source.link().closed_star(&diff)?;
    let target_link = t.complex().link(e_prime)?;
    let target_vertices = target_link.vertices().to_vec();
    let restricted = source.lsop().restricted(star.vertices());
    let d = restricted.len();
    let frame = source.frame();
    let target_frame = Frame::new(t, e_prime);

    // ζ_k = θ_i|_{lk(E')} for the surviving directions
    let mut zeta_sources = Vec::new();
    for v in target_frame.directions() {
        let i = frame.index_of_direction(v).ok_or_else(|| {
            LocalError::Trap(format!("direction {v} of E' is not a direction of E"))
        })?;
        if !restricted[i]
            .support()
            .iter()
            .all(|w| target_vertices.binary_search(w).is_ok())
        {
            return Err(LocalError::Trap(format!(
                "θ'_{} is not supported on lk(E')",
                i + 1
            )));
        }
        zeta_sources.push(i);
    }

    // coefficients of θ' on the vertices of E' ∖ E
    let on_diff = Matrix::from_dense_rows(
        d,
        diff.iter()
            .map(|u| restricted.iter().map(|f| f.coeff(u)).collect())
            .collect(),
    );
    let combos = kernel_basis(&on_diff);
    if combos.nrows() + diff.len() != d {
        return Err(LocalError::Trap(
            "θ' does not restrict to an l.s.o.p. on the star".into(),
        ));
    }
    let combine_forms = |c: &[(usize, F)]| -> LinearForm<F> {
        c.iter().fold(LinearForm::zero(), |acc, (i, a)| {
            acc.add(&restricted[*i].scale(a))
        })
    };
    let intersection: Vec<LinearForm<F>> = combos
        .rows()
        .map(|c| combine_forms(&c).restrict_to(&target_vertices))
        .collect();
    let d_prime = intersection.len();

    let target_ring = crate::face_ring::FaceRing::new(target_link.clone());
    let mut ech = Echelon::new(target_ring.basis(1).len());
    let mut zeta: Vec<LinearForm<F>> = Vec::with_capacity(d_prime);
    for &i in &zeta_sources {
        let z = restricted[i].restrict_to(&target_vertices);
        if !ech.insert(z.to_vector(&target_ring)) {
            return Err(LocalError::Trap(format!(
                "θ_{}|_{{lk(E')}} is dependent",
                i + 1
            )));
        }
        zeta.push(z);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0;
    while zeta.len() < d_prime {
        draws += 1;
        if draws > EXTENSION_DRAWS * d_prime {
            return Err(LocalError::Trap(
                "could not extend ζ to a basis of the intersection".into(),
            ));
        }
        let candidate = intersection.iter().fold(LinearForm::zero(), |acc, w| {
            acc.add(&w.scale(&nonzero_coefficient::<F>(
                &mut rng,
                LsopConfig::default().bound,
            )))
        });
        if ech.insert(candidate.to_vector(&target_ring)) {
            zeta.push(candidate);
        }
    }
    let lsop = SpecialLsop::from_forms(&target_frame, &target_link, zeta)
        .map_err(|err| LocalError::Trap(format!("ζ is not a special l.s.o.p.: {err}")))?;
    let target = LocalSetup::with_lsop(t, e_prime, lsop)?;

    // x^u ≡ r_u with r_u on lk(E')
    let mut substitutions = Vec::new();
    for (k, u) in diff.iter().enumerate() {
        let rhs: Vec<F> = (0..diff.len())
            .map(|j| if j == k { F::one() } else { F::zero() })
            .collect();
        let c = solve(&on_diff, &rhs)
            .expect("shapes agree")
            .ok_or_else(|| LocalError::Trap(format!("cannot isolate x^{u} modulo θ'")))?;
        let sparse: SparseVec<F> = c
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let r = LinearForm::var(u).add(&combine_forms(&sparse).scale(&-F::one()));
        if !r
            .support()
            .iter()
            .all(|w| target_vertices.binary_search(w).is_ok())
        {
            return Err(LocalError::Trap(format!(
                "φ(x^{u}) is not supported on lk(E')"
            )));
        }
        substitutions.push((u, r));
    }

    let mut map = InducedMap {
        e,
        target,
        star,
        restricted,
        zeta_sources,
        substitutions,
        degrees: Vec::new(),
        memo: DashMap::new(),
    };
    check_relations(source, &map)?;
    map.degrees = (0..=m_max)
        .map(|m| map_degree(source, &map, m))
        .collect::<Result<_, _>>()?;
    Ok(map)
}

/// Minimal non-faces of `lk(E)` and the forms `θ_i` must map to zero.
fn check_relations<F: Field>(
    source: &LocalSetup<'_, F>,
    map: &InducedMap<'_, F>,
) -> Result<(), LocalError> {
    for n in source.link().minimal_non_faces() {
        if n.iter()
            .all(|v| map.star.vertices().binary_search(&v).is_ok())
        {
            let r = map.product_residue(&Monomial::of_face(&n));
            if !r.is_empty() {
                return Err(LocalError::Trap(format!(
                    "φ does not kill the non-face {n:?}"
                )));
            }
        }
    }
    for (i, theta) in source.lsop().forms().iter().enumerate() {
        if !map.image_of_form(theta).is_empty() {
            return Err(LocalError::Trap(format!("φ(θ_{}) is nonzero", i + 1)));
        }
    }
    Ok(())
}

fn map_degree<F: Field>(
    source: &LocalSetup<'_, F>,
    map: &InducedMap<'_, F>,
    m: usize,
) -> Result<MapDegree<F>, LocalError> {
    let source_reps = source.representatives(m);
    let target = map.target();
    let target_reps = target.representatives(m);
    let ring = target.ring();
    let basis = ring.basis(m);
    let columns: Vec<SparseVec<F>> = target_reps
        .iter()
        .map(|x| target.reduction().residue(ring.monomial_vector(x), m))
        .collect();
    let reps_matrix = Matrix::from_sparse_rows(basis.len(), columns).transpose();
    let mut images = Vec::with_capacity(source_reps.len());
    for x in &source_reps {
        let y = map.image(x);
        let mut dense = vec![F::zero(); basis.len()];
        for (i, c) in y {
            dense[i] = c;
        }
        let coords = solve(&reps_matrix, &dense)
            .expect("shapes agree")
            .ok_or_else(|| LocalError::Trap(format!("φ({x:?}) is not in L(Γ,E') in degree {m}")))?;
        images.push(coords);
    }
    let matrix = Matrix::from_dense_rows(target_reps.len(), images).transpose();
    Ok(MapDegree {
        degree: m,
        source_reps,
        target_reps,
        matrix,
    })
}

/// Outcome of the monotonicity check for `σ(E) = σ(E')`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    /// Rank of `φ` in each degree.
    pub ranks: Vec<usize>,
    pub surjective: bool,
    pub dominates: bool,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.surjective && self.dominates
    }
}

/// Requires `σ(E) = σ(E')`; reports whether every degree of `φ` is onto and
/// whether `dim L(Γ,E)_m ≥ dim L(Γ,E')_m` in every computed degree.
pub fn check_monotonicity<F: Field>(
    map: &InducedMap<'_, F>,
) -> Result<MonotonicityReport, LocalError> {
    let t = map.target.triangulation();
    if t.carrier(&map.e) != t.carrier(map.e_prime()) {
        return Err(LocalError::Precondition(format!(
            "carriers differ: σ(E) = {:?}, σ(E') = {:?}",
            t.simplex_set_labels(t.carrier(&map.e)),
            t.simplex_set_labels(t.carrier(map.e_prime()))
        )));
    }
    let source_dims: Vec<usize> = map.degrees.iter().map(|d| d.source_reps.len()).collect();
    let target_dims: Vec<usize> = map.degrees.iter().map(|d| d.target_reps.len()).collect();
    let ranks: Vec<usize> = map
        .degrees
        .iter()
        .map(|d| crate::linalg::rank(&d.matrix))
        .collect();
    Ok(MonotonicityReport {
        surjective: ranks.iter().zip(&target_dims).all(|(r, t)| r == t),
        dominates: source_dims.iter().zip(&target_dims).all(|(s, t)| s >= t),
        source_dims,
        target_dims,
        ranks,
    })
}

/// Outcome of `φ'' = φ' ∘ φ` for `E ⊆ E' ⊆ E''` and of the independence of
/// `φ` from the extension of `ζ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub degrees: usize,
    /// `(ζ'') = (ζ')` computed through `E'` and directly.
    pub ideals_agree: bool,
    /// `φ''(x) ≡ φ'(φ(x))` on representatives of `L(Γ,E)`.
    pub images_agree: bool,
    /// Matrix identity `M'' = M' M` in every degree.
    pub matrices_agree: bool,
    /// `φ: L(Γ,E) → L(Γ,E')` and `(ζ)` unchanged under another seed.
    pub choice_independent: bool,
}

impl CompositionReport {
    pub fn passed(&self) -> bool {
        self.ideals_agree && self.images_agree && self.matrices_agree && self.choice_independent
    }
}

/// Builds `φ: E → E'`, `φ': E' → E''` and `φ'': E → E''` from independent
/// seeds and compares them, plus a second `φ` from `seeds[3]`.
pub fn check_functor_composition<F: Field>(
    source: &LocalSetup<'_, F>,
    e_prime: &Face,
    e_second: &Face,
    seeds: [u64; 4],
    m_max: usize,
) -> Result<CompositionReport, LocalError> {
    if !e_prime.is_subset(e_second) {
        return Err(LocalError::Precondition(format!(
            "{e_prime:?} is not contained in {e_second:?}"
        )));
    }
    let phi = induced_map(source, e_prime, seeds[0], m_max)?;
    let phi_next = induced_map(phi.target(), e_second, seeds[1], m_max)?;
    let phi_direct = induced_map(source, e_second, seeds[2], m_max)?;
    let phi_alt = induced_map(source, e_prime, seeds[3], m_max)?;

    let ideals_agree = same_span(
        &phi_next.target().reduction().span(1),
        &phi_direct.target().reduction().span(1),
    );
    let mut images_agree = ideals_agree;
    let mut matrices_agree = true;
    let mid_ring = phi.target().ring().clone();
    for m in 0..=m_max {
        for x in &phi.degrees[m].source_reps {
            let via = phi_next.apply(&mid_ring, &phi.image(x), m);
            let direct = phi_direct.image(x);
            if phi_direct.target().reduction().residue(via, m) != direct {
                images_agree = false;
            }
        }
        let composed = phi_next.degrees[m].matrix.mul(&phi.degrees[m].matrix);
        if composed.as_ref().ok() != Some(&phi_direct.degrees[m].matrix) {
            matrices_agree = false;
        }
    }
    let choice_independent = same_span(
        &phi.target().reduction().span(1),
        &phi_alt.target().reduction().span(1),
    ) && phi
        .degrees
        .iter()
        .zip(&phi_alt.degrees)
        .all(|(a, b)| a.matrix == b.matrix && a.target_reps == b.target_reps);
    Ok(CompositionReport {
        degrees: m_max + 1,
        ideals_agree,
        images_agree,
        matrices_agree,
        choice_independent,
    })
}

fn same_span<F: Field>(a: &Echelon<F>, b: &Echelon<F>) -> bool {
    a.rank() == b.rank() && a.rows().iter().all(|r| b.contains(r.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf32003, Rational};
    use crate::local::local_h_incexc;
    use crate::local::tests::triforce;

    type Q = Rational;

    fn face(t: &crate::complex::Triangulation, labels: &[&str]) -> Face {
        t.face_from_labels(labels).unwrap()
    }

    #[test]
    fn triforce_map_to_boundary_vertex() {
        let t = triforce();
        let e = Face::empty();
        let source = LocalSetup::<Q>::new(&t, &e, 3, LsopConfig::default()).unwrap();
        let c = face(&t, &["c"]);
        let phi = induced_map(&source, &c, 11, 3).unwrap();
        // ζ_1 = θ_3|_{lk c}
        assert_eq!(phi.zeta_sources(), &[2]);
        assert_eq!(
            phi.zeta()[0],
            source.lsop().forms()[2].restrict_to(phi.target().link().vertices())
        );
        let w = t.vertex_id("w").unwrap();
        assert!(phi.image(&Monomial::var(w)).is_empty());
        for v in ["a", "b", "u", "v"] {
            let id = t.vertex_id(v).unwrap();
            let ring = phi.target().ring();
            assert_eq!(
                phi.image(&Monomial::var(id)),
                phi.target()
                    .reduction()
                    .residue(ring.monomial_vector(&Monomial::var(id)), 1)
            );
        }
        // φ(x^c) = -(λ_a x^a + λ_v x^v)/λ_c modulo ζ
        let theta2 = &source.lsop().forms()[1];
        let (a, v, cc) = (
            t.vertex_id("a").unwrap(),
            t.vertex_id("v").unwrap(),
            t.vertex_id("c").unwrap(),
        );
        let lc = theta2.coeff(cc);
        let expected = LinearForm::new([(a, theta2.coeff(a)), (v, theta2.coeff(v))])
            .scale(&(-Q::from_i64(1) / lc));
        let ring = phi.target().ring();
        let expected = phi
            .target()
            .reduction()
            .residue(expected.to_vector(ring), 1);
        assert_eq!(phi.image(&Monomial::var(cc)), expected);
        // L(Γ,∅) = 0, so every matrix is empty
        assert!(phi.degrees().iter().all(|d| d.source_reps.is_empty()));
    }

    #[test]
    fn identity_when_faces_agree() {
        let t = triforce();
        for labels in [vec!["c"], vec!["a", "b"], vec![]] {
            let e = face(&t, &labels);
            let source = LocalSetup::<Q>::new(&t, &e, 5, LsopConfig::default()).unwrap();
            let phi = induced_map(&source, &e, 0, 3).unwrap();
            for deg in phi.degrees() {
                assert_eq!(deg.source_reps, deg.target_reps);
                assert_eq!(deg.matrix, Matrix::identity(deg.source_reps.len()));
            }
        }
    }

    #[test]
    fn monotone_along_equal_carriers() {
        let t = triforce();
        let a = face(&t, &["a"]);
        let aw = face(&t, &["a", "w"]);
        let source = LocalSetup::<Q>::new(&t, &a, 8, LsopConfig::default()).unwrap();
        let phi = induced_map(&source, &aw, 1, 3).unwrap();
        let report = check_monotonicity(&phi).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.source_dims, vec![0, 1, 0, 0]);
        assert_eq!(report.target_dims, vec![0, 0, 0, 0]);
        assert_eq!(local_h_incexc(&t, &aw).unwrap().values, vec![0, 0]);
    }

    #[test]
    fn monotonicity_rejects_different_carriers() {
        let t = triforce();
        let source = LocalSetup::<Q>::new(&t, &Face::empty(), 8, LsopConfig::default()).unwrap();
        let phi = induced_map(&source, &face(&t, &["c"]), 1, 3).unwrap();
        assert!(matches!(
            check_monotonicity(&phi),
            Err(LocalError::Precondition(_))
        ));
        // and no surjection exists: (0,0,0,0) against (0,1,0)
        assert_eq!(phi.degrees()[1].target_reps.len(), 1);
        assert_eq!(phi.degrees()[1].source_reps.len(), 0);
    }

    #[test]
    fn rejects_non_superset() {
        let t = triforce();
        let source = LocalSetup::<Q>::new(&t, &face(&t, &["a"]), 8, LsopConfig::default()).unwrap();
        assert!(matches!(
            induced_map(&source, &face(&t, &["c"]), 1, 2),
            Err(LocalError::Precondition(_))
        ));
    }

    #[test]
    fn composition_along_chains() {
        let t = triforce();
        let chains: Vec<(Vec<&str>, Vec<&str>, Vec<&str>)> = vec![
            (vec![], vec!["c"], vec!["a", "c"]),
            (vec![], vec!["a"], vec!["a", "b"]),
            (vec!["c"], vec!["a", "c"], vec!["a", "b", "c"]),
            (vec!["a"], vec!["a", "w"], vec!["a", "w"]),
            (vec!["b"], vec!["b"], vec!["b"]),
        ];
        for (e, e1, e2) in chains {
            let e = face(&t, &e);
            let source = LocalSetup::<Gf32003>::new(&t, &e, 21, LsopConfig::default()).unwrap();
            let report =
                check_functor_composition(&source, &face(&t, &e1), &face(&t, &e2), [1, 2, 3, 4], 3)
                    .unwrap();
            assert!(report.passed(), "{e:?} {e1:?} {e2:?}: {report:?}");
        }
    }

    #[test]
    fn boundary_vertex_to_interior_edge_is_onto() {
        let t = triforce();
        let c = face(&t, &["c"]);
        let source = LocalSetup::<Q>::new(&t, &c, 2, LsopConfig::default()).unwrap();
        let ac = face(&t, &["a", "c"]);
        let phi = induced_map(&source, &ac, 9, 3).unwrap();
        // L(Γ,{c}) = (0,1,0) maps onto L(Γ,{a,c}) = (0,1)
        assert_eq!(phi.degrees()[1].matrix.shape(), (1, 1));
        assert_eq!(crate::linalg::rank(&phi.degrees()[1].matrix), 1);
    }
}
