//! Local face modules `L(Γ,E)`, local h-vectors by two independent routes,
//! the resolution of `L` by the ideals `I_S`, its presentation `I/J`, and
//! restrictions to subcomplexes of the link.

mod presentation;
mod resolution;
mod restrict;

pub use presentation::{presentation_j, Presentation};
pub use resolution::{
    build_resolution, verify_exactness, DegreeCheck, ExactnessReport, ResolutionComplex,
    ResolutionDegree,
};
pub use restrict::{
    restrict_module, restricted_dims, restricted_standalone, RestrictedModule, StandaloneFace,
    StandaloneResult,
};

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, Face, SimplexSet, SimplicialComplex, Triangulation};
use crate::face_ring::{
    ideal_slice, sample_lsop, ArtinianReduction, FaceRing, Frame, IdealSlice, IndexSet, LsopConfig,
    LsopError, Monomial, SpecialLsop,
};
use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lsop(#[from] LsopError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Independent generic draws kept giving different answers.
    #[error("independent draws disagree after {pairs} pairs: {first:?} vs {second:?}")]
    SeedDisagreement {
        pairs: usize,
        first: Vec<usize>,
        second: Vec<usize>,
    },
    /// A computed fact contradicts a proven statement; this signals a bug.
    #[error("internal consistency check failed: {0}")]
    Trap(String),
}

/// Everything fixed by a face `E` and a special l.s.o.p. for `k[lk(E)]`.
pub struct LocalSetup<'a, F> {
    t: &'a Triangulation,
    e: Face,
    link: Arc<FaceRing>,
    lsop: SpecialLsop<F>,
    reduction: ArtinianReduction<F>,
}

impl<'a, F: Field> LocalSetup<'a, F> {
    /// Samples a special l.s.o.p. for `k[lk(E)]` from `seed`.
    pub fn new(
        t: &'a Triangulation,
        e: &Face,
        seed: u64,
        config: LsopConfig,
    ) -> Result<Self, LocalError> {
        let link = t.complex().link(e)?;
        let frame = Frame::new(t, e);
        let lsop = sample_lsop(&frame, &link, seed, config)?;
        Ok(Self::assemble(
            t,
            e.clone(),
            Arc::new(FaceRing::new(link)),
            lsop,
        ))
    }

    /// Uses a given special l.s.o.p.; it is rechecked.
    pub fn with_lsop(
        t: &'a Triangulation,
        e: &Face,
        lsop: SpecialLsop<F>,
    ) -> Result<Self, LocalError> {
        let link = t.complex().link(e)?;
        let frame = Frame::new(t, e);
        SpecialLsop::from_forms(&frame, &link, lsop.forms().to_vec())?;
        Ok(Self::assemble(
            t,
            e.clone(),
            Arc::new(FaceRing::new(link)),
            lsop,
        ))
    }

    fn assemble(t: &'a Triangulation, e: Face, link: Arc<FaceRing>, lsop: SpecialLsop<F>) -> Self {
        let reduction = ArtinianReduction::new(link.clone(), lsop.forms().to_vec());
        LocalSetup {
            t,
            e,
            link,
            lsop,
            reduction,
        }
    }

    pub fn triangulation(&self) -> &'a Triangulation {
        self.t
    }

    pub fn e(&self) -> &Face {
        &self.e
    }

    pub fn frame(&self) -> Frame<'_> {
        Frame::new(self.t, &self.e)
    }

    pub fn d(&self) -> usize {
        self.lsop.d()
    }

    pub fn ring(&self) -> &Arc<FaceRing> {
        &self.link
    }

    pub fn link(&self) -> &SimplicialComplex {
        self.link.complex()
    }

    pub fn lsop(&self) -> &SpecialLsop<F> {
        &self.lsop
    }

    pub fn reduction(&self) -> &ArtinianReduction<F> {
        &self.reduction
    }

    pub fn ideal(&self, s: IndexSet, m: usize) -> IdealSlice {
        ideal_slice(&self.frame(), &self.link, s, m)
    }

    /// `L(Γ,E)` in degrees `0..=m_max`.
    pub fn module(&self, m_max: usize) -> LocalModule {
        let per_degree: Vec<Vec<Monomial>> = (0..=m_max)
            .into_par_iter()
            .map(|m| self.representatives(m))
            .collect();
        LocalModule {
            e: self.e.clone(),
            d: self.d(),
            dims: per_degree.iter().map(Vec::len).collect(),
            representatives: per_degree,
        }
    }

    /// Monomials of `I_m` whose classes form a basis of `L_m`, chosen
    /// greedily in basis order.
    pub fn representatives(&self, m: usize) -> Vec<Monomial> {
        let basis = self.link.basis(m);
        let mut ech = (*self.reduction.span(m)).clone();
        self.ideal(0, m)
            .members
            .into_iter()
            .filter(|&i| ech.insert(vec![(i, F::one())]))
            .map(|i| basis.get(i).clone())
            .collect()
    }
}

/// Per-degree dimensions of `L(Γ,E)` with monomials representing a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModule {
    pub e: Face,
    pub d: usize,
    /// `dim L_m` for `m = 0..=m_max`.
    pub dims: Vec<usize>,
    pub representatives: Vec<Vec<Monomial>>,
}

impl LocalModule {
    /// `(ℓ_0, …, ℓ_d)`.
    pub fn local_h(&self) -> LocalHVector {
        LocalHVector {
            values: (0..=self.d)
                .map(|m| self.dims.get(m).copied().unwrap_or(0) as i64)
                .collect(),
            route: Route::Module,
        }
    }

    /// Whether every computed degree above `d` vanishes.
    pub fn vanishes_above_d(&self) -> bool {
        self.dims.iter().skip(self.d + 1).all(|&x| x == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Module,
    InclusionExclusion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalHVector {
    pub values: Vec<i64>,
    pub route: Route,
}

impl LocalHVector {
    pub fn is_symmetric(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }
}

/// `ℓ(Γ,E) = Σ_{U ⊇ σ(E)} (-1)^{n-|U|} h(lk_{Γ_U}(E))`, with each h-vector
/// padded to length `d + 1`. Purely combinatorial.
pub fn local_h_incexc(t: &Triangulation, e: &Face) -> Result<LocalHVector, LocalError> {
    if !t.complex().contains(e) {
        return Err(ComplexError::NotAFace(e.vertices().to_vec()).into());
    }
    let n = t.n();
    let d = n - e.len();
    let mut values = vec![0i64; d + 1];
    let base = t.carrier(e);
    for u in base.supersets(n) {
        let link = t.restriction(u).link(e)?;
        let h = link.h_vector().padded(d + 1);
        let sign = if (n - u.len()).is_multiple_of(2) {
            1
        } else {
            -1
        };
        for (acc, x) in values.iter_mut().zip(h) {
            *acc += sign * x;
        }
    }
    Ok(LocalHVector {
        values,
        route: Route::InclusionExclusion,
    })
}

/// `ℓ(Γ,E)` by the module route with a freshly sampled l.s.o.p.
pub fn local_h_module<F: Field>(
    t: &Triangulation,
    e: &Face,
    seed: u64,
    config: LsopConfig,
) -> Result<LocalHVector, LocalError> {
    let setup = LocalSetup::<F>::new(t, e, seed, config)?;
    Ok(setup.module(setup.d()).local_h())
}

/// Subsets of `{0, …, d-1}` of size `k`, in lexicographic order of their
/// sorted element lists.
pub fn index_sets(d: usize, k: usize) -> Vec<IndexSet> {
    fn rec(start: usize, d: usize, k: usize, cur: IndexSet, out: &mut Vec<IndexSet>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..=d - k {
            rec(i + 1, d, k - 1, cur | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if k <= d {
        rec(0, d, k, 0, &mut out);
    }
    out
}

/// Elements of an index set, ascending.
pub fn index_set_elements(s: IndexSet) -> Vec<usize> {
    SimplexSet::from_bits(s).iter().collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::complex::TriangulationBuilder;
    use crate::field::{Gf32003, Rational};

    type Q = Rational;

    pub(crate) fn triforce() -> Triangulation {
        TriangulationBuilder::new("triforce", &["u", "v", "w"])
            .vertex("a", &["v", "w"])
            .vertex("b", &["u", "w"])
            .vertex("c", &["u", "v"])
            .vertex("u", &["u"])
            .vertex("v", &["v"])
            .vertex("w", &["w"])
            .facet(&["a", "b", "c"])
            .facet(&["u", "b", "c"])
            .facet(&["v", "a", "c"])
            .facet(&["w", "a", "b"])
            .build()
            .unwrap()
    }

    pub(crate) fn trivial(n: usize) -> Triangulation {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut b = TriangulationBuilder::new(format!("trivial-{n}"), &refs);
        for r in &refs {
            b = b.vertex(r, &[r]);
        }
        b.facet(&refs).build().unwrap()
    }

    #[test]
    fn triforce_local_h_both_routes() {
        let t = triforce();
        let e = Face::empty();
        let c = t.face_from_labels(&["c"]).unwrap();
        assert_eq!(local_h_incexc(&t, &e).unwrap().values, vec![0, 0, 0, 0]);
        assert_eq!(local_h_incexc(&t, &c).unwrap().values, vec![0, 1, 0]);
        let setup = LocalSetup::<Q>::new(&t, &e, 11, LsopConfig::default()).unwrap();
        let module = setup.module(5);
        assert_eq!(module.dims, vec![0; 6]);
        let setup = LocalSetup::<Q>::new(&t, &c, 11, LsopConfig::default()).unwrap();
        let module = setup.module(4);
        assert_eq!(module.dims, vec![0, 1, 0, 0, 0]);
        // the surviving class is represented by x^a (first in basis order)
        assert_eq!(
            t.labels_of(&module.representatives[1][0].support()),
            vec!["a"]
        );
    }

    #[test]
    fn interior_face_gives_full_quotient() {
        let t = triforce();
        let e = t.face_from_labels(&["a", "b"]).unwrap();
        let setup = LocalSetup::<Q>::new(&t, &e, 5, LsopConfig::default()).unwrap();
        let module = setup.module(3);
        let h = setup.link().h_vector().padded(4);
        assert_eq!(module.dims.iter().map(|&x| x as i64).collect::<Vec<_>>(), h);
        assert_eq!(local_h_incexc(&t, &e).unwrap().values, vec![1, 1]);
    }

    #[test]
    fn trivial_triangulations_vanish() {
        for n in 1..=4 {
            let t = trivial(n);
            let e = Face::empty();
            assert!(local_h_incexc(&t, &e).unwrap().is_zero());
            let l = local_h_module::<Q>(&t, &e, 1, LsopConfig::default()).unwrap();
            assert!(l.is_zero(), "n={n}: {:?}", l.values);
        }
    }

    #[test]
    fn routes_agree_on_every_triforce_face_and_field() {
        let t = triforce();
        for e in t.complex().faces() {
            let oracle = local_h_incexc(&t, e).unwrap();
            let q = local_h_module::<Q>(&t, e, 3, LsopConfig::default()).unwrap();
            let p = local_h_module::<Gf32003>(&t, e, 3, LsopConfig::default()).unwrap();
            assert_eq!(q.values, oracle.values, "{e:?}");
            assert_eq!(p.values, oracle.values, "{e:?}");
            assert!(oracle.is_symmetric() && oracle.is_nonnegative());
        }
    }

    #[test]
    fn index_set_order() {
        assert_eq!(index_sets(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(index_sets(3, 0), vec![0]);
        assert_eq!(index_sets(2, 3), Vec::<IndexSet>::new());
        assert_eq!(index_set_elements(0b101), vec![0, 2]);
    }
}
