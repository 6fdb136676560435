//! Graded pieces of Stanley–Reisner rings `k[Δ]`, linear forms and their
//! multiplication maps, the monomial ideals `I_S`, and special l.s.o.p.s.
//!
//! Everything is degreewise linear algebra: a degree-`m` element of `k[Δ]`
//! is a sparse vector over the degree-`m` [`MonomialBasis`].

mod frame;
mod ideal;
mod lsop;

pub use frame::Frame;
pub use ideal::{ideal_slice, IdealSlice, IndexSet};
pub(crate) use lsop::nonzero_coefficient;
pub use lsop::{
    marriage_check, quotient_dims, sample_lsop, special_supports, verify_lsop, LsopConfig,
    LsopError, MarriageWitness, SpecialLsop, DEFAULT_COEFFICIENT_BOUND, DEFAULT_RETRIES,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::field::Field;
use crate::linalg::{normalize, Echelon, Matrix, SparseVec};

/// A monomial as the sorted multiset of its variables: `x_a^2 x_b` is
/// `[a, a, b]`. Ordering within a degree is lexicographic on this list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<VertexId>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VertexId) -> Self {
        Monomial(vec![v])
    }

    pub fn from_vars(mut vars: Vec<VertexId>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    /// Squarefree monomial `x^F`.
    pub fn of_face(f: &Face) -> Self {
        Monomial(f.vertices().to_vec())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[VertexId] {
        &self.0
    }

    pub fn support(&self) -> Face {
        Face::new(self.0.iter().copied())
    }

    pub fn exponent(&self, v: VertexId) -> usize {
        self.0.iter().filter(|&&w| w == v).count()
    }

    pub fn times_var(&self, v: VertexId) -> Monomial {
        let pos = self.0.partition_point(|&w| w <= v);
        let mut vars = self.0.clone();
        vars.insert(pos, v);
        Monomial(vars)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.0.len() + other.0.len());
        vars.extend_from_slice(&self.0);
        vars.extend_from_slice(&other.0);
        Monomial::from_vars(vars)
    }

    /// Splits off the largest variable: `x^α = x^β · x_v`.
    pub fn split_last(&self) -> Option<(Monomial, VertexId)> {
        let (&v, rest) = self.0.split_last()?;
        Some((Monomial(rest.to_vec()), v))
    }

    /// Exponent pairs `(v, e)` with `e > 0`, by vertex.
    pub fn exponents(&self) -> Vec<(VertexId, usize)> {
        let mut out: Vec<(VertexId, usize)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, e)) if *w == v => *e += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|(v, e)| {
                if e == 1 {
                    format!("x{v}")
                } else {
                    format!("x{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// All degree-`m` monomials of `k[Δ]`, in canonical order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    fn build(complex: &SimplicialComplex, m: usize) -> Self {
        let mut monomials = Vec::new();
        if m == 0 {
            monomials.push(Monomial::one());
        } else {
            for f in complex.faces() {
                if f.is_empty() || f.len() > m {
                    continue;
                }
                full_support_monomials(f.vertices(), m, &mut monomials);
            }
            monomials.sort();
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        MonomialBasis {
            degree: m,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, x: &Monomial) -> Option<usize> {
        self.index.get(x).copied()
    }
}

/// Monomials of degree `m` whose support is exactly `vertices`.
fn full_support_monomials(vertices: &[VertexId], m: usize, out: &mut Vec<Monomial>) {
    fn rec(vs: &[VertexId], left: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Monomial>) {
        match vs {
            [] => {}
            [v] => {
                let len = cur.len();
                cur.extend(std::iter::repeat_n(*v, left));
                out.push(Monomial(cur.clone()));
                cur.truncate(len);
            }
            [v, rest @ ..] => {
                // leave at least one for each remaining vertex
                for e in 1..=left - rest.len() {
                    let len = cur.len();
                    cur.extend(std::iter::repeat_n(*v, e));
                    rec(rest, left - e, cur, out);
                    cur.truncate(len);
                }
            }
        }
    }
    rec(vertices, m, &mut Vec::with_capacity(m), out);
}

/// The face ring `k[Δ]` as a family of graded pieces; bases are built on
/// first use and shared.
#[derive(Debug)]
pub struct FaceRing {
    complex: SimplicialComplex,
    bases: DashMap<usize, Arc<MonomialBasis>>,
}

impl Clone for FaceRing {
    fn clone(&self) -> Self {
        FaceRing::new(self.complex.clone())
    }
}

impl FaceRing {
    pub fn new(complex: SimplicialComplex) -> Self {
        FaceRing {
            complex,
            bases: DashMap::new(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.complex.vertices()
    }

    /// Degree-`m` monomial basis, memoized.
    pub fn basis(&self, m: usize) -> Arc<MonomialBasis> {
        if let Some(b) = self.bases.get(&m) {
            return b.clone();
        }
        let b = Arc::new(MonomialBasis::build(&self.complex, m));
        self.bases.entry(m).or_insert(b).clone()
    }

    /// Whether `x` is a nonzero monomial of the ring.
    pub fn is_standard(&self, x: &Monomial) -> bool {
        self.complex.contains(&x.support())
    }

    /// `θ · x` as a vector over the degree `deg x + 1` basis; products
    /// whose support is not a face vanish.
    pub fn form_times_monomial<F: Field>(
        &self,
        theta: &LinearForm<F>,
        x: &Monomial,
    ) -> SparseVec<F> {
        let target = self.basis(x.degree() + 1);
        let entries = theta
            .terms()
            .iter()
            .filter_map(|(v, c)| target.index_of(&x.times_var(*v)).map(|i| (i, c.clone())))
            .collect();
        normalize(entries)
    }

    /// `θ · p` for `p` given over the degree-`m` basis.
    pub fn form_times<F: Field>(
        &self,
        theta: &LinearForm<F>,
        p: &[(usize, F)],
        m: usize,
    ) -> SparseVec<F> {
        let source = self.basis(m);
        let mut acc: SparseVec<F> = Vec::new();
        for (i, a) in p {
            for (j, b) in self.form_times_monomial(theta, source.get(*i)) {
                acc.push((j, a.clone() * b));
            }
        }
        normalize(acc)
    }

    /// Unit vector of a monomial; empty if the monomial is zero in the ring.
    pub fn monomial_vector<F: Field>(&self, x: &Monomial) -> SparseVec<F> {
        match self.basis(x.degree()).index_of(x) {
            Some(i) => vec![(i, F::one())],
            None => Vec::new(),
        }
    }
}

/// Matrix of multiplication by `θ` from degree `m` to degree `m + 1`,
/// shaped `|R_{m+1}| × |R_m|`.
pub fn mult_map<F: Field>(ring: &FaceRing, theta: &LinearForm<F>, m: usize) -> Matrix<F> {
    let source = ring.basis(m);
    let target = ring.basis(m + 1);
    let columns: Vec<SparseVec<F>> = source
        .monomials()
        .iter()
        .map(|x| ring.form_times_monomial(theta, x))
        .collect();
    Matrix::from_sparse_rows(target.len(), columns).transpose()
}

/// Degree-one element `Σ a_v x_v`; stored sorted by vertex, without zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<F> {
    terms: Vec<(VertexId, F)>,
}

impl<F: Field> LinearForm<F> {
    pub fn zero() -> Self {
        LinearForm { terms: Vec::new() }
    }

    pub fn new(terms: impl IntoIterator<Item = (VertexId, F)>) -> Self {
        let mut terms: Vec<(VertexId, F)> = terms.into_iter().collect();
        terms.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(VertexId, F)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.last_mut() {
                Some((w, acc)) if *w == v => *acc = acc.clone() + c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinearForm { terms: merged }
    }

    pub fn var(v: VertexId) -> Self {
        LinearForm::new([(v, F::one())])
    }

    pub fn terms(&self) -> &[(VertexId, F)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<VertexId> {
        self.terms.iter().map(|(v, _)| *v).collect()
    }

    pub fn coeff(&self, v: VertexId) -> F {
        self.terms
            .binary_search_by_key(&v, |(w, _)| *w)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    /// Drops the terms on vertices outside `keep`.
    pub fn restrict(&self, keep: impl Fn(VertexId) -> bool) -> Self {
        LinearForm {
            terms: self
                .terms
                .iter()
                .filter(|(v, _)| keep(*v))
                .cloned()
                .collect(),
        }
    }

    pub fn restrict_to(&self, vertices: &[VertexId]) -> Self {
        self.restrict(|v| vertices.binary_search(&v).is_ok())
    }

    pub fn scale(&self, a: &F) -> Self {
        LinearForm::new(self.terms.iter().map(|(v, c)| (*v, c.clone() * a.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        LinearForm::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    /// Coefficient vector indexed by `vertices` (which must be sorted).
    pub fn to_dense(&self, vertices: &[VertexId]) -> Vec<F> {
        vertices.iter().map(|&v| self.coeff(v)).collect()
    }

    /// Vector over the degree-one basis of `ring`.
    pub fn to_vector(&self, ring: &FaceRing) -> SparseVec<F> {
        let b = ring.basis(1);
        normalize(
            self.terms
                .iter()
                .filter_map(|(v, c)| b.index_of(&Monomial::var(*v)).map(|i| (i, c.clone())))
                .collect(),
        )
    }

    pub fn from_vector(ring: &FaceRing, v: &[(usize, F)]) -> Self {
        let b = ring.basis(1);
        LinearForm::new(v.iter().map(|(i, c)| (b.get(*i).vars()[0], c.clone())))
    }
}

/// `k[Δ]/(θ_1, …, θ_r)` degreewise: the echelon of `(θ)_m = Σ θ_i R_{m-1}`
/// is cached per degree, which makes residues canonical.
#[derive(Debug)]
pub struct ArtinianReduction<F> {
    ring: Arc<FaceRing>,
    forms: Vec<LinearForm<F>>,
    spans: DashMap<usize, Arc<Echelon<F>>>,
}

impl<F: Field> ArtinianReduction<F> {
    pub fn new(ring: Arc<FaceRing>, forms: Vec<LinearForm<F>>) -> Self {
        ArtinianReduction {
            ring,
            forms,
            spans: DashMap::new(),
        }
    }

    pub fn ring(&self) -> &Arc<FaceRing> {
        &self.ring
    }

    pub fn forms(&self) -> &[LinearForm<F>] {
        &self.forms
    }

    /// Echelon basis of `(θ)_m`.
    pub fn span(&self, m: usize) -> Arc<Echelon<F>> {
        if let Some(e) = self.spans.get(&m) {
            return e.clone();
        }
        let basis = self.ring.basis(m);
        let mut ech = Echelon::new(basis.len());
        if m > 0 {
            let lower = self.ring.basis(m - 1);
            for x in lower.monomials() {
                for theta in &self.forms {
                    ech.insert(self.ring.form_times_monomial(theta, x));
                    if ech.rank() == basis.len() {
                        break;
                    }
                }
            }
        }
        let ech = Arc::new(ech);
        self.spans.entry(m).or_insert(ech).clone()
    }

    /// `dim (k[Δ]/(θ))_m`.
    pub fn quotient_dim(&self, m: usize) -> usize {
        self.ring.basis(m).len() - self.span(m).rank()
    }

    /// Canonical representative of the class of `v` in degree `m`.
    pub fn residue(&self, v: SparseVec<F>, m: usize) -> SparseVec<F> {
        self.span(m).reduce(v)
    }
}
