//! Finite abstract simplicial complexes, carrier maps and triangulations of
//! simplices.

mod carrier;
mod homology;
mod validate;

pub use carrier::{CarrierOracle, InteriorFaces, SimplexSet, Triangulation, TriangulationBuilder};
pub use homology::{has_sphere_homology, is_acyclic, reduced_betti, BettiCache};
pub use validate::{
    is_quasi_geometric, validate_homology_triangulation, QuasiGeometricWitness, ValidationMode,
    ValidationReport, Violation, DEFAULT_FACE_CEILING,
};

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {0} appears twice in facet {1:?}")]
    DuplicateVertex(VertexId, Vec<VertexId>),
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<VertexId>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("carrier of `{0}` is empty")]
    EmptyCarrier(String),
    #[error("carrier of `{vertex}` mentions `{label}`, which is not a simplex vertex")]
    CarrierOutsideSimplex { vertex: String, label: String },
    #[error("simplex vertex `{0}` is the carrier of {1} vertices, expected exactly one")]
    CornerCount(String, usize),
    #[error(
        "carrier map is not monotone: carrier of {sub:?} is not contained in carrier of {face:?}"
    )]
    NotMonotone { face: Vec<String>, sub: Vec<String> },
    #[error("override for {0:?} does not contain the union of its vertex carriers")]
    OverrideBelowUnion(Vec<String>),
    #[error("override given for {0:?}, which is not a face")]
    OverrideNotAFace(Vec<String>),
    #[error("complex has dimension {got}, expected {expected} for a simplex on {n} vertices")]
    WrongDimension {
        expected: isize,
        got: isize,
        n: usize,
    },
    #[error("simplex has {0} vertices; at most 64 are supported")]
    SimplexTooLarge(usize),
    #[error("complex has {faces} faces, above the ceiling of {ceiling}")]
    FaceCeiling { faces: usize, ceiling: usize },
    #[error("unsupported characteristic: {0}")]
    Characteristic(String),
}

/// A face: a sorted set of vertex ids without repetitions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Face(Vec<VertexId>);

impl Face {
    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Sorts and deduplicates.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Face(v)
    }

    /// Like [`Face::new`] but rejects repeated vertices.
    pub fn try_new(vertices: &[VertexId]) -> Result<Self, ComplexError> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertex(w[0], vertices.to_vec()));
            }
        }
        Ok(Face(v))
    }

    pub fn vertex(v: VertexId) -> Self {
        Face(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn union(&self, other: &Face) -> Face {
        Face::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(
            self.0
                .iter()
                .copied()
                .filter(|v| !other.contains(*v))
                .collect(),
        )
    }

    pub fn without(&self, v: VertexId) -> Face {
        Face(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn with(&self, v: VertexId) -> Face {
        Face::new(self.0.iter().copied().chain(std::iter::once(v)))
    }

    /// All subsets, ordered by size and then lexicographically.
    pub fn subsets(&self) -> Vec<Face> {
        let n = self.0.len();
        assert!(n < 32, "face too large to enumerate subsets");
        let mut out: Vec<Face> = (0u32..(1 << n))
            .map(|mask| {
                Face(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Faces obtained by deleting one vertex.
    pub fn boundary(&self) -> impl Iterator<Item = Face> + '_ {
        self.0.iter().map(move |&v| self.without(v))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<VertexId>> for Face {
    fn from(v: Vec<VertexId>) -> Self {
        Face::new(v)
    }
}

#[derive(Debug)]
struct FaceIndex {
    /// `by_size[k]` holds the faces with `k` vertices, sorted.
    by_size: Vec<Vec<Face>>,
    set: HashSet<Face>,
    vertices: Vec<VertexId>,
}

/// A finite simplicial complex given by its facets. The face set is
/// enumerated lazily and cached; the complex is immutable once built.
#[derive(Debug)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
    index: OnceLock<FaceIndex>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex::from_maximal(self.facets.clone())
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl std::hash::Hash for SimplicialComplex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.facets.hash(state)
    }
}

impl SimplicialComplex {
    /// The complex `{∅}`.
    pub fn void() -> Self {
        Self::from_maximal(vec![Face::empty()])
    }

    pub fn simplex(face: Face) -> Self {
        Self::from_maximal(vec![face])
    }

    fn from_maximal(mut facets: Vec<Face>) -> Self {
        facets.sort();
        SimplicialComplex {
            facets,
            index: OnceLock::new(),
        }
    }

    /// Builds a complex from a facet list. Duplicate vertices inside a facet
    /// are an error; facets contained in other facets are absorbed with a
    /// warning.
    pub fn build(facets: &[Vec<VertexId>]) -> Result<Self, ComplexError> {
        let faces = facets
            .iter()
            .map(|f| Face::try_new(f))
            .collect::<Result<Vec<_>, _>>()?;
        let before = faces.len();
        let c = Self::from_faces(faces);
        let kept = c.facets.iter().filter(|f| !f.is_empty()).count();
        if kept < before {
            log::warn!(
                "{} input facet(s) were repeated or contained in another facet and were absorbed",
                before - kept
            );
        }
        Ok(c)
    }

    /// The smallest complex containing the given faces.
    pub fn from_faces(faces: impl IntoIterator<Item = Face>) -> Self {
        let mut faces: Vec<Face> = faces.into_iter().collect();
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut maximal: Vec<Face> = Vec::new();
        for f in faces {
            if !maximal.iter().any(|m| f.is_subset(m)) {
                maximal.push(f);
            }
        }
        if maximal.is_empty() {
            maximal.push(Face::empty());
        }
        Self::from_maximal(maximal)
    }

    fn index(&self) -> &FaceIndex {
        self.index.get_or_init(|| {
            let mut set: HashSet<Face> = HashSet::new();
            for f in &self.facets {
                for s in f.subsets() {
                    set.insert(s);
                }
            }
            set.insert(Face::empty());
            let max = set.iter().map(Face::len).max().unwrap_or(0);
            let mut by_size = vec![Vec::new(); max + 1];
            for f in &set {
                by_size[f.len()].push(f.clone());
            }
            for v in &mut by_size {
                v.sort();
            }
            let vertices = by_size
                .get(1)
                .map(|vs| vs.iter().map(|f| f.0[0]).collect())
                .unwrap_or_default();
            FaceIndex {
                by_size,
                set,
                vertices,
            }
        })
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.index().vertices
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index().set.contains(face)
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_of_size(&self, k: usize) -> &[Face] {
        self.index().by_size.get(k).map_or(&[], |v| v.as_slice())
    }

    /// All faces, ordered by size and then lexicographically.
    pub fn faces(&self) -> impl Iterator<Item = &Face> + '_ {
        self.index().by_size.iter().flatten()
    }

    pub fn num_faces(&self) -> usize {
        self.index().set.len()
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(Face::dim).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.dim() == d)
    }

    pub fn is_void(&self) -> bool {
        self.dim() < 0
    }

    /// `(f_{-1}, f_0, ..., f_dim)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.index().by_size.iter().map(Vec::len).collect()
    }

    /// h-vector `(h_0, ..., h_d)` with `d = dim + 1`.
    pub fn h_vector(&self) -> HVector {
        HVector::from_f_vector(&self.f_vector())
    }

    fn require_face(&self, f: &Face) -> Result<(), ComplexError> {
        if self.contains(f) {
            Ok(())
        } else {
            Err(ComplexError::NotAFace(f.0.clone()))
        }
    }

    /// `lk(F) = {G : G ∩ F = ∅, G ∪ F ∈ c}`.
    pub fn link(&self, f: &Face) -> Result<SimplicialComplex, ComplexError> {
        self.require_face(f)?;
        Ok(Self::from_faces(
            self.facets
                .iter()
                .filter(|g| f.is_subset(g))
                .map(|g| g.difference(f)),
        ))
    }

    /// Closed star `{G : G ∪ F ∈ c}`, the join of `2^F` with the link.
    pub fn closed_star(&self, f: &Face) -> Result<SimplicialComplex, ComplexError> {
        self.require_face(f)?;
        Ok(Self::from_faces(
            self.facets.iter().filter(|g| f.is_subset(g)).cloned(),
        ))
    }

    /// Subcomplex of faces satisfying a downward-closed predicate.
    pub fn filter(&self, keep: impl Fn(&Face) -> bool) -> SimplicialComplex {
        Self::from_faces(self.faces().filter(|f| keep(f)).cloned())
    }

    /// Induced subcomplex on a vertex subset.
    pub fn induced(&self, vertices: &BTreeSet<VertexId>) -> SimplicialComplex {
        self.filter(|f| f.iter().all(|v| vertices.contains(&v)))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }

    /// Minimal non-faces: vertex sets not in the complex all of whose proper
    /// subsets are faces. Only sets of vertices of the complex are considered.
    pub fn minimal_non_faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        let verts = self.vertices();
        // candidates: a face plus one more vertex
        let mut seen = HashSet::new();
        for f in self.faces() {
            for &v in verts {
                if f.contains(v) {
                    continue;
                }
                let g = f.with(v);
                if self.contains(&g) || !seen.insert(g.clone()) {
                    continue;
                }
                if g.boundary().all(|h| self.contains(&h)) {
                    out.push(g);
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

/// Integer h-vector `(h_0, ..., h_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HVector(pub Vec<i64>);

impl HVector {
    /// `h_j = Σ_i (-1)^(j-i) C(d-i, j-i) f_{i-1}` where `f` starts at `f_{-1}`.
    pub fn from_f_vector(f: &[usize]) -> HVector {
        let d = f.len().saturating_sub(1);
        let h = (0..=d)
            .map(|j| {
                (0..=j)
                    .map(|i| {
                        let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(d - i, j - i) * f[i] as i64
                    })
                    .sum()
            })
            .collect();
        HVector(h)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Copy padded with zeros (or truncated) to length `len`.
    pub fn padded(&self, len: usize) -> Vec<i64> {
        let mut v = self.0.clone();
        v.resize(len, 0);
        v
    }
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triforce_complex() -> SimplicialComplex {
        // a=0 b=1 c=2 u=3 v=4 w=5
        SimplicialComplex::build(&[vec![0, 1, 2], vec![3, 1, 2], vec![4, 0, 2], vec![5, 0, 1]])
            .unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(triforce_complex().f_vector(), vec![1, 6, 9, 4]);
        let void = SimplicialComplex::build(&[]).unwrap();
        assert_eq!(void.f_vector(), vec![1]);
        assert_eq!(
            void.faces().cloned().collect::<Vec<_>>(),
            vec![Face::empty()]
        );
        assert_eq!(
            SimplicialComplex::build(&[vec![7]]).unwrap().f_vector(),
            vec![1, 1]
        );
        assert!(matches!(
            SimplicialComplex::build(&[vec![1, 1]]),
            Err(ComplexError::DuplicateVertex(1, _))
        ));
    }

    #[test]
    fn non_maximal_facets_are_absorbed() {
        let c = SimplicialComplex::build(&[vec![0, 1, 2], vec![0, 1], vec![2]]).unwrap();
        assert_eq!(c.facets(), &[Face::new([0, 1, 2])]);
    }

    #[test]
    fn link_examples() {
        let t = triforce_complex();
        let lk = t.link(&Face::vertex(2)).unwrap();
        let mut expected = vec![Face::new([0, 1]), Face::new([0, 4]), Face::new([1, 3])];
        expected.sort();
        assert_eq!(lk.facets(), expected.as_slice());
        assert_eq!(t.link(&Face::empty()).unwrap(), t);
        let lk = t.link(&Face::new([0, 5])).unwrap();
        assert_eq!(lk.facets(), &[Face::vertex(1)]);
        assert!(matches!(
            t.link(&Face::new([3, 4])),
            Err(ComplexError::NotAFace(_))
        ));
    }

    #[test]
    fn closed_star_examples() {
        let t = triforce_complex();
        let st = t.closed_star(&Face::vertex(2)).unwrap();
        // join of {c} with the path b-a-v plus u-b
        assert_eq!(st.f_vector(), vec![1, 5, 7, 3]);
        assert!(st.facets().iter().all(|f| f.contains(2)));
        assert_eq!(t.closed_star(&Face::empty()).unwrap(), t);
        let pt = SimplicialComplex::simplex(Face::vertex(9));
        assert_eq!(pt.closed_star(&Face::vertex(9)).unwrap(), pt);
    }

    #[test]
    fn h_vector_examples() {
        let path = SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(path.f_vector(), vec![1, 4, 3]);
        assert_eq!(path.h_vector().0, vec![1, 2, 0]);
        assert_eq!(triforce_complex().h_vector().0, vec![1, 3, 0, 0]);
        assert_eq!(
            SimplicialComplex::simplex(Face::vertex(0)).h_vector().0,
            vec![1, 0]
        );
        assert_eq!(SimplicialComplex::void().h_vector().0, vec![1]);
    }

    #[test]
    fn link_of_link_is_link_of_union() {
        let t = triforce_complex();
        for e in t.faces() {
            let lk = t.link(e).unwrap();
            for f in lk.faces() {
                assert_eq!(lk.link(f).unwrap(), t.link(&e.union(f)).unwrap());
            }
        }
    }

    #[test]
    fn minimal_non_faces_of_triforce() {
        let got = triforce_complex().minimal_non_faces();
        let expected: Vec<Face> = [[0, 3], [1, 4], [2, 5], [3, 4], [3, 5], [4, 5]]
            .iter()
            .map(|e| Face::new(*e))
            .collect();
        assert_eq!(got, expected);
        // boundary of a triangle has the triangle itself as minimal non-face
        let circle = SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(circle.minimal_non_faces(), vec![Face::new([0, 1, 2])]);
    }
}
