use std::collections::HashMap;
use std::fmt;

use super::{ComplexError, Face, SimplicialComplex, VertexId};

/// A subset of the ambient simplex vertex set `V`, by position in `V`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SimplexSet(u64);

impl SimplexSet {
    pub const EMPTY: SimplexSet = SimplexSet(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= 64);
        if n == 64 {
            SimplexSet(u64::MAX)
        } else {
            SimplexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SimplexSet(1 << i)
    }

    pub fn from_bits(bits: u64) -> Self {
        SimplexSet(bits)
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        SimplexSet(idx.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn union(self, other: SimplexSet) -> SimplexSet {
        SimplexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: SimplexSet) -> SimplexSet {
        SimplexSet(self.0 & other.0)
    }

    pub fn minus(self, other: SimplexSet) -> SimplexSet {
        SimplexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: SimplexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside a simplex on `n` vertices.
    pub fn complement(self, n: usize) -> SimplexSet {
        SimplexSet::full(n).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }

    /// All subsets of a simplex on `n` vertices that contain `self`.
    pub fn supersets(self, n: usize) -> impl Iterator<Item = SimplexSet> {
        let free = SimplexSet::full(n).minus(self).0;
        let base = self.0;
        // enumerate submasks of `free`
        let mut sub = free;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = SimplexSet(base | sub);
            if sub == 0 {
                done = true;
            } else {
                sub = (sub - 1) & free;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for SimplexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Anything that assigns carriers to vertex sets: a full triangulation, or a
/// single face described only by its vertex carriers.
pub trait CarrierOracle: Sync {
    /// Number of vertices of the ambient simplex.
    fn simplex_size(&self) -> usize;

    /// Carrier of a face.
    fn carrier_of(&self, face: &Face) -> SimplexSet;

    fn is_interior(&self, face: &Face) -> bool {
        self.carrier_of(face) == SimplexSet::full(self.simplex_size())
    }

    /// `n - |σ(F)|`.
    fn carrier_codim(&self, face: &Face) -> usize {
        self.simplex_size() - self.carrier_of(face).len()
    }
}

/// Faces `F` of `lk(E)` with `F ⊔ E` interior, and the inclusion-minimal
/// ones among them (the generators of the interior ideal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorFaces {
    pub faces: Vec<Face>,
    pub minimal: Vec<Face>,
}

/// A simplicial complex `Γ` together with a carrier map `σ: Γ -> 2^V`.
#[derive(Clone, Debug)]
pub struct Triangulation {
    name: String,
    simplex_labels: Vec<String>,
    vertex_labels: Vec<String>,
    complex: SimplicialComplex,
    vertex_carriers: Vec<SimplexSet>,
    overrides: HashMap<Face, SimplexSet>,
    carriers: HashMap<Face, SimplexSet>,
}

/// Label-based constructor for [`Triangulation`].
#[derive(Clone, Debug, Default)]
pub struct TriangulationBuilder {
    pub name: String,
    pub simplex_vertices: Vec<String>,
    pub vertices: Vec<(String, Vec<String>)>,
    pub facets: Vec<Vec<String>>,
    pub face_carriers: Vec<(Vec<String>, Vec<String>)>,
}

impl TriangulationBuilder {
    pub fn new(name: impl Into<String>, simplex_vertices: &[&str]) -> Self {
        TriangulationBuilder {
            name: name.into(),
            simplex_vertices: simplex_vertices.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn vertex(mut self, id: &str, carrier: &[&str]) -> Self {
        self.vertices.push((
            id.to_string(),
            carrier.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn facet(mut self, ids: &[&str]) -> Self {
        self.facets
            .push(ids.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn face_carrier(mut self, face: &[&str], carrier: &[&str]) -> Self {
        self.face_carriers.push((
            face.iter().map(|s| s.to_string()).collect(),
            carrier.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Triangulation, ComplexError> {
        Triangulation::from_builder(self)
    }
}

impl Triangulation {
    fn from_builder(b: TriangulationBuilder) -> Result<Self, ComplexError> {
        let n = b.simplex_vertices.len();
        if n > 64 {
            return Err(ComplexError::SimplexTooLarge(n));
        }
        let mut simplex_index = HashMap::new();
        for (i, s) in b.simplex_vertices.iter().enumerate() {
            if simplex_index.insert(s.clone(), i).is_some() {
                return Err(ComplexError::DuplicateId(s.clone()));
            }
        }
        let mut vertex_index: HashMap<String, VertexId> = HashMap::new();
        let mut vertex_labels = Vec::new();
        let mut vertex_carriers = Vec::new();
        for (id, carrier) in &b.vertices {
            if vertex_index
                .insert(id.clone(), vertex_labels.len() as VertexId)
                .is_some()
            {
                return Err(ComplexError::DuplicateId(id.clone()));
            }
            let set = parse_carrier(id, carrier, &simplex_index)?;
            if set.is_empty() {
                return Err(ComplexError::EmptyCarrier(id.clone()));
            }
            vertex_labels.push(id.clone());
            vertex_carriers.push(set);
        }
        let lookup = |ids: &[String]| -> Result<Vec<VertexId>, ComplexError> {
            ids.iter()
                .map(|s| {
                    vertex_index
                        .get(s)
                        .copied()
                        .ok_or_else(|| ComplexError::UnknownVertex(s.clone()))
                })
                .collect()
        };
        let facets = b
            .facets
            .iter()
            .map(|f| lookup(f))
            .collect::<Result<Vec<_>, _>>()?;
        let complex = SimplicialComplex::build(&facets)?;

        let mut overrides = HashMap::new();
        for (face, carrier) in &b.face_carriers {
            let f = Face::try_new(&lookup(face)?)?;
            let label = face.join(",");
            overrides.insert(f, parse_carrier(&label, carrier, &simplex_index)?);
        }

        Triangulation::assemble(
            b.name,
            b.simplex_vertices,
            vertex_labels,
            complex,
            vertex_carriers,
            overrides,
        )
    }

    /// Builds from already-indexed data and checks every carrier-map
    /// invariant.
    pub fn assemble(
        name: String,
        simplex_labels: Vec<String>,
        vertex_labels: Vec<String>,
        complex: SimplicialComplex,
        vertex_carriers: Vec<SimplexSet>,
        overrides: HashMap<Face, SimplexSet>,
    ) -> Result<Self, ComplexError> {
        let n = simplex_labels.len();
        let mut t = Triangulation {
            name,
            simplex_labels,
            vertex_labels,
            complex,
            vertex_carriers,
            overrides,
            carriers: HashMap::new(),
        };
        t.check_and_cache(n)?;
        Ok(t)
    }

    fn check_and_cache(&mut self, n: usize) -> Result<(), ComplexError> {
        for v in self.complex.vertices() {
            if *v as usize >= self.vertex_labels.len() {
                return Err(ComplexError::UnknownVertex(v.to_string()));
            }
        }
        for (f, c) in &self.overrides {
            if !self.complex.contains(f) {
                return Err(ComplexError::OverrideNotAFace(self.labels_of(f)));
            }
            if !self.union_carrier(f).is_subset(*c) {
                return Err(ComplexError::OverrideBelowUnion(self.labels_of(f)));
            }
        }
        for i in 0..n {
            let count = self
                .vertex_carriers
                .iter()
                .filter(|c| **c == SimplexSet::singleton(i))
                .count();
            if count != 1 {
                return Err(ComplexError::CornerCount(
                    self.simplex_labels[i].clone(),
                    count,
                ));
            }
        }
        let expected = n as isize - 1;
        if self.complex.dim() != expected {
            return Err(ComplexError::WrongDimension {
                expected,
                got: self.complex.dim(),
                n,
            });
        }
        let mut carriers = HashMap::with_capacity(self.complex.num_faces());
        for f in self.complex.faces() {
            let c = self
                .overrides
                .get(f)
                .copied()
                .unwrap_or_else(|| self.union_carrier(f));
            carriers.insert(f.clone(), c);
        }
        // monotonicity along codimension-one inclusions suffices
        for f in self.complex.faces() {
            for g in f.boundary() {
                if !carriers[&g].is_subset(carriers[f]) {
                    return Err(ComplexError::NotMonotone {
                        face: self.labels_of(f),
                        sub: self.labels_of(&g),
                    });
                }
            }
        }
        self.carriers = carriers;
        Ok(())
    }

    fn union_carrier(&self, f: &Face) -> SimplexSet {
        f.iter().fold(SimplexSet::EMPTY, |acc, v| {
            acc.union(self.vertex_carriers[v as usize])
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// `n = |V|`.
    pub fn n(&self) -> usize {
        self.simplex_labels.len()
    }

    pub fn full_set(&self) -> SimplexSet {
        SimplexSet::full(self.n())
    }

    pub fn simplex_labels(&self) -> &[String] {
        &self.simplex_labels
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_carriers(&self) -> &[SimplexSet] {
        &self.vertex_carriers
    }

    pub fn overrides(&self) -> &HashMap<Face, SimplexSet> {
        &self.overrides
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.vertex_labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as VertexId)
    }

    /// Parses a list of vertex labels into a face (not necessarily in `Γ`).
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face, ComplexError> {
        let ids = labels
            .iter()
            .map(|l| {
                self.vertex_id(l.as_ref())
                    .ok_or_else(|| ComplexError::UnknownVertex(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Face::try_new(&ids)
    }

    pub fn labels_of(&self, f: &Face) -> Vec<String> {
        f.iter()
            .map(|v| self.vertex_labels[v as usize].clone())
            .collect()
    }

    pub fn simplex_set_labels(&self, s: SimplexSet) -> Vec<String> {
        s.iter().map(|i| self.simplex_labels[i].clone()).collect()
    }

    pub fn simplex_set_from_labels<S: AsRef<str>>(
        &self,
        labels: &[S],
    ) -> Result<SimplexSet, ComplexError> {
        let idx = labels
            .iter()
            .map(|l| {
                self.simplex_labels
                    .iter()
                    .position(|s| s == l.as_ref())
                    .ok_or_else(|| ComplexError::UnknownVertex(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimplexSet::from_indices(idx))
    }

    /// `σ(F)`: the override if present, otherwise the union of the vertex
    /// carriers. Also defined for vertex sets outside `Γ` (by the union).
    pub fn carrier(&self, f: &Face) -> SimplexSet {
        match self.carriers.get(f) {
            Some(c) => *c,
            None => self.union_carrier(f),
        }
    }

    /// `Γ_U = σ^{-1}(2^U)`.
    pub fn restriction(&self, u: SimplexSet) -> SimplicialComplex {
        self.complex.filter(|f| self.carrier(f).is_subset(u))
    }

    /// Faces `F ∈ lk(E)` with `σ(F ⊔ E) = V`.
    pub fn interior_faces(&self, e: &Face) -> Result<InteriorFaces, ComplexError> {
        let lk = self.complex.link(e)?;
        let faces: Vec<Face> = lk
            .faces()
            .filter(|f| self.is_interior(&f.union(e)))
            .cloned()
            .collect();
        let minimal = faces
            .iter()
            .filter(|f| !faces.iter().any(|g| g != *f && g.is_subset(f)))
            .cloned()
            .collect();
        Ok(InteriorFaces { faces, minimal })
    }
}

impl CarrierOracle for Triangulation {
    fn simplex_size(&self) -> usize {
        self.n()
    }

    fn carrier_of(&self, face: &Face) -> SimplexSet {
        self.carrier(face)
    }
}

fn parse_carrier(
    owner: &str,
    carrier: &[String],
    index: &HashMap<String, usize>,
) -> Result<SimplexSet, ComplexError> {
    carrier
        .iter()
        .map(|l| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| ComplexError::CarrierOutsideSimplex {
                    vertex: owner.to_string(),
                    label: l.clone(),
                })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(SimplexSet::from_indices)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn face(t: &Triangulation, labels: &[&str]) -> Face {
        t.face_from_labels(labels).unwrap()
    }

    fn set(t: &Triangulation, labels: &[&str]) -> SimplexSet {
        t.simplex_set_from_labels(labels).unwrap()
    }

    #[test]
    fn carrier_examples() {
        let t = triforce();
        assert_eq!(t.carrier(&face(&t, &["a", "b"])), set(&t, &["u", "v", "w"]));
        assert_eq!(t.carrier(&Face::empty()), SimplexSet::EMPTY);
        assert_eq!(t.carrier(&face(&t, &["c"])), set(&t, &["u", "v"]));
    }

    #[test]
    fn restriction_examples() {
        let t = triforce();
        let path = t.restriction(set(&t, &["u", "v"]));
        let mut expected = vec![face(&t, &["u", "c"]), face(&t, &["c", "v"])];
        expected.sort();
        assert_eq!(path.facets(), expected.as_slice());
        assert_eq!(&t.restriction(t.full_set()), t.complex());
        assert!(t.restriction(SimplexSet::EMPTY).is_void());
        for i in 0..3 {
            let pt = t.restriction(SimplexSet::singleton(i));
            assert_eq!(pt.f_vector(), vec![1, 1]);
        }
    }

    #[test]
    fn interior_face_examples() {
        let t = triforce();
        let i = t.interior_faces(&Face::empty()).unwrap();
        let mut expected = vec![
            face(&t, &["a", "b"]),
            face(&t, &["a", "c"]),
            face(&t, &["b", "c"]),
        ];
        expected.sort();
        assert_eq!(i.minimal, expected);
        let i = t.interior_faces(&face(&t, &["c"])).unwrap();
        assert_eq!(i.minimal, vec![face(&t, &["a"]), face(&t, &["b"])]);

        let trivial = TriangulationBuilder::new("t2", &["x", "y"])
            .vertex("x", &["x"])
            .vertex("y", &["y"])
            .facet(&["x", "y"])
            .build()
            .unwrap();
        let i = trivial.interior_faces(&Face::empty()).unwrap();
        assert_eq!(i.minimal, vec![Face::new([0, 1])]);
    }

    #[test]
    fn invariant_violations_are_rejected() {
        let base = || {
            TriangulationBuilder::new("x", &["p", "q"])
                .vertex("p", &["p"])
                .vertex("q", &["q"])
        };
        assert!(matches!(
            base()
                .vertex("r", &["p"])
                .facet(&["p", "r"])
                .facet(&["r", "q"])
                .build(),
            Err(ComplexError::CornerCount(_, 2))
        ));
        assert!(matches!(
            base().facet(&["p"]).facet(&["q"]).build(),
            Err(ComplexError::WrongDimension { .. })
        ));
        assert!(matches!(
            base().vertex("r", &["z"]).build(),
            Err(ComplexError::CarrierOutsideSimplex { .. })
        ));
        assert!(matches!(
            base().vertex("r", &[]).build(),
            Err(ComplexError::EmptyCarrier(_))
        ));
        assert!(matches!(
            base().facet(&["p", "s"]).build(),
            Err(ComplexError::UnknownVertex(_))
        ));
        assert!(matches!(
            base()
                .facet(&["p", "q"])
                .face_carrier(&["p", "q"], &["p"])
                .build(),
            Err(ComplexError::OverrideBelowUnion(_))
        ));
        assert!(matches!(
            base().vertex("p", &["q"]).build(),
            Err(ComplexError::DuplicateId(_))
        ));
    }

    #[test]
    fn supersets_enumerates_upper_interval() {
        let s = SimplexSet::from_indices([1]);
        let mut all: Vec<u64> = s.supersets(3).map(SimplexSet::bits).collect();
        all.sort();
        assert_eq!(all, vec![0b010, 0b011, 0b110, 0b111]);
        assert_eq!(SimplexSet::EMPTY.supersets(0).count(), 1);
    }

    #[test]
    fn carriers_are_monotone() {
        let t = triforce();
        for f in t.complex().faces() {
            for g in f.subsets() {
                assert!(t.carrier(&g).is_subset(t.carrier(f)));
            }
        }
    }
}
