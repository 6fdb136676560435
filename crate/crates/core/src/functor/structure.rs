use serde::Serialize;

use crate::complex::{Face, SimplexSet, SimplicialComplex, VertexId};
use crate::face_ring::Frame;
use crate::local::LocalError;

/// Largest face whose interior partitions are enumerated (a `2^|F|` scan).
pub const MAX_PARTITION_FACE: usize = 16;

/// Pyramid data of a face `F` of `lk(E)` with `F ⊔ E` interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceStructure {
    pub face: Face,
    /// `𝒜_F`: the `w ∈ F` with `(F ⊔ E) ∖ w` not interior.
    pub apexes: Face,
    /// `V_w = σ((F ⊔ E) ∖ w)^c` for each apex.
    pub base_directions: Vec<(VertexId, SimplexSet)>,
    pub is_u_pyramid: bool,
    /// Unordered interior partitions `(F_1, F_2)` of `F ∖ 𝒜_F`, each listed
    /// once with `|F_1| ≤ |F_2|`.
    pub partitions: Vec<(Face, Face)>,
}

impl FaceStructure {
    pub fn is_pyramid(&self) -> bool {
        !self.apexes.is_empty()
    }

    /// Smallest `|F_1|` over all interior partitions.
    pub fn min_partition_part(&self) -> Option<usize> {
        self.partitions.iter().map(|(a, _)| a.len()).min()
    }
}

pub fn face_structure(frame: &Frame<'_>, f: &Face) -> Result<FaceStructure, LocalError> {
    if !frame.is_interior(f) {
        return Err(LocalError::Precondition(format!(
            "{f:?} ⊔ E is not interior"
        )));
    }
    if f.len() > MAX_PARTITION_FACE {
        return Err(LocalError::Precondition(format!(
            "faces with more than {MAX_PARTITION_FACE} vertices are not analysed"
        )));
    }
    let apexes = Face::new(f.iter().filter(|&w| !frame.is_interior(&f.without(w))));
    let base_directions: Vec<(VertexId, SimplexSet)> = apexes
        .iter()
        .map(|w| (w, frame.missing(&f.without(w))))
        .collect();
    let is_u_pyramid = base_directions.iter().any(|(_, v)| v.len() == 1);

    let rest: Vec<VertexId> = f.difference(&apexes).vertices().to_vec();
    let mut partitions = Vec::new();
    let k = rest.len();
    // each unordered split once: the first part holds rest[0]
    let masks: Vec<u32> = if k == 0 {
        vec![0]
    } else {
        (0..1u32 << k).filter(|m| m & 1 == 1).collect()
    };
    for mask in masks {
        let one = Face::new((0..k).filter(|i| mask >> i & 1 == 1).map(|i| rest[i]));
        let two = Face::new((0..k).filter(|i| mask >> i & 1 == 0).map(|i| rest[i]));
        if frame.is_interior(&one.union(&apexes)) && frame.is_interior(&two.union(&apexes)) {
            partitions.push(if one.len() <= two.len() {
                (one, two)
            } else {
                (two, one)
            });
        }
    }
    partitions.sort_by(|a, b| (a.0.len(), &a.0, &a.1).cmp(&(b.0.len(), &b.0, &b.1)));
    Ok(FaceStructure {
        face: f.clone(),
        apexes,
        base_directions,
        is_u_pyramid,
        partitions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentShape {
    /// A tree with at most one vertex `v` whose `{v} ⊔ E` has carrier
    /// codimension above one.
    Tree,
    /// A single cycle, every vertex of carrier codimension one.
    Unicyclic,
    Violating,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeComponent {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub shape: ComponentShape,
    pub has_four_cycle: bool,
}

/// Edges `e ⊆ Δ` with `e ⊔ E` interior, over all vertices of `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalEdgeGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    /// Carrier codimension of `{v} ⊔ E`, parallel to `vertices`.
    pub codims: Vec<usize>,
    pub components: Vec<EdgeComponent>,
}

impl InternalEdgeGraph {
    /// No component violates both allowed shapes and none has a 4-cycle.
    pub fn satisfies_shapes(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.shape != ComponentShape::Violating && !c.has_four_cycle)
    }
}

pub fn internal_edge_graph(frame: &Frame<'_>, delta: &SimplicialComplex) -> InternalEdgeGraph {
    let vertices = delta.vertices().to_vec();
    let codims: Vec<usize> = vertices
        .iter()
        .map(|&v| frame.codim(&Face::vertex(v)))
        .collect();
    let edges: Vec<(VertexId, VertexId)> = delta
        .faces_of_size(2)
        .iter()
        .filter(|e| frame.is_interior(e))
        .map(|e| (e.vertices()[0], e.vertices()[1]))
        .collect();
    let index = |v: VertexId| vertices.binary_search(&v).expect("edge vertex in Δ");

    // union-find over positions
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &(a, b) in &edges {
        let (ra, rb) = (root(&mut parent, index(a)), root(&mut parent, index(b)));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..vertices.len() {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let components = groups
        .into_values()
        .map(|members| {
            let vs: Vec<VertexId> = members.iter().map(|&i| vertices[i]).collect();
            let es: Vec<(VertexId, VertexId)> = edges
                .iter()
                .filter(|(a, _)| vs.binary_search(a).is_ok())
                .copied()
                .collect();
            let deep = members.iter().filter(|&&i| codims[i] > 1).count();
            let all_codim_one = members.iter().all(|&i| codims[i] == 1);
            let shape = if es.len() + 1 == vs.len() && deep <= 1 {
                ComponentShape::Tree
            } else if es.len() == vs.len() && all_codim_one {
                ComponentShape::Unicyclic
            } else {
                ComponentShape::Violating
            };
            EdgeComponent {
                has_four_cycle: has_four_cycle(&vs, &es),
                vertices: vs,
                edges: es,
                shape,
            }
        })
        .collect();
    InternalEdgeGraph {
        vertices,
        edges,
        codims,
        components,
    }
}

fn has_four_cycle(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> bool {
    let adjacent = |a: VertexId, b: VertexId| edges.contains(&(a.min(b), a.max(b)));
    // a 4-cycle is two vertices with two common neighbours
    for (i, &a) in vertices.iter().enumerate() {
        for &c in &vertices[i + 1..] {
            let common = vertices
                .iter()
                .filter(|&&x| x != a && x != c && adjacent(a, x) && adjacent(c, x))
                .count();
            if common >= 2 {
                return true;
            }
        }
    }
    false
}
