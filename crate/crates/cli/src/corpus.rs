//! Builtin fixtures. Everything beyond the triforce and the trivial
//! triangulations is produced by stellar subdivision, so every fixture is
//! geometric.

use localh::complex::Face;
use localh::local::local_h_incexc;

use crate::error::CliError;
use crate::format::{Input, LocalHRecord, StandaloneFaceFile, TriangulationFile, VertexEntry};

pub const TRIANGULATIONS: &[&str] = &[
    "triforce",
    "trivial-1",
    "trivial-2",
    "trivial-3",
    "trivial-4",
    "stellar-interior-2simplex",
    "edge-2simplex",
    "barycentric-2simplex",
    "iterated-2simplex",
    "triforce-starred",
    "stellar-interior-3simplex",
    "edge-3simplex",
    "triangle-face-3simplex",
];

pub const STANDALONE: &[&str] = &["six-vertex-split-face", "six-vertex-corner-facet"];

pub fn names() -> Vec<&'static str> {
    TRIANGULATIONS.iter().chain(STANDALONE).copied().collect()
}

pub fn builtin(name: &str) -> Result<Input, CliError> {
    if let Some(s) = standalone(name) {
        return Ok(Input::Standalone(s));
    }
    let mut t = triangulation(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown builtin `{name}`; known: {}",
            names().join(", ")
        ))
    })?;
    let built = t.builder().build()?;
    let ell = local_h_incexc(&built, &Face::empty())?;
    t.local_h = vec![LocalHRecord {
        face: Vec::new(),
        ell: ell.values,
        method: "incexc".into(),
    }];
    Ok(Input::Triangulation(t))
}

fn entry(id: &str, carrier: &[&str]) -> VertexEntry {
    VertexEntry {
        id: id.into(),
        carrier: carrier.iter().map(|s| s.to_string()).collect(),
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn triforce() -> TriangulationFile {
    TriangulationFile {
        name: "triforce".into(),
        simplex_vertices: strings(&["u", "v", "w"]),
        vertices: vec![
            entry("a", &["v", "w"]),
            entry("b", &["u", "w"]),
            entry("c", &["u", "v"]),
            entry("u", &["u"]),
            entry("v", &["v"]),
            entry("w", &["w"]),
        ],
        facets: vec![
            strings(&["a", "b", "c"]),
            strings(&["u", "b", "c"]),
            strings(&["v", "a", "c"]),
            strings(&["w", "a", "b"]),
        ],
        face_carriers: Vec::new(),
        local_h: Vec::new(),
    }
}

/// The simplex on `1, …, n` triangulated by itself.
pub fn trivial(n: usize) -> TriangulationFile {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    TriangulationFile {
        name: format!("trivial-{n}"),
        simplex_vertices: labels.clone(),
        vertices: labels
            .iter()
            .map(|l| VertexEntry {
                id: l.clone(),
                carrier: vec![l.clone()],
            })
            .collect(),
        facets: vec![labels],
        face_carriers: Vec::new(),
        local_h: Vec::new(),
    }
}

fn triangulation(name: &str) -> Option<TriangulationFile> {
    let t = match name {
        "triforce" => triforce(),
        "stellar-interior-2simplex" => trivial(3).stellar(&["1", "2", "3"], "p", name),
        "edge-2simplex" => trivial(3).stellar(&["1", "2"], "m", name),
        "barycentric-2simplex" => barycentric(3, name),
        "iterated-2simplex" => {
            trivial(3)
                .stellar(&["1", "2"], "m", name)
                .stellar(&["1", "3", "m"], "q", name)
        }
        "triforce-starred" => triforce().stellar(&["a", "b", "c"], "p", name),
        "stellar-interior-3simplex" => trivial(4).stellar(&["1", "2", "3", "4"], "p", name),
        "edge-3simplex" => trivial(4).stellar(&["1", "2"], "m", name),
        "triangle-face-3simplex" => trivial(4).stellar(&["1", "2", "3"], "m", name),
        _ => {
            let n: usize = name.strip_prefix("trivial-")?.parse().ok()?;
            if !(1..=8).contains(&n) {
                return None;
            }
            trivial(n)
        }
    };
    Some(t)
}

/// Stars every face of the simplex on `1, …, n` of size at least two,
/// largest first.
pub fn barycentric(n: usize, name: &str) -> TriangulationFile {
    let mut t = trivial(n);
    for size in (2..=n).rev() {
        for mask in (0u32..1 << n).filter(|m| m.count_ones() as usize == size) {
            let face: Vec<String> = (1..=n)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .map(|i| i.to_string())
                .collect();
            let refs: Vec<&str> = face.iter().map(String::as_str).collect();
            t = t.stellar(&refs, &format!("b{}", face.concat()), name);
        }
    }
    t
}

fn six_vertex(name: &str, carriers: [&[usize]; 6]) -> StandaloneFaceFile {
    StandaloneFaceFile {
        name: name.into(),
        simplex_vertices: (1..=6).map(|i| format!("v{i}")).collect(),
        vertices: carriers
            .iter()
            .enumerate()
            .map(|(i, c)| VertexEntry {
                id: format!("w{}", i + 1),
                carrier: c.iter().map(|j| format!("v{j}")).collect(),
            })
            .collect(),
        e_carrier: Vec::new(),
        e_size: 0,
    }
}

fn standalone(name: &str) -> Option<StandaloneFaceFile> {
    match name {
        // interior face with a partition into two interior triangles
        "six-vertex-split-face" => Some(six_vertex(
            name,
            [
                &[1, 3, 6],
                &[1, 4, 5],
                &[2, 3, 5],
                &[2, 4, 6],
                &[3, 4, 5],
                &[3, 5, 6],
            ],
        )),
        // three corners plus three vertices on codimension-3 faces
        "six-vertex-corner-facet" => Some(six_vertex(
            name,
            [&[1], &[2], &[3], &[1, 4, 5], &[2, 4, 6], &[3, 5, 6]],
        )),
        _ => None,
    }
}
