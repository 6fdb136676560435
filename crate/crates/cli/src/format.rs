//! The JSON wire formats: triangulation files and standalone face files.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Read;

use localh::complex::{SimplexSet, Triangulation, TriangulationBuilder};
use localh::local::StandaloneFace;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub carrier: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceCarrierEntry {
    pub face: Vec<String>,
    pub carrier: Vec<String>,
}

/// A precomputed local h-vector stored alongside a fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalHRecord {
    pub face: Vec<String>,
    pub ell: Vec<i64>,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationFile {
    pub name: String,
    pub simplex_vertices: Vec<String>,
    pub vertices: Vec<VertexEntry>,
    pub facets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub face_carriers: Vec<FaceCarrierEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub local_h: Vec<LocalHRecord>,
}

/// One face of a triangulation described by its vertex carriers and the
/// carrier and size of the face `E` whose link it lies in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StandaloneFaceFile {
    pub name: String,
    pub simplex_vertices: Vec<String>,
    pub vertices: Vec<VertexEntry>,
    #[serde(default)]
    pub e_carrier: Vec<String>,
    #[serde(default)]
    pub e_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Triangulation(TriangulationFile),
    Standalone(StandaloneFaceFile),
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Triangulation(t) => &t.name,
            Input::Standalone(s) => &s.name,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Input::Triangulation(t) => serde_json::to_value(t),
            Input::Standalone(s) => serde_json::to_value(s),
        }
        .expect("formats serialize")
    }
}

/// Parses either format; a document with a `facets` key is a triangulation.
pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let Value::Object(map) = &value else {
        return Err(CliError::Schema("top level must be an object".into()));
    };
    let input = if map.contains_key("facets") {
        let t: TriangulationFile =
            serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))?;
        t.check_schema()?;
        Input::Triangulation(t)
    } else {
        let s: StandaloneFaceFile =
            serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))?;
        s.check_schema()?;
        Input::Standalone(s)
    };
    Ok(input)
}

/// Reads `-` (stdin), `builtin:<name>` or a file path.
pub fn load(source: &str) -> Result<Input, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return corpus::builtin(name);
    }
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source)
            .map_err(|e| CliError::Usage(format!("reading {source}: {e}")))?
    };
    parse_input(&text)
}

fn check_labels(simplex: &[String], vertices: &[VertexEntry]) -> Result<HashSet<String>, CliError> {
    let corners: HashSet<&String> = simplex.iter().collect();
    if corners.len() != simplex.len() {
        return Err(CliError::Schema(
            "simplex_vertices contains a duplicate".into(),
        ));
    }
    let mut ids = HashSet::new();
    for v in vertices {
        if !ids.insert(v.id.clone()) {
            return Err(CliError::Schema(format!(
                "vertex id `{}` declared twice",
                v.id
            )));
        }
        if v.carrier.is_empty() {
            return Err(CliError::Schema(format!(
                "vertex `{}` has an empty carrier",
                v.id
            )));
        }
        check_carrier(&corners, &v.id, &v.carrier)?;
    }
    Ok(ids)
}

fn check_carrier(
    corners: &HashSet<&String>,
    owner: &str,
    carrier: &[String],
) -> Result<(), CliError> {
    if let Some(x) = carrier.iter().find(|x| !corners.contains(x)) {
        return Err(CliError::Schema(format!(
            "carrier of `{owner}` mentions `{x}`, which is not in simplex_vertices"
        )));
    }
    Ok(())
}

fn check_declared(ids: &HashSet<String>, face: &[String], what: &str) -> Result<(), CliError> {
    if let Some(x) = face.iter().find(|x| !ids.contains(*x)) {
        return Err(CliError::Schema(format!(
            "{what} mentions undeclared vertex `{x}`"
        )));
    }
    Ok(())
}

impl TriangulationFile {
    /// Referential integrity: ids unique and declared, carriers inside the
    /// simplex.
    pub fn check_schema(&self) -> Result<(), CliError> {
        let ids = check_labels(&self.simplex_vertices, &self.vertices)?;
        let corners: HashSet<&String> = self.simplex_vertices.iter().collect();
        for f in &self.facets {
            check_declared(&ids, f, "a facet")?;
        }
        for o in &self.face_carriers {
            check_declared(&ids, &o.face, "a face carrier override")?;
            check_carrier(&corners, &o.face.join(","), &o.carrier)?;
        }
        for r in &self.local_h {
            check_declared(&ids, &r.face, "a local_h record")?;
        }
        Ok(())
    }

    pub fn builder(&self) -> TriangulationBuilder {
        TriangulationBuilder {
            name: self.name.clone(),
            simplex_vertices: self.simplex_vertices.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| (v.id.clone(), v.carrier.clone()))
                .collect(),
            facets: self.facets.clone(),
            face_carriers: self
                .face_carriers
                .iter()
                .map(|o| (o.face.clone(), o.carrier.clone()))
                .collect(),
        }
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        let carrier_labels = |s: SimplexSet| t.simplex_set_labels(s);
        let mut face_carriers: Vec<FaceCarrierEntry> = t
            .overrides()
            .iter()
            .map(|(f, c)| FaceCarrierEntry {
                face: t.labels_of(f),
                carrier: carrier_labels(*c),
            })
            .collect();
        face_carriers.sort_by(|a, b| a.face.cmp(&b.face));
        TriangulationFile {
            name: t.name().to_string(),
            simplex_vertices: t.simplex_labels().to_vec(),
            vertices: t
                .vertex_labels()
                .iter()
                .zip(t.vertex_carriers())
                .map(|(id, c)| VertexEntry {
                    id: id.clone(),
                    carrier: carrier_labels(*c),
                })
                .collect(),
            facets: t
                .complex()
                .facets()
                .iter()
                .map(|f| t.labels_of(f))
                .collect(),
            face_carriers,
            local_h: Vec::new(),
        }
    }

    /// Replaces every facet `G ⊇ F` by the facets `(G ∖ {v}) ∪ {p}`,
    /// `v ∈ F`. The new vertex is carried by the union of the carriers of
    /// `F`.
    pub fn stellar(&self, face: &[&str], new_vertex: &str, name: &str) -> Self {
        let face: BTreeSet<&str> = face.iter().copied().collect();
        let carriers: HashMap<&str, &Vec<String>> = self
            .vertices
            .iter()
            .map(|v| (v.id.as_str(), &v.carrier))
            .collect();
        let union: BTreeSet<&String> = face.iter().flat_map(|v| carriers[v].iter()).collect();
        let carrier: Vec<String> = self
            .simplex_vertices
            .iter()
            .filter(|c| union.contains(c))
            .cloned()
            .collect();
        let mut facets = Vec::new();
        for g in &self.facets {
            if !face.iter().all(|v| g.iter().any(|x| x == v)) {
                facets.push(g.clone());
                continue;
            }
            for v in &face {
                let mut h: Vec<String> = g.iter().filter(|x| x != v).cloned().collect();
                h.push(new_vertex.to_string());
                facets.push(h);
            }
        }
        let mut vertices = self.vertices.clone();
        vertices.push(VertexEntry {
            id: new_vertex.to_string(),
            carrier,
        });
        TriangulationFile {
            name: name.to_string(),
            simplex_vertices: self.simplex_vertices.clone(),
            vertices,
            facets,
            face_carriers: Vec::new(),
            local_h: Vec::new(),
        }
    }
}

impl StandaloneFaceFile {
    pub fn check_schema(&self) -> Result<(), CliError> {
        check_labels(&self.simplex_vertices, &self.vertices)?;
        let corners: HashSet<&String> = self.simplex_vertices.iter().collect();
        check_carrier(&corners, "E", &self.e_carrier)
    }

    pub fn to_face(&self) -> Result<StandaloneFace, CliError> {
        let index = |labels: &[String]| {
            SimplexSet::from_indices(labels.iter().map(|l| {
                self.simplex_vertices
                    .iter()
                    .position(|x| x == l)
                    .expect("schema checked")
            }))
        };
        StandaloneFace::new(
            self.simplex_vertices.clone(),
            self.vertices.iter().map(|v| v.id.clone()).collect(),
            self.vertices.iter().map(|v| index(&v.carrier)).collect(),
            index(&self.e_carrier),
            self.e_size,
        )
        .map_err(|e| CliError::Validation(e.to_string()))
    }
}
