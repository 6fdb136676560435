use rayon::prelude::*;
use serde::Serialize;

use super::structure::{face_structure, internal_edge_graph, FaceStructure};
use crate::complex::{Face, SimplicialComplex};
use crate::face_ring::Monomial;
use crate::field::Field;
use crate::local::{restrict_module, LocalError, LocalSetup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Vanishing,
    Nonvanishing,
    /// Some computed fact contradicts a proven statement.
    Contradiction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `𝒜_F = F`, `F` not a U-pyramid: `x^F` is nonzero in `L`.
    ApexMonomial,
    /// An interior partition with `|F_1| ≤ 2` of a face that is not a
    /// U-pyramid: `L` is nonzero in degree `|F_1| + |𝒜_F|`.
    InteriorPartition,
    /// `σ(E)` of codimension one: `ℓ_1 ≥ #{v : {v} ⊔ E interior} - 1`.
    CodimOneBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub face: Face,
    pub kind: WitnessKind,
    pub degree: usize,
    /// Predicted lower bound on `ℓ_degree`.
    pub bound: usize,
    /// Whether the computed module meets the prediction.
    pub confirmed: bool,
}

/// One family of checks; `failures` lists the offending faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<Face>,
}

impl AuditCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub e: Face,
    pub verdict: Verdict,
    pub ell: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub audits: Vec<AuditCheck>,
    /// Interior faces too large for partition enumeration.
    pub skipped: Vec<Face>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.audits.iter().all(AuditCheck::passed)
    }
}

/// Runs the structural necessary conditions for vanishing against the
/// computed `L(Γ,E)`: nonvanishing witnesses from pyramids and interior
/// partitions, and, when `ℓ = 0`, the U-pyramid condition and the shapes of
/// internal edge graphs of faces without interior vertices.
pub fn vanishing_structure_audit<F: Field>(
    setup: &LocalSetup<'_, F>,
) -> Result<AnalysisReport, LocalError> {
    let frame = setup.frame();
    let d = setup.d();
    let ell = setup.module(d).dims;
    let vanishing = ell.iter().all(|&x| x == 0);
    let link = setup.link();
    let codim_e = frame.b();

    let interior: Vec<&Face> = link.faces().filter(|f| frame.is_interior(f)).collect();
    let structures: Vec<Result<FaceStructure, LocalError>> = interior
        .par_iter()
        .map(|f| face_structure(&frame, f))
        .collect();
    let mut skipped = Vec::new();
    let mut analysed = Vec::new();
    for (f, s) in interior.iter().zip(structures) {
        match s {
            Ok(s) => analysed.push(s),
            Err(LocalError::Precondition(_)) => skipped.push((*f).clone()),
            Err(e) => return Err(e),
        }
    }

    let mut witnesses = Vec::new();
    for s in &analysed {
        if s.is_u_pyramid {
            continue;
        }
        if s.apexes == s.face {
            let x = Monomial::of_face(&s.face);
            let m = x.degree();
            let residue = setup
                .reduction()
                .residue(setup.ring().monomial_vector(&x), m);
            witnesses.push(Witness {
                face: s.face.clone(),
                kind: WitnessKind::ApexMonomial,
                degree: m,
                bound: 1,
                confirmed: !residue.is_empty(),
            });
        } else if let Some(p) = s.min_partition_part().filter(|&p| p <= 2) {
            let degree = p + s.apexes.len();
            witnesses.push(Witness {
                face: s.face.clone(),
                kind: WitnessKind::InteriorPartition,
                degree,
                bound: 1,
                confirmed: ell.get(degree).copied().unwrap_or(0) >= 1,
            });
        }
    }
    let interior_vertices: Vec<Face> = link
        .faces_of_size(1)
        .iter()
        .filter(|v| frame.is_interior(v))
        .cloned()
        .collect();
    if codim_e == 1 && interior_vertices.len() >= 2 {
        let bound = interior_vertices.len() - 1;
        witnesses.push(Witness {
            face: Face::new(interior_vertices.iter().flat_map(|v| v.iter())),
            kind: WitnessKind::CodimOneBound,
            degree: 1,
            bound,
            confirmed: ell.get(1).copied().unwrap_or(0) >= bound,
        });
    }

    let mut audits = vec![AuditCheck {
        name: "witnesses-confirmed",
        checked: witnesses.len(),
        failures: witnesses
            .iter()
            .filter(|w| !w.confirmed)
            .map(|w| w.face.clone())
            .collect(),
    }];
    if vanishing {
        let candidates: Vec<&FaceStructure> = analysed
            .iter()
            .filter(|s| s.min_partition_part().is_some_and(|p| p <= 2))
            .collect();
        audits.push(AuditCheck {
            name: "u-pyramid",
            checked: candidates.len(),
            failures: candidates
                .iter()
                .filter(|s| !s.is_u_pyramid)
                .map(|s| s.face.clone())
                .collect(),
        });
        if codim_e >= 2 {
            audits.extend(edge_graph_checks(setup)?);
        }
    }

    let verdict = if audits.iter().any(|a| !a.passed()) {
        Verdict::Contradiction
    } else if vanishing {
        Verdict::Vanishing
    } else {
        Verdict::Nonvanishing
    };
    witnesses.sort_by(|a, b| (a.kind, &a.face).cmp(&(b.kind, &b.face)));
    Ok(AnalysisReport {
        e: setup.e().clone(),
        verdict,
        ell,
        witnesses,
        audits,
        skipped,
    })
}

/// For faces without interior vertices (and the largest such subcomplex):
/// the restricted module vanishes in degree 2 and every component of the
/// internal edge graph has an allowed shape without 4-cycles.
fn edge_graph_checks<F: Field>(setup: &LocalSetup<'_, F>) -> Result<Vec<AuditCheck>, LocalError> {
    let frame = setup.frame();
    let link = setup.link();
    let no_interior_vertex = |f: &Face| f.iter().all(|v| !frame.is_interior(&Face::vertex(v)));
    let mut subcomplexes: Vec<(Face, SimplicialComplex)> = link
        .faces()
        .filter(|f| f.len() >= 2 && no_interior_vertex(f))
        .filter(|f| {
            let g = internal_edge_graph(&frame, &SimplicialComplex::simplex((*f).clone()));
            !g.edges.is_empty()
        })
        .map(|f| (f.clone(), SimplicialComplex::simplex(f.clone())))
        .collect();
    let keep: std::collections::BTreeSet<_> = link
        .vertices()
        .iter()
        .copied()
        .filter(|&v| !frame.is_interior(&Face::vertex(v)))
        .collect();
    if keep.len() < link.vertices().len() || subcomplexes.is_empty() {
        subcomplexes.push((Face::new(keep.iter().copied()), link.induced(&keep)));
    }

    let results: Vec<Result<(Face, bool, bool), LocalError>> = subcomplexes
        .par_iter()
        .map(|(label, delta)| {
            let restricted = restrict_module(setup, delta, 2)?;
            let shapes = internal_edge_graph(&frame, delta).satisfies_shapes();
            Ok((label.clone(), restricted.dims[2] == 0, shapes))
        })
        .collect();
    let mut vanish = AuditCheck {
        name: "restriction-vanishes",
        checked: 0,
        failures: Vec::new(),
    };
    let mut shapes = AuditCheck {
        name: "edge-graph-shapes",
        checked: 0,
        failures: Vec::new(),
    };
    for r in results {
        let (face, zero, ok) = r?;
        vanish.checked += 1;
        shapes.checked += 1;
        if !zero {
            vanish.failures.push(face.clone());
        }
        if !ok {
            shapes.failures.push(face);
        }
    }
    Ok(vec![vanish, shapes])
}
