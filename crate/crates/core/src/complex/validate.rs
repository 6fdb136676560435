//! Checks of the homology-triangulation and quasi-geometric axioms.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::homology::{has_sphere_homology, is_acyclic, BettiCache};
use super::{ComplexError, Face, SimplexSet, SimplicialComplex, Triangulation};
use crate::field::Characteristic;

pub const DEFAULT_FACE_CEILING: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Betti conditions on every `Γ_U` and its boundary, plus the
    /// pseudomanifold test identifying interior faces.
    #[default]
    Fast,
    /// Additionally every link condition of the homology-ball definition.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subset: SimplexSet,
    pub face: Option<Face>,
    pub condition: String,
    pub betti: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub characteristic: Characteristic,
    pub subsets_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every nonempty `U ⊆ V`, that `Γ_U` is a homology ball of
/// dimension `|U| - 1` whose interior faces are exactly `σ^{-1}(U)`.
pub fn validate_homology_triangulation(
    t: &Triangulation,
    mode: ValidationMode,
    ch: Characteristic,
    face_ceiling: usize,
) -> Result<ValidationReport, ComplexError> {
    let faces = t.complex().num_faces();
    if faces > face_ceiling {
        return Err(ComplexError::FaceCeiling {
            faces,
            ceiling: face_ceiling,
        });
    }
    ch.check().map_err(ComplexError::Characteristic)?;
    let cache = BettiCache::new();
    let n = t.n();
    let subsets: Vec<SimplexSet> = SimplexSet::EMPTY
        .supersets(n)
        .filter(|u| !u.is_empty())
        .collect();
    let mut violations: Vec<Violation> = subsets
        .par_iter()
        .map(|&u| check_subset(t, u, mode, ch, &cache))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    violations.sort_by(|a, b| {
        (a.subset.len(), a.subset.bits(), &a.face).cmp(&(b.subset.len(), b.subset.bits(), &b.face))
    });
    Ok(ValidationReport {
        mode,
        characteristic: ch,
        subsets_checked: subsets.len(),
        violations,
    })
}

fn check_subset(
    t: &Triangulation,
    u: SimplexSet,
    mode: ValidationMode,
    ch: Characteristic,
    cache: &BettiCache,
) -> Result<Vec<Violation>, ComplexError> {
    let mut out = Vec::new();
    let ball_dim = u.len() as isize - 1;
    let gamma_u = t.restriction(u);
    let boundary = gamma_u.filter(|f| t.carrier(f) != u);
    let violation = |face: Option<Face>, condition: String, betti: Option<Vec<usize>>| Violation {
        subset: u,
        face,
        condition,
        betti,
    };

    if gamma_u.dim() != ball_dim || !gamma_u.is_pure() {
        out.push(violation(
            None,
            format!(
                "Γ_U must be pure of dimension {ball_dim}, found dimension {}",
                gamma_u.dim()
            ),
            None,
        ));
        return Ok(out);
    }
    let betti = cache.get(&gamma_u, ch)?;
    if !is_acyclic(&betti, &gamma_u) {
        out.push(violation(
            None,
            "Γ_U has nontrivial reduced homology".into(),
            Some(betti),
        ));
    }
    let betti = cache.get(&boundary, ch)?;
    if !has_sphere_homology(&betti, &boundary, ball_dim - 1) {
        out.push(violation(
            None,
            format!(
                "∂Γ_U is not a homology sphere of dimension {}",
                ball_dim - 1
            ),
            Some(betti),
        ));
    }
    // interior ridges lie in two facets, boundary ridges in one
    if ball_dim >= 1 {
        let mut incidence: HashMap<Face, usize> = HashMap::new();
        for f in gamma_u.facets() {
            for r in f.boundary() {
                *incidence.entry(r).or_default() += 1;
            }
        }
        let mut incidence: Vec<(Face, usize)> = incidence.into_iter().collect();
        incidence.sort();
        for (ridge, count) in incidence {
            let interior = t.carrier(&ridge) == u;
            let expected = if interior { 2 } else { 1 };
            if count != expected {
                out.push(violation(
                    Some(ridge),
                    format!(
                        "{} ridge lies in {count} facets of Γ_U, expected {expected}",
                        if interior { "interior" } else { "boundary" }
                    ),
                    None,
                ));
            }
        }
    }

    if mode == ValidationMode::Full {
        for f in gamma_u.faces().filter(|f| !f.is_empty()) {
            let lk = gamma_u.link(f)?;
            let link_dim = ball_dim - f.len() as isize;
            let betti = cache.get(&lk, ch)?;
            if t.carrier(f) == u {
                if !has_sphere_homology(&betti, &lk, link_dim) {
                    out.push(violation(
                        Some(f.clone()),
                        format!("link of interior face is not a homology sphere of dimension {link_dim}"),
                        Some(betti),
                    ));
                }
            } else {
                if !is_acyclic(&betti, &lk) || lk.dim() != link_dim {
                    out.push(violation(
                        Some(f.clone()),
                        format!(
                            "link of boundary face is not a homology ball of dimension {link_dim}"
                        ),
                        Some(betti),
                    ));
                }
                let blk = boundary.link(f)?;
                let betti = cache.get(&blk, ch)?;
                if !has_sphere_homology(&betti, &blk, link_dim - 1) {
                    out.push(violation(
                        Some(f.clone()),
                        format!(
                            "boundary link is not a homology sphere of dimension {}",
                            link_dim - 1
                        ),
                        Some(betti),
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiGeometricWitness {
    pub face: Face,
    /// Union of the vertex carriers of `face`.
    pub subset: SimplexSet,
    /// `dim Γ_U`, strictly smaller than `dim face`.
    pub restriction_dim: isize,
}

/// True iff no face `F` has `dim Γ_{U_F} < dim F`, where `U_F` is the union
/// of the carriers of the vertices of `F`.
pub fn is_quasi_geometric(t: &Triangulation) -> (bool, Option<QuasiGeometricWitness>) {
    let mut dims: HashMap<SimplexSet, isize> = HashMap::new();
    for f in t.complex().faces() {
        let u = f.iter().fold(SimplexSet::EMPTY, |acc, v| {
            acc.union(t.vertex_carriers()[v as usize])
        });
        let d = *dims.entry(u).or_insert_with(|| restriction_dim(t, u));
        if d < f.dim() {
            return (
                false,
                Some(QuasiGeometricWitness {
                    face: f.clone(),
                    subset: u,
                    restriction_dim: d,
                }),
            );
        }
    }
    (true, None)
}

fn restriction_dim(t: &Triangulation, u: SimplexSet) -> isize {
    let c: SimplicialComplex = t.restriction(u);
    c.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::TriangulationBuilder;

    fn triforce_builder(skip_middle: bool) -> TriangulationBuilder {
        let b = TriangulationBuilder::new("triforce", &["u", "v", "w"])
            .vertex("a", &["v", "w"])
            .vertex("b", &["u", "w"])
            .vertex("c", &["u", "v"])
            .vertex("u", &["u"])
            .vertex("v", &["v"])
            .vertex("w", &["w"]);
        let b = if skip_middle {
            b
        } else {
            b.facet(&["a", "b", "c"])
        };
        b.facet(&["u", "b", "c"])
            .facet(&["v", "a", "c"])
            .facet(&["w", "a", "b"])
    }

    #[test]
    fn triforce_passes_both_modes() {
        let t = triforce_builder(false).build().unwrap();
        for mode in [ValidationMode::Fast, ValidationMode::Full] {
            let r = validate_homology_triangulation(
                &t,
                mode,
                Characteristic::Zero,
                DEFAULT_FACE_CEILING,
            )
            .unwrap();
            assert!(r.passed(), "{:?}", r.violations);
            assert_eq!(r.subsets_checked, 7);
        }
    }

    #[test]
    fn trivial_triangulation_passes() {
        let t = TriangulationBuilder::new("t3", &["x", "y", "z"])
            .vertex("x", &["x"])
            .vertex("y", &["y"])
            .vertex("z", &["z"])
            .facet(&["x", "y", "z"])
            .build()
            .unwrap();
        let r =
            validate_homology_triangulation(&t, ValidationMode::Full, Characteristic::Zero, 100)
                .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn annulus_fails_with_h1() {
        let t = triforce_builder(true).build().unwrap();
        let r = validate_homology_triangulation(
            &t,
            ValidationMode::Fast,
            Characteristic::Zero,
            DEFAULT_FACE_CEILING,
        )
        .unwrap();
        assert!(!r.passed());
        let full = t.full_set();
        let v = r
            .violations
            .iter()
            .find(|v| v.subset == full && v.face.is_none() && v.betti.is_some())
            .expect("violation on U = V");
        assert_eq!(v.betti.as_deref(), Some(&[0, 1, 0][..]));
    }

    #[test]
    fn face_ceiling_aborts() {
        let t = triforce_builder(false).build().unwrap();
        assert!(matches!(
            validate_homology_triangulation(&t, ValidationMode::Fast, Characteristic::Zero, 5),
            Err(ComplexError::FaceCeiling {
                faces: 20,
                ceiling: 5
            })
        ));
    }

    #[test]
    fn quasi_geometric_examples() {
        let t = triforce_builder(false).build().unwrap();
        assert_eq!(is_quasi_geometric(&t), (true, None));

        // A triangle {x1, m, x2} whose vertex carriers fit in the edge {v1, v2}
        // but which is declared interior; Γ_{v1,v2} is only a circle.
        let t = TriangulationBuilder::new("flat", &["v1", "v2", "v3"])
            .vertex("x1", &["v1"])
            .vertex("x2", &["v2"])
            .vertex("x3", &["v3"])
            .vertex("m", &["v1", "v2"])
            .facet(&["x1", "m", "x2"])
            .facet(&["x1", "x2", "x3"])
            .face_carrier(&["x1", "m", "x2"], &["v1", "v2", "v3"])
            .build()
            .unwrap();
        let (ok, w) = is_quasi_geometric(&t);
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(t.labels_of(&w.face), vec!["x1", "x2", "m"]);
        assert_eq!(t.simplex_set_labels(w.subset), vec!["v1", "v2"]);
        assert_eq!(w.restriction_dim, 1);
        // and it is not a homology triangulation either
        let r =
            validate_homology_triangulation(&t, ValidationMode::Fast, Characteristic::Zero, 100)
                .unwrap();
        assert!(!r.passed());
    }
}
