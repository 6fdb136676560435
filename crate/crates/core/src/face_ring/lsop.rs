use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{ArtinianReduction, FaceRing, Frame, LinearForm};
use crate::complex::{Face, SimplicialComplex, VertexId};
use crate::field::Field;
use crate::linalg::{rank, Matrix};

pub const DEFAULT_COEFFICIENT_BOUND: i64 = 997;
pub const DEFAULT_RETRIES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LsopConfig {
    /// Coefficients are drawn from the nonzero integers in `[-bound, bound]`.
    pub bound: i64,
    pub retries: usize,
}

impl Default for LsopConfig {
    fn default() -> Self {
        LsopConfig {
            bound: DEFAULT_COEFFICIENT_BOUND,
            retries: DEFAULT_RETRIES,
        }
    }
}

/// A face meeting fewer supports than it has vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarriageWitness {
    pub face: Face,
    pub meeting: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LsopError {
    #[error("face {:?} meets only {} of the supports", .0.face, .0.meeting)]
    Marriage(MarriageWitness),
    #[error("no draw satisfied the facet condition after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("coefficient bound must be positive, got {0}")]
    Bound(i64),
    #[error("expected {expected} forms, got {got}")]
    Count { expected: usize, got: usize },
    #[error("form {index} is supported outside the allowed vertices")]
    Support { index: usize },
    #[error("restrictions to facet {0:?} do not span")]
    Degenerate(Face),
}

/// Ordered forms `θ_1, …, θ_d` with `supp θ_i ⊆ {w : v_i ∈ σ(w)}` for
/// `i ≤ b`, verified against the facet condition on every facet.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialLsop<F> {
    forms: Vec<LinearForm<F>>,
    b: usize,
    directions: Vec<usize>,
    seed: Option<u64>,
    attempts: usize,
}

impl<F: Field> SpecialLsop<F> {
    /// Checks given forms against the support constraint and the facet condition.
    pub fn from_forms(
        frame: &Frame<'_>,
        complex: &SimplicialComplex,
        forms: Vec<LinearForm<F>>,
    ) -> Result<Self, LsopError> {
        if forms.len() != frame.d() {
            return Err(LsopError::Count {
                expected: frame.d(),
                got: forms.len(),
            });
        }
        let supports = special_supports(frame, complex);
        for (i, (f, s)) in forms.iter().zip(&supports).enumerate() {
            if !f.support().iter().all(|v| s.binary_search(v).is_ok()) {
                return Err(LsopError::Support { index: i });
            }
        }
        if let Some(facet) = degenerate_facet(&forms, complex) {
            return Err(LsopError::Degenerate(facet));
        }
        Ok(SpecialLsop {
            forms,
            b: frame.b(),
            directions: frame.directions(),
            seed: None,
            attempts: 0,
        })
    }

    pub fn forms(&self) -> &[LinearForm<F>] {
        &self.forms
    }

    pub fn d(&self) -> usize {
        self.forms.len()
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `v_1, …, v_b` as indices into `V`.
    pub fn directions(&self) -> &[usize] {
        &self.directions
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Number of draws used by the sampler (1 on first success).
    pub fn attempts(&self) -> usize {
        self.attempts
    }

    /// Forms restricted to the vertices of a subcomplex.
    pub fn restricted(&self, vertices: &[VertexId]) -> Vec<LinearForm<F>> {
        self.forms.iter().map(|f| f.restrict_to(vertices)).collect()
    }
}

/// `S_i = {w ∈ Δ : v_i ∈ σ(w)}` for `i ≤ b`, all vertices of `Δ` for
/// `i > b`. Each list is sorted.
pub fn special_supports(frame: &Frame<'_>, complex: &SimplicialComplex) -> Vec<Vec<VertexId>> {
    let vertices = complex.vertices();
    let directions = frame.directions();
    (0..frame.d())
        .map(|i| match directions.get(i) {
            Some(&v) => vertices
                .iter()
                .copied()
                .filter(|&w| frame.oracle().carrier_of(&Face::vertex(w)).contains(v))
                .collect(),
            None => vertices.to_vec(),
        })
        .collect()
}

/// Every nonempty face `F` must meet at least `|F|` of the supports; the
/// smallest violating face is returned otherwise.
pub fn marriage_check(
    supports: &[Vec<VertexId>],
    complex: &SimplicialComplex,
) -> Result<(), MarriageWitness> {
    for f in complex.faces().filter(|f| !f.is_empty()) {
        let meeting = supports
            .iter()
            .filter(|s| s.iter().any(|&w| f.contains(w)))
            .count();
        if meeting < f.len() {
            return Err(MarriageWitness {
                face: f.clone(),
                meeting,
            });
        }
    }
    Ok(())
}

/// The facet condition: the restrictions of the forms to each facet `F` span a
/// space of dimension `|F|`.
pub fn verify_lsop<F: Field>(forms: &[LinearForm<F>], complex: &SimplicialComplex) -> bool {
    degenerate_facet(forms, complex).is_none()
}

fn degenerate_facet<F: Field>(
    forms: &[LinearForm<F>],
    complex: &SimplicialComplex,
) -> Option<Face> {
    complex
        .facets()
        .iter()
        .find(|facet| {
            let rows: Vec<Vec<F>> = forms.iter().map(|f| f.to_dense(facet.vertices())).collect();
            let m = Matrix::from_dense_rows(facet.len(), rows);
            rank(&m) != facet.len()
        })
        .cloned()
}

pub(crate) fn nonzero_coefficient<F: Field>(rng: &mut ChaCha8Rng, bound: i64) -> F {
    loop {
        let c: i64 = rng.random_range(-bound..=bound);
        if c == 0 {
            continue;
        }
        let x = F::from_i64(c);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Draws a special l.s.o.p. with coefficients from a ChaCha stream seeded by
/// `seed`, retrying until the facet condition holds.
pub fn sample_lsop<F: Field>(
    frame: &Frame<'_>,
    complex: &SimplicialComplex,
    seed: u64,
    config: LsopConfig,
) -> Result<SpecialLsop<F>, LsopError> {
    if config.bound < 1 {
        return Err(LsopError::Bound(config.bound));
    }
    let supports = special_supports(frame, complex);
    marriage_check(&supports, complex).map_err(LsopError::Marriage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=config.retries {
        let forms: Vec<LinearForm<F>> = supports
            .iter()
            .map(|s| {
                LinearForm::new(
                    s.iter()
                        .map(|&w| (w, nonzero_coefficient::<F>(&mut rng, config.bound)))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        if verify_lsop(&forms, complex) {
            return Ok(SpecialLsop {
                forms,
                b: frame.b(),
                directions: frame.directions(),
                seed: Some(seed),
                attempts: attempt,
            });
        }
        log::debug!("l.s.o.p. draw {attempt} failed the facet condition");
    }
    Err(LsopError::RetriesExhausted {
        attempts: config.retries,
    })
}

/// `dim (k[Δ]/(θ))_m` for `0 ≤ m ≤ m_max`.
pub fn quotient_dims<F: Field>(
    ring: &std::sync::Arc<FaceRing>,
    forms: &[LinearForm<F>],
    m_max: usize,
) -> Vec<usize> {
    let red = ArtinianReduction::new(ring.clone(), forms.to_vec());
    (0..=m_max).map(|m| red.quotient_dim(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Triangulation, TriangulationBuilder};
    use crate::field::{Gf2, Rational};
    use std::sync::Arc;

    type Q = Rational;

    fn triforce() -> Triangulation {
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

    fn names(t: &Triangulation, s: &[VertexId]) -> Vec<String> {
        let mut out = t.labels_of(&Face::new(s.iter().copied()));
        out.sort();
        out
    }

    #[test]
    fn triforce_supports() {
        let t = triforce();
        let e = Face::empty();
        let frame = Frame::new(&t, &e);
        let s = special_supports(&frame, t.complex());
        assert_eq!(names(&t, &s[0]), vec!["b", "c", "u"]);
        assert_eq!(names(&t, &s[1]), vec!["a", "c", "v"]);
        assert_eq!(names(&t, &s[2]), vec!["a", "b", "w"]);
        assert!(marriage_check(&s, t.complex()).is_ok());

        let e = t.face_from_labels(&["c"]).unwrap();
        let frame = Frame::new(&t, &e);
        let link = t.complex().link(&e).unwrap();
        let s = special_supports(&frame, &link);
        assert_eq!(s.len(), 2);
        assert_eq!(names(&t, &s[0]), vec!["a", "b"]);
        assert_eq!(names(&t, &s[1]), vec!["a", "b", "u", "v"]);
        assert!(marriage_check(&s, &link).is_ok());
    }

    #[test]
    fn interior_face_supports_are_everything() {
        let t = triforce();
        let e = t.face_from_labels(&["a", "b"]).unwrap();
        let frame = Frame::new(&t, &e);
        let link = t.complex().link(&e).unwrap();
        let s = special_supports(&frame, &link);
        assert_eq!(frame.b(), 0);
        assert!(s.iter().all(|x| x == link.vertices()));
    }

    #[test]
    fn empty_supports_fail_at_a_vertex() {
        let t = triforce();
        let w = marriage_check(&[vec![], vec![], vec![]], t.complex()).unwrap_err();
        assert_eq!(w.face.len(), 1);
        assert_eq!(w.meeting, 0);
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let t = triforce();
        let e = Face::empty();
        let frame = Frame::new(&t, &e);
        let a: SpecialLsop<Q> = sample_lsop(&frame, t.complex(), 7, LsopConfig::default()).unwrap();
        let b: SpecialLsop<Q> = sample_lsop(&frame, t.complex(), 7, LsopConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(verify_lsop(a.forms(), t.complex()));
        assert!(SpecialLsop::from_forms(&frame, t.complex(), a.forms().to_vec()).is_ok());
        let c: SpecialLsop<Q> = sample_lsop(&frame, t.complex(), 8, LsopConfig::default()).unwrap();
        assert_ne!(a.forms(), c.forms());
    }

    #[test]
    fn trivial_edge_lsop() {
        let t = TriangulationBuilder::new("t2", &["x", "y"])
            .vertex("x", &["x"])
            .vertex("y", &["y"])
            .facet(&["x", "y"])
            .build()
            .unwrap();
        let e = Face::empty();
        let frame = Frame::new(&t, &e);
        let l: SpecialLsop<Q> = sample_lsop(&frame, t.complex(), 1, LsopConfig::default()).unwrap();
        assert_eq!(l.forms()[0].support(), vec![0]);
        assert_eq!(l.forms()[1].support(), vec![1]);
    }

    #[test]
    fn verify_rejects_degenerate_forms() {
        let c = SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let f = LinearForm::<Q>::new([
            (0, Q::from_i64(1)),
            (1, Q::from_i64(2)),
            (2, Q::from_i64(3)),
        ]);
        assert!(!verify_lsop(&[f.clone(), f.clone()], &c));
        // isolated vertex 3 outside every support
        let c = SimplicialComplex::build(&[vec![0, 1], vec![3]]).unwrap();
        let g = LinearForm::<Q>::new([(0, Q::from_i64(1)), (1, Q::from_i64(-1))]);
        assert!(!verify_lsop(&[f, g], &c));
    }

    #[test]
    fn quotient_dims_match_h_vectors() {
        let t = triforce();
        for (labels, h) in [
            (vec![], vec![1, 3, 0, 0, 0, 0]),
            (vec!["c"], vec![1, 2, 0, 0, 0]),
        ] {
            let e = t.face_from_labels(&labels).unwrap();
            let frame = Frame::new(&t, &e);
            let link = t.complex().link(&e).unwrap();
            let l: SpecialLsop<Q> = sample_lsop(&frame, &link, 3, LsopConfig::default()).unwrap();
            let ring = Arc::new(FaceRing::new(link));
            let dims = quotient_dims(&ring, l.forms(), frame.d() + 2);
            assert_eq!(dims, h);
            assert_eq!(quotient_dims(&ring, l.forms(), 0), vec![1]);
        }
    }

    #[test]
    fn characteristic_two_sampling_avoids_zero() {
        let t = triforce();
        let e = Face::empty();
        let frame = Frame::new(&t, &e);
        // over F_2 every coefficient is 1; θ's restricted to {a,b,c} are
        // (0,1,1), (1,0,1), (1,1,0) which are dependent in characteristic 2
        let r: Result<SpecialLsop<Gf2>, _> = sample_lsop(
            &frame,
            t.complex(),
            1,
            LsopConfig {
                bound: 997,
                retries: 4,
            },
        );
        assert_eq!(r, Err(LsopError::RetriesExhausted { attempts: 4 }));
    }
}
