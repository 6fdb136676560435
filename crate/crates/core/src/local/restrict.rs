use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{LocalError, LocalSetup};
use crate::complex::{CarrierOracle, Face, SimplexSet, SimplicialComplex, VertexId};
use crate::face_ring::{ideal_slice, sample_lsop, FaceRing, Frame, LinearForm, LsopConfig};
use crate::field::Field;
use crate::linalg::Echelon;

/// `L(Γ,E)|_Δ ≅ I|_Δ / J|_Δ` degreewise, computed inside `k[Δ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedModule {
    pub dims: Vec<usize>,
    pub ideal_dims: Vec<usize>,
    pub kernel_dims: Vec<usize>,
}

impl RestrictedModule {
    fn zero(m_max: usize) -> Self {
        RestrictedModule {
            dims: vec![0; m_max + 1],
            ideal_dims: vec![0; m_max + 1],
            kernel_dims: vec![0; m_max + 1],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&x| x == 0)
    }
}

/// Dimensions of `I|_Δ / J|_Δ` where `I|_Δ` is spanned by the monomials of
/// `ring` whose support is interior relative to `frame`, and
/// `J|_Δ = Σ_j θ_j|_Δ · I_{{j}}|_Δ`.
pub fn restricted_dims<F: Field>(
    frame: &Frame<'_>,
    ring: &FaceRing,
    forms: &[LinearForm<F>],
    m_max: usize,
) -> Result<RestrictedModule, LocalError> {
    let mut out = RestrictedModule::zero(m_max);
    for m in 0..=m_max {
        let ideal = ideal_slice(frame, ring, 0, m);
        let mut j = Echelon::new(ring.basis(m).len());
        if m > 0 {
            let lower = ring.basis(m - 1);
            for (i, theta) in forms.iter().enumerate() {
                for idx in ideal_slice(frame, ring, 1 << i, m - 1).members {
                    let v = ring.form_times_monomial(theta, lower.get(idx));
                    if v.iter().any(|(c, _)| !ideal.contains(*c)) {
                        return Err(LocalError::Trap(format!(
                            "θ_{}|_Δ · {:?} leaves I|_Δ",
                            i + 1,
                            lower.get(idx)
                        )));
                    }
                    j.insert(v);
                }
            }
        }
        out.ideal_dims[m] = ideal.len();
        out.kernel_dims[m] = j.rank();
        out.dims[m] = ideal.len() - j.rank();
    }
    Ok(out)
}

/// Restriction of `L(Γ,E)` to a subcomplex `Δ` of `lk(E)`, using the
/// restrictions of the setup's forms.
pub fn restrict_module<F: Field>(
    setup: &LocalSetup<'_, F>,
    delta: &SimplicialComplex,
    m_max: usize,
) -> Result<RestrictedModule, LocalError> {
    if !delta.is_subcomplex_of(setup.link()) {
        return Err(LocalError::Precondition(
            "Δ is not a subcomplex of lk(E)".into(),
        ));
    }
    let ring = FaceRing::new(delta.clone());
    let forms = setup.lsop().restricted(delta.vertices());
    restricted_dims(&setup.frame(), &ring, &forms, m_max)
}

/// A single face known only through the carriers of its vertices, inside a
/// simplex `V`, together with the carrier and size of a face `E` it lies in
/// the link of. The carrier of `H ⊔ E` is taken to be `σ(E) ∪ ⋃_{w ∈ H} σ(w)`,
/// which holds for geometric triangulations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandaloneFace {
    simplex_labels: Vec<String>,
    vertex_labels: Vec<String>,
    carriers: Vec<SimplexSet>,
    e_carrier: SimplexSet,
    e_size: usize,
}

impl StandaloneFace {
    pub fn new(
        simplex_labels: Vec<String>,
        vertex_labels: Vec<String>,
        carriers: Vec<SimplexSet>,
        e_carrier: SimplexSet,
        e_size: usize,
    ) -> Result<Self, LocalError> {
        let n = simplex_labels.len();
        let full = SimplexSet::full(n);
        if vertex_labels.len() != carriers.len() {
            return Err(LocalError::Precondition(
                "one carrier per vertex is required".into(),
            ));
        }
        if let Some(i) = carriers
            .iter()
            .position(|c| c.is_empty() || !c.is_subset(full))
        {
            return Err(LocalError::Precondition(format!(
                "vertex {} has an empty carrier or one outside V",
                vertex_labels[i]
            )));
        }
        if !e_carrier.is_subset(full)
            || e_size > e_carrier.len()
            || (e_size == 0) != e_carrier.is_empty()
        {
            return Err(LocalError::Precondition(
                "E carrier and E size are inconsistent".into(),
            ));
        }
        if vertex_labels.len() + e_size > n {
            return Err(LocalError::Precondition(format!(
                "a face with {} vertices does not fit in the link of a face of size {e_size} in a simplex on {n} vertices",
                vertex_labels.len()
            )));
        }
        Ok(StandaloneFace {
            simplex_labels,
            vertex_labels,
            carriers,
            e_carrier,
            e_size,
        })
    }

    pub fn simplex_labels(&self) -> &[String] {
        &self.simplex_labels
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn carriers(&self) -> &[SimplexSet] {
        &self.carriers
    }

    pub fn e_carrier(&self) -> SimplexSet {
        self.e_carrier
    }

    pub fn e_size(&self) -> usize {
        self.e_size
    }

    /// Number of forms, `n - |E|`.
    pub fn d(&self) -> usize {
        self.simplex_labels.len() - self.e_size
    }

    /// The face as a complex on vertex ids `0..k`.
    pub fn simplex(&self) -> SimplicialComplex {
        SimplicialComplex::simplex(Face::new(0..self.vertex_labels.len() as VertexId))
    }

    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face, LocalError> {
        labels
            .iter()
            .map(|l| {
                self.vertex_labels
                    .iter()
                    .position(|x| x == l.as_ref())
                    .map(|i| i as VertexId)
                    .ok_or_else(|| {
                        LocalError::Precondition(format!("unknown vertex {}", l.as_ref()))
                    })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Face::new)
    }

    pub fn labels_of(&self, f: &Face) -> Vec<String> {
        f.iter()
            .map(|v| self.vertex_labels[v as usize].clone())
            .collect()
    }
}

impl CarrierOracle for StandaloneFace {
    fn simplex_size(&self) -> usize {
        self.simplex_labels.len()
    }

    fn carrier_of(&self, face: &Face) -> SimplexSet {
        face.iter().fold(self.e_carrier, |acc, w| {
            acc.union(self.carriers[w as usize])
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandaloneResult {
    pub module: RestrictedModule,
    /// The two sub-seeds whose draws agreed; absent when `I|_F = 0`
    /// without any draw.
    pub seeds: Option<[u64; 2]>,
    /// Number of seed pairs tried.
    pub attempts: usize,
}

/// `L(Γ,E)|_F` for a standalone face, with forms drawn generically on the
/// supports `{w ∈ F : v_i ∈ σ(w)}` and checked against the facet condition on
/// `F`. Two independent draws must give the same dimensions; on
/// disagreement further pairs are drawn, up to `config.retries` pairs.
pub fn restricted_standalone<F: Field>(
    face: &StandaloneFace,
    seed: u64,
    m_max: usize,
    config: LsopConfig,
) -> Result<StandaloneResult, LocalError> {
    let e = Face::empty();
    let frame = Frame::with_d(face, &e, face.d());
    let simplex = face.simplex();
    let cover = face.carrier_of(&Face::new(0..face.vertex_labels.len() as VertexId));
    if cover != SimplexSet::full(face.simplex_size()) {
        return Ok(StandaloneResult {
            module: RestrictedModule::zero(m_max),
            seeds: None,
            attempts: 0,
        });
    }
    let ring = FaceRing::new(simplex.clone());
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 1..=config.retries {
        let seeds = [master.next_u64(), master.next_u64()];
        let mut results = Vec::with_capacity(2);
        for &s in &seeds {
            let lsop = sample_lsop::<F>(&frame, &simplex, s, config)?;
            results.push(restricted_dims(&frame, &ring, lsop.forms(), m_max)?);
        }
        if results[0] == results[1] {
            return Ok(StandaloneResult {
                module: results.swap_remove(0),
                seeds: Some(seeds),
                attempts: attempt,
            });
        }
        log::debug!(
            "standalone draws disagree: {:?} vs {:?}",
            results[0].dims,
            results[1].dims
        );
        last = Some((results[0].dims.clone(), results[1].dims.clone()));
    }
    let (a, b) = last.unwrap_or_default();
    Err(LocalError::SeedDisagreement {
        pairs: config.retries,
        first: a,
        second: b,
    })
}
