use crate::complex::{CarrierOracle, Face, SimplexSet};

/// The data a face `E` fixes: carriers relative to `E`, the number
/// `d = n - |E|` of forms, and the ordered missing directions
/// `σ(E)^c = {v_1, …, v_b}` (in the order of `V`).
#[derive(Clone, Copy)]
pub struct Frame<'a> {
    oracle: &'a dyn CarrierOracle,
    e: &'a Face,
    d: usize,
}

impl<'a> Frame<'a> {
    /// Frame of a face `E` of a triangulation; `d = n - |E|`.
    pub fn new(oracle: &'a dyn CarrierOracle, e: &'a Face) -> Self {
        let d = oracle.simplex_size() - e.len();
        Frame { oracle, e, d }
    }

    /// Frame with an explicit `d`, for oracles whose `E` is implicit.
    pub fn with_d(oracle: &'a dyn CarrierOracle, e: &'a Face, d: usize) -> Self {
        Frame { oracle, e, d }
    }

    pub fn oracle(&self) -> &'a dyn CarrierOracle {
        self.oracle
    }

    pub fn e(&self) -> &'a Face {
        self.e
    }

    pub fn n(&self) -> usize {
        self.oracle.simplex_size()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn e_carrier(&self) -> SimplexSet {
        self.oracle.carrier_of(self.e)
    }

    /// `v_1, …, v_b` as indices into `V`.
    pub fn directions(&self) -> Vec<usize> {
        self.e_carrier().complement(self.n()).iter().collect()
    }

    pub fn b(&self) -> usize {
        self.n() - self.e_carrier().len()
    }

    /// `σ(H ⊔ E)`.
    pub fn carrier(&self, h: &Face) -> SimplexSet {
        self.oracle.carrier_of(&h.union(self.e))
    }

    /// `σ(H ⊔ E)^c`.
    pub fn missing(&self, h: &Face) -> SimplexSet {
        self.carrier(h).complement(self.n())
    }

    pub fn is_interior(&self, h: &Face) -> bool {
        self.missing(h).is_empty()
    }

    /// Carrier codimension of `H ⊔ E`.
    pub fn codim(&self, h: &Face) -> usize {
        self.missing(h).len()
    }

    /// The directions `{v_i : i ∈ S, i ≤ b}` named by a set of form indices.
    pub fn directions_of(&self, s: u64) -> SimplexSet {
        SimplexSet::from_indices(
            self.directions()
                .into_iter()
                .enumerate()
                .filter(|(i, _)| s >> i & 1 == 1)
                .map(|(_, v)| v),
        )
    }

    /// Form index of a missing direction `v ∈ σ(E)^c`.
    pub fn index_of_direction(&self, v: usize) -> Option<usize> {
        self.directions().iter().position(|&w| w == v)
    }
}

impl std::fmt::Debug for Frame<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Frame")
            .field("e", self.e)
            .field("d", &self.d)
            .field("directions", &self.directions())
            .finish()
    }
}
