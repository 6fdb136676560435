use super::{FaceRing, Frame};
use crate::complex::Face;

/// A set of form indices `S ⊆ {0, …, d-1}` as a bitmask; index `i` stands
/// for `θ_{i+1}` and, when `i < b`, for the direction `v_{i+1}`.
pub type IndexSet = u64;

/// Degree-`m` slice of `I_S = (x^F : σ(F ⊔ E)^c ⊆ S)`, as positions in the
/// degree-`m` monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSlice {
    pub s: IndexSet,
    pub degree: usize,
    pub members: Vec<usize>,
}

impl IdealSlice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }
}

impl Frame<'_> {
    /// `x^α ∈ I_S` iff `σ(supp α ⊔ E)^c ⊆ S`. Carriers grow with the face,
    /// so this agrees with divisibility by a generator.
    pub fn in_ideal(&self, s: IndexSet, support: &Face) -> bool {
        self.missing(support).is_subset(self.directions_of(s))
    }
}

pub fn ideal_slice(frame: &Frame<'_>, ring: &FaceRing, s: IndexSet, m: usize) -> IdealSlice {
    let basis = ring.basis(m);
    let members = basis
        .monomials()
        .iter()
        .enumerate()
        .filter(|(_, x)| frame.in_ideal(s, &x.support()))
        .map(|(i, _)| i)
        .collect();
    IdealSlice {
        s,
        degree: m,
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Triangulation, TriangulationBuilder};

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

    fn labels(t: &Triangulation, ring: &FaceRing, sl: &IdealSlice) -> Vec<String> {
        let b = ring.basis(sl.degree);
        sl.members
            .iter()
            .map(|&i| t.labels_of(&b.get(i).support()).join(""))
            .collect()
    }

    #[test]
    fn triforce_slices() {
        let t = triforce();
        let e = Face::empty();
        let frame = Frame::new(&t, &e);
        let ring = FaceRing::new(t.complex().clone());
        // S = {u} is index 0
        let sl = ideal_slice(&frame, &ring, 0b001, 1);
        assert_eq!(labels(&t, &ring, &sl), vec!["a"]);
        let sl = ideal_slice(&frame, &ring, 0b001, 2);
        let got = labels(&t, &ring, &sl);
        // a^2, ab, ac, av, aw, bc
        assert_eq!(sl.len(), 6, "{got:?}");
        // I itself
        let sl = ideal_slice(&frame, &ring, 0, 2);
        assert_eq!(labels(&t, &ring, &sl), vec!["ab", "ac", "bc"]);
        // S ⊇ {v_1..v_b}: everything
        for m in 0..4 {
            assert_eq!(
                ideal_slice(&frame, &ring, 0b111, m).len(),
                ring.basis(m).len()
            );
        }
    }

    #[test]
    fn link_slices_and_nesting() {
        let t = triforce();
        let e = t.face_from_labels(&["c"]).unwrap();
        let frame = Frame::new(&t, &e);
        assert_eq!(frame.d(), 2);
        assert_eq!(frame.b(), 1);
        let ring = FaceRing::new(t.complex().link(&e).unwrap());
        let sl = ideal_slice(&frame, &ring, 0, 1);
        assert_eq!(labels(&t, &ring, &sl), vec!["a", "b"]);
        // index 1 > b: I_{2} = I
        assert_eq!(
            ideal_slice(&frame, &ring, 0b10, 3),
            IdealSlice {
                s: 0b10,
                ..ideal_slice(&frame, &ring, 0, 3)
            }
        );
        for m in 0..5 {
            for s in 0..4u64 {
                for s2 in 0..4u64 {
                    if s2 & s == s2 {
                        let small = ideal_slice(&frame, &ring, s2, m);
                        let big = ideal_slice(&frame, &ring, s, m);
                        assert!(small.members.iter().all(|i| big.contains(*i)));
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_generator_divisibility() {
        let t = triforce();
        for e_labels in [vec![], vec!["c"], vec!["a"], vec!["a", "b"]] {
            let e = t.face_from_labels(&e_labels).unwrap();
            let frame = Frame::new(&t, &e);
            let link = t.complex().link(&e).unwrap();
            let ring = FaceRing::new(link.clone());
            for s in 0..(1u64 << frame.d()) {
                let gens: Vec<Face> = link
                    .faces()
                    .filter(|f| {
                        let missing = t.carrier(&f.union(&e)).complement(t.n());
                        missing.is_subset(frame.directions_of(s))
                    })
                    .cloned()
                    .collect();
                for m in 0..4 {
                    let sl = ideal_slice(&frame, &ring, s, m);
                    for (i, x) in ring.basis(m).monomials().iter().enumerate() {
                        let divisible = gens
                            .iter()
                            .any(|g| g.iter().all(|v| x.exponent(v) > 0) || g.is_empty());
                        assert_eq!(sl.contains(i), divisible, "{x:?} S={s:b} E={e_labels:?}");
                    }
                }
            }
        }
    }
}
