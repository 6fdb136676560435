//! Properties of local h-vectors and local face modules over random stellar
//! subdivisions of small simplices.

use std::collections::BTreeSet;

use localh::complex::{
    is_quasi_geometric, validate_homology_triangulation, Face, Triangulation, TriangulationBuilder,
    ValidationMode, DEFAULT_FACE_CEILING,
};
use localh::face_ring::{quotient_dims, LsopConfig};
use localh::field::{Characteristic, Gf32003};
use localh::functor::{check_monotonicity, induced_map, vanishing_structure_audit, Verdict};
use localh::local::{build_resolution, local_h_incexc, verify_exactness, LocalSetup};
use localh::Q;
use proptest::prelude::*;

/// Facets and vertex carriers kept as labels; carriers are subsets of
/// `0..n`.
#[derive(Clone, Debug)]
struct Stellar {
    n: usize,
    carriers: Vec<BTreeSet<usize>>,
    facets: Vec<BTreeSet<usize>>,
}

impl Stellar {
    fn simplex(n: usize) -> Self {
        Stellar {
            n,
            carriers: (0..n).map(|i| BTreeSet::from([i])).collect(),
            facets: vec![(0..n).collect()],
        }
    }

    fn star(&mut self, face: &BTreeSet<usize>) {
        let p = self.carriers.len();
        self.carriers.push(
            face.iter()
                .flat_map(|&v| self.carriers[v].iter().copied())
                .collect(),
        );
        let mut facets = Vec::new();
        for g in &self.facets {
            if !face.is_subset(g) {
                facets.push(g.clone());
                continue;
            }
            for v in face {
                let mut h = g.clone();
                h.remove(v);
                h.insert(p);
                facets.push(h);
            }
        }
        self.facets = facets;
    }

    /// Each move picks a facet and a subset of it with at least two
    /// vertices.
    fn apply(&mut self, moves: &[(usize, u32)]) {
        for &(pick, mask) in moves {
            let g: Vec<usize> = self.facets[pick % self.facets.len()]
                .iter()
                .copied()
                .collect();
            let face: BTreeSet<usize> = g
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if face.len() >= 2 {
                self.star(&face);
            }
        }
    }

    fn build(&self) -> Triangulation {
        let corner = |i: usize| format!("c{i}");
        let vertex = |v: usize| format!("x{v}");
        let corners: Vec<String> = (0..self.n).map(corner).collect();
        let mut b = TriangulationBuilder {
            name: "stellar".into(),
            simplex_vertices: corners,
            ..Default::default()
        };
        for (v, c) in self.carriers.iter().enumerate() {
            b.vertices
                .push((vertex(v), c.iter().map(|&i| corner(i)).collect()));
        }
        for g in &self.facets {
            b.facets.push(g.iter().map(|&v| vertex(v)).collect());
        }
        b.build().unwrap()
    }
}

fn moves(max: usize) -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0usize..64, 0u32..16), 0..=max)
}

fn subdivision() -> impl Strategy<Value = Stellar> {
    prop_oneof![
        moves(4).prop_map(|m| {
            let mut s = Stellar::simplex(3);
            s.apply(&m);
            s
        }),
        moves(2).prop_map(|m| {
            let mut s = Stellar::simplex(4);
            s.apply(&m);
            s
        }),
    ]
}

fn all_faces(t: &Triangulation) -> Vec<Face> {
    t.complex().faces().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivisions_are_quasi_geometric_homology_triangulations(s in subdivision()) {
        let t = s.build();
        let r = validate_homology_triangulation(&t, ValidationMode::Full, Characteristic::Zero, DEFAULT_FACE_CEILING).unwrap();
        prop_assert!(r.passed(), "{:?}", r.violations);
        prop_assert!(is_quasi_geometric(&t).0);
    }

    #[test]
    fn module_route_matches_inclusion_exclusion(s in subdivision(), seed in any::<u64>()) {
        let t = s.build();
        for e in all_faces(&t) {
            let incexc = local_h_incexc(&t, &e).unwrap();
            prop_assert!(incexc.is_symmetric() && incexc.is_nonnegative(), "{:?}", incexc.values);
            let q = LocalSetup::<Q>::new(&t, &e, seed, LsopConfig::default()).unwrap();
            let module = q.module(q.d() + 2);
            prop_assert!(module.vanishes_above_d());
            prop_assert_eq!(&module.local_h().values, &incexc.values);
            let p = LocalSetup::<Gf32003>::new(&t, &e, seed, LsopConfig::default()).unwrap();
            prop_assert_eq!(&p.module(p.d()).local_h().values, &incexc.values);
        }
    }

    #[test]
    fn artinian_reduction_has_h_vector_dimensions(s in subdivision(), seed in any::<u64>()) {
        let t = s.build();
        for e in all_faces(&t) {
            let setup = LocalSetup::<Q>::new(&t, &e, seed, LsopConfig::default()).unwrap();
            let m = setup.d() + 2;
            let dims: Vec<i64> = quotient_dims(setup.ring(), setup.lsop().forms(), m)
                .into_iter()
                .map(|x| x as i64)
                .collect();
            prop_assert_eq!(dims, setup.link().h_vector().padded(m + 1));
        }
    }

    #[test]
    fn resolution_is_exact(s in subdivision(), seed in any::<u64>()) {
        let t = s.build();
        for e in all_faces(&t).into_iter().filter(|e| e.len() <= 1) {
            let setup = LocalSetup::<Gf32003>::new(&t, &e, seed, LsopConfig::default()).unwrap();
            let res = build_resolution(&setup, setup.d() + 2).unwrap();
            let report = verify_exactness(&res);
            prop_assert!(report.passed(), "{:?}", report);
        }
    }

    #[test]
    fn maps_between_equal_carriers_are_onto(s in subdivision(), seed in any::<u64>()) {
        let t = s.build();
        let faces = all_faces(&t);
        for e in faces.iter().filter(|e| e.len() <= 1) {
            let setup = LocalSetup::<Gf32003>::new(&t, e, seed, LsopConfig::default()).unwrap();
            for e2 in faces.iter().filter(|f| f.len() == e.len() + 1 && e.is_subset(f)) {
                if t.carrier(e) != t.carrier(e2) {
                    continue;
                }
                let phi = induced_map(&setup, e2, seed ^ 1, setup.d() + 1).unwrap();
                let r = check_monotonicity(&phi).unwrap();
                prop_assert!(r.passed(), "{:?}", r);
            }
        }
    }

    #[test]
    fn audits_never_contradict(s in subdivision(), seed in any::<u64>()) {
        let t = s.build();
        for e in all_faces(&t) {
            let setup = LocalSetup::<Gf32003>::new(&t, &e, seed, LsopConfig::default()).unwrap();
            let r = vanishing_structure_audit(&setup).unwrap();
            prop_assert!(r.verdict != Verdict::Contradiction, "{:?}", r.audits);
        }
    }
}

/// For a subdivided triangle, `ℓ_1 = ℓ_2` counts the interior vertices.
#[test]
fn triangle_local_h_counts_interior_vertices() {
    let cases: &[&[(usize, u32)]] = &[
        &[],
        &[(0, 0b111)],
        &[(0, 0b011)],
        &[(0, 0b111), (1, 0b111)],
        &[(0, 0b011), (0, 0b111)],
    ];
    for moves in cases {
        let mut s = Stellar::simplex(3);
        s.apply(moves);
        let interior = s.carriers.iter().filter(|c| c.len() == 3).count() as i64;
        let t = s.build();
        let ell = LocalSetup::<Q>::new(&t, &Face::empty(), 3, LsopConfig::default())
            .unwrap()
            .module(3)
            .local_h()
            .values;
        assert_eq!(ell, vec![0, interior, interior, 0], "{moves:?}");
    }
}
