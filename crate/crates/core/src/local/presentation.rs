use rayon::prelude::*;

use super::{LocalError, LocalSetup};
use crate::complex::Face;
use crate::field::Field;
use crate::linalg::Echelon;

/// `L(Γ,E) ≅ I/J` degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// `dim I_m`.
    pub ideal_dims: Vec<usize>,
    /// `dim J_m`.
    pub kernel_dims: Vec<usize>,
    /// Generators `θ_i · x^G` as `(i, G)` with `i` counted from 1: every
    /// form times a minimal interior face, and `θ_j` times the minimal faces
    /// `G` with `σ(G ⊔ E) = {v_j}^c`.
    pub generators: Vec<(usize, Face)>,
}

/// `J_m = Σ_j θ_j · (I_{{j}})_{m-1}`. Asserts `J_m ⊆ I_m`, `J_m ⊆ (θ)_m`
/// and `dim J_m = dim (I_m ∩ (θ)_m)`, i.e. that `J` is exactly the kernel of
/// `I → L`.
pub fn presentation_j<F: Field>(
    setup: &LocalSetup<'_, F>,
    m_max: usize,
) -> Result<Presentation, LocalError> {
    let per_degree = (0..=m_max)
        .into_par_iter()
        .map(|m| kernel_degree(setup, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Presentation {
        ideal_dims: per_degree.iter().map(|x| x.0).collect(),
        kernel_dims: per_degree.iter().map(|x| x.1).collect(),
        generators: generators(setup),
    })
}

fn kernel_degree<F: Field>(
    setup: &LocalSetup<'_, F>,
    m: usize,
) -> Result<(usize, usize), LocalError> {
    let ring = setup.ring();
    let ideal = setup.ideal(0, m);
    let mut j = Echelon::new(ring.basis(m).len());
    if m > 0 {
        let lower = ring.basis(m - 1);
        for (i, theta) in setup.lsop().forms().iter().enumerate() {
            for idx in setup.ideal(1 << i, m - 1).members {
                let v = ring.form_times_monomial(theta, lower.get(idx));
                if let Some((col, _)) = v.iter().find(|(c, _)| !ideal.contains(*c)) {
                    return Err(LocalError::Trap(format!(
                        "θ_{} · {:?} has the non-interior term {:?}",
                        i + 1,
                        lower.get(idx),
                        ring.basis(m).get(*col)
                    )));
                }
                j.insert(v);
            }
        }
    }
    let span = setup.reduction().span(m);
    if !j.rows().iter().all(|r| span.contains(r.clone())) {
        return Err(LocalError::Trap(format!(
            "J is not inside (θ) in degree {m}"
        )));
    }
    let ell = setup.representatives(m).len();
    let intersection = ideal.len() - ell;
    if j.rank() != intersection {
        return Err(LocalError::Trap(format!(
            "degree {m}: dim J = {} but dim (I ∩ (θ)) = {intersection}",
            j.rank()
        )));
    }
    Ok((ideal.len(), j.rank()))
}

fn generators<F: Field>(setup: &LocalSetup<'_, F>) -> Vec<(usize, Face)> {
    let frame = setup.frame();
    let link = setup.link();
    let minimal = |pred: &dyn Fn(&Face) -> bool| -> Vec<Face> {
        let hits: Vec<&Face> = link.faces().filter(|f| pred(f)).collect();
        hits.iter()
            .filter(|f| !hits.iter().any(|g| g != *f && g.is_subset(f)))
            .map(|f| (*f).clone())
            .collect()
    };
    let interior = minimal(&|f| frame.is_interior(f));
    let directions = frame.directions();
    let mut out = Vec::new();
    for i in 0..setup.d() {
        for f in &interior {
            out.push((i + 1, f.clone()));
        }
    }
    for (j, &v) in directions.iter().enumerate() {
        let missing = crate::complex::SimplexSet::singleton(v);
        for g in minimal(&|f| frame.missing(f) == missing) {
            out.push((j + 1, g));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face_ring::LsopConfig;
    use crate::field::{Gf101, Rational};
    use crate::local::tests::triforce;

    type Q = Rational;

    #[test]
    fn triforce_presentations() {
        let t = triforce();
        let setup = LocalSetup::<Q>::new(&t, &Face::empty(), 1, LsopConfig::default()).unwrap();
        let p = presentation_j(&setup, 5).unwrap();
        assert_eq!(p.kernel_dims[2], 3);
        assert_eq!(p.ideal_dims, p.kernel_dims);
        let codim_one: Vec<(usize, Vec<String>)> = p
            .generators
            .iter()
            .filter(|(_, g)| g.len() == 1)
            .map(|(i, g)| (*i, t.labels_of(g)))
            .collect();
        assert_eq!(
            codim_one,
            vec![
                (1, vec!["a".to_string()]),
                (2, vec!["b".into()]),
                (3, vec!["c".into()])
            ]
        );

        let c = t.face_from_labels(&["c"]).unwrap();
        let setup = LocalSetup::<Q>::new(&t, &c, 1, LsopConfig::default()).unwrap();
        let p = presentation_j(&setup, 4).unwrap();
        // J' = (ζ_1, ζ_2 x^a, ζ_2 x^b): degree 1 is spanned by ζ_1 alone
        assert_eq!(p.kernel_dims[1], 1);
        assert_eq!(p.ideal_dims[1], 2);
        let gens: Vec<(usize, Vec<String>)> = p
            .generators
            .iter()
            .map(|(i, g)| (*i, t.labels_of(g)))
            .collect();
        assert!(gens.contains(&(1, vec![])));
        assert!(gens.contains(&(2, vec!["a".to_string()])));
        assert!(gens.contains(&(2, vec!["b".to_string()])));
    }

    #[test]
    fn interior_face_kernel_is_theta_ideal() {
        let t = triforce();
        let e = t.face_from_labels(&["a", "b"]).unwrap();
        let setup = LocalSetup::<Gf101>::new(&t, &e, 1, LsopConfig::default()).unwrap();
        let p = presentation_j(&setup, 3).unwrap();
        for m in 0..=3 {
            assert_eq!(p.kernel_dims[m], setup.reduction().span(m).rank());
        }
    }
}
