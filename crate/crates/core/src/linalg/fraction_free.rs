//! Fraction-free rank over the rationals.
//!
//! Rows are scaled to primitive integer vectors and eliminated with
//! cross-multiplication followed by removal of the row content, so no
//! rational arithmetic happens inside the elimination loop and entries stay
//! bounded by minors of the input up to the removed content.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::field::{Field, Fp, Rational};

type IntRow = Vec<(usize, BigInt)>;

fn primitive_row(row: &[(usize, Rational)]) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut ints: IntRow = row
        .iter()
        .map(|(c, x)| (*c, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(&mut ints);
    ints
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            for (_, x) in row.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// `a * x - b * y`, dropping zeros.
fn cross(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (c, v) = match (x.get(i), y.get(j)) {
            (Some((cx, vx)), Some((cy, vy))) if cx == cy => {
                i += 1;
                j += 1;
                (*cx, a * vx - b * vy)
            }
            (Some((cx, vx)), Some((cy, _))) if cx < cy => {
                i += 1;
                (*cx, a * vx)
            }
            (Some((cx, vx)), None) => {
                i += 1;
                (*cx, a * vx)
            }
            (_, Some((cy, vy))) => {
                j += 1;
                (*cy, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Exact rank of a rational matrix by fraction-free elimination.
pub fn fraction_free_rank(m: &Matrix<Rational>) -> usize {
    let mut pivot_row: Vec<Option<usize>> = vec![None; m.ncols()];
    let mut basis: Vec<IntRow> = Vec::new();
    for row in m.rows() {
        let mut v = primitive_row(&row);
        let mut pos = 0;
        while pos < v.len() {
            let c = v[pos].0;
            match pivot_row[c] {
                Some(r) => {
                    let p = &basis[r];
                    let g = p[0].1.gcd(&v[pos].1);
                    let a = &p[0].1 / &g;
                    let b = &v[pos].1 / &g;
                    v = cross(&a, &v, &b, p);
                    make_primitive(&mut v);
                }
                None => pos += 1,
            }
        }
        if let Some((c, _)) = v.first() {
            pivot_row[*c] = Some(basis.len());
            basis.push(v);
        }
    }
    basis.len()
}

/// Rank of the reduction of a rational matrix modulo the prime `P`.
///
/// Agrees with the rational rank unless `P` divides every maximal nonzero
/// minor (or a denominator), so it serves as an independent cross-check.
pub fn modular_rank<const P: u64>(m: &Matrix<Rational>) -> usize {
    let rows = m
        .rows()
        .map(|row| {
            row.into_iter()
                .map(|(c, x)| (c, to_fp::<P>(x.numer()) / to_fp::<P>(x.denom())))
                .collect()
        })
        .collect();
    super::echelon_rank(&Matrix::<Fp<P>>::from_sparse_rows(m.ncols(), rows))
}

fn to_fp<const P: u64>(n: &BigInt) -> Fp<P> {
    let r = n.mod_floor(&BigInt::from(P));
    let (_, digits) = r.to_u64_digits();
    Fp::<P>::from_i64(0) + Fp::new(digits.first().copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::LARGE_PRIME;

    #[test]
    fn handles_rational_entries() {
        let half = Rational::new(1.into(), 2.into());
        let m = Matrix::from_dense_rows(
            2,
            vec![
                vec![half.clone(), Rational::from_i64(1)],
                vec![Rational::from_i64(1), Rational::from_i64(2)],
            ],
        );
        assert_eq!(fraction_free_rank(&m), 1);
        assert_eq!(modular_rank::<LARGE_PRIME>(&m), 1);
    }

    #[test]
    fn modular_rank_can_drop() {
        let m = Matrix::<Rational>::from_i64_rows(&[&[7, 0], &[0, 1]]);
        assert_eq!(fraction_free_rank(&m), 2);
        assert_eq!(modular_rank::<7>(&m), 1);
    }
}
