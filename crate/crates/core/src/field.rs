//! Exact scalar fields.
//!
//! Every algebraic computation in the crate is generic over [`Field`]. Two
//! families are provided: arbitrary-precision rationals ([`Rational`]) and
//! residues modulo a compile-time prime ([`Fp`]). There is deliberately no
//! floating-point implementation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::linalg::Matrix;

/// Arbitrary-precision rational numbers, always kept in lowest terms.
pub type Rational = BigRational;

/// An exact field usable as the scalar type of matrices, linear forms and
/// graded pieces.
pub trait Field:
    Num + Clone + fmt::Debug + fmt::Display + Neg<Output = Self> + Send + Sync + 'static
{
    /// Characteristic of the field; 0 for the rationals.
    const CHARACTERISTIC: u64;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn from_i64(n: i64) -> Self;

    /// Rank of a matrix. Fields may override this with a specialised
    /// elimination; the default is plain sparse Gaussian elimination.
    fn rank_of(m: &Matrix<Self>) -> usize {
        crate::linalg::echelon_rank(m)
    }

    /// Integer value of the element when it has one (used for JSON output of
    /// coefficients). Rationals with nontrivial denominator return `None`.
    fn to_i64(&self) -> Option<i64>;
}

impl Field for Rational {
    const CHARACTERISTIC: u64 = 0;

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rank_of(m: &Matrix<Self>) -> usize {
        crate::linalg::fraction_free_rank(m)
    }

    fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

/// Residue class modulo the prime `P`, stored canonically in `[0, P)`.
///
/// `P` must be prime and below 2^63; this is checked by [`Fp::new`] in debug
/// builds and by the field dispatch in [`Characteristic`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: u64) -> Self {
        debug_assert!(P > 1 && P < (1 << 63));
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(mod {})", self.0, P)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "remainder by zero");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = std::num::ParseIntError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let v = i128::from_str_radix(s, radix)?;
        Ok(Fp(v.rem_euclid(P as i128) as u64))
    }
}

impl<const P: u64> Field for Fp<P> {
    const CHARACTERISTIC: u64 = P;

    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }

    fn from_i64(n: i64) -> Self {
        Fp((n as i128).rem_euclid(P as i128) as u64)
    }

    fn to_i64(&self) -> Option<i64> {
        // symmetric representative
        let v = self.0;
        if v <= P / 2 {
            i64::try_from(v).ok()
        } else {
            i64::try_from(P - v).ok().map(|x| -x)
        }
    }
}

/// Largest prime below 2^61; used for probabilistic cross-checks of rational
/// ranks.
pub const LARGE_PRIME: u64 = 2_305_843_009_213_693_951;

pub type Gf2 = Fp<2>;
pub type Gf3 = Fp<3>;
pub type Gf5 = Fp<5>;
pub type Gf7 = Fp<7>;
pub type Gf101 = Fp<101>;
pub type Gf32003 = Fp<32003>;
pub type Gf65521 = Fp<65521>;
pub type Gf1000003 = Fp<1_000_003>;
pub type Gf2147483647 = Fp<2_147_483_647>;
pub type GfLarge = Fp<LARGE_PRIME>;

/// Primes with a compiled-in field type, selectable at run time.
pub const SUPPORTED_PRIMES: &[u64] = &[
    2,
    3,
    5,
    7,
    101,
    32003,
    65521,
    1_000_003,
    2_147_483_647,
    LARGE_PRIME,
];

/// Run-time choice of coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl Characteristic {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "q" || s == "0" || s == "rational" {
            return Ok(Characteristic::Zero);
        }
        let digits = s.strip_prefix("fp:").unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| format!("invalid field `{s}`: expected `q` or `fp:<prime>`"))?;
        let c = Characteristic::Prime(p);
        c.check()?;
        Ok(c)
    }

    pub fn check(self) -> Result<(), String> {
        match self {
            Characteristic::Zero => Ok(()),
            Characteristic::Prime(p) if !is_prime(p) => Err(format!("{p} is not prime")),
            Characteristic::Prime(p) if !SUPPORTED_PRIMES.contains(&p) => Err(format!(
                "prime {p} has no compiled field; supported primes: {SUPPORTED_PRIMES:?}"
            )),
            Characteristic::Prime(_) => Ok(()),
        }
    }

    pub fn value(self) -> u64 {
        match self {
            Characteristic::Zero => 0,
            Characteristic::Prime(p) => p,
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(f, "q"),
            Characteristic::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Runs a block with the type alias `$F` bound to the field selected by a
/// [`Characteristic`]. Unsupported primes evaluate `$fallback`.
#[macro_export]
macro_rules! with_field {
    ($ch:expr, $F:ident => $body:expr, else $fallback:expr) => {{
        use $crate::field::*;
        match $ch {
            Characteristic::Zero => {
                type $F = Rational;
                $body
            }
            Characteristic::Prime(2) => {
                type $F = Gf2;
                $body
            }
            Characteristic::Prime(3) => {
                type $F = Gf3;
                $body
            }
            Characteristic::Prime(5) => {
                type $F = Gf5;
                $body
            }
            Characteristic::Prime(7) => {
                type $F = Gf7;
                $body
            }
            Characteristic::Prime(101) => {
                type $F = Gf101;
                $body
            }
            Characteristic::Prime(32003) => {
                type $F = Gf32003;
                $body
            }
            Characteristic::Prime(65521) => {
                type $F = Gf65521;
                $body
            }
            Characteristic::Prime(1_000_003) => {
                type $F = Gf1000003;
                $body
            }
            Characteristic::Prime(2_147_483_647) => {
                type $F = Gf2147483647;
                $body
            }
            Characteristic::Prime(LARGE_PRIME) => {
                type $F = GfLarge;
                $body
            }
            Characteristic::Prime(_) => $fallback,
        }
    }};
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_in_small_prime_field() {
        for v in 1..7u64 {
            let x = Gf7::new(v);
            assert_eq!(x * x.inv(), Gf7::one());
        }
    }

    #[test]
    fn from_i64_reduces_negatives() {
        assert_eq!(Gf5::from_i64(-1), Gf5::new(4));
        assert_eq!(GfLarge::from_i64(-1).value(), LARGE_PRIME - 1);
        assert_eq!(Gf7::from_i64(-3).to_i64(), Some(-3));
    }

    #[test]
    fn supported_primes_are_prime() {
        for &p in SUPPORTED_PRIMES {
            assert!(is_prime(p), "{p}");
        }
        assert!(!is_prime(1));
        assert!(!is_prime(91));
        assert!(!is_prime(LARGE_PRIME - 2));
    }

    #[test]
    fn characteristic_parsing() {
        assert_eq!(Characteristic::parse("q").unwrap(), Characteristic::Zero);
        assert_eq!(
            Characteristic::parse("fp:32003").unwrap(),
            Characteristic::Prime(32003)
        );
        assert!(Characteristic::parse("fp:32004").is_err());
        assert!(Characteristic::parse("fp:11").is_err());
        assert!(Characteristic::parse("zz").is_err());
    }

    #[test]
    fn dispatch_binds_the_right_type() {
        let ch = Characteristic::Prime(101);
        let c = with_field!(ch, F => F::CHARACTERISTIC, else 0);
        assert_eq!(c, 101);
        let c = with_field!(Characteristic::Zero, F => F::CHARACTERISTIC, else 1);
        assert_eq!(c, 0);
    }

    proptest! {
        #[test]
        fn prime_field_axioms(a in 0u64..LARGE_PRIME, b in 1u64..LARGE_PRIME) {
            let (a, b) = (GfLarge::new(a), GfLarge::new(b));
            prop_assert_eq!((a / b) * b, a);
            prop_assert_eq!(a - a, GfLarge::zero());
            prop_assert_eq!(a + (-a), GfLarge::zero());
        }
    }
}
