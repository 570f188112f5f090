//! Exact coefficient arithmetic.
//!
//! Everything in the workbench is generic over [`Scalar`], a commutative ring
//! with a distinguished embedding of the rationals. The two shipped scalars
//! are [`Rational`](crate::Rational) and the Laurent polynomial ring
//! [`ParamScalar`](crate::ParamScalar) in the formal parameter `z`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Commutative ring with exact equality, used as the coefficient domain of
/// every series, vector and functional.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Multiplicative inverse when `self` is a unit.
    fn inverse(&self) -> Option<Self>;

    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;

    fn add_assign_ref(&mut self, o: &Self) {
        *self = self.radd(o);
    }

    /// Rank of a matrix over the field of fractions of the ring.
    fn rank_of(rows: &[Vec<Self>]) -> usize;

    /// `self += a * b`.
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = a.rmul(b);
        self.add_assign_ref(&p);
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn add_assign_ref(&mut self, o: &Self) {
        *self += o;
    }

    fn rank_of(rows: &[Vec<Self>]) -> usize {
        crate::linalg::rank(&rows.to_vec())
    }
}

/// Generalized binomial coefficient `n(n-1)...(n-k+1)/k!`.
pub fn gen_binom(n: i64, k: u64) -> BigRational {
    BigRational::from_integer(gen_binom_int(n, k))
}

/// Integer value of the generalized binomial coefficient.
pub fn gen_binom_int(n: i64, k: u64) -> BigInt {
    if let Some(v) = gen_binom_i128(n, k) {
        return BigInt::from(v);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n) - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn gen_binom_i128(n: i64, k: u64) -> Option<i128> {
    if k > 60 {
        return None;
    }
    if n >= 0 && (k as i64) > n {
        return Some(0);
    }
    // C(n, k) for negative n equals (-1)^k C(k - n - 1, k).
    let (top, sign) = if n < 0 {
        ((k as i128) - (n as i128) - 1, if k.is_multiple_of(2) { 1 } else { -1 })
    } else {
        (n as i128, 1)
    };
    let k = k.min((top - k as i128).max(0) as u64).min(k);
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc.checked_mul(top - i)?;
        acc /= i + 1;
    }
    Some(sign * acc)
}

/// Binomial coefficient embedded in an arbitrary scalar ring.
pub fn binom<S: Scalar>(n: i64, k: u64) -> S {
    match gen_binom_i128(n, k) {
        Some(v) if v.abs() < i64::MAX as i128 => S::from_i64(v as i64),
        _ => S::from_rational(&gen_binom(n, k)),
    }
}

/// `1/n!` as a rational.
pub fn inv_factorial(n: u64) -> BigRational {
    let mut f = BigInt::one();
    for i in 2..=n {
        f *= BigInt::from(i);
    }
    BigRational::new(BigInt::one(), f)
}

/// `(-1)^n` as an `i64`.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The distinguished invertible parameter, with cached powers.
#[derive(Clone, Debug)]
pub struct ZParam<S: Scalar> {
    powers: Vec<S>,
    span: i64,
}

const POWER_SPAN: i64 = 48;

impl<S: Scalar> ZParam<S> {
    pub fn new(z: S) -> Result<Self> {
        let zinv = z.inverse().ok_or_else(|| Error::NotInvertible(z.to_string()))?;
        let mut powers = vec![S::zero(); (2 * POWER_SPAN + 1) as usize];
        powers[POWER_SPAN as usize] = S::one();
        for k in 1..=POWER_SPAN {
            let up = powers[(POWER_SPAN + k - 1) as usize].rmul(&z);
            let down = powers[(POWER_SPAN - k + 1) as usize].rmul(&zinv);
            powers[(POWER_SPAN + k) as usize] = up;
            powers[(POWER_SPAN - k) as usize] = down;
        }
        Ok(ZParam { powers, span: POWER_SPAN })
    }

    pub fn z(&self) -> &S {
        &self.powers[(self.span + 1) as usize]
    }

    /// `z^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> S {
        if k.abs() <= self.span {
            return self.powers[(self.span + k) as usize].clone();
        }
        let base = if k > 0 { self.pow(self.span) } else { self.pow(-self.span) };
        let rest = if k > 0 { k - self.span } else { k + self.span };
        base.rmul(&self.pow(rest))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(gen_binom(-1, 2), q(1));
        assert_eq!(gen_binom(3, 0), q(1));
        assert_eq!(gen_binom(-2, 3), q(-4));
        assert_eq!(gen_binom(3, 5), q(0));
        assert_eq!(gen_binom(0, 0), q(1));
    }

    #[test]
    fn binomial_matches_bigint_path() {
        for n in -70..70 {
            for k in 0..40u64 {
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for i in 0..k {
                    num *= BigInt::from(n) - BigInt::from(i);
                    den *= BigInt::from(i + 1);
                }
                assert_eq!(gen_binom_int(n, k), num / den, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pascal_rule() {
        for n in -10..=10 {
            for k in 1..=10u64 {
                assert_eq!(gen_binom(n, k), gen_binom(n - 1, k) + gen_binom(n - 1, k - 1));
            }
        }
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3/2", "-7", "0", "10/4"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
    }

    #[test]
    fn param_powers() {
        let zp = ZParam::new(q(2)).unwrap();
        assert_eq!(zp.pow(3), q(8));
        assert_eq!(zp.pow(-2), BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(zp.pow(60), q(2).pow(60));
        assert!(ZParam::new(q(0)).is_err());
    }
}
