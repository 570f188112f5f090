//! Sparse Laurent polynomials in one invertible variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Scalar};

type Terms<R> = SmallVec<[(i32, R); 2]>;

/// A Laurent polynomial `sum c_k z^k` with no stored zero coefficients and
/// strictly increasing exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<R> {
    terms: Terms<R>,
}

impl<R: Scalar> Laurent<R> {
    pub fn monomial(exp: i32, c: R) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.push((exp, c));
        }
        Laurent { terms }
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(0, c)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(1, R::one())
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, R)>>(it: I) -> Self {
        let mut v: Vec<(i32, R)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut terms: Terms<R> = Terms::new();
        for (e, c) in v {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => lc.add_assign_ref(&c),
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|t| !t.1.is_zero());
        Laurent { terms }
    }

    pub fn terms(&self) -> &[(i32, R)] {
        &self.terms
    }

    pub fn coeff(&self, exp: i32) -> R {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut terms: Terms<R> = self.terms.iter().map(|(e, a)| (*e, a.rmul(c))).collect();
        terms.retain(|t| !t.1.is_zero());
        Laurent { terms }
    }

    /// Substitutes a value for the variable.
    pub fn eval(&self, z0: &R) -> Result<R> {
        let inv = z0.inverse().ok_or(Error::ZeroParameter)?;
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let base = if *e >= 0 { z0 } else { &inv };
            let mut p = R::one();
            for _ in 0..e.unsigned_abs() {
                p = p.rmul(base);
            }
            acc.add_mul(c, &p);
        }
        Ok(acc)
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let mut out: Terms<R> = Terms::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        let conv = |c: &R| if negate { c.rneg() } else { c.clone() };
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, conv(&b[j].1)));
                j += 1;
            } else {
                let c = if negate { a[i].1.rsub(&b[j].1) } else { a[i].1.radd(&b[j].1) };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Laurent { terms: out }
    }

    fn product(&self, o: &Self) -> Self {
        if self.terms.is_empty() || o.terms.is_empty() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return o.scale(c).shift(*e);
        }
        if o.terms.len() == 1 {
            let (e, c) = &o.terms[0];
            return self.scale(c).shift(*e);
        }
        let mut acc: Vec<(i32, R)> = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                acc.push((e1 + e2, c1.rmul(c2)));
            }
        }
        Self::from_terms(acc)
    }
}

impl<R: Scalar> Zero for Laurent<R> {
    fn zero() -> Self {
        Laurent { terms: Terms::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Scalar> One for Laurent<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Scalar> Add for Laurent<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.merge(&o, false)
    }
}

impl<R: Scalar> Sub for Laurent<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.merge(&o, true)
    }
}

impl<R: Scalar> Mul for Laurent<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.product(&o)
    }
}

impl<R: Scalar> Neg for Laurent<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Laurent { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<R: Scalar> Scalar for Laurent<R> {
    fn from_rational(r: &BigRational) -> Self {
        Self::constant(R::from_rational(r))
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(R::from_i64(n))
    }

    fn inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = &self.terms[0];
        Some(Self::monomial(-e, c.inverse()?))
    }

    fn radd(&self, o: &Self) -> Self {
        self.merge(o, false)
    }
    fn rsub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }
    fn rmul(&self, o: &Self) -> Self {
        self.product(o)
    }
    fn rneg(&self) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, c.rneg())).collect() }
    }
    fn add_assign_ref(&mut self, o: &Self) {
        if o.terms.is_empty() {
            return;
        }
        if self.terms.is_empty() {
            *self = o.clone();
            return;
        }
        if o.terms.len() == 1 {
            let (e, c) = &o.terms[0];
            match self.terms.binary_search_by_key(e, |t| t.0) {
                Ok(i) => {
                    self.terms[i].1.add_assign_ref(c);
                    if self.terms[i].1.is_zero() {
                        self.terms.remove(i);
                    }
                }
                Err(i) => self.terms.insert(i, (*e, c.clone())),
            }
            return;
        }
        *self = self.merge(o, false);
    }

    /// Each row is cleared of negative powers, so every minor is a
    /// polynomial of degree at most the sum `D` of the row spans. A nonzero
    /// such polynomial has at most `D` roots, so the largest rank over `D + 1`
    /// distinct specializations is the generic rank.
    fn rank_of(m: &[Vec<Self>]) -> usize {
        let Some(first) = m.first() else { return 0 };
        let full = m.len().min(first.len());
        let mut total: i64 = 0;
        let rows: Vec<Vec<Self>> = m
            .iter()
            .map(|row| {
                let lo = row.iter().filter_map(|x| x.min_exp()).min().unwrap_or(0);
                let hi = row.iter().filter_map(|x| x.max_exp()).max().unwrap_or(0);
                total += (hi - lo) as i64;
                row.iter().map(|x| x.shift(-lo)).collect()
            })
            .collect();
        let mut best = 0;
        for k in 1..=(total + 1) {
            let z0 = R::from_i64(k);
            let spec: Vec<Vec<R>> = rows.iter().map(|r| r.iter().map(|x| x.eval(&z0).expect("no negative powers")).collect()).collect();
            best = best.max(R::rank_of(&spec));
            if best == full {
                break;
            }
        }
        best
    }
}

impl Laurent<BigRational> {
    /// Parses the list form `[(k, p/q), ...]`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad parameter scalar '{s}'")))?;
        let mut terms = Vec::new();
        for chunk in inner.split(')') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("bad term '{chunk}'")))?;
            let (e, c) = body
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad term '{chunk}'")))?;
            let e: i32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent '{e}'")))?;
            terms.push((e, parse_rational(c)?));
        }
        Ok(Self::from_terms(terms))
    }

    /// Serializes in the list form `[(k, p/q), ...]`.
    pub fn to_list(&self) -> String {
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("({}, {})", e, format_rational(c))).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl<R: Scalar> fmt::Display for Laurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = mag == "1";
            match (*e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (k, true) => write!(f, "z^{k}")?,
                (k, false) => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<R: Scalar> fmt::Debug for Laurent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
