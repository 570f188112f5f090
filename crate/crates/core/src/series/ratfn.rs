//! Rational functions of `t` with linear denominators, and their expansions
//! around `t = 0` (ι₊) and `t = ∞` (ι₋).

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{Polyhedron, Series, Vars};
use crate::error::{Error, Result};
use crate::scalar::{binom, Scalar};

/// Expansion direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    /// Finitely many negative powers of `t`.
    Plus,
    /// Finitely many negative powers of `t^{-1}`.
    Minus,
}

/// Laurent polynomial in `t`: sorted exponents, no zero coefficients.
type TPoly<S> = Vec<(i64, S)>;

fn tp_normalize<S: Scalar>(mut p: TPoly<S>) -> TPoly<S> {
    p.sort_by_key(|e| e.0);
    let mut out: TPoly<S> = Vec::with_capacity(p.len());
    for (e, c) in p {
        match out.last_mut() {
            Some((f, d)) if *f == e => d.add_assign_ref(&c),
            _ => out.push((e, c)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn tp_mul<S: Scalar>(a: &TPoly<S>, b: &TPoly<S>) -> TPoly<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (e, c) in a {
        for (f, d) in b {
            out.push((e + f, c.rmul(d)));
        }
    }
    tp_normalize(out)
}

/// `(a + b t)^k` for `k >= 0`.
fn tp_linear_pow<S: Scalar>(a: &S, b: &S, k: u32) -> TPoly<S> {
    tp_normalize(
        (0..=k as i64)
            .map(|j| {
                let c = binom::<S>(k as i64, j as u64);
                (j, c.rmul(&pow(a, k as i64 - j)).rmul(&pow(b, j)))
            })
            .collect(),
    )
}

fn pow<S: Scalar>(a: &S, k: i64) -> S {
    assert!(k >= 0);
    let mut r = S::one();
    for _ in 0..k {
        r = r.rmul(a);
    }
    r
}

/// `(a + b t)^{-m}`.
#[derive(Clone, Debug)]
pub struct Factor<S> {
    pub a: S,
    pub b: S,
    pub m: u32,
}

/// `numerator(t) · Π (a + b t)^{-m}`.
#[derive(Clone)]
pub struct RationalFn<S: Scalar> {
    num: TPoly<S>,
    factors: Vec<Factor<S>>,
}

impl<S: Scalar> RationalFn<S> {
    pub fn zero() -> Self {
        RationalFn { num: Vec::new(), factors: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, S::one())
    }

    /// `c t^k`.
    pub fn monomial(k: i64, c: S) -> Self {
        RationalFn { num: tp_normalize(vec![(k, c)]), factors: Vec::new() }
    }

    pub fn laurent(terms: Vec<(i64, S)>) -> Self {
        RationalFn { num: tp_normalize(terms), factors: Vec::new() }
    }

    /// `(a + b t)^{-m}`; a negative `m` gives the polynomial `(a + b t)^{|m|}`.
    pub fn factor(a: S, b: S, m: i64) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Config("factor (0 + 0 t)".into()));
        }
        if m <= 0 {
            return Ok(RationalFn { num: tp_linear_pow(&a, &b, (-m) as u32), factors: Vec::new() });
        }
        let f = RationalFn { num: vec![(0, S::one())], factors: vec![Factor { a, b, m: m as u32 }] };
        f.normalized()
    }

    pub fn numerator(&self) -> &[(i64, S)] {
        &self.num
    }

    pub fn factors(&self) -> &[Factor<S>] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Makes every factor monic in `t` when possible, moves pure powers of
    /// `t` into the numerator, and merges equal factors.
    fn normalized(mut self) -> Result<Self> {
        let mut factors: Vec<Factor<S>> = Vec::new();
        for f in std::mem::take(&mut self.factors) {
            if f.b.is_zero() {
                let inv = f.a.inverse().ok_or_else(|| Error::NotInvertible(f.a.to_string()))?;
                self.num = tp_mul(&self.num, &vec![(0, pow(&inv, f.m as i64))]);
                continue;
            }
            if f.a.is_zero() {
                let inv = f.b.inverse().ok_or_else(|| Error::NotInvertible(f.b.to_string()))?;
                self.num = tp_mul(&self.num, &vec![(-(f.m as i64), pow(&inv, f.m as i64))]);
                continue;
            }
            let (a, b) = match f.b.inverse() {
                Some(binv) if !f.b.is_one() => {
                    self.num = tp_mul(&self.num, &vec![(0, pow(&binv, f.m as i64))]);
                    (f.a.rmul(&binv), S::one())
                }
                _ => (f.a, f.b),
            };
            match factors.iter_mut().find(|g| g.a == a && g.b == b) {
                Some(g) => g.m += f.m,
                None => factors.push(Factor { a, b, m: f.m }),
            }
        }
        self.factors = factors;
        if self.num.is_empty() {
            self.factors.clear();
        }
        Ok(self)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = self.clone();
        r.num = tp_normalize(r.num.into_iter().map(|(e, d)| (e, d.rmul(c))).collect());
        if r.num.is_empty() {
            r.factors.clear();
        }
        r
    }

    /// Multiplies by `t^k`.
    pub fn shift_t(&self, k: i64) -> Self {
        let mut r = self.clone();
        for e in r.num.iter_mut() {
            e.0 += k;
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        RationalFn { num: tp_mul(&self.num, &o.num), factors }.normalized()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        // common denominator: maximal multiplicity of each factor
        let mut common: Vec<Factor<S>> = self.factors.clone();
        for f in &o.factors {
            match common.iter_mut().find(|g| g.a == f.a && g.b == f.b) {
                Some(g) => g.m = g.m.max(f.m),
                None => common.push(f.clone()),
            }
        }
        let lift = |r: &Self| -> TPoly<S> {
            let mut n = r.num.clone();
            for g in &common {
                let have = r.factors.iter().find(|f| f.a == g.a && f.b == g.b).map_or(0, |f| f.m);
                n = tp_mul(&n, &tp_linear_pow(&g.a, &g.b, g.m - have));
            }
            n
        };
        let mut num = lift(self);
        num.extend(lift(o));
        RationalFn { num: tp_normalize(num), factors: common }.normalized()
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&S::one().rneg()))
    }

    /// Substitution `t -> t + a`.
    pub fn translate(&self, a: &S) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let emin = self.num[0].0.min(0);
        let mut num: TPoly<S> = Vec::new();
        for (e, c) in &self.num {
            let p = tp_linear_pow(a, &S::one(), (e - emin) as u32);
            num.extend(p.into_iter().map(|(f, d)| (f, d.rmul(c))));
        }
        let mut factors: Vec<Factor<S>> =
            self.factors.iter().map(|f| Factor { a: f.a.radd(&f.b.rmul(a)), b: f.b.clone(), m: f.m }).collect();
        if emin < 0 {
            factors.push(Factor { a: a.clone(), b: S::one(), m: (-emin) as u32 });
        }
        RationalFn { num: tp_normalize(num), factors }.normalized()
    }

    /// Substitution `t -> t^{-1}`.
    pub fn invert_t(&self) -> Result<Self> {
        let mut num: TPoly<S> = tp_normalize(self.num.iter().map(|(e, c)| (-e, c.clone())).collect());
        let mut factors = Vec::new();
        for f in &self.factors {
            // (a + b/t)^{-m} = t^m (b + a t)^{-m}
            num = num.into_iter().map(|(e, c)| (e + f.m as i64, c)).collect();
            factors.push(Factor { a: f.b.clone(), b: f.a.clone(), m: f.m });
        }
        RationalFn { num, factors }.normalized()
    }

    /// Total multiplicity of the denominator.
    fn total_mult(&self) -> i64 {
        self.factors.iter().map(|f| f.m as i64).sum()
    }

    /// Exponent range of the expansion: `(lo, hi)` with `None` meaning
    /// unbounded on that side.
    pub fn expansion_range(&self, dir: Dir) -> Option<(Option<i64>, Option<i64>)> {
        if self.is_zero() {
            return None;
        }
        let lo = self.num.first().unwrap().0;
        let hi = self.num.last().unwrap().0;
        if self.factors.is_empty() {
            return Some((Some(lo), Some(hi)));
        }
        Some(match dir {
            Dir::Plus => (Some(lo), None),
            Dir::Minus => (None, Some(hi - self.total_mult())),
        })
    }

    /// Coefficient source for the expansion in direction `dir`.
    pub fn expansion(&self, dir: Dir) -> Result<Expansion<S>> {
        let mut per_factor = Vec::new();
        for f in &self.factors {
            let (lead, ratio) = match dir {
                Dir::Plus => (&f.a, &f.b),
                Dir::Minus => (&f.b, &f.a),
            };
            let inv = lead.inverse().ok_or_else(|| Error::NotInvertible(lead.to_string()))?;
            // lead^{-m} (1 + (ratio/lead) s)^{-m}
            per_factor.push((pow(&inv, f.m as i64), ratio.rmul(&inv), f.m));
        }
        Ok(Expansion {
            dir,
            num: self.num.clone(),
            shift: match dir {
                Dir::Plus => 0,
                Dir::Minus => -self.total_mult(),
            },
            factors: per_factor,
            cache: Arc::new(Mutex::new(Vec::new())),
        })
    }

    /// Single coefficient of the expansion.
    pub fn iota_coeff(&self, dir: Dir, k: i64) -> Result<S> {
        self.expansion(dir)?.coeff(k)
    }
}

/// Lazily extended power series for an expansion. The cached `p_j` are the
/// coefficients of `Π lead^{-m}(1 + r s)^{-m}` in `s = t` (ι₊) or
/// `s = t^{-1}` (ι₋).
#[derive(Clone)]
pub struct Expansion<S: Scalar> {
    dir: Dir,
    num: TPoly<S>,
    shift: i64,
    factors: Vec<(S, S, u32)>,
    cache: Arc<Mutex<Vec<S>>>,
}

impl<S: Scalar> Expansion<S> {
    fn series_coeff(&self, j: i64) -> S {
        if j < 0 {
            return S::zero();
        }
        if self.factors.is_empty() {
            return if j == 0 { S::one() } else { S::zero() };
        }
        let j = j as usize;
        let mut cache = self.cache.lock().expect("expansion cache");
        if cache.len() <= j {
            let deg = (j + 1).max(2 * cache.len()).max(8);
            let mut acc = vec![S::zero(); deg];
            acc[0] = S::one();
            for (scale, r, m) in &self.factors {
                let fs: Vec<S> = (0..deg)
                    .map(|i| binom::<S>(-(*m as i64), i as u64).rmul(&pow(r, i as i64)).rmul(scale))
                    .collect();
                let mut next = vec![S::zero(); deg];
                for (i, a) in acc.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (l, b) in fs.iter().enumerate().take(deg - i) {
                        next[i + l].add_mul(a, b);
                    }
                }
                acc = next;
            }
            *cache = acc;
        }
        cache[j].clone()
    }

    pub fn coeff(&self, k: i64) -> Result<S> {
        let mut acc = S::zero();
        for (e, c) in &self.num {
            let j = match self.dir {
                Dir::Plus => k - e,
                Dir::Minus => e + self.shift - k,
            };
            let p = self.series_coeff(j);
            if !p.is_zero() {
                acc.add_mul(c, &p);
            }
        }
        Ok(acc)
    }
}

/// Expansion of `f` as a one-variable series in `var`, embedded in `vars`
/// (all other exponents zero).
pub fn iota_expand<S: Scalar>(f: &RationalFn<S>, dir: Dir, vars: &Vars, var: &str) -> Result<Series<S>> {
    let idx = vars.index(var)?;
    let n = vars.len();
    let Some((lo, hi)) = f.expansion_range(dir) else { return Ok(Series::zero(vars.clone())) };
    let mut base = vec![0i64; n];
    let mut unit = vec![0i64; n];
    unit[idx] = 1;
    let support = match (lo, hi) {
        (Some(l), Some(h)) => (l..=h)
            .map(|k| {
                base[idx] = k;
                Polyhedron::point(base.clone())
            })
            .collect(),
        (Some(l), None) => {
            base[idx] = l;
            vec![Polyhedron::cone(base, vec![unit])]
        }
        (None, Some(h)) => {
            base[idx] = h;
            vec![Polyhedron::cone(base, vec![unit.iter().map(|x| -x).collect()])]
        }
        (None, None) => unreachable!(),
    };
    let ex = f.expansion(dir)?;
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        if e.iter().enumerate().any(|(i, &x)| i != idx && x != 0) {
            return Ok(S::zero());
        }
        ex.coeff(e[idx])
    }))
}

impl<S: Scalar> PartialEq for RationalFn<S> {
    /// Equality as rational functions, by cross-multiplication.
    fn eq(&self, o: &Self) -> bool {
        let clear = |num: &TPoly<S>, fs: &[Factor<S>]| {
            let mut n = num.clone();
            for f in fs {
                n = tp_mul(&n, &tp_linear_pow(&f.a, &f.b, f.m));
            }
            n
        };
        clear(&self.num, &o.factors) == clear(&o.num, &self.factors)
    }
}

impl<S: Scalar> fmt::Display for RationalFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.num.iter().rev().map(|(e, c)| format!("({c})*t^{e}")).collect();
        write!(f, "[{}]", terms.join(" + "))?;
        for fac in &self.factors {
            write!(f, "*(({}) + ({})*t)^-{}", fac.a, fac.b, fac.m)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for RationalFn<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ParamScalar;

    fn z() -> ParamScalar {
        ParamScalar::var()
    }

    fn zk(k: i32) -> ParamScalar {
        ParamScalar::monomial(k, crate::Rational::from_integer(1.into()))
    }

    fn one() -> ParamScalar {
        ParamScalar::from_i64(1)
    }

    #[test]
    fn iota_of_inverse_linear() {
        let f = RationalFn::factor(z(), one(), 1).unwrap();
        assert_eq!(f.iota_coeff(Dir::Plus, 2).unwrap(), zk(-3));
        assert_eq!(f.iota_coeff(Dir::Plus, 3).unwrap(), zk(-4).rneg());
        assert_eq!(f.iota_coeff(Dir::Plus, -1).unwrap(), ParamScalar::from_i64(0));
        assert_eq!(f.iota_coeff(Dir::Minus, -3).unwrap(), zk(2));
        assert_eq!(f.iota_coeff(Dir::Minus, -1).unwrap(), one());
        assert_eq!(f.iota_coeff(Dir::Minus, 0).unwrap(), ParamScalar::from_i64(0));
        let t5 = RationalFn::monomial(5, one());
        assert_eq!(t5.iota_coeff(Dir::Plus, 5).unwrap(), one());
        assert_eq!(t5.expansion_range(Dir::Plus), Some((Some(5), Some(5))));
    }

    #[test]
    fn translation_examples() {
        let f = RationalFn::factor(z(), one(), 1).unwrap();
        let g = f.translate(&z().rneg()).unwrap();
        assert_eq!(g, RationalFn::monomial(-1, one()));
        assert!(g.factors().is_empty());
        let t = RationalFn::monomial(1, one());
        assert_eq!(t.translate(&z().rneg()).unwrap(), RationalFn::laurent(vec![(1, one()), (0, z().rneg())]));
        assert_eq!(g.translate(&z()).unwrap(), f);
    }

    #[test]
    fn inversion_example() {
        // 1/(z - t) -> -z^{-1} t (z^{-1} - t)^{-1}
        let f = RationalFn::factor(z(), one().rneg(), 1).unwrap();
        let g = f.invert_t().unwrap();
        let expect = RationalFn::factor(zk(-1), one().rneg(), 1).unwrap().mul(&RationalFn::monomial(1, zk(-1).rneg())).unwrap();
        assert_eq!(g, expect);
        assert_eq!(g.invert_t().unwrap(), f);
        let t3 = RationalFn::monomial(3, one());
        assert_eq!(t3.invert_t().unwrap(), RationalFn::monomial(-3, one()));
    }

    #[test]
    fn sums_over_common_denominators() {
        let a = RationalFn::factor(z(), one(), 1).unwrap();
        let b = RationalFn::factor(z(), one(), 2).unwrap();
        let s = a.add(&b).unwrap();
        for k in 0..6 {
            assert_eq!(
                s.iota_coeff(Dir::Plus, k).unwrap(),
                a.iota_coeff(Dir::Plus, k).unwrap() + b.iota_coeff(Dir::Plus, k).unwrap()
            );
        }
    }
}
