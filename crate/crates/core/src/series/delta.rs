//! Delta-function kernels and binomial expansions.
//!
//! `(u + v)^n` is always expanded in nonnegative integer powers of the
//! second-written term `v`.

use std::ops::Neg;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::{Polyhedron, Series, Vars};
use crate::error::{Error, Result};
use crate::scalar::{binom, Scalar, ZParam};
use crate::Rational;

/// Monomial `c · z^k · x^e` over a variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct Mono {
    pub c: Rational,
    pub zpow: i64,
    pub exps: Vec<i64>,
}

impl Neg for Mono {
    type Output = Mono;

    fn neg(mut self) -> Mono {
        self.c = -self.c;
        self
    }
}

impl Mono {
    pub fn one(vars: &Vars) -> Mono {
        Mono { c: Rational::one(), zpow: 0, exps: vec![0; vars.len()] }
    }

    /// The variable `name` to the first power.
    pub fn var(vars: &Vars, name: &str) -> Result<Mono> {
        let mut m = Mono::one(vars);
        m.exps[vars.index(name)?] = 1;
        Ok(m)
    }

    /// The parameter `z`.
    pub fn z(vars: &Vars) -> Mono {
        Mono { zpow: 1, ..Mono::one(vars) }
    }

    pub fn inv(self) -> Mono {
        Mono { c: self.c.recip(), zpow: -self.zpow, exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn pow(self, k: i64) -> Mono {
        let c = if k >= 0 { num_traits::pow(self.c.clone(), k as usize) } else { num_traits::pow(self.c.recip(), (-k) as usize) };
        Mono { c, zpow: self.zpow * k, exps: self.exps.iter().map(|e| e * k).collect() }
    }

    pub fn times(mut self, o: &Mono) -> Mono {
        self.c *= &o.c;
        self.zpow += o.zpow;
        for (a, b) in self.exps.iter_mut().zip(&o.exps) {
            *a += b;
        }
        self
    }

    /// `c^k z^{zpow k}` in the scalar ring, for the factor of a term of
    /// multiplicity `k`.
    fn scalar_pow<S: Scalar>(&self, k: i64, zp: &ZParam<S>) -> S {
        let c = if self.c.is_one() {
            S::one()
        } else if self.c == -Rational::one() {
            if k.rem_euclid(2) == 0 {
                S::one()
            } else {
                S::one().rneg()
            }
        } else if k >= 0 {
            S::from_rational(&num_traits::pow(self.c.clone(), k as usize))
        } else {
            S::from_rational(&num_traits::pow(self.c.recip(), k.unsigned_abs() as usize))
        };
        if self.zpow == 0 {
            c
        } else {
            c.rmul(&zp.pow(self.zpow * k))
        }
    }
}

/// Solves `n·α + k·β = r` over the integers, for linearly independent `α`,
/// `β` (or `β` absent).
fn solve2(alpha: &[i64], beta: Option<&[i64]>, r: &[i64]) -> Option<(i64, i64)> {
    let m = alpha.len();
    match beta {
        None => {
            let i = (0..m).find(|&i| alpha[i] != 0)?;
            if r[i] % alpha[i] != 0 {
                return None;
            }
            let n = r[i] / alpha[i];
            (0..m).all(|j| n * alpha[j] == r[j]).then_some((n, 0))
        }
        Some(beta) => {
            for i in 0..m {
                for j in i + 1..m {
                    let det = alpha[i] * beta[j] - alpha[j] * beta[i];
                    if det == 0 {
                        continue;
                    }
                    let nn = r[i] * beta[j] - r[j] * beta[i];
                    let kk = alpha[i] * r[j] - alpha[j] * r[i];
                    if nn % det != 0 || kk % det != 0 {
                        return None;
                    }
                    let (n, k) = (nn / det, kk / det);
                    return (0..m).all(|l| n * alpha[l] + k * beta[l] == r[l]).then_some((n, k));
                }
            }
            None
        }
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Kernel `T^{-1} δ((U + V)/T) = Σ_n T^{-n-1}(U + V)^n`, with `(U + V)^n`
/// expanded in nonnegative powers of `V`. Passing `None` for `V` gives
/// `T^{-1} δ(U/T)`.
///
/// The exponent directions of `U/T` and `V/U` must be linearly independent
/// so that each coefficient comes from a single term.
pub fn mk_delta<S: Scalar>(
    vars: &Vars,
    target: Mono,
    u: Mono,
    v: Option<Mono>,
    zp: &ZParam<S>,
) -> Result<Series<S>> {
    let alpha = sub(&u.exps, &target.exps);
    let beta = v.as_ref().map(|v| sub(&v.exps, &u.exps));
    if alpha.iter().all(|&x| x == 0) {
        return Err(Error::Config("delta kernel with constant argument".into()));
    }
    if let Some(b) = &beta {
        let dependent = (0..alpha.len())
            .all(|i| (0..alpha.len()).all(|j| alpha[i] * b[j] - alpha[j] * b[i] == 0));
        if dependent {
            return Err(Error::Config("delta kernel with dependent directions".into()));
        }
    }
    let base: Vec<i64> = target.exps.iter().map(|e| -e).collect();
    let mut gens = vec![alpha.clone(), alpha.iter().map(|x| -x).collect()];
    if let Some(b) = &beta {
        gens.push(b.clone());
    }
    let support = vec![Polyhedron::cone(base.clone(), gens)];
    let zp = Arc::new(zp.clone());
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        let r = sub(e, &base);
        let Some((n, k)) = solve2(&alpha, beta.as_deref(), &r) else { return Ok(S::zero()) };
        if k < 0 {
            return Ok(S::zero());
        }
        let b: S = binom(n, k as u64);
        if b.is_zero() {
            return Ok(b);
        }
        let mut c = target.scalar_pow(-n - 1, &zp).rmul(&u.scalar_pow(n - k, &zp));
        if let Some(v) = &v {
            c = c.rmul(&v.scalar_pow(k, &zp));
        }
        Ok(c.rmul(&b))
    }))
}

/// `(U + V)^m` expanded in nonnegative powers of `V`.
pub fn mk_binomial<S: Scalar>(vars: &Vars, u: Mono, v: Mono, m: i64, zp: &ZParam<S>) -> Result<Series<S>> {
    let beta = sub(&v.exps, &u.exps);
    let base: Vec<i64> = u.exps.iter().map(|e| e * m).collect();
    let zp = Arc::new(zp.clone());
    if beta.iter().all(|&x| x == 0) {
        // both terms carry the same monomial in the variables: a finite scalar sum
        let mut acc = S::zero();
        if m < 0 {
            return Err(Error::Config("binomial of dependent terms with negative exponent".into()));
        }
        for k in 0..=m {
            let t = u.scalar_pow(m - k, &zp).rmul(&v.scalar_pow(k, &zp)).rmul(&binom::<S>(m, k as u64));
            acc.add_assign_ref(&t);
        }
        return Ok(Series::monomial(vars.clone(), base, acc));
    }
    let support = vec![Polyhedron::cone(base.clone(), vec![beta.clone()])];
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        let r = sub(e, &base);
        let Some((k, _)) = solve2(&beta, None, &r) else { return Ok(S::zero()) };
        if k < 0 {
            return Ok(S::zero());
        }
        let b: S = binom(m, k as u64);
        if b.is_zero() {
            return Ok(b);
        }
        Ok(u.scalar_pow(m - k, &zp).rmul(&v.scalar_pow(k, &zp)).rmul(&b))
    }))
}

/// Sign helper used by callers building `(-x)`-type monomials.
pub fn is_negative(m: &Mono) -> bool {
    m.c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{check_identity, fs_mul, Window};
    use crate::{ParamScalar, Rational};

    fn setup(names: &[&str]) -> (Vars, ZParam<ParamScalar>) {
        (Vars::new(names).unwrap(), ZParam::new(ParamScalar::var()).unwrap())
    }

    fn int(n: i64) -> ParamScalar {
        ParamScalar::from_i64(n)
    }

    #[test]
    fn delta_difference_kernel() {
        let (v, zp) = setup(&["x0", "x1", "x2"]);
        let x = |n| Mono::var(&v, n).unwrap();
        let k = mk_delta(&v, x("x0"), x("x1"), Some(x("x2").neg()), &zp).unwrap();
        assert_eq!(k.coeff(&[-2, 0, 1]).unwrap(), int(-1));
        assert_eq!(k.coeff(&[-1, 0, 0]).unwrap(), int(1));
        assert_eq!(k.coeff(&[-3, 1, 1]).unwrap(), int(-2));
        assert_eq!(k.coeff(&[-3, 0, 1]).unwrap(), int(0));
    }

    #[test]
    fn single_delta_diagonal() {
        let (v, zp) = setup(&["x", "y"]);
        let k = mk_delta(&v, Mono::var(&v, "x").unwrap(), Mono::var(&v, "y").unwrap(), None, &zp).unwrap();
        assert_eq!(k.coeff(&[-2, 1]).unwrap(), int(1));
        assert_eq!(k.coeff(&[-2, 2]).unwrap(), int(0));
        let y2 = crate::series::Series::monomial(v.clone(), vec![0, 2], int(1));
        let p = fs_mul(&k, &y2).unwrap();
        // y^2 · Σ y^n x^{-n-1} puts x^{-3} against y^4, not y^2
        assert_eq!(p.coeff(&[-3, 4]).unwrap(), int(1));
        assert_eq!(p.coeff(&[-3, 2]).unwrap(), int(0));
        assert_eq!(p.coeff(&[-1, 2]).unwrap(), int(1));
        let r = k.residue("x").unwrap();
        assert_eq!(r.coeff(&[0]).unwrap(), int(1));
        assert_eq!(r.coeff(&[1]).unwrap(), int(0));
    }

    #[test]
    fn two_term_relation() {
        let (v, zp) = setup(&["x0", "x1", "x2"]);
        let x = |n| Mono::var(&v, n).unwrap();
        let lhs = mk_delta(&v, x("x2"), x("x1"), Some(x("x0").neg()), &zp).unwrap();
        let rhs = mk_delta(&v, x("x1"), x("x2"), Some(x("x0")), &zp).unwrap();
        let rep = check_identity("two-term", &lhs, &rhs, &Window::cube(&v, 5));
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn z_powers_in_kernel() {
        // z^{-1} δ((x1 - x0)/z): coefficient of x1^a x0^b is C(a+b, b)(-1)^b z^{-a-b-1}
        let (v, zp) = setup(&["x0", "x1"]);
        let k = mk_delta(&v, Mono::z(&v), Mono::var(&v, "x1").unwrap(), Some(Mono::var(&v, "x0").unwrap().neg()), &zp)
            .unwrap();
        assert_eq!(k.coeff(&[1, 2]).unwrap(), ParamScalar::monomial(-4, Rational::from_integer((-3).into())));
        assert_eq!(k.coeff(&[-1, 2]).unwrap(), int(0));
    }
}
