//! Multivariate formal series given by a coefficient oracle and a polyhedral
//! support certificate.
//!
//! A [`Series`] never materializes its terms. Products are only formed when
//! the recession cones of the factors' supports are not opposed, which makes
//! every coefficient of the product a finite sum; the summation range is then
//! enumerated exactly from a precomputed elimination tower.

pub mod delta;
pub mod identity;
pub mod poly;
pub mod ratfn;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::Coeff;

pub use delta::{mk_binomial, mk_delta, Mono};
pub use identity::{check_identity, IdentityReport, Mismatch, Window};
pub use poly::Polyhedron;
pub use ratfn::{iota_expand, Dir, RationalFn};

/// Largest number of simultaneous formal variables.
pub const MAX_VARS: usize = 6;

/// Ordered set of variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new(names: &[&str]) -> Result<Vars> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len(), MAX_VARS));
        }
        let set: HashSet<&&str> = names.iter().collect();
        if set.len() != names.len() {
            return Err(Error::VariableMismatch(format!("repeated variable in {names:?}")));
        }
        Ok(Vars(names.iter().map(|s| s.to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::VariableMismatch(format!("{name} not in {:?}", self.0)))
    }

    pub fn without(&self, name: &str) -> Result<Vars> {
        self.index(name)?;
        let rest: Vec<&str> = self.0.iter().filter(|n| *n != name).map(|s| s.as_str()).collect();
        Vars::new(&rest)
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

type CoeffFn<C> = dyn Fn(&[i64]) -> Result<C> + Send + Sync;

/// Formal series in `vars` with coefficients in `C`, an `S`-module.
pub struct Series<S: Scalar, C: Coeff<S> = S> {
    vars: Vars,
    support: Arc<Vec<Polyhedron>>,
    f: Arc<CoeffFn<C>>,
    _s: PhantomData<fn() -> S>,
}

impl<S: Scalar, C: Coeff<S>> Clone for Series<S, C> {
    fn clone(&self) -> Self {
        Series { vars: self.vars.clone(), support: self.support.clone(), f: self.f.clone(), _s: PhantomData }
    }
}

impl<S: Scalar, C: Coeff<S>> fmt::Debug for Series<S, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series{:?} with {} support pieces", self.vars, self.support.len())
    }
}

impl<S: Scalar, C: Coeff<S>> Series<S, C> {
    /// Builds a series from a coefficient function. The function is only
    /// consulted on exponents inside `support`.
    pub fn from_fn(
        vars: Vars,
        support: Vec<Polyhedron>,
        f: impl Fn(&[i64]) -> Result<C> + Send + Sync + 'static,
    ) -> Self {
        let support: Vec<Polyhedron> = support.into_iter().filter(|p| !p.is_empty()).collect();
        Series { vars, support: Arc::new(support), f: Arc::new(f), _s: PhantomData }
    }

    pub fn zero(vars: Vars) -> Self {
        Series::from_fn(vars, Vec::new(), |_| Ok(C::null()))
    }

    /// Finite sum of monomials.
    pub fn polynomial(vars: Vars, terms: Vec<(Vec<i64>, C)>) -> Self {
        let mut map: HashMap<Vec<i64>, C> = HashMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            map.entry(e).or_insert_with(C::null).accumulate(&c);
        }
        map.retain(|_, c| !c.is_null());
        let support = map.keys().map(|e| Polyhedron::point(e.clone())).collect();
        Series::from_fn(vars, support, move |e| Ok(map.get(e).cloned().unwrap_or_else(C::null)))
    }

    pub fn monomial(vars: Vars, e: Vec<i64>, c: C) -> Self {
        Series::polynomial(vars, vec![(e, c)])
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn support(&self) -> &[Polyhedron] {
        &self.support
    }

    pub fn in_support(&self, e: &[i64]) -> bool {
        self.support.iter().any(|p| p.contains(e))
    }

    pub fn coeff(&self, e: &[i64]) -> Result<C> {
        if e.len() != self.vars.len() {
            return Err(Error::VariableMismatch(format!("exponent {e:?} for {:?}", self.vars)));
        }
        if !self.in_support(e) {
            return Ok(C::null());
        }
        (self.f)(e)
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, other.vars)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(other, S::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(other, S::one().rneg())
    }

    fn lin_comb(&self, other: &Self, c: S) -> Result<Self> {
        self.same_vars(other)?;
        let (a, b) = (self.clone(), other.clone());
        let mut support: Vec<Polyhedron> = self.support.to_vec();
        support.extend(other.support.iter().cloned());
        Ok(Series::from_fn(self.vars.clone(), support, move |e| {
            let mut r = a.coeff(e)?;
            r.add_scaled(&b.coeff(e)?, &c);
            Ok(r)
        }))
    }

    pub fn scale(&self, c: &S) -> Self {
        let (a, c) = (self.clone(), c.clone());
        Series::from_fn(self.vars.clone(), self.support.to_vec(), move |e| Ok(a.coeff(e)?.scaled(&c)))
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::one().rneg())
    }

    /// Multiplies by the monomial with exponent `shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let a = self.clone();
        let sh = shift.to_vec();
        let support =
            self.support.iter().map(|p| p.minkowski(&Polyhedron::point(sh.clone()))).collect();
        Series::from_fn(self.vars.clone(), support, move |e| {
            let back: Vec<i64> = e.iter().zip(&sh).map(|(x, s)| x - s).collect();
            a.coeff(&back)
        })
    }

    /// Coefficient of `var^-1`, as a series in the remaining variables.
    pub fn residue(&self, var: &str) -> Result<Self> {
        self.coefficient_of(var, -1)
    }

    /// Coefficient of `var^k`, as a series in the remaining variables.
    pub fn coefficient_of(&self, var: &str, k: i64) -> Result<Self> {
        let idx = self.vars.index(var)?;
        let vars = self.vars.without(var)?;
        let a = self.clone();
        let support = self.support.iter().map(|p| p.slice(idx, k)).collect();
        Ok(Series::from_fn(vars, support, move |e| {
            let mut full = e.to_vec();
            full.insert(idx, k);
            a.coeff(&full)
        }))
    }

    /// Re-expresses the series over a larger variable set.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        let map: Vec<usize> = self.vars.names().iter().map(|n| target.index(n)).collect::<Result<_>>()?;
        let a = self.clone();
        let m = target.len();
        let support = self.support.iter().map(|p| p.embed(m, &map)).collect();
        let map2 = map.clone();
        Ok(Series::from_fn(target.clone(), support, move |e| {
            let inner: Vec<i64> = map2.iter().map(|&j| e[j]).collect();
            a.coeff(&inner)
        }))
    }

    /// Applies a linear map to every coefficient.
    pub fn map<D: Coeff<S>>(&self, g: impl Fn(&C) -> Result<D> + Send + Sync + 'static) -> Series<S, D> {
        let a = self.clone();
        Series::from_fn(self.vars.clone(), self.support.to_vec(), move |e| g(&a.coeff(e)?))
    }
}

struct ProductPlan {
    pairs: Vec<(usize, usize, poly::SplitPlan)>,
}

/// Product of a scalar series with an `S`-module-valued series.
///
/// Fails with [`Error::IllDefinedProduct`] when some pair of support pieces
/// has opposed recession cones, since then a coefficient would be an
/// infinite sum.
pub fn fs_mul<S: Scalar, C: Coeff<S>>(a: &Series<S>, b: &Series<S, C>) -> Result<Series<S, C>> {
    if a.vars != b.vars {
        return Err(Error::VariableMismatch(format!("{:?} vs {:?}", a.vars, b.vars)));
    }
    let mut pairs = Vec::new();
    let mut support = Vec::new();
    for (i, p) in a.support.iter().enumerate() {
        for (j, q) in b.support.iter().enumerate() {
            if let Some(w) = poly::opposed_recession(p, q) {
                return Err(Error::IllDefinedProduct { witness: w });
            }
            pairs.push((i, j, poly::SplitPlan::new(p, q)));
            support.push(p.minkowski(q));
        }
    }
    let plan = Arc::new(ProductPlan { pairs });
    let memo: Arc<Mutex<HashMap<Vec<i64>, C>>> = Arc::new(Mutex::new(HashMap::new()));
    let (a, b) = (a.clone(), b.clone());
    Ok(Series::from_fn(a.vars.clone(), support, move |e| {
        if let Some(c) = memo.lock().expect("memo").get(e) {
            return Ok(c.clone());
        }
        let mut splits: HashSet<Vec<i64>> = HashSet::new();
        for (_, _, sp) in &plan.pairs {
            sp.for_each(e, &mut |x| {
                splits.insert(x.to_vec());
            })
            .map_err(|_| Error::Unbounded(e.to_vec()))?;
        }
        let mut splits: Vec<Vec<i64>> = splits.into_iter().collect();
        splits.sort();
        let mut acc = C::null();
        for x in splits {
            let ca = a.coeff(&x)?;
            if ca.is_null() {
                continue;
            }
            let rest: Vec<i64> = e.iter().zip(&x).map(|(p, q)| p - q).collect();
            let cb = b.coeff(&rest)?;
            acc.add_scaled(&cb, &ca);
        }
        memo.lock().expect("memo").insert(e.to_vec(), acc.clone());
        Ok(acc)
    }))
}

/// Product of several scalar series, left to right.
pub fn fs_product<S: Scalar>(factors: &[Series<S>]) -> Result<Series<S>> {
    let mut it = factors.iter();
    let first = it.next().ok_or_else(|| Error::Config("empty product".into()))?.clone();
    it.try_fold(first, |acc, s| fs_mul(&acc, s))
}

/// Coefficient of `e` in `s`.
pub fn fs_coeff<S: Scalar, C: Coeff<S>>(s: &Series<S, C>, e: &[i64]) -> Result<C> {
    s.coeff(e)
}

/// Residue of `s` in `var`.
pub fn fs_residue<S: Scalar, C: Coeff<S>>(s: &Series<S, C>, var: &str) -> Result<Series<S, C>> {
    s.residue(var)
}
