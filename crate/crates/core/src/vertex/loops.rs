//! Loop elements `Σ v ⊗ f(t)` and the operations on them: the
//! `o`-involution, translations and the module action `τ_W`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Voa, VModule};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ZParam};
use crate::series::ratfn::{Dir, RationalFn};
use crate::vector::{BasisId, SparseVec};

/// Finite sum of basis vectors of `V` tensored with rational functions of
/// `t`. The expansion direction is carried separately by callers.
#[derive(Clone, PartialEq)]
pub struct LoopElement<S: Scalar> {
    terms: Vec<(BasisId, RationalFn<S>)>,
}

impl<S: Scalar> Default for LoopElement<S> {
    fn default() -> Self {
        LoopElement { terms: Vec::new() }
    }
}

impl<S: Scalar> LoopElement<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(v: BasisId, f: RationalFn<S>) -> Self {
        let mut e = Self::new();
        e.push(v, f).expect("single term");
        e
    }

    /// `v ⊗ t^n`.
    pub fn mode(v: BasisId, n: i64) -> Self {
        Self::single(v, RationalFn::monomial(n, S::one()))
    }

    pub fn terms(&self) -> &[(BasisId, RationalFn<S>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, v: BasisId, f: RationalFn<S>) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        match self.terms.binary_search_by_key(&v, |t| t.0) {
            Ok(i) => {
                let g = self.terms[i].1.add(&f)?;
                if g.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = g;
                }
            }
            Err(i) => self.terms.insert(i, (v, f)),
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut r = self.clone();
        for (v, f) in &o.terms {
            r.push(*v, f.clone())?;
        }
        Ok(r)
    }

    pub fn scale(&self, c: &S) -> Self {
        let terms = self.terms.iter().map(|(v, f)| (*v, f.scale(c))).filter(|t| !t.1.is_zero()).collect();
        LoopElement { terms }
    }

    /// Applies a map to every rational function.
    pub fn map_fn(&self, g: impl Fn(&RationalFn<S>) -> Result<RationalFn<S>>) -> Result<Self> {
        let mut r = Self::new();
        for (v, f) in &self.terms {
            r.push(*v, g(f)?)?;
        }
        Ok(r)
    }

    /// `v ⊗ f` for a rational-coefficient vector `v`.
    pub fn from_vector(v: &SparseVec<crate::Rational>, f: &RationalFn<S>) -> Result<Self> {
        let mut r = Self::new();
        for (b, c) in v.entries() {
            r.push(*b, f.scale(&S::from_rational(c)))?;
        }
        Ok(r)
    }

    /// Coefficient of `t^k` in the `dir`-expansion, as a vector of `V`.
    pub fn expand_at(&self, dir: Dir, k: i64) -> Result<SparseVec<S>> {
        let mut out = SparseVec::new();
        for (v, f) in &self.terms {
            let c = f.iota_coeff(dir, k)?;
            if !c.is_zero() {
                out.add_scaled(&SparseVec::basis(*v), &c);
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Debug for LoopElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(v, g)| format!("#{v}⊗{g}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// `(v ⊗ f(t))° = Σ_m (-1)^h (L(1)^m v / m!) ⊗ t^{-m-2+2h} f(t^{-1})`.
pub fn o_involution<S: Scalar>(v_alg: &Voa, xi: &LoopElement<S>) -> Result<LoopElement<S>> {
    let mut out = LoopElement::new();
    for (v, f) in xi.terms() {
        let h = v_alg.weight(*v);
        let g = f.invert_t()?;
        let g = if h.rem_euclid(2) == 1 { g.scale(&S::one().rneg()) } else { g };
        for (m, u) in v_alg.l1_powers(*v)?.into_iter().enumerate() {
            let piece = g.shift_t(-(m as i64) - 2 + 2 * h);
            out = out.add(&LoopElement::from_vector(&u, &piece)?)?;
        }
    }
    Ok(out)
}

/// Substitution `t -> t + a` on every term.
pub fn translate<S: Scalar>(xi: &LoopElement<S>, a: &S) -> Result<LoopElement<S>> {
    xi.map_fn(|f| f.translate(a))
}

/// Which translated map to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Translation {
    /// `T⁺_{-z} = ι₊ ∘ T_{-z} ∘ ι₊⁻¹`.
    Plus,
    /// `T⁻_{-z} = ι₋ ∘ T_{-z} ∘ ι₊⁻¹`.
    Minus,
    /// `T°_{-z} = o ∘ T⁻_{-z}`.
    O,
}

/// Checks that every denominator is a power of `a + t`.
pub fn check_localization<S: Scalar>(xi: &LoopElement<S>, a: &S, what: &str) -> Result<()> {
    for (_, f) in xi.terms() {
        for fac in f.factors() {
            if !(fac.a == *a && fac.b.is_one()) {
                return Err(Error::WrongLocalization(format!("(({}) + ({})t) in {what}", fac.a, fac.b)));
            }
        }
    }
    Ok(())
}

/// Applies `T^±_{-z}` or `T°_{-z}` to an element of `V ⊗ ι₊C[t,t⁻¹,(z+t)⁻¹]`.
/// Returns the resulting rational representative with the direction in
/// which it is to be expanded.
pub fn translate_pm<S: Scalar>(
    v_alg: &Voa,
    xi: &LoopElement<S>,
    which: Translation,
    zp: &ZParam<S>,
) -> Result<(LoopElement<S>, Dir)> {
    check_localization(xi, zp.z(), "translate_pm")?;
    let moved = translate(xi, &zp.z().rneg())?;
    Ok(match which {
        Translation::Plus => (moved, Dir::Plus),
        Translation::Minus => (moved, Dir::Minus),
        // o carries ι₋-expansions in t to ι₊-expansions
        Translation::O => (o_involution(v_alg, &moved)?, Dir::Plus),
    })
}

/// `τ_W(ξ) w = Σ_n a_n v_n w`, where `a_n` are the `dir`-expansion
/// coefficients of `f` in `v ⊗ f`.
///
/// The sum over `n` is cut by the grading: `v_n w = 0` below the module's
/// lowest weight, and above it the expansion or `weight_cap` must bound the
/// range, otherwise [`Error::TruncationOverflow`] is raised.
pub fn tau_w<S: Scalar>(
    v_alg: &Voa,
    w_mod: &dyn VModule,
    xi: &LoopElement<S>,
    dir: Dir,
    w: BasisId,
    weight_cap: Option<i64>,
) -> Result<SparseVec<S>> {
    let wt = w_mod.weight(w);
    let mut out = SparseVec::new();
    for (v, f) in xi.terms() {
        let h = v_alg.weight(*v);
        let Some((lo, hi)) = f.expansion_range(dir) else { continue };
        let n_hi = h + wt - 1 - w_mod.min_weight();
        let n_hi = hi.map_or(n_hi, |x| x.min(n_hi));
        let top = match (weight_cap, w_mod.max_weight()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let n_lo = match (lo, top) {
            (Some(l), Some(t)) => l.max(h + wt - 1 - t),
            (Some(l), None) => l,
            (None, Some(t)) => h + wt - 1 - t,
            (None, None) => {
                return Err(Error::TruncationOverflow {
                    needed: i64::MAX,
                    cutoff: w_mod.cutoff(),
                    context: format!("τ_W of {f} needs unboundedly many modes"),
                })
            }
        };
        let ex = f.expansion(dir)?;
        for n in n_lo..=n_hi {
            let a = ex.coeff(n)?;
            if a.is_zero() {
                continue;
            }
            let r = w_mod.act(*v, n, w)?;
            for (b, c) in r.entries() {
                out.add_scaled(&SparseVec::basis(*b), &a.rmul(&S::from_rational(c)));
            }
        }
    }
    Ok(out)
}
