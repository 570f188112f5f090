//! Actions on the dual space `(W₁ ⊗ W₂)*`.
//!
//! Every operator `A` on functionals is implemented through its adjoint
//! `σ_A` on `W₁ ⊗ W₂`, so that `(Aλ)(w) = λ(σ_A w)` and a word
//! `A₁A₂⋯Aₖ λ` evaluates as `λ(σ_{Aₖ}⋯σ_{A₁} w)`. Identities between
//! operators are then checked as identities of finite tensors, which
//! settles them for every functional at once.

pub mod closure;
pub mod compat;
pub mod functional;
pub mod properties;
pub mod report;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

pub use functional::{DualFunctional, LambdaSpec};

use crate::error::{Error, Result};
use crate::scalar::{binom, Scalar, ZParam};
use crate::series::ratfn::Dir;
use crate::vector::{BasisId, Coeff, SparseVec};
use crate::vertex::loops::{check_localization, translate};
use crate::vertex::{apply_mode, apply_virasoro, o_involution, opposite_mode, tau_w, translate_pm};
use crate::vertex::{Deg, GradedSpace, LoopElement, RVec, Translation, VModule, Voa};

/// Which tensor product: `P(z)` or `Q(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    P,
    Q,
}

impl Flavor {
    pub fn parse(s: &str) -> Result<Flavor> {
        match s {
            "P" | "p" => Ok(Flavor::P),
            "Q" | "q" => Ok(Flavor::Q),
            _ => Err(Error::Config(format!("unknown flavor {s} (expected P or Q)"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Flavor::P { "P" } else { "Q" })
    }
}

/// Finite element of `W₁ ⊗ W₂` in the product basis.
#[derive(Clone, PartialEq, Default)]
pub struct TensorVec<S> {
    terms: BTreeMap<(BasisId, BasisId), S>,
}

impl<S: Scalar> TensorVec<S> {
    pub fn new() -> Self {
        TensorVec { terms: BTreeMap::new() }
    }

    pub fn pair(a: BasisId, b: BasisId) -> Self {
        let mut t = Self::new();
        t.add_term(a, b, &S::one());
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BasisId, BasisId), &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, a: BasisId, b: BasisId) -> S {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, a: BasisId, b: BasisId, c: &S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(S::zero);
        e.add_assign_ref(c);
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &S) {
        if c.is_zero() {
            return;
        }
        for ((a, b), x) in &o.terms {
            self.add_term(*a, *b, &x.rmul(c));
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::new();
        r.add_scaled(self, c);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &S::one().rneg());
        r
    }

    /// `c · x ⊗ y` for rational vectors.
    pub fn add_product(&mut self, x: &RVec, y: &RVec, c: &S) {
        for (a, ca) in x.entries() {
            for (b, cb) in y.entries() {
                self.add_term(*a, *b, &c.rmul(&S::from_rational(&(ca * cb))));
            }
        }
    }

    /// `x ⊗ b` and `a ⊗ y` for scalar-valued vectors.
    pub fn add_left(&mut self, x: &SparseVec<S>, b: BasisId, c: &S) {
        for (a, ca) in x.entries() {
            self.add_term(*a, b, &ca.rmul(c));
        }
    }

    pub fn add_right(&mut self, a: BasisId, y: &SparseVec<S>, c: &S) {
        for (b, cb) in y.entries() {
            self.add_term(a, *b, &cb.rmul(c));
        }
    }

    pub fn render(&self, ctx: &PairCtx<S>) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| format!("({c})·{}⊗{}", ctx.w1.basis_name(*a), ctx.w2.basis_name(*b)))
            .collect();
        parts.join(" + ")
    }
}

impl<S: Scalar> fmt::Debug for TensorVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|((a, b), c)| format!("({c})#{a}⊗#{b}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl<S: Scalar> Coeff<S> for TensorVec<S> {
    fn null() -> Self {
        TensorVec::new()
    }
    fn is_null(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &S) {
        TensorVec::add_scaled(self, other, c);
    }
    fn scaled(&self, c: &S) -> Self {
        self.scale(c)
    }
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

/// An operator on `(W₁ ⊗ W₂)*`.
#[derive(Clone, Debug)]
pub enum DualOp<S: Scalar> {
    /// Coefficient of `x^p` in `Y'(v, x)`.
    Y { flavor: Flavor, v: RVec, p: i64 },
    /// `L'(j)` for `j ∈ {-1, 0, 1}`.
    L { flavor: Flavor, j: i64 },
    /// `τ(ξ)` for a loop element with the flavor's allowed denominators.
    Tau { flavor: Flavor, xi: LoopElement<S> },
}

impl<S: Scalar> DualOp<S> {
    pub fn y(flavor: Flavor, v: BasisId, p: i64) -> Self {
        DualOp::Y { flavor, v: RVec::basis(v), p }
    }

    pub fn l(flavor: Flavor, j: i64) -> Self {
        DualOp::L { flavor, j }
    }

    /// `τ(v ⊗ t^m)`, which equals the coefficient of `x^{-m-1}` in `Y'(v, x)`.
    pub fn tau_mode(flavor: Flavor, v: BasisId, m: i64) -> Self {
        DualOp::Tau { flavor, xi: LoopElement::mode(v, m) }
    }

    pub fn flavor(&self) -> Flavor {
        match self {
            DualOp::Y { flavor, .. } | DualOp::L { flavor, .. } | DualOp::Tau { flavor, .. } => *flavor,
        }
    }

    pub fn describe(&self, voa: &Voa) -> String {
        match self {
            DualOp::Y { flavor, v, p } => format!("Y'_{flavor}({})[x^{p}]", render_vec(v, voa.adjoint.as_ref())),
            DualOp::L { flavor, j } => format!("L'_{flavor}({j})"),
            DualOp::Tau { flavor, xi } => {
                let parts: Vec<String> =
                    xi.terms().iter().map(|(v, f)| format!("{}⊗{f}", voa.adjoint.basis_name(*v))).collect();
                format!("τ_{flavor}({})", parts.join(" + "))
            }
        }
    }

    /// Change of the declared depth under this operator, when known.
    pub fn depth_shift(&self, voa: &Voa) -> Option<i64> {
        match self {
            DualOp::Y { v, p, .. } => v.entries().iter().map(|(b, _)| voa.weight(*b) + p).max(),
            DualOp::L { j, .. } => Some(-j),
            DualOp::Tau { xi, .. } => {
                let mut best: Option<i64> = None;
                for (v, f) in xi.terms() {
                    let (lo, _) = f.expansion_range(Dir::Plus)?;
                    let s = voa.weight(*v) - lo? - 1;
                    best = Some(best.map_or(s, |b: i64| b.max(s)));
                }
                Some(best.unwrap_or(0))
            }
        }
    }
}

fn render_vec(v: &RVec, space: &dyn GradedSpace) -> String {
    let parts: Vec<String> = v
        .entries()
        .iter()
        .map(|(b, c)| if c == &crate::Rational::from_integer(1.into()) { space.basis_name(*b) } else { format!("{c}·{}", space.basis_name(*b)) })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Y(Flavor, BasisId, i64),
    L(Flavor, i64),
}

type Cache<S> = Mutex<HashMap<(Key, BasisId, BasisId), Arc<TensorVec<S>>>>;

/// The data fixing `(W₁ ⊗ W₂)*`: the algebra, the two modules and `z`.
pub struct PairCtx<S: Scalar> {
    pub voa: Arc<Voa>,
    pub w1: Arc<dyn VModule>,
    pub w2: Arc<dyn VModule>,
    pub zp: ZParam<S>,
    cache: Cache<S>,
}

impl<S: Scalar> PairCtx<S> {
    pub fn new(voa: Arc<Voa>, w1: Arc<dyn VModule>, w2: Arc<dyn VModule>, z: S) -> Result<Arc<Self>> {
        Ok(Arc::new(PairCtx { voa, w1, w2, zp: ZParam::new(z)?, cache: Mutex::new(HashMap::new()) }))
    }

    pub fn z(&self) -> &S {
        self.zp.z()
    }

    pub fn describe(&self) -> String {
        format!("({} ⊗ {})* over {}", self.w1.label(), self.w2.label(), self.voa.name)
    }

    /// Group degree of `a ⊗ b`.
    pub fn pair_degree(&self, a: BasisId, b: BasisId) -> Deg {
        self.w1.reduce_degree(self.w1.degree(a) + self.w2.degree(b))
    }

    /// Basis pairs of total weight at most `n`, in a fixed order.
    pub fn pairs_upto(&self, n: i64) -> Vec<(BasisId, BasisId)> {
        let lo2 = self.w2.min_weight();
        let lo1 = self.w1.min_weight();
        let mut out = Vec::new();
        for a in self.w1.basis_upto(n - lo2) {
            let wa = self.w1.weight(a);
            for b in self.w2.basis_upto(n - wa) {
                if wa + self.w2.weight(b) <= n && wa >= lo1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn s(r: &crate::Rational) -> S {
        S::from_rational(r)
    }

    fn cached(&self, key: Key, a: BasisId, b: BasisId, f: impl FnOnce() -> Result<TensorVec<S>>) -> Result<Arc<TensorVec<S>>> {
        if let Some(t) = self.cache.lock().expect("cache").get(&(key, a, b)) {
            return Ok(t.clone());
        }
        let t = Arc::new(f()?);
        self.cache.lock().expect("cache").insert((key, a, b), t.clone());
        Ok(t)
    }

    /// Adjoint of `Y'_P(v)` at `x^p` on `a ⊗ b`:
    /// `a ⊗ v°_{-p-1} b + Σ_{m,k} (-1)^{h+k} C(N,k) z^{-N-1} (u_m)_k a ⊗ b`
    /// with `N = k + m - 2h - p` and `u_m = L(1)^m v / m!`.
    fn sigma_yp(&self, v: BasisId, p: i64, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        let h = self.voa.weight(v);
        let mut out = TensorVec::new();
        let right = opposite_mode(&self.voa, self.w2.as_ref(), v, -p - 1, b)?;
        out.add_product(&RVec::basis(a), &right, &S::one());
        let wa = self.w1.weight(a);
        for (m, u) in self.voa.l1_powers(v)?.into_iter().enumerate() {
            let m = m as i64;
            let kmax = h - m + wa - 1 - self.w1.min_weight();
            for k in 0..=kmax {
                let n = k + m - 2 * h - p;
                let c = binom::<S>(n, k as u64);
                if c.is_zero() {
                    continue;
                }
                let sign = if (h + k).rem_euclid(2) == 0 { S::one() } else { S::one().rneg() };
                let coef = sign.rmul(&c).rmul(&self.zp.pow(-n - 1));
                let left = apply_mode(self.w1.as_ref(), &u, k, &RVec::basis(a))?;
                out.add_product(&left, &RVec::basis(b), &coef);
            }
        }
        Ok(out)
    }

    /// Adjoint of `Y'_Q(v)` at `x^p` on `a ⊗ b`:
    /// `Σ_j C(p+j,j) z^j v°_{-p-1-j} a ⊗ b + (-1)^p Σ_k C(-p-1,k)(-1)^k z^{-p-1-k} a ⊗ v_k b`.
    fn sigma_yq(&self, v: BasisId, p: i64, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        let h = self.voa.weight(v);
        let mut out = TensorVec::new();
        let wa = self.w1.weight(a);
        let jmax = -p - self.w1.min_weight() + wa - h;
        for j in 0..=jmax {
            let c = binom::<S>(p + j, j as u64);
            if c.is_zero() {
                continue;
            }
            let left = opposite_mode(&self.voa, self.w1.as_ref(), v, -p - 1 - j, a)?;
            out.add_product(&left, &RVec::basis(b), &c.rmul(&self.zp.pow(j)));
        }
        let wb = self.w2.weight(b);
        let kmax = h + wb - 1 - self.w2.min_weight();
        let outer = if p.rem_euclid(2) == 0 { S::one() } else { S::one().rneg() };
        for k in 0..=kmax {
            let c = binom::<S>(-p - 1, k as u64);
            if c.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { outer.clone() } else { outer.rneg() };
            let right = self.w2.act(v, k, b)?.as_ref().clone();
            out.add_product(&RVec::basis(a), &right, &sign.rmul(&c).rmul(&self.zp.pow(-p - 1 - k)));
        }
        Ok(out)
    }

    /// Adjoint of `L'_P(j)`: `a ⊗ L(-j) b + Σ_i C(1-j,i) z^i L(-j-i) a ⊗ b`.
    fn sigma_lp(&self, j: i64, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        check_j(j)?;
        let mut out = TensorVec::new();
        out.add_product(&RVec::basis(a), &*self.w2.virasoro(-j, b)?, &S::one());
        for i in 0..=(1 - j) {
            let c = binom::<S>(1 - j, i as u64).rmul(&self.zp.pow(i));
            out.add_product(&*self.w1.virasoro(-j - i, a)?, &RVec::basis(b), &c);
        }
        Ok(out)
    }

    /// Adjoint of `L'_Q(j)`:
    /// `Σ_i C(j+1,i)(-z)^i [L(i-j) a ⊗ b - a ⊗ L(j-i) b]`.
    fn sigma_lq(&self, j: i64, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        check_j(j)?;
        let mut out = TensorVec::new();
        for i in 0..=(j + 1) {
            let c = binom::<S>(j + 1, i as u64).rmul(&self.zp.pow(i));
            let c = if i % 2 == 0 { c } else { c.rneg() };
            out.add_product(&*self.w1.virasoro(i - j, a)?, &RVec::basis(b), &c);
            out.add_product(&RVec::basis(a), &*self.w2.virasoro(j - i, b)?, &c.rneg());
        }
        Ok(out)
    }

    /// `σ_P(ξ)(a ⊗ b) = τ_{W₁}((ι₊∘T_z∘ι₋⁻¹∘o)ξ) a ⊗ b + a ⊗ τ_{W₂}((ι₊∘ι₋⁻¹∘o)ξ) b`.
    pub fn sigma_tau_p(&self, xi: &LoopElement<S>, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        let zinv = self.zp.pow(-1);
        check_localization(xi, &zinv.rneg(), "τ_P")?;
        let o = o_involution(&self.voa, xi)?;
        let shifted = translate(&o, self.z())?;
        let mut out = TensorVec::new();
        out.add_left(&tau_w(&self.voa, self.w1.as_ref(), &shifted, Dir::Plus, a, None)?, b, &S::one());
        out.add_right(a, &tau_w(&self.voa, self.w2.as_ref(), &o, Dir::Plus, b, None)?, &S::one());
        Ok(out)
    }

    /// `σ_Q(ξ)(a ⊗ b) = τ_{W₁}(T°_{-z} ξ) a ⊗ b - a ⊗ τ_{W₂}(T⁺_{-z} ξ) b`.
    pub fn sigma_tau_q(&self, xi: &LoopElement<S>, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        let (left, ld) = translate_pm(&self.voa, xi, Translation::O, &self.zp)?;
        let (right, rd) = translate_pm(&self.voa, xi, Translation::Plus, &self.zp)?;
        let mut out = TensorVec::new();
        out.add_left(&tau_w(&self.voa, self.w1.as_ref(), &left, ld, a, None)?, b, &S::one());
        out.add_right(a, &tau_w(&self.voa, self.w2.as_ref(), &right, rd, b, None)?, &S::one().rneg());
        Ok(out)
    }

    /// The adjoint `σ_A` on a basis pair.
    pub fn sigma_pair(&self, op: &DualOp<S>, a: BasisId, b: BasisId) -> Result<TensorVec<S>> {
        match op {
            DualOp::Y { flavor, v, p } => {
                let mut out = TensorVec::new();
                for (u, c) in v.entries() {
                    let t = self.cached(Key::Y(*flavor, *u, *p), a, b, || match flavor {
                        Flavor::P => self.sigma_yp(*u, *p, a, b),
                        Flavor::Q => self.sigma_yq(*u, *p, a, b),
                    })?;
                    out.add_scaled(&t, &Self::s(c));
                }
                Ok(out)
            }
            DualOp::L { flavor, j } => {
                let t = self.cached(Key::L(*flavor, *j), a, b, || match flavor {
                    Flavor::P => self.sigma_lp(*j, a, b),
                    Flavor::Q => self.sigma_lq(*j, a, b),
                })?;
                Ok((*t).clone())
            }
            DualOp::Tau { flavor: Flavor::P, xi } => self.sigma_tau_p(xi, a, b),
            DualOp::Tau { flavor: Flavor::Q, xi } => self.sigma_tau_q(xi, a, b),
        }
    }

    /// The adjoint `σ_A` on a tensor.
    pub fn sigma(&self, op: &DualOp<S>, t: &TensorVec<S>) -> Result<TensorVec<S>> {
        let mut out = TensorVec::new();
        for ((a, b), c) in t.terms() {
            out.add_scaled(&self.sigma_pair(op, *a, *b)?, c);
        }
        Ok(out)
    }

    /// `σ` of the word `A₁A₂⋯Aₖ` (listed outermost first) on `t`.
    pub fn sigma_word(&self, ops: &[DualOp<S>], t: &TensorVec<S>) -> Result<TensorVec<S>> {
        let mut cur = t.clone();
        for op in ops {
            cur = self.sigma(op, &cur)?;
        }
        Ok(cur)
    }

    /// `Δ_P(v ⊗ t^n) = (v ⊗ ι₊(z+t)^n) ⊗ 𝟙 + 𝟙 ⊗ (v ⊗ t^n)`, returned as the
    /// pair of loop elements acting on the first and second factor.
    pub fn delta_p(&self, v: BasisId, n: i64) -> Result<(LoopElement<S>, LoopElement<S>)> {
        let f = crate::series::ratfn::RationalFn::factor(self.z().clone(), S::one(), -n)?;
        Ok((LoopElement::single(v, f), LoopElement::mode(v, n)))
    }

    /// `L(j)` of a vector in `W₁` or `W₂`.
    pub fn virasoro_on(&self, first: bool, j: i64, x: &RVec) -> Result<RVec> {
        apply_virasoro(if first { self.w1.as_ref() } else { self.w2.as_ref() }, j, x)
    }
}

fn check_j(j: i64) -> Result<()> {
    if (-1..=1).contains(&j) {
        Ok(())
    } else {
        Err(Error::Config(format!("L'(j) is defined for j in {{-1, 0, 1}}, got {j}")))
    }
}
