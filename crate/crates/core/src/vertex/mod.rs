//! Graded spaces, vertex algebras and their modules, opposite vertex
//! operators, contragredients and the loop-space calculus.
//!
//! Structure constants are rational. Modes are computed on demand per basis
//! vector, so "truncation" means: a result whose weight lies above a
//! module's stored range raises [`Error::TruncationOverflow`], while lazily
//! generated modules (the Fock space) never overflow.

pub mod axioms;
pub mod contragredient;
pub mod loops;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::inv_factorial;
use crate::vector::{BasisId, SparseVec};
use crate::Rational;

pub use contragredient::Contragredient;
pub use loops::{o_involution, tau_w, translate_pm, LoopElement, Translation};

/// Group degree in a cyclic group `Z/modulus` (modulus 1: trivial grading,
/// modulus 0: the integers).
pub type Deg = i64;

pub type RVec = SparseVec<Rational>;

/// Basis-indexed doubly graded space with finite-dimensional weight spaces.
pub trait GradedSpace: Send + Sync {
    fn label(&self) -> String;
    fn weight(&self, b: BasisId) -> i64;
    fn degree(&self, b: BasisId) -> Deg;
    fn degree_modulus(&self) -> i64;
    fn basis_name(&self, b: BasisId) -> String;
    fn find(&self, name: &str) -> Option<BasisId>;
    /// Basis of the weight-`w` subspace.
    fn basis_at(&self, w: i64) -> Vec<BasisId>;
    fn min_weight(&self) -> i64;
    /// Largest weight carrying a nonzero subspace, when bounded.
    fn max_weight(&self) -> Option<i64>;
    /// Weight up to which the space is considered represented.
    fn cutoff(&self) -> i64;

    fn basis_upto(&self, w: i64) -> Vec<BasisId> {
        let top = self.max_weight().map_or(w, |m| m.min(w));
        (self.min_weight()..=top).flat_map(|k| self.basis_at(k)).collect()
    }

    fn reduce_degree(&self, d: Deg) -> Deg {
        match self.degree_modulus() {
            0 => d,
            m => d.rem_euclid(m),
        }
    }
}

/// Module for a vertex algebra whose basis is indexed by `BasisId`.
pub trait VModule: GradedSpace {
    /// The mode `v_n w` for basis vectors `v` of the algebra and `w` of the
    /// module.
    fn act(&self, v: BasisId, n: i64, w: BasisId) -> Result<Arc<RVec>>;
    /// `L(j) w` for `j` in `{-1, 0, 1}`.
    fn virasoro(&self, j: i64, w: BasisId) -> Result<Arc<RVec>>;

    /// Weight of `v_n w` for homogeneous inputs.
    fn mode_weight(&self, wt_v: i64, n: i64, w: BasisId) -> i64 {
        wt_v + self.weight(w) - n - 1
    }
}

/// A vertex algebra: its adjoint module, vacuum and an optional central
/// charge. The vacuum need not be a basis vector.
pub struct Voa {
    pub name: String,
    pub adjoint: Arc<dyn VModule>,
    pub vacuum: RVec,
    pub central_charge: Option<Rational>,
}

impl Voa {
    pub fn weight(&self, v: BasisId) -> i64 {
        self.adjoint.weight(v)
    }

    /// `L(1)^m v / m!` for all `m` with a nonzero result.
    pub fn l1_powers(&self, v: BasisId) -> Result<Vec<RVec>> {
        let mut out = vec![RVec::basis(v)];
        let mut cur = RVec::basis(v);
        for m in 1.. {
            cur = apply_virasoro(self.adjoint.as_ref(), 1, &cur)?;
            if cur.is_zero() {
                break;
            }
            out.push(cur.scale(&inv_factorial(m)));
            if m > 64 {
                return Err(Error::UnsupportedInstance("L(1) is not nilpotent".into()));
            }
        }
        Ok(out)
    }

    /// Spanning set of the algebra up to weight `w`.
    pub fn spanning(&self, w: i64) -> Vec<BasisId> {
        self.adjoint.basis_upto(w)
    }
}

/// Applies `L(j)` to a vector.
pub fn apply_virasoro(m: &dyn VModule, j: i64, x: &RVec) -> Result<RVec> {
    let mut out = RVec::new();
    for (b, c) in x.entries() {
        out.add_scaled(&*m.virasoro(j, *b)?, c);
    }
    Ok(out)
}

/// Applies `u_n` for a vector `u` of the algebra to a vector of the module.
pub fn apply_mode(m: &dyn VModule, u: &RVec, n: i64, x: &RVec) -> Result<RVec> {
    let mut out = RVec::new();
    for (a, ca) in u.entries() {
        for (b, cb) in x.entries() {
            let r = m.act(*a, n, *b)?;
            out.add_scaled(&r, &(ca * cb));
        }
    }
    Ok(out)
}

/// `e^{xL(1)}(-x^{-2})^{L(0)} v` for homogeneous `v`, as `(x-exponent, vector)`
/// pairs.
pub fn conjugate_vo(v_alg: &Voa, v: BasisId) -> Result<Vec<(i64, RVec)>> {
    let h = v_alg.weight(v);
    let sign = if h.rem_euclid(2) == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
    Ok(v_alg
        .l1_powers(v)?
        .into_iter()
        .enumerate()
        .map(|(m, u)| (m as i64 - 2 * h, u.scale(&sign)))
        .collect())
}

/// The component `v°_n w = (-1)^h Σ_m (1/m!) (L(1)^m v)_{-n-m-2+2h} w`.
pub fn opposite_mode(v_alg: &Voa, w_mod: &dyn VModule, v: BasisId, n: i64, w: BasisId) -> Result<RVec> {
    let h = v_alg.weight(v);
    let mut out = RVec::new();
    for (m, u) in v_alg.l1_powers(v)?.into_iter().enumerate() {
        let k = -n - m as i64 - 2 + 2 * h;
        out.add_assign(&apply_mode(w_mod, &u, k, &RVec::basis(w))?);
    }
    if h.rem_euclid(2) == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// `Y°(v, x) w` restricted to components of weight at most `max_weight`,
/// as `(x-exponent, vector)` pairs. Component `v°_n` sits at `x^{-n-1}` and
/// has weight `wt w + n + 1 - wt v`.
pub fn y_opposite(
    v_alg: &Voa,
    w_mod: &dyn VModule,
    v: BasisId,
    w: BasisId,
    max_weight: i64,
) -> Result<Vec<(i64, RVec)>> {
    let h = v_alg.weight(v);
    let wt = w_mod.weight(w);
    let lo = w_mod.min_weight();
    let mut out = Vec::new();
    // weight of v°_n w is wt + n + 1 - h
    for n in (lo - wt - 1 + h)..=(max_weight - wt - 1 + h) {
        let r = opposite_mode(v_alg, w_mod, v, n, w)?;
        if !r.is_zero() {
            out.push((-n - 1, r));
        }
    }
    Ok(out)
}

/// `Y(v, x) w` restricted to components of weight at most `max_weight`.
pub fn y_series(
    v_alg: &Voa,
    w_mod: &dyn VModule,
    v: BasisId,
    w: BasisId,
    max_weight: i64,
) -> Result<Vec<(i64, RVec)>> {
    let h = v_alg.weight(v);
    let wt = w_mod.weight(w);
    let lo = w_mod.min_weight();
    let mut out = Vec::new();
    // weight of v_n w is h + wt - n - 1
    for n in (h + wt - 1 - max_weight)..=(h + wt - 1 - lo) {
        let r = w_mod.act(v, n, w)?;
        if !r.is_zero() {
            out.push((-n - 1, (*r).clone()));
        }
    }
    Ok(out)
}

/// Error helper for table-backed modules.
pub fn overflow(needed: i64, cutoff: i64, context: impl Into<String>) -> Error {
    Error::TruncationOverflow { needed, cutoff, context: context.into() }
}
