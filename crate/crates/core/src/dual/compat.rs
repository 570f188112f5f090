//! The `P(z)`- and `Q(z)`-compatibility conditions, checked on a window.
//!
//! Part (a) is checked as vanishing of `Y′(v)_p λ` for `p` between the
//! window's lower edge and the truncation point `-D - wt v` given by the
//! declared depth `D`. Part (b) compares the coefficient of `x₀^a x₁^b` on
//! both sides; the right-hand sums are cut at the same truncation point.

use super::report::{PropertyReport, Witness};
use super::{DualFunctional, DualOp, Flavor};
use crate::error::Result;
use crate::scalar::{binom, Scalar};
use crate::series::ratfn::RationalFn;
use crate::vector::BasisId;
use crate::vertex::LoopElement;

/// Where the checker looks.
#[derive(Clone, Debug)]
pub struct CompatWindow {
    /// Spanning vectors of `V`.
    pub gens: Vec<BasisId>,
    /// Basis pairs of `W₁ ⊗ W₂` up to this total weight are tested.
    pub pair_bound: i64,
    /// Exponents range over `[-radius, radius]`.
    pub radius: i64,
}

impl CompatWindow {
    pub fn describe(&self) -> String {
        format!("x0,x1:[{},{}] pairs:wt<={}", -self.radius, self.radius, self.pair_bound)
    }
}

/// `Y′(v)_p λ` on `a ⊗ b`.
pub fn y_coeff<S: Scalar>(flavor: Flavor, v: BasisId, p: i64, lambda: &DualFunctional<S>, a: BasisId, b: BasisId) -> Result<S> {
    let ctx = lambda.ctx();
    lambda.eval_tensor(&ctx.sigma_pair(&DualOp::y(flavor, v, p), a, b)?)
}

/// Coefficients of `(Y′(v, x)λ)(a ⊗ b)` for `p` in `[lo, hi]`.
pub fn y_prime<S: Scalar>(
    flavor: Flavor,
    v: BasisId,
    lambda: &DualFunctional<S>,
    a: BasisId,
    b: BasisId,
    lo: i64,
    hi: i64,
) -> Result<Vec<(i64, S)>> {
    let mut out = Vec::new();
    for p in lo..=hi {
        let c = y_coeff(flavor, v, p, lambda, a, b)?;
        if !c.is_zero() {
            out.push((p, c));
        }
    }
    Ok(out)
}

/// Lowest `x`-exponent `Y′(v, x)λ` may carry.
pub fn truncation_point<S: Scalar>(lambda: &DualFunctional<S>, v: BasisId) -> i64 {
    -lambda.depth() - lambda.ctx().voa.weight(v)
}

/// The left-hand loop element of part (b) at `x₀^{a₀} x₁^{j}`.
pub fn compat_loop<S: Scalar>(flavor: Flavor, z: &S, v: BasisId, a0: i64, j: i64) -> Result<LoopElement<S>> {
    let f = match flavor {
        // x₀^{-1}δ((x₁^{-1} - z)/x₀) Y_t(v, x₁) at x₀^{-n-1} x₁^j: t^{-n-1-j}(1 - zt)^n
        Flavor::P => {
            let n = -a0 - 1;
            RationalFn::factor(S::one(), z.rneg(), -n)?.mul(&RationalFn::monomial(-n - 1 - j, S::one()))?
        }
        // z^{-1}δ((x₁ - x₀)/z) Y_t(v, x₀) at x₀^a x₁^b: t^{-a-1}(z + t)^{-b-1}
        Flavor::Q => RationalFn::factor(z.clone(), S::one(), j + 1)?.mul(&RationalFn::monomial(-a0 - 1, S::one()))?,
    };
    Ok(LoopElement::single(v, f))
}

/// Right-hand side of part (b) at `x₀^{a₀} x₁^{j}`.
fn rhs<S: Scalar>(flavor: Flavor, v: BasisId, a0: i64, j: i64, lambda: &DualFunctional<S>, a: BasisId, b: BasisId) -> Result<S> {
    let ctx = lambda.ctx();
    let q_low = truncation_point(lambda, v);
    let mut acc = S::zero();
    match flavor {
        Flavor::P => {
            let n = -a0 - 1;
            for k in 0..=(j + n - q_low) {
                let c = binom::<S>(n, k as u64);
                if c.is_zero() {
                    continue;
                }
                let zk = ctx.zp.pow(k);
                let zk = if k % 2 == 0 { zk } else { zk.rneg() };
                acc.add_mul(&c.rmul(&zk), &y_coeff(flavor, v, j + n - k, lambda, a, b)?);
            }
        }
        Flavor::Q => {
            for k in 0..=(a0 - q_low) {
                let c = binom::<S>(j + k, k as u64);
                if c.is_zero() {
                    continue;
                }
                let c = if k % 2 == 0 { c } else { c.rneg() };
                acc.add_mul(&c.rmul(&ctx.zp.pow(-j - k - 1)), &y_coeff(flavor, v, a0 - k, lambda, a, b)?);
            }
        }
    }
    Ok(acc)
}

/// Checks both parts of the compatibility condition.
pub fn check_compat<S: Scalar>(flavor: Flavor, lambda: &DualFunctional<S>, win: &CompatWindow) -> PropertyReport {
    let ctx = lambda.ctx().clone();
    let id = format!("{flavor}-COMPAT");
    let mut rep = PropertyReport::new(&id, "compatibility condition", format!("{} λ={}", ctx.describe(), lambda.label()), win.describe());
    rep.generators = win.gens.iter().map(|v| ctx.voa.adjoint.basis_name(*v)).collect();
    let r = win.radius;
    let res = (|| -> Result<()> {
        let pairs = ctx.pairs_upto(win.pair_bound);
        for &v in &win.gens {
            let q_low = truncation_point(lambda, v);
            let vname = ctx.voa.adjoint.basis_name(v);
            for &(a, b) in &pairs {
                let at = || format!("v={vname} w1={} w2={}", ctx.w1.basis_name(a), ctx.w2.basis_name(b));
                // part (a)
                for p in -r..q_low {
                    let c = y_coeff(flavor, v, p, lambda, a, b)?;
                    rep.compare(&[p], || format!("(a) {}", at()), &c, &S::zero());
                }
                // part (b)
                for a0 in -r..=r {
                    for j in -r..=r {
                        let xi = compat_loop(flavor, ctx.z(), v, a0, j)?;
                        let op = DualOp::Tau { flavor, xi };
                        let lhs = lambda.eval_tensor(&ctx.sigma_pair(&op, a, b)?)?;
                        let rhs = rhs(flavor, v, a0, j, lambda, a, b)?;
                        rep.compare(&[a0, j], || format!("(b) {}", at()), &lhs, &rhs);
                    }
                }
            }
        }
        Ok(())
    })();
    match res {
        Ok(()) => rep,
        Err(e) => rep.error(&e),
    }
}

/// Every difference `lhs - rhs` examined by [`check_compat`], in a fixed
/// order. The vector is linear in `λ` and vanishes iff the check passes.
pub fn compat_defects<S: Scalar>(flavor: Flavor, lambda: &DualFunctional<S>, win: &CompatWindow) -> Result<Vec<S>> {
    let ctx = lambda.ctx().clone();
    let r = win.radius;
    let pairs = ctx.pairs_upto(win.pair_bound);
    let mut out = Vec::new();
    for &v in &win.gens {
        let q_low = truncation_point(lambda, v);
        for &(a, b) in &pairs {
            for p in -r..q_low {
                out.push(y_coeff(flavor, v, p, lambda, a, b)?);
            }
            for a0 in -r..=r {
                for j in -r..=r {
                    let op = DualOp::Tau { flavor, xi: compat_loop(flavor, ctx.z(), v, a0, j)? };
                    let lhs = lambda.eval_tensor(&ctx.sigma_pair(&op, a, b)?)?;
                    out.push(lhs.rsub(&rhs(flavor, v, a0, j, lambda, a, b)?));
                }
            }
        }
    }
    Ok(out)
}

pub fn check_compat_p<S: Scalar>(lambda: &DualFunctional<S>, win: &CompatWindow) -> PropertyReport {
    check_compat(Flavor::P, lambda, win)
}

pub fn check_compat_q<S: Scalar>(lambda: &DualFunctional<S>, win: &CompatWindow) -> PropertyReport {
    check_compat(Flavor::Q, lambda, win)
}

/// First witness of a failed report, for use as a precondition witness.
pub fn first_witness(rep: &PropertyReport) -> Witness {
    rep.witnesses.first().cloned().unwrap_or_else(|| Witness {
        exps: Vec::new(),
        at: rep.id.clone(),
        lhs: rep.note.clone().unwrap_or_default(),
        rhs: String::new(),
    })
}
