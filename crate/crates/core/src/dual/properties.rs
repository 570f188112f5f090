//! Table-driven verifier for the action laws of `Y′`, `L′` and `τ` on
//! `(W₁ ⊗ W₂)*`.
//!
//! Laws that hold for every functional are checked as equalities of the
//! adjoint tensors on every basis pair up to the pair bound. The Jacobi
//! identity and stability are checked on the supplied functionals.

use std::sync::Arc;

use super::compat::{check_compat, first_witness, truncation_point, CompatWindow};
use super::report::PropertyReport;
use super::{DualFunctional, DualOp, Flavor, PairCtx, TensorVec};
use crate::error::{Error, Result};
use crate::lemmas;
use crate::scalar::{binom, Scalar};
use crate::vector::BasisId;
use crate::vertex::RVec;

/// Stable property ids with their anchors.
pub const PROPERTIES: &[(&str, &str)] = &[
    ("COMMALG-JACOBI-ALWAYS", "converse remark: \"holds for any element\""),
    ("LEMMA-92", "1-y1zL(0): \"we have used the same notations\""),
    ("LEMMA-94", "Y'Q(z)L(0): \"This formula also holds for the vertex operators\""),
    ("LEMMA-98", "L(0)L(-1)formula: \"be any operators satisfying the commutator relation\""),
    ("LEMMA-CJ9", "comp=>jcb-9: \"For $u, v \\in V$, we have\""),
    ("P-ACOMPAT", "tau-a-comp: \"The action $\\tau_{P(z)}$ is $\\tilde{A}$-compatible\""),
    ("P-COMM", "pz-comm: \"satisfies the commutator formula for vertex operators\""),
    ("P-DERIV", "id-dev: \"It also has the $L(-1)$-derivative property\""),
    ("P-IDENT", "id-dev: \"It also has the $L(-1)$-derivative property\""),
    ("P-JACOBI-ON-COMPAT", "comp=>jcb: \"the Jacobi identity for $Y'_{P(z)}$ holds\""),
    ("P-LYCOMM", "pz-l-y-comm: \"we have the following commutator formulas\""),
    ("P-SL2", "sl-2: \"realize the actions of $L_{-1}$\""),
    ("P-STABLE", "stable: \"is stable under the operators\""),
    ("Q-ACOMPAT", "tau-q-a-comp: \"The action $\\tau_{Q(z)}$ is $\\tilde{A}$-compatible\""),
    ("Q-COMM", "qz-comm: \"satisfies the commutator formula\""),
    ("Q-DERIV", "Q-id: \"and the $L(-1)$-derivative property\""),
    ("Q-IDENT", "Q-id: \"and the $L(-1)$-derivative property\""),
    ("Q-JACOBI-ON-COMPAT", "6.1: \"the Jacobi identity for $Y'_{Q(z)}$ holds\""),
    ("Q-LYCOMM", "qz-l-y-comm: \"we prove only\""),
    ("Q-SL2", "q-sl-2: \"we omit the proof of this proposition\""),
    ("Q-STABLE", "6.2: \"is stable under the operators\""),
];

/// Anchor of a property id.
pub fn anchor(id: &str) -> Result<&'static str> {
    PROPERTIES.iter().find(|(i, _)| *i == id).map(|(_, a)| *a).ok_or_else(|| Error::UnknownProperty(id.into()))
}

/// Everything a property check needs.
#[derive(Clone)]
pub struct PropertyContext<S: Scalar> {
    pub ctx: Arc<PairCtx<S>>,
    /// Functionals for the laws that depend on `λ`.
    pub lambdas: Vec<DualFunctional<S>>,
    /// Spanning vectors of `V` standing in for "all `v ∈ V`".
    pub gens: Vec<BasisId>,
    /// Generators used in the Jacobi identity.
    pub jacobi_gens: Vec<BasisId>,
    /// Basis pairs up to this total weight are tested.
    pub pair_bound: i64,
    /// Exponent window radius.
    pub radius: i64,
    /// Largest declared depth an image functional may reach.
    pub cutoff: i64,
}

impl<S: Scalar> PropertyContext<S> {
    fn describe(&self) -> String {
        self.ctx.describe()
    }

    fn window(&self, dims: usize) -> String {
        format!("[{},{}]^{dims} pairs:wt<={}", -self.radius, self.radius, self.pair_bound)
    }

    fn compat_window(&self) -> CompatWindow {
        CompatWindow { gens: self.gens.clone(), pair_bound: self.pair_bound, radius: self.radius }
    }

    fn name(&self, v: BasisId) -> String {
        self.ctx.voa.adjoint.basis_name(v)
    }

    fn pair_name(&self, a: BasisId, b: BasisId) -> String {
        format!("w1={} w2={}", self.ctx.w1.basis_name(a), self.ctx.w2.basis_name(b))
    }

    fn report(&self, id: &str, dims: usize, gens: &[BasisId]) -> Result<PropertyReport> {
        let mut rep = PropertyReport::new(id, anchor(id)?, self.describe(), self.window(dims));
        rep.generators = gens.iter().map(|v| self.name(*v)).collect();
        Ok(rep)
    }
}

/// Runs one property by id.
pub fn verify_property<S: Scalar>(id: &str, pc: &PropertyContext<S>) -> Result<PropertyReport> {
    let flavor = if id.starts_with("Q-") { Flavor::Q } else { Flavor::P };
    let rep = match id {
        "P-IDENT" | "Q-IDENT" => guarded(pc.report(id, 1, &[])?, |r| check_ident(pc, flavor, r)),
        "P-DERIV" | "Q-DERIV" => guarded(pc.report(id, 1, &pc.gens)?, |r| check_deriv(pc, flavor, r)),
        "P-COMM" | "Q-COMM" => guarded(pc.report(id, 2, &pc.gens)?, |r| check_comm(pc, flavor, r)),
        "P-SL2" | "Q-SL2" => guarded(pc.report(id, 0, &[])?, |r| check_sl2(pc, flavor, r)),
        "P-LYCOMM" | "Q-LYCOMM" => guarded(pc.report(id, 1, &pc.gens)?, |r| check_lycomm(pc, flavor, r)),
        "P-JACOBI-ON-COMPAT" | "Q-JACOBI-ON-COMPAT" => jacobi_on_compat(pc, flavor, id)?,
        "P-STABLE" | "Q-STABLE" => stable(pc, flavor, id)?,
        "P-ACOMPAT" | "Q-ACOMPAT" => guarded(pc.report(id, 1, &pc.gens)?, |r| check_acompat(pc, flavor, r)),
        "COMMALG-JACOBI-ALWAYS" => commalg_jacobi(pc)?,
        "LEMMA-92" => guarded(pc.report(id, 1, &[])?, |r| check_92(pc, r)),
        "LEMMA-94" => guarded(pc.report(id, 2, &pc.gens)?, |r| check_94(pc, r)),
        "LEMMA-98" => guarded(pc.report(id, 2, &[])?, |r| check_98(pc, r)),
        "LEMMA-CJ9" => {
            let r = lemmas::cj9(&pc.ctx.voa, &pc.jacobi_gens, pc.radius, pc.ctx.zp.clone());
            let mut rep = PropertyReport::from_identity(id, anchor(id)?, &pc.ctx.voa.name, &r);
            rep.generators = pc.jacobi_gens.iter().map(|v| pc.name(*v)).collect();
            rep
        }
        _ => return Err(Error::UnknownProperty(id.into())),
    };
    Ok(rep)
}

/// Runs a check body, turning a raised error into an error report.
fn guarded(mut rep: PropertyReport, body: impl FnOnce(&mut PropertyReport) -> Result<()>) -> PropertyReport {
    match body(&mut rep) {
        Ok(()) => rep,
        Err(e) => rep.error(&e),
    }
}

fn compare_t<S: Scalar>(
    rep: &mut PropertyReport,
    ctx: &PairCtx<S>,
    exps: &[i64],
    at: impl FnOnce() -> String,
    lhs: &TensorVec<S>,
    rhs: &TensorVec<S>,
) {
    rep.checked += 1;
    if lhs != rhs {
        rep.fail(exps, at(), lhs.render(ctx), rhs.render(ctx));
    }
}

fn sign<S: Scalar>(k: i64) -> S {
    if k.rem_euclid(2) == 0 {
        S::one()
    } else {
        S::one().rneg()
    }
}

fn yop<S: Scalar>(flavor: Flavor, v: RVec, p: i64) -> DualOp<S> {
    DualOp::Y { flavor, v, p }
}

/// `σ` of the commutator `[A, B]` on a pair.
fn commutator<S: Scalar>(ctx: &PairCtx<S>, a: &DualOp<S>, b: &DualOp<S>, t: &TensorVec<S>) -> Result<TensorVec<S>> {
    let ab = ctx.sigma_word(&[a.clone(), b.clone()], t)?;
    let ba = ctx.sigma_word(&[b.clone(), a.clone()], t)?;
    Ok(ab.sub(&ba))
}

/// `Y′(𝟙, x) = 1`.
fn check_ident<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let vac = ctx.voa.vacuum.clone();
    for (a, b) in ctx.pairs_upto(pc.pair_bound) {
        let t = TensorVec::pair(a, b);
        for p in -pc.radius..=pc.radius {
            let lhs = ctx.sigma(&yop(flavor, vac.clone(), p), &t)?;
            let rhs = if p == 0 { t.clone() } else { TensorVec::new() };
            compare_t(rep, ctx, &[p], || pc.pair_name(a, b), &lhs, &rhs);
        }
    }
    Ok(())
}

/// `Y′(L(-1)v)_q = (q + 1) Y′(v)_{q+1}`.
fn check_deriv<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    for &v in &pc.gens {
        let dv = (*ctx.voa.adjoint.virasoro(-1, v)?).clone();
        for (a, b) in ctx.pairs_upto(pc.pair_bound) {
            let t = TensorVec::pair(a, b);
            for q in -pc.radius..=pc.radius {
                let lhs = ctx.sigma(&yop(flavor, dv.clone(), q), &t)?;
                let rhs = ctx.sigma(&DualOp::y(flavor, v, q + 1), &t)?.scale(&S::from_i64(q + 1));
                compare_t(rep, ctx, &[q], || format!("v={} {}", pc.name(v), pc.pair_name(a, b)), &lhs, &rhs);
            }
        }
    }
    Ok(())
}

/// `[Y′(u)_a, Y′(v)_b] = Σ_k (-1)^k C(a+k, k) Y′(u_k v)_{a+b+k+1}`.
fn check_comm<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let voa = &ctx.voa;
    let min_v = voa.adjoint.min_weight();
    let r = pc.radius;
    for &u in &pc.gens {
        for &v in &pc.gens {
            let kmax = voa.weight(u) + voa.weight(v) - 1 - min_v;
            let prods: Vec<RVec> = (0..=kmax).map(|k| voa.adjoint.act(u, k, v).map(|x| (*x).clone())).collect::<Result<_>>()?;
            for (a0, b0) in ctx.pairs_upto(pc.pair_bound) {
                let t = TensorVec::pair(a0, b0);
                for a in -r..=r {
                    for b in -r..=r {
                        let lhs = commutator(ctx, &DualOp::y(flavor, u, a), &DualOp::y(flavor, v, b), &t)?;
                        let mut rhs = TensorVec::new();
                        for (k, uv) in prods.iter().enumerate() {
                            if uv.is_zero() {
                                continue;
                            }
                            let k = k as i64;
                            let c = binom::<S>(a + k, k as u64).rmul(&sign(k));
                            rhs.add_scaled(&ctx.sigma(&yop(flavor, uv.clone(), a + b + k + 1), &t)?, &c);
                        }
                        let at = || format!("u={} v={} {}", pc.name(u), pc.name(v), pc.pair_name(a0, b0));
                        compare_t(rep, ctx, &[a, b], at, &lhs, &rhs);
                    }
                }
            }
        }
    }
    Ok(())
}

/// `[L′(j), L′(k)] = (j - k) L′(j + k)`.
fn check_sl2<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    for (a, b) in ctx.pairs_upto(pc.pair_bound) {
        let t = TensorVec::pair(a, b);
        for j in -1..=1 {
            for k in -1..=1 {
                let lhs = commutator(ctx, &DualOp::l(flavor, j), &DualOp::l(flavor, k), &t)?;
                let rhs = if j == k {
                    TensorVec::new()
                } else {
                    ctx.sigma(&DualOp::l(flavor, j + k), &t)?.scale(&S::from_i64(j - k))
                };
                compare_t(rep, ctx, &[j, k], || pc.pair_name(a, b), &lhs, &rhs);
            }
        }
    }
    Ok(())
}

/// `[L′(j), Y′(v)_p] = Σ_{k=0}^{j+1} C(j+1, k) Y′(L(k-1)v)_{p-j-1+k}`.
fn check_lycomm<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    for &v in &pc.gens {
        let lv: Vec<RVec> = (-1..=1).map(|i| ctx.voa.adjoint.virasoro(i, v).map(|x| (*x).clone())).collect::<Result<_>>()?;
        for (a, b) in ctx.pairs_upto(pc.pair_bound) {
            let t = TensorVec::pair(a, b);
            for j in -1..=1 {
                for p in -pc.radius..=pc.radius {
                    let lhs = commutator(ctx, &DualOp::l(flavor, j), &DualOp::y(flavor, v, p), &t)?;
                    let mut rhs = TensorVec::new();
                    for k in 0..=(j + 1) {
                        let c = binom::<S>(j + 1, k as u64);
                        rhs.add_scaled(&ctx.sigma(&yop(flavor, lv[k as usize].clone(), p - j - 1 + k), &t)?, &c);
                    }
                    let at = || format!("v={} {}", pc.name(v), pc.pair_name(a, b));
                    compare_t(rep, ctx, &[j, p], at, &lhs, &rhs);
                }
            }
        }
    }
    Ok(())
}

/// Both sides of the Jacobi identity in components on `λ`, for `(l, m, n)`
/// in the window:
/// `Σ_i (-1)^i C(l,i)[u_(m+l-i) v_(n+i) - (-1)^l v_(n+l-i) u_(m+i)] λ
///  = Σ_i C(m,i) (u_{l+i} v)_(m+n-i) λ`,
/// with `u_(n) = Y′(u)_{-n-1}`. Sums over `i` are cut where the lower
/// truncation of `λ` kills the inner factor.
pub fn check_jacobi<S: Scalar>(
    flavor: Flavor,
    lambda: &DualFunctional<S>,
    gens: &[BasisId],
    pair_bound: i64,
    radius: i64,
    rep: &mut PropertyReport,
) -> Result<()> {
    let ctx = lambda.ctx().clone();
    let voa = &ctx.voa;
    let min_v = voa.adjoint.min_weight();
    let d = lambda.depth();
    let r = radius;
    let m_op = |v: BasisId, n: i64| DualOp::y(flavor, v, -n - 1);
    let pairs = ctx.pairs_upto(pair_bound);
    for &u in gens {
        for &v in gens {
            let (hu, hv) = (voa.weight(u), voa.weight(v));
            let kmax = hu + hv - 1 - min_v;
            let prods: Vec<RVec> =
                (-r..=kmax.max(-r)).map(|k| voa.adjoint.act(u, k, v).map(|x| (*x).clone())).collect::<Result<_>>()?;
            let prod = |k: i64| -> &RVec { &prods[(k + r) as usize] };
            for &(a, b) in &pairs {
                let t = TensorVec::pair(a, b);
                for l in -r..=r {
                    for m in -r..=r {
                        for n in -r..=r {
                            let mut lhs = TensorVec::new();
                            let i1 = d + hv - 1 - n;
                            let i2 = d + hu - 1 - m;
                            let top = if l >= 0 { i1.max(i2).min(l) } else { i1.max(i2) };
                            for i in 0..=top {
                                let c = binom::<S>(l, i as u64).rmul(&sign(i));
                                if c.is_zero() {
                                    continue;
                                }
                                if i <= i1 {
                                    lhs.add_scaled(&ctx.sigma_word(&[m_op(u, m + l - i), m_op(v, n + i)], &t)?, &c);
                                }
                                if i <= i2 {
                                    let c2 = c.rmul(&sign(l)).rneg();
                                    lhs.add_scaled(&ctx.sigma_word(&[m_op(v, n + l - i), m_op(u, m + i)], &t)?, &c2);
                                }
                            }
                            let mut rhs = TensorVec::new();
                            for i in 0..=(kmax - l).max(-1) {
                                let uv = prod(l + i);
                                if uv.is_zero() {
                                    continue;
                                }
                                let c = binom::<S>(m, i as u64);
                                if c.is_zero() {
                                    continue;
                                }
                                rhs.add_scaled(&ctx.sigma(&yop(flavor, uv.clone(), -(m + n - i) - 1), &t)?, &c);
                            }
                            let (x, y) = (lambda.eval_tensor(&lhs)?, lambda.eval_tensor(&rhs)?);
                            let at = || {
                                format!(
                                    "u={} v={} w1={} w2={}",
                                    voa.adjoint.basis_name(u),
                                    voa.adjoint.basis_name(v),
                                    ctx.w1.basis_name(a),
                                    ctx.w2.basis_name(b)
                                )
                            };
                            rep.compare(&[l, m, n], at, &x, &y);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn jacobi_on_compat<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, id: &str) -> Result<PropertyReport> {
    let mut rep = pc.report(id, 3, &pc.jacobi_gens)?;
    rep.window = format!("[{},{}]^3 pairs:wt<={}", -pc.radius, pc.radius, pc.pair_bound);
    for lambda in &pc.lambdas {
        let compat = check_compat(flavor, lambda, &pc.compat_window());
        if !compat.pass {
            let why = format!("λ={} is not {flavor}(z)-compatible", lambda.label());
            return Ok(rep.precondition_unmet(why, first_witness(&compat)));
        }
        let mut sub = pc.report(id, 3, &pc.jacobi_gens)?;
        sub = guarded(sub, |r| check_jacobi(flavor, lambda, &pc.jacobi_gens, pc.pair_bound, pc.radius, r));
        rep.absorb(&sub);
    }
    rep.context = format!("{} λ=[{}]", rep.context, labels(&pc.lambdas));
    Ok(rep)
}

fn commalg_jacobi<S: Scalar>(pc: &PropertyContext<S>) -> Result<PropertyReport> {
    let id = "COMMALG-JACOBI-ALWAYS";
    let mut rep = pc.report(id, 3, &pc.jacobi_gens)?;
    if pc.ctx.voa.adjoint.max_weight() != Some(0) {
        let e = Error::UnsupportedInstance(format!("{id} needs a commutative-algebra instance"));
        return Ok(rep.error(&e));
    }
    for lambda in &pc.lambdas {
        for flavor in [Flavor::P, Flavor::Q] {
            let sub = guarded(pc.report(id, 3, &pc.jacobi_gens)?, |r| {
                check_jacobi(flavor, lambda, &pc.jacobi_gens, pc.pair_bound, pc.radius, r)
            });
            rep.absorb(&sub);
        }
    }
    rep.context = format!("{} λ=[{}]", rep.context, labels(&pc.lambdas));
    Ok(rep)
}

fn labels<S: Scalar>(ls: &[DualFunctional<S>]) -> String {
    ls.iter().map(|l| l.label().to_string()).collect::<Vec<_>>().join(", ")
}

/// The generator operators applied in the stability check: `τ(v ⊗ t^m)`
/// for every `v` and every `m` whose image is nonzero a priori and has
/// declared depth at most `cutoff`, and `L′(j)`.
pub fn generator_ops<S: Scalar>(flavor: Flavor, lambda: &DualFunctional<S>, gens: &[BasisId], cutoff: i64) -> Vec<DualOp<S>> {
    let voa = &lambda.ctx().voa;
    let mut ops = Vec::new();
    for &v in gens {
        let lo = truncation_point(lambda, v);
        let hi = cutoff - lambda.depth() - voa.weight(v);
        for p in lo..=hi {
            ops.push(DualOp::tau_mode(flavor, v, -p - 1));
        }
    }
    ops.extend((-1..=1).map(|j| DualOp::l(flavor, j)));
    ops
}

fn stable<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, id: &str) -> Result<PropertyReport> {
    let mut rep = pc.report(id, 2, &pc.gens)?;
    rep.window = format!("{} images:depth<={}", pc.compat_window().describe(), pc.cutoff);
    for lambda in &pc.lambdas {
        let compat = check_compat(flavor, lambda, &pc.compat_window());
        if !compat.pass {
            let why = format!("λ={} is not {flavor}(z)-compatible", lambda.label());
            return Ok(rep.precondition_unmet(why, first_witness(&compat)));
        }
        for op in generator_ops(flavor, lambda, &pc.gens, pc.cutoff) {
            let image = lambda.apply(&op);
            let mut sub = check_compat(flavor, &image, &pc.compat_window());
            for w in &mut sub.witnesses {
                w.at = format!("{}: {}", op.describe(&pc.ctx.voa), w.at);
            }
            rep.absorb(&sub);
        }
    }
    rep.context = format!("{} λ=[{}]", rep.context, labels(&pc.lambdas));
    Ok(rep)
}

/// `τ(v ⊗ t^m)` shifts the group degree of a pair by `deg v`, so it maps a
/// functional of degree `β` to one of degree `β + deg v`. Checked on the
/// adjoint tensors and on the projections of the supplied functionals.
fn check_acompat<S: Scalar>(pc: &PropertyContext<S>, flavor: Flavor, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let voa = &ctx.voa;
    let red = |d: i64| ctx.w1.reduce_degree(d);
    for &v in &pc.gens {
        let alpha = voa.adjoint.degree(v);
        for m in -pc.radius..=pc.radius {
            let op = DualOp::tau_mode(flavor, v, m);
            for (a, b) in ctx.pairs_upto(pc.pair_bound) {
                let gamma = ctx.pair_degree(a, b);
                let img = ctx.sigma_pair(&op, a, b)?;
                for ((x, y), _) in img.terms() {
                    let got = ctx.pair_degree(*x, *y);
                    let at = || format!("v={} m={m} {} -> {}", pc.name(v), pc.pair_name(a, b), pc.pair_name(*x, *y));
                    rep.compare(&[m], at, &got, &red(gamma + alpha));
                }
            }
            for lambda in &pc.lambdas {
                for beta in lambda.degrees() {
                    let image = lambda.project_beta(beta).apply(&op);
                    for (a, b) in ctx.pairs_upto(pc.pair_bound) {
                        if red(ctx.pair_degree(a, b) + beta + alpha) == 0 {
                            continue;
                        }
                        let val = image.eval(a, b)?;
                        let at = || format!("v={} m={m} β={beta} λ={} {}", pc.name(v), lambda.label(), pc.pair_name(a, b));
                        rep.compare(&[m], at, &val, &S::zero());
                    }
                }
            }
        }
    }
    Ok(())
}

/// Coefficients `y^k` of `(1 - y/c)^A t` for `k` in `0..=n`, where `A` is
/// given by its action on tensors; returns `Σ_k C(A, k)(-1/c)^k`.
fn binom_series<S: Scalar>(
    apply: &dyn Fn(&TensorVec<S>) -> Result<TensorVec<S>>,
    t: &TensorVec<S>,
    neg_inv_c: &S,
    n: i64,
) -> Result<Vec<TensorVec<S>>> {
    // C(A, k) t = (A - k + 1)/k · C(A, k-1) t
    let mut out = vec![t.clone()];
    let mut cur = t.clone();
    for k in 1..=n {
        let mut next = apply(&cur)?;
        next.add_scaled(&cur, &S::from_i64(-(k - 1)));
        cur = next.scale(&S::from_rational(&crate::Rational::new(1.into(), k.into())));
        out.push(cur.scale(&pow(neg_inv_c, k)));
    }
    Ok(out)
}

fn pow<S: Scalar>(a: &S, k: i64) -> S {
    let mut r = S::one();
    for _ in 0..k {
        r = r.rmul(a);
    }
    r
}

/// `((1 - y/z)^{L(0)} λ)(w₁ ⊗ w₂) = λ((1 - y/z)^{L(0) - zL(1)} w₁ ⊗ (1 - y/z)^{-(L(0) - zL(-1))} w₂)`
/// with `L(0) = L′_Q(0)`, compared coefficientwise in `y` on the tensors.
fn check_92<S: Scalar>(pc: &PropertyContext<S>, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let n = pc.radius;
    let z = ctx.z().clone();
    let c = ctx.zp.pow(-1).rneg();
    let l0 = DualOp::l(Flavor::Q, 0);
    let sig = |t: &TensorVec<S>| ctx.sigma(&l0, t);
    // A = L(0) - zL(1) on W₁ and -B = -(L(0) - zL(-1)) on W₂
    let a_op = |t: &TensorVec<S>| -> Result<TensorVec<S>> {
        let mut out = TensorVec::new();
        for ((a, b), x) in t.terms() {
            let mut left = TensorVec::new();
            left.add_product(&*ctx.w1.virasoro(0, *a)?, &RVec::basis(*b), &S::one());
            left.add_product(&*ctx.w1.virasoro(1, *a)?, &RVec::basis(*b), &z.rneg());
            out.add_scaled(&left, x);
        }
        Ok(out)
    };
    let b_op = |t: &TensorVec<S>| -> Result<TensorVec<S>> {
        let mut out = TensorVec::new();
        for ((a, b), x) in t.terms() {
            let mut right = TensorVec::new();
            right.add_product(&RVec::basis(*a), &*ctx.w2.virasoro(0, *b)?, &S::one().rneg());
            right.add_product(&RVec::basis(*a), &*ctx.w2.virasoro(-1, *b)?, &z);
            out.add_scaled(&right, x);
        }
        Ok(out)
    };
    for (a, b) in ctx.pairs_upto(pc.pair_bound) {
        let t = TensorVec::pair(a, b);
        let lhs = binom_series(&sig, &t, &c, n)?;
        let lefts = binom_series(&a_op, &t, &c, n)?;
        for k in 0..=n {
            let mut rhs = TensorVec::new();
            for i in 0..=k {
                let rights = binom_series(&b_op, &lefts[i as usize], &c, k - i)?;
                rhs.add_scaled(&rights[(k - i) as usize], &S::one());
            }
            compare_t(rep, ctx, &[k], || pc.pair_name(a, b), &lhs[k as usize], &rhs);
        }
    }
    Ok(())
}

/// With `ε = 1 - y/z` and `L(0) = L′_Q(0)`: the coefficient of `x^p` in
/// `Y′_Q(v, x)` equals `ε^{-h-p} ε^{L(0)} Y′_Q(v)_p ε^{-L(0)}` for `v` of
/// weight `h`, coefficientwise in `y`.
fn check_94<S: Scalar>(pc: &PropertyContext<S>, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let n = pc.radius;
    let c = ctx.zp.pow(-1).rneg();
    let l0 = DualOp::l(Flavor::Q, 0);
    let sig = |t: &TensorVec<S>| ctx.sigma(&l0, t);
    let neg_sig = |t: &TensorVec<S>| Ok(ctx.sigma(&l0, t)?.scale(&S::one().rneg()));
    for &v in &pc.gens {
        let h = ctx.voa.weight(v);
        for p in -pc.radius..=pc.radius {
            let y = DualOp::y(Flavor::Q, v, p);
            // scalar series ε^{-h-p}
            let e: Vec<S> = (0..=n).map(|k| binom::<S>(-h - p, k as u64).rmul(&pow(&c, k))).collect();
            for (a, b) in ctx.pairs_upto(pc.pair_bound) {
                let t = TensorVec::pair(a, b);
                let lhs = ctx.sigma(&y, &t)?;
                // outermost ε^{L(0)} acts first on the tensor side
                let first = binom_series(&sig, &t, &c, n)?;
                let mut total = vec![TensorVec::new(); (n + 1) as usize];
                for (i, f) in first.iter().enumerate() {
                    let mid = ctx.sigma(&y, f)?;
                    let last = binom_series(&neg_sig, &mid, &c, n - i as i64)?;
                    for (j, g) in last.iter().enumerate() {
                        for (k, s) in e.iter().enumerate() {
                            let deg = i + j + k;
                            if deg as i64 <= n {
                                total[deg].add_scaled(g, s);
                            }
                        }
                    }
                }
                for (k, rhs) in total.iter().enumerate() {
                    let want = if k == 0 { lhs.clone() } else { TensorVec::new() };
                    let at = || format!("v={} {}", pc.name(v), pc.pair_name(a, b));
                    compare_t(rep, ctx, &[p, k as i64], at, &want, rhs);
                }
            }
        }
    }
    Ok(())
}

/// `(1 - y/x)^{L(0) - xL(-1)} = e^{yL(-1)} (1 - y/x)^{L(0)}` for
/// `L(0) = L′_Q(0)`, `L(-1) = L′_Q(-1)`, coefficientwise in `x` and `y`.
fn check_98<S: Scalar>(pc: &PropertyContext<S>, rep: &mut PropertyReport) -> Result<()> {
    let ctx = &pc.ctx;
    let n = pc.radius;
    let l0 = DualOp::l(Flavor::Q, 0);
    let lm = DualOp::l(Flavor::Q, -1);
    let s0 = |t: &TensorVec<S>| ctx.sigma(&l0, t);
    let sm = |t: &TensorVec<S>| ctx.sigma(&lm, t);
    for (a, b) in ctx.pairs_upto(pc.pair_bound) {
        let t = TensorVec::pair(a, b);
        let lhs = lemmas::binom_operator_series(&s0, &sm, &t, n)?;
        let rhs = lemmas::exp_binom_series(&s0, &sm, &t, n, true)?;
        for (e, l) in &lhs {
            let r = rhs.get(e).cloned().unwrap_or_else(TensorVec::new);
            compare_t(rep, ctx, e, || pc.pair_name(a, b), l, &r);
        }
        for (e, r) in &rhs {
            if !lhs.contains_key(e) {
                compare_t(rep, ctx, e, || pc.pair_name(a, b), &TensorVec::new(), r);
            }
        }
    }
    Ok(())
}
