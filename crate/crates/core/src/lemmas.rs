//! Formal-calculus identities behind the dual actions, checked
//! coefficientwise on exponent windows.
//!
//! Identities involving `Y_t(v, x)` are read with `t` as an extra formal
//! variable: `Y_t(v, x) = Σ_n v ⊗ t^n x^{-n-1}`, with coefficients in `V`.
//! Their left-hand sides apply the loop-space maps to the rational function
//! in each `x`-coefficient and then expand in `t`.

use std::collections::BTreeMap;
use std::ops::Neg;
use std::sync::Arc;

use crate::error::Result;
use crate::scalar::{Scalar, ZParam};
use crate::series::delta::{mk_delta, Mono};
use crate::series::identity::{check_identity, IdentityReport, Window, MAX_WITNESSES};
use crate::series::ratfn::{Dir, RationalFn};
use crate::series::{fs_mul, fs_product, Polyhedron, Series, Vars};
use crate::vector::{BasisId, Coeff, SparseVec};
use crate::vertex::loops::translate;
use crate::vertex::{apply_mode, apply_virasoro, o_involution, translate_pm, LoopElement, RVec, Translation, Voa};

/// Names of the identities in [`delta_suite`], in report order.
pub const DELTA_SUITE: [&str; 12] = [
    "two-term",
    "three-term",
    "substitution",
    "ztr1",
    "ztr2",
    "ztr3",
    "3.71",
    "3.72",
    "3.73",
    "delta-idty",
    "comp=>jcb-9",
    "L(0)L(-1)formula",
];

/// Anchors of the identities in [`DELTA_SUITE`], in the same order.
pub const DELTA_ANCHORS: [&str; 12] = [
    "3.10: \"we shall examine each of the three terms\"",
    "3.10: \"we shall examine each of the three terms\"",
    "3.71 proof: \"the fundamental property\"",
    "ztr: \"needed for our action $\\tau_{P(z)}$\"",
    "ztr: \"needed for our action $\\tau_{P(z)}$\"",
    "ztr: \"needed for our action $\\tau_{P(z)}$\"",
    "3.71: \"transform the expression\"",
    "3.72: \"transform the expression\"",
    "3.73: \"the application of the map $o$\"",
    "delta-idty: \"But we have\"",
    "comp=>jcb-9: \"For $u, v \\in V$, we have\"",
    "L(0)L(-1)formula: \"be any operators satisfying the commutator relation\"",
];

/// Window radii for the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteRadii {
    /// Identities carrying vectors of `V`.
    pub radius: i64,
    /// Identities between delta functions alone.
    pub pure: i64,
    /// The five-variable identity.
    pub five_var: i64,
}

impl Default for SuiteRadii {
    fn default() -> Self {
        SuiteRadii { radius: 4, pure: 6, five_var: 6 }
    }
}

impl SuiteRadii {
    /// One radius for every identity.
    pub fn uniform(r: i64) -> Self {
        SuiteRadii { radius: r, pure: r, five_var: r }
    }
}

/// Runs all twelve identities. `gens` are basis vectors of `V`.
pub fn delta_suite<S: Scalar>(voa: &Arc<Voa>, gens: &[BasisId], radii: SuiteRadii, zp: &ZParam<S>) -> Vec<IdentityReport> {
    let r = radii.radius;
    vec![
        two_term(radii.pure, zp),
        three_term(radii.pure, zp),
        substitution(radii.pure, zp),
        ztr(1, voa, gens, r, zp),
        ztr(2, voa, gens, r, zp),
        ztr(3, voa, gens, r, zp),
        t_minus_z(Translation::Plus, voa, gens, r, zp),
        t_minus_z(Translation::Minus, voa, gens, r, zp),
        t_minus_z(Translation::O, voa, gens, r, zp),
        delta_idty(radii.five_var, zp),
        cj9(voa, gens, r, zp.clone()),
        l0_lm_formula::<S>(voa, gens, r),
    ]
}

fn errored(name: &str, window: Window, e: crate::Error) -> IdentityReport {
    IdentityReport { name: name.into(), window, checked: 0, mismatches: Vec::new(), error: Some(e.to_string()) }
}

fn run(name: &str, window: Window, body: impl FnOnce(&Window) -> Result<IdentityReport>) -> IdentityReport {
    match body(&window) {
        Ok(r) => r,
        Err(e) => errored(name, window, e),
    }
}

/// Folds per-generator reports into one.
fn merge(name: &str, window: Window, parts: Vec<IdentityReport>) -> IdentityReport {
    let mut out = IdentityReport { name: name.into(), window, checked: 0, mismatches: Vec::new(), error: None };
    for p in parts {
        out.checked += p.checked;
        for m in p.mismatches {
            if out.mismatches.len() < MAX_WITNESSES {
                out.mismatches.push(m);
            }
        }
        if out.error.is_none() {
            out.error = p.error;
        }
    }
    out
}

fn var(vars: &Vars, n: &str) -> Result<Mono> {
    Mono::var(vars, n)
}

/// The whole exponent lattice, for series given pointwise.
fn everywhere(n: usize) -> Vec<Polyhedron> {
    let mut gens = Vec::new();
    for i in 0..n {
        let mut g = vec![0; n];
        g[i] = 1;
        gens.push(g.clone());
        g[i] = -1;
        gens.push(g);
    }
    vec![Polyhedron::cone(vec![0; n], gens)]
}

/// `T^{-1}δ((U + V)/(-T))`, the kernel with the sign inside the argument only.
fn delta_neg<S: Scalar>(vars: &Vars, target: Mono, u: Mono, v: Option<Mono>, zp: &ZParam<S>) -> Result<Series<S>> {
    Ok(mk_delta(vars, target.neg(), u, v, zp)?.neg())
}

/// `x₂^{-1}δ((x₁ - x₀)/x₂) = x₁^{-1}δ((x₂ + x₀)/x₁)`.
pub fn two_term<S: Scalar>(r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = "two-term";
    let vars = Vars::new(&["x0", "x1", "x2"]).expect("vars");
    run(name, Window::cube(&vars, r), |w| {
        let x = |n| var(&vars, n);
        let lhs = mk_delta(&vars, x("x2")?, x("x1")?, Some(x("x0")?.neg()), zp)?;
        let rhs = mk_delta(&vars, x("x1")?, x("x2")?, Some(x("x0")?), zp)?;
        Ok(check_identity(name, &lhs, &rhs, w))
    })
}

/// `x₀^{-1}δ((x₁ - x₂)/x₀) - x₀^{-1}δ((x₂ - x₁)/(-x₀)) = x₂^{-1}δ((x₁ - x₀)/x₂)`.
pub fn three_term<S: Scalar>(r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = "three-term";
    let vars = Vars::new(&["x0", "x1", "x2"]).expect("vars");
    run(name, Window::cube(&vars, r), |w| {
        let x = |n| var(&vars, n);
        let a = mk_delta(&vars, x("x0")?, x("x1")?, Some(x("x2")?.neg()), zp)?;
        let b = delta_neg(&vars, x("x0")?, x("x2")?, Some(x("x1")?.neg()), zp)?;
        let rhs = mk_delta(&vars, x("x2")?, x("x1")?, Some(x("x0")?.neg()), zp)?;
        Ok(check_identity(name, &a.sub(&b)?, &rhs, w))
    })
}

/// `x₀^{-1}δ(t/x₀) x₁^{-1}δ((x₂ + x₀)/x₁) = x₀^{-1}δ(t/x₀) x₁^{-1}δ((x₂ + t)/x₁)`,
/// the form in which `Y_t(v, x₀) = v ⊗ x₀^{-1}δ(t/x₀)` absorbs a delta kernel.
pub fn substitution<S: Scalar>(r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = "substitution";
    let vars = Vars::new(&["x0", "x1", "x2", "t"]).expect("vars");
    run(name, Window::cube(&vars, r), |w| {
        let x = |n| var(&vars, n);
        let yt = mk_delta(&vars, x("x0")?, x("t")?, None, zp)?;
        let lhs = fs_mul(&yt, &mk_delta(&vars, x("x1")?, x("x2")?, Some(x("x0")?), zp)?)?;
        let rhs = fs_mul(&yt, &mk_delta(&vars, x("x1")?, x("x2")?, Some(x("t")?), zp)?)?;
        Ok(check_identity(name, &lhs, &rhs, w))
    })
}

type VSeries<S> = Series<S, SparseVec<S>>;

fn to_s<S: Scalar>(v: &RVec) -> SparseVec<S> {
    v.map_scalars(|c| S::from_rational(c))
}

fn sgn<S: Scalar>(k: i64) -> S {
    if k.rem_euclid(2) == 0 {
        S::one()
    } else {
        S::one().rneg()
    }
}

/// `Y_t(v, x) = Σ_n v ⊗ t^n x^{-n-1}` over `(x0, x1, t)`, in the variable
/// at index `xi`.
fn y_t<S: Scalar>(vars: &Vars, xi: usize, ti: usize, v: BasisId) -> VSeries<S> {
    let n = vars.len();
    let mut base = vec![0; n];
    base[xi] = -1;
    let mut dir = vec![0; n];
    dir[xi] = -1;
    dir[ti] = 1;
    let back: Vec<i64> = dir.iter().map(|d| -d).collect();
    let vv = SparseVec::basis(v);
    Series::from_fn(vars.clone(), vec![Polyhedron::cone(base, vec![dir, back])], move |e| {
        let others = (0..e.len()).all(|i| i == xi || i == ti || e[i] == 0);
        Ok(if others && e[xi] == -e[ti] - 1 { vv.clone() } else { SparseVec::new() })
    })
}

/// `Y_t(e^{yL(1)}(-y^{-2})^{L(0)} v, x) = Σ_{m,n} (-1)^h y^{m-2h} u_m ⊗ t^n x^{-n-1}`
/// with `u_m = L(1)^m v / m!`. Taking `y = x` gives `Y°_t(v, x^{-1})`
/// only after inversion, so the opposite operator is built separately.
fn y_t_conj<S: Scalar>(voa: &Voa, vars: &Vars, yi: usize, xi: usize, ti: usize, v: BasisId) -> Result<VSeries<S>> {
    let h = voa.weight(v);
    let us: Vec<SparseVec<S>> = voa.l1_powers(v)?.iter().map(to_s).collect();
    let n = vars.len();
    let mut support = Vec::new();
    for m in 0..us.len() as i64 {
        let mut base = vec![0; n];
        base[yi] = m - 2 * h;
        base[xi] = -1;
        let mut dir = vec![0; n];
        dir[xi] = -1;
        dir[ti] = 1;
        let back = dir.iter().map(|d| -d).collect();
        support.push(Polyhedron::cone(base, vec![dir, back]));
    }
    let s: S = sgn(h);
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        let others = (0..e.len()).all(|i| i == xi || i == ti || i == yi || e[i] == 0);
        let m = e[yi] + 2 * h;
        if !others || e[xi] != -e[ti] - 1 || m < 0 || m >= us.len() as i64 {
            return Ok(SparseVec::new());
        }
        Ok(us[m as usize].scale(&s))
    }))
}

/// `Y°_t(v, x) = Σ_{m,n} (-1)^h u_m ⊗ t^n x^{m-2h+n+1}`.
fn y_t_opposite<S: Scalar>(voa: &Voa, vars: &Vars, xi: usize, ti: usize, v: BasisId) -> Result<VSeries<S>> {
    let h = voa.weight(v);
    let us: Vec<SparseVec<S>> = voa.l1_powers(v)?.iter().map(to_s).collect();
    let n = vars.len();
    let mut support = Vec::new();
    for m in 0..us.len() as i64 {
        let mut base = vec![0; n];
        base[xi] = m - 2 * h + 1;
        let mut dir = vec![0; n];
        dir[xi] = 1;
        dir[ti] = 1;
        let back = dir.iter().map(|d| -d).collect();
        support.push(Polyhedron::cone(base, vec![dir, back]));
    }
    let s: S = sgn(h);
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        let others = (0..e.len()).all(|i| i == xi || i == ti || e[i] == 0);
        let m = e[xi] + 2 * h - e[ti] - 1;
        if !others || m < 0 || m >= us.len() as i64 {
            return Ok(SparseVec::new());
        }
        Ok(us[m as usize].scale(&s))
    }))
}

/// Coefficient of `x₀^{a} x₁^{b}` in `x₀^{-1}δ((x₁^{-1} - z)/x₀) Y_t(v, x₁)`:
/// `t^{-n-1-b}(1 - zt)^n` with `n = -a - 1`.
pub fn p_kernel_coeff<S: Scalar>(z: &S, a: i64, b: i64) -> Result<RationalFn<S>> {
    let n = -a - 1;
    RationalFn::factor(S::one(), z.rneg(), -n)?.mul(&RationalFn::monomial(-n - 1 - b, S::one()))
}

/// Coefficient of `x₀^{a} x₁^{b}` in `z^{-1}δ((x₁ - x₀)/z) Y_t(v, x₀)`:
/// `t^{-a-1}(z + t)^{-b-1}`.
pub fn q_kernel_coeff<S: Scalar>(z: &S, a: i64, b: i64) -> Result<RationalFn<S>> {
    RationalFn::factor(z.clone(), S::one(), b + 1)?.mul(&RationalFn::monomial(-a - 1, S::one()))
}

/// The maps `o`, `ι₊∘ι₋⁻¹∘o` and `ι₊∘T_z∘ι₋⁻¹∘o` applied to
/// `x₀^{-1}δ((x₁^{-1} - z)/x₀) Y_t(v, x₁)`, against their closed forms.
pub fn ztr<S: Scalar>(which: u8, voa: &Arc<Voa>, gens: &[BasisId], r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = format!("ztr{which}");
    let vars = Vars::new(&["x0", "x1", "t"]).expect("vars");
    let window = Window::cube(&vars, r);
    let parts = gens
        .iter()
        .map(|&v| {
            run(&name, window.clone(), |w| {
                let voa2 = voa.clone();
                let zp2 = zp.clone();
                let lhs: VSeries<S> = Series::from_fn(vars.clone(), everywhere(3), move |e| {
                    let xi = LoopElement::single(v, p_kernel_coeff(zp2.z(), e[0], e[1])?);
                    let o = o_involution(&voa2, &xi)?;
                    match which {
                        1 => o.expand_at(Dir::Minus, e[2]),
                        2 => o.expand_at(Dir::Plus, e[2]),
                        _ => translate(&o, zp2.z())?.expand_at(Dir::Plus, e[2]),
                    }
                });
                let x = |n| var(&vars, n);
                let rhs = match which {
                    1 => fs_mul(&mk_delta(&vars, x("x0")?, x("x1")?.inv(), Some(Mono::z(&vars).neg()), zp)?, &y_t_opposite(voa, &vars, 1, 2, v)?)?,
                    2 => fs_mul(
                        &delta_neg(&vars, x("x0")?, Mono::z(&vars), Some(x("x1")?.inv().neg()), zp)?,
                        &y_t_opposite(voa, &vars, 1, 2, v)?,
                    )?,
                    _ => fs_mul(&mk_delta(&vars, Mono::z(&vars), x("x1")?.inv(), Some(x("x0")?.neg()), zp)?, &y_t_conj(voa, &vars, 1, 0, 2, v)?)?,
                };
                Ok(check_identity(&name, &lhs, &rhs, w))
            })
        })
        .collect();
    merge(&name, window, parts)
}

/// `T⁺_{-z}`, `T⁻_{-z}` and `T°_{-z}` applied to
/// `z^{-1}δ((x₁ - x₀)/z) Y_t(v, x₀)`, against their closed forms.
pub fn t_minus_z<S: Scalar>(which: Translation, voa: &Arc<Voa>, gens: &[BasisId], r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = match which {
        Translation::Plus => "3.71",
        Translation::Minus => "3.72",
        Translation::O => "3.73",
    };
    let vars = Vars::new(&["x0", "x1", "t"]).expect("vars");
    let window = Window::cube(&vars, r);
    let parts = gens
        .iter()
        .map(|&v| {
            run(name, window.clone(), |w| {
                let voa2 = voa.clone();
                let zp2 = zp.clone();
                let lhs: VSeries<S> = Series::from_fn(vars.clone(), everywhere(3), move |e| {
                    let xi = LoopElement::single(v, q_kernel_coeff(zp2.z(), e[0], e[1])?);
                    let (moved, dir) = translate_pm(&voa2, &xi, which, &zp2)?;
                    moved.expand_at(dir, e[2])
                });
                let x = |n| var(&vars, n);
                let rhs = match which {
                    Translation::Plus => {
                        fs_mul(&delta_neg(&vars, x("x0")?, Mono::z(&vars), Some(x("x1")?.neg()), zp)?, &y_t(&vars, 1, 2, v))?
                    }
                    Translation::Minus => {
                        fs_mul(&mk_delta(&vars, x("x0")?, x("x1")?, Some(Mono::z(&vars).neg()), zp)?, &y_t(&vars, 1, 2, v))?
                    }
                    Translation::O => fs_mul(
                        &mk_delta(&vars, x("x0")?, x("x1")?, Some(Mono::z(&vars).neg()), zp)?,
                        &y_t_opposite(voa, &vars, 1, 2, v)?,
                    )?,
                };
                Ok(check_identity(name, &lhs, &rhs, w))
            })
        })
        .collect();
    merge(name, window, parts)
}

/// `z^{-1}δ((x₁^{-1} - y₁)/z) z^{-1}δ((x₂^{-1} - y₂)/z) y₂^{-1}δ((y₁ - x₀)/y₂)
///  = x₂δ((x₁^{-1} - x₀)/x₂^{-1}) z^{-1}δ((x₂^{-1} - y₂)/z) y₁^{-1}δ((y₂ + x₀)/y₁)`.
pub fn delta_idty<S: Scalar>(r: i64, zp: &ZParam<S>) -> IdentityReport {
    let name = "delta-idty";
    let vars = Vars::new(&["x0", "x1", "x2", "y1", "y2"]).expect("vars");
    run(name, Window::cube(&vars, r), |w| {
        let x = |n| var(&vars, n);
        let z = || Mono::z(&vars);
        let k1 = mk_delta(&vars, z(), x("x1")?.inv(), Some(x("y1")?.neg()), zp)?;
        let k2 = mk_delta(&vars, z(), x("x2")?.inv(), Some(x("y2")?.neg()), zp)?;
        let k3 = mk_delta(&vars, x("y2")?, x("y1")?, Some(x("x0")?.neg()), zp)?;
        let r1 = mk_delta(&vars, x("x2")?.inv(), x("x1")?.inv(), Some(x("x0")?.neg()), zp)?;
        let r3 = mk_delta(&vars, x("y1")?, x("y2")?, Some(x("x0")?), zp)?;
        let lhs = fs_product(&[k3, k2.clone(), k1])?;
        let rhs = fs_product(&[r3, k2, r1])?;
        Ok(check_identity(name, &lhs, &rhs, w))
    })
}

/// For `u, v ∈ V`:
/// `x₂^{-1}δ((x₁ - x₀)/x₂) Y(e^{x₁L(1)}(-x₁^{-2})^{L(0)}u, -x₀x₁^{-1}x₂^{-1}) e^{x₂L(1)}(-x₂^{-2})^{L(0)} v
///  = x₂^{-1}δ((x₁ - x₀)/x₂) e^{x₂L(1)}(-x₂^{-2})^{L(0)} Y(u, x₀) v`.
pub fn cj9<S: Scalar>(voa: &Arc<Voa>, gens: &[BasisId], r: i64, zp: ZParam<S>) -> IdentityReport {
    let name = "comp=>jcb-9";
    let vars = Vars::new(&["x0", "x1", "x2"]).expect("vars");
    let window = Window::cube(&vars, r);
    let mut parts = Vec::new();
    for &u in gens {
        for &v in gens {
            parts.push(run(name, window.clone(), |w| {
                let x = |n| var(&vars, n);
                let kernel = mk_delta(&vars, x("x2")?, x("x1")?, Some(x("x0")?.neg()), &zp)?;
                let lhs = fs_mul(&kernel, &cj9_left::<S>(voa, &vars, u, v)?)?;
                let rhs = fs_mul(&kernel, &cj9_right::<S>(voa, &vars, u, v)?)?;
                Ok(check_identity(name, &lhs, &rhs, w))
            }));
        }
    }
    merge(name, window, parts)
}

/// `Σ_{m,k,n} (-1)^{h_u+h_v+n+1} x₀^{-n-1} x₁^{m-2h_u+n+1} x₂^{k-2h_v+n+1} (u_m)_n v_k`.
fn cj9_left<S: Scalar>(voa: &Arc<Voa>, vars: &Vars, u: BasisId, v: BasisId) -> Result<VSeries<S>> {
    let (hu, hv) = (voa.weight(u), voa.weight(v));
    let us = voa.l1_powers(u)?;
    let vs = voa.l1_powers(v)?;
    let min_v = voa.adjoint.min_weight();
    let mut support = Vec::new();
    for m in 0..us.len() as i64 {
        for k in 0..vs.len() as i64 {
            let nmax = (hu - m) + (hv - k) - 1 - min_v;
            let base = vec![-nmax - 1, m - 2 * hu + nmax + 1, k - 2 * hv + nmax + 1];
            support.push(Polyhedron::cone(base, vec![vec![1, -1, -1]]));
        }
    }
    let voa = voa.clone();
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        let n = -e[0] - 1;
        let m = e[1] - n - 1 + 2 * hu;
        let k = e[2] - n - 1 + 2 * hv;
        if m < 0 || k < 0 || m >= us.len() as i64 || k >= vs.len() as i64 {
            return Ok(SparseVec::new());
        }
        let r = apply_mode(voa.adjoint.as_ref(), &us[m as usize], n, &vs[k as usize])?;
        Ok(to_s::<S>(&r).scale(&sgn(hu + hv + n + 1)))
    }))
}

/// `Σ_{n,k} (-1)^ω x₀^{-n-1} x₂^{k-2ω} L(1)^k/k! (u_n v)` with `ω = wt u_n v`.
fn cj9_right<S: Scalar>(voa: &Arc<Voa>, vars: &Vars, u: BasisId, v: BasisId) -> Result<VSeries<S>> {
    let (hu, hv) = (voa.weight(u), voa.weight(v));
    let min_v = voa.adjoint.min_weight();
    let nmax = hu + hv - 1 - min_v;
    let base = vec![-nmax - 1, 0, -2 * min_v];
    let support = vec![Polyhedron::cone(base, vec![vec![1, 0, -2], vec![0, 0, 1]])];
    let voa = voa.clone();
    Ok(Series::from_fn(vars.clone(), support, move |e| {
        if e[1] != 0 {
            return Ok(SparseVec::new());
        }
        let n = -e[0] - 1;
        let omega = hu + hv - n - 1;
        let k = e[2] + 2 * omega;
        if k < 0 {
            return Ok(SparseVec::new());
        }
        let mut cur = (*voa.adjoint.act(u, n, v)?).clone();
        for i in 1..=k {
            if cur.is_zero() {
                break;
            }
            cur = apply_virasoro(voa.adjoint.as_ref(), 1, &cur)?.scale(&crate::Rational::new(1.into(), i.into()));
        }
        Ok(to_s::<S>(&cur).scale(&sgn(omega)))
    }))
}

type LinMap<'a, C> = &'a dyn Fn(&C) -> Result<C>;

/// `(1 - y/x)^{P - xQ} t` up to `y^n`, keyed by `[x-exponent, y-exponent]`.
pub fn binom_operator_series<S: Scalar, C: Coeff<S>>(p: LinMap<C>, q: LinMap<C>, t: &C, n: i64) -> Result<BTreeMap<Vec<i64>, C>> {
    let mut out = BTreeMap::new();
    // C(A, k) t as a polynomial in x
    let mut cur: BTreeMap<i64, C> = BTreeMap::from([(0, t.clone())]);
    for k in 0..=n {
        if k > 0 {
            let mut next: BTreeMap<i64, C> = BTreeMap::new();
            for (e, c) in &cur {
                let mut pc = p(c)?;
                pc.add_scaled(c, &S::from_i64(-(k - 1)));
                next.entry(*e).or_insert_with(C::null).accumulate(&pc);
                let qc = q(c)?;
                next.entry(e + 1).or_insert_with(C::null).add_scaled(&qc, &S::one().rneg());
            }
            let inv = S::from_rational(&crate::Rational::new(1.into(), k.into()));
            cur = next.into_iter().filter(|(_, c)| !c.is_null()).map(|(e, c)| (e, c.scaled(&inv))).collect();
        }
        for (e, c) in &cur {
            add_at(&mut out, vec![e - k, k], &c.scaled(&sgn(k)));
        }
    }
    Ok(out)
}

/// `e^{yQ}(1 - y/x)^P t` up to `y^n`, keyed by `[x-exponent, y-exponent]`.
/// With `exp_first` the exponential is applied to `t` before the binomial,
/// which is the order adjoint maps compose in.
pub fn exp_binom_series<S: Scalar, C: Coeff<S>>(p: LinMap<C>, q: LinMap<C>, t: &C, n: i64, exp_first: bool) -> Result<BTreeMap<Vec<i64>, C>> {
    let mut out = BTreeMap::new();
    let binoms = |x: &C, top: i64| -> Result<Vec<C>> {
        let mut v = vec![x.clone()];
        let mut cur = x.clone();
        for j in 1..=top {
            let mut next = p(&cur)?;
            next.add_scaled(&cur, &S::from_i64(-(j - 1)));
            cur = next.scaled(&S::from_rational(&crate::Rational::new(1.into(), j.into())));
            v.push(cur.scaled(&sgn(j)));
        }
        Ok(v)
    };
    let exps = |x: &C, top: i64| -> Result<Vec<C>> {
        let mut v = vec![x.clone()];
        let mut cur = x.clone();
        for i in 1..=top {
            cur = q(&cur)?.scaled(&S::from_rational(&crate::Rational::new(1.into(), i.into())));
            v.push(cur.clone());
        }
        Ok(v)
    };
    if exp_first {
        for (i, ei) in exps(t, n)?.iter().enumerate() {
            for (j, bj) in binoms(ei, n - i as i64)?.iter().enumerate() {
                add_at(&mut out, vec![-(j as i64), (i + j) as i64], bj);
            }
        }
    } else {
        for (j, bj) in binoms(t, n)?.iter().enumerate() {
            for (i, ei) in exps(bj, n - j as i64)?.iter().enumerate() {
                add_at(&mut out, vec![-(j as i64), (i + j) as i64], ei);
            }
        }
    }
    Ok(out)
}

fn add_at<S: Scalar, C: Coeff<S>>(m: &mut BTreeMap<Vec<i64>, C>, k: Vec<i64>, c: &C) {
    let e = m.entry(k.clone()).or_insert_with(C::null);
    e.accumulate(c);
    if e.is_null() {
        m.remove(&k);
    }
}

/// `(1 - y/x)^{L(0) - xL(-1)} = e^{yL(-1)}(1 - y/x)^{L(0)}` on `V`, applied
/// to each vector of `ws`.
pub fn l0_lm_formula<S: Scalar>(voa: &Arc<Voa>, ws: &[BasisId], n: i64) -> IdentityReport {
    let name = "L(0)L(-1)formula";
    let window = Window { vars: vec!["x".into(), "y".into()], ranges: vec![(-n, 0), (0, n)] };
    let m = voa.adjoint.clone();
    let lin = |j: i64| {
        let m = m.clone();
        move |x: &SparseVec<S>| -> Result<SparseVec<S>> {
            let mut out = SparseVec::new();
            for (b, c) in x.entries() {
                out.add_scaled(&to_s::<S>(&*m.virasoro(j, *b)?), c);
            }
            Ok(out)
        }
    };
    let (p, q) = (lin(0), lin(-1));
    let mut rep = IdentityReport { name: name.into(), window: window.clone(), checked: 0, mismatches: Vec::new(), error: None };
    for &w in ws {
        let t = SparseVec::basis(w);
        let res = binom_operator_series(&p, &q, &t, n).and_then(|l| Ok((l, exp_binom_series(&p, &q, &t, n, false)?)));
        let (lhs, rhs) = match res {
            Ok(x) => x,
            Err(e) => return errored(name, window, e),
        };
        let l: Series<S, SparseVec<S>> = Series::polynomial(Vars::new(&["x", "y"]).expect("vars"), lhs.into_iter().collect());
        let r: Series<S, SparseVec<S>> = Series::polynomial(Vars::new(&["x", "y"]).expect("vars"), rhs.into_iter().collect());
        let part = check_identity(name, &l, &r, &window);
        rep = merge(name, window.clone(), vec![rep, part]);
    }
    rep
}
