//! Windowed weak-module axiom suite: Jacobi identity in component form,
//! vacuum property, `L(-1)`-derivative, Möbius commutators and
//! skew-symmetry.

use num_traits::{One, Zero};

use super::{apply_mode, apply_virasoro, RVec, VModule, Voa};
use crate::error::Result;
use crate::scalar::{gen_binom, inv_factorial};
use crate::series::identity::{IdentityReport, Mismatch, Window, MAX_WITNESSES};
use crate::vector::BasisId;
use crate::Rational;

fn report(name: &str, vars: &[&str], r: i64) -> IdentityReport {
    IdentityReport {
        name: name.to_string(),
        window: Window { vars: vars.iter().map(|s| s.to_string()).collect(), ranges: vec![(-r, r); vars.len()] },
        checked: 0,
        mismatches: Vec::new(),
        error: None,
    }
}

fn record(rep: &mut IdentityReport, exps: Vec<i64>, lhs: &RVec, rhs: &RVec, ctx: impl Fn() -> String) {
    rep.checked += 1;
    if lhs != rhs && rep.mismatches.len() < MAX_WITNESSES {
        rep.mismatches.push(Mismatch { exps, lhs: format!("{} {:?}", ctx(), lhs), rhs: format!("{rhs:?}") });
    }
}

fn finish(mut rep: IdentityReport, r: Result<()>) -> IdentityReport {
    if let Err(e) = r {
        rep.error = Some(e.to_string());
    }
    rep
}

fn sgn(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Component form of the Jacobi identity,
/// `Σ_i (-1)^i C(l,i)[u_{m+l-i} v_{n+i} - (-1)^l v_{n+l-i} u_{m+i}] w
///  = Σ_i C(m,i) (u_{l+i} v)_{m+n-i} w`,
/// for `(l, m, n)` in the cube of radius `r`.
pub fn jacobi_components(
    v_alg: &Voa,
    w_mod: &dyn VModule,
    us: &[BasisId],
    ws: &[BasisId],
    r: i64,
) -> IdentityReport {
    let mut rep = report(&format!("jacobi[{}]", w_mod.label()), &["l", "m", "n"], r);
    let res = (|| -> Result<()> {
        let min_w = w_mod.min_weight();
        let min_v = v_alg.adjoint.min_weight();
        for &u in us {
            for &v in us {
                for &w in ws {
                    let (hu, hv, hw) = (v_alg.weight(u), v_alg.weight(v), w_mod.weight(w));
                    let wvec = RVec::basis(w);
                    for l in -r..=r {
                        for m in -r..=r {
                            for n in -r..=r {
                                let mut lhs = RVec::new();
                                let i1 = hv + hw - n - 1 - min_w;
                                let i2 = hu + hw - m - 1 - min_w;
                                for i in 0..=i1.max(i2).max(-1) {
                                    let c = sgn(i) * gen_binom(l, i as u64);
                                    if c.is_zero() {
                                        continue;
                                    }
                                    if i <= i1 {
                                        let x = apply_mode(w_mod, &RVec::basis(v), n + i, &wvec)?;
                                        let y = apply_mode(w_mod, &RVec::basis(u), m + l - i, &x)?;
                                        lhs.add_scaled(&y, &c);
                                    }
                                    if i <= i2 {
                                        let x = apply_mode(w_mod, &RVec::basis(u), m + i, &wvec)?;
                                        let y = apply_mode(w_mod, &RVec::basis(v), n + l - i, &x)?;
                                        lhs.add_scaled(&y, &(-(c * sgn(l))));
                                    }
                                }
                                let mut rhs = RVec::new();
                                for i in 0..=(hu + hv - l - 1 - min_v) {
                                    let c = gen_binom(m, i as u64);
                                    if c.is_zero() {
                                        continue;
                                    }
                                    let uv = v_alg.adjoint.act(u, l + i, v)?;
                                    rhs.add_scaled(&apply_mode(w_mod, &uv, m + n - i, &wvec)?, &c);
                                }
                                let names = || {
                                    format!(
                                        "u={} v={} w={}:",
                                        v_alg.adjoint.basis_name(u),
                                        v_alg.adjoint.basis_name(v),
                                        w_mod.basis_name(w)
                                    )
                                };
                                record(&mut rep, vec![l, m, n], &lhs, &rhs, names);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    finish(rep, res)
}

/// `𝟙_n w = δ_{n,-1} w`.
pub fn vacuum_property(v_alg: &Voa, w_mod: &dyn VModule, ws: &[BasisId], r: i64) -> IdentityReport {
    let mut rep = report(&format!("vacuum[{}]", w_mod.label()), &["n"], r);
    let res = (|| -> Result<()> {
        for &w in ws {
            for n in -r..=r {
                let lhs = apply_mode(w_mod, &v_alg.vacuum, n, &RVec::basis(w))?;
                let rhs = if n == -1 { RVec::basis(w) } else { RVec::new() };
                record(&mut rep, vec![n], &lhs, &rhs, || format!("w={}:", w_mod.basis_name(w)));
            }
        }
        Ok(())
    })();
    finish(rep, res)
}

/// `(L(-1)v)_n w = -n v_{n-1} w`.
pub fn derivative_property(v_alg: &Voa, w_mod: &dyn VModule, us: &[BasisId], ws: &[BasisId], r: i64) -> IdentityReport {
    let mut rep = report(&format!("L(-1)-derivative[{}]", w_mod.label()), &["n"], r);
    let res = (|| -> Result<()> {
        for &v in us {
            let lv = apply_virasoro(v_alg.adjoint.as_ref(), -1, &RVec::basis(v))?;
            for &w in ws {
                for n in -r..=r {
                    let lhs = apply_mode(w_mod, &lv, n, &RVec::basis(w))?;
                    let rhs = w_mod.act(v, n - 1, w)?.scale(&Rational::from_integer((-n).into()));
                    record(&mut rep, vec![n], &lhs, &rhs, || format!("v={}:", v_alg.adjoint.basis_name(v)));
                }
            }
        }
        Ok(())
    })();
    finish(rep, res)
}

/// `[L(j), v_n] = Σ_{k=0}^{j+1} C(j+1,k) (L(k-1)v)_{n+j+1-k}` for
/// `j ∈ {-1, 0, 1}`.
pub fn mobius_commutators(v_alg: &Voa, w_mod: &dyn VModule, us: &[BasisId], ws: &[BasisId], r: i64) -> IdentityReport {
    let mut rep = report(&format!("möbius[{}]", w_mod.label()), &["j", "n"], r);
    let res = (|| -> Result<()> {
        for &v in us {
            let vv = RVec::basis(v);
            for &w in ws {
                let wv = RVec::basis(w);
                for j in -1..=1 {
                    for n in -r..=r {
                        let a = apply_virasoro(w_mod, j, &apply_mode(w_mod, &vv, n, &wv)?)?;
                        let b = apply_mode(w_mod, &vv, n, &apply_virasoro(w_mod, j, &wv)?)?;
                        let lhs = a.sub(&b);
                        let mut rhs = RVec::new();
                        for k in 0..=(j + 1) {
                            let lk = apply_virasoro(v_alg.adjoint.as_ref(), k - 1, &vv)?;
                            rhs.add_scaled(&apply_mode(w_mod, &lk, n + j + 1 - k, &wv)?, &gen_binom(j + 1, k as u64));
                        }
                        record(&mut rep, vec![j, n], &lhs, &rhs, || format!("v={}:", v_alg.adjoint.basis_name(v)));
                    }
                }
            }
        }
        Ok(())
    })();
    finish(rep, res)
}

/// `u_n v = Σ_{j≥0} (-1)^{n+j+1} L(-1)^j/j! (v_{n+j} u)` in the algebra.
pub fn skew_symmetry(v_alg: &Voa, us: &[BasisId], r: i64) -> IdentityReport {
    let mut rep = report("skew-symmetry", &["n"], r);
    let adj = v_alg.adjoint.as_ref();
    let res = (|| -> Result<()> {
        for &u in us {
            for &v in us {
                let top = v_alg.weight(u) + v_alg.weight(v) - 1 - adj.min_weight();
                for n in -r..=r {
                    let lhs = (*adj.act(u, n, v)?).clone();
                    let mut rhs = RVec::new();
                    for j in 0..=(top - n).max(-1) {
                        let mut x = (*adj.act(v, n + j, u)?).clone();
                        for _ in 0..j {
                            x = apply_virasoro(adj, -1, &x)?;
                        }
                        rhs.add_scaled(&x, &(sgn(n + j + 1) * inv_factorial(j as u64)));
                    }
                    record(&mut rep, vec![n], &lhs, &rhs, || {
                        format!("u={} v={}:", adj.basis_name(u), adj.basis_name(v))
                    });
                }
            }
        }
        Ok(())
    })();
    finish(rep, res)
}

/// The full weak-module suite for one module.
pub fn module_suite(v_alg: &Voa, w_mod: &dyn VModule, us: &[BasisId], ws: &[BasisId], r: i64) -> Vec<IdentityReport> {
    vec![
        jacobi_components(v_alg, w_mod, us, ws, r),
        vacuum_property(v_alg, w_mod, ws, r),
        derivative_property(v_alg, w_mod, us, ws, r),
        mobius_commutators(v_alg, w_mod, us, ws, r),
    ]
}
