use std::ops::Neg;
use std::time::Instant;

use voa_tensor::instances::Instance;
use voa_tensor::lemmas::{self, SuiteRadii, DELTA_SUITE};
use voa_tensor::{ParamScalar, ZParam};

fn zp() -> ZParam<ParamScalar> {
    ZParam::new(ParamScalar::var()).unwrap()
}

#[test]
fn delta_suite_on_heisenberg() {
    let h = Instance::heisenberg(6).unwrap();
    let gens = h.voa.spanning(2);
    let t = Instant::now();
    let reps = lemmas::delta_suite(&h.voa, &gens, SuiteRadii::default(), &zp());
    assert_eq!(reps.len(), DELTA_SUITE.len());
    for (r, name) in reps.iter().zip(DELTA_SUITE) {
        eprintln!("{name}: checked {} pass {} {:?} {:?}", r.checked, r.pass(), r.error, r.mismatches.first());
    }
    eprintln!("elapsed {:?}", t.elapsed());
    for r in &reps {
        assert!(r.pass(), "{r:?}");
        assert!(r.checked > 0);
    }
}

#[test]
fn two_term_on_radius_five() {
    let rep = lemmas::two_term(5, &zp());
    assert!(rep.pass());
    assert_eq!(rep.checked, 11 * 11 * 11);
}

#[test]
fn delta_idty_on_radius_four() {
    let rep = lemmas::delta_idty(4, &zp());
    assert!(rep.pass(), "{rep:?}");
    assert_eq!(rep.checked, 9usize.pow(5));
}

#[test]
fn sign_inside_kernel_matters() {
    // (-x0)^{-1}δ(·/(-x0)) in place of x0^{-1}δ(·/(-x0)) breaks the three-term relation
    use voa_tensor::series::{check_identity, mk_delta, Mono, Vars, Window};
    let vars = Vars::new(&["x0", "x1", "x2"]).unwrap();
    let x = |n| Mono::var(&vars, n).unwrap();
    let a = mk_delta(&vars, x("x0"), x("x1"), Some(x("x2").neg()), &zp()).unwrap();
    let b = mk_delta(&vars, x("x0").neg(), x("x2"), Some(x("x1").neg()), &zp()).unwrap();
    let rhs = mk_delta(&vars, x("x2"), x("x1"), Some(x("x0").neg()), &zp()).unwrap();
    let rep = check_identity("three-term", &a.sub(&b).unwrap(), &rhs, &Window::cube(&vars, 3));
    assert!(!rep.pass());
    assert_eq!(rep.mismatches[0].rhs, "0");
}

#[test]
fn l0_lm_formula_both_orders_agree_on_commutative_algebra() {
    let inst = Instance::commalg("a2").unwrap();
    let gens = inst.voa.spanning(0);
    let rep = lemmas::l0_lm_formula::<ParamScalar>(&inst.voa, &gens, 5);
    assert!(rep.pass() && rep.checked > 0, "{rep:?}");
}
