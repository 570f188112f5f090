use std::sync::Arc;

use voa_tensor::dual::closure::closure_wlambda;
use voa_tensor::dual::{DualFunctional, Flavor, PairCtx};
use voa_tensor::instances::Instance;
use voa_tensor::{Error, ParamScalar};

fn commalg_ctx(name: &str, m1: &str, m2: &str) -> (Instance, Arc<PairCtx<ParamScalar>>) {
    let inst = Instance::commalg(name).unwrap();
    let ctx = PairCtx::new(inst.voa.clone(), inst.module(m1).unwrap(), inst.module(m2).unwrap(), ParamScalar::var()).unwrap();
    (inst, ctx)
}

#[test]
fn balanced_closure_on_a2_is_weight_zero() {
    let (inst, ctx) = commalg_ctx("a2", "regular", "regular");
    let lam = DualFunctional::balanced(&ctx, 7).unwrap();
    for flavor in [Flavor::P, Flavor::Q] {
        let c = closure_wlambda(flavor, &lam, &inst.voa.spanning(0), 0).unwrap();
        // bounded by dim (A₂ ⊗_{A₂} A₂)* = 2
        assert_eq!(c.dim(), 2);
        assert_eq!(c.dims.into_iter().collect::<Vec<_>>(), vec![((0, 0), 2)]);
    }
}

#[test]
fn closure_on_quotient_module() {
    let (inst, ctx) = commalg_ctx("a2", "regular", "quotient");
    let lam = DualFunctional::balanced(&ctx, 1).unwrap();
    let c = closure_wlambda(Flavor::P, &lam, &inst.voa.spanning(0), 0).unwrap();
    assert_eq!(c.dim(), 1);
}

#[test]
fn closure_splits_z2_degrees() {
    let (inst, ctx) = commalg_ctx("z2", "regular", "regular");
    let lam = DualFunctional::balanced(&ctx, 3).unwrap();
    let c = closure_wlambda(Flavor::Q, &lam, &inst.voa.spanning(0), 0).unwrap();
    assert_eq!(c.dim(), 2);
    assert_eq!(c.dims.get(&(0, 0)), Some(&1));
    assert_eq!(c.dims.get(&(0, 1)), Some(&1));
}

#[test]
fn zero_functional_has_empty_closure() {
    let (inst, ctx) = commalg_ctx("a2", "regular", "regular");
    let c = closure_wlambda(Flavor::P, &DualFunctional::zero(&ctx), &inst.voa.spanning(0), 0).unwrap();
    assert_eq!(c.dim(), 0);
    assert!(c.dims.is_empty());
}

#[test]
fn heisenberg_closure_escapes_cutoff() {
    let h = Instance::heisenberg(3).unwrap();
    let f0 = h.adjoint();
    let ctx = PairCtx::new(h.voa.clone(), f0.clone(), f0.clone(), ParamScalar::var()).unwrap();
    let lam = DualFunctional::canonical(&ctx, f0.find("1").unwrap()).unwrap();
    match closure_wlambda(Flavor::P, &lam, &h.voa.spanning(2), 3) {
        Err(Error::CutoffExceeded(msg)) => assert!(msg.contains("> 3"), "{msg}"),
        other => panic!("expected CutoffExceeded, got {other:?}"),
    }
}
