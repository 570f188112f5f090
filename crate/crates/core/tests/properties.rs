use std::sync::Arc;

use voa_tensor::dual::properties::{verify_property, PropertyContext, PROPERTIES};
use voa_tensor::dual::report::Status;
use voa_tensor::dual::{DualFunctional, PairCtx};
use voa_tensor::instances::Instance;
use voa_tensor::{Error, ParamScalar};

fn heis_pc(radius: i64) -> PropertyContext<ParamScalar> {
    let h = Instance::heisenberg(4).unwrap();
    let f0 = h.adjoint();
    let ctx = PairCtx::new(h.voa.clone(), f0.clone(), f0.clone(), ParamScalar::var()).unwrap();
    let vac = f0.find("1").unwrap();
    let lambdas = vec![DualFunctional::canonical(&ctx, vac).unwrap()];
    PropertyContext { ctx: Arc::clone(&ctx), lambdas, gens: h.voa.spanning(2), jacobi_gens: h.voa.spanning(1), pair_bound: 2, radius, cutoff: 4 }
}

fn commalg_pc(name: &str, m1: &str, m2: &str, lambda: impl Fn(&Arc<PairCtx<ParamScalar>>) -> DualFunctional<ParamScalar>) -> PropertyContext<ParamScalar> {
    let inst = Instance::commalg(name).unwrap();
    let ctx = PairCtx::new(inst.voa.clone(), inst.module(m1).unwrap(), inst.module(m2).unwrap(), ParamScalar::var()).unwrap();
    let gens = inst.voa.spanning(0);
    PropertyContext { ctx: ctx.clone(), lambdas: vec![lambda(&ctx)], gens: gens.clone(), jacobi_gens: gens, pair_bound: 0, radius: 3, cutoff: 2 }
}

fn status(id: &str, pc: &PropertyContext<ParamScalar>) -> Status {
    let rep = verify_property(id, pc).unwrap();
    assert!(rep.status != Status::Fail && rep.status != Status::Error, "{rep:?}");
    rep.status
}

#[test]
fn every_law_passes_on_heisenberg_with_canonical_lambda() {
    let pc = heis_pc(2);
    for (id, _) in PROPERTIES {
        if *id == "COMMALG-JACOBI-ALWAYS" {
            continue;
        }
        let s = status(id, &pc);
        let q_on_p_lambda = matches!(*id, "Q-JACOBI-ON-COMPAT" | "Q-STABLE");
        assert_eq!(s == Status::Pass, !q_on_p_lambda, "{id}");
    }
}

#[test]
fn canonical_lambda_is_not_q_compatible() {
    let rep = verify_property("Q-STABLE", &heis_pc(2)).unwrap();
    assert_eq!(rep.status, Status::PreconditionUnmet);
    assert!(!rep.witnesses.is_empty());
    assert!(!rep.pass);
}

#[test]
fn p_comm_on_radius_four() {
    let rep = verify_property("P-COMM", &heis_pc(4)).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.checked > 0);
}

#[test]
fn jacobi_on_radius_three() {
    let rep = verify_property("P-JACOBI-ON-COMPAT", &heis_pc(3)).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.checked, 7 * 7 * 7 * 2 * 2 * pairs_upto_two());
}

fn pairs_upto_two() -> usize {
    heis_pc(1).ctx.pairs_upto(2).len()
}

#[test]
fn balanced_lambda_passes_both_flavors_on_a2() {
    let pc = commalg_pc("a2", "regular", "regular", |c| DualFunctional::balanced(c, 7).unwrap());
    for (id, _) in PROPERTIES {
        assert_eq!(status(id, &pc), Status::Pass, "{id}");
    }
}

#[test]
fn unbalanced_lambda_on_a2() {
    let pc = commalg_pc("a2", "regular", "regular", |c| DualFunctional::random(c, 3, 0));
    assert_eq!(status("COMMALG-JACOBI-ALWAYS", &pc), Status::Pass);
    assert_eq!(status("P-JACOBI-ON-COMPAT", &pc), Status::PreconditionUnmet);
    assert_eq!(status("Q-JACOBI-ON-COMPAT", &pc), Status::PreconditionUnmet);
}

#[test]
fn commalg_jacobi_rejects_graded_algebras() {
    let rep = verify_property("COMMALG-JACOBI-ALWAYS", &heis_pc(1)).unwrap();
    assert_eq!(rep.status, Status::Error);
}

#[test]
fn unknown_id_is_an_error() {
    assert!(matches!(verify_property("P-NOPE", &heis_pc(1)), Err(Error::UnknownProperty(_))));
}
