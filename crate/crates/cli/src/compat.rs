//! `compat`: compatibility, Jacobi and grading restriction for one functional.

use serde_json::{json, Value};
use voa_tensor::dual::closure::closure_wlambda;
use voa_tensor::dual::compat::{check_compat, CompatWindow};
use voa_tensor::dual::functional::LambdaFile;
use voa_tensor::dual::properties::verify_property;
use voa_tensor::dual::report::{PropertyReport, Witness};
use voa_tensor::dual::{DualFunctional, Flavor};
use voa_tensor::{Error, ParamScalar, Result};

use crate::report::Entry;
use crate::setup::Plan;

/// Recorded values of `λ` on the tested pairs, for replay.
pub fn lambda_values(f: &DualFunctional<ParamScalar>) -> Value {
    match LambdaFile::from_functional(f) {
        Some(file) => serde_json::to_value(file).expect("λ file serializes"),
        None => Value::Null,
    }
}

pub fn run_compat(plan: &Plan, lambda: &DualFunctional<ParamScalar>, flavors: &[Flavor], radius: i64) -> Result<Vec<Entry>> {
    let ctx = lambda.ctx().clone();
    let pc = plan.property_context(&ctx, lambda.clone(), radius);
    let win = CompatWindow { gens: plan.gens.clone(), pair_bound: plan.pair_bound, radius };
    let mut out = Vec::new();
    for &flavor in flavors {
        out.push(Entry::new(check_compat(flavor, lambda, &win)).with("lambda", lambda_values(lambda)));
        out.push(Entry::new(verify_property(&format!("{flavor}-JACOBI-ON-COMPAT"), &pc)?));
        out.push(grading(plan, lambda, flavor)?);
    }
    Ok(out)
}

fn grading(plan: &Plan, lambda: &DualFunctional<ParamScalar>, flavor: Flavor) -> Result<Entry> {
    let cutoff = plan.inst.cutoff;
    let rep = PropertyReport::new(
        &format!("{flavor}-GRADING"),
        "local grading restriction",
        format!("{} λ={}", lambda.ctx().describe(), lambda.label()),
        format!("weights<={cutoff}"),
    );
    match closure_wlambda(flavor, lambda, &plan.gens, cutoff) {
        Ok(c) => {
            let dims: Vec<Value> = c.dims.iter().map(|((mu, beta), n)| json!({"weight": mu, "degree": beta, "dim": n})).collect();
            let mut e = Entry::new(rep).with("closureDim", json!(c.dim())).with("closureDims", Value::Array(dims));
            e.details.push(format!("W_λ has dimension {}", c.dim()));
            for ((mu, beta), n) in &c.dims {
                e.details.push(format!("weight {mu} degree {beta}: {n}"));
            }
            Ok(e)
        }
        Err(Error::CutoffExceeded(msg)) => {
            let w = Witness { exps: Vec::new(), at: "closure".into(), lhs: msg.clone(), rhs: String::new() };
            Ok(Entry::new(rep.precondition_unmet(format!("W_λ leaves the cutoff: {msg}"), w)))
        }
        Err(e) => Ok(Entry::new(rep.error(&e))),
    }
}
