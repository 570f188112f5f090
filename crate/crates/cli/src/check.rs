//! `check`: the identity suite and the property table.

use voa_tensor::dual::functional::LambdaSpec;
use voa_tensor::dual::properties::{anchor, verify_property, PROPERTIES};
use voa_tensor::dual::report::PropertyReport;
use voa_tensor::lemmas::{self, SuiteRadii, DELTA_ANCHORS, DELTA_SUITE};
use voa_tensor::{Error, ParamScalar, Result, ZParam};

use crate::report::Entry;
use crate::setup::Plan;

/// Property window radius when `--window` is absent.
pub const DEFAULT_RADIUS: i64 = 4;

pub fn delta_id(name: &str) -> String {
    format!("DELTA:{name}")
}

pub fn run_delta(plan: &Plan, window: Option<i64>) -> Result<Vec<Entry>> {
    let radii = window.map(SuiteRadii::uniform).unwrap_or_default();
    let zp = ZParam::new(ParamScalar::var())?;
    let voa = &plan.inst.voa;
    let reps = lemmas::delta_suite(voa, &plan.gens, radii, &zp);
    Ok(reps
        .iter()
        .zip(DELTA_SUITE.iter().zip(DELTA_ANCHORS))
        .map(|(r, (name, anchor))| Entry::new(PropertyReport::from_identity(&delta_id(name), anchor, &voa.name, r)))
        .collect())
}

/// Ids of the property table that make sense on the instance.
pub fn applicable(plan: &Plan) -> Vec<&'static str> {
    PROPERTIES
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| plan.inst.is_commalg() || !id.starts_with("COMMALG-"))
        .collect()
}

/// Runs `suite` (`delta` or `all`) together with the listed ids.
pub fn run_check(plan: &Plan, suite: Option<&str>, ids: &[String], lambda: &LambdaSpec, window: Option<i64>) -> Result<Vec<Entry>> {
    let mut delta: Vec<String> = Vec::new();
    let mut props: Vec<String> = Vec::new();
    match suite {
        None => {}
        Some("delta") => delta.extend(DELTA_SUITE.iter().map(|n| delta_id(n))),
        Some("all") => {
            delta.extend(DELTA_SUITE.iter().map(|n| delta_id(n)));
            props.extend(applicable(plan).into_iter().map(String::from));
        }
        Some(other) => return Err(Error::Config(format!("unknown suite {other} (expected delta or all)"))),
    }
    for id in ids {
        if id.starts_with("DELTA:") {
            if !DELTA_SUITE.iter().any(|n| delta_id(n) == *id) {
                return Err(Error::UnknownProperty(id.clone()));
            }
            delta.push(id.clone());
        } else {
            anchor(id)?;
            if !applicable(plan).contains(&id.as_str()) {
                return Err(Error::Config(format!("{id} needs a commutative-algebra instance, got {}", plan.inst.name)));
            }
            props.push(id.clone());
        }
    }
    if delta.is_empty() && props.is_empty() {
        return Err(Error::Config("nothing to check: pass --suite or --property".into()));
    }
    delta.sort();
    delta.dedup();
    props.sort();
    props.dedup();
    let mut out = Vec::new();
    if !delta.is_empty() {
        out.extend(run_delta(plan, window)?.into_iter().filter(|e| delta.contains(&e.report.id)));
    }
    if !props.is_empty() {
        let ctx = plan.ctx()?;
        let f = plan.lambda(&ctx, lambda)?;
        let pc = plan.property_context(&ctx, f, window.unwrap_or(DEFAULT_RADIUS));
        for id in &props {
            out.push(Entry::new(verify_property(id, &pc)?));
        }
    }
    Ok(out)
}
