//! `fuse`: tensor products over commutative algebras against the oracle.

use serde_json::{json, Value};
use voa_tensor::dual::report::PropertyReport;
use voa_tensor::dual::Flavor;
use voa_tensor::instances::Instance;
use voa_tensor::linalg::Matrix;
use voa_tensor::scalar::format_rational;
use voa_tensor::tensor::{algebra_tensor_oracle, canonical_isomorphism, find_isomorphism, tensor_product, universal_check, Candidate, FusionInput};
use voa_tensor::Result;

use crate::report::Entry;

const ANCHOR: &str = "tensor1-13.7: \"its contragredient module\"";

fn render(m: &Matrix) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|x| Value::String(format_rational(x))).collect())).collect())
}

fn render_text(m: &Matrix) -> String {
    let rows: Vec<String> = m.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

pub fn run_fuse(inst: &Instance, m1: &str, m2: &str, flavors: &[Flavor], seed: u64) -> Result<Vec<Entry>> {
    let input = FusionInput::from_instance(inst, m1, m2)?;
    let oracle = algebra_tensor_oracle(&input);
    let mut out = Vec::new();
    for &flavor in flavors {
        let res = tensor_product(&input, flavor)?;
        let mut rep = PropertyReport::new(
            &format!("FUSE-{flavor}"),
            ANCHOR,
            format!("{} {m1}⊗{m2}", input.alg.name),
            res.subspace.compat_window.clone(),
        );
        rep.checked = 1;
        let (dual_dim, box_dim, oracle_dim) = (res.subspace.dim(), res.dim(), oracle.dim());
        let iso = canonical_isomorphism(&res, &oracle).or_else(|| find_isomorphism(&res.module.action, &oracle.action, seed));
        if dual_dim != oracle_dim || box_dim != oracle_dim {
            rep.fail(&[], "dimension".into(), box_dim.to_string(), oracle_dim.to_string());
        } else if iso.is_none() {
            rep.fail(&[], "isomorphism".into(), "no module isomorphism found".into(), String::new());
        }
        if !res.subspace.verified {
            rep.fail(&[], "compatibility".into(), res.subspace.note.clone().unwrap_or_default(), String::new());
        }
        let universal = universal_check(&Candidate::of_result(&res), &res);
        if let Err(e) = &universal {
            rep.fail(&[], "universal property".into(), e.to_string(), String::new());
        }
        let names = &input.alg.names;
        let action: serde_json::Map<String, Value> = names.iter().zip(&res.module.action).map(|(n, m)| (n.clone(), render(m))).collect();
        let mut e = Entry::new(rep)
            .with("dimCompatible", json!(dual_dim))
            .with("dimTensor", json!(box_dim))
            .with("oracleDim", json!(oracle_dim))
            .with("isomorphic", json!(iso.is_some()))
            .with("isomorphism", iso.as_ref().map(render).unwrap_or(Value::Null))
            .with("action", Value::Object(action));
        e.details.push(format!(
            "dim {box_dim}, oracle {oracle_dim}, isomorphic: {} (⧅ {dual_dim}, ⊠ {box_dim})",
            if iso.is_some() { "yes" } else { "no" }
        ));
        for (n, m) in names.iter().zip(&res.module.action) {
            e.details.push(format!("{n} acts by {}", render_text(m)));
        }
        if let Some(t) = &iso {
            e.details.push(format!("isomorphism {}", render_text(t)));
        }
        out.push(e);
    }
    Ok(out)
}
