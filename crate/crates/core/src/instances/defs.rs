//! Definition files for algebras and modules.
//!
//! A definition is a JSON document listing basis vectors with weights and
//! group degrees, sparse mode triples `(u, n, v) -> vector`, and the sparse
//! Möbius operators. Rationals are written `"p/q"`; vectors are maps from
//! basis names to rationals.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::commalg::{CommAlgebra, CommModule};
use super::table::{BasisVector, TableModule};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::vertex::{GradedSpace, RVec, VModule, Voa};

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDef {
    pub name: String,
    #[serde(default)]
    pub weight: i64,
    #[serde(default)]
    pub degree: i64,
}

pub type VecDef = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDef {
    pub u: String,
    pub n: i64,
    pub v: String,
    pub result: VecDef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirasoroDef {
    pub j: i64,
    pub v: String,
    pub result: VecDef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDef {
    pub name: String,
    #[serde(default)]
    pub cutoff: i64,
    /// Whether the listed basis spans the whole space.
    #[serde(default)]
    pub complete: bool,
    pub basis: Vec<BasisDef>,
    #[serde(default)]
    pub components: Vec<ComponentDef>,
    #[serde(default)]
    pub virasoro: Vec<VirasoroDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DefFile {
    #[serde(default = "one")]
    pub degree_modulus: i64,
    pub algebra: SpaceDef,
    pub vacuum: VecDef,
    #[serde(default)]
    pub central_charge: Option<String>,
    #[serde(default)]
    pub modules: Vec<SpaceDef>,
}

fn parse_vec(d: &VecDef, space: &dyn GradedSpace) -> Result<RVec> {
    let mut out = RVec::new();
    for (k, v) in d {
        let b = space.find(k).ok_or_else(|| Error::Parse(format!("unknown basis vector {k} in {}", space.label())))?;
        out.add_scaled(&RVec::basis(b), &parse_rational(v)?);
    }
    Ok(out)
}

fn write_vec(v: &RVec, space: &dyn GradedSpace) -> VecDef {
    v.entries().iter().map(|(b, c)| (space.basis_name(*b), format_rational(c))).collect()
}

fn build_table(d: &SpaceDef, modulus: i64, alg: Option<(&TableModule, &[i64])>) -> Result<TableModule> {
    let basis: Vec<BasisVector> =
        d.basis.iter().map(|b| BasisVector { name: b.name.clone(), weight: b.weight, degree: b.degree }).collect();
    let alg_weights: Vec<i64> = match alg {
        Some((_, w)) => w.to_vec(),
        None => basis.iter().map(|b| b.weight).collect(),
    };
    let mut t = TableModule::new(d.name.clone(), basis, modulus, d.cutoff, alg_weights)?;
    t.complete = d.complete;
    for c in &d.components {
        let u = match alg {
            Some((a, _)) => a.find(&c.u),
            None => t.find(&c.u),
        }
        .ok_or_else(|| Error::Parse(format!("unknown algebra vector {}", c.u)))?;
        let v = t.find(&c.v).ok_or_else(|| Error::Parse(format!("unknown vector {}", c.v)))?;
        let r = parse_vec(&c.result, &t)?;
        t.set_component(u, c.n, v, r);
    }
    for c in &d.virasoro {
        let v = t.find(&c.v).ok_or_else(|| Error::Parse(format!("unknown vector {}", c.v)))?;
        let r = parse_vec(&c.result, &t)?;
        t.set_virasoro(c.j, v, r);
    }
    Ok(t)
}

/// An algebra loaded from a definition, with its modules.
pub struct Loaded {
    pub voa: Arc<Voa>,
    pub algebra_table: Arc<TableModule>,
    pub modules: Vec<Arc<TableModule>>,
}

impl DefFile {
    pub fn parse(text: &str) -> Result<DefFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("definition serializes")
    }

    pub fn build(&self) -> Result<Loaded> {
        let alg = build_table(&self.algebra, self.degree_modulus, None)?;
        let weights: Vec<i64> = alg.basis.iter().map(|b| b.weight).collect();
        let vacuum = parse_vec(&self.vacuum, &alg)?;
        let modules = self
            .modules
            .iter()
            .map(|m| build_table(m, self.degree_modulus, Some((&alg, &weights))).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let algebra_table = Arc::new(alg);
        let central_charge = self.central_charge.as_deref().map(parse_rational).transpose()?;
        let voa = Arc::new(Voa {
            name: self.algebra.name.clone(),
            adjoint: algebra_table.clone(),
            vacuum,
            central_charge,
        });
        Ok(Loaded { voa, algebra_table, modules })
    }

    /// Recovers a commutative algebra when the definition has weight zero
    /// throughout and only `(-1)`-modes.
    pub fn as_commalg(&self) -> Result<(CommAlgebra, Vec<CommModule>)> {
        let loaded = self.build()?;
        let spaces = std::iter::once(&self.algebra).chain(&self.modules);
        for s in spaces {
            if s.basis.iter().any(|b| b.weight != 0) || s.components.iter().any(|c| c.n != -1) {
                return Err(Error::UnsupportedInstance(format!("{} is not a commutative-algebra definition", s.name)));
            }
        }
        let t = &loaded.algebra_table;
        let d = t.dim();
        let mult = (0..d as u32)
            .map(|i| (0..d as u32).map(|j| t.act(i, -1, j).map(|r| (*r).clone())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let alg = CommAlgebra::new(
            &self.algebra.name,
            t.basis.iter().map(|b| b.name.clone()).collect(),
            mult,
            t.basis.iter().map(|b| b.degree).collect(),
            self.degree_modulus,
        )?;
        let mods = loaded
            .modules
            .iter()
            .map(|m| {
                let action = (0..d as u32).map(|u| m.mode_matrix(u, -1)).collect();
                alg.module(&m.label, m.basis.iter().map(|b| b.name.clone()).collect(), m.basis.iter().map(|b| b.degree).collect(), action)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((alg, mods))
    }
}

/// Serializes a table module, with algebra names resolved through `alg`.
pub fn space_def(t: &TableModule, alg: &dyn GradedSpace) -> SpaceDef {
    let mut components: Vec<ComponentDef> = t
        .components
        .iter()
        .map(|((u, n, v), r)| ComponentDef {
            u: alg.basis_name(*u),
            n: *n,
            v: t.basis_name(*v),
            result: write_vec(r, t),
        })
        .collect();
    components.sort_by(|a, b| (&a.u, a.n, &a.v).cmp(&(&b.u, b.n, &b.v)));
    let mut virasoro: Vec<VirasoroDef> = t
        .virasoro
        .iter()
        .map(|((j, v), r)| VirasoroDef { j: *j, v: t.basis_name(*v), result: write_vec(r, t) })
        .collect();
    virasoro.sort_by(|a, b| (a.j, &a.v).cmp(&(b.j, &b.v)));
    SpaceDef {
        name: t.label.clone(),
        cutoff: t.cutoff,
        complete: t.complete,
        basis: t.basis.iter().map(|b| BasisDef { name: b.name.clone(), weight: b.weight, degree: b.degree }).collect(),
        components,
        virasoro,
    }
}

/// Definition of a commutative algebra and some of its modules.
pub fn commalg_def(alg: &CommAlgebra, modules: &[CommModule]) -> Result<DefFile> {
    let reg = alg.regular_module().table(alg)?;
    let mut algebra = space_def(&reg, &reg);
    algebra.name = alg.name.clone();
    let modules = modules.iter().map(|m| m.table(alg).map(|t| space_def(&t, &reg))).collect::<Result<Vec<_>>>()?;
    Ok(DefFile {
        degree_modulus: alg.modulus,
        algebra,
        vacuum: write_vec(&alg.unit, &reg),
        central_charge: Some("0".into()),
        modules,
    })
}

/// Vector from a `name -> "p/q"` map.
pub fn vector_from_def(d: &VecDef, space: &dyn GradedSpace) -> Result<RVec> {
    parse_vec(d, space)
}

pub fn vector_to_def(v: &RVec, space: &dyn GradedSpace) -> VecDef {
    write_vec(v, space)
}

