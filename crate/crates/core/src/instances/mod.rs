//! Concrete algebras and modules: commutative-algebra vertex algebras and
//! the Heisenberg Fock space, plus definition files.

pub mod commalg;
pub mod defs;
pub mod fock;
pub mod table;

use std::sync::Arc;

pub use commalg::{CommAlgebra, CommModule};
pub use defs::DefFile;
pub use fock::Fock;
pub use table::{BasisVector, TableModule};

use crate::error::{Error, Result};
use crate::vertex::{VModule, Voa};

/// An algebra together with named modules.
#[derive(Clone)]
pub struct Instance {
    pub name: String,
    pub voa: Arc<Voa>,
    pub modules: Vec<(String, Arc<dyn VModule>)>,
    /// Present for commutative-algebra instances.
    pub commalg: Option<(CommAlgebra, Vec<CommModule>)>,
    pub cutoff: i64,
}

impl Instance {
    /// Heisenberg algebra with `F₀` as its only module.
    pub fn heisenberg(cutoff: i64) -> Result<Instance> {
        if cutoff < 2 {
            return Err(Error::Config(format!("Heisenberg cutoff must be at least 2, got {cutoff}")));
        }
        let voa = Fock::voa(cutoff);
        let f0 = voa.adjoint.clone();
        Ok(Instance { name: "heisenberg".into(), voa, modules: vec![("F0".into(), f0)], commalg: None, cutoff })
    }

    pub fn from_commalg(alg: CommAlgebra, mods: Vec<CommModule>) -> Result<Instance> {
        let voa = alg.voa()?;
        let mut modules = Vec::new();
        for m in &mods {
            modules.push((m.label.clone(), m.vmodule(&alg)? as Arc<dyn VModule>));
        }
        Ok(Instance { name: alg.name.clone(), voa, modules, commalg: Some((alg, mods)), cutoff: 0 })
    }

    /// A built-in commutative algebra with all of its shipped modules.
    pub fn commalg(name: &str) -> Result<Instance> {
        let alg = CommAlgebra::builtin(name)?;
        let names = alg.builtin_module_names();
        let mods = names.iter().map(|m| alg.builtin_module(m)).collect::<Result<Vec<_>>>()?;
        let mut inst = Self::from_commalg(alg, mods)?;
        for ((n, _), short) in inst.modules.iter_mut().zip(names) {
            *n = short.to_string();
        }
        Ok(inst)
    }

    pub fn from_def(def: &DefFile) -> Result<Instance> {
        if let Ok((alg, mods)) = def.as_commalg() {
            return Self::from_commalg(alg, mods);
        }
        let loaded = def.build()?;
        let modules = loaded.modules.iter().map(|m| (m.label.clone(), m.clone() as Arc<dyn VModule>)).collect();
        Ok(Instance {
            name: def.algebra.name.clone(),
            voa: loaded.voa,
            modules,
            commalg: None,
            cutoff: def.algebra.cutoff,
        })
    }

    /// Built-in name (`heisenberg`, `a2`, `z2`, `qxq`, `q`) or a path to a
    /// definition file.
    pub fn load(spec: &str, cutoff: i64) -> Result<Instance> {
        match spec {
            "heisenberg" => Self::heisenberg(cutoff),
            "a2" | "z2" | "qxq" | "q" => Self::commalg(spec),
            path => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read instance file {path}: {e}")))?;
                Self::from_def(&DefFile::parse(&text)?)
            }
        }
    }

    pub fn module(&self, name: &str) -> Result<Arc<dyn VModule>> {
        self.modules
            .iter()
            .find(|(n, _)| n == name || n.ends_with(&format!("-{name}")))
            .map(|(_, m)| m.clone())
            .ok_or_else(|| Error::Config(format!("instance {} has no module {name}", self.name)))
    }

    /// The algebra viewed as a module over itself.
    pub fn adjoint(&self) -> Arc<dyn VModule> {
        self.voa.adjoint.clone()
    }

    pub fn is_commalg(&self) -> bool {
        self.commalg.is_some()
    }
}
