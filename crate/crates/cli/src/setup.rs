//! Instances, functionals and check contexts built from command-line options.

use std::sync::Arc;

use voa_tensor::dual::functional::LambdaSpec;
use voa_tensor::dual::properties::PropertyContext;
use voa_tensor::dual::{DualFunctional, Flavor, PairCtx};
use voa_tensor::instances::Instance;
use voa_tensor::vector::BasisId;
use voa_tensor::{Error, ParamScalar, Result};

pub type Ctx = Arc<PairCtx<ParamScalar>>;

/// Window defaults that depend on the kind of instance.
pub struct Plan {
    pub inst: Instance,
    pub gens: Vec<BasisId>,
    pub jacobi_gens: Vec<BasisId>,
    pub pair_bound: i64,
    pub depth: i64,
    pub modules: (String, String),
}

impl Plan {
    pub fn new(inst: Instance, modules: Option<(String, String)>) -> Result<Plan> {
        if inst.is_commalg() {
            let gens = inst.voa.spanning(0);
            let modules = modules.unwrap_or_else(|| ("regular".into(), "regular".into()));
            return Ok(Plan { inst, jacobi_gens: gens.clone(), gens, pair_bound: 0, depth: 2, modules });
        }
        let first = inst.modules.first().map(|(n, _)| n.clone()).ok_or_else(|| Error::Config(format!("instance {} has no modules", inst.name)))?;
        let modules = modules.unwrap_or_else(|| (first.clone(), first));
        let bound = inst.cutoff.min(2);
        Ok(Plan {
            gens: inst.voa.spanning(bound),
            jacobi_gens: inst.voa.spanning(bound.min(1)),
            pair_bound: bound,
            depth: inst.cutoff,
            modules,
            inst,
        })
    }

    pub fn ctx(&self) -> Result<Ctx> {
        let w1 = self.inst.module(&self.modules.0)?;
        let w2 = self.inst.module(&self.modules.1)?;
        PairCtx::new(self.inst.voa.clone(), w1, w2, ParamScalar::var())
    }

    /// `balanced:seed=<seed>` on commutative algebras, the canonical
    /// functional at the lowest basis vector otherwise.
    pub fn default_lambda(&self, ctx: &Ctx, seed: u64) -> LambdaSpec {
        if self.inst.is_commalg() {
            LambdaSpec::Balanced { seed }
        } else {
            LambdaSpec::Canonical { w_prime: ctx.w2.basis_name(0) }
        }
    }

    pub fn lambda(&self, ctx: &Ctx, spec: &LambdaSpec) -> Result<DualFunctional<ParamScalar>> {
        spec.build(ctx, self.pair_bound)
    }

    pub fn property_context(&self, ctx: &Ctx, lambda: DualFunctional<ParamScalar>, radius: i64) -> PropertyContext<ParamScalar> {
        PropertyContext {
            ctx: ctx.clone(),
            lambdas: vec![lambda],
            gens: self.gens.clone(),
            jacobi_gens: self.jacobi_gens.clone(),
            pair_bound: self.pair_bound,
            radius,
            cutoff: self.depth,
        }
    }
}

pub fn flavors(s: &str) -> Result<Vec<Flavor>> {
    match s {
        "both" => Ok(vec![Flavor::P, Flavor::Q]),
        f => Ok(vec![Flavor::parse(f)?]),
    }
}

pub fn parse_modules(list: &[String]) -> Result<Option<(String, String)>> {
    match list {
        [] => Ok(None),
        [a, b] => Ok(Some((a.clone(), b.clone()))),
        _ => Err(Error::Config(format!("expected two module names, got {}", list.len()))),
    }
}
