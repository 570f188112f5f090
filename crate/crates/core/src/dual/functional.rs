//! Elements of `(W₁ ⊗ W₂)*`, evaluated lazily on basis pairs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DualOp, PairCtx, TensorVec};
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::linalg::nullspace;
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::vector::BasisId;
use crate::vertex::Deg;
use crate::{ParamScalar, Rational};

enum Source<S: Scalar> {
    /// Finitely many nonzero values.
    Sparse(BTreeMap<(BasisId, BasisId), S>),
    /// `λ(v ⊗ w) = ⟨w′, Y_W(v, z) w⟩` on `V ⊗ W`.
    Canonical { w_prime: BasisId },
    /// `A₁⋯Aₖ λ` with the operators listed outermost first.
    Applied { ops: Vec<DualOp<S>>, base: DualFunctional<S> },
    Sum(Vec<(S, DualFunctional<S>)>),
    /// Restriction to the pairs of degree `-β`.
    Projected { beta: Deg, base: DualFunctional<S> },
}

struct Inner<S: Scalar> {
    ctx: Arc<PairCtx<S>>,
    source: Source<S>,
    depth: i64,
    label: String,
    memo: Mutex<HashMap<(BasisId, BasisId), S>>,
}

/// A linear functional on `W₁ ⊗ W₂`.
///
/// The declared depth `D` is the support bound of a sparse functional, the
/// weight of `w′` for a canonical one and is propagated through operators.
/// For a functional in a lower-truncated module, `Y′(v)_p λ = 0` when
/// `p < -D - wt v`.
#[derive(Clone)]
pub struct DualFunctional<S: Scalar> {
    inner: Arc<Inner<S>>,
}

impl<S: Scalar> fmt::Debug for DualFunctional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ[{}; depth {}]", self.inner.label, self.inner.depth)
    }
}

impl<S: Scalar> DualFunctional<S> {
    fn make(ctx: Arc<PairCtx<S>>, source: Source<S>, depth: i64, label: String) -> Self {
        DualFunctional { inner: Arc::new(Inner { ctx, source, depth, label, memo: Mutex::new(HashMap::new()) }) }
    }

    pub fn zero(ctx: &Arc<PairCtx<S>>) -> Self {
        Self::make(ctx.clone(), Source::Sparse(BTreeMap::new()), 0, "0".into())
    }

    /// A finitely supported functional. The depth is the largest total
    /// weight carrying a nonzero value.
    pub fn sparse(ctx: &Arc<PairCtx<S>>, values: impl IntoIterator<Item = ((BasisId, BasisId), S)>, label: &str) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in values {
            if !v.is_zero() {
                map.insert(k, v);
            }
        }
        let depth = map.keys().map(|(a, b)| ctx.w1.weight(*a) + ctx.w2.weight(*b)).max().unwrap_or(0);
        Self::make(ctx.clone(), Source::Sparse(map), depth, label.into())
    }

    /// `λ = w′ ∘ Y_W(·, z)·` on `V ⊗ W`, where `W₁` must be the adjoint module.
    pub fn canonical(ctx: &Arc<PairCtx<S>>, w_prime: BasisId) -> Result<Self> {
        if ctx.w1.label() != ctx.voa.adjoint.label() {
            return Err(Error::Config(format!(
                "canonical functional needs W₁ = {}, got {}",
                ctx.voa.adjoint.label(),
                ctx.w1.label()
            )));
        }
        let depth = ctx.w2.weight(w_prime);
        let label = format!("canonical:w'={}", ctx.w2.basis_name(w_prime));
        Ok(Self::make(ctx.clone(), Source::Canonical { w_prime }, depth, label))
    }

    /// Random rational values on all pairs of total weight at most `bound`,
    /// numerators in `[-5, 5]` and denominators in `[1, 4]`.
    pub fn random(ctx: &Arc<PairCtx<S>>, seed: u64, bound: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<_> = ctx
            .pairs_upto(bound)
            .into_iter()
            .map(|k| {
                let n: i64 = rng.gen_range(-5..=5);
                let d: i64 = rng.gen_range(1..=4);
                (k, S::from_rational(&Rational::new(n.into(), d.into())))
            })
            .collect();
        let mut f = Self::sparse(ctx, values, &format!("random:seed={seed}"));
        Arc::get_mut(&mut f.inner).expect("fresh").depth = bound;
        f
    }

    /// A random element of the balanced subspace
    /// `{λ : λ(v_{-1}a ⊗ b) = λ(a ⊗ v_{-1}b)}` for weight-zero data.
    pub fn balanced(ctx: &Arc<PairCtx<S>>, seed: u64) -> Result<Self> {
        let basis = balanced_basis(ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = ctx.pairs_upto(0);
        let mut values: Vec<Rational> = vec![Rational::from_integer(0.into()); pairs.len()];
        for b in &basis {
            let c = Rational::from_integer(rng.gen_range(1..=5).into());
            for (x, y) in values.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        let vals = pairs.into_iter().zip(values).map(|(k, v)| (k, S::from_rational(&v)));
        Ok(Self::sparse(ctx, vals, &format!("balanced:seed={seed}")))
    }

    pub fn ctx(&self) -> &Arc<PairCtx<S>> {
        &self.inner.ctx
    }

    pub fn depth(&self) -> i64 {
        self.inner.depth
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn with_label(&self, label: &str) -> Self {
        match &self.inner.source {
            Source::Sparse(m) => Self::make(self.ctx().clone(), Source::Sparse(m.clone()), self.depth(), label.into()),
            _ => Self::make(
                self.ctx().clone(),
                Source::Sum(vec![(S::one(), self.clone())]),
                self.depth(),
                label.into(),
            ),
        }
    }

    /// Nonzero values of a sparse functional.
    pub fn sparse_values(&self) -> Option<&BTreeMap<(BasisId, BasisId), S>> {
        match &self.inner.source {
            Source::Sparse(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_sparse(&self) -> bool {
        self.sparse_values().is_some()
    }

    /// `λ(a ⊗ b)` on a basis pair.
    pub fn eval(&self, a: BasisId, b: BasisId) -> Result<S> {
        if let Some(v) = self.inner.memo.lock().expect("memo").get(&(a, b)) {
            return Ok(v.clone());
        }
        let ctx = &self.inner.ctx;
        let v = match &self.inner.source {
            Source::Sparse(m) => return Ok(m.get(&(a, b)).cloned().unwrap_or_else(S::zero)),
            Source::Canonical { w_prime } => {
                let n = ctx.w1.weight(a) + ctx.w2.weight(b) - 1 - ctx.w2.weight(*w_prime);
                let c = ctx.w2.act(a, n, b)?.get(*w_prime);
                S::from_rational(&c).rmul(&ctx.zp.pow(-n - 1))
            }
            Source::Applied { ops, base } => base.eval_tensor(&ctx.sigma_word(ops, &TensorVec::pair(a, b))?)?,
            Source::Sum(parts) => {
                let mut acc = S::zero();
                for (c, f) in parts {
                    acc.add_mul(c, &f.eval(a, b)?);
                }
                acc
            }
            Source::Projected { beta, base } => {
                if ctx.pair_degree(a, b) == ctx.w1.reduce_degree(-beta) {
                    base.eval(a, b)?
                } else {
                    S::zero()
                }
            }
        };
        self.inner.memo.lock().expect("memo").insert((a, b), v.clone());
        Ok(v)
    }

    /// `λ(t)` for a finite tensor.
    pub fn eval_tensor(&self, t: &TensorVec<S>) -> Result<S> {
        let mut acc = S::zero();
        for ((a, b), c) in t.terms() {
            let v = self.eval(*a, *b)?;
            acc.add_mul(c, &v);
        }
        Ok(acc)
    }

    /// `A λ`.
    pub fn apply(&self, op: &DualOp<S>) -> Self {
        self.apply_word(std::slice::from_ref(op))
    }

    /// `A₁⋯Aₖ λ` with the word listed outermost first.
    pub fn apply_word(&self, ops: &[DualOp<S>]) -> Self {
        let voa = &self.inner.ctx.voa;
        let shift: i64 = ops.iter().map(|o| o.depth_shift(voa).unwrap_or(0)).sum();
        let label = format!(
            "{} {}",
            ops.iter().map(|o| o.describe(voa)).collect::<Vec<_>>().join(" "),
            self.inner.label
        );
        // (A₁⋯Aₖ μ)(w) = μ(σ_{Aₖ}⋯σ_{A₁} w): the outermost adjoint acts first
        let (base, word) = match &self.inner.source {
            Source::Applied { ops: inner, base } => {
                let mut all = ops.to_vec();
                all.extend(inner.iter().cloned());
                (base.clone(), all)
            }
            _ => (self.clone(), ops.to_vec()),
        };
        Self::make(self.inner.ctx.clone(), Source::Applied { ops: word, base }, self.depth() + shift, label)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::make(self.ctx().clone(), Source::Sum(vec![(c.clone(), self.clone())]), self.depth(), format!("({c})·{}", self.label()))
    }

    /// `Σ cᵢ λᵢ` over a common context.
    pub fn sum(ctx: &Arc<PairCtx<S>>, parts: Vec<(S, DualFunctional<S>)>) -> Self {
        let depth = parts.iter().map(|(_, f)| f.depth()).max().unwrap_or(0);
        let label = parts.iter().map(|(c, f)| format!("({c})·{}", f.label())).collect::<Vec<_>>().join(" + ");
        Self::make(ctx.clone(), Source::Sum(parts), depth, label)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::sum(self.ctx(), vec![(S::one(), self.clone()), (S::one().rneg(), o.clone())])
    }

    /// The `Ã`-homogeneous component of degree `β`, supported on pairs of
    /// degree `-β`.
    pub fn project_beta(&self, beta: Deg) -> Self {
        let label = format!("π_{beta} {}", self.label());
        Self::make(self.ctx().clone(), Source::Projected { beta, base: self.clone() }, self.depth(), label)
    }

    /// The degrees `β` carried by the group grading of the pair space.
    pub fn degrees(&self) -> Vec<Deg> {
        match self.ctx().w1.degree_modulus() {
            0 => {
                let mut ds: Vec<Deg> = self
                    .ctx()
                    .pairs_upto(self.depth().max(0))
                    .iter()
                    .map(|(a, b)| -self.ctx().pair_degree(*a, *b))
                    .collect();
                ds.sort_unstable();
                ds.dedup();
                ds
            }
            m => (0..m).collect(),
        }
    }

    /// Values on every pair of total weight at most `n`, in pair order.
    pub fn values_upto(&self, n: i64) -> Result<Vec<S>> {
        self.ctx().pairs_upto(n).into_iter().map(|(a, b)| self.eval(a, b)).collect()
    }
}

/// Basis of the balanced functionals on the weight-zero pair space, as
/// coordinate vectors over `pairs_upto(0)`.
pub fn balanced_basis<S: Scalar>(ctx: &PairCtx<S>) -> Result<Vec<Vec<Rational>>> {
    if ctx.w1.max_weight() != Some(0) || ctx.w2.max_weight() != Some(0) || ctx.voa.adjoint.max_weight() != Some(0) {
        return Err(Error::UnsupportedInstance("balanced functionals need weight-zero modules".into()));
    }
    let pairs = ctx.pairs_upto(0);
    let index: HashMap<(BasisId, BasisId), usize> = pairs.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let zero = || Rational::from_integer(0.into());
    let mut rows = Vec::new();
    for v in ctx.voa.spanning(0) {
        for &(a, b) in &pairs {
            let mut row = vec![zero(); pairs.len()];
            for (x, c) in ctx.w1.act(v, -1, a)?.entries() {
                row[index[&(*x, b)]] += c;
            }
            for (y, c) in ctx.w2.act(v, -1, b)?.entries() {
                row[index[&(a, *y)]] -= c;
            }
            if row.iter().any(|x| x != &zero()) {
                rows.push(row);
            }
        }
    }
    Ok(nullspace(&rows, pairs.len()))
}

/// How a functional is specified on the command line or in a test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaSpec {
    Zero,
    Canonical { w_prime: String },
    Random { seed: u64 },
    Balanced { seed: u64 },
    File { path: String },
}

impl LambdaSpec {
    /// `zero`, `canonical:w'=<name>`, `random:seed=<n>`, `balanced:seed=<n>`
    /// or a path to a values file.
    pub fn parse(s: &str) -> Result<LambdaSpec> {
        let seed = |rest: &str| -> Result<u64> {
            rest.strip_prefix("seed=")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::Parse(format!("expected seed=<n> in λ spec {s}")))
        };
        if s == "zero" || s == "0" {
            Ok(LambdaSpec::Zero)
        } else if let Some(rest) = s.strip_prefix("canonical:") {
            let name = rest
                .strip_prefix("w'=")
                .ok_or_else(|| Error::Parse(format!("expected canonical:w'=<basis name>, got {s}")))?;
            Ok(LambdaSpec::Canonical { w_prime: name.to_string() })
        } else if let Some(rest) = s.strip_prefix("random:") {
            Ok(LambdaSpec::Random { seed: seed(rest)? })
        } else if let Some(rest) = s.strip_prefix("balanced:") {
            Ok(LambdaSpec::Balanced { seed: seed(rest)? })
        } else {
            Ok(LambdaSpec::File { path: s.strip_prefix("file:").unwrap_or(s).to_string() })
        }
    }

    pub fn render(&self) -> String {
        match self {
            LambdaSpec::Zero => "zero".into(),
            LambdaSpec::Canonical { w_prime } => format!("canonical:w'={w_prime}"),
            LambdaSpec::Random { seed } => format!("random:seed={seed}"),
            LambdaSpec::Balanced { seed } => format!("balanced:seed={seed}"),
            LambdaSpec::File { path } => path.clone(),
        }
    }

    /// Builds the functional; `bound` is the support bound of random ones.
    pub fn build(&self, ctx: &Arc<PairCtx<ParamScalar>>, bound: i64) -> Result<DualFunctional<ParamScalar>> {
        match self {
            LambdaSpec::Zero => Ok(DualFunctional::zero(ctx)),
            LambdaSpec::Canonical { w_prime } => {
                let w = ctx
                    .w2
                    .find(w_prime.trim_end_matches('\''))
                    .ok_or_else(|| Error::Parse(format!("no basis vector {w_prime} in {}", ctx.w2.label())))?;
                DualFunctional::canonical(ctx, w)
            }
            LambdaSpec::Random { seed } => Ok(DualFunctional::random(ctx, *seed, bound)),
            LambdaSpec::Balanced { seed } => DualFunctional::balanced(ctx, *seed),
            LambdaSpec::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read λ file {path}: {e}")))?;
                LambdaFile::parse(&text)?.build(ctx)
            }
        }
    }
}

/// JSON file of functional values:
/// `{"values": [{"w1": "s", "w2": "1", "value": "3/2"}, ...]}`. A value is a
/// rational `p/q` or a Laurent list `[(k, p/q), ...]` in `z`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LambdaFile {
    pub values: Vec<LambdaValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaValue {
    pub w1: String,
    pub w2: String,
    pub value: String,
}

impl LambdaFile {
    pub fn parse(text: &str) -> Result<LambdaFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("λ file: {e}")))
    }

    pub fn build(&self, ctx: &Arc<PairCtx<ParamScalar>>) -> Result<DualFunctional<ParamScalar>> {
        let mut vals = Vec::new();
        for v in &self.values {
            let a = ctx.w1.find(&v.w1).ok_or_else(|| Error::Parse(format!("no basis vector {} in W₁", v.w1)))?;
            let b = ctx.w2.find(&v.w2).ok_or_else(|| Error::Parse(format!("no basis vector {} in W₂", v.w2)))?;
            vals.push(((a, b), parse_param(&v.value)?));
        }
        Ok(DualFunctional::sparse(ctx, vals, "file"))
    }

    /// Serializes the values of a sparse functional.
    pub fn from_functional(f: &DualFunctional<ParamScalar>) -> Option<LambdaFile> {
        let ctx = f.ctx();
        let values = f
            .sparse_values()?
            .iter()
            .map(|((a, b), c)| LambdaValue {
                w1: ctx.w1.basis_name(*a),
                w2: ctx.w2.basis_name(*b),
                value: render_param(c),
            })
            .collect();
        Some(LambdaFile { values })
    }
}

/// Parses `p/q` or a Laurent list.
pub fn parse_param(s: &str) -> Result<ParamScalar> {
    let s = s.trim();
    if s.starts_with('[') {
        Laurent::parse_list(s)
    } else {
        Ok(ParamScalar::constant(parse_rational(s)?))
    }
}

pub fn render_param(c: &ParamScalar) -> String {
    match c.terms() {
        [] => "0".into(),
        [(0, r)] => format_rational(r),
        _ => c.to_list(),
    }
}
