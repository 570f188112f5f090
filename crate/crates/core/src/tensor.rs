//! Explicit tensor products of modules over a finite-dimensional
//! commutative algebra.
//!
//! The compatible functionals are computed as the nullspace of the balance
//! system and then checked against the flavor's compatibility condition,
//! both ways: every basis functional passes it, and no nonzero functional
//! in a complement does. The tensor product is the dual of that space with
//! the action induced by `Y′`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual::compat::{compat_defects, CompatWindow};
use crate::dual::{DualFunctional, DualOp, Flavor, PairCtx};
use crate::error::{Error, Result};
use crate::instances::{CommAlgebra, CommModule, DefFile, Instance};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::vector::BasisId;
use crate::vertex::Deg;
use crate::{ParamScalar, Rational};

/// Exponent radius of the compatibility check behind [`compat_subspace`].
pub const COMPAT_RADIUS: i64 = 2;

/// A comm-alg fusion problem: the algebra and two of its modules.
#[derive(Clone, Debug)]
pub struct FusionInput {
    pub alg: CommAlgebra,
    pub w1: CommModule,
    pub w2: CommModule,
}

impl FusionInput {
    /// Picks two named modules of a comm-alg instance.
    pub fn from_instance(inst: &Instance, m1: &str, m2: &str) -> Result<Self> {
        let Some((alg, mods)) = &inst.commalg else {
            return Err(Error::UnsupportedInstance(format!(
                "{} has positive-weight modules; tensor products are built only for commutative algebras",
                inst.name
            )));
        };
        // instance modules and comm-alg modules are listed in the same order
        let pick = |name: &str| -> Result<CommModule> {
            inst.modules
                .iter()
                .position(|(n, _)| n == name || n.ends_with(&format!("-{name}")))
                .or_else(|| mods.iter().position(|m| m.label == name))
                .map(|i| mods[i].clone())
                .ok_or_else(|| Error::Config(format!("{} has no module {name}", inst.name)))
        };
        Ok(FusionInput { alg: alg.clone(), w1: pick(m1)?, w2: pick(m2)? })
    }

    pub fn pairs(&self) -> Vec<(BasisId, BasisId)> {
        (0..self.w1.dim() as BasisId).flat_map(|a| (0..self.w2.dim() as BasisId).map(move |b| (a, b))).collect()
    }

    fn index(&self, a: BasisId, b: BasisId) -> usize {
        a as usize * self.w2.dim() + b as usize
    }

    fn pair_degree(&self, a: BasisId, b: BasisId) -> Deg {
        let d = self.w1.degrees[a as usize] + self.w2.degrees[b as usize];
        if self.alg.modulus == 0 {
            d
        } else {
            d.rem_euclid(self.alg.modulus)
        }
    }

    pub fn pair_name(&self, a: BasisId, b: BasisId) -> String {
        format!("{}⊗{}", self.w1.names[a as usize], self.w2.names[b as usize])
    }

    pub fn ctx(&self) -> Result<Arc<PairCtx<ParamScalar>>> {
        let voa = self.alg.voa()?;
        PairCtx::new(voa, self.w1.vmodule(&self.alg)?, self.w2.vmodule(&self.alg)?, ParamScalar::var())
    }

    /// `(v·a) ⊗ b - a ⊗ (v·b)` in pair coordinates.
    fn balance_row(&self, v: BasisId, a: BasisId, b: BasisId) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.w1.dim() * self.w2.dim()];
        for (x, c) in self.w1.act(v, a).entries() {
            row[self.index(*x, b)] += c;
        }
        for (y, c) in self.w2.act(v, b).entries() {
            row[self.index(a, *y)] -= c;
        }
        row
    }
}

/// Basis of `W₁ ⊠ W₂`'s dual: the compatible functionals.
#[derive(Clone, Debug)]
pub struct CompatSubspace {
    pub flavor: Flavor,
    pub basis: Vec<DualFunctional<ParamScalar>>,
    /// Values of each basis functional on `pairs()`.
    pub coords: Vec<Vec<Rational>>,
    /// Degree of the pairs each basis functional is supported on.
    pub degrees: Vec<Deg>,
    /// Window on which the flavor's compatibility condition was checked.
    pub compat_window: String,
    /// Window on which the grading conditions were checked.
    pub grading_window: String,
    /// Whether the flavor's compatible space equals the balance nullspace
    /// on the window.
    pub verified: bool,
    pub note: Option<String>,
}

impl CompatSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The compatible functionals on `W₁ ⊗ W₂`, one homogeneous basis per
/// degree.
pub fn compat_subspace(input: &FusionInput, flavor: Flavor) -> Result<CompatSubspace> {
    let ctx = input.ctx()?;
    let pairs = input.pairs();
    let n = pairs.len();
    let mut blocks: BTreeMap<Deg, Vec<usize>> = BTreeMap::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        blocks.entry(input.pair_degree(*a, *b)).or_default().push(i);
    }
    let mut rows = Vec::new();
    for v in 0..input.alg.dim() as BasisId {
        for &(a, b) in &pairs {
            let r = input.balance_row(v, a, b);
            if r.iter().any(|x| !x.is_zero()) {
                rows.push(r);
            }
        }
    }
    let mut coords = Vec::new();
    let mut degrees = Vec::new();
    for (deg, cols) in &blocks {
        // each balance row lives in a single degree block
        let sub: Matrix = rows
            .iter()
            .filter(|r| cols.iter().any(|&c| !r[c].is_zero()))
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        for ns in linalg::nullspace(&sub, cols.len()) {
            let mut full = vec![Rational::zero(); n];
            for (k, &c) in cols.iter().enumerate() {
                full[c] = ns[k].clone();
            }
            coords.push(full);
            degrees.push(*deg);
        }
    }
    let functional = |vals: &[Rational], label: String| {
        let values = pairs.iter().zip(vals).map(|(k, x)| (*k, ParamScalar::from_rational(x)));
        DualFunctional::sparse(&ctx, values, &label)
    };
    let basis: Vec<_> = coords.iter().enumerate().map(|(i, c)| functional(c, format!("λ{}", i + 1))).collect();

    let win = CompatWindow { gens: ctx.voa.spanning(0), pair_bound: 0, radius: COMPAT_RADIUS };
    let mut note = None;
    for f in &basis {
        if compat_defects(flavor, f, &win)?.iter().any(|x| !x.is_zero()) {
            note = Some(format!("{} fails the {flavor}(z)-compatibility condition", f.label()));
            break;
        }
    }
    if note.is_none() {
        // a complement of the nullspace must meet the compatible space in 0
        let mut span = coords.clone();
        let mut defects = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            span.push(e.clone());
            if linalg::rank(&span) < span.len() {
                span.pop();
                continue;
            }
            defects.push(compat_defects(flavor, &functional(&e, format!("e{i}")), &win)?);
        }
        if ParamScalar::rank_of(&defects) < defects.len() {
            note = Some(format!("a functional outside the balance nullspace passes the {flavor}(z)-compatibility condition"));
        }
    }
    Ok(CompatSubspace {
        flavor,
        verified: note.is_none(),
        note,
        basis,
        coords,
        degrees,
        compat_window: win.describe(),
        grading_window: "weight 0: every graded piece is finite-dimensional".into(),
    })
}

/// `W₁ ⊠ W₂` as a module, with the pairing of `w₁ ⊠ w₂` against the
/// compatible functionals.
#[derive(Clone, Debug)]
pub struct TensorProductResult {
    pub input: FusionInput,
    pub subspace: CompatSubspace,
    /// Action of the algebra on the compatible functionals via `Y′(v)_0`,
    /// column convention in the basis `subspace.basis`.
    pub dual_action: Vec<Matrix>,
    /// `W₁ ⊠ W₂` with the transposed action, in the dual basis.
    pub module: CommModule,
    /// Coordinates of `a ⊠ b` for every pair, indexed like `pairs()`.
    pub boxed: Vec<Vec<Rational>>,
}

impl TensorProductResult {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `⟨λ_i, a ⊠ b⟩`.
    pub fn pairing(&self, i: usize, a: BasisId, b: BasisId) -> Rational {
        self.boxed[self.input.index(a, b)][i].clone()
    }

    /// Definition file holding the algebra and `W₁ ⊠ W₂`.
    pub fn definition(&self) -> Result<DefFile> {
        crate::instances::defs::commalg_def(&self.input.alg, std::slice::from_ref(&self.module))
    }
}

fn constant(x: &ParamScalar, what: &str) -> Result<Rational> {
    match x.terms() {
        [] => Ok(Rational::zero()),
        [(0, c)] => Ok(c.clone()),
        _ => Err(Error::UnsupportedInstance(format!("{what} depends on z: {x}"))),
    }
}

pub fn tensor_product(input: &FusionInput, flavor: Flavor) -> Result<TensorProductResult> {
    let subspace = compat_subspace(input, flavor)?;
    let r = subspace.dim();
    let pairs = input.pairs();
    // coordinates in the basis: solve against the value matrix
    let value_cols = linalg::transpose(&subspace.coords, r, pairs.len());
    let mut dual_action = Vec::new();
    for v in 0..input.alg.dim() as BasisId {
        let mut m = vec![vec![Rational::zero(); r]; r];
        for (i, f) in subspace.basis.iter().enumerate() {
            let image = f.apply(&DualOp::y(flavor, v, 0));
            let vals = pairs
                .iter()
                .map(|(a, b)| constant(&image.eval(*a, *b)?, "Y′(v)_0 λ"))
                .collect::<Result<Vec<_>>>()?;
            let x = linalg::solve(&value_cols, &vals).ok_or_else(|| {
                Error::NotAModule(format!("Y′({})_0 {} leaves the compatible space", input.alg.names[v as usize], f.label()))
            })?;
            for (k, c) in x.into_iter().enumerate() {
                m[k][i] = c;
            }
        }
        dual_action.push(m);
    }
    let action: Vec<Matrix> = dual_action.iter().map(|m| linalg::transpose(m, r, r)).collect();
    let names = (1..=r).map(|i| format!("λ{i}*")).collect();
    let label = format!("{}⊠{}", input.w1.label, input.w2.label);
    let module = input.alg.module(&label, names, subspace.degrees.clone(), action)?;
    let boxed = (0..pairs.len()).map(|p| subspace.coords.iter().map(|c| c[p].clone()).collect()).collect();
    Ok(TensorProductResult { input: input.clone(), subspace, dual_action, module, boxed })
}

/// `W₁ ⊗_A W₂`, computed as a quotient of `W₁ ⊗ W₂`.
#[derive(Clone, Debug)]
pub struct OracleModule {
    /// Pairs whose classes form the quotient basis.
    pub basis: Vec<(BasisId, BasisId)>,
    /// Column convention.
    pub action: Vec<Matrix>,
    relations: Matrix,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl OracleModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Quotient coordinates of a vector in pair coordinates.
    pub fn reduce(&self, x: &[Rational]) -> Vec<Rational> {
        let mut x = x.to_vec();
        for (row, &p) in self.relations.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let f = x[p].clone();
            for (xi, ri) in x.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *xi -= &f * ri;
                }
            }
        }
        self.free.iter().map(|&c| x[c].clone()).collect()
    }
}

pub fn algebra_tensor_oracle(input: &FusionInput) -> OracleModule {
    let pairs = input.pairs();
    let n = pairs.len();
    let mut relations: Matrix = Vec::new();
    for v in 0..input.alg.dim() as BasisId {
        for &(a, b) in &pairs {
            relations.push(input.balance_row(v, a, b));
        }
    }
    let pivots = linalg::rref(&mut relations);
    relations.truncate(pivots.len());
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut oracle = OracleModule { basis: free.iter().map(|&c| pairs[c]).collect(), action: Vec::new(), relations, pivots, free };
    let q = oracle.dim();
    for v in 0..input.alg.dim() as BasisId {
        let mut m = vec![vec![Rational::zero(); q]; q];
        for (j, &(a, b)) in oracle.basis.iter().enumerate() {
            let mut x = vec![Rational::zero(); n];
            for (y, c) in input.w1.act(v, a).entries() {
                x[input.index(*y, b)] += c;
            }
            for (i, c) in oracle.reduce(&x).into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        oracle.action.push(m);
    }
    oracle
}

/// An invertible `T` with `T·a_v = b_v·T` for every `v`, if one exists.
pub fn find_isomorphism(a: &[Matrix], b: &[Matrix], seed: u64) -> Option<Matrix> {
    let n = a.first().map_or(0, |m| m.len());
    if b.first().map_or(0, |m| m.len()) != n || a.len() != b.len() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let mut rows = Vec::new();
    for (av, bv) in a.iter().zip(b) {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] += &av[k][j];
                    row[k * n + j] -= &bv[i][k];
                }
                rows.push(row);
            }
        }
    }
    let space = linalg::nullspace(&rows, n * n);
    let as_matrix = |x: &[Rational]| -> Matrix { (0..n).map(|i| x[i * n..(i + 1) * n].to_vec()).collect() };
    for x in &space {
        let t = as_matrix(x);
        if linalg::inverse(&t).is_some() {
            return Some(t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut x = vec![Rational::zero(); n * n];
        for s in &space {
            let c = Rational::from_integer(rng.gen_range(-9i64..=9).into());
            for (xi, si) in x.iter_mut().zip(s) {
                *xi += &c * si;
            }
        }
        let t = as_matrix(&x);
        if linalg::inverse(&t).is_some() {
            return Some(t);
        }
    }
    None
}

/// The canonical map `W₁ ⊗_A W₂ → W₁ ⊠ W₂`, `[a ⊗ b] ↦ a ⊠ b`, when it is
/// an isomorphism of modules.
pub fn canonical_isomorphism(res: &TensorProductResult, oracle: &OracleModule) -> Option<Matrix> {
    let (r, q) = (res.dim(), oracle.dim());
    if r != q {
        return None;
    }
    let cols: Vec<Vec<Rational>> = oracle.basis.iter().map(|(a, b)| res.boxed[res.input.index(*a, *b)].clone()).collect();
    let t = linalg::transpose(&cols, q, r);
    if r > 0 && linalg::inverse(&t).is_none() {
        return None;
    }
    let ok = res.module.action.iter().zip(&oracle.action).all(|(x, y)| linalg::mat_mul(&t, y) == linalg::mat_mul(x, &t));
    ok.then_some(t)
}

/// A module `W` with values `I(a ⊗ b) ∈ W` on every basis pair.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub module: CommModule,
    /// Indexed like `pairs()`; coordinates in the basis of `module`.
    pub values: Vec<Vec<Rational>>,
}

impl Candidate {
    /// The tensor product with its own canonical map.
    pub fn of_result(res: &TensorProductResult) -> Self {
        Candidate { module: res.module.clone(), values: res.boxed.clone() }
    }

    /// `W ⊕ U` with `I` extended by zero on `U`.
    pub fn with_summand(&self, alg: &CommAlgebra, extra: &CommModule) -> Result<Self> {
        let (n, m) = (self.module.dim(), extra.dim());
        let mut names = self.module.names.clone();
        names.extend(extra.names.iter().map(|x| format!("{x}'")));
        let mut degrees = self.module.degrees.clone();
        degrees.extend(&extra.degrees);
        let action = self
            .module
            .action
            .iter()
            .zip(&extra.action)
            .map(|(a, b)| {
                let mut out = vec![vec![Rational::zero(); n + m]; n + m];
                for i in 0..n {
                    out[i][..n].clone_from_slice(&a[i]);
                }
                for i in 0..m {
                    out[n + i][n..].clone_from_slice(&b[i]);
                }
                out
            })
            .collect();
        let module = alg.module(&format!("{}⊕{}", self.module.label, extra.label), names, degrees, action)?;
        let values = self.values.iter().map(|v| v.iter().cloned().chain((0..m).map(|_| Rational::zero())).collect()).collect();
        Ok(Candidate { module, values })
    }
}

/// Solves for the module map `η: W₁ ⊠ W₂ → W` with `η(a ⊠ b) = I(a ⊗ b)`.
pub fn universal_check(cand: &Candidate, res: &TensorProductResult) -> Result<Matrix> {
    let input = &res.input;
    let (m, r) = (cand.module.dim(), res.dim());
    // unknowns η[i][k], row-major
    let var = |i: usize, k: usize| i * r + k;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in 0..input.pairs().len() {
        for i in 0..m {
            let mut row = vec![Rational::zero(); m * r];
            for k in 0..r {
                row[var(i, k)] = res.boxed[p][k].clone();
            }
            rows.push(row);
            rhs.push(cand.values[p][i].clone());
        }
    }
    for (x, y) in res.module.action.iter().zip(&cand.module.action) {
        for i in 0..m {
            for k in 0..r {
                // (η x)[i][k] - (y η)[i][k] = 0
                let mut row = vec![Rational::zero(); m * r];
                for l in 0..r {
                    row[var(i, l)] += &x[l][k];
                }
                for l in 0..m {
                    row[var(l, k)] -= &y[i][l];
                }
                rows.push(row);
                rhs.push(Rational::zero());
            }
        }
    }
    let Some(sol) = linalg::solve(&rows, &rhs) else {
        return Err(Error::NoFactorization(unbalanced_witness(cand, input).unwrap_or_else(|| "the module-map conditions are inconsistent".into())));
    };
    let kernel = linalg::nullspace(&rows, m * r);
    if !kernel.is_empty() {
        return Err(Error::NonUniqueFactorization(format!("{} free parameters in η", kernel.len())));
    }
    Ok((0..m).map(|i| sol[i * r..(i + 1) * r].to_vec()).collect())
}

/// A triple `(v, a, b)` with `I(v·a ⊗ b) ≠ I(a ⊗ v·b)`.
fn unbalanced_witness(cand: &Candidate, input: &FusionInput) -> Option<String> {
    let dim = cand.module.dim();
    let apply = |row: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); dim];
        for (p, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&cand.values[p]) {
                *o += c * x;
            }
        }
        out
    };
    for v in 0..input.alg.dim() as BasisId {
        for (a, b) in input.pairs() {
            let d = apply(&input.balance_row(v, a, b));
            if d.iter().any(|x| !x.is_zero()) {
                return Some(format!("I(v·a⊗b) ≠ I(a⊗v·b) at v={} {}", input.alg.names[v as usize], input.pair_name(a, b)));
            }
        }
    }
    None
}
