//! The subspace `W_λ` generated by a functional, within a weight cutoff.
//!
//! Functionals are compared through their values on all basis pairs of
//! total weight at most the cutoff, and independence is decided by exact
//! rank over the field of fractions of the scalar ring.

use std::collections::{BTreeMap, VecDeque};

use super::properties::generator_ops;
use super::{DualFunctional, DualOp, Flavor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::BasisId;
use crate::vertex::Deg;

/// Basis of `W_λ` and the dimensions of its doubly graded pieces.
#[derive(Clone, Debug)]
pub struct Closure<S: Scalar> {
    pub flavor: Flavor,
    pub cutoff: i64,
    pub basis: Vec<DualFunctional<S>>,
    /// Keyed by `(L′(0)-eigenvalue, degree β)`.
    pub dims: BTreeMap<(i64, Deg), usize>,
}

impl<S: Scalar> Closure<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Linearly independent functionals, kept with their value rows.
struct Span<S: Scalar> {
    rows: Vec<Vec<S>>,
    members: Vec<DualFunctional<S>>,
}

impl<S: Scalar> Span<S> {
    fn new() -> Self {
        Span { rows: Vec::new(), members: Vec::new() }
    }

    /// Adds `f` if it is independent of the span; reports whether it was.
    fn offer(&mut self, f: &DualFunctional<S>, bound: i64) -> Result<bool> {
        let row = f.values_upto(bound)?;
        if row.iter().all(|x| x.is_zero()) {
            return Ok(false);
        }
        self.rows.push(row);
        if S::rank_of(&self.rows) == self.rows.len() {
            self.members.push(f.clone());
            Ok(true)
        } else {
            self.rows.pop();
            Ok(false)
        }
    }
}

/// Fails when `f` is nonzero on a pair above the cutoff.
fn check_escape<S: Scalar>(f: &DualFunctional<S>, cutoff: i64, what: impl FnOnce() -> String) -> Result<()> {
    if f.depth() <= cutoff {
        return Ok(());
    }
    let ctx = f.ctx();
    for (a, b) in ctx.pairs_upto(f.depth()) {
        let w = ctx.w1.weight(a) + ctx.w2.weight(b);
        if w > cutoff && !f.eval(a, b)?.is_zero() {
            return Err(Error::CutoffExceeded(format!(
                "{} is nonzero on {}⊗{} of weight {w} > {cutoff}",
                what(),
                ctx.w1.basis_name(a),
                ctx.w2.basis_name(b)
            )));
        }
    }
    Ok(())
}

fn degree_candidates<S: Scalar>(lambda: &DualFunctional<S>, cutoff: i64) -> Vec<Deg> {
    let ctx = lambda.ctx();
    match ctx.w1.degree_modulus() {
        0 => {
            let mut ds: Vec<Deg> = ctx.pairs_upto(cutoff).iter().map(|(a, b)| -ctx.pair_degree(*a, *b)).collect();
            ds.sort_unstable();
            ds.dedup();
            ds
        }
        m => (0..m).collect(),
    }
}

/// Closes `λ` under `τ(v ⊗ t^m)` for `v` in `gens`, `L′(-1)`, `L′(0)`,
/// `L′(1)` and the degree projections, then splits the result into
/// generalized `L′(0)`-eigenspaces.
///
/// Operators are tried up to one weight past the cutoff; an image that is
/// nonzero above the cutoff raises `CutoffExceeded`. Eigenvalues are
/// searched among the integers in `[min - cutoff - 1, cutoff + 1]`, where
/// `min` is the lowest pair weight; any remainder raises
/// `UnsupportedSpectrum`.
pub fn closure_wlambda<S: Scalar>(flavor: Flavor, lambda: &DualFunctional<S>, gens: &[BasisId], cutoff: i64) -> Result<Closure<S>> {
    let ctx = lambda.ctx().clone();
    let voa = &ctx.voa;
    check_escape(lambda, cutoff, || lambda.label().to_string())?;
    let degrees = degree_candidates(lambda, cutoff);
    let mut span = Span::new();
    let mut queue = VecDeque::new();
    for &beta in &degrees {
        let part = lambda.project_beta(beta);
        if span.offer(&part, cutoff)? {
            queue.push_back(part);
        }
    }
    while let Some(f) = queue.pop_front() {
        for op in generator_ops(flavor, &f, gens, cutoff + 1) {
            let image = f.apply(&op);
            check_escape(&image, cutoff, || format!("{} applied to {}", op.describe(voa), f.label()))?;
            if span.offer(&image, cutoff)? {
                queue.push_back(image);
            }
        }
    }
    let dims = graded_dims(flavor, &span.members, &degrees, cutoff)?;
    Ok(Closure { flavor, cutoff, basis: span.members, dims })
}

fn graded_dims<S: Scalar>(flavor: Flavor, basis: &[DualFunctional<S>], degrees: &[Deg], cutoff: i64) -> Result<BTreeMap<(i64, Deg), usize>> {
    let mut dims = BTreeMap::new();
    let Some(first) = basis.first() else { return Ok(dims) };
    let ctx = first.ctx().clone();
    let min = ctx.w1.min_weight() + ctx.w2.min_weight();
    let l0 = DualOp::l(flavor, 0);
    for &beta in degrees {
        let mut piece = Span::new();
        for f in basis {
            piece.offer(&f.project_beta(beta), cutoff)?;
        }
        let r = piece.members.len();
        if r == 0 {
            continue;
        }
        let mut found = 0;
        for mu in (min - cutoff - 1)..=(cutoff + 1) {
            let mut rows = Vec::new();
            for g in &piece.members {
                let mut cur = g.clone();
                for _ in 0..r {
                    let shifted = cur.apply(&l0);
                    cur = DualFunctional::sum(&ctx, vec![(S::one(), shifted), (S::from_i64(-mu), cur)]);
                }
                rows.push(cur.values_upto(cutoff)?);
            }
            let gen_dim = r - S::rank_of(&rows);
            if gen_dim > 0 {
                dims.insert((mu, beta), gen_dim);
                found += gen_dim;
            }
            if found == r {
                break;
            }
        }
        if found != r {
            return Err(Error::UnsupportedSpectrum(format!(
                "{} of {r} dimensions of degree {beta} lie outside integer L′(0)-eigenvalues",
                r - found
            )));
        }
    }
    Ok(dims)
}
