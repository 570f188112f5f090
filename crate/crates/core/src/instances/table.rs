//! Modules stored as explicit sparse component tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vector::BasisId;
use crate::vertex::{overflow, Deg, GradedSpace, RVec, VModule};

/// One basis vector of a table module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub weight: i64,
    pub degree: Deg,
}

/// A module whose modes are read from a table. Entries absent from the
/// table are zero as long as the result weight is within `cutoff`; beyond
/// it the data is unknown and the lookup overflows.
#[derive(Clone, Debug)]
pub struct TableModule {
    pub label: String,
    pub basis: Vec<BasisVector>,
    pub degree_modulus: i64,
    pub cutoff: i64,
    /// The basis spans the whole module, so nothing lies above `cutoff`.
    pub complete: bool,
    pub components: HashMap<(BasisId, i64, BasisId), Arc<RVec>>,
    pub virasoro: HashMap<(i64, BasisId), Arc<RVec>>,
    by_weight: BTreeMap<i64, Vec<BasisId>>,
    by_name: HashMap<String, BasisId>,
    /// Weights of the algebra basis, needed to locate result weights.
    alg_weights: Vec<i64>,
}

impl TableModule {
    pub fn new(
        label: impl Into<String>,
        basis: Vec<BasisVector>,
        degree_modulus: i64,
        cutoff: i64,
        alg_weights: Vec<i64>,
    ) -> Result<Self> {
        let mut by_weight: BTreeMap<i64, Vec<BasisId>> = BTreeMap::new();
        let mut by_name = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.weight > cutoff {
                return Err(Error::Config(format!("basis vector {} above cutoff {cutoff}", b.name)));
            }
            by_weight.entry(b.weight).or_default().push(i as BasisId);
            if by_name.insert(b.name.clone(), i as BasisId).is_some() {
                return Err(Error::Config(format!("duplicate basis name {}", b.name)));
            }
        }
        Ok(TableModule {
            label: label.into(),
            basis,
            degree_modulus,
            cutoff,
            complete: false,
            components: HashMap::new(),
            virasoro: HashMap::new(),
            by_weight,
            by_name,
            alg_weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn set_component(&mut self, u: BasisId, n: i64, w: BasisId, r: RVec) {
        if r.is_zero() {
            self.components.remove(&(u, n, w));
        } else {
            self.components.insert((u, n, w), Arc::new(r));
        }
    }

    pub fn set_virasoro(&mut self, j: i64, w: BasisId, r: RVec) {
        if r.is_zero() {
            self.virasoro.remove(&(j, w));
        } else {
            self.virasoro.insert((j, w), Arc::new(r));
        }
    }

    /// Action matrix of `u_n` in column convention: `m[row][col]` is the
    /// coefficient of basis `row` in `u_n(basis col)`.
    pub fn mode_matrix(&self, u: BasisId, n: i64) -> Vec<Vec<crate::Rational>> {
        let d = self.dim();
        let mut m = vec![vec![num_traits::Zero::zero(); d]; d];
        for col in 0..d as BasisId {
            if let Some(r) = self.components.get(&(u, n, col)) {
                for (row, c) in r.entries() {
                    m[*row as usize][col as usize] = c.clone();
                }
            }
        }
        m
    }
}

impl GradedSpace for TableModule {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn weight(&self, b: BasisId) -> i64 {
        self.basis[b as usize].weight
    }

    fn degree(&self, b: BasisId) -> Deg {
        self.basis[b as usize].degree
    }

    fn degree_modulus(&self) -> i64 {
        self.degree_modulus
    }

    fn basis_name(&self, b: BasisId) -> String {
        self.basis[b as usize].name.clone()
    }

    fn find(&self, name: &str) -> Option<BasisId> {
        self.by_name.get(name).copied()
    }

    fn basis_at(&self, w: i64) -> Vec<BasisId> {
        self.by_weight.get(&w).cloned().unwrap_or_default()
    }

    fn min_weight(&self) -> i64 {
        self.by_weight.keys().next().copied().unwrap_or(0)
    }

    fn max_weight(&self) -> Option<i64> {
        self.complete.then(|| self.by_weight.keys().next_back().copied().unwrap_or(0))
    }

    fn cutoff(&self) -> i64 {
        self.cutoff
    }
}

impl VModule for TableModule {
    fn act(&self, v: BasisId, n: i64, w: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.components.get(&(v, n, w)) {
            return Ok(r.clone());
        }
        let target = self.alg_weights[v as usize] + self.weight(w) - n - 1;
        if target > self.cutoff && !self.complete {
            return Err(overflow(target, self.cutoff, format!("{} mode table", self.label)));
        }
        Ok(Arc::new(RVec::new()))
    }

    fn virasoro(&self, j: i64, w: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.virasoro.get(&(j, w)) {
            return Ok(r.clone());
        }
        let target = self.weight(w) - j;
        if target > self.cutoff && !self.complete {
            return Err(overflow(target, self.cutoff, format!("{} Virasoro table", self.label)));
        }
        Ok(Arc::new(RVec::new()))
    }
}
