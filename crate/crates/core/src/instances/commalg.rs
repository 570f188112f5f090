//! Vertex operator algebras of finite-dimensional unital commutative
//! associative algebras, with `Y(u,x)v = u·v` and vanishing conformal
//! vector, and their modules.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::table::{BasisVector, TableModule};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::vector::BasisId;
use crate::vertex::{Deg, RVec, Voa};
use crate::Rational;

/// Structure constants `e_i · e_j` of a commutative algebra over Q.
#[derive(Clone, Debug)]
pub struct CommAlgebra {
    pub name: String,
    pub names: Vec<String>,
    pub mult: Vec<Vec<RVec>>,
    pub degrees: Vec<Deg>,
    pub modulus: i64,
    pub unit: RVec,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl CommAlgebra {
    /// Checks commutativity, associativity and the existence of a unit.
    pub fn new(name: &str, names: Vec<String>, mult: Vec<Vec<RVec>>, degrees: Vec<Deg>, modulus: i64) -> Result<Self> {
        let d = names.len();
        if mult.len() != d || mult.iter().any(|r| r.len() != d) || degrees.len() != d {
            return Err(Error::Config(format!("{name}: table shape does not match dimension {d}")));
        }
        let mut a = CommAlgebra { name: name.to_string(), names, mult, degrees, modulus, unit: RVec::new() };
        for i in 0..d {
            for j in 0..d {
                if a.mult[i][j] != a.mult[j][i] {
                    return Err(Error::NotCommutative(a.names[i].clone(), a.names[j].clone()));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let l = a.mul(&a.mul(&RVec::basis(i as u32), &RVec::basis(j as u32)), &RVec::basis(k as u32));
                    let r = a.mul(&RVec::basis(i as u32), &a.mul(&RVec::basis(j as u32), &RVec::basis(k as u32)));
                    if l != r {
                        return Err(Error::NotAssociative(a.names[i].clone(), a.names[j].clone(), a.names[k].clone()));
                    }
                }
            }
        }
        a.unit = a.find_unit().ok_or(Error::NoUnit)?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, x: &RVec, y: &RVec) -> RVec {
        let mut out = RVec::new();
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&self.mult[*i as usize][*j as usize], &(a * b));
            }
        }
        out
    }

    /// Solves `u · e_j = e_j` for all `j`.
    fn find_unit(&self) -> Option<RVec> {
        let d = self.dim();
        // unknowns u_i; equations: Σ_i u_i (e_i e_j)_k = δ_jk
        let mut m: Matrix = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..d {
            for k in 0..d {
                m.push((0..d).map(|i| self.mult[i][j].get(k as u32)).collect());
                rhs.push(if j == k { Rational::one() } else { Rational::zero() });
            }
        }
        let u = linalg::solve(&m, &rhs)?;
        Some(RVec::from_pairs(u.into_iter().enumerate().map(|(i, c)| (i as u32, c))))
    }

    /// First pair whose product violates degree additivity.
    pub fn degree_violation(&self) -> Option<(String, String)> {
        let red = |d: Deg| if self.modulus == 0 { d } else { d.rem_euclid(self.modulus) };
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let want = red(self.degrees[i] + self.degrees[j]);
                if self.mult[i][j].entries().iter().any(|(k, _)| red(self.degrees[*k as usize]) != want) {
                    return Some((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        None
    }

    /// Left multiplication by `e_i` in column convention.
    pub fn regular_action(&self) -> Vec<Matrix> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut m = vec![vec![Rational::zero(); d]; d];
                for (col, row_vec) in self.mult[i].iter().enumerate() {
                    for (row, c) in row_vec.entries() {
                        m[*row as usize][col] = c.clone();
                    }
                }
                m
            })
            .collect()
    }

    /// Module from action matrices `ρ(e_i)` (column convention), checked
    /// against the multiplication, the unit and the grading.
    pub fn module(&self, label: &str, names: Vec<String>, degrees: Vec<Deg>, action: Vec<Matrix>) -> Result<CommModule> {
        let n = names.len();
        if action.len() != self.dim() || action.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::NotAModule(format!("{label}: action matrices have the wrong shape")));
        }
        let rho = |x: &RVec| -> Matrix {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for (i, c) in x.entries() {
                for r in 0..n {
                    for s in 0..n {
                        m[r][s] += &action[*i as usize][r][s] * c;
                    }
                }
            }
            m
        };
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let lhs = linalg::mat_mul(&action[i], &action[j]);
                if lhs != rho(&self.mult[i][j]) {
                    return Err(Error::NotAModule(format!(
                        "{label}: ρ({})ρ({}) ≠ ρ({}·{})",
                        self.names[i], self.names[j], self.names[i], self.names[j]
                    )));
                }
            }
        }
        if rho(&self.unit) != linalg::identity(n) {
            return Err(Error::NotAModule(format!("{label}: unit does not act as the identity")));
        }
        let red = |d: Deg| if self.modulus == 0 { d } else { d.rem_euclid(self.modulus) };
        for (i, m) in action.iter().enumerate() {
            for col in 0..n {
                for (row, line) in m.iter().enumerate() {
                    if !line[col].is_zero() && red(degrees[col] + self.degrees[i]) != red(degrees[row]) {
                        return Err(Error::NotAModule(format!(
                            "{label}: {} maps {} outside degree {}",
                            self.names[i],
                            names[col],
                            red(degrees[col] + self.degrees[i])
                        )));
                    }
                }
            }
        }
        Ok(CommModule { label: label.to_string(), names, degrees: degrees.into_iter().map(red).collect(), action })
    }

    pub fn regular_module(&self) -> CommModule {
        let label = format!("{}-regular", self.name);
        self.module(&label, self.names.clone(), self.degrees.clone(), self.regular_action())
            .expect("regular module of a checked algebra")
    }

    /// The algebra as a vertex operator algebra of central charge 0.
    pub fn voa(&self) -> Result<Arc<Voa>> {
        let reg = self.regular_module();
        let mut adj = reg.table(self)?;
        adj.label = self.name.clone();
        Ok(Arc::new(Voa {
            name: self.name.clone(),
            adjoint: Arc::new(adj),
            vacuum: self.unit.clone(),
            central_charge: Some(Rational::zero()),
        }))
    }

    /// `Q[s]/(s²)`.
    pub fn a2() -> Self {
        let b = |i| RVec::basis(i);
        Self::new("a2", vec!["1".into(), "s".into()], vec![vec![b(0), b(1)], vec![b(1), RVec::new()]], vec![0, 0], 1)
            .expect("a2")
    }

    /// The group algebra of `Z/2`, graded by the group.
    pub fn z2() -> Self {
        let b = |i| RVec::basis(i);
        Self::new("z2", vec!["1".into(), "g".into()], vec![vec![b(0), b(1)], vec![b(1), b(0)]], vec![0, 1], 2)
            .expect("z2")
    }

    /// `Q × Q` with orthogonal idempotents `e1`, `e2`.
    pub fn qxq() -> Self {
        let b = |i| RVec::basis(i);
        Self::new("qxq", vec!["e1".into(), "e2".into()], vec![vec![b(0), RVec::new()], vec![RVec::new(), b(1)]], vec![0, 0], 1)
            .expect("qxq")
    }

    /// The one-dimensional algebra `Q`.
    pub fn q() -> Self {
        Self::new("q", vec!["1".into()], vec![vec![RVec::basis(0)]], vec![0], 1).expect("q")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Ok(match name {
            "a2" => Self::a2(),
            "z2" => Self::z2(),
            "qxq" => Self::qxq(),
            "q" => Self::q(),
            _ => return Err(Error::UnsupportedInstance(format!("no commutative algebra named {name}"))),
        })
    }

    /// Named modules shipped with the built-in algebras.
    pub fn builtin_module(&self, name: &str) -> Result<CommModule> {
        let r = |n: i64| int(n);
        let z = Rational::zero;
        match (self.name.as_str(), name) {
            (_, "regular") => Ok(self.regular_module()),
            ("a2", "quotient") => self.module("a2/(s)", vec!["1".into()], vec![0], vec![vec![vec![r(1)]], vec![vec![z()]]]),
            ("qxq", "e1") => self.module("qxq-e1", vec!["u1".into()], vec![0], vec![vec![vec![r(1)]], vec![vec![z()]]]),
            ("qxq", "e2") => self.module("qxq-e2", vec!["u2".into()], vec![0], vec![vec![vec![z()]], vec![vec![r(1)]]]),
            ("z2", "shifted") => {
                // the regular module with degrees shifted by 1
                let mut m = self.regular_module();
                m.label = "z2-shifted".into();
                m.names = vec!["1*".into(), "g*".into()];
                m.degrees = vec![1, 0];
                Ok(m)
            }
            _ => Err(Error::UnsupportedInstance(format!("{} has no module named {name}", self.name))),
        }
    }

    pub fn builtin_module_names(&self) -> Vec<&'static str> {
        match self.name.as_str() {
            "a2" => vec!["regular", "quotient"],
            "qxq" => vec!["regular", "e1", "e2"],
            "z2" => vec!["regular", "shifted"],
            _ => vec!["regular"],
        }
    }
}

/// A finite-dimensional module of a commutative algebra.
#[derive(Clone, Debug)]
pub struct CommModule {
    pub label: String,
    pub names: Vec<String>,
    pub degrees: Vec<Deg>,
    /// `ρ(e_i)` in column convention.
    pub action: Vec<Matrix>,
}

impl CommModule {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// `v · w` for basis vectors.
    pub fn act(&self, v: BasisId, w: BasisId) -> RVec {
        let m = &self.action[v as usize];
        RVec::from_pairs((0..self.dim()).map(|r| (r as u32, m[r][w as usize].clone())))
    }

    /// The vertex-algebra module: weight 0, only the `(-1)` modes nonzero.
    pub fn table(&self, alg: &CommAlgebra) -> Result<TableModule> {
        let basis = self
            .names
            .iter()
            .zip(&self.degrees)
            .map(|(n, d)| BasisVector { name: n.clone(), weight: 0, degree: *d })
            .collect();
        let mut t = TableModule::new(self.label.clone(), basis, alg.modulus, 0, vec![0; alg.dim()])?;
        t.complete = true;
        for v in 0..alg.dim() as u32 {
            for w in 0..self.dim() as u32 {
                t.set_component(v, -1, w, self.act(v, w));
            }
        }
        Ok(t)
    }

    /// Module over the algebra's vertex operator algebra.
    pub fn vmodule(&self, alg: &CommAlgebra) -> Result<Arc<TableModule>> {
        Ok(Arc::new(self.table(alg)?))
    }
}
