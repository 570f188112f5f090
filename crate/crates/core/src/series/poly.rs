//! Rational polyhedra in H-representation and Fourier–Motzkin projection.
//!
//! Supports of formal series are finite unions of polyhedra. Each one is
//! usually built from a base point and generators, then converted to
//! inequalities so that products, residues and recession tests all reduce to
//! elimination on small integer systems.

use std::collections::HashSet;

use num_integer::Integer;

/// `a · x >= c`, or `a · x == c` when `eq` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub a: Vec<i128>,
    pub c: i128,
    pub eq: bool,
}

impl Constraint {
    fn normalize(mut self) -> Self {
        let mut g = self.c.abs();
        for &x in &self.a {
            g = g.gcd(&x.abs());
        }
        if g > 1 {
            for x in self.a.iter_mut() {
                *x /= g;
            }
            self.c /= g;
        }
        if self.eq {
            // canonical sign for equalities
            if let Some(&first) = self.a.iter().find(|&&x| x != 0) {
                if first < 0 {
                    for x in self.a.iter_mut() {
                        *x = -*x;
                    }
                    self.c = -self.c;
                }
            }
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    /// A constraint with all-zero left side that can never hold.
    fn is_contradiction(&self) -> bool {
        self.is_trivial() && if self.eq { self.c != 0 } else { self.c > 0 }
    }

    fn combine(p: &Constraint, pm: i128, n: &Constraint, nm: i128) -> Constraint {
        Constraint {
            a: p.a.iter().zip(&n.a).map(|(x, y)| x * pm + y * nm).collect(),
            c: p.c * pm + n.c * nm,
            eq: p.eq && n.eq,
        }
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let s: i128 = self.a.iter().zip(x).map(|(a, &v)| a * v as i128).sum();
        if self.eq {
            s == self.c
        } else {
            s >= self.c
        }
    }
}

/// Linear system over `n` variables.
#[derive(Clone, Debug, Default)]
pub struct System {
    pub n: usize,
    pub cons: Vec<Constraint>,
    infeasible: bool,
}

impl System {
    pub fn new(n: usize) -> Self {
        System { n, cons: Vec::new(), infeasible: false }
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.a.len(), self.n);
        let c = c.normalize();
        if c.is_contradiction() {
            self.infeasible = true;
            return;
        }
        if c.is_trivial() {
            return;
        }
        self.cons.push(c);
    }

    pub fn ge(&mut self, a: Vec<i128>, c: i128) {
        self.push(Constraint { a, c, eq: false });
    }

    pub fn eq(&mut self, a: Vec<i128>, c: i128) {
        self.push(Constraint { a, c, eq: true });
    }

    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    fn dedupe(&mut self) {
        let mut seen = HashSet::new();
        self.cons.retain(|c| seen.insert(c.clone()));
        // among inequalities with equal left sides keep the strongest
        let mut best: std::collections::HashMap<Vec<i128>, i128> = std::collections::HashMap::new();
        for c in self.cons.iter().filter(|c| !c.eq) {
            let e = best.entry(c.a.clone()).or_insert(c.c);
            if c.c > *e {
                *e = c.c;
            }
        }
        self.cons.retain(|c| c.eq || best.get(&c.a) == Some(&c.c));
    }

    /// Projects out variable `k` (its column becomes zero).
    pub fn eliminate(&self, k: usize) -> System {
        let mut out = System::new(self.n);
        out.infeasible = self.infeasible;
        if let Some(pi) = self.cons.iter().position(|c| c.eq && c.a[k] != 0) {
            let e = &self.cons[pi];
            let ek = e.a[k];
            for (i, c) in self.cons.iter().enumerate() {
                if i == pi {
                    continue;
                }
                if c.a[k] == 0 {
                    out.push(c.clone());
                    continue;
                }
                // c * |ek| - sign(ek) * c_k * e keeps the inequality direction
                let (cm, em) = if ek > 0 { (ek, -c.a[k]) } else { (-ek, c.a[k]) };
                let mut r = Constraint::combine(c, cm, e, em);
                r.eq = c.eq;
                out.push(r);
            }
        } else {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for c in &self.cons {
                match c.a[k].signum() {
                    0 => out.push(c.clone()),
                    1 => pos.push(c),
                    _ => neg.push(c),
                }
            }
            for p in &pos {
                for q in &neg {
                    let r = Constraint::combine(p, -q.a[k], q, p.a[k]);
                    out.push(Constraint { eq: false, ..r });
                }
            }
        }
        out.dedupe();
        out
    }

    pub fn eliminate_all(&self, vars: impl IntoIterator<Item = usize>) -> System {
        let mut s = self.clone();
        for k in vars {
            s = s.eliminate(k);
            if s.infeasible {
                break;
            }
        }
        s
    }

    /// Real feasibility via full elimination.
    pub fn feasible(&self) -> bool {
        !self.eliminate_all(0..self.n).infeasible
    }

    /// Drops the trailing `n - m` columns, which must be zero.
    pub fn truncate_vars(&self, m: usize) -> System {
        let mut out = System::new(m);
        out.infeasible = self.infeasible;
        for c in &self.cons {
            debug_assert!(c.a[m..].iter().all(|&x| x == 0));
            out.push(Constraint { a: c.a[..m].to_vec(), c: c.c, eq: c.eq });
        }
        out
    }
}

/// Polyhedron `{x in Q^n : constraints}` used as a support piece; lattice
/// points inside it are the admissible exponents.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    pub n: usize,
    pub sys: System,
    /// Base point and generators, when the piece was built that way.
    pub vrep: Option<(Vec<i64>, Vec<Vec<i64>>)>,
}

impl Polyhedron {
    /// `{base + Σ θ_i g_i : θ_i >= 0}`.
    pub fn cone(base: Vec<i64>, gens: Vec<Vec<i64>>) -> Polyhedron {
        let n = base.len();
        let g = gens.len();
        // variables: x (n) then θ (g)
        let mut s = System::new(n + g);
        for i in 0..n {
            let mut a = vec![0i128; n + g];
            a[i] = 1;
            for (j, gen) in gens.iter().enumerate() {
                a[n + j] = -(gen[i] as i128);
            }
            s.eq(a, base[i] as i128);
        }
        for j in 0..g {
            let mut a = vec![0i128; n + g];
            a[n + j] = 1;
            s.ge(a, 0);
        }
        let sys = s.eliminate_all(n..n + g).truncate_vars(n);
        Polyhedron { n, sys, vrep: Some((base, gens)) }
    }

    pub fn point(p: Vec<i64>) -> Polyhedron {
        Polyhedron::cone(p, Vec::new())
    }

    pub fn from_system(sys: System) -> Polyhedron {
        Polyhedron { n: sys.n, sys, vrep: None }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        !self.sys.infeasible && self.sys.cons.iter().all(|c| c.holds(x))
    }

    pub fn is_empty(&self) -> bool {
        !self.sys.feasible()
    }

    /// Recession cone as a homogeneous system.
    pub fn recession(&self) -> System {
        let mut s = System::new(self.n);
        for c in &self.sys.cons {
            s.push(Constraint { a: c.a.clone(), c: 0, eq: c.eq });
        }
        s
    }

    /// Minkowski sum.
    pub fn minkowski(&self, other: &Polyhedron) -> Polyhedron {
        if let (Some((b1, g1)), Some((b2, g2))) = (&self.vrep, &other.vrep) {
            let base = b1.iter().zip(b2).map(|(a, b)| a + b).collect();
            let mut gens = g1.clone();
            for g in g2 {
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
            return Polyhedron::cone(base, gens);
        }
        // variables: x (n), y (n) with y in self and x - y in other
        let n = self.n;
        let mut s = System::new(2 * n);
        for c in &self.sys.cons {
            let mut a = vec![0i128; 2 * n];
            a[n..].copy_from_slice(&c.a);
            s.push(Constraint { a, c: c.c, eq: c.eq });
        }
        for c in &other.sys.cons {
            let mut a = vec![0i128; 2 * n];
            for i in 0..n {
                a[i] = c.a[i];
                a[n + i] = -c.a[i];
            }
            s.push(Constraint { a, c: c.c, eq: c.eq });
        }
        Polyhedron::from_system(s.eliminate_all(n..2 * n).truncate_vars(n))
    }

    /// Intersection with `x_k = value`, dropping coordinate `k`.
    pub fn slice(&self, k: usize, value: i64) -> Polyhedron {
        let mut s = System::new(self.n - 1);
        s.infeasible = self.sys.infeasible;
        for c in &self.sys.cons {
            let mut a = c.a.clone();
            let ak = a.remove(k);
            s.push(Constraint { a, c: c.c - ak * value as i128, eq: c.eq });
        }
        Polyhedron::from_system(s)
    }

    /// Embeds into a larger variable set; `map[i]` is the new index of old
    /// coordinate `i`, and new coordinates not hit are pinned to zero.
    pub fn embed(&self, m: usize, map: &[usize]) -> Polyhedron {
        let mut s = System::new(m);
        s.infeasible = self.sys.infeasible;
        for c in &self.sys.cons {
            let mut a = vec![0i128; m];
            for (i, &j) in map.iter().enumerate() {
                a[j] = c.a[i];
            }
            s.push(Constraint { a, c: c.c, eq: c.eq });
        }
        for j in 0..m {
            if !map.contains(&j) {
                let mut a = vec![0i128; m];
                a[j] = 1;
                s.eq(a, 0);
            }
        }
        let vrep = self.vrep.as_ref().map(|(b, gens)| {
            let lift = |v: &Vec<i64>| {
                let mut out = vec![0i64; m];
                for (i, &j) in map.iter().enumerate() {
                    out[j] = v[i];
                }
                out
            };
            (lift(b), gens.iter().map(lift).collect())
        });
        Polyhedron { n: m, sys: s, vrep }
    }
}

/// Returns a nonzero direction witnessing `rec(p) ∩ -rec(q) != {0}`, if any.
///
/// The witness is a signed unit vector `s e_i` such that some direction with
/// `s x_i >= 1` lies in the intersection.
pub fn opposed_recession(p: &Polyhedron, q: &Polyhedron) -> Option<Vec<i64>> {
    let n = p.n;
    let mut base = p.recession();
    for c in &q.recession().cons {
        base.push(Constraint { a: c.a.iter().map(|x| -x).collect(), c: 0, eq: c.eq });
    }
    for i in 0..n {
        for s in [1i128, -1] {
            let mut sys = base.clone();
            let mut a = vec![0i128; n];
            a[i] = s;
            sys.ge(a, 1);
            if sys.feasible() {
                let mut w = vec![0i64; n];
                w[i] = s as i64;
                return Some(w);
            }
        }
    }
    None
}

/// Lattice points `x` with `x in p` and `e - x in q`, enumerated for any `e`
/// from a single precomputed elimination tower.
#[derive(Clone, Debug)]
pub struct SplitPlan {
    n: usize,
    /// `levels[k]`: constraints over `(x_0..x_k, e)` with nonzero `x_k`
    /// coefficient; `base`: constraints on `e` alone.
    levels: Vec<Vec<Constraint>>,
    base: Vec<Constraint>,
    infeasible: bool,
}

impl SplitPlan {
    pub fn new(p: &Polyhedron, q: &Polyhedron) -> SplitPlan {
        let n = p.n;
        let mut s = System::new(2 * n);
        s.infeasible = p.sys.infeasible || q.sys.infeasible;
        for c in &p.sys.cons {
            let mut a = vec![0i128; 2 * n];
            a[..n].copy_from_slice(&c.a);
            s.push(Constraint { a, c: c.c, eq: c.eq });
        }
        for c in &q.sys.cons {
            // a·(e - x) >= c
            let mut a = vec![0i128; 2 * n];
            for i in 0..n {
                a[i] = -c.a[i];
                a[n + i] = c.a[i];
            }
            s.push(Constraint { a, c: c.c, eq: c.eq });
        }
        let mut levels = vec![Vec::new(); n];
        let mut cur = s;
        for k in (0..n).rev() {
            levels[k] = cur.cons.iter().filter(|c| c.a[k] != 0).cloned().collect();
            cur = cur.eliminate(k);
        }
        let infeasible = cur.infeasible;
        SplitPlan { n, levels, base: cur.cons, infeasible }
    }

    /// Calls `f` on every split point; errors with the unbounded coordinate
    /// if some level has a missing bound.
    pub fn for_each(&self, e: &[i64], f: &mut dyn FnMut(&[i64])) -> Result<(), usize> {
        if self.infeasible {
            return Ok(());
        }
        let n = self.n;
        let mut full = vec![0i64; 2 * n];
        full[n..].copy_from_slice(e);
        if !self.base.iter().all(|c| c.holds(&full)) {
            return Ok(());
        }
        self.rec(0, &mut full, f)
    }

    fn rec(&self, k: usize, full: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) -> Result<(), usize> {
        if k == self.n {
            f(&full[..self.n]);
            return Ok(());
        }
        let mut lo: Option<i128> = None;
        let mut hi: Option<i128> = None;
        for c in &self.levels[k] {
            // a_k x_k (>=|==) c - Σ_{i != k} a_i v_i, with x_{>k} zero here
            let mut rhs = c.c;
            for (i, &a) in c.a.iter().enumerate() {
                if i != k && a != 0 {
                    rhs -= a * full[i] as i128;
                }
            }
            let ak = c.a[k];
            if c.eq {
                if rhs % ak != 0 {
                    return Ok(());
                }
                let v = rhs / ak;
                lo = Some(lo.map_or(v, |l| l.max(v)));
                hi = Some(hi.map_or(v, |h| h.min(v)));
            } else if ak > 0 {
                let v = rhs.ceil_div(ak);
                lo = Some(lo.map_or(v, |l| l.max(v)));
            } else {
                let v = Integer::div_floor(&(-rhs), &(-ak));
                hi = Some(hi.map_or(v, |h| h.min(v)));
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else { return Err(k) };
        for v in lo..=hi {
            full[k] = v as i64;
            self.rec(k + 1, full, f)?;
        }
        full[k] = 0;
        Ok(())
    }
}

trait DivCeil {
    fn ceil_div(self, d: i128) -> i128;
}

impl DivCeil for i128 {
    fn ceil_div(self, d: i128) -> i128 {
        -Integer::div_floor(&(-self), &d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_membership() {
        // {(0,0) + a(1,-1) + b(0,1)} = {x >= 0, x + y >= 0}
        let c = Polyhedron::cone(vec![0, 0], vec![vec![1, -1], vec![0, 1]]);
        assert!(c.contains(&[3, -3]));
        assert!(c.contains(&[3, 5]));
        assert!(!c.contains(&[3, -4]));
        assert!(!c.contains(&[-1, 4]));
        let line = Polyhedron::cone(vec![0, -1], vec![vec![1, -1], vec![-1, 1]]);
        assert!(line.contains(&[5, -6]));
        assert!(line.contains(&[-5, 4]));
        assert!(!line.contains(&[0, 0]));
    }

    #[test]
    fn recession_opposition() {
        let up = Polyhedron::cone(vec![0], vec![vec![1]]);
        let down = Polyhedron::cone(vec![0], vec![vec![-1]]);
        assert!(opposed_recession(&up, &up).is_none());
        assert!(opposed_recession(&up, &down).is_some());
        let line = Polyhedron::cone(vec![0, 0], vec![vec![1, -1], vec![-1, 1]]);
        assert_eq!(opposed_recession(&line, &line), Some(vec![1, 0]));
    }

    #[test]
    fn split_enumeration_counts() {
        // x in [0, inf), e - x in [0, inf): x in 0..=e
        let p = Polyhedron::cone(vec![0], vec![vec![1]]);
        let plan = SplitPlan::new(&p, &p);
        let mut seen = Vec::new();
        plan.for_each(&[3], &mut |x| seen.push(x[0])).unwrap();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        let mut none = 0;
        plan.for_each(&[-1], &mut |_| none += 1).unwrap();
        assert_eq!(none, 0);
    }

    #[test]
    fn minkowski_and_slice() {
        let a = Polyhedron::cone(vec![-1, 0], vec![vec![-1, 1]]);
        let b = Polyhedron::point(vec![0, 2]);
        let s = a.minkowski(&Polyhedron::from_system(b.sys.clone()));
        assert!(s.contains(&[-3, 4]));
        assert!(!s.contains(&[-3, 3]));
        let sl = s.slice(0, -1);
        assert!(sl.contains(&[2]));
        assert!(!sl.contains(&[3]));
    }
}
