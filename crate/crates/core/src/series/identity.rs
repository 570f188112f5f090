//! Windowed coefficient comparison.

use serde::Serialize;

use super::{Series, Vars};
use crate::scalar::Scalar;
use crate::vector::Coeff;

/// Closed integer box of exponents, one range per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub vars: Vec<String>,
    pub ranges: Vec<(i64, i64)>,
}

impl Window {
    pub fn cube(vars: &Vars, r: i64) -> Window {
        Window { vars: vars.names().to_vec(), ranges: vec![(-r, r); vars.len()] }
    }

    pub fn boxed(vars: &Vars, ranges: Vec<(i64, i64)>) -> Window {
        assert_eq!(ranges.len(), vars.len());
        Window { vars: vars.names().to_vec(), ranges }
    }

    pub fn size(&self) -> usize {
        self.ranges.iter().map(|(a, b)| (b - a + 1).max(0) as usize).product()
    }

    /// All exponent vectors in lexicographic order.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.size());
        let mut cur: Vec<i64> = self.ranges.iter().map(|r| r.0).collect();
        if self.ranges.iter().any(|(a, b)| a > b) {
            return out;
        }
        loop {
            out.push(cur.clone());
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.ranges[i].1 {
                    cur[i] += 1;
                    break;
                }
                cur[i] = self.ranges[i].0;
            }
        }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> =
            self.vars.iter().zip(&self.ranges).map(|(v, (a, b))| format!("{v}:[{a},{b}]")).collect();
        parts.join(" ")
    }
}

/// One disagreeing coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exps: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of a windowed comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub window: Window,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub error: Option<String>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.error.is_none()
    }
}

/// Witness lists are capped; the count of checked points is always exact.
pub const MAX_WITNESSES: usize = 16;

pub fn check_identity<S: Scalar, C: Coeff<S>>(
    name: &str,
    lhs: &Series<S, C>,
    rhs: &Series<S, C>,
    window: &Window,
) -> IdentityReport {
    let mut rep = IdentityReport {
        name: name.to_string(),
        window: window.clone(),
        checked: 0,
        mismatches: Vec::new(),
        error: None,
    };
    if lhs.vars() != rhs.vars() {
        rep.error = Some(format!("variable sets differ: {:?} vs {:?}", lhs.vars(), rhs.vars()));
        return rep;
    }
    for e in window.points() {
        let (a, b) = match (lhs.coeff(&e), rhs.coeff(&e)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(err), _) | (_, Err(err)) => {
                rep.error = Some(format!("at {e:?}: {err}"));
                return rep;
            }
        };
        rep.checked += 1;
        if a != b && rep.mismatches.len() < MAX_WITNESSES {
            rep.mismatches.push(Mismatch { exps: e, lhs: a.render(), rhs: b.render() });
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Polyhedron;
    use crate::Rational;
    use num_traits::One;

    #[test]
    fn window_points_and_mismatch() {
        let v = Vars::new(&["x"]).unwrap();
        let w = Window::cube(&v, 2);
        assert_eq!(w.points().len(), 5);
        let delta = Series::<Rational>::from_fn(
            v.clone(),
            vec![Polyhedron::cone(vec![0], vec![vec![1], vec![-1]])],
            |_| Ok(Rational::one()),
        );
        let plus_one = delta.add(&Series::monomial(v.clone(), vec![0], Rational::one())).unwrap();
        let rep = check_identity("shifted", &delta, &plus_one, &w);
        assert!(!rep.pass());
        assert_eq!(rep.mismatches.len(), 1);
        assert_eq!(rep.mismatches[0].exps, vec![0]);
        assert_eq!(rep.checked, 5);
    }
}
