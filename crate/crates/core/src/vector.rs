//! Sparse vectors over interned basis indices, and the coefficient
//! abstraction shared by series and functionals.

use std::fmt::Debug;

use crate::scalar::Scalar;

/// Index of a basis vector of some graded space.
pub type BasisId = u32;

/// Finite linear combination of basis vectors, sorted by index, no zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<S> {
    entries: Vec<(BasisId, S)>,
}

impl<S: Scalar> SparseVec<S> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn basis(i: BasisId) -> Self {
        SparseVec { entries: vec![(i, S::one())] }
    }

    pub fn single(i: BasisId, c: S) -> Self {
        if c.is_zero() {
            Self::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (BasisId, S)>>(it: I) -> Self {
        let mut v: Vec<(BasisId, S)> = it.into_iter().collect();
        v.sort_by_key(|e| e.0);
        let mut entries: Vec<(BasisId, S)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            match entries.last_mut() {
                Some((j, d)) if *j == i => d.add_assign_ref(&c),
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|e| !e.1.is_zero());
        SparseVec { entries }
    }

    pub fn entries(&self) -> &[(BasisId, S)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(BasisId, S)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: BasisId) -> S {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        let mut entries: Vec<(BasisId, S)> = self.entries.iter().map(|(i, a)| (*i, a.rmul(c))).collect();
        entries.retain(|e| !e.1.is_zero());
        SparseVec { entries }
    }

    pub fn neg(&self) -> Self {
        SparseVec { entries: self.entries.iter().map(|(i, a)| (*i, a.rneg())).collect() }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        if other.entries.is_empty() || c.is_zero() {
            return;
        }
        if self.entries.is_empty() {
            *self = other.scale(c);
            return;
        }
        if other.entries.len() == 1 {
            let (i, a) = &other.entries[0];
            let add = a.rmul(c);
            match self.entries.binary_search_by_key(i, |e| e.0) {
                Ok(k) => {
                    self.entries[k].1.add_assign_ref(&add);
                    if self.entries[k].1.is_zero() {
                        self.entries.remove(k);
                    }
                }
                Err(k) => {
                    if !add.is_zero() {
                        self.entries.insert(k, (*i, add));
                    }
                }
            }
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (a, b) = (&self.entries, &other.entries);
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            if q == b.len() || (p < a.len() && a[p].0 < b[q].0) {
                out.push(a[p].clone());
                p += 1;
            } else if p == a.len() || b[q].0 < a[p].0 {
                let v = b[q].1.rmul(c);
                if !v.is_zero() {
                    out.push((b[q].0, v));
                }
                q += 1;
            } else {
                let mut v = a[p].1.clone();
                v.add_mul(&b[q].1, c);
                if !v.is_zero() {
                    out.push((a[p].0, v));
                }
                p += 1;
                q += 1;
            }
        }
        self.entries = out;
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &S::one());
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &S::one().rneg());
        r
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseVec<T> {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (*i, f(c))))
    }
}

impl<S: Scalar> Default for SparseVec<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// Values that can sit in a series coefficient or a functional value:
/// a module over the scalar ring `S`.
pub trait Coeff<S: Scalar>: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn null() -> Self;
    fn is_null(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &S);
    fn scaled(&self, c: &S) -> Self;
    /// Human-readable rendering used in report witnesses.
    fn render(&self) -> String;

    fn accumulate(&mut self, other: &Self) {
        self.add_scaled(other, &S::one());
    }

    fn minus(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &S::one().rneg());
        r
    }
}

impl<S: Scalar> Coeff<S> for S {
    fn null() -> Self {
        <S as num_traits::Zero>::zero()
    }
    fn is_null(&self) -> bool {
        <S as num_traits::Zero>::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &S) {
        self.add_mul(other, c);
    }
    fn scaled(&self, c: &S) -> Self {
        self.rmul(c)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<S: Scalar> Coeff<S> for SparseVec<S> {
    fn null() -> Self {
        SparseVec::new()
    }
    fn is_null(&self) -> bool {
        self.entries.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &S) {
        SparseVec::add_scaled(self, other, c);
    }
    fn scaled(&self, c: &S) -> Self {
        self.scale(c)
    }
    fn render(&self) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.entries.iter().map(|(i, c)| format!("({c})*e{i}")).collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn merge_and_cancel() {
        let mut a = SparseVec::from_pairs(vec![(3, q(1)), (1, q(2)), (3, q(4))]);
        assert_eq!(a.entries(), &[(1, q(2)), (3, q(5))]);
        let b = SparseVec::from_pairs(vec![(1, q(1)), (2, q(7))]);
        a.add_scaled(&b, &q(-2));
        assert_eq!(a.entries(), &[(2, q(-14)), (3, q(5))]);
        a.add_scaled(&SparseVec::single(3, q(5)), &q(-1));
        assert_eq!(a.entries(), &[(2, q(-14))]);
        assert_eq!(a.get(2), q(-14));
        assert_eq!(a.get(9), q(0));
    }
}
