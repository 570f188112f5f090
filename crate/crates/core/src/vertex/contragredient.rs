//! The contragredient module `W′` on the graded dual basis.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{opposite_mode, Deg, GradedSpace, RVec, VModule, Voa};
use crate::error::Result;
use crate::vector::BasisId;

/// `W′` with `⟨Y′(v,x)w′, w⟩ = ⟨w′, Y°(v,x)w⟩`. Basis vector `b` of `W′` is
/// the dual of basis vector `b` of `W`.
pub struct Contragredient {
    v_alg: Arc<Voa>,
    inner: Arc<dyn VModule>,
    acts: Mutex<HashMap<(BasisId, i64, BasisId), Arc<RVec>>>,
    virs: Mutex<HashMap<(i64, BasisId), Arc<RVec>>>,
}

impl Contragredient {
    pub fn new(v_alg: Arc<Voa>, inner: Arc<dyn VModule>) -> Self {
        Contragredient { v_alg, inner, acts: Mutex::new(HashMap::new()), virs: Mutex::new(HashMap::new()) }
    }

    pub fn inner(&self) -> &Arc<dyn VModule> {
        &self.inner
    }
}

impl GradedSpace for Contragredient {
    fn label(&self) -> String {
        format!("{}'", self.inner.label())
    }

    fn weight(&self, b: BasisId) -> i64 {
        self.inner.weight(b)
    }

    fn degree(&self, b: BasisId) -> Deg {
        self.inner.reduce_degree(-self.inner.degree(b))
    }

    fn degree_modulus(&self) -> i64 {
        self.inner.degree_modulus()
    }

    fn basis_name(&self, b: BasisId) -> String {
        format!("{}'", self.inner.basis_name(b))
    }

    fn find(&self, name: &str) -> Option<BasisId> {
        self.inner.find(name.strip_suffix('\'')?)
    }

    fn basis_at(&self, w: i64) -> Vec<BasisId> {
        self.inner.basis_at(w)
    }

    fn min_weight(&self) -> i64 {
        self.inner.min_weight()
    }

    fn max_weight(&self) -> Option<i64> {
        self.inner.max_weight()
    }

    fn cutoff(&self) -> i64 {
        self.inner.cutoff()
    }
}

impl VModule for Contragredient {
    fn act(&self, v: BasisId, n: i64, wd: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.acts.lock().expect("memo").get(&(v, n, wd)) {
            return Ok(r.clone());
        }
        let target = self.v_alg.weight(v) + self.weight(wd) - n - 1;
        let mut out = RVec::new();
        if target >= self.min_weight() {
            for w in self.inner.basis_at(target) {
                let c = opposite_mode(&self.v_alg, self.inner.as_ref(), v, n, w)?.get(wd);
                if !num_traits::Zero::is_zero(&c) {
                    out.add_scaled(&RVec::basis(w), &c);
                }
            }
        }
        let out = Arc::new(out);
        self.acts.lock().expect("memo").insert((v, n, wd), out.clone());
        Ok(out)
    }

    fn virasoro(&self, j: i64, wd: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.virs.lock().expect("memo").get(&(j, wd)) {
            return Ok(r.clone());
        }
        let mut out = RVec::new();
        let target = self.weight(wd) - j;
        if target >= self.min_weight() {
            for w in self.inner.basis_at(target) {
                let c = self.inner.virasoro(-j, w)?.get(wd);
                if !num_traits::Zero::is_zero(&c) {
                    out.add_scaled(&RVec::basis(w), &c);
                }
            }
        }
        let out = Arc::new(out);
        self.virs.lock().expect("memo").insert((j, wd), out.clone());
        Ok(out)
    }
}
