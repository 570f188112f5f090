//! The rank-one Heisenberg vertex operator algebra on its momentum-zero Fock
//! space, computed on demand.
//!
//! Basis vectors are `α(-n_1)···α(-n_k)𝟙` with `n_1 ≥ … ≥ n_k ≥ 1`, indexed
//! by weight and then by the position of the partition in a fixed
//! enumeration. Modes are evaluated from the normal-ordered product formula
//! and memoized.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::gen_binom;
use crate::vector::BasisId;
use crate::vertex::{Deg, GradedSpace, RVec, VModule, Voa};
use crate::Rational;

type Partition = Vec<u32>;

#[derive(Default)]
struct Index {
    /// `parts[w]` lists the partitions of `w`.
    parts: Vec<Vec<Partition>>,
    offsets: Vec<u32>,
    ids: HashMap<Partition, BasisId>,
    by_id: Vec<Partition>,
}

/// Partitions of `n` with parts at most `max`, parts in decreasing order.
fn partitions(n: u32, max: u32, prefix: &mut Partition, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for p in (1..=n.min(max)).rev() {
        prefix.push(p);
        partitions(n - p, p, prefix, out);
        prefix.pop();
    }
}

/// The Fock space `F₀`, which is both the algebra and its adjoint module.
pub struct Fock {
    cutoff: i64,
    index: RwLock<Index>,
    acts: Mutex<HashMap<(BasisId, i64, BasisId), Arc<RVec>>>,
    virs: Mutex<HashMap<(i64, BasisId), Arc<RVec>>>,
}

impl Fock {
    /// `cutoff` is the weight up to which spanning sets are enumerated;
    /// modes themselves are exact at every weight.
    pub fn new(cutoff: i64) -> Self {
        Fock {
            cutoff,
            index: RwLock::new(Index::default()),
            acts: Mutex::new(HashMap::new()),
            virs: Mutex::new(HashMap::new()),
        }
    }

    fn ensure(&self, w: usize) {
        if self.index.read().expect("index").parts.len() > w {
            return;
        }
        let mut idx = self.index.write().expect("index");
        while idx.parts.len() <= w {
            let n = idx.parts.len() as u32;
            let mut ps = Vec::new();
            partitions(n, n, &mut Vec::new(), &mut ps);
            let off = idx.by_id.len() as u32;
            for (i, p) in ps.iter().enumerate() {
                idx.ids.insert(p.clone(), off + i as u32);
                idx.by_id.push(p.clone());
            }
            idx.offsets.push(off);
            idx.parts.push(ps);
        }
    }

    pub fn id_of(&self, p: &[u32]) -> BasisId {
        let mut p = p.to_vec();
        p.sort_unstable_by(|a, b| b.cmp(a));
        self.ensure(p.iter().sum::<u32>() as usize);
        self.index.read().expect("index").ids[&p]
    }

    pub fn partition(&self, b: BasisId) -> Partition {
        loop {
            {
                let idx = self.index.read().expect("index");
                if let Some(p) = idx.by_id.get(b as usize) {
                    return p.clone();
                }
            }
            let have = self.index.read().expect("index").parts.len();
            self.ensure(have * 2 + 1);
        }
    }

    /// `α(-n)·p` and `α(n)·p` on partitions, with their coefficients.
    fn apply_positive(counts: &mut HashMap<u32, u32>, m: u32) -> Option<Rational> {
        let c = counts.get_mut(&m)?;
        if *c == 0 {
            return None;
        }
        let f = Rational::from_integer((m as i64 * *c as i64).into());
        *c -= 1;
        Some(f)
    }

    /// Normal-ordered mode `v_j w` for partitions `v`, `w`.
    fn compute_act(&self, v: &Partition, j: i64, w: &Partition) -> RVec {
        let h: i64 = v.iter().map(|&x| x as i64).sum();
        let target = j + 1 - h;
        let mut counts: HashMap<u32, u32> = HashMap::new();
        for &p in w {
            *counts.entry(p).or_default() += 1;
        }
        let mut out = RVec::new();
        // choose annihilators for a subset of the factors, then distribute
        // the remaining mode sum over the creators
        let k = v.len();
        let mut assign: Vec<i64> = vec![0; k];
        self.annihilators(v, 0, &mut assign, &mut counts, Rational::one(), target, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn annihilators(
        &self,
        v: &Partition,
        i: usize,
        assign: &mut Vec<i64>,
        counts: &mut HashMap<u32, u32>,
        coeff: Rational,
        target: i64,
        out: &mut RVec,
    ) {
        if i == v.len() {
            let pos: i64 = assign.iter().filter(|&&m| m > 0).sum();
            let creators: Vec<usize> = (0..v.len()).filter(|&i| assign[i] == 0).collect();
            let neg_sum = target - pos;
            if creators.is_empty() {
                if neg_sum == 0 {
                    let mut p: Partition = Vec::new();
                    for (&part, &c) in counts.iter() {
                        p.extend(std::iter::repeat_n(part, c as usize));
                    }
                    out.add_scaled(&RVec::basis(self.id_of(&p)), &coeff);
                }
                return;
            }
            if neg_sum > -(creators.len() as i64) {
                return;
            }
            let mut ms = vec![0i64; creators.len()];
            self.creators(v, &creators, 0, -neg_sum, &mut ms, counts, &coeff, out);
            return;
        }
        let n = v[i] as i64;
        // factor i creates
        assign[i] = 0;
        self.annihilators(v, i + 1, assign, counts, coeff.clone(), target, out);
        // factor i annihilates a part m of the current state
        let mut parts: Vec<u32> = counts.iter().filter(|(_, &c)| c > 0).map(|(&p, _)| p).collect();
        parts.sort_unstable();
        for m in parts {
            let b = gen_binom(-(m as i64) - 1, (n - 1) as u64);
            if b.is_zero() {
                continue;
            }
            let f = Self::apply_positive(counts, m).expect("part present");
            assign[i] = m as i64;
            self.annihilators(v, i + 1, assign, counts, &coeff * &f * b, target, out);
            *counts.get_mut(&m).expect("part") += 1;
            assign[i] = 0;
        }
    }

    /// Distributes `total = -Σ m_i` over the creator factors, each mode
    /// `m_i ≤ -1`, with coefficient `C(-m_i-1, n_i-1)`.
    #[allow(clippy::too_many_arguments)]
    fn creators(
        &self,
        v: &Partition,
        creators: &[usize],
        idx: usize,
        total: i64,
        ms: &mut Vec<i64>,
        counts: &HashMap<u32, u32>,
        coeff: &Rational,
        out: &mut RVec,
    ) {
        let left = creators.len() - idx;
        if left == 1 {
            ms[idx] = total;
            let mut c = coeff.clone();
            for (k, &ci) in creators.iter().enumerate() {
                let m = -ms[k];
                c *= gen_binom(-m - 1, (v[ci] - 1) as u64);
            }
            if c.is_zero() {
                return;
            }
            let mut p: Partition = Vec::new();
            for (&part, &cnt) in counts.iter() {
                p.extend(std::iter::repeat_n(part, cnt as usize));
            }
            p.extend(ms.iter().map(|&x| x as u32));
            out.add_scaled(&RVec::basis(self.id_of(&p)), &c);
            return;
        }
        for a in 1..=(total - (left as i64 - 1)) {
            ms[idx] = a;
            self.creators(v, creators, idx + 1, total - a, ms, counts, coeff, out);
        }
    }

    /// `Σ_j α(a - j) α(j)` over `j ≥ b`, applied to a partition.
    fn quadratic(&self, shift: i64, from: i64, w: &Partition) -> RVec {
        let wt: i64 = w.iter().map(|&x| x as i64).sum();
        let mut out = RVec::new();
        for j in from..=wt.max(from) {
            let mut counts: HashMap<u32, u32> = HashMap::new();
            for &p in w {
                *counts.entry(p).or_default() += 1;
            }
            let Some(f) = Self::apply_positive(&mut counts, j as u32) else { continue };
            let other = shift - j;
            let mut p: Partition = Vec::new();
            for (&part, &c) in counts.iter() {
                p.extend(std::iter::repeat_n(part, c as usize));
            }
            let f = if other < 0 {
                p.push((-other) as u32);
                f
            } else if other == 0 {
                continue;
            } else {
                let mut cc: HashMap<u32, u32> = HashMap::new();
                for &q in &p {
                    *cc.entry(q).or_default() += 1;
                }
                let Some(g) = Self::apply_positive(&mut cc, other as u32) else { continue };
                p.clear();
                for (&part, &c) in cc.iter() {
                    p.extend(std::iter::repeat_n(part, c as usize));
                }
                f * g
            };
            out.add_scaled(&RVec::basis(self.id_of(&p)), &f);
        }
        out
    }

    /// The algebra with its vacuum, central charge 1.
    pub fn voa(cutoff: i64) -> Arc<Voa> {
        let f = Arc::new(Fock::new(cutoff));
        let vac = f.id_of(&[]);
        Arc::new(Voa {
            name: format!("heisenberg(N={cutoff})"),
            adjoint: f,
            vacuum: RVec::basis(vac),
            central_charge: Some(Rational::one()),
        })
    }

    fn parse_name(name: &str) -> Option<Partition> {
        let mut rest = name.trim();
        let mut p = Vec::new();
        while let Some(r) = rest.strip_prefix("a(-") {
            let (num, tail) = r.split_once(')')?;
            p.push(num.parse::<u32>().ok().filter(|&n| n >= 1)?);
            rest = tail;
        }
        (rest == "1").then_some(p)
    }
}

impl GradedSpace for Fock {
    fn label(&self) -> String {
        "F0".into()
    }

    fn weight(&self, b: BasisId) -> i64 {
        self.partition(b).iter().map(|&x| x as i64).sum()
    }

    fn degree(&self, _b: BasisId) -> Deg {
        0
    }

    fn degree_modulus(&self) -> i64 {
        1
    }

    fn basis_name(&self, b: BasisId) -> String {
        let p = self.partition(b);
        let mut s: String = p.iter().map(|n| format!("a(-{n})")).collect();
        s.push('1');
        s
    }

    fn find(&self, name: &str) -> Option<BasisId> {
        Self::parse_name(name).map(|p| self.id_of(&p))
    }

    fn basis_at(&self, w: i64) -> Vec<BasisId> {
        if w < 0 {
            return Vec::new();
        }
        self.ensure(w as usize);
        let idx = self.index.read().expect("index");
        let off = idx.offsets[w as usize];
        (0..idx.parts[w as usize].len() as u32).map(|i| off + i).collect()
    }

    fn min_weight(&self) -> i64 {
        0
    }

    fn max_weight(&self) -> Option<i64> {
        None
    }

    fn cutoff(&self) -> i64 {
        self.cutoff
    }
}

impl VModule for Fock {
    fn act(&self, v: BasisId, n: i64, w: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.acts.lock().expect("memo").get(&(v, n, w)) {
            return Ok(r.clone());
        }
        let (pv, pw) = (self.partition(v), self.partition(w));
        let h: i64 = pv.iter().map(|&x| x as i64).sum();
        let target = h + self.weight(w) - n - 1;
        let r = if target < 0 { RVec::new() } else { self.compute_act(&pv, n, &pw) };
        let r = Arc::new(r);
        self.acts.lock().expect("memo").insert((v, n, w), r.clone());
        Ok(r)
    }

    fn virasoro(&self, j: i64, w: BasisId) -> Result<Arc<RVec>> {
        if let Some(r) = self.virs.lock().expect("memo").get(&(j, w)) {
            return Ok(r.clone());
        }
        let p = self.partition(w);
        let r = match j {
            0 => RVec::basis(w).scale(&Rational::from_integer(self.weight(w).into())),
            -1 => self.quadratic(-1, 1, &p),
            1 => self.quadratic(1, 2, &p),
            _ => return Err(Error::Config(format!("L({j}) is not part of the Möbius action"))),
        };
        let r = Arc::new(r);
        self.virs.lock().expect("memo").insert((j, w), r.clone());
        Ok(r)
    }
}
