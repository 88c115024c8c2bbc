//! Simple W_N-modules W(a) on lattice-indexed bases, and Lie modules carved out of them.

use crate::rational::{is_int, q, Q};
use crate::rootsys::{LieAlg, LieElement};
use crate::weylalg::WeylPoly;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

pub type Idx = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParamClass {
    NegInt,
    NonnegInt,
    NonInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylParams {
    pub a: Vec<Q>,
}

impl WeylParams {
    pub fn new(a: Vec<Q>) -> Self {
        WeylParams { a }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn class(&self, i: usize) -> ParamClass {
        let x = &self.a[i];
        if !is_int(x) {
            ParamClass::NonInt
        } else if x.is_negative() {
            ParamClass::NegInt
        } else {
            ParamClass::NonnegInt
        }
    }

    pub fn classes(&self) -> Vec<ParamClass> {
        (0..self.len()).map(|i| self.class(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error("lattice point {0:?} is not in K")]
    NotInK(Idx),
    #[error("length mismatch: {0} parameters, {1} coordinates")]
    Length(usize, usize),
}

/// `a_i + k_i < 0 ⟺ a_i < 0` for every integral `a_i`.
pub fn k_member(a: &WeylParams, k: &[i64]) -> bool {
    a.a.iter().zip(k).all(|(ai, &ki)| {
        if !is_int(ai) {
            return true;
        }
        let s = ai + q(ki);
        s.is_negative() == ai.is_negative()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    Q(usize),
    P(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTerm {
    pub coeff: Q,
    pub target: Idx,
}

pub fn weyl_act(g: Gen, a: &WeylParams, k: &[i64]) -> Result<ActionTerm, WeylError> {
    if a.len() != k.len() {
        return Err(WeylError::Length(a.len(), k.len()));
    }
    if !k_member(a, k) {
        return Err(WeylError::NotInK(k.to_vec()));
    }
    Ok(weyl_act_unchecked(g, a, k))
}

pub(crate) fn weyl_act_unchecked(g: Gen, a: &WeylParams, k: &[i64]) -> ActionTerm {
    let mut target = k.to_vec();
    let coeff = match g {
        Gen::Q(i) => {
            target[i] += 1;
            if a.class(i) == ParamClass::NegInt {
                &a.a[i] + q(k[i] + 1)
            } else {
                Q::one()
            }
        }
        Gen::P(i) => {
            target[i] -= 1;
            if a.class(i) == ParamClass::NegInt {
                Q::one()
            } else {
                &a.a[i] + q(k[i])
            }
        }
    };
    ActionTerm { coeff, target }
}

/// Sparse vector on lattice basis vectors.
pub type LVec = BTreeMap<Idx, Q>;

pub fn lvec_add(v: &mut LVec, k: Idx, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&k);
    }
}

fn apply_gen(g: Gen, a: &WeylParams, v: &LVec) -> LVec {
    let mut out = LVec::new();
    for (k, c) in v {
        let t = weyl_act_unchecked(g, a, k);
        if !t.coeff.is_zero() {
            lvec_add(&mut out, t.target, c * t.coeff);
        }
    }
    out
}

/// Applies a normal-ordered Weyl polynomial to x(k): p's first, then q's.
pub fn apply_poly(w: &WeylPoly, a: &WeylParams, k: &[i64]) -> LVec {
    let mut out = LVec::new();
    for (m, c) in &w.terms {
        let mut v = LVec::new();
        v.insert(k.to_vec(), Q::one());
        for i in 0..w.n {
            for _ in 0..m.p[i] {
                v = apply_gen(Gen::P(i), a, &v);
            }
        }
        for i in 0..w.n {
            for _ in 0..m.q[i] {
                v = apply_gen(Gen::Q(i), a, &v);
            }
        }
        for (t, x) in v {
            lvec_add(&mut out, t, x * c);
        }
    }
    out
}

/// Points of the box |k_i| ≤ b satisfying `keep`.
pub fn box_points(n: usize, b: i64, keep: impl Fn(&[i64]) -> bool) -> Vec<Idx> {
    let mut out = Vec::new();
    let mut k = vec![-b; n];
    if n == 0 {
        return vec![vec![]];
    }
    loop {
        if keep(&k) {
            out.push(k.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if k[i] < b {
                k[i] += 1;
                break;
            }
            k[i] = -b;
            i += 1;
        }
    }
}

/// Generators acting with nonzero coefficient but landing outside K.
pub fn boundary_audit(a: &WeylParams, b: i64) -> Vec<(Gen, Idx)> {
    let mut bad = Vec::new();
    for k in box_points(a.len(), b, |k| k_member(a, k)) {
        for i in 0..a.len() {
            for g in [Gen::Q(i), Gen::P(i)] {
                let t = weyl_act_unchecked(g, a, &k);
                if !t.coeff.is_zero() && !k_member(a, &t.target) {
                    bad.push((g, k.clone()));
                }
            }
        }
    }
    bad
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub points_checked: usize,
    pub relations_checked: usize,
    pub violations: Vec<String>,
}

/// Checks [q_i,q_j] = [p_i,p_j] = 0 and [p_i,q_j] = δ_ij on K ∩ window.
pub fn check_weyl_relations(a: &WeylParams, b: i64) -> RelationReport {
    let n = a.len();
    let pts = box_points(n, b, |k| k_member(a, k));
    let mut checked = 0;
    let mut violations = Vec::new();
    let comm = |x: Gen, y: Gen, k: &Idx| -> LVec {
        let mut v = LVec::new();
        v.insert(k.clone(), Q::one());
        let xy = apply_gen(x, a, &apply_gen(y, a, &v));
        let yx = apply_gen(y, a, &apply_gen(x, a, &v));
        let mut out = xy;
        for (t, c) in yx {
            lvec_add(&mut out, t, -c);
        }
        out
    };
    for k in &pts {
        for i in 0..n {
            for j in 0..n {
                let cases = [
                    (Gen::Q(i), Gen::Q(j), Q::zero()),
                    (Gen::P(i), Gen::P(j), Q::zero()),
                    (Gen::P(i), Gen::Q(j), if i == j { Q::one() } else { Q::zero() }),
                ];
                for (x, y, d) in cases {
                    checked += 1;
                    let got = comm(x, y, k);
                    let mut want = LVec::new();
                    lvec_add(&mut want, k.clone(), d);
                    if got != want {
                        violations.push(format!("[{x:?},{y:?}] at {k:?}"));
                    }
                }
            }
        }
    }
    RelationReport {
        points_checked: pts.len(),
        relations_checked: checked,
        violations,
    }
}

/// Strong connectivity of the q/p action graph on K ∩ window.
pub fn transitivity_probe(a: &WeylParams, b: i64) -> bool {
    let pts = box_points(a.len(), b, |k| k_member(a, k));
    let set: BTreeSet<Idx> = pts.iter().cloned().collect();
    let n = a.len();
    let edges = |k: &Idx, rev: bool| -> Vec<Idx> {
        let mut out = Vec::new();
        for i in 0..n {
            for g in [Gen::Q(i), Gen::P(i)] {
                if !rev {
                    let t = weyl_act_unchecked(g, a, k);
                    if !t.coeff.is_zero() && set.contains(&t.target) {
                        out.push(t.target);
                    }
                } else {
                    // predecessors: s with g(s) = k and nonzero coefficient
                    let mut s = k.clone();
                    match g {
                        Gen::Q(i) => s[i] -= 1,
                        Gen::P(i) => s[i] += 1,
                    }
                    if set.contains(&s) && !weyl_act_unchecked(g, a, &s).coeff.is_zero() {
                        out.push(s);
                    }
                }
            }
        }
        out
    };
    let reach = |rev: bool| -> usize {
        let Some(start) = pts.first() else { return 0 };
        let mut seen: BTreeSet<Idx> = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(k) = queue.pop_front() {
            for t in edges(&k, rev) {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen.len()
    };
    reach(false) == pts.len() && reach(true) == pts.len()
}

/// Which lattice points of W(a) span the module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    /// All of K.
    All,
    /// Σ k_i = 0 (type A).
    SumZero,
    /// Σ k_i even (type C).
    SumEven,
    /// Coordinates grouped into blocks; each block keeps its sum (or its sum's
    /// parity when `parity` is set), coordinates outside every block are frozen.
    Slice { base: Idx, blocks: Vec<(Vec<usize>, bool)> },
}

impl Constraint {
    pub fn admits(&self, k: &[i64]) -> bool {
        match self {
            Constraint::All => true,
            Constraint::SumZero => k.iter().sum::<i64>() == 0,
            Constraint::SumEven => k.iter().sum::<i64>().rem_euclid(2) == 0,
            Constraint::Slice { base, blocks } => {
                let mut covered = vec![false; k.len()];
                for (blk, parity) in blocks {
                    let s: i64 = blk.iter().map(|&i| k[i]).sum();
                    let s0: i64 = blk.iter().map(|&i| base[i]).sum();
                    if *parity {
                        if (s - s0).rem_euclid(2) != 0 {
                            return false;
                        }
                    } else if s != s0 {
                        return false;
                    }
                    for &i in blk {
                        covered[i] = true;
                    }
                }
                (0..k.len()).all(|i| covered[i] || k[i] == base[i])
            }
        }
    }
}

/// A g-module spanned by {x(k) : k ∈ K, constraint(k)} inside W(a), with g acting
/// through its Weyl realization.
#[derive(Debug, Clone)]
pub struct LatticeModule {
    pub alg: Arc<LieAlg>,
    pub params: WeylParams,
    pub constraint: Constraint,
}

/// Window-bounded answer: the exact result, or a marker that some target left the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Windowed<T> {
    In(T),
    OutOfWindow,
}

impl LatticeModule {
    pub fn new(alg: Arc<LieAlg>, params: WeylParams, constraint: Constraint) -> Self {
        assert_eq!(alg.nvars, params.len());
        LatticeModule {
            alg,
            params,
            constraint,
        }
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.len() == self.params.len() && k_member(&self.params, k) && self.constraint.admits(k)
    }

    /// Basis element `x` of g applied to x(k).
    pub fn act(&self, x: usize, k: &[i64]) -> LVec {
        apply_poly(&self.alg.images[x], &self.params, k)
    }

    pub fn act_elem(&self, x: &LieElement, k: &[i64]) -> LVec {
        let mut out = LVec::new();
        for (i, c) in x.terms() {
            for (t, v) in self.act(i, k) {
                lvec_add(&mut out, t, v * c);
            }
        }
        out
    }

    pub fn act_vec(&self, x: usize, v: &LVec) -> LVec {
        let mut out = LVec::new();
        for (k, c) in v {
            for (t, w) in self.act(x, k) {
                lvec_add(&mut out, t, w * c);
            }
        }
        out
    }

    /// Single-term action of a root vector: (coefficient, target).
    pub fn act_root(&self, x: usize, k: &[i64]) -> (Q, Idx) {
        let v = self.act(x, k);
        let shift = crate::rootsys::lie::eps_coords(self.alg.ty(), &self.alg.weight(x));
        let target: Idx = k.iter().zip(&shift).map(|(a, b)| a + b).collect();
        debug_assert!(v.len() <= 1);
        let c = v.get(&target).cloned().unwrap_or_else(Q::zero);
        (c, target)
    }

    /// H_{e_1..e_n} eigenvalues on x(k).
    pub fn weight(&self, k: &[i64]) -> Vec<Q> {
        (0..self.alg.rank())
            .map(|i| {
                let v = self.act(self.alg.h(i), k);
                v.get(k).cloned().unwrap_or_else(Q::zero)
            })
            .collect()
    }

    pub fn window(&self, b: i64) -> Vec<Idx> {
        box_points(self.params.len(), b, |k| self.contains(k))
    }

    /// Basis action restricted to a window.
    pub fn act_in(&self, x: usize, k: &[i64], b: i64) -> Windowed<LVec> {
        let v = self.act(x, k);
        if v.keys().all(|t| t.iter().all(|c| c.abs() <= b)) {
            Windowed::In(v)
        } else {
            Windowed::OutOfWindow
        }
    }
}

/// Weight as an affine function of k: weight(k)_i = base_i + Σ_j lin_ij k_j.
pub fn weight_affine(m: &LatticeModule) -> (Vec<Q>, Vec<Vec<Q>>) {
    let nv = m.params.len();
    let mut base = Vec::new();
    let mut lin = Vec::new();
    for i in 0..m.alg.rank() {
        let mut b = Q::zero();
        let mut row = vec![Q::zero(); nv];
        for (mono, c) in &m.alg.images[m.alg.h(i)].terms {
            match (0..nv).find(|&j| mono.q[j] == 1 && mono.p[j] == 1) {
                Some(j) => {
                    row[j] += c;
                    b += c * &m.params.a[j];
                }
                None => b += c,
            }
        }
        base.push(b);
        lin.push(row);
    }
    (base, lin)
}

/// The basis index of `m` carrying the weight `w`, if any (unique for the
/// constrained degree-1 modules; `None` when the weight space is empty).
pub fn weight_preimage(m: &LatticeModule, w: &[Q]) -> Option<Idx> {
    let nv = m.params.len();
    let (base, lin) = weight_affine(m);
    let mut rows = lin;
    let mut rhs: Vec<Q> = w.iter().zip(&base).map(|(a, b)| a - b).collect();
    match &m.constraint {
        Constraint::SumZero => {
            rows.push(vec![Q::one(); nv]);
            rhs.push(Q::zero());
        }
        Constraint::Slice { base: kb, blocks } => {
            let mut covered = vec![false; nv];
            for (blk, parity) in blocks {
                for &i in blk {
                    covered[i] = true;
                }
                if !parity {
                    let mut r = vec![Q::zero(); nv];
                    for &i in blk {
                        r[i] = Q::one();
                    }
                    rows.push(r);
                    rhs.push(q(blk.iter().map(|&i| kb[i]).sum()));
                }
            }
            for i in (0..nv).filter(|&i| !covered[i]) {
                let mut r = vec![Q::zero(); nv];
                r[i] = Q::one();
                rows.push(r);
                rhs.push(q(kb[i]));
            }
        }
        Constraint::All | Constraint::SumEven => {}
    }
    let a = crate::linalg::Matrix::from_rows(nv, rows);
    let (x, null) = crate::linalg::solve(&a, &rhs)?;
    if !null.is_empty() || !x.iter().all(is_int) {
        return None;
    }
    let k: Idx = x.iter().map(|v| crate::rational::as_i64(v).unwrap()).collect();
    m.contains(&k).then_some(k)
}

/// Weight-indexed lookup for a window: weight → basis points.
pub fn weight_classes(m: &LatticeModule, pts: &[Idx]) -> HashMap<Vec<Q>, Vec<Idx>> {
    let mut map: HashMap<Vec<Q>, Vec<Idx>> = HashMap::new();
    for k in pts {
        map.entry(m.weight(k)).or_default().push(k.clone());
    }
    map
}
