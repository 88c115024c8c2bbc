//! Weight-graded cocycles between lattice modules, extensions, coboundary
//! solving on windows, and the linear systems that force self-extensions of the
//! degree-1 families to split.

use crate::linalg::{solve, Matrix};
use crate::rational::{fmt_q, q, show_q, Q};
use crate::rootsys::lie::eps_coords;
use crate::rootsys::{add, neg, unit, LieAlg};
use crate::weylmod::{lvec_add, weight_preimage, Idx, LVec, LatticeModule};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error("X⁻ has a zero coefficient at {0:?}: module is not cuspidal on the window")]
    NotCuspidal(Idx),
    #[error("cocycle identity fails: {0}")]
    CocycleViolation(String),
    #[error("certification impossible on window B={0}: {1}")]
    CertificationImpossible(i64, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// c(X) for the root vectors X on the window points of the source module; c(h) = 0.
/// Each value is a vector of the target module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub window: i64,
    pub values: BTreeMap<(usize, Idx), LVec>,
}

impl Cocycle {
    pub fn zero(window: i64) -> Self {
        Cocycle {
            window,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_empty())
    }

    /// c(x) applied to x(k), or `None` when k is outside the window.
    pub fn apply(&self, x: usize, k: &[i64], alg: &LieAlg) -> Option<LVec> {
        if k.iter().any(|v| v.abs() > self.window) {
            return None;
        }
        if alg.is_cartan(x) {
            return Some(LVec::new());
        }
        Some(self.values.get(&(x, k.to_vec())).cloned().unwrap_or_default())
    }

    fn apply_vec(&self, x: usize, v: &LVec, alg: &LieAlg) -> Option<LVec> {
        let mut out = LVec::new();
        for (k, c) in v {
            for (t, d) in self.apply(x, k, alg)? {
                lvec_add(&mut out, t, d * c);
            }
        }
        Some(out)
    }
}

fn root_vectors(alg: &LieAlg) -> Vec<usize> {
    (0..alg.dim()).filter(|&i| !alg.is_cartan(i)).collect()
}

fn apply_elem_vec(m: &LatticeModule, x: &crate::rootsys::LieElement, v: &LVec) -> LVec {
    let mut out = LVec::new();
    for (i, c) in x.terms() {
        for (t, d) in m.act_vec(i, v) {
            lvec_add(&mut out, t, d * c);
        }
    }
    out
}

fn unit_vec(k: &[i64]) -> LVec {
    let mut v = LVec::new();
    v.insert(k.to_vec(), Q::one());
    v
}

/// Failures of c([X,Y]) = [c(X),Y] + [X,c(Y)] on window vectors of `m` where every
/// intermediate vector stays inside the window. Returns (checked, failures).
pub fn cocycle_check(c: &Cocycle, n: &LatticeModule, m: &LatticeModule) -> (usize, Vec<String>) {
    let alg = &m.alg;
    let d = alg.dim();
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in m.window(c.window) {
        let v = unit_vec(&k);
        for x in 0..d {
            for y in 0..d {
                let br = alg.bracket_basis(x, y);
                let mut lhs = LVec::new();
                let mut ok = true;
                for (z, s) in br.terms() {
                    match c.apply(z, &k, alg) {
                        Some(w) => {
                            for (t, e) in w {
                                lvec_add(&mut lhs, t, e * s);
                            }
                        }
                        None => ok = false,
                    }
                }
                let yv = m.act_vec(y, &v);
                let xv = m.act_vec(x, &v);
                let (Some(cx_y), Some(cy_x), Some(cx), Some(cy)) = (
                    c.apply_vec(x, &yv, alg),
                    c.apply_vec(y, &xv, alg),
                    c.apply(x, &k, alg),
                    c.apply(y, &k, alg),
                ) else {
                    continue;
                };
                if !ok {
                    continue;
                }
                checked += 1;
                let mut rhs = cx_y;
                for (t, e) in n.act_vec(y, &cx) {
                    lvec_add(&mut rhs, t, -e);
                }
                for (t, e) in n.act_vec(x, &cy) {
                    lvec_add(&mut rhs, t, e);
                }
                for (t, e) in cy_x {
                    lvec_add(&mut rhs, t, -e);
                }
                if lhs != rhs {
                    bad.push(format!("({}, {}, {:?})", alg.name(x), alg.name(y), k));
                }
            }
        }
    }
    (checked, bad)
}

/// The sl2 cocycle c(X⁺) = b·(X⁻)⁻¹, c(H) = c(X⁻) = 0 on an A1 module.
pub fn make_sl2_cocycle(b: &Q, m: &LatticeModule, window: i64) -> Result<Cocycle, ExtError> {
    let alg = &m.alg;
    if alg.rank() != 1 {
        return Err(ExtError::Unsupported(format!("sl2 cocycle on {}", alg.ty())));
    }
    let xp = alg.x(&[1]);
    let xm = alg.x(&[-1]);
    let shift = eps_coords(alg.ty(), &[1]);
    let mut c = Cocycle::zero(window);
    for k in m.window(window) {
        let t: Idx = k.iter().zip(&shift).map(|(a, s)| a + s).collect();
        let (coef, back) = m.act_root(xm, &t);
        if coef.is_zero() || back != k {
            return Err(ExtError::NotCuspidal(t));
        }
        if !b.is_zero() {
            let mut v = LVec::new();
            v.insert(t, b / coef);
            c.values.insert((xp, k), v);
        }
    }
    Ok(c)
}

/// 0 → N → V → M → 0 with X·(n, m) = (X·n + c(X)(m), X·m).
#[derive(Debug, Clone)]
pub struct ExtensionModule {
    pub n: LatticeModule,
    pub m: LatticeModule,
    pub cocycle: Cocycle,
}

pub fn build_extension(c: Cocycle, n: LatticeModule, m: LatticeModule) -> Result<ExtensionModule, ExtError> {
    let (_, bad) = cocycle_check(&c, &n, &m);
    if let Some(w) = bad.first() {
        return Err(ExtError::CocycleViolation(w.clone()));
    }
    Ok(ExtensionModule { n, m, cocycle: c })
}

impl ExtensionModule {
    /// X·(nv, mv); `None` when c is needed outside its window.
    pub fn act(&self, x: usize, nv: &LVec, mv: &LVec) -> Option<(LVec, LVec)> {
        let mut top = self.n.act_vec(x, nv);
        for (t, c) in self.cocycle.apply_vec(x, mv, &self.m.alg)? {
            lvec_add(&mut top, t, c);
        }
        Some((top, self.m.act_vec(x, mv)))
    }

    /// [X,Y]w = X(Yw) − Y(Xw) on (0, x(k)) for window k, where defined.
    pub fn bracket_fidelity(&self) -> (usize, Vec<String>) {
        let alg = &self.m.alg;
        let mut checked = 0;
        let mut bad = Vec::new();
        let zero = LVec::new();
        for k in self.m.window(self.cocycle.window) {
            let v = unit_vec(&k);
            for x in 0..alg.dim() {
                for y in 0..alg.dim() {
                    let (Some(xv), Some(yv)) = (self.act(x, &zero, &v), self.act(y, &zero, &v)) else {
                        continue;
                    };
                    let (Some(xyv), Some(yxv)) = (self.act(x, &yv.0, &yv.1), self.act(y, &xv.0, &xv.1)) else {
                        continue;
                    };
                    let br = alg.bracket_basis(x, y);
                    let mut lt = LVec::new();
                    let mut ok = true;
                    for (z, s) in br.terms() {
                        match self.act(z, &zero, &v) {
                            Some((a, _)) => {
                                for (t, e) in a {
                                    lvec_add(&mut lt, t, e * s);
                                }
                            }
                            None => ok = false,
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let lb = apply_elem_vec(&self.m, br, &v);
                    checked += 1;
                    let mut rt = xyv.0;
                    for (t, e) in yxv.0 {
                        lvec_add(&mut rt, t, -e);
                    }
                    let mut rb = xyv.1;
                    for (t, e) in yxv.1 {
                        lvec_add(&mut rb, t, -e);
                    }
                    if lt != rt || lb != rb {
                        bad.push(format!("[{}, {}] on {:?}", alg.name(x), alg.name(y), k));
                    }
                }
            }
        }
        (checked, bad)
    }
}

/// Weight-matching map M → N: for each source index, the target index of equal weight.
fn matching(m: &LatticeModule, n: &LatticeModule, pts: impl IntoIterator<Item = Idx>) -> BTreeMap<Idx, Idx> {
    pts.into_iter()
        .filter_map(|k| weight_preimage(n, &m.weight(&k)).map(|t| (k, t)))
        .collect()
}

/// A weight-degree-0 map φ: x(k) ↦ f(k)·y(σ(k)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoboundaryWitness {
    pub phi: BTreeMap<Idx, Q>,
}

/// Points reached from the window by one root vector, plus the window itself.
fn window_closure(m: &LatticeModule, b: i64) -> BTreeSet<Idx> {
    let mut pts: BTreeSet<Idx> = m.window(b).into_iter().collect();
    for k in m.window(b) {
        for x in root_vectors(&m.alg) {
            let (c, t) = m.act_root(x, &k);
            if !c.is_zero() {
                pts.insert(t);
            }
        }
    }
    pts
}

/// c = [·, φ] restricted to the window.
pub fn make_coboundary(phi: &BTreeMap<Idx, Q>, n: &LatticeModule, m: &LatticeModule, b: i64) -> Cocycle {
    let sigma = matching(m, n, window_closure(m, b));
    let mut c = Cocycle::zero(b);
    for k in m.window(b) {
        for x in root_vectors(&m.alg) {
            let mut v = LVec::new();
            if let (Some(f), Some(t)) = (phi.get(&k), sigma.get(&k)) {
                for (u, e) in n.act(x, t) {
                    lvec_add(&mut v, u, e * f);
                }
            }
            for (t, e) in m.act(x, &k) {
                if let (Some(f), Some(s)) = (phi.get(&t), sigma.get(&t)) {
                    lvec_add(&mut v, s.clone(), -(e * f));
                }
            }
            if !v.is_empty() {
                c.values.insert((x, k.clone()), v);
            }
        }
    }
    c
}

/// Solves c(X) = [X, φ] on window points of radius `radius` ≤ c.window;
/// φ ranges over weight-degree-0 maps on the window and its one-step neighbours.
pub fn is_coboundary(c: &Cocycle, n: &LatticeModule, m: &LatticeModule, radius: i64) -> Option<CoboundaryWitness> {
    let alg = &m.alg;
    let sigma = matching(m, n, window_closure(m, c.window));
    let unknowns: Vec<Idx> = sigma.keys().cloned().collect();
    let pos: HashMap<Idx, usize> = unknowns.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut rows: BTreeMap<(usize, Idx, Idx), Vec<(usize, Q)>> = BTreeMap::new();
    let mut rhs: BTreeMap<(usize, Idx, Idx), Q> = BTreeMap::new();
    for k in m.window(radius) {
        for x in root_vectors(alg) {
            let target = c.apply(x, &k, alg).unwrap_or_default();
            let mut keys: BTreeSet<Idx> = target.keys().cloned().collect();
            if let Some(t) = sigma.get(&k) {
                for (u, e) in n.act(x, t) {
                    keys.insert(u.clone());
                    rows.entry((x, k.clone(), u)).or_default().push((pos[&k], e));
                }
            }
            for (t, e) in m.act(x, &k) {
                if let Some(s) = sigma.get(&t) {
                    keys.insert(s.clone());
                    rows.entry((x, k.clone(), s.clone())).or_default().push((pos[&t], -e));
                }
            }
            for u in keys {
                let key = (x, k.clone(), u.clone());
                rows.entry(key.clone()).or_default();
                rhs.insert(key, target.get(&u).cloned().unwrap_or_else(Q::zero));
            }
        }
    }
    let mut a = Matrix::zeros(0, unknowns.len());
    let mut b = Vec::new();
    for (key, entries) in &rows {
        let mut r = vec![Q::zero(); unknowns.len()];
        for (i, e) in entries {
            r[*i] += e;
        }
        a.push_row(r);
        b.push(rhs[key].clone());
    }
    let (x, _) = solve(&a, &b)?;
    Some(CoboundaryWitness {
        phi: unknowns.into_iter().zip(x).collect(),
    })
}

/// Window cocycles: weight-graded c(X) for root vectors X, c(h) = 0, with the
/// cocycle identity imposed wherever all its terms are inside the window.
#[derive(Debug, Clone)]
pub struct CocycleSpace {
    pub window: i64,
    /// (root vector, source index, target index) per unknown.
    pub slots: Vec<(usize, Idx, Idx)>,
    pub basis: Vec<Vec<Q>>,
}

impl CocycleSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cocycle(&self, coeffs: &[Q]) -> Cocycle {
        let mut c = Cocycle::zero(self.window);
        for (j, (x, k, t)) in self.slots.iter().enumerate() {
            let v: Q = self.basis.iter().zip(coeffs).map(|(b, s)| &b[j] * s).sum();
            if !v.is_zero() {
                c.values.entry((*x, k.clone())).or_default().insert(t.clone(), v);
            }
        }
        c
    }
}

type Form = BTreeMap<usize, Q>;

fn form_add(f: &mut Form, i: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = f.entry(i).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        f.remove(&i);
    }
}

pub fn cocycle_space(n: &LatticeModule, m: &LatticeModule, b: i64) -> CocycleSpace {
    let alg = m.alg.clone();
    let roots = root_vectors(&alg);
    let window = m.window(b);
    let inside = |k: &Idx| k.iter().all(|v| v.abs() <= b);
    let mut slots = Vec::new();
    let mut slot_of: HashMap<(usize, Idx), usize> = HashMap::new();
    for k in &window {
        for &x in &roots {
            let r = alg.weight(x);
            let w: Vec<Q> = m
                .weight(k)
                .iter()
                .enumerate()
                .map(|(i, v)| v + q((0..r.len()).map(|j| r[j] * alg.rs.cartan[i][j]).sum()))
                .collect();
            if let Some(t) = weight_preimage(n, &w) {
                slot_of.insert((x, k.clone()), slots.len());
                slots.push((x, k.clone(), t));
            }
        }
    }
    // symbolic c(x) on a concrete source vector
    let c_sym = |x: usize, v: &LVec| -> Option<BTreeMap<Idx, Form>> {
        let mut out: BTreeMap<Idx, Form> = BTreeMap::new();
        if alg.is_cartan(x) {
            return Some(out);
        }
        for (k, c) in v {
            if !inside(k) {
                return None;
            }
            if let Some(&s) = slot_of.get(&(x, k.clone())) {
                form_add(out.entry(slots[s].2.clone()).or_default(), s, c.clone());
            }
        }
        Some(out)
    };
    let act_sym = |x: usize, f: &BTreeMap<Idx, Form>| -> BTreeMap<Idx, Form> {
        let mut out: BTreeMap<Idx, Form> = BTreeMap::new();
        for (t, form) in f {
            for (u, e) in n.act(x, t) {
                let o = out.entry(u).or_default();
                for (i, c) in form {
                    form_add(o, *i, c * &e);
                }
            }
        }
        out
    };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for k in &window {
        let v = unit_vec(k);
        for (ix, &x) in roots.iter().enumerate() {
            for &y in &roots[ix + 1..] {
                let br = alg.bracket_basis(x, y);
                let mut lhs: BTreeMap<Idx, Form> = BTreeMap::new();
                let mut ok = true;
                for (z, s) in br.terms() {
                    match c_sym(z, &v) {
                        Some(f) => {
                            for (t, form) in f {
                                let o = lhs.entry(t).or_default();
                                for (i, c) in form {
                                    form_add(o, i, c * s);
                                }
                            }
                        }
                        None => ok = false,
                    }
                }
                let parts = (
                    c_sym(x, &m.act_vec(y, &v)),
                    c_sym(y, &m.act_vec(x, &v)),
                    c_sym(x, &v),
                    c_sym(y, &v),
                );
                let (Some(cx_y), Some(cy_x), Some(cx), Some(cy)) = parts else {
                    continue;
                };
                if !ok {
                    continue;
                }
                let mut eq = lhs;
                let mut sub = |src: BTreeMap<Idx, Form>, sign: i64| {
                    for (t, form) in src {
                        let o = eq.entry(t).or_default();
                        for (i, c) in form {
                            form_add(o, i, c * q(sign));
                        }
                    }
                };
                sub(cx_y, -1);
                sub(act_sym(y, &cx), 1);
                sub(act_sym(x, &cy), -1);
                sub(cy_x, 1);
                for form in eq.into_values().filter(|f| !f.is_empty()) {
                    let mut r = vec![Q::zero(); slots.len()];
                    for (i, c) in form {
                        r[i] = c;
                    }
                    rows.push(r);
                }
            }
        }
    }
    let basis = Matrix::from_rows(slots.len(), rows).nullspace();
    CocycleSpace {
        window: b,
        slots,
        basis,
    }
}

/// dim (window cocycles / window coboundaries); coboundaries come from φ on the
/// window and its one-step neighbours.
pub fn window_cohomology_dim(n: &LatticeModule, m: &LatticeModule, b: i64) -> usize {
    let z = cocycle_space(n, m, b);
    let sigma = matching(m, n, window_closure(m, b));
    let slot_pos: HashMap<(usize, Idx, Idx), usize> =
        z.slots.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut cols = Vec::new();
    for k in sigma.keys() {
        let mut phi = BTreeMap::new();
        phi.insert(k.clone(), Q::one());
        let c = make_coboundary(&phi, n, m, b);
        let mut v = vec![Q::zero(); z.slots.len()];
        for ((x, src), vals) in &c.values {
            for (t, e) in vals {
                v[slot_pos[&(*x, src.clone(), t.clone())]] = e.clone();
            }
        }
        cols.push(v);
    }
    let rank = Matrix::from_rows(z.slots.len(), cols).rank();
    z.dim() - rank
}

/// Random elements of the window cocycle space, seeded.
pub fn random_cocycles(space: &CocycleSpace, count: usize, seed: u64) -> Vec<Cocycle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let coeffs: Vec<Q> = (0..space.dim()).map(|_| q(rng.gen_range(-5..=5))).collect();
            space.cocycle(&coeffs)
        })
        .collect()
}

/// Random weight-degree-0 map on the window closure.
pub fn random_phi(n: &LatticeModule, m: &LatticeModule, b: i64, seed: u64) -> BTreeMap<Idx, Q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    matching(m, n, window_closure(m, b))
        .into_keys()
        .map(|k| (k, Q::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into())))
        .collect()
}

/// True iff no window weight of `a` is a weight of `b` (window-relative on the `a` side).
pub fn support_disjoint(a: &LatticeModule, b: &LatticeModule, window: i64) -> bool {
    a.window(window)
        .iter()
        .all(|k| weight_preimage(b, &a.weight(k)).is_none())
}

/// Solution space of the split-forcing system for Ext¹(M_b, M_a).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    pub window: i64,
    pub argument: String,
    /// Unknowns b(label), labels written as index vectors with the Levi block zeroed.
    pub unknowns: Vec<String>,
    pub rows: usize,
    pub dimension: usize,
    /// Solution basis as b(label) tables.
    pub basis: Vec<BTreeMap<String, String>>,
    pub certified: bool,
}

fn disjoint_system(window: i64, argument: &str) -> ConstraintSystem {
    ConstraintSystem {
        window,
        argument: argument.to_string(),
        unknowns: vec![],
        rows: 0,
        dimension: 0,
        basis: vec![],
        certified: true,
    }
}

/// The b(label) system for a self-extension of `m` along the rank-one Levi on `node`:
/// c(X⁺)x(k) = b(label(k))·(X⁻)⁻¹x(k) and s₁s₂·c(X⁺) = [[c(X⁺), X_β], X_{−β}] for every
/// β ∈ ⟨θ⟩⁺ with α+β a root, at every window vector.
pub fn self_extension_system(m: &LatticeModule, node: usize, b: i64) -> Result<ConstraintSystem, ExtError> {
    let alg: Arc<LieAlg> = m.alg.clone();
    let n = alg.rank();
    let alpha = unit(n, node);
    let (xp, xm) = (alg.x(&alpha), alg.x(&neg(&alpha)));
    let shift = eps_coords(alg.ty(), &alpha);
    let block: Vec<usize> = (0..shift.len()).filter(|&i| shift[i] != 0).collect();
    let label = |k: &[i64]| -> Idx {
        let mut l = k.to_vec();
        for &i in &block {
            l[i] = 0;
        }
        l
    };
    let theta: BTreeSet<usize> = (0..n).filter(|&i| i != node).collect();
    let betas: Vec<Vec<i64>> = alg
        .rs
        .generated_positive(&theta)
        .into_iter()
        .filter(|r| alg.rs.is_root(&add(&alpha, r)))
        .collect();
    if betas.is_empty() {
        return Err(ExtError::Unsupported("no θ-root β with α+β a root".into()));
    }
    let mut labels: BTreeMap<Idx, usize> = BTreeMap::new();
    let label_id = |l: Idx, labels: &mut BTreeMap<Idx, usize>| -> usize {
        let next = labels.len();
        *labels.entry(l).or_insert(next)
    };
    // c(X⁺) on a concrete vector, symbolically in the labels
    let c_plus = |v: &LVec, labels: &mut BTreeMap<Idx, usize>| -> Result<BTreeMap<Idx, Form>, ExtError> {
        let mut out: BTreeMap<Idx, Form> = BTreeMap::new();
        for (k, c) in v {
            let t: Idx = k.iter().zip(&shift).map(|(a, s)| a + s).collect();
            let (coef, back) = m.act_root(xm, &t);
            if coef.is_zero() || &back != k {
                return Err(ExtError::NotCuspidal(t));
            }
            let id = label_id(label(k), labels);
            form_add(out.entry(t).or_default(), id, c / coef);
        }
        Ok(out)
    };
    let act_sym = |x: usize, f: &BTreeMap<Idx, Form>| -> BTreeMap<Idx, Form> {
        let mut out: BTreeMap<Idx, Form> = BTreeMap::new();
        for (t, form) in f {
            for (u, e) in m.act(x, t) {
                let o = out.entry(u).or_default();
                for (i, c) in form {
                    form_add(o, *i, c * &e);
                }
            }
        }
        out
    };
    let mut eqs: Vec<Form> = Vec::new();
    let window = m.window(b);
    for beta in &betas {
        let xb = alg.x(beta);
        let xnb = alg.x(&neg(beta));
        let top = alg.x(&add(&alpha, beta));
        let s1 = alg
            .bracket_basis(xp, xb)
            .coeffs
            .get(&top)
            .cloned()
            .unwrap_or_else(Q::zero);
        let s2 = alg
            .bracket_basis(top, xnb)
            .coeffs
            .get(&xp)
            .cloned()
            .unwrap_or_else(Q::zero);
        let s = s1 * s2;
        debug_assert!(!s.is_zero());
        for k in &window {
            let v = unit_vec(k);
            let mut eq: BTreeMap<Idx, Form> = BTreeMap::new();
            let mut acc = |src: BTreeMap<Idx, Form>, sign: Q| {
                for (t, form) in src {
                    let o = eq.entry(t).or_default();
                    for (i, c) in form {
                        form_add(o, i, c * &sign);
                    }
                }
            };
            acc(c_plus(&v, &mut labels)?, s.clone());
            acc(c_plus(&m.act_vec(xb, &m.act_vec(xnb, &v)), &mut labels)?, -Q::one());
            acc(act_sym(xb, &c_plus(&m.act_vec(xnb, &v), &mut labels)?), Q::one());
            acc(act_sym(xnb, &c_plus(&m.act_vec(xb, &v), &mut labels)?), Q::one());
            acc(act_sym(xnb, &act_sym(xb, &c_plus(&v, &mut labels)?)), -Q::one());
            eqs.extend(eq.into_values().filter(|f| !f.is_empty()));
        }
    }
    // a label seen at two window points with different Levi-block coordinates
    let mut seen: HashMap<Idx, BTreeSet<Vec<i64>>> = HashMap::new();
    for k in &window {
        seen.entry(label(k))
            .or_default()
            .insert(block.iter().map(|&i| k[i]).collect());
    }
    let certified = seen.values().any(|s| s.len() > 1);
    if !certified {
        return Err(ExtError::CertificationImpossible(
            b,
            "no label occurs at two window points with different Levi-block coordinates".into(),
        ));
    }
    let nl = labels.len();
    let rows: Vec<Vec<Q>> = eqs
        .iter()
        .map(|f| {
            let mut r = vec![Q::zero(); nl];
            for (i, c) in f {
                r[*i] = c.clone();
            }
            r
        })
        .collect();
    let null = Matrix::from_rows(nl, rows).nullspace();
    let mut names = vec![String::new(); nl];
    for (l, &i) in &labels {
        names[i] = format!("{l:?}");
    }
    let basis = null
        .iter()
        .map(|v| {
            names
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(nm, c)| (nm.clone(), show_q(c)))
                .collect()
        })
        .collect();
    Ok(ConstraintSystem {
        window: b,
        argument: "self-extension: b(k) recurrence from c(X⁺) = [[c(X⁺),X_β],X_{−β}]".into(),
        unknowns: names,
        rows: eqs.len(),
        dimension: null.len(),
        basis,
        certified,
    })
}

fn hw_vectors(m: &LatticeModule, theta: &BTreeSet<usize>, b: i64) -> Vec<Idx> {
    let alg = &m.alg;
    let raise: Vec<usize> = theta.iter().map(|&i| alg.x(&unit(alg.rank(), i))).collect();
    m.window(b)
        .into_iter()
        .filter(|k| raise.iter().all(|&x| m.act_root(x, k).0.is_zero()))
        .collect()
}

/// Ext¹(N_b, N_a) for the type-A families with a rank-one Levi factor on `node`.
pub fn ext_solve_type_a(
    na: &LatticeModule,
    nb: &LatticeModule,
    node: usize,
    b: i64,
) -> Result<ConstraintSystem, ExtError> {
    if b < 1 {
        return Err(ExtError::CertificationImpossible(
            b,
            "window has no boundary row".into(),
        ));
    }
    let theta: BTreeSet<usize> = (0..na.alg.rank()).filter(|&i| i != node).collect();
    let same = na.params == nb.params;
    if !same {
        let hits = hw_vectors(nb, &theta, b)
            .iter()
            .any(|k| weight_preimage(na, &nb.weight(k)).is_some());
        if !hits {
            return Ok(disjoint_system(
                b,
                "weight mismatch: no θ-highest weight vector of N_b shares a weight with N_a",
            ));
        }
    }
    let mut s = self_extension_system(na, node, b)?;
    if !same {
        s.argument = format!("isomorphic pair; {}", s.argument);
    }
    Ok(s)
}

/// Ext¹(M_b, M_a) for M(−1,…,−1,a) with the Levi factor on the long simple root.
pub fn ext_solve_type_c(ma: &LatticeModule, mb: &LatticeModule, b: i64) -> Result<ConstraintSystem, ExtError> {
    let n = ma.alg.rank();
    if b < 1 {
        return Err(ExtError::CertificationImpossible(
            b,
            "window has no boundary row".into(),
        ));
    }
    let same = ma.params == mb.params;
    if !same && support_disjoint(mb, ma, b) {
        return Ok(disjoint_system(b, "support disjointness on the window"));
    }
    let mut s = self_extension_system(ma, n - 1, b)?;
    if !same {
        s.argument = format!("isomorphic pair; {}", s.argument);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotCheck {
    pub window: i64,
    pub cocycle_space_dim: usize,
    pub cohomology_dim: usize,
    pub samples: usize,
    /// Radius used by each witness (full window unless edge rows forced a retreat).
    pub witness_radius: Vec<Option<i64>>,
    pub pass: bool,
}

/// Random window cocycles from `m` to `n`, each tested for a coboundary witness;
/// falls back to smaller radii when window-edge cocycle values are unconstrained.
pub fn spot_check(n: &LatticeModule, m: &LatticeModule, b: i64, samples: usize, seed: u64) -> SpotCheck {
    let z = cocycle_space(n, m, b);
    let witness_radius: Vec<Option<i64>> = random_cocycles(&z, samples, seed)
        .iter()
        .map(|c| (0..=b).rev().find(|&r| is_coboundary(c, n, m, r).is_some()))
        .collect();
    let cohomology_dim = window_cohomology_dim(n, m, b);
    SpotCheck {
        window: b,
        cocycle_space_dim: z.dim(),
        cohomology_dim,
        samples,
        pass: cohomology_dim == 0 && witness_radius.iter().all(|r| *r == Some(b)),
        witness_radius,
    }
}

pub fn describe_cocycle(c: &Cocycle, alg: &LieAlg) -> Vec<String> {
    c.values
        .iter()
        .flat_map(|((x, k), v)| {
            v.iter()
                .map(move |(t, e)| format!("c({}) x{:?} = {} x{:?}", alg.name(*x), k, fmt_q(e), t))
        })
        .collect()
}
