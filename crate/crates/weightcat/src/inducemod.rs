//! Truncated generalized Verma modules V(C) = U(g) ⊗_{U(p)} C and their simple
//! quotients L(C), computed weight space by weight space.
//!
//! Vectors are finite sums of `w ⊗ x(k)` with `w` a PBW monomial in n⁻. The
//! kernel of V(C) → L(C) at a weight is {v : pr(u·v) = 0 for all u ∈ U(n⁺)},
//! where pr projects onto 1⊗C; only u of the matching θ-weight contribute.

use crate::linalg::{is_zero_vec, reduce_mod, row_space_basis, Matrix};
use crate::rational::{fmt_q, q, Q};
use crate::rootsys::lie::eps_coords;
use crate::rootsys::{height, neg, unit, LieAlg, LieElement};
use crate::weylmod::{lvec_add, Constraint, Idx, LVec, LatticeModule, WeylParams};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InduceError {
    #[error("PBW monomial of length {needed} exceeds truncation depth {depth}")]
    DepthOverflow { depth: usize, needed: usize },
    #[error("weight space needs monomials of length {needed}, truncation depth is {depth}")]
    TruncationInsufficient { depth: usize, needed: usize },
    #[error("vector is not a weight vector")]
    NotWeightVector,
    #[error("comparison against the zero vector of L(C)")]
    ZeroVector,
    #[error("U(g)_0 word {0} does not act by a scalar")]
    NonScalar(String),
    #[error("central element {0} is not scalar on the samples")]
    NonConstantCentral(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// An l-module for the Levi factor spanned by the simple roots in `levi`,
/// presented on a lattice-indexed weight basis x(k).
pub trait LeviModule {
    fn alg(&self) -> &Arc<LieAlg>;
    fn levi(&self) -> &BTreeSet<usize>;
    fn contains(&self, k: &[i64]) -> bool;
    /// Basis element `x` (a Levi root vector or Cartan element) applied to x(k).
    fn act(&self, x: usize, k: &[i64]) -> LVec;
    /// Index shift turning x(k) into the basis vector of weight wt(k) + `root`
    /// (`root` in the ℤ-span of the Levi simple roots).
    fn displacement(&self, root: &[i64]) -> Idx;
    /// H_{e_1..e_n} eigenvalues on x(k).
    fn weight(&self, k: &[i64]) -> Vec<Q>;
}

/// The sub-l-module of a Weyl-realized module spanned by x(k) with k in a slice
/// through `base`: coordinates linked by Levi root vectors move, the rest are frozen.
#[derive(Debug, Clone)]
pub struct SliceModule {
    pub module: LatticeModule,
    pub levi: BTreeSet<usize>,
}

impl SliceModule {
    pub fn new(alg: Arc<LieAlg>, params: WeylParams, levi: BTreeSet<usize>, base: Idx) -> Self {
        let ty = alg.ty();
        let n = ty.rank;
        let nv = alg.nvars;
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        let mut touched = vec![false; nv];
        let mut odd = vec![false; nv];
        for &j in &levi {
            let e = eps_coords(ty, &unit(n, j));
            let support: Vec<usize> = (0..nv).filter(|&i| e[i] != 0).collect();
            for &i in &support {
                touched[i] = true;
            }
            for w in support.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
            if e.iter().sum::<i64>() != 0 {
                odd[support[0]] = true;
            }
        }
        let mut blocks: BTreeMap<usize, (Vec<usize>, bool)> = BTreeMap::new();
        for i in (0..nv).filter(|&i| touched[i]) {
            let r = find(&mut parent, i);
            let e = blocks.entry(r).or_default();
            e.0.push(i);
            e.1 |= odd[i];
        }
        let constraint = Constraint::Slice {
            base,
            blocks: blocks.into_values().collect(),
        };
        SliceModule {
            module: LatticeModule::new(alg, params, constraint),
            levi,
        }
    }

    pub fn base(&self) -> &Idx {
        match &self.module.constraint {
            Constraint::Slice { base, .. } => base,
            _ => unreachable!(),
        }
    }
}

impl LeviModule for SliceModule {
    fn alg(&self) -> &Arc<LieAlg> {
        &self.module.alg
    }
    fn levi(&self) -> &BTreeSet<usize> {
        &self.levi
    }
    fn contains(&self, k: &[i64]) -> bool {
        self.module.contains(k)
    }
    fn act(&self, x: usize, k: &[i64]) -> LVec {
        self.module.act(x, k)
    }
    fn displacement(&self, root: &[i64]) -> Idx {
        eps_coords(self.module.alg.ty(), root)
    }
    fn weight(&self, k: &[i64]) -> Vec<Q> {
        self.module.weight(k)
    }
}

/// The cuspidal sl2-module N(a1, a2) on the root vectors ±α of a single simple
/// root, extended to h by the weights λ0 + kα:
/// X_α x(k) = (a2−k) x(k+1), X_{−α} x(k) = (a1+k) x(k−1).
#[derive(Debug, Clone)]
pub struct Sl2Module {
    pub alg: Arc<LieAlg>,
    pub node: usize,
    pub a1: Q,
    pub a2: Q,
    pub lambda0: Vec<Q>,
    levi: BTreeSet<usize>,
}

impl Sl2Module {
    /// `lambda0[node]` must equal a1 − a2.
    pub fn new(alg: Arc<LieAlg>, node: usize, a1: Q, a2: Q, lambda0: Vec<Q>) -> Self {
        assert_eq!(lambda0.len(), alg.rank());
        assert_eq!(lambda0[node], &a1 - &a2, "λ0 on the Levi coroot must be a1 − a2");
        Sl2Module {
            alg,
            node,
            a1,
            a2,
            lambda0,
            levi: [node].into(),
        }
    }
}

impl LeviModule for Sl2Module {
    fn alg(&self) -> &Arc<LieAlg> {
        &self.alg
    }
    fn levi(&self) -> &BTreeSet<usize> {
        &self.levi
    }
    fn contains(&self, k: &[i64]) -> bool {
        k.len() == 1
    }
    fn act(&self, x: usize, k: &[i64]) -> LVec {
        let n = self.alg.rank();
        let alpha = unit(n, self.node);
        let mut out = LVec::new();
        if self.alg.is_cartan(x) {
            let i = (0..n).find(|&i| self.alg.h(i) == x).unwrap();
            lvec_add(&mut out, k.to_vec(), self.weight(k)[i].clone());
        } else if self.alg.weight(x) == alpha {
            lvec_add(&mut out, vec![k[0] + 1], &self.a2 - q(k[0]));
        } else if self.alg.weight(x) == neg(&alpha) {
            lvec_add(&mut out, vec![k[0] - 1], &self.a1 + q(k[0]));
        } else {
            panic!("{} is not in the Levi factor", self.alg.name(x));
        }
        out
    }
    fn displacement(&self, root: &[i64]) -> Idx {
        debug_assert!(root.iter().enumerate().all(|(i, &c)| i == self.node || c == 0));
        vec![root[self.node]]
    }
    fn weight(&self, k: &[i64]) -> Vec<Q> {
        let c = &self.alg.rs.cartan;
        (0..self.alg.rank())
            .map(|i| &self.lambda0[i] + q(k[0] * c[i][self.node]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Minus,
    Levi,
    Plus,
}

/// PBW monomial in n⁻ as sorted basis indices.
pub type Mono = Vec<usize>;
/// An element of V(C): (monomial, index) → coefficient.
pub type InducedVector = BTreeMap<(Mono, Idx), Q>;

pub fn iv_add(v: &mut InducedVector, key: (Mono, Idx), c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(key.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&key);
    }
}

pub fn iv_scale(v: &InducedVector, c: &Q) -> InducedVector {
    let mut out = InducedVector::new();
    for (k, x) in v {
        iv_add(&mut out, k.clone(), x * c);
    }
    out
}

pub fn iv_unit(k: Idx) -> InducedVector {
    let mut v = InducedVector::new();
    v.insert((vec![], k), Q::one());
    v
}

struct WeightSpace {
    basis: Vec<(Mono, Idx)>,
    pos: HashMap<(Mono, Idx), usize>,
    kernel: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

/// A truncated generalized Verma module induced from `c` along the parabolic
/// whose Levi factor is spanned by the simple roots outside `theta`.
pub struct Verma {
    pub c: Box<dyn LeviModule>,
    pub theta: BTreeSet<usize>,
    pub depth: usize,
    alg: Arc<LieAlg>,
    part: Vec<Part>,
    key: Vec<(i64, Vec<i64>)>,
    n_minus: Vec<usize>,
    n_plus: Vec<usize>,
    memo: RefCell<HashMap<(Vec<usize>, Idx), InducedVector>>,
    spaces: RefCell<HashMap<Vec<Q>, Rc<WeightSpace>>>,
    raising: RefCell<HashMap<Vec<i64>, Rc<Vec<Vec<usize>>>>>,
}

/// Builds V(C) for the parabolic with Levi nodes Φ∖θ (`theta` 0-based).
pub fn induce(c: Box<dyn LeviModule>, theta: BTreeSet<usize>, depth: usize) -> Verma {
    assert!(depth >= 1);
    let alg = c.alg().clone();
    let n = alg.rank();
    let levi: BTreeSet<usize> = (0..n).filter(|i| !theta.contains(i)).collect();
    assert_eq!(&levi, c.levi(), "inducing module lives on a different Levi factor");
    let in_theta = |r: &[i64]| r.iter().enumerate().any(|(i, &x)| x != 0 && theta.contains(&i));
    let mut part = Vec::new();
    let mut key = Vec::new();
    for i in 0..alg.dim() {
        let r = alg.weight(i);
        let p = if alg.is_cartan(i) || !in_theta(&r) {
            Part::Levi
        } else if height(&r) < 0 {
            Part::Minus
        } else {
            Part::Plus
        };
        part.push(p);
        let pr = if height(&r) < 0 { neg(&r) } else { r.clone() };
        key.push((height(&pr), pr));
    }
    let mut n_minus: Vec<usize> = (0..alg.dim()).filter(|&i| part[i] == Part::Minus).collect();
    n_minus.sort_by(|a, b| key[*a].cmp(&key[*b]));
    let mut n_plus: Vec<usize> = (0..alg.dim()).filter(|&i| part[i] == Part::Plus).collect();
    n_plus.sort_by(|a, b| key[*a].cmp(&key[*b]));
    Verma {
        c,
        theta,
        depth,
        alg,
        part,
        key,
        n_minus,
        n_plus,
        memo: RefCell::new(HashMap::new()),
        spaces: RefCell::new(HashMap::new()),
        raising: RefCell::new(HashMap::new()),
    }
}

/// Multisets from `items` (index, componentwise ≥ 0 nonzero grade) summing to `target`.
fn graded_multisets(items: &[(usize, Vec<i64>)], target: &[i64]) -> Vec<Vec<usize>> {
    fn go(
        items: &[(usize, Vec<i64>)],
        from: usize,
        rest: &mut Vec<i64>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            let g = &items[i].1;
            if g.iter().zip(rest.iter()).all(|(a, b)| a <= b) {
                for (r, a) in rest.iter_mut().zip(g) {
                    *r -= a;
                }
                cur.push(items[i].0);
                go(items, i, rest, cur, out);
                cur.pop();
                for (r, a) in rest.iter_mut().zip(g) {
                    *r += a;
                }
            }
        }
    }
    let mut out = Vec::new();
    if target.iter().any(|&x| x < 0) {
        return out;
    }
    go(items, 0, &mut target.to_vec(), &mut Vec::new(), &mut out);
    out
}

impl Verma {
    pub fn alg(&self) -> &Arc<LieAlg> {
        &self.alg
    }

    pub fn levi(&self) -> &BTreeSet<usize> {
        self.c.levi()
    }

    /// Same construction at another truncation depth.
    pub fn with_depth(self, depth: usize) -> Verma {
        induce(self.c, self.theta, depth)
    }

    fn theta_part(&self, r: &[i64]) -> Vec<i64> {
        r.iter()
            .enumerate()
            .map(|(i, &x)| if self.theta.contains(&i) { x } else { 0 })
            .collect()
    }

    fn mono_root(&self, m: &[usize]) -> Vec<i64> {
        let mut r = vec![0; self.alg.rank()];
        for &x in m {
            for (a, b) in r.iter_mut().zip(self.alg.weight(x)) {
                *a += b;
            }
        }
        r
    }

    fn root_shift(&self, r: &[i64]) -> Vec<Q> {
        let c = &self.alg.rs.cartan;
        (0..self.alg.rank())
            .map(|i| q((0..r.len()).map(|j| r[j] * c[i][j]).sum()))
            .collect()
    }

    /// H-weight of w ⊗ x(k).
    pub fn term_weight(&self, m: &[usize], k: &[i64]) -> Vec<Q> {
        let shift = self.root_shift(&self.mono_root(m));
        self.c.weight(k).into_iter().zip(shift).map(|(a, b)| a + b).collect()
    }

    /// Normal form of word · (1 ⊗ x(k)); the word acts right to left.
    pub fn reduce(&self, word: &[usize], k: &[i64]) -> Result<InducedVector, InduceError> {
        let mk = (word.to_vec(), k.to_vec());
        if let Some(v) = self.memo.borrow().get(&mk) {
            return Ok(v.clone());
        }
        let out = self.reduce_raw(word, k)?;
        self.memo.borrow_mut().insert(mk, out.clone());
        Ok(out)
    }

    fn swap_with_bracket(&self, word: &[usize], i: usize, k: &[i64]) -> Result<InducedVector, InduceError> {
        let mut out = InducedVector::new();
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        for (t, c) in self.reduce(&swapped, k)? {
            iv_add(&mut out, t, c);
        }
        for (z, c) in self.alg.bracket_basis(word[i], word[i + 1]).terms() {
            let mut w = word[..i].to_vec();
            w.push(z);
            w.extend_from_slice(&word[i + 2..]);
            for (t, d) in self.reduce(&w, k)? {
                iv_add(&mut out, t, d * c);
            }
        }
        Ok(out)
    }

    fn reduce_raw(&self, word: &[usize], k: &[i64]) -> Result<InducedVector, InduceError> {
        if word.is_empty() {
            return Ok(iv_unit(k.to_vec()));
        }
        if let Some(i) = word.iter().rposition(|&x| self.part[x] != Part::Minus) {
            let x = word[i];
            if i + 1 < word.len() {
                return self.swap_with_bracket(word, i, k);
            }
            let mut out = InducedVector::new();
            if self.part[x] == Part::Levi {
                for (k2, c) in self.c.act(x, k) {
                    for (t, d) in self.reduce(&word[..i], &k2)? {
                        iv_add(&mut out, t, d * &c);
                    }
                }
            }
            return Ok(out);
        }
        if let Some(i) = (0..word.len() - 1).find(|&i| self.key[word[i]] > self.key[word[i + 1]]) {
            return self.swap_with_bracket(word, i, k);
        }
        if word.len() > self.depth {
            return Err(InduceError::DepthOverflow {
                depth: self.depth,
                needed: word.len(),
            });
        }
        let mut out = InducedVector::new();
        out.insert((word.to_vec(), k.to_vec()), Q::one());
        Ok(out)
    }

    /// `word · v`, the word acting right to left.
    pub fn act_word(&self, word: &[usize], v: &InducedVector) -> Result<InducedVector, InduceError> {
        let mut out = InducedVector::new();
        for ((m, k), c) in v {
            let mut w = word.to_vec();
            w.extend_from_slice(m);
            for (t, d) in self.reduce(&w, k)? {
                iv_add(&mut out, t, d * c);
            }
        }
        Ok(out)
    }

    pub fn act(&self, x: &LieElement, v: &InducedVector) -> Result<InducedVector, InduceError> {
        let mut out = InducedVector::new();
        for (i, c) in x.terms() {
            for (t, d) in self.act_word(&[i], v)? {
                iv_add(&mut out, t, d * c);
            }
        }
        Ok(out)
    }

    /// X_{root} ⊗ x(k) for a root of n⁻, or the Levi action for a Levi root.
    pub fn root_vector(&self, root: &[i64], k: &[i64]) -> Result<InducedVector, InduceError> {
        self.reduce(&[self.alg.x(root)], k)
    }

    fn raising_words(&self, grade: &[i64]) -> Rc<Vec<Vec<usize>>> {
        if let Some(v) = self.raising.borrow().get(grade) {
            return v.clone();
        }
        let items: Vec<(usize, Vec<i64>)> = self
            .n_plus
            .iter()
            .map(|&i| (i, self.theta_part(&self.alg.weight(i))))
            .collect();
        let words = Rc::new(graded_multisets(&items, grade));
        self.raising.borrow_mut().insert(grade.to_vec(), words.clone());
        words
    }

    /// pr(u·v) for every raising monomial u of the matching grade, keyed by (u, index).
    pub fn functional(&self, v: &InducedVector) -> Result<BTreeMap<(usize, Idx), Q>, InduceError> {
        let mut out = BTreeMap::new();
        let Some(((m0, _), _)) = v.iter().next() else {
            return Ok(out);
        };
        let grade = neg(&self.theta_part(&self.mono_root(m0)));
        let words = self.raising_words(&grade);
        for (ui, u) in words.iter().enumerate() {
            for ((m, k), c) in self.act_word(u, v)? {
                if m.is_empty() {
                    *out.entry((ui, k)).or_insert_with(Q::zero) += c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Lowering monomials with the given (nonpositive) θ-grade, in PBW-lex order.
    pub fn lowering_monomials(&self, grade: &[i64]) -> Vec<Mono> {
        let items: Vec<(usize, Vec<i64>)> = self
            .n_minus
            .iter()
            .map(|&i| (i, neg(&self.theta_part(&self.alg.weight(i)))))
            .collect();
        let mut out: Vec<Mono> = graded_multisets(&items, &neg(grade))
            .into_iter()
            .map(|mut m| {
                m.sort_by(|a, b| self.key[*a].cmp(&self.key[*b]));
                m
            })
            .collect();
        out.sort();
        out
    }

    fn weight_space(&self, m0: &[usize], k0: &[i64]) -> Result<Rc<WeightSpace>, InduceError> {
        let wt = self.term_weight(m0, k0);
        if let Some(s) = self.spaces.borrow().get(&wt) {
            return Ok(s.clone());
        }
        let r0 = self.mono_root(m0);
        let grade = self.theta_part(&r0);
        let needed = -grade.iter().sum::<i64>();
        if needed as usize > self.depth {
            return Err(InduceError::TruncationInsufficient {
                depth: self.depth,
                needed: needed as usize,
            });
        }
        let mut basis = Vec::new();
        for m in self.lowering_monomials(&grade) {
            let diff: Vec<i64> = r0.iter().zip(self.mono_root(&m)).map(|(a, b)| a - b).collect();
            let kk: Idx = k0.iter().zip(self.c.displacement(&diff)).map(|(a, b)| a + b).collect();
            if self.c.contains(&kk) && self.term_weight(&m, &kk) == wt {
                basis.push((m, kk));
            }
        }
        basis.sort();
        let pos: HashMap<(Mono, Idx), usize> = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut cols = Vec::new();
        for t in &basis {
            let mut v = InducedVector::new();
            v.insert(t.clone(), Q::one());
            cols.push(self.functional(&v)?);
        }
        let keys: BTreeSet<(usize, Idx)> = cols.iter().flat_map(|c| c.keys().cloned()).collect();
        let keys: Vec<_> = keys.into_iter().collect();
        let mut mat = Matrix::zeros(keys.len(), basis.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, key) in keys.iter().enumerate() {
                if let Some(c) = col.get(key) {
                    mat.data[i][j] = c.clone();
                }
            }
        }
        let null = mat.nullspace();
        let (kernel, pivots) = row_space_basis(basis.len(), &null);
        let s = Rc::new(WeightSpace {
            basis,
            pos,
            kernel,
            pivots,
        });
        self.spaces.borrow_mut().insert(wt, s.clone());
        Ok(s)
    }

    fn coords(&self, v: &InducedVector) -> Result<Option<(Rc<WeightSpace>, Vec<Q>)>, InduceError> {
        let Some(((m0, k0), _)) = v.iter().next() else {
            return Ok(None);
        };
        let s = self.weight_space(m0, k0)?;
        let mut x = vec![Q::zero(); s.basis.len()];
        for (t, c) in v {
            let i = *s.pos.get(t).ok_or(InduceError::NotWeightVector)?;
            x[i] = c.clone();
        }
        Ok(Some((s, x)))
    }

    /// Dimension of the kernel of V(C) → L(C) at the weight of w ⊗ x(k).
    pub fn kernel_dim(&self, m: &[usize], k: &[i64]) -> Result<usize, InduceError> {
        Ok(self.weight_space(m, k)?.kernel.len())
    }

    /// Dimension of V(C) at the weight of w ⊗ x(k).
    pub fn space_dim(&self, m: &[usize], k: &[i64]) -> Result<usize, InduceError> {
        Ok(self.weight_space(m, k)?.basis.len())
    }

    /// Canonical representative of v modulo the kernel (v a weight vector).
    pub fn project_l(&self, v: &InducedVector) -> Result<InducedVector, InduceError> {
        let Some((s, x)) = self.coords(v)? else {
            return Ok(InducedVector::new());
        };
        let r = reduce_mod(&x, &s.kernel, &s.pivots);
        let mut out = InducedVector::new();
        for (t, c) in s.basis.iter().zip(r) {
            iv_add(&mut out, t.clone(), c);
        }
        Ok(out)
    }

    pub fn is_zero_in_l(&self, v: &InducedVector) -> Result<bool, InduceError> {
        Ok(self.project_l(v)?.is_empty())
    }

    /// λ with v = λ w in L(C), if any.
    pub fn proportionality(&self, v: &InducedVector, w: &InducedVector) -> Result<Option<Q>, InduceError> {
        let pw = self.project_l(w)?;
        if pw.is_empty() {
            return Err(InduceError::ZeroVector);
        }
        let pv = self.project_l(v)?;
        if pv.is_empty() {
            return Ok(Some(Q::zero()));
        }
        let (t, c) = pw.iter().next().unwrap();
        let Some(d) = pv.get(t) else {
            return Ok(None);
        };
        let lam = d / c;
        let same = pv.len() == pw.len() && pw.iter().all(|(t, c)| pv.get(t).is_some_and(|d| *d == &lam * c));
        Ok(same.then_some(lam))
    }

    /// Coefficients λ with v = Σ λ_i w_i in L(C), when the w_i are independent there
    /// and v lies in their span.
    pub fn express(&self, v: &InducedVector, ws: &[InducedVector]) -> Result<Option<Vec<Q>>, InduceError> {
        let pv = self.project_l(v)?;
        let pws: Vec<InducedVector> = ws.iter().map(|w| self.project_l(w)).collect::<Result<_, _>>()?;
        let keys: Vec<(Mono, Idx)> = pws
            .iter()
            .chain([&pv])
            .flat_map(|w| w.keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut a = Matrix::zeros(keys.len(), ws.len());
        for (j, w) in pws.iter().enumerate() {
            for (i, key) in keys.iter().enumerate() {
                if let Some(c) = w.get(key) {
                    a.data[i][j] = c.clone();
                }
            }
        }
        let b: Vec<Q> = keys
            .iter()
            .map(|t| pv.get(t).cloned().unwrap_or_else(Q::zero))
            .collect();
        Ok(crate::linalg::solve(&a, &b)
            .filter(|(_, null)| null.is_empty())
            .map(|(x, _)| x))
    }

    /// Whether v lies in the span of `ws` in L(C); all of one weight.
    pub fn in_span(&self, v: &InducedVector, ws: &[InducedVector]) -> Result<bool, InduceError> {
        let Some((s, x)) = self.coords(v)? else {
            return Ok(true);
        };
        let mut rows = s.kernel.clone();
        for w in ws {
            if let Some((s2, y)) = self.coords(w)? {
                if !Rc::ptr_eq(&s, &s2) {
                    return Err(InduceError::NotWeightVector);
                }
                rows.push(y);
            }
        }
        let (basis, piv) = row_space_basis(s.basis.len(), &rows);
        Ok(is_zero_vec(&reduce_mod(&x, &basis, &piv)))
    }
}

/// Values of a basis of the center of l on the inducing module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralCharacter {
    /// Coefficients of each central element in H_{e_1..e_n}.
    #[serde(with = "crate::rational::serde_qvecs")]
    pub elements: Vec<Vec<Q>>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub values: Vec<Q>,
}

fn primitive(v: Vec<Q>) -> Vec<Q> {
    let l = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<Q> = ints.into_iter().map(|x| Q::new(x, g.clone())).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out = out.into_iter().map(|x| -x).collect();
    }
    out
}

/// Basis of the center of the Levi factor on the nodes `levi`, as H-coefficients.
pub fn center_basis(alg: &LieAlg, levi: &BTreeSet<usize>) -> Vec<Vec<Q>> {
    let n = alg.rank();
    let c = &alg.rs.cartan;
    let rows: Vec<Vec<Q>> = levi.iter().map(|&j| (0..n).map(|i| q(c[i][j])).collect()).collect();
    Matrix::from_rows(n, rows)
        .nullspace()
        .into_iter()
        .map(primitive)
        .collect()
}

pub fn central_value(h: &[Q], weight: &[Q]) -> Q {
    h.iter().zip(weight).map(|(a, b)| a * b).sum()
}

pub fn central_scalars(c: &dyn LeviModule, samples: &[Idx]) -> Result<CentralCharacter, InduceError> {
    assert!(!samples.is_empty());
    let elements = center_basis(c.alg(), c.levi());
    let mut values = Vec::new();
    for h in &elements {
        let v0 = central_value(h, &c.weight(&samples[0]));
        if samples.iter().any(|k| central_value(h, &c.weight(k)) != v0) {
            return Err(InduceError::NonConstantCentral(format!(
                "{:?}",
                h.iter().map(fmt_q).collect::<Vec<_>>()
            )));
        }
        values.push(v0);
    }
    Ok(CentralCharacter { elements, values })
}

/// Something U(g)_0 acts on through scalars at a chosen weight vector.
pub trait ZeroWeightOracle {
    fn alg(&self) -> &Arc<LieAlg>;
    /// Scalar by which the word (acting right to left) multiplies the vector.
    fn scalar(&self, word: &[usize]) -> Result<Q, InduceError>;
}

fn word_name(alg: &LieAlg, w: &[usize]) -> String {
    w.iter().map(|&i| alg.name(i)).collect::<Vec<_>>().join("·")
}

/// p(1 ⊗ x(k)) inside L(C).
pub struct VermaAt<'a> {
    pub verma: &'a Verma,
    pub k: Idx,
}

impl ZeroWeightOracle for VermaAt<'_> {
    fn alg(&self) -> &Arc<LieAlg> {
        self.verma.alg()
    }
    fn scalar(&self, word: &[usize]) -> Result<Q, InduceError> {
        let v = self.verma.reduce(word, &self.k)?;
        let key = (vec![], self.k.clone());
        if v.keys().any(|t| *t != key) {
            return Err(InduceError::NonScalar(word_name(self.alg(), word)));
        }
        Ok(v.get(&key).cloned().unwrap_or_else(Q::zero))
    }
}

/// x(k) inside a Weyl-realized module.
pub struct LatticeAt<'a> {
    pub module: &'a LatticeModule,
    pub k: Idx,
}

impl ZeroWeightOracle for LatticeAt<'_> {
    fn alg(&self) -> &Arc<LieAlg> {
        &self.module.alg
    }
    fn scalar(&self, word: &[usize]) -> Result<Q, InduceError> {
        let mut v = LVec::new();
        v.insert(self.k.clone(), Q::one());
        for &x in word.iter().rev() {
            v = self.module.act_vec(x, &v);
        }
        if v.keys().any(|t| *t != self.k) {
            return Err(InduceError::NonScalar(word_name(self.alg(), word)));
        }
        Ok(v.get(&self.k).cloned().unwrap_or_else(Q::zero))
    }
}

/// Words of root vectors of total weight zero and length ≤ depth, positives left of negatives.
pub fn zero_weight_words(alg: &LieAlg, depth: usize) -> Vec<Vec<usize>> {
    let n = alg.rank();
    let mut roots: Vec<usize> = alg.rs.positive.iter().map(|r| alg.x(r)).collect();
    roots.extend(alg.rs.positive.iter().map(|r| alg.x(&neg(r))));
    let mut out = Vec::new();
    fn go(
        alg: &LieAlg,
        roots: &[usize],
        from: usize,
        left: usize,
        sum: &mut Vec<i64>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !cur.is_empty() && sum.iter().all(|&x| x == 0) {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in from..roots.len() {
            let w = alg.weight(roots[i]);
            for (s, x) in sum.iter_mut().zip(&w) {
                *s += x;
            }
            cur.push(roots[i]);
            go(alg, roots, i, left - 1, sum, cur, out);
            cur.pop();
            for (s, x) in sum.iter_mut().zip(&w) {
                *s -= x;
            }
        }
    }
    go(alg, &roots, 0, depth, &mut vec![0; n], &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct U0Report {
    pub words_checked: usize,
    pub equal: bool,
    /// First word with different scalars: (word, left, right).
    pub mismatch: Option<(String, String, String)>,
}

/// Compares the scalars of all U(g)_0 words up to `depth` at two weight vectors.
pub fn u0_compare(a: &dyn ZeroWeightOracle, b: &dyn ZeroWeightOracle, depth: usize) -> Result<U0Report, InduceError> {
    let alg = a.alg();
    assert_eq!(alg.ty(), b.alg().ty());
    let words = zero_weight_words(alg, depth);
    for (i, w) in words.iter().enumerate() {
        let (x, y) = (a.scalar(w)?, b.scalar(w)?);
        if x != y {
            return Ok(U0Report {
                words_checked: i + 1,
                equal: false,
                mismatch: Some((word_name(alg, w), fmt_q(&x), fmt_q(&y))),
            });
        }
    }
    Ok(U0Report {
        words_checked: words.len(),
        equal: true,
        mismatch: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub checks: usize,
    /// Failing instances: "α=…, β=…, k=…".
    pub failures: Vec<String>,
    pub restriction_impossible: bool,
}

/// Tests the forced identity p(X_{−(α+β₁+…)} ⊗ v) ∈ U(l_θ⁻)·p(1 ⊗ X_{−α} v) for Levi
/// roots α, chains of ⟨θ⟩⁺ roots of length ≤ 2 with root partial sums, and the
/// sample vectors. Any failure rules out L(C) in the category for (Φ, θ).
pub fn probe_restriction_failure(v: &Verma, samples: &[Idx]) -> Result<ProbeReport, InduceError> {
    let alg = v.alg().clone();
    let rs = &alg.rs;
    let levi_pos = rs.generated_positive(v.levi());
    let theta_pos = rs.generated_positive(&v.theta);
    let mut chains: Vec<(Vec<i64>, Vec<Vec<i64>>)> = Vec::new();
    for a in &levi_pos {
        for b1 in &theta_pos {
            let s1 = crate::rootsys::add(a, b1);
            if !rs.is_root(&s1) {
                continue;
            }
            chains.push((a.clone(), vec![b1.clone()]));
            for b2 in &theta_pos {
                if rs.is_root(&crate::rootsys::add(&s1, b2)) {
                    chains.push((a.clone(), vec![b1.clone(), b2.clone()]));
                }
            }
        }
    }
    let mut report = ProbeReport {
        checks: 0,
        failures: vec![],
        restriction_impossible: false,
    };
    for (a, betas) in &chains {
        let bsum = betas
            .iter()
            .fold(vec![0; alg.rank()], |acc, b| crate::rootsys::add(&acc, b));
        let top = crate::rootsys::add(a, &bsum);
        let lowering: Vec<Mono> = v
            .lowering_monomials(&neg(&bsum))
            .into_iter()
            .filter(|m| m.iter().all(|&x| v.theta_part(&alg.weight(x)) == alg.weight(x)))
            .collect();
        for k in samples {
            let lhs = v.root_vector(&neg(&top), k)?;
            let base = v.reduce(&[alg.x(&neg(a))], k)?;
            let ws: Vec<InducedVector> = lowering
                .iter()
                .map(|m| v.act_word(m, &base))
                .collect::<Result<_, _>>()?;
            report.checks += 1;
            if !v.in_span(&lhs, &ws)? {
                report.failures.push(format!("α={a:?}, β={betas:?}, k={k:?}"));
            }
        }
    }
    report.restriction_impossible = !report.failures.is_empty();
    Ok(report)
}

/// Bracket fidelity [X,Y]v = X(Yv) − Y(Xv) for all basis pairs on the given vectors.
pub fn verma_bracket_fidelity(v: &Verma, vectors: &[InducedVector]) -> Result<(usize, Vec<String>), InduceError> {
    let alg = v.alg().clone();
    let mut checked = 0;
    let mut bad = Vec::new();
    for vec in vectors {
        for x in 0..alg.dim() {
            let xv = v.act_word(&[x], vec)?;
            for y in 0..alg.dim() {
                let yv = v.act_word(&[y], vec)?;
                let lhs = v.act(alg.bracket_basis(x, y), vec)?;
                let mut rhs = v.act_word(&[x], &yv)?;
                for (t, c) in v.act_word(&[y], &xv)? {
                    iv_add(&mut rhs, t, -c);
                }
                checked += 1;
                if lhs != rhs {
                    bad.push(format!("[{}, {}]", alg.name(x), alg.name(y)));
                }
            }
        }
    }
    Ok((checked, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{half, qf};
    use crate::rootsys::CartanType;

    fn a2_sl2(c: Q) -> Verma {
        // C = N(1/2, 1/3) on e1 with H_{e2} x(k) = c + a2 − k.
        let alg = Arc::new(LieAlg::new(CartanType::a(2)).unwrap());
        let (a1, a2) = (half(), qf(1, 3));
        let lam = vec![&a1 - &a2, c + &a2];
        induce(Box::new(Sl2Module::new(alg, 0, a1, a2, lam)), [1].into(), 4)
    }

    #[test]
    fn raising_kills_and_levi_acts() {
        let v = a2_sl2(q(0));
        let g = v.alg().clone();
        let one = iv_unit(vec![0]);
        assert!(v.act_word(&[g.x(&[1, 1])], &one).unwrap().is_empty());
        assert!(v.act_word(&[g.x(&[0, 1])], &one).unwrap().is_empty());
        let r = v.act_word(&[g.x(&[-1, 0])], &one).unwrap();
        assert_eq!(r, iv_scale(&iv_unit(vec![-1]), &half()));
    }

    #[test]
    fn bracket_through_cartan() {
        let v = a2_sl2(q(0));
        let g = v.alg().clone();
        let w = v.root_vector(&[-1, -1], &[0]).unwrap();
        let r = v.act_word(&[g.x(&[1, 1])], &w).unwrap();
        // H_{e1}+H_{e2} on x(0): (a1 − a2) + (c + a2) = 1/2
        assert_eq!(r, iv_scale(&iv_unit(vec![0]), &half()));
    }

    #[test]
    fn eta_proportionality() {
        let v = a2_sl2(q(0));
        let lhs = v.root_vector(&[-1, -1], &[0]).unwrap();
        let rhs = v.root_vector(&[0, -1], &[-1]).unwrap();
        assert!(!v.is_zero_in_l(&lhs).unwrap());
        assert_eq!(v.proportionality(&lhs, &rhs).unwrap(), Some(qf(3, 8)));
        let generic = a2_sl2(qf(1, 7));
        let lhs = generic.root_vector(&[-1, -1], &[0]).unwrap();
        let rhs = generic.root_vector(&[0, -1], &[-1]).unwrap();
        assert_eq!(generic.proportionality(&lhs, &rhs).unwrap(), None);
    }

    #[test]
    fn depth_overflow_is_reported() {
        let alg = Arc::new(LieAlg::new(CartanType::a(2)).unwrap());
        let c = Sl2Module::new(alg.clone(), 0, half(), qf(1, 3), vec![qf(1, 6), q(0)]);
        let v = induce(Box::new(c), [1].into(), 1);
        let x = alg.x(&[0, -1]);
        assert!(matches!(
            v.reduce(&[x, x], &[0]),
            Err(InduceError::DepthOverflow { .. })
        ));
    }

    #[test]
    fn center_of_a2_levi() {
        let alg = LieAlg::new(CartanType::a(2)).unwrap();
        assert_eq!(center_basis(&alg, &[0].into()), vec![vec![q(1), q(2)]]);
        assert!(center_basis(&alg, &[0, 1].into()).is_empty());
    }

    fn slice(ty: CartanType, a: Vec<Q>, levi: &[usize], base: Idx) -> Box<SliceModule> {
        let alg = Arc::new(LieAlg::new(ty).unwrap());
        Box::new(SliceModule::new(
            alg,
            WeylParams::new(a),
            levi.iter().copied().collect(),
            base,
        ))
    }

    #[test]
    fn probe_short_root_levi_in_c2() {
        let alg = Arc::new(LieAlg::new(CartanType::c(2)).unwrap());
        let (a1, a2) = (qf(1, 3), qf(1, 5));
        let c = Sl2Module::new(alg, 0, a1.clone(), a2.clone(), vec![a1 - a2, qf(1, 7)]);
        let v = induce(Box::new(c), [1].into(), 2);
        let r = probe_restriction_failure(&v, &[vec![0], vec![1]]).unwrap();
        assert!(r.restriction_impossible, "{r:?}");
    }

    #[test]
    fn probe_passes_on_nontrivial_pairs() {
        let c = slice(CartanType::a(2), vec![half(), qf(1, 3), q(0)], &[0], vec![0, 0, 0]);
        let v = induce(c, [1].into(), 3);
        let r = probe_restriction_failure(&v, &[vec![0, 0, 0], vec![1, -1, 0]]).unwrap();
        assert!(r.checks > 0 && !r.restriction_impossible, "{r:?}");
        let c = slice(CartanType::c(2), vec![q(-1), qf(1, 4)], &[1], vec![0, 0]);
        let v = induce(c, [0].into(), 3);
        let r = probe_restriction_failure(&v, &[vec![0, 0], vec![0, 2]]).unwrap();
        assert!(r.checks > 0 && !r.restriction_impossible, "{r:?}");
    }

    #[test]
    fn slice_central_character() {
        // H_{e2} on x(k, −k, 0) is a2 − k: the c = 0 branch
        let c = slice(CartanType::a(2), vec![half(), qf(1, 3), q(0)], &[0], vec![0, 0, 0]);
        let cc = central_scalars(c.as_ref(), &[vec![0, 0, 0], vec![2, -2, 0], vec![-1, 1, 0]]).unwrap();
        assert_eq!(cc.elements, vec![vec![q(1), q(2)]]);
        // 2(a2 − k) + (a1 − a2 + 2k) = a1 + a2
        assert_eq!(cc.values, vec![qf(5, 6)]);
    }

    #[test]
    fn u0_agrees_with_realized_module() {
        let c = slice(CartanType::a(2), vec![half(), qf(1, 3), q(0)], &[0], vec![0, 0, 0]);
        let m = c.module.clone();
        let v = induce(c, [1].into(), 4);
        let r = u0_compare(
            &VermaAt {
                verma: &v,
                k: vec![0, 0, 0],
            },
            &LatticeAt {
                module: &m,
                k: vec![0, 0, 0],
            },
            4,
        )
        .unwrap();
        assert!(r.equal, "{r:?}");
        let other = LatticeModule::new(
            m.alg.clone(),
            WeylParams::new(vec![half(), qf(1, 5), q(0)]),
            Constraint::SumZero,
        );
        let r = u0_compare(
            &VermaAt {
                verma: &v,
                k: vec![0, 0, 0],
            },
            &LatticeAt {
                module: &other,
                k: vec![0, 0, 0],
            },
            4,
        )
        .unwrap();
        assert!(!r.equal);
    }

    #[test]
    fn induced_bracket_fidelity() {
        let v = a2_sl2(q(0));
        let vecs = vec![iv_unit(vec![0]), v.root_vector(&[-1, -1], &[1]).unwrap()];
        let (n, bad) = verma_bracket_fidelity(&v, &vecs).unwrap();
        assert_eq!(n, 2 * 64);
        assert!(bad.is_empty(), "{bad:?}");
    }
}
