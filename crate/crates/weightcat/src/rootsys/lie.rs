//! Concrete realizations of A_n and C_n inside the Weyl algebra.
//!
//! Type A_n lives in W_{n+1}: E_ij ↦ q_i p_j, H_{e_i} = q_i p_i − q_{i+1} p_{i+1}.
//! Type C_n lives in W_n: X_{ε_i−ε_j} = q_i p_j, X_{ε_i+ε_j} = q_i q_j, X_{2ε_i} = ½q_i²,
//! X_{−ε_i−ε_j} = −p_i p_j, X_{−2ε_i} = −½p_i², H_{e_i} = q_i p_i − q_{i+1} p_{i+1}
//! for i < n and H_{e_n} = q_n p_n + ½.

use super::{neg, CartanType, Family, Root, RootError, RootSystem};
use crate::rational::{half, q, Q};
use crate::weylalg::{Mono, WeylPoly};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElem {
    Root(Root),
    /// H_{e_i}, 0-based.
    Cartan(usize),
}

/// A ℚ-combination of the Chevalley-type basis, keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    pub coeffs: BTreeMap<usize, Q>,
}

impl LieElement {
    pub fn basis(i: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(i, Q::one());
        LieElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = LieElement::default();
        for (i, v) in &self.coeffs {
            out.add_term(*i, v * c);
        }
        out
    }

    pub fn plus(&self, other: &LieElement) -> Self {
        let mut out = self.clone();
        for (i, v) in &other.coeffs {
            out.add_term(*i, v.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }
}

/// A realized Lie algebra with its basis, structure constants and Weyl images.
#[derive(Debug, Clone)]
pub struct LieAlg {
    pub rs: RootSystem,
    pub nvars: usize,
    /// Roots (positive then negative, in root-system order) followed by H_{e_1..e_n}.
    pub basis: Vec<BasisElem>,
    pub images: Vec<WeylPoly>,
    index: HashMap<BasisElem, usize>,
    table: Vec<Vec<LieElement>>,
}

/// ε-coordinates of a root given in simple-root coordinates.
pub fn eps_coords(ty: CartanType, r: &[i64]) -> Vec<i64> {
    let n = ty.rank;
    match ty.family {
        Family::A => {
            let mut v = vec![0; n + 1];
            for (j, &c) in r.iter().enumerate() {
                v[j] += c;
                v[j + 1] -= c;
            }
            v
        }
        Family::C => {
            let mut v = vec![0; n];
            for (j, &c) in r.iter().enumerate() {
                if j + 1 < n {
                    v[j] += c;
                    v[j + 1] -= c;
                } else {
                    v[j] += 2 * c;
                }
            }
            v
        }
        _ => panic!("ε-coordinates only for types A and C"),
    }
}

fn root_image(ty: CartanType, nvars: usize, r: &[i64]) -> WeylPoly {
    let v = eps_coords(ty, r);
    let mut m = Mono::one(nvars);
    let mut coef = Q::one();
    let pos: Vec<usize> = (0..nvars).filter(|&i| v[i] > 0).collect();
    let negs: Vec<usize> = (0..nvars).filter(|&i| v[i] < 0).collect();
    for &i in &pos {
        m.q[i] = v[i] as u32;
    }
    for &i in &negs {
        m.p[i] = (-v[i]) as u32;
    }
    if ty.family == Family::C {
        if v.iter().any(|&x| x == 2 || x == -2) {
            coef = half();
        }
        if pos.is_empty() {
            coef = -coef;
        }
    }
    WeylPoly::mono(nvars, m, coef)
}

fn cartan_image(ty: CartanType, nvars: usize, i: usize) -> WeylPoly {
    let qp = |j: usize| {
        let mut m = Mono::one(nvars);
        m.q[j] = 1;
        m.p[j] = 1;
        WeylPoly::mono(nvars, m, Q::one())
    };
    if ty.family == Family::C && i + 1 == ty.rank {
        &qp(i) + &WeylPoly::constant(nvars, half())
    } else {
        &qp(i) - &qp(i + 1)
    }
}

impl LieAlg {
    pub fn new(ty: CartanType) -> Result<Self, RootError> {
        let nvars = match ty.family {
            Family::A => ty.rank + 1,
            Family::C => ty.rank,
            _ => return Err(RootError::NoRealization(ty)),
        };
        let rs = RootSystem::new(ty);
        let mut basis: Vec<BasisElem> = rs.roots().into_iter().map(BasisElem::Root).collect();
        basis.extend((0..ty.rank).map(BasisElem::Cartan));
        let images: Vec<WeylPoly> = basis
            .iter()
            .map(|b| match b {
                BasisElem::Root(r) => root_image(ty, nvars, r),
                BasisElem::Cartan(i) => cartan_image(ty, nvars, *i),
            })
            .collect();
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut alg = LieAlg {
            rs,
            nvars,
            basis,
            images,
            index,
            table: vec![],
        };
        let d = alg.dim();
        let mut table = vec![vec![LieElement::default(); d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let c = alg.images[i].commutator(&alg.images[j]);
                let e = alg.decompose(&c).expect("realization closed under brackets");
                table[j][i] = e.scale(&q(-1));
                table[i][j] = e;
            }
        }
        alg.table = table;
        Ok(alg)
    }

    pub fn ty(&self) -> CartanType {
        self.rs.ty
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, b: &BasisElem) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(&BasisElem::Root(r.to_vec())).copied()
    }

    /// X_α as a basis index; panics if α is not a root.
    pub fn x(&self, r: &[i64]) -> usize {
        self.root_index(r)
            .unwrap_or_else(|| panic!("{r:?} is not a root of {}", self.ty()))
    }

    pub fn h(&self, i: usize) -> usize {
        self.index[&BasisElem::Cartan(i)]
    }

    /// Weight (simple-root coordinates) of a basis element; zero for Cartan.
    pub fn weight(&self, i: usize) -> Vec<i64> {
        match &self.basis[i] {
            BasisElem::Root(r) => r.clone(),
            BasisElem::Cartan(_) => vec![0; self.rank()],
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &LieElement {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::default();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                for (k, c) in self.table[i][j].terms() {
                    out.add_term(k, a * b * c);
                }
            }
        }
        out
    }

    pub fn image(&self, x: &LieElement) -> WeylPoly {
        let mut w = WeylPoly::zero(self.nvars);
        for (i, c) in x.terms() {
            w = &w + &self.images[i].scale(c);
        }
        w
    }

    /// Coordinates of a Weyl polynomial in the realized basis, if it lies in the image.
    pub fn decompose(&self, w: &WeylPoly) -> Option<LieElement> {
        let ty = self.ty();
        let n = self.rank();
        let mut out = LieElement::default();
        let mut diag = vec![Q::zero(); self.nvars];
        let mut constant = Q::zero();
        for (m, c) in &w.terms {
            let deg = m.degree();
            if deg == 0 {
                constant += c;
                continue;
            }
            if deg != 2 {
                return None;
            }
            let diag_idx = (0..self.nvars).find(|&i| m.q[i] == 1 && m.p[i] == 1);
            if let Some(i) = diag_idx {
                diag[i] += c;
                continue;
            }
            let mut eps = vec![0i64; self.nvars];
            for i in 0..self.nvars {
                eps[i] = m.q[i] as i64 - m.p[i] as i64;
            }
            let r = self.root_from_eps(&eps)?;
            let idx = self.x(&r);
            let unit = self.images[idx].terms.values().next().unwrap().clone();
            out.add_term(idx, c / unit);
        }
        // Σ d_i q_i p_i (+ const) in terms of H_{e_j}: coefficient of H_{e_j} is Σ_{i≤j} d_i.
        let mut run = Q::zero();
        for j in 0..n {
            run += &diag[j];
            out.add_term(self.h(j), run.clone());
        }
        match ty.family {
            Family::A => {
                run += &diag[n];
                if !run.is_zero() || !constant.is_zero() {
                    return None;
                }
            }
            _ => {
                let total: Q = diag.iter().sum();
                if constant != total * half() {
                    return None;
                }
            }
        }
        Some(out)
    }

    fn root_from_eps(&self, eps: &[i64]) -> Option<Root> {
        let ty = self.ty();
        let n = self.rank();
        let mut r = vec![0i64; n];
        match ty.family {
            Family::A => {
                let mut run = 0;
                for j in 0..n {
                    run += eps[j];
                    r[j] = run;
                }
            }
            _ => {
                // v_j = r_j − r_{j−1} for j < n, v_n = 2r_n − r_{n−1}
                let mut run = 0;
                for j in 0..n - 1 {
                    run += eps[j];
                    r[j] = run;
                }
                let last = eps[n - 1] + r[n - 2];
                if last % 2 != 0 {
                    return None;
                }
                r[n - 1] = last / 2;
            }
        }
        self.rs.is_root(&r).then_some(r)
    }

    pub fn neg_index(&self, i: usize) -> Option<usize> {
        match &self.basis[i] {
            BasisElem::Root(r) => self.root_index(&neg(r)),
            BasisElem::Cartan(_) => None,
        }
    }

    pub fn is_cartan(&self, i: usize) -> bool {
        matches!(self.basis[i], BasisElem::Cartan(_))
    }

    pub fn name(&self, i: usize) -> String {
        match &self.basis[i] {
            BasisElem::Root(r) => format!("X{:?}", r),
            BasisElem::Cartan(j) => format!("H{}", j + 1),
        }
    }

    /// [X_α, X_{−α}] expressed in the Cartan basis, for a positive root α.
    pub fn coroot(&self, r: &[i64]) -> LieElement {
        self.bracket(&LieElement::basis(self.x(r)), &LieElement::basis(self.x(&neg(r))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn a3_sample_brackets() {
        let g = LieAlg::new(CartanType::a(3)).unwrap();
        let e1 = g.x(&[1, 0, 0]);
        let e2 = g.x(&[0, 1, 0]);
        let b = g.bracket_basis(e1, e2);
        assert_eq!(b, &LieElement::basis(g.x(&[1, 1, 0])));
        let b = g.bracket_basis(e1, g.x(&[-1, 0, 0]));
        assert_eq!(b, &LieElement::basis(g.h(0)));
    }

    #[test]
    fn c2_long_root_coroot() {
        let g = LieAlg::new(CartanType::c(2)).unwrap();
        let b = g.bracket_basis(g.x(&[0, 1]), g.x(&[0, -1]));
        assert_eq!(b, &LieElement::basis(g.h(1)));
        // [H_{e2}, X_{e2}] = 2 X_{e2}
        let b = g.bracket_basis(g.h(1), g.x(&[0, 1]));
        assert_eq!(b, &LieElement::basis(g.x(&[0, 1])).scale(&q(2)));
    }

    #[test]
    fn unrealized_types() {
        assert!(LieAlg::new("B2".parse().unwrap()).is_err());
        assert!(LieAlg::new("G2".parse().unwrap()).is_err());
    }

    #[test]
    fn decompose_roundtrip() {
        for ty in [CartanType::a(2), CartanType::c(3)] {
            let g = LieAlg::new(ty).unwrap();
            for i in 0..g.dim() {
                assert_eq!(g.decompose(&g.images[i]).unwrap(), LieElement::basis(i));
            }
        }
    }
}
