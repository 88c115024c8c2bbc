//! Degree-1 modules N(a) (type A) and M(a) (type C) inside W(a).

use crate::rational::{is_int, show_qs, Q};
use crate::rootsys::{neg, CartanType, Family, LieAlg, RootError};
use crate::weylmod::{k_member, lvec_add, Constraint, Idx, LVec, LatticeModule, ParamClass, WeylParams};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegOneSpec {
    /// N(a) for A_n, `a` of length n+1.
    A(Vec<Q>),
    /// M(a) for C_n, `a` of length n.
    C(Vec<Q>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("N(a) needs a = (-1,…,-1, non-integers (at least two), 0,…,0); got {0}")]
    BadShapeA(String),
    #[error("M(a) needs a = (-1,…,-1, non-integers) or (-1,…,-1, -2); got {0}")]
    BadShapeC(String),
    #[error("rank too small: {0}")]
    Rank(String),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Block boundaries of a valid parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Shape {
    /// Length of the leading −1 block.
    pub j: usize,
    /// End (exclusive, 0-based) of the non-integer block.
    pub m: usize,
}

impl DegOneSpec {
    pub fn a(&self) -> &[Q] {
        match self {
            DegOneSpec::A(a) | DegOneSpec::C(a) => a,
        }
    }

    pub fn cartan_type(&self) -> Result<CartanType, SpecError> {
        match self {
            DegOneSpec::A(a) => CartanType::new(Family::A, a.len().saturating_sub(1)).map_err(SpecError::from),
            DegOneSpec::C(a) => CartanType::new(Family::C, a.len()).map_err(SpecError::from),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DegOneSpec::A(a) => format!("N{}", show_qs(a)),
            DegOneSpec::C(a) => format!("M{}", show_qs(a)),
        }
    }

    pub fn validate(&self) -> Result<Shape, SpecError> {
        self.cartan_type()?;
        let a = self.a();
        let minus_one = |x: &Q| *x == -Q::one();
        let j = a.iter().take_while(|x| minus_one(x)).count();
        let m = j + a[j..].iter().take_while(|x| !is_int(x)).count();
        match self {
            DegOneSpec::A(_) => {
                let tail_ok = a[m..].iter().all(|x| x.is_zero());
                if !tail_ok || m - j < 2 {
                    return Err(SpecError::BadShapeA(show_qs(a)));
                }
                Ok(Shape { j, m })
            }
            DegOneSpec::C(_) => {
                if m == a.len() && m > j {
                    return Ok(Shape { j, m });
                }
                // one-parameter tail equal to −1 or −2
                let n = a.len();
                let last = &a[n - 1];
                let head_ok = a[..n - 1].iter().all(minus_one);
                if head_ok && (minus_one(last) || *last == Q::from_integer((-2).into())) {
                    return Ok(Shape { j: n - 1, m: n - 1 });
                }
                Err(SpecError::BadShapeC(show_qs(a)))
            }
        }
    }
}

/// A degree-1 module together with its spec and block shape.
#[derive(Debug, Clone)]
pub struct DegOneModule {
    pub spec: DegOneSpec,
    pub shape: Shape,
    pub module: LatticeModule,
}

pub fn build(spec: &DegOneSpec) -> Result<DegOneModule, SpecError> {
    let shape = spec.validate()?;
    let alg = Arc::new(LieAlg::new(spec.cartan_type()?)?);
    Ok(build_with(spec, shape, alg))
}

pub fn build_with(spec: &DegOneSpec, shape: Shape, alg: Arc<LieAlg>) -> DegOneModule {
    let constraint = match spec {
        DegOneSpec::A(_) => Constraint::SumZero,
        DegOneSpec::C(_) => Constraint::SumEven,
    };
    let module = LatticeModule::new(alg, WeylParams::new(spec.a().to_vec()), constraint);
    DegOneModule {
        spec: spec.clone(),
        shape,
        module,
    }
}

pub fn build_n(a: Vec<Q>) -> Result<DegOneModule, SpecError> {
    build(&DegOneSpec::A(a))
}

pub fn build_m(a: Vec<Q>) -> Result<DegOneModule, SpecError> {
    build(&DegOneSpec::C(a))
}

impl DegOneModule {
    pub fn alg(&self) -> &Arc<LieAlg> {
        &self.module.alg
    }

    pub fn rank(&self) -> usize {
        self.module.alg.rank()
    }

    /// Simple roots that are cuspidal on the module (0-based); θ_a is the complement.
    pub fn circled(&self) -> BTreeSet<usize> {
        let Shape { j, m } = self.shape;
        match self.spec {
            // roots e_{j+1}..e_{m-1} joining the non-integer coordinates
            DegOneSpec::A(_) => (j..m - 1).collect(),
            DegOneSpec::C(_) if m > j => (j..self.rank()).collect(),
            DegOneSpec::C(_) => BTreeSet::new(),
        }
    }

    pub fn theta(&self) -> BTreeSet<usize> {
        let c = self.circled();
        (0..self.rank()).filter(|i| !c.contains(i)).collect()
    }

    pub fn weight(&self, k: &[i64]) -> Vec<Q> {
        self.module.weight(k)
    }

    pub fn window(&self, b: i64) -> Vec<Idx> {
        self.module.window(b)
    }

    /// Window vectors killed by every X_β, β ∈ ⟨θ⟩⁺.
    pub fn enumerate_hw(&self, theta: &BTreeSet<usize>, b: i64) -> Vec<Idx> {
        let alg = self.alg();
        let pos: Vec<usize> = alg.rs.generated_positive(theta).iter().map(|r| alg.x(r)).collect();
        self.window(b)
            .into_iter()
            .filter(|k| pos.iter().all(|&x| self.module.act(x, k).is_empty()))
            .collect()
    }

    /// The closed-form highest-weight set for θ_a: zero outside the non-integer block.
    pub fn predicted_hw(&self, b: i64) -> Vec<Idx> {
        let Shape { j, m } = self.shape;
        self.window(b)
            .into_iter()
            .filter(|k| k.iter().enumerate().all(|(i, &x)| (j..m).contains(&i) || x == 0))
            .collect()
    }

    pub fn degree_on_window(&self, b: i64) -> usize {
        let mut groups: HashMap<Vec<Q>, usize> = HashMap::new();
        for k in self.window(b) {
            *groups.entry(self.weight(&k)).or_default() += 1;
        }
        groups.values().copied().max().unwrap_or(0)
    }

    pub fn levi_orbit(&self, k: &[i64], levi: &BTreeSet<usize>, b: i64) -> OrbitReport {
        levi_orbit(&self.module, k, levi, b)
    }

    /// Steps until repeated X_{e_i} hits a zero coefficient, for i ∈ θ_a, from every
    /// window vector; `None` entries mean the window was left first.
    pub fn nilpotency_steps(&self, b: i64) -> Vec<(usize, Idx, Option<usize>)> {
        let alg = self.alg();
        let mut out = Vec::new();
        for i in self.theta() {
            let x = alg.x(&crate::rootsys::unit(self.rank(), i));
            for k in self.window(b) {
                out.push((i, k.clone(), nil_steps(&self.module, x, &k, b)));
            }
        }
        out
    }
}

/// Number of applications of a root vector before the coefficient vanishes.
pub fn nil_steps(m: &LatticeModule, x: usize, k: &[i64], b: i64) -> Option<usize> {
    let mut cur = k.to_vec();
    let diam = (2 * b + 1) as usize * cur.len();
    for step in 1..=diam + 1 {
        let (c, t) = m.act_root(x, &cur);
        if c.is_zero() {
            return Some(step);
        }
        if t.iter().any(|v| v.abs() > b) {
            return None;
        }
        cur = t;
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub orbit_size: usize,
    pub cuspidal: bool,
    pub return_paths_nonzero: bool,
    pub zero_hits: Vec<String>,
}

/// Span reachable from x(k) under the Levi root vectors of ⟨levi⟩, inside the window.
pub fn levi_orbit(m: &LatticeModule, k: &[i64], levi: &BTreeSet<usize>, b: i64) -> OrbitReport {
    let alg = &m.alg;
    let roots = alg.rs.generated(levi);
    let xs: Vec<usize> = roots.iter().map(|r| alg.x(r)).collect();
    let mut seen: BTreeSet<Idx> = BTreeSet::new();
    let mut queue = VecDeque::from([k.to_vec()]);
    seen.insert(k.to_vec());
    let mut zero_hits = Vec::new();
    while let Some(cur) = queue.pop_front() {
        for &x in &xs {
            let (c, t) = m.act_root(x, &cur);
            if c.is_zero() {
                zero_hits.push(format!("{} on {:?}", alg.name(x), cur));
                continue;
            }
            if t.iter().all(|v| v.abs() <= b) && seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut returns = true;
    for r in alg.rs.generated_positive(levi) {
        let (x, y) = (alg.x(&r), alg.x(&neg(&r)));
        let mut v = LVec::new();
        v.insert(k.to_vec(), Q::one());
        let yx = m.act_vec(y, &m.act_vec(x, &v));
        let xy = m.act_vec(x, &m.act_vec(y, &v));
        for w in [yx, xy] {
            let ok = w.len() == 1 && w.contains_key(k);
            returns &= ok;
        }
    }
    OrbitReport {
        orbit_size: seen.len(),
        cuspidal: zero_hits.is_empty(),
        return_paths_nonzero: returns,
        zero_hits,
    }
}

/// Window vectors where [X,Y]v ≠ X(Yv) − Y(Xv), over all basis pairs.
pub fn bracket_fidelity(m: &LatticeModule, b: i64) -> (usize, Vec<String>) {
    let alg = &m.alg;
    let d = alg.dim();
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in m.window(b) {
        let acts: Vec<LVec> = (0..d).map(|x| m.act(x, &k)).collect();
        for x in 0..d {
            for y in x + 1..d {
                checked += 1;
                let mut lhs = m.act_elem(alg.bracket_basis(x, y), &k);
                let xy = m.act_vec(x, &acts[y]);
                let yx = m.act_vec(y, &acts[x]);
                for (t, c) in xy {
                    lvec_add(&mut lhs, t, -c);
                }
                for (t, c) in yx {
                    lvec_add(&mut lhs, t, c);
                }
                if !lhs.is_empty() {
                    bad.push(format!("[{},{}] on {:?}", alg.name(x), alg.name(y), k));
                }
            }
        }
    }
    (checked, bad)
}

/// Window vectors where X_α moves the weight by something other than α.
pub fn weight_additivity(m: &LatticeModule, b: i64) -> Vec<String> {
    let alg = &m.alg;
    let n = alg.rank();
    let mut bad = Vec::new();
    // α(H_{e_i}) = Σ_j α_j ⟨e_j, e_i^∨⟩
    for k in m.window(b) {
        let w = m.weight(&k);
        for r in alg.rs.roots() {
            let x = alg.x(&r);
            let (c, t) = m.act_root(x, &k);
            if c.is_zero() || !m.contains(&t) {
                continue;
            }
            let wt = m.weight(&t);
            for i in 0..n {
                let shift: i64 = (0..n).map(|j| r[j] * alg.rs.cartan[i][j]).sum();
                if wt[i] != &w[i] + Q::from_integer(shift.into()) {
                    bad.push(format!("{} on {:?}", alg.name(x), k));
                    break;
                }
            }
        }
    }
    bad
}

/// Checks that `k` is a legitimate basis index of the module.
pub fn basis_index_ok(m: &DegOneModule, k: &[i64]) -> bool {
    m.module.contains(k)
}

/// K-boundary behaviour for every integral coordinate class, for reports.
pub fn classes(m: &DegOneModule) -> Vec<ParamClass> {
    m.module.params.classes()
}

pub fn weight_table(m: &DegOneModule, b: i64) -> BTreeMap<Idx, Vec<Q>> {
    m.window(b)
        .into_iter()
        .map(|k| {
            let w = m.weight(&k);
            (k, w)
        })
        .collect()
}

pub fn is_member_point(m: &DegOneModule, k: &[i64]) -> bool {
    k_member(&m.module.params, k)
}

pub fn nonzero(c: &Q) -> bool {
    !c.is_zero() && (c.is_positive() || c.is_negative())
}
