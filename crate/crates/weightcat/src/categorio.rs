//! The categories O_{S,θ}: the classification lookup over all simple types and
//! a window-scale membership checker for Weyl-realized modules.

use crate::degonemod::DegOneSpec;
use crate::rational::{q, Q};
use crate::rootsys::{neg, unit, CartanType, Family, RootSystem};
use crate::weylmod::{Idx, LatticeModule};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    Trivial,
    Excluded,
    Nontrivial,
    HighestWeight,
    Cuspidal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

/// A degree-1 family: "N" or "M" with parameter slots "-1", "0" or "a<i>".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDesc {
    pub module: String,
    pub params: Vec<String>,
}

impl FamilyDesc {
    fn new(module: &str, minus: usize, free: usize, zeros: usize) -> Self {
        let mut params = vec!["-1".to_string(); minus];
        params.extend((1..=free).map(|i| format!("a{i}")));
        params.extend(std::iter::repeat_n("0".to_string(), zeros));
        FamilyDesc {
            module: module.to_string(),
            params,
        }
    }

    pub fn free_count(&self) -> usize {
        self.params.iter().filter(|p| p.starts_with('a')).count()
    }

    /// Substitutes the free slots in order.
    pub fn instantiate(&self, free: &[Q]) -> DegOneSpec {
        assert_eq!(free.len(), self.free_count());
        let mut it = free.iter();
        let a: Vec<Q> = self
            .params
            .iter()
            .map(|p| match p.as_str() {
                "-1" => -Q::one(),
                "0" => Q::zero(),
                _ => it.next().unwrap().clone(),
            })
            .collect();
        if self.module == "N" {
            DegOneSpec::A(a)
        } else {
            DegOneSpec::C(a)
        }
    }

    pub fn display(&self) -> String {
        format!("{}({})", self.module, self.params.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: Kind,
    pub family: Option<FamilyDesc>,
    pub degree1: Tri,
    pub semisimple: Tri,
    /// Which case of the classification decided the verdict.
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("θ contains index {0}, out of range for rank {1}")]
    BadTheta(usize, usize),
    #[error("θ ⊄ S")]
    NotNested,
    #[error("window too small to certify: {0}")]
    WindowTooSmall(String),
}

fn verdict(kind: Kind, family: Option<FamilyDesc>, degree1: Tri, semisimple: Tri, rule: &str) -> Verdict {
    Verdict {
        kind,
        family,
        degree1,
        semisimple,
        rule: rule.to_string(),
    }
}

fn trivial(rule: &str) -> Verdict {
    verdict(Kind::Trivial, None, Tri::Unknown, Tri::True, rule)
}

/// Consecutive run i..=j (1-based) if `l` is one.
fn run(l: &BTreeSet<usize>) -> Option<(usize, usize)> {
    let lo = *l.iter().next()?;
    let hi = *l.iter().next_back()?;
    (hi - lo + 1 == l.len()).then_some((lo + 1, hi + 1))
}

/// Classification of O_{Φ,θ}; `theta` holds the 0-based simple roots in θ.
pub fn classify(ty: CartanType, theta: &BTreeSet<usize>) -> Result<Verdict, CategoryError> {
    let n = ty.rank;
    if let Some(&i) = theta.iter().find(|&&i| i >= n) {
        return Err(CategoryError::BadTheta(i + 1, n));
    }
    // low-rank coincidences: B2 = C2 with the nodes swapped, D3 = A3 with the branch node in the middle
    match (ty.family, n) {
        (Family::B, 2) => {
            let t = theta.iter().map(|&i| 1 - i).collect();
            let mut v = classify(CartanType::c(2), &t)?;
            v.rule = format!("B2 = C2 (nodes swapped): {}", v.rule);
            return Ok(v);
        }
        (Family::D, 3) => {
            let map = [1usize, 0, 2];
            let t = theta.iter().map(|&i| map[i]).collect();
            let mut v = classify(CartanType::a(3), &t)?;
            v.rule = format!("D3 = A3 (e1 ↔ e2): {}", v.rule);
            return Ok(v);
        }
        _ => {}
    }
    let levi: BTreeSet<usize> = (0..n).filter(|i| !theta.contains(i)).collect();
    if levi.is_empty() {
        return Ok(verdict(
            Kind::HighestWeight,
            None,
            Tri::Unknown,
            Tri::True,
            "θ = Φ: parabolic category O",
        ));
    }
    if theta.is_empty() {
        return Ok(match ty.family {
            Family::A if n == 1 => verdict(
                Kind::Cuspidal,
                None,
                Tri::True,
                Tri::False,
                "θ = ∅, sl2: cuspidal self-extensions exist",
            ),
            Family::A => verdict(
                Kind::Cuspidal,
                None,
                Tri::False,
                Tri::False,
                "θ = ∅, type A: cuspidal category is not semisimple",
            ),
            Family::C => verdict(
                Kind::Cuspidal,
                None,
                Tri::True,
                Tri::True,
                "θ = ∅, type C: cuspidal category is semisimple",
            ),
            _ => verdict(
                Kind::Cuspidal,
                None,
                Tri::Unknown,
                Tri::True,
                "θ = ∅: no cuspidal modules outside types A and C",
            ),
        });
    }
    let one = |i: usize| levi.len() == 1 && levi.contains(&(i - 1));
    let rs = RootSystem::new(ty);
    let comps = rs.components(&levi);
    let connected_a = comps.len() == 1 && rs.component_type(&comps[0]).family == Family::A;
    match ty.family {
        Family::B if one(1) => {
            return Ok(verdict(
                Kind::Excluded,
                None,
                Tri::Unknown,
                Tri::Unknown,
                "excluded: B_n, {e1}",
            ))
        }
        Family::D if one(1) || one(n - 1) || one(n) => {
            return Ok(verdict(
                Kind::Excluded,
                None,
                Tri::Unknown,
                Tri::Unknown,
                "excluded: D_n, {e1}, {e_(n-1)} or {e_n}",
            ))
        }
        Family::E if (n == 6 && (one(1) || one(6))) || (n == 7 && one(7)) => {
            return Ok(verdict(
                Kind::Excluded,
                None,
                Tri::Unknown,
                Tri::Unknown,
                "excluded: E6 {e1}/{e6}, E7 {e7}",
            ))
        }
        _ => {}
    }
    let r = run(&levi);
    let table1 = match ty.family {
        Family::B if n > 3 && levi.len() == 1 => Some("first reduction: B_n (n>3), {e_i}, i≠1"),
        Family::B if r.is_some_and(|(i, j)| j < n && j - i > 1) => {
            Some("first reduction: B_n, {e_i..e_(i+k)}, i+k<n, k>1")
        }
        Family::C if levi.len() == 1 && !one(n) => Some("first reduction: C_n, {e_i}, i<n"),
        Family::C if r.is_some_and(|(i, j)| j < n && j - i > 1) => {
            Some("first reduction: C_n, {e_i..e_(i+k)}, i+k<n, k>1")
        }
        Family::F if levi.len() == 1 => Some("first reduction: F4, {e_i}"),
        Family::F if levi == [0, 1].into() || levi == [2, 3].into() => Some("first reduction: F4, {e1,e2} or {e3,e4}"),
        Family::D if connected_a && levi.len() > 1 => Some("first reduction: D_n, A_k with k>1"),
        Family::D if levi.len() == 1 => Some("first reduction: D_n, {e_i}, i∉{1,n-1,n}"),
        Family::E if connected_a => Some("first reduction: E, A_k"),
        Family::G => Some("first reduction: G2, {e1} or {e2}"),
        _ => None,
    };
    if let Some(rule) = table1 {
        return Ok(trivial(rule));
    }
    Ok(match ty.family {
        Family::A => match r {
            Some((i, jj)) => {
                let j = i - 1;
                let m = jj - j;
                let extreme = m == 1 && (i == 1 || i == n);
                let fam = FamilyDesc::new("N", j, m + 1, n - j - m);
                if extreme && n > 2 {
                    verdict(
                        Kind::Nontrivial,
                        Some(fam),
                        Tri::False,
                        Tri::Unknown,
                        "type A, extreme simple root: degree-1 family plus higher-degree simples",
                    )
                } else if extreme {
                    verdict(
                        Kind::Nontrivial,
                        Some(fam),
                        Tri::True,
                        Tri::Unknown,
                        "A2, extreme simple root: all simples of degree 1",
                    )
                } else {
                    verdict(
                        Kind::Nontrivial,
                        Some(fam),
                        Tri::True,
                        Tri::True,
                        "type A, connected Levi A_m, m<n",
                    )
                }
            }
            None => trivial("type A, disconnected Levi factor"),
        },
        Family::C => match r {
            Some((i, jj)) if jj == n => {
                let k = n - i + 1;
                let rule = if k == 1 {
                    "type C, long simple root"
                } else {
                    "type C, trailing C_k block"
                };
                verdict(
                    Kind::Nontrivial,
                    Some(FamilyDesc::new("M", n - k, k, 0)),
                    Tri::True,
                    Tri::True,
                    rule,
                )
            }
            Some(_) => trivial("type C, Levi of type A off the long root"),
            None => trivial("type C, disconnected Levi factor"),
        },
        _ if comps.len() > 1 => trivial("Levi factor not simple"),
        _ if connected_a => trivial("Levi factor of type A outside types A and C"),
        _ => trivial("Levi factor with an ideal of type B, C, D, E or F outside type C"),
    })
}

/// θ ⊆ S ⊆ Φ as sets of 0-based simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSpec {
    pub ty: CartanType,
    pub theta: BTreeSet<usize>,
    pub s: BTreeSet<usize>,
}

impl ThetaSpec {
    pub fn new(ty: CartanType, theta: BTreeSet<usize>, s: BTreeSet<usize>) -> Result<Self, CategoryError> {
        if let Some(&i) = s.iter().find(|&&i| i >= ty.rank) {
            return Err(CategoryError::BadTheta(i + 1, ty.rank));
        }
        if !theta.is_subset(&s) {
            return Err(CategoryError::NotNested);
        }
        Ok(ThetaSpec { ty, theta, s })
    }

    /// S = Φ.
    pub fn full(ty: CartanType, theta: BTreeSet<usize>) -> Result<Self, CategoryError> {
        ThetaSpec::new(ty, theta, (0..ty.rank).collect())
    }

    pub fn cuspidal_nodes(&self) -> BTreeSet<usize> {
        self.s.difference(&self.theta).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ConditionReport {
    fn new() -> Self {
        ConditionReport {
            pass: true,
            checked: 0,
            failures: vec![],
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub cuspidality: ConditionReport,
    pub restriction: ConditionReport,
    pub finiteness: ConditionReport,
    pub hw_vectors: Vec<Idx>,
    pub pass: bool,
}

/// Applications of root vector `x` from x(k) until the coefficient vanishes, up to `max`.
pub fn steps_to_zero(m: &LatticeModule, x: usize, k: &[i64], max: usize) -> Option<usize> {
    let mut cur = k.to_vec();
    for step in 1..=max {
        let (c, t) = m.act_root(x, &cur);
        if c.is_zero() {
            return Some(step);
        }
        cur = t;
    }
    None
}

fn is_hw(m: &LatticeModule, k: &[i64], raise: &[usize]) -> bool {
    raise.iter().all(|&x| m.act_root(x, k).0.is_zero())
}

/// Window check of the three defining conditions of O_{S,θ}.
pub fn check_membership(m: &LatticeModule, spec: &ThetaSpec, b: i64) -> Result<MembershipReport, CategoryError> {
    let alg = &m.alg;
    let n = alg.rank();
    let window = m.window(b);
    if window.is_empty() {
        return Err(CategoryError::WindowTooSmall(format!(
            "no basis vectors with |k_i| ≤ {b}"
        )));
    }
    let max_steps = 4 * (b as usize + 1) * alg.nvars;

    let mut cusp = ConditionReport::new();
    for r in alg.rs.generated(&spec.cuspidal_nodes()) {
        let x = alg.x(&r);
        for k in &window {
            cusp.checked += 1;
            if m.act_root(x, k).0.is_zero() {
                cusp.fail(format!("{} kills {:?}", alg.name(x), k));
            }
        }
    }

    let raise: Vec<usize> = spec.theta.iter().map(|&i| alg.x(&unit(n, i))).collect();
    let lower: Vec<usize> = spec.theta.iter().map(|&i| alg.x(&neg(&unit(n, i)))).collect();
    let mut restr = ConditionReport::new();
    let mut hws: BTreeSet<Idx> = BTreeSet::new();
    for k in &window {
        restr.checked += 1;
        let mut cur = k.clone();
        let mut path = Vec::new();
        let mut steps = 0;
        while let Some((c, t, i)) = raise.iter().enumerate().find_map(|(i, &x)| {
            let (c, t) = m.act_root(x, &cur);
            (!c.is_zero()).then_some((c, t, i))
        }) {
            let _ = c;
            path.push(i);
            cur = t;
            steps += 1;
            if steps > max_steps {
                break;
            }
        }
        if steps > max_steps {
            restr.fail(format!("{k:?}: raising does not terminate within {max_steps} steps"));
            continue;
        }
        // lower back along the path
        let mut back = cur.clone();
        for &i in path.iter().rev() {
            let (c, t) = m.act_root(lower[i], &back);
            if c.is_zero() {
                restr.fail(format!("{k:?}: not generated by the highest weight vector {cur:?}"));
                break;
            }
            back = t;
        }
        hws.insert(cur);
    }
    let ext = 2 * b + 1;
    for h in &hws {
        let mut seen: HashSet<Idx> = HashSet::from([h.clone()]);
        let mut queue = VecDeque::from([h.clone()]);
        while let Some(cur) = queue.pop_front() {
            for &y in &lower {
                let (c, t) = m.act_root(y, &cur);
                if c.is_zero() || t.iter().any(|v| v.abs() > ext) || !seen.insert(t.clone()) {
                    continue;
                }
                if is_hw(m, &t, &raise) {
                    restr.fail(format!("{t:?} is a second highest weight vector below {h:?}"));
                }
                queue.push_back(t);
            }
        }
    }

    let mut fin = ConditionReport::new();
    let sroots: HashSet<Vec<i64>> = alg.rs.generated(&spec.s).into_iter().collect();
    for r in alg.rs.positive.iter().filter(|r| !sroots.contains(*r)) {
        let x = alg.x(r);
        for k in &window {
            fin.checked += 1;
            if steps_to_zero(m, x, k, max_steps).is_none() {
                fin.fail(format!(
                    "{} not nilpotent on {:?} within {max_steps} steps",
                    alg.name(x),
                    k
                ));
            }
        }
    }

    let pass = cusp.pass && restr.pass && fin.pass;
    Ok(MembershipReport {
        cuspidality: cusp,
        restriction: restr,
        finiteness: fin,
        hw_vectors: hws.into_iter().collect(),
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootPartition {
    pub injective: Vec<Vec<i64>>,
    pub nilpotent: Vec<Vec<i64>>,
    pub undecided: Vec<Vec<i64>>,
}

/// Per-root evidence on the window: injective if no chain from a window vector
/// reaches a zero coefficient, nilpotent if every chain does; mixed evidence is undecided.
pub fn cuspidal_nilpotent_partition(m: &LatticeModule, window: &[Idx]) -> RootPartition {
    let alg = &m.alg;
    let max_steps = 4
        * window
            .iter()
            .flatten()
            .map(|v| v.unsigned_abs() as usize + 1)
            .max()
            .unwrap_or(1)
        * alg.nvars;
    let mut out = RootPartition {
        injective: vec![],
        nilpotent: vec![],
        undecided: vec![],
    };
    for r in alg.rs.roots() {
        let x = alg.x(&r);
        let hits: Vec<bool> = window
            .iter()
            .map(|k| steps_to_zero(m, x, k, max_steps).is_some())
            .collect();
        if hits.is_empty() {
            out.undecided.push(r);
        } else if hits.iter().all(|h| !h) {
            out.injective.push(r);
        } else if hits.iter().all(|h| *h) {
            out.nilpotent.push(r);
        } else {
            out.undecided.push(r);
        }
    }
    out
}

/// Some α ∈ S∖θ and β ∈ θ with α + β a root.
pub fn infinite_dim_criterion(spec: &ThetaSpec) -> bool {
    let c = crate::rootsys::cartan_matrix(spec.ty);
    spec.cuspidal_nodes()
        .iter()
        .any(|&a| spec.theta.iter().any(|&b| c[a][b] != 0))
}

/// Sample non-integer values for the free slots of a family.
pub fn sample_free(count: usize, shift: i64) -> Vec<Q> {
    const BASE: [(i64, i64); 6] = [(1, 2), (1, 3), (1, 5), (2, 7), (3, 11), (4, 13)];
    (0..count)
        .map(|i| {
            let (p, d) = BASE[i % BASE.len()];
            Q::new(p.into(), d.into()) + q(shift)
        })
        .collect()
}
