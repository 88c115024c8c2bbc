#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;
use weightcat::categorio::Kind;
use weightcat::inducemod::{induce, probe_restriction_failure, SliceModule};
use weightcat::rational::{qf, Q};
use weightcat::rootsys::{complement, CartanType, Family, LieAlg};
use weightcat::weylmod::{box_points, WeylParams};

/// One classification row: type, Φ∖θ as 1-based simple roots, expected kind.
pub struct Row {
    pub case: &'static str,
    pub ty: &'static str,
    pub levi: &'static [usize],
    pub kind: Kind,
}

const fn row(case: &'static str, ty: &'static str, levi: &'static [usize], kind: Kind) -> Row {
    Row { case, ty, levi, kind }
}

use Kind::{Excluded as X, Nontrivial as NT, Trivial as T};

/// First-reduction rows, each at its smallest admissible rank and one above.
pub const FIRST_REDUCTION: &[Row] = &[
    row("B_n (n>3), {e_i}, i≠1", "B4", &[2], T),
    row("B_n (n>3), {e_i}, i≠1", "B4", &[3], T),
    row("B_n (n>3), {e_i}, i≠1", "B4", &[4], T),
    row("B_n (n>3), {e_i}, i≠1", "B5", &[2], T),
    row("B_n (n>3), {e_i}, i≠1", "B5", &[5], T),
    row("B_n, {e_i..e_(i+k)}, i+k<n, k>1", "B4", &[1, 2, 3], T),
    row("B_n, {e_i..e_(i+k)}, i+k<n, k>1", "B5", &[1, 2, 3], T),
    row("B_n, {e_i..e_(i+k)}, i+k<n, k>1", "B5", &[2, 3, 4], T),
    row("C_n, {e_i}, i<n", "C2", &[1], T),
    row("C_n, {e_i}, i<n", "C3", &[1], T),
    row("C_n, {e_i}, i<n", "C3", &[2], T),
    row("C_n, {e_i..e_(i+k)}, i+k<n, k>1", "C4", &[1, 2, 3], T),
    row("C_n, {e_i..e_(i+k)}, i+k<n, k>1", "C5", &[1, 2, 3], T),
    row("C_n, {e_i..e_(i+k)}, i+k<n, k>1", "C5", &[2, 3, 4], T),
    row("F4, {e_i}", "F4", &[1], T),
    row("F4, {e_i}", "F4", &[2], T),
    row("F4, {e_i}", "F4", &[3], T),
    row("F4, {e_i}", "F4", &[4], T),
    row("F4, {e1,e2} or {e3,e4}", "F4", &[1, 2], T),
    row("F4, {e1,e2} or {e3,e4}", "F4", &[3, 4], T),
    row("D_n, A_k, k>1", "D4", &[1, 2], T),
    row("D_n, A_k, k>1", "D4", &[2, 3], T),
    row("D_n, A_k, k>1", "D5", &[1, 2, 3], T),
    row("D_n, A_k, k>1", "D5", &[3, 4], T),
    row("D_n, {e_i}, i∉{1,n-1,n}", "D4", &[2], T),
    row("D_n, {e_i}, i∉{1,n-1,n}", "D5", &[2], T),
    row("D_n, {e_i}, i∉{1,n-1,n}", "D5", &[3], T),
    row("E, A_k except the excluded nodes", "E6", &[2], T),
    row("E, A_k except the excluded nodes", "E6", &[1, 3], T),
    row("E, A_k except the excluded nodes", "E6", &[3, 4, 5], T),
    row("E, A_k except the excluded nodes", "E7", &[1], T),
    row("E, A_k except the excluded nodes", "E7", &[6, 7], T),
    row("E, A_k except the excluded nodes", "E8", &[8], T),
    row("G2, {e1} or {e2}", "G2", &[1], T),
    row("G2, {e1} or {e2}", "G2", &[2], T),
];

pub const EXCLUDED: &[Row] = &[
    row("B_n, {e1}", "B3", &[1], X),
    row("B_n, {e1}", "B4", &[1], X),
    row("D_n, {e1} or {e_(n-1)} or {e_n}", "D4", &[1], X),
    row("D_n, {e1} or {e_(n-1)} or {e_n}", "D4", &[3], X),
    row("D_n, {e1} or {e_(n-1)} or {e_n}", "D5", &[4], X),
    row("D_n, {e1} or {e_(n-1)} or {e_n}", "D5", &[5], X),
    row("E6, {e1} or {e6}", "E6", &[1], X),
    row("E6, {e1} or {e6}", "E6", &[6], X),
    row("E7, {e7}", "E7", &[7], X),
];

/// Non-trivial cases: A_n with connected Levi A_m (m<n), C_n with the long root or a trailing C_k.
pub const POSITIVE: &[Row] = &[
    row("A_n, connected A_m, m<n", "A2", &[1], NT),
    row("A_n, connected A_m, m<n", "A2", &[2], NT),
    row("A_n, connected A_m, m<n", "A3", &[2], NT),
    row("A_n, connected A_m, m<n", "A3", &[1, 2], NT),
    row("A_n, connected A_m, m<n", "A4", &[2, 3], NT),
    row("A_n, connected A_m, m<n", "A4", &[1, 2, 3], NT),
    row("A_n, connected A_m, m<n", "A5", &[3], NT),
    row("C_n, long simple root", "C2", &[2], NT),
    row("C_n, long simple root", "C3", &[3], NT),
    row("C_n, trailing C_k, k<n", "C3", &[2, 3], NT),
    row("C_n, trailing C_k, k<n", "C4", &[2, 3, 4], NT),
    row("C_n, trailing C_k, k<n", "C4", &[3, 4], NT),
];

pub fn theta_of(ty: CartanType, levi: &[usize]) -> BTreeSet<usize> {
    complement(ty.rank, &levi.iter().map(|i| i - 1).collect())
}

/// Every θ ≠ ∅, Φ for ranks 1..=max across all families.
pub fn all_thetas(max: usize) -> Vec<(CartanType, BTreeSet<usize>)> {
    let mut out = Vec::new();
    for fam in [Family::A, Family::B, Family::C, Family::D, Family::F, Family::G] {
        for n in 1..=max {
            let Ok(ty) = CartanType::new(fam, n) else { continue };
            for mask in 1..(1u32 << n) - 1 {
                out.push((ty, (0..n).filter(|i| mask >> i & 1 == 1).collect()));
            }
        }
    }
    out
}

/// Generic non-integral Weyl parameters, one per variable.
pub fn generic_params(nvars: usize, shift: i64) -> Vec<Q> {
    const P: [i64; 6] = [3, 5, 7, 11, 13, 17];
    (0..nvars).map(|i| qf(1 + shift + i as i64, P[i % P.len()])).collect()
}

/// Runs the restriction probe on V(C) for C a cuspidal Levi slice of W(a) with generic a.
pub fn probe_trivial(ty: CartanType, theta: &BTreeSet<usize>, shift: i64, depth: usize) -> bool {
    let alg = Arc::new(LieAlg::new(ty).unwrap());
    let levi = complement(ty.rank, theta);
    let base = vec![0; alg.nvars];
    let slice = SliceModule::new(
        alg.clone(),
        WeylParams::new(generic_params(alg.nvars, shift)),
        levi,
        base,
    );
    let samples: Vec<_> = box_points(alg.nvars, 1, |k| slice.module.contains(k))
        .into_iter()
        .take(3)
        .collect();
    let v = induce(Box::new(slice), theta.clone(), depth);
    probe_restriction_failure(&v, &samples).unwrap().restriction_impossible
}
