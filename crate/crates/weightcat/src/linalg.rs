//! Dense exact linear algebra over ℚ and integer row reduction.

use crate::rational::Q;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix over ℚ.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn from_rows(cols: usize, data: Vec<Vec<Q>>) -> Self {
        debug_assert!(data.iter().all(|r| r.len() == cols));
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for x in self.data[r].iter_mut() {
                *x = &*x * &inv;
            }
            let top = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for (x, y) in self.data[i].iter_mut().zip(top.iter()) {
                        if !y.is_zero() {
                            *x = &*x - &f * y;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data.truncate(r);
        self.rows = self.data.len();
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of {x : Ax = 0}, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.data[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }
}

/// Solves `A x = b`; returns a particular solution and a nullspace basis,
/// or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &[Q]) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    assert_eq!(a.rows, b.len());
    let mut aug = Matrix::zeros(0, a.cols + 1);
    for (row, bi) in a.data.iter().zip(b) {
        let mut r = row.clone();
        r.push(bi.clone());
        aug.push_row(r);
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![Q::zero(); a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.data[r][a.cols].clone();
    }
    Some((x, a.nullspace()))
}

/// Canonical basis of a subspace: nonzero rows of the RREF of the spanning set.
pub fn row_space_basis(cols: usize, vectors: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m = Matrix::from_rows(cols, vectors.to_vec());
    let piv = m.rref();
    (m.data, piv)
}

/// Reduces `v` modulo the span of an RREF basis with the given pivots.
pub fn reduce_mod(v: &[Q], basis: &[Vec<Q>], pivots: &[usize]) -> Vec<Q> {
    let mut out = v.to_vec();
    for (row, &pc) in basis.iter().zip(pivots) {
        if !out[pc].is_zero() {
            let f = out[pc].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    out
}

/// Returns λ with v = λ w, if any. `w` must be nonzero.
pub fn ratio(v: &[Q], w: &[Q]) -> Option<Q> {
    let i = w.iter().position(|x| !x.is_zero())?;
    let lam = &v[i] / &w[i];
    v.iter().zip(w).all(|(a, b)| *a == &lam * b).then_some(lam)
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Hermite normal form of an integer row lattice; zero rows dropped.
pub fn hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(n) = rows.first().map(|r| r.len()) else {
        return vec![];
    };
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let f = Integer::div_floor(&m[i][c], &m[r][c]);
                    for j in 0..n {
                        m[i][j] -= f * m[r][j];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let f = Integer::div_floor(&m[i][c], &m[r][c]);
            if f != 0 {
                for j in 0..n {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| row.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Rank over ℚ of a list of integer vectors.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    hnf(rows).len()
}

pub fn to_q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x.into())).collect()
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn all_nonneg(v: &[Q]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn rref_and_nullspace() {
        let m = Matrix::from_rows(3, vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = Matrix::from_rows(2, vec![vec![q(1), q(1)], vec![q(1), q(-1)]]);
        let (x, ns) = solve(&a, &[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(ns.is_empty());
        let b = Matrix::from_rows(1, vec![vec![q(0)]]);
        assert!(solve(&b, &[q(1)]).is_none());
    }

    #[test]
    fn hnf_basis() {
        let h = hnf(&[vec![2, 4], vec![1, 3], vec![3, 7]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(int_rank(&[vec![1, 0], vec![2, 0]]), 1);
    }

    #[test]
    fn ratios() {
        assert_eq!(ratio(&[q(3), q(6)], &[q(1), q(2)]), Some(q(3)));
        assert_eq!(ratio(&[q(3), q(5)], &[q(1), q(2)]), None);
        assert_eq!(ratio(&[qf(1, 2)], &[q(0)]), None);
    }
}
