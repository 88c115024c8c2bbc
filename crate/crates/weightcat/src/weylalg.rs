//! The Weyl algebra W_N in normal-ordered form (all q's left of all p's).

use crate::rational::{binom, factorial, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vectors of a normal-ordered monomial q^a p^b.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub q: Vec<u32>,
    pub p: Vec<u32>,
}

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono {
            q: vec![0; n],
            p: vec![0; n],
        }
    }

    pub fn degree(&self) -> u32 {
        self.q.iter().sum::<u32>() + self.p.iter().sum::<u32>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylPoly {
    pub n: usize,
    pub terms: BTreeMap<Mono, Q>,
}

impl WeylPoly {
    pub fn zero(n: usize) -> Self {
        WeylPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut w = WeylPoly::zero(n);
        w.add_term(Mono::one(n), c);
        w
    }

    pub fn q(n: usize, i: usize) -> Self {
        let mut m = Mono::one(n);
        m.q[i] = 1;
        WeylPoly::mono(n, m, Q::from_integer(1.into()))
    }

    pub fn p(n: usize, i: usize) -> Self {
        let mut m = Mono::one(n);
        m.p[i] = 1;
        WeylPoly::mono(n, m, Q::from_integer(1.into()))
    }

    pub fn mono(n: usize, m: Mono, c: Q) -> Self {
        let mut w = WeylPoly::zero(n);
        w.add_term(m, c);
        w
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut w = WeylPoly::zero(self.n);
        for (m, v) in &self.terms {
            w.add_term(m.clone(), v * c);
        }
        w
    }

    pub fn commutator(&self, other: &WeylPoly) -> WeylPoly {
        &(self * other) - &(other * self)
    }
}

/// (q^a p^b)(q^c p^d) normal-ordered, using p^b q^c = Σ_k C(b,k) C(c,k) k! q^(c-k) p^(b-k)
/// one variable at a time.
fn mono_mul(x: &Mono, y: &Mono) -> Vec<(Mono, Q)> {
    let n = x.q.len();
    let mut acc: Vec<(Mono, Q)> = vec![(Mono::one(n), Q::from_integer(1.into()))];
    for i in 0..n {
        let (b, c) = (x.p[i], y.q[i]);
        let mut next = Vec::new();
        for (m, coef) in &acc {
            for k in 0..=b.min(c) {
                let w = Q::from_integer(binom(b, k) * binom(c, k) * factorial(k));
                let mut m2 = m.clone();
                m2.q[i] = x.q[i] + c - k;
                m2.p[i] = b - k + y.p[i];
                next.push((m2, coef * &w));
            }
        }
        acc = next;
    }
    acc
}

impl Mul for &WeylPoly {
    type Output = WeylPoly;
    fn mul(self, rhs: &WeylPoly) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n);
        for (mx, cx) in &self.terms {
            for (my, cy) in &rhs.terms {
                for (m, c) in mono_mul(mx, my) {
                    out.add_term(m, c * cx * cy);
                }
            }
        }
        out
    }
}

impl Add for &WeylPoly {
    type Output = WeylPoly;
    fn add(self, rhs: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylPoly {
    type Output = WeylPoly;
    fn sub(self, rhs: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &WeylPoly {
    type Output = WeylPoly;
    fn neg(self) -> WeylPoly {
        self.scale(&Q::from_integer((-1).into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn canonical_commutation() {
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                let c = WeylPoly::p(n, i).commutator(&WeylPoly::q(n, j));
                let expect = if i == j {
                    WeylPoly::constant(n, q(1))
                } else {
                    WeylPoly::zero(n)
                };
                assert_eq!(c, expect);
                assert!(WeylPoly::q(n, i).commutator(&WeylPoly::q(n, j)).is_zero());
                assert!(WeylPoly::p(n, i).commutator(&WeylPoly::p(n, j)).is_zero());
            }
        }
    }

    #[test]
    fn p2_q2() {
        // [p^2, q^2] = 4qp + 2
        let n = 1;
        let q2 = &WeylPoly::q(n, 0) * &WeylPoly::q(n, 0);
        let p2 = &WeylPoly::p(n, 0) * &WeylPoly::p(n, 0);
        let qp = &WeylPoly::q(n, 0) * &WeylPoly::p(n, 0);
        let expect = &qp.scale(&q(4)) + &WeylPoly::constant(n, q(2));
        assert_eq!(p2.commutator(&q2), expect);
    }
}
