//! Commutative polynomials over ℚ in `rank` variables of codegree 2.

use crate::lattice::group::IMat;
use crate::linalg::{q, Mat, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub rank: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let v = if self.rank == 1 { "c".to_string() } else { format!("c{}", i + 1) };
                    if k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Exponent vectors of total degree `k` in `rank` variables, lexicographically
/// descending.
pub fn monomials(rank: usize, k: u32) -> Vec<Vec<u32>> {
    if rank == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for mut rest in monomials(rank - 1, k - a) {
            let mut e = vec![a];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

impl Poly {
    pub fn zero(rank: usize) -> Self {
        Poly { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: Q) -> Self {
        let mut p = Poly::zero(rank);
        if !c.is_zero() {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    pub fn one(rank: usize) -> Self {
        Poly::constant(rank, Q::one())
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Poly::monomial(e, Q::one())
    }

    pub fn monomial(e: Vec<u32>, c: Q) -> Self {
        let rank = e.len();
        let mut p = Poly::zero(rank);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Linear form `Σ aᵢ cᵢ`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let rank = coeffs.len();
        let mut p = Poly::zero(rank);
        for (i, &a) in coeffs.iter().enumerate() {
            p = p.add(&Poly::var(rank, i).scale(&q(a)));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Polynomial degree if homogeneous (codegree is twice this).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            let v = out.terms.entry(e.clone()).or_insert_with(Q::zero);
            *v += c;
            if v.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.rank);
        }
        Poly { rank: self.rank, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.entry(e.clone()).or_insert_with(Q::zero);
                *v += c1 * c2;
                if v.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.rank), |acc, _| acc.mul(self))
    }

    /// Apply the algebra automorphism with `c_j ↦ Σᵢ A[i][j] cᵢ`.
    pub fn act(&self, a: &IMat) -> Poly {
        let images: Vec<Poly> = (0..self.rank).map(|j| {
            let col: Vec<i64> = (0..self.rank).map(|i| a[i][j]).collect();
            Poly::linear(&col)
        }).collect();
        let mut out = Poly::zero(self.rank);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(self.rank, c.clone());
            for (j, &k) in e.iter().enumerate() {
                t = t.mul(&images[j].pow(k));
            }
            out = out.add(&t);
        }
        out
    }

    /// Coordinates in the monomial basis of degree `k`.
    pub fn coords(&self, k: u32) -> Vec<Q> {
        monomials(self.rank, k).iter().map(|e| self.terms.get(e).cloned().unwrap_or_else(Q::zero)).collect()
    }

    pub fn from_coords(rank: usize, k: u32, v: &[Q]) -> Poly {
        let mut p = Poly::zero(rank);
        for (e, c) in monomials(rank, k).into_iter().zip(v) {
            if !c.is_zero() {
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    /// Exact division: `Some(q)` with `self = q · d`, else `None`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(self.rank));
        }
        // Monomial-order long division with lex-largest leading terms.
        let (dl, dc) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.rank);
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&dl).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(qe, &c / &dc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

/// Matrix of `A` acting on the degree-`k` monomial basis.
pub fn sym_power_matrix(a: &IMat, rank: usize, k: u32) -> Mat {
    let basis = monomials(rank, k);
    let cols: Vec<Vec<Q>> = basis.iter().map(|e| Poly::monomial(e.clone(), Q::one()).act(a).coords(k)).collect();
    Mat::from_cols(basis.len(), &cols)
}
