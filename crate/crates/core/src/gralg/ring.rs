//! Graded polynomial rings `H*(BT/K)`, their localizations, and finite-group
//! actions on them.

use super::poly::{monomials, Poly};
use crate::error::{invalid, Result};
use crate::lattice::group::{FiniteGroup, IMat};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `ℚ[c₁,…,c_r]` with every `cᵢ` of codegree 2, possibly with a
/// multiplicative set inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    pub generators: Vec<(String, u32)>,
    pub rank: usize,
    /// Homogeneous generators of the inverted multiplicative set.
    pub inverted: Vec<Poly>,
}

pub fn polynomial_ring(rank: usize) -> GradedRing {
    let generators = (0..rank)
        .map(|i| (if rank == 1 { "c".to_string() } else { format!("c{}", i + 1) }, 2))
        .collect();
    GradedRing { generators, rank, inverted: vec![] }
}

impl GradedRing {
    pub fn is_localized(&self) -> bool {
        !self.inverted.is_empty()
    }

    /// Dimension in codegree `k` (negative allowed after localization);
    /// `None` when the piece is infinite dimensional.
    pub fn dim_at(&self, codegree: i64) -> Option<usize> {
        if codegree % 2 != 0 {
            return Some(0);
        }
        let k = codegree / 2;
        match (self.rank, self.is_localized()) {
            (0, _) => Some(usize::from(k == 0)),
            (1, false) => Some(usize::from(k >= 0)),
            (1, true) => Some(1),
            (_, false) => Some(if k < 0 { 0 } else { monomials(self.rank, k as u32).len() }),
            (_, true) => None,
        }
    }

    /// Hilbert series coefficients for codegrees `0..=bound` (unlocalized).
    pub fn hilbert(&self, bound: u32) -> Vec<usize> {
        (0..=bound as i64).map(|k| self.dim_at(k).unwrap_or(0)).collect()
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 0 {
            return write!(f, "Q");
        }
        let names: Vec<&str> = self.generators.iter().map(|g| g.0.as_str()).collect();
        write!(f, "Q[{}]", names.join(","))?;
        if !self.inverted.is_empty() {
            let inv: Vec<String> = self.inverted.iter().map(|p| p.to_string()).collect();
            write!(f, "[1/({})]", inv.join(", "))?;
        }
        Ok(())
    }
}

/// A finite group acting on the codegree-2 part by integer matrices; the
/// element `w` sends `c_j` to `Σᵢ M_w[i][j] cᵢ`.
#[derive(Clone, Debug)]
pub struct RingAction {
    pub group: FiniteGroup,
}

impl RingAction {
    pub fn new(group: FiniteGroup) -> Self {
        RingAction { group }
    }

    pub fn trivial(rank: usize) -> Self {
        RingAction { group: FiniteGroup::trivial(rank) }
    }

    /// `c ↦ −c` on `ℚ[c]`.
    pub fn sign(rank: usize) -> Self {
        let m: IMat = (0..rank).map(|i| (0..rank).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        RingAction { group: FiniteGroup::from_matrices(vec![m]) }
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn matrix(&self, w: usize) -> &IMat {
        &self.group.elements[w]
    }

    /// `matrix(vw) = matrix(v)·matrix(w)` for all pairs.
    pub fn is_homomorphism(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|v| {
            (0..g.order()).all(|w| {
                crate::lattice::group::imat_mul(&g.elements[v], &g.elements[w]) == g.elements[g.mul(v, w)]
            })
        })
    }

    pub fn apply(&self, w: usize, p: &Poly) -> Poly {
        p.act(self.matrix(w))
    }

    /// `∏_w w·s`, the orbit norm.
    pub fn norm(&self, s: &Poly) -> Poly {
        (0..self.group.order()).fold(Poly::one(s.rank), |acc, w| acc.mul(&self.apply(w, s)))
    }

    /// Whether every translate of an inverted generator divides a product of
    /// orbit norms; orbit norms are invariant so the closed-up set is stable.
    pub fn preserves(&self, inverted: &[Poly]) -> bool {
        let norms: Vec<Poly> = inverted.iter().map(|s| self.norm(s)).collect();
        inverted.iter().all(|s| {
            (0..self.group.order()).all(|w| {
                let ws = self.apply(w, s);
                norms.iter().any(|n| n.div_exact(&ws).is_some())
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSummary {
    pub ring: String,
    pub rank: usize,
    pub hilbert: Vec<usize>,
}

/// Localize at a multiplicative set; inverting zero is rejected.
pub fn localize(ring: &GradedRing, s: &[Poly]) -> Result<GradedRing> {
    if s.iter().any(|p| p.is_zero()) {
        return invalid("cannot invert 0");
    }
    if let Some(p) = s.iter().find(|p| p.homogeneous_degree().is_none()) {
        return invalid(format!("{p} is not homogeneous"));
    }
    let mut out = ring.clone();
    for p in s {
        if p.homogeneous_degree() != Some(0) && !out.inverted.contains(p) {
            out.inverted.push(p.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_rings() {
        assert_eq!(polynomial_ring(0).hilbert(4), vec![1, 0, 0, 0, 0]);
        assert_eq!(polynomial_ring(1).to_string(), "Q[c]");
        let h = polynomial_ring(2).hilbert(20);
        for (k, &d) in h.iter().enumerate() {
            assert_eq!(d, if k % 2 == 0 { k / 2 + 1 } else { 0 });
        }
    }

    #[test]
    fn laurent_localization() {
        let r = polynomial_ring(1);
        let l = localize(&r, &[Poly::var(1, 0)]).unwrap();
        assert_eq!(l.dim_at(-8), Some(1));
        assert!(localize(&r, &[Poly::zero(1)]).is_err());
        assert_eq!(localize(&polynomial_ring(0), &[]).unwrap(), polynomial_ring(0));
    }

    #[test]
    fn sign_action_norm() {
        let a = RingAction::sign(1);
        assert!(a.is_homomorphism());
        let c = Poly::var(1, 0);
        assert_eq!(a.norm(&c), c.mul(&c).scale(&crate::linalg::q(-1)));
        assert!(a.preserves(&[c]));
    }
}
