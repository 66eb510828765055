//! The exterior-times-polynomial invariant check: `δκ` is Weyl-invariant and
//! `det`-twisted invariants of the polynomial part are divisible by `κ`.

use super::invariants::reynolds_matrix;
use super::poly::{monomials, sym_power_matrix, Poly};
use super::ring::RingAction;
use crate::error::{unsupported, Result};
use crate::lattice::Group;
use crate::linalg::{q, Mat, Q};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolomonReport {
    pub group: String,
    pub kappa: String,
    pub kappa_codegree: u32,
    pub delta_kappa_invariant: bool,
    pub divisibility: bool,
    pub bound: u32,
}

impl SolomonReport {
    pub fn ok(&self) -> bool {
        self.delta_kappa_invariant && self.divisibility
    }
}

/// `κ = ∏_{α∈R₊} c(α)`.
pub fn kappa(group: Group) -> Poly {
    let r = group.rank();
    group.positive_roots().iter().fold(Poly::one(r), |acc, a| acc.mul(&Poly::linear(a)))
}

/// Projector onto `P_k^{det}` (polynomials with `w f = det(w) f`).
fn det_projector(action: &RingAction, k: u32) -> Mat {
    let g = &action.group;
    let n = monomials(action.rank(), k).len();
    let mut sum = Mat::zeros(n, n);
    for w in 0..g.order() {
        sum = sum.add(&sym_power_matrix(&g.elements[w], action.rank(), k).scale(&q(g.det(w))));
    }
    sum.scale(&Q::new(1.into(), (g.order() as i64).into()))
}

pub fn solomon_check(group: Group, bound: u32) -> Result<SolomonReport> {
    if group == Group::O2 {
        return unsupported("root data for O2 (not connected)");
    }
    let action = RingAction::new(group.weyl());
    let r = group.rank();
    let kap = kappa(group);
    let kdeg = kap.homogeneous_degree().unwrap_or(0);
    let g = &action.group;
    // δ spans the top exterior power, on which w acts by det(w).
    let delta_kappa_invariant = (0..g.order()).all(|w| kap.act(&g.elements[w]).scale(&q(g.det(w))) == kap);
    let mut divisibility = true;
    for k in 0..=bound / 2 {
        let img = det_projector(&action, k).image_basis();
        let inv_dim = if k >= kdeg { reynolds_matrix(&action, k - kdeg).rank() } else { 0 };
        if img.cols() != inv_dim {
            divisibility = false;
        }
        for j in 0..img.cols() {
            let f = Poly::from_coords(r, k, &img.col(j));
            match f.div_exact(&kap) {
                Some(quot) if (0..g.order()).all(|w| action.apply(w, &quot) == quot) => {}
                _ => divisibility = false,
            }
        }
    }
    Ok(SolomonReport {
        group: group.to_string(),
        kappa: kap.to_string(),
        kappa_codegree: 2 * kdeg,
        delta_kappa_invariant,
        divisibility,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_su3_and_trivial() {
        let r = solomon_check(Group::SO3, 20).unwrap();
        assert!(r.ok());
        assert_eq!(r.kappa, "c");
        let s = solomon_check(Group::SU3, 16).unwrap();
        assert!(s.ok());
        assert_eq!(s.kappa_codegree, 6);
        let c = solomon_check(Group::Circle, 10).unwrap();
        assert!(c.ok());
        assert_eq!(c.kappa, "1");
        assert!(solomon_check(Group::O2, 4).is_err());
    }

    #[test]
    fn so3_odd_invariants_are_c_times_d_powers() {
        let act = RingAction::new(Group::SO3.weyl());
        for k in 0..10 {
            let p = det_projector(&act, k);
            assert_eq!(p.rank(), (k % 2) as usize);
        }
    }
}
