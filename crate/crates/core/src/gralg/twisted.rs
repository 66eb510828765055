//! Twisted group rings `R[W]` with `(rλ)(sγ) = (r s^{λ⁻¹})(λγ)`.

use super::poly::Poly;
use super::ring::RingAction;
use std::collections::BTreeMap;

/// Elements are finite sums `Σ r_λ λ`. The right action is
/// `s^v = M_{v⁻¹}·s`, so `s^{λ⁻¹}` is the left action of `λ`.
#[derive(Clone, Debug)]
pub struct TwistedGroupRing {
    pub action: RingAction,
}

pub type TwistedElement = BTreeMap<usize, Poly>;

impl TwistedGroupRing {
    pub fn new(action: RingAction) -> Self {
        TwistedGroupRing { action }
    }

    pub fn rank(&self) -> usize {
        self.action.rank()
    }

    pub fn basic(&self, r: Poly, lambda: usize) -> TwistedElement {
        let mut e = TwistedElement::new();
        if !r.is_zero() {
            e.insert(lambda, r);
        }
        e
    }

    /// Right action `s^v`.
    pub fn right(&self, s: &Poly, v: usize) -> Poly {
        self.action.apply(self.action.group.inv(v), s)
    }

    pub fn add(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        let mut out = a.clone();
        for (g, p) in b {
            let v = out.entry(*g).or_insert_with(|| Poly::zero(self.rank())).add(p);
            if v.is_zero() {
                out.remove(g);
            } else {
                out.insert(*g, v);
            }
        }
        out
    }

    pub fn mul(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        let g = &self.action.group;
        let mut out = TwistedElement::new();
        for (&l, r) in a {
            for (&m, s) in b {
                let term = r.mul(&self.right(s, g.inv(l)));
                out = self.add(&out, &self.basic(term, g.mul(l, m)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Group;
    use proptest::prelude::*;

    fn lin(a: i64, b: i64) -> Poly {
        Poly::linear(&[a, b])
    }

    #[test]
    fn commutation_rule_for_sign_action() {
        let t = TwistedGroupRing::new(RingAction::sign(1));
        let c = Poly::var(1, 0);
        let w = t.basic(Poly::one(1), 1);
        let cc = t.basic(c.clone(), 0);
        // w·c = (−c)·w
        let lhs = t.mul(&w, &cc);
        assert_eq!(lhs, t.basic(c.scale(&crate::linalg::q(-1)), 1));
    }

    proptest! {
        #[test]
        fn associative_su3(a in 0usize..6, b in 0usize..6, c in 0usize..6,
                           x in -3i64..3, y in -3i64..3, z in -3i64..3) {
            let t = TwistedGroupRing::new(RingAction::new(Group::SU3.weyl()));
            let p = t.basic(lin(x, 1), a);
            let q = t.basic(lin(1, y), b);
            let r = t.basic(lin(z, z + 1), c);
            prop_assert_eq!(t.mul(&t.mul(&p, &q), &r), t.mul(&p, &t.mul(&q, &r)));
        }
    }
}
