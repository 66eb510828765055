//! Invariant subrings by degreewise Reynolds averaging, checked against the
//! Molien series.

use super::poly::{monomials, sym_power_matrix, Poly};
use super::ring::{GradedRing, RingAction};
use crate::lattice::group::IMat;
use crate::linalg::{q, Mat, Q};
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct InvariantRing {
    pub ambient: GradedRing,
    pub action: RingAction,
    pub generators_up_to: u32,
    pub generators: Vec<Poly>,
    /// `dims[k]`: dimension of invariants in codegree `k`, `k ≤ bound`.
    pub dims: Vec<usize>,
}

/// Averaging operator on polynomials of degree `k` (codegree `2k`).
pub fn reynolds_matrix(action: &RingAction, k: u32) -> Mat {
    let r = action.rank();
    let n = monomials(r, k).len();
    let g = &action.group;
    let mut sum = Mat::zeros(n, n);
    for w in 0..g.order() {
        sum = sum.add(&sym_power_matrix(&g.elements[w], r, k));
    }
    sum.scale(&Q::new(1.into(), (g.order() as i64).into()))
}

pub fn reynolds(action: &RingAction, p: &Poly) -> Poly {
    let g = &action.group;
    let mut out = Poly::zero(p.rank);
    for w in 0..g.order() {
        out = out.add(&action.apply(w, p));
    }
    out.scale(&Q::new(1.into(), (g.order() as i64).into()))
}

/// Products of generators of total polynomial degree `k`.
fn products_of_degree(gens: &[Poly], rank: usize, k: u32) -> Vec<Poly> {
    fn rec(gens: &[Poly], start: usize, k: u32, acc: Poly, out: &mut Vec<Poly>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..gens.len() {
            let d = gens[i].homogeneous_degree().unwrap_or(0);
            if d > 0 && d <= k {
                rec(gens, i, k - d, acc.mul(&gens[i]), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, k, Poly::one(rank), &mut out);
    out
}

/// Minimal homogeneous algebra generators of the invariants up to codegree
/// `bound`. A bound below 2 yields no generators.
pub fn invariants(ring: &GradedRing, action: &RingAction, bound: u32) -> InvariantRing {
    let r = ring.rank;
    let mut gens: Vec<Poly> = Vec::new();
    let mut dims = Vec::new();
    for cod in 0..=bound {
        if cod % 2 == 1 {
            dims.push(0);
            continue;
        }
        let k = cod / 2;
        let rey = reynolds_matrix(action, k);
        let img = rey.image_basis();
        dims.push(img.cols());
        if k == 0 {
            continue;
        }
        let mut have: Vec<Vec<Q>> = products_of_degree(&gens, r, k).iter().map(|p| p.coords(k)).collect();
        let mut cur = Mat::from_cols(monomials(r, k).len(), &have).rank();
        for j in 0..img.cols() {
            let v = img.col(j);
            have.push(v.clone());
            let next = Mat::from_cols(v.len(), &have).rank();
            if next > cur {
                cur = next;
                gens.push(normalize(Poly::from_coords(r, k, &v)));
            } else {
                have.pop();
            }
        }
    }
    InvariantRing { ambient: ring.clone(), action: action.clone(), generators_up_to: bound, generators: gens, dims }
}

/// Scale so the lex-leading coefficient is 1.
fn normalize(p: Poly) -> Poly {
    match p.terms.iter().next_back() {
        Some((_, c)) if !c.is_zero() => {
            let s = c.recip();
            p.scale(&s)
        }
        _ => p,
    }
}

impl InvariantRing {
    pub fn generator_codegrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| 2 * g.homogeneous_degree().unwrap_or(0)).collect()
    }

    /// Every generator is fixed by every group element.
    pub fn generators_invariant(&self) -> bool {
        self.generators
            .iter()
            .all(|p| (0..self.action.group.order()).all(|w| self.action.apply(w, p) == *p))
    }

    /// Dimensions of the subalgebra generated by `generators`, per codegree.
    pub fn generated_dims(&self) -> Vec<usize> {
        let r = self.ambient.rank;
        (0..=self.generators_up_to)
            .map(|cod| {
                if cod % 2 == 1 {
                    return 0;
                }
                let k = cod / 2;
                let vs: Vec<Vec<Q>> =
                    products_of_degree(&self.generators, r, k).iter().map(|p| p.coords(k)).collect();
                Mat::from_cols(monomials(r, k).len(), &vs).rank()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolienSeries {
    /// Coefficient of `t^k`, indexed by codegree.
    pub coeffs: Vec<Q>,
}

/// `det(I − s·A)` as polynomial coefficients in `s` (sum of signed principal
/// minors).
fn det_one_minus(a: &IMat) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0i64; n + 1];
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: IMat = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
        let m = if idx.is_empty() { 1 } else { crate::lattice::group::imat_det(&sub) };
        let k = idx.len();
        out[k] += if k.is_multiple_of(2) { m } else { -m };
    }
    out
}

/// `(1/|W|) Σ_w 1/det(1 − t²·M_w)` up to `t^bound`.
pub fn molien_series(action: &RingAction, bound: u32) -> MolienSeries {
    let g = &action.group;
    let n = (bound / 2) as usize;
    let mut total = vec![Q::zero(); n + 1];
    for w in 0..g.order() {
        let den = det_one_minus(&g.elements[w]);
        // Power-series inverse of den (constant term 1).
        let mut inv = vec![Q::zero(); n + 1];
        inv[0] = Q::one();
        for k in 1..=n {
            let mut s = Q::zero();
            for (j, &dj) in den.iter().enumerate().skip(1) {
                if j <= k && dj != 0 {
                    s -= q(dj) * &inv[k - j];
                }
            }
            inv[k] = s;
        }
        for k in 0..=n {
            total[k] += &inv[k];
        }
    }
    let scale = Q::new(1.into(), (g.order() as i64).into());
    let mut coeffs = vec![Q::zero(); bound as usize + 1];
    for (k, v) in total.into_iter().enumerate() {
        coeffs[2 * k] = v * &scale;
    }
    MolienSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::ring::polynomial_ring;
    use crate::lattice::Group;
    use proptest::prelude::*;

    #[test]
    fn sign_invariants_generated_by_d() {
        let inv = invariants(&polynomial_ring(1), &RingAction::sign(1), 8);
        assert_eq!(inv.generators, vec![Poly::var(1, 0).pow(2)]);
        assert_eq!(inv.generator_codegrees(), vec![4]);
        assert!(inv.generators_invariant());
    }

    #[test]
    fn trivial_action_generators() {
        let inv = invariants(&polynomial_ring(2), &RingAction::trivial(2), 6);
        assert_eq!(inv.generators.len(), 2);
        assert!(invariants(&polynomial_ring(2), &RingAction::trivial(2), 1).generators.is_empty());
    }

    #[test]
    fn su3_invariants_match_molien() {
        let act = RingAction::new(Group::SU3.weyl());
        let inv = invariants(&polynomial_ring(2), &act, 12);
        assert_eq!(inv.generator_codegrees(), vec![4, 6]);
        let m = molien_series(&act, 12);
        for k in 0..=12 {
            assert_eq!(q(inv.dims[k] as i64), m.coeffs[k], "codegree {k}");
        }
        assert_eq!(inv.generated_dims(), inv.dims);
    }

    #[test]
    fn molien_examples() {
        let m = molien_series(&RingAction::sign(1), 12);
        let want: Vec<i64> = (0..=12).map(|k| i64::from(k % 4 == 0)).collect();
        assert_eq!(m.coeffs, want.into_iter().map(q).collect::<Vec<_>>());
        let t = molien_series(&RingAction::trivial(1), 6);
        assert_eq!(t.coeffs[4], q(1));
        // 1/((1−t⁴)(1−t⁶)) expanded independently.
        let s = molien_series(&RingAction::new(Group::SU3.weyl()), 30);
        for k in 0..=30usize {
            let mut cnt = 0;
            for a in 0..=k / 4 {
                if (k - 4 * a) % 6 == 0 {
                    cnt += 1;
                }
            }
            assert_eq!(s.coeffs[k], q(cnt), "t^{k}");
        }
    }

    #[test]
    fn invariant_dimension_law_to_thirty() {
        for act in [RingAction::sign(1), RingAction::new(Group::SU3.weyl())] {
            let r = act.rank();
            let m = molien_series(&act, 30);
            let inv = invariants(&polynomial_ring(r), &act, 30);
            for k in 0..=30 {
                assert_eq!(q(inv.dims[k] as i64), m.coeffs[k]);
            }
        }
    }

    proptest! {
        #[test]
        fn reynolds_is_idempotent(k in 0u32..8, su3 in any::<bool>()) {
            let act = if su3 { RingAction::new(Group::SU3.weyl()) } else { RingAction::sign(1) };
            let r = reynolds_matrix(&act, k);
            prop_assert_eq!(r.mul(&r), r);
        }
    }
}
