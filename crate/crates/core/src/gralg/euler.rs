//! Euler classes of essential representations and localizations at them.

use super::poly::Poly;
use super::ring::{localize, GradedRing, RingAction};
use super::wmod::WMod;
use crate::error::Result;
use crate::lattice::poset::{Flag, SubgroupPoset};
use crate::lattice::subgroup::coords_in;

/// `ℰ_{K₀/K_s}`: Euler classes of characters trivial on `K_s` and
/// nontrivial on `K₀`. Stored as the ambient lattice `A_{K_s}`, the excluded
/// subspace spanned by `A_{K₀}`, and a finite generating sample of linear
/// forms (exact generators in rank 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSet {
    pub rank: usize,
    pub ambient: Vec<Vec<i64>>,
    pub excluded: Vec<Vec<i64>>,
    pub elements: Vec<Poly>,
}

impl EulerSet {
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether a character lies in the excluded subspace `A_{K₀} ⊗ ℚ`.
    fn excluded_contains(&self, chi: &[i64]) -> bool {
        match self.excluded.len() {
            0 => chi.iter().all(|&x| x == 0),
            n if n == self.rank => true,
            _ => {
                // Rank 2 with a one-dimensional excluded subspace.
                let e = &self.excluded[0];
                e[0] * chi[1] - e[1] * chi[0] == 0
            }
        }
    }

    /// Characters of `A_{K_s}` with lattice coordinates bounded by `bound`,
    /// nontrivial on `K₀`, as Euler classes.
    pub fn enumerate(&self, bound: i64) -> Vec<(Vec<i64>, Poly)> {
        let mut out = Vec::new();
        let n = self.ambient.len();
        let mut coeffs = vec![-bound; n];
        if n == 0 {
            return out;
        }
        loop {
            let chi: Vec<i64> = (0..self.rank)
                .map(|j| (0..n).map(|i| coeffs[i] * self.ambient[i][j]).sum())
                .collect();
            if !self.excluded_contains(&chi) {
                out.push((chi.clone(), Poly::linear(&chi)));
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] <= bound {
                    break;
                }
                coeffs[i] = -bound;
                i += 1;
            }
        }
    }
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
    if g == 0 {
        return v.to_vec();
    }
    let mut w: Vec<i64> = v.iter().map(|x| x / g).collect();
    if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    w
}

/// The Euler set of a flag; empty for a flag of length 0.
pub fn euler_set(p: &SubgroupPoset, f: &Flag) -> EulerSet {
    let rank = p.group.rank();
    let first = &p.subgroups[f.first()];
    let last = &p.subgroups[f.last()];
    let mut set = EulerSet { rank, ambient: last.ann.clone(), excluded: first.ann.clone(), elements: vec![] };
    if f.is_point() {
        return set;
    }
    if rank == 1 {
        // Every essential character has Euler class a nonzero multiple of c.
        set.elements = vec![Poly::var(1, 0)];
        return set;
    }
    // Rank 2: the primitive directions of small essential characters.
    let mut dirs: Vec<Vec<i64>> = set.enumerate(2).into_iter().map(|(c, _)| primitive(&c)).collect();
    dirs.sort();
    dirs.dedup();
    set.elements = dirs.iter().map(|d| Poly::linear(d)).collect();
    set
}

/// Whether the localization at `s` inverts the Euler class of `chi`: the
/// character must lie in `A_{K_s} ⊗ ℚ` and outside `A_{K₀} ⊗ ℚ`.
pub fn inverts(s: &EulerSet, chi: &[i64]) -> bool {
    if s.is_empty() || chi.iter().all(|&x| x == 0) {
        return false;
    }
    let in_ambient = match s.ambient.len() {
        n if n == s.rank => true,
        0 => false,
        _ => {
            let a = &s.ambient[0];
            a[0] * chi[1] - a[1] * chi[0] == 0
        }
    };
    in_ambient && !s.excluded_contains(chi)
}

/// Localize `ring` at an Euler set (closed up with orbit norms when an
/// action is given).
pub fn localize_at(ring: &GradedRing, s: &EulerSet, action: Option<&RingAction>) -> Result<GradedRing> {
    let mut elts = s.elements.clone();
    if let Some(a) = action {
        elts.extend(s.elements.iter().map(|e| a.norm(e)));
    }
    localize(ring, &elts)
}

/// Invariants then localize versus localize then invariants on a windowed
/// equivariant module; compares dimensions, ring and the map between them.
pub fn locinv_agrees(m: &WMod) -> Result<bool> {
    let (a, _) = m.localize().0.fixed_points()?;
    let (b, _) = m.fixed_points()?.0.localize();
    Ok(a.ring == b.ring && a.dims == b.dims)
}

/// Coordinates of a character in the ambient lattice, if it lies there.
pub fn ambient_coords(s: &EulerSet, chi: &[i64]) -> Option<Vec<i64>> {
    coords_in(&s.ambient, chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::normal_form::NormalForm;
    use crate::gralg::ring::polynomial_ring;
    use crate::gralg::wmod::RingKind;
    use crate::lattice::poset::{build_poset, torus2_sample, Truncation};
    use crate::lattice::Group;

    #[test]
    fn circle_flags() {
        let p = build_poset(Group::Circle, &Truncation::rank_one(6)).unwrap();
        let t = p.torus_index();
        for n in 0..6 {
            let f = Flag(vec![t, n]);
            let s = euler_set(&p, &f);
            assert_eq!(s.elements, vec![Poly::var(1, 0)]);
            // Characters of T/C_n are multiples of n; each Euler class is a
            // nonzero multiple of c.
            for (chi, e) in s.enumerate(5) {
                assert_eq!(chi[0] % (n as i64 + 1), 0);
                assert!(e.div_exact(&Poly::var(1, 0)).is_some());
                assert!(inverts(&s, &chi));
            }
            assert!(euler_set(&p, &Flag(vec![n])).is_empty());
        }
    }

    #[test]
    fn so3_norm_localization_agrees() {
        let r = polynomial_ring(1);
        let p = build_poset(Group::SO3, &Truncation::rank_one(1)).unwrap();
        let s = euler_set(&p, &Flag(vec![p.torus_index(), 0]));
        let a = localize_at(&r, &s, None).unwrap();
        let b = localize_at(&r, &s, Some(&RingAction::sign(1))).unwrap();
        for k in -20..=20 {
            assert_eq!(a.dim_at(k), b.dim_at(k));
        }
        let m = NormalForm::parse(RingKind::Poly(-2), Some(-1), "F0").unwrap().to_windowed(-40, 0);
        assert!(locinv_agrees(&m).unwrap());
    }

    #[test]
    fn torus2_flag_excludes_the_subcircle() {
        let p = build_poset(Group::Torus2, &torus2_sample()).unwrap();
        let t = p.torus_index();
        let k = p.index_of(&crate::lattice::subgroup::Subgroup::from_annihilator(2, &[vec![0, 1]])).unwrap();
        let one = p.index_of(&crate::lattice::subgroup::Subgroup::trivial(2)).unwrap();
        // (K ⊃ 1): characters nontrivial on K = those with nonzero first coordinate.
        let s = euler_set(&p, &Flag(vec![k, one]));
        assert!(!inverts(&s, &[0, 1]));
        assert!(inverts(&s, &[1, 0]));
        assert!(inverts(&s, &[1, 1]));
        assert!(inverts(&s, &[5, 3]));
        let full = euler_set(&p, &Flag(vec![t, one]));
        assert!(inverts(&full, &[0, 1]));
        assert_eq!(ambient_coords(&s, &[3, -2]), Some(vec![3, -2]));
    }
}
