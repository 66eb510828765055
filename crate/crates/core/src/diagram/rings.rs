//! Flag-indexed diagrams of rings: the localized polynomial rings `Ra`, their
//! invariants `Rinv` under the identity-component Weyl groups, and the
//! twisted group rings `Rtw` over them.

use crate::error::{invalid, Result};
use crate::gralg::euler::euler_set;
use crate::gralg::invariants::reynolds_matrix;
use crate::gralg::ring::{localize, polynomial_ring, GradedRing, RingAction};
use crate::gralg::wmod::RingKind;
use crate::lattice::component::{ComponentStructure, StructureKind};
use crate::lattice::group::{FiniteGroup, IMat};
use crate::lattice::poset::{Flag, SubgroupPoset};
use crate::lattice::subgroup::coords_in;
use crate::lattice::Group;
use crate::linalg::{q, Mat};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Ra,
    Rinv,
    Rtw,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::Ra => "Ra",
            Flavor::Rinv => "Rinv",
            Flavor::Rtw => "Rtw",
        };
        write!(f, "{s}")
    }
}

/// The ring at one flag.
#[derive(Clone, Debug)]
pub struct RingValue {
    pub flag: Flag,
    pub label: String,
    /// `ℰ⁻¹ H*(BT/K_s)` on the character lattice of `T/K_s`.
    pub ring: GradedRing,
    /// `W^e_F` as Weyl element indices (only the identity for `Ra`).
    pub weyl_e: Vec<usize>,
    /// `|W_F / W^e_F|` for `Rtw`, else 1.
    pub twist: usize,
    /// Concrete form in rank 1.
    pub kind: Option<RingKind>,
    /// `W^e_F` acting on the ambient polynomial ring.
    pub action: RingAction,
}

impl RingValue {
    /// Dimension in internal degree `d`; `None` when infinite.
    pub fn dim_at(&self, d: i32) -> Option<usize> {
        let base = match self.kind {
            Some(k) => Some(kind_dim(k, d)),
            None => {
                if self.ring.is_localized() {
                    None
                } else if d > 0 || d % 2 != 0 {
                    Some(0)
                } else {
                    Some(reynolds_matrix(&self.action, (-d / 2) as u32).rank())
                }
            }
        };
        base.map(|b| b * self.twist)
    }

    pub fn name(&self) -> String {
        let base = match self.kind {
            Some(k) => k.name(),
            None => {
                let mut s = self.ring.to_string();
                if self.action.group.order() > 1 {
                    s = format!("{s}^We");
                }
                s
            }
        };
        if self.twist > 1 {
            format!("{base}[W{}]", self.twist)
        } else {
            base
        }
    }

    /// The value with every remaining Euler class inverted.
    pub fn localized_kind(&self) -> Option<RingKind> {
        self.kind.map(|k| k.localized())
    }
}

/// Dimension of a rank-1 ring in internal degree `d`.
pub fn kind_dim(k: RingKind, d: i32) -> usize {
    match k {
        RingKind::Field => usize::from(d == 0),
        RingKind::Poly(g) => usize::from(d <= 0 && d % g == 0),
        RingKind::Laurent(g) => usize::from(d % g == 0),
    }
}

#[derive(Clone, Debug)]
pub struct RingDiagram {
    pub group: Group,
    pub flavor: Flavor,
    pub poset: SubgroupPoset,
    pub flags: Vec<Flag>,
    pub values: Vec<RingValue>,
    /// Flag inclusions `(i, j)`: `flags[i]` is a proper subflag of `flags[j]`.
    pub maps: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorialityReport {
    pub maps: usize,
    pub composites: usize,
    /// `(source, target)` labels of inclusions without a ring map, or
    /// `(source, middle, target)` composites that disagree.
    pub failures: Vec<String>,
}

impl FunctorialityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `W^e` restricted to the character lattice with basis `basis`.
fn restricted_action(p: &SubgroupPoset, basis: &[Vec<i64>], we: &[usize]) -> RingAction {
    let m = basis.len();
    if m == 0 {
        return RingAction::trivial(0);
    }
    let mats: Vec<IMat> = we
        .iter()
        .map(|&w| {
            let mut a: IMat = vec![vec![0; m]; m];
            for (j, b) in basis.iter().enumerate() {
                let img = p.weyl.act_right(b, w);
                let c = coords_in(basis, &img).expect("W^e preserves the lattice");
                for i in 0..m {
                    a[i][j] = c[i];
                }
            }
            a
        })
        .collect();
    RingAction::new(FiniteGroup::from_matrices(mats))
}

fn rank1_kind(ring: &GradedRing, action: &RingAction) -> Option<RingKind> {
    match ring.rank {
        0 => Some(RingKind::Field),
        1 => {
            let negates = action.group.elements.iter().any(|e| e[0][0] == -1);
            let g = if negates { -4 } else { -2 };
            Some(if ring.is_localized() { RingKind::Laurent(g) } else { RingKind::Poly(g) })
        }
        _ => None,
    }
}

fn value_at(p: &SubgroupPoset, f: &Flag, we: Vec<usize>, twist: usize) -> Result<RingValue> {
    let last = &p.subgroups[f.last()];
    let basis = last.ann.clone();
    let mut ring = polynomial_ring(basis.len());
    let s = euler_set(p, f);
    if !s.is_empty() && !basis.is_empty() {
        // Euler classes in coordinates of the lattice of T/K_s.
        let elts: Vec<_> = if basis.len() == 1 {
            vec![crate::gralg::Poly::var(1, 0)]
        } else {
            s.elements
                .iter()
                .filter_map(|e| coords_in(&basis, &linear_coeffs(e, p.group.rank())).map(|c| crate::gralg::Poly::linear(&c)))
                .collect()
        };
        ring = localize(&ring, &elts)?;
    }
    let action = restricted_action(p, &basis, &we);
    let kind = if p.group.rank() == 1 { rank1_kind(&ring, &action) } else { None };
    Ok(RingValue { flag: f.clone(), label: p.flag_label(f), ring, weyl_e: we, twist, kind, action })
}

/// Integer coefficients of a linear form.
fn linear_coeffs(e: &crate::gralg::Poly, rank: usize) -> Vec<i64> {
    use num_traits::ToPrimitive;
    (0..rank)
        .map(|j| {
            let key: Vec<u32> = (0..rank).map(|i| u32::from(i == j)).collect();
            e.terms.get(&key).and_then(|c| c.to_integer().to_i64()).unwrap_or(0)
        })
        .collect()
}

fn subflag_maps(flags: &[Flag]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..flags.len() {
        for j in 0..flags.len() {
            if i != j && flags[i].is_subflag_of(&flags[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `Ra(K₀ ⊃ ⋯ ⊃ K_s) = ℰ⁻¹_{K₀/K_s} H*(BT/K_s)` on flags with at most
/// `max_len` inclusions.
pub fn build_ra(p: &SubgroupPoset, max_len: usize) -> Result<RingDiagram> {
    let flags = p.enumerate_flags(max_len);
    let values = flags.iter().map(|f| value_at(p, f, vec![0], 1)).collect::<Result<Vec<_>>>()?;
    let maps = subflag_maps(&flags);
    Ok(RingDiagram { group: p.group, flavor: Flavor::Ra, poset: p.clone(), flags, values, maps })
}

fn check_structure(cs: &ComponentStructure, flags: &[Flag]) -> Result<()> {
    if cs.len() != flags.len() {
        return invalid("component structure is not indexed by the flags");
    }
    if let Some((s, t)) = cs.decreasing_witness() {
        return invalid(format!(
            "component structure is not decreasing along {} → {}",
            cs.poset.labels[s], cs.poset.labels[t]
        ));
    }
    if !cs.is_normal() {
        return invalid("component structure is not normal");
    }
    Ok(())
}

/// `Rinv(F) = Ra(F)^{W^e_F}`.
pub fn build_rinv(p: &SubgroupPoset, cs: &ComponentStructure, flags: &[Flag]) -> Result<RingDiagram> {
    check_structure(cs, flags)?;
    let values =
        flags.iter().enumerate().map(|(i, f)| value_at(p, f, cs.we[i].clone(), 1)).collect::<Result<Vec<_>>>()?;
    let maps = subflag_maps(flags);
    Ok(RingDiagram { group: p.group, flavor: Flavor::Rinv, poset: p.clone(), flags: flags.to_vec(), values, maps })
}

/// `Rtw(F) = Rinv(F)[W_F / W^e_F]`.
pub fn build_rtw(p: &SubgroupPoset, cs: &ComponentStructure, flags: &[Flag]) -> Result<RingDiagram> {
    check_structure(cs, flags)?;
    let values = flags
        .iter()
        .enumerate()
        .map(|(i, f)| value_at(p, f, cs.we[i].clone(), cs.residual(i).len()))
        .collect::<Result<Vec<_>>>()?;
    let maps = subflag_maps(flags);
    Ok(RingDiagram { group: p.group, flavor: Flavor::Rtw, poset: p.clone(), flags: flags.to_vec(), values, maps })
}

/// The three diagrams for the Lie component structure.
pub fn build_all(p: &SubgroupPoset, max_len: usize) -> Result<(RingDiagram, RingDiagram, RingDiagram)> {
    let (cs, flags) = ComponentStructure::on_flags(p, max_len, StructureKind::Lie);
    Ok((build_ra(p, max_len)?, build_rinv(p, &cs, &flags)?, build_rtw(p, &cs, &flags)?))
}

/// Whether `basis_a ⊗ ℚ ⊆ basis_b ⊗ ℚ`.
fn rational_span_contains(b: &[Vec<i64>], a: &[Vec<i64>]) -> bool {
    let to_mat = |rows: &[Vec<i64>]| Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
    if a.is_empty() {
        return true;
    }
    if b.is_empty() {
        return a.iter().all(|r| r.iter().all(|&x| x == 0));
    }
    let mb = to_mat(b);
    let both: Vec<Vec<i64>> = b.iter().chain(a.iter()).cloned().collect();
    to_mat(&both).rank() == mb.rank()
}

impl RingDiagram {
    pub fn index_of(&self, f: &Flag) -> Option<usize> {
        self.flags.iter().position(|x| x == f)
    }

    pub fn value(&self, f: &Flag) -> Option<&RingValue> {
        self.index_of(f).map(|i| &self.values[i])
    }

    /// Whether the inclusion `flags[i] ⊆ flags[j]` carries a ring map: the
    /// polynomial part includes, inverted classes stay inverted, and
    /// `W^e_j`-invariance is implied by `W^e_i`-invariance.
    pub fn map_exists(&self, i: usize, j: usize) -> bool {
        let (e, f) = (&self.flags[i], &self.flags[j]);
        let p = &self.poset;
        let amb_e = &p.subgroups[e.last()].ann;
        let amb_f = &p.subgroups[f.last()].ann;
        let included = amb_e.iter().all(|r| coords_in(amb_f, r).is_some() || amb_f.len() == p.group.rank());
        let exc_e = &p.subgroups[e.first()].ann;
        let exc_f = &p.subgroups[f.first()].ann;
        let inverted_ok = rational_span_contains(exc_e, exc_f);
        let we_ok = self.values[j].weyl_e.iter().all(|x| self.values[i].weyl_e.contains(x));
        included && inverted_ok && we_ok
    }

    /// The ring map `flags[i] → flags[j]` in internal degree `d` on
    /// monomial bases (rank 1). Twisted values carry the group factor in
    /// the second index, with the identity coset first.
    pub fn map_matrix(&self, i: usize, j: usize, d: i32) -> Option<Mat> {
        let (a, b) = (&self.values[i], &self.values[j]);
        let (ka, kb) = (a.kind?, b.kind?);
        let (na, nb) = (kind_dim(ka, d), kind_dim(kb, d));
        let mut m = Mat::zeros(nb * b.twist, na * a.twist);
        if na > 0 && nb > 0 {
            for c in 0..a.twist.min(b.twist) {
                m[(c, c)] = q(1);
            }
        }
        Some(m)
    }

    /// Every inclusion carries a map and composites agree degreewise on
    /// `[lo, hi]` (rank 1) or symbolically (rank 2).
    pub fn functoriality(&self, lo: i32, hi: i32) -> FunctorialityReport {
        let mut failures = Vec::new();
        for &(i, j) in &self.maps {
            if !self.map_exists(i, j) {
                failures.push(format!("{} → {}", self.values[i].label, self.values[j].label));
            }
        }
        let mut composites = 0;
        for &(i, j) in &self.maps {
            for &(j2, k) in &self.maps {
                if j2 != j {
                    continue;
                }
                composites += 1;
                if !self.maps.contains(&(i, k)) {
                    failures.push(format!("{} → {} → {}", self.values[i].label, self.values[j].label, self.values[k].label));
                    continue;
                }
                if self.group.rank() == 1 {
                    for d in lo..=hi {
                        let (Some(ab), Some(bc), Some(ac)) =
                            (self.map_matrix(i, j, d), self.map_matrix(j, k, d), self.map_matrix(i, k, d))
                        else {
                            continue;
                        };
                        if bc.mul(&ab) != ac {
                            failures.push(format!(
                                "{} → {} → {} in degree {d}",
                                self.values[i].label, self.values[j].label, self.values[k].label
                            ));
                            break;
                        }
                    }
                }
            }
        }
        FunctorialityReport { maps: self.maps.len(), composites, failures }
    }

    /// `Ra` depends only on the first and last terms of a flag.
    pub fn depends_on_ends(&self) -> bool {
        self.flags.iter().enumerate().all(|(i, f)| {
            let short = if f.length() <= 1 { f.clone() } else { Flag(vec![f.first(), f.last()]) };
            match self.index_of(&short) {
                Some(j) => self.values[i].ring == self.values[j].ring,
                None => true,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRow {
    pub flag: String,
    pub flavor: String,
    pub ring: String,
    /// `(degree, dim)` on the window, `None` for infinite pieces.
    pub dims: Vec<(i32, Option<usize>)>,
}

/// Tabulate a diagram on a degree window.
pub fn ring_table(r: &RingDiagram, lo: i32, hi: i32) -> Vec<RingRow> {
    r.values
        .iter()
        .map(|v| RingRow {
            flag: v.label.clone(),
            flavor: r.flavor.to_string(),
            ring: v.name(),
            dims: (lo..=hi).map(|d| (d, v.dim_at(d))).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::normal_form::NormalForm;
    use crate::lattice::poset::{build_poset, torus2_sample, Truncation};

    fn so3(n: u64) -> SubgroupPoset {
        build_poset(Group::SO3, &Truncation::rank_one(n)).unwrap()
    }

    fn flag(p: &SubgroupPoset, label: &str) -> Flag {
        let (wp, flags) = crate::lattice::transport::WPoset::of_flags(p, 1);
        flags[wp.labels.iter().position(|l| l == label).unwrap()].clone()
    }

    #[test]
    fn so3_ra_values() {
        let p = so3(1);
        let ra = build_ra(&p, 1).unwrap();
        assert_eq!(ra.value(&flag(&p, "(C1)")).unwrap().kind, Some(RingKind::Poly(-2)));
        assert_eq!(ra.value(&flag(&p, "(T)")).unwrap().kind, Some(RingKind::Field));
        assert_eq!(ra.value(&flag(&p, "(T⊃C1)")).unwrap().kind, Some(RingKind::Laurent(-2)));
        assert!(ra.functoriality(-20, 0).ok());
        assert!(ra.depends_on_ends());
    }

    #[test]
    fn so3_rinv_and_warning() {
        let p = so3(1);
        let (_, rinv, rtw) = build_all(&p, 1).unwrap();
        let c1 = rinv.value(&flag(&p, "(C1)")).unwrap();
        let tc1 = rinv.value(&flag(&p, "(T⊃C1)")).unwrap();
        assert_eq!(c1.kind, Some(RingKind::Poly(-4)));
        assert_eq!(tc1.kind, Some(RingKind::Laurent(-2)));
        assert_eq!(tc1.dim_at(2), Some(1));
        assert_eq!(kind_dim(c1.localized_kind().unwrap(), 2), 0);
        assert!(rinv.functoriality(-20, 0).ok());
        assert_eq!(rtw.value(&flag(&p, "(C1)")).unwrap().twist, 1);
        assert_eq!(rtw.value(&flag(&p, "(T⊃C1)")).unwrap().twist, 2);
        assert!(rtw.functoriality(-20, 0).ok());
    }

    #[test]
    fn so3_higher_cyclics_keep_c() {
        let p = so3(4);
        let (_, rinv, rtw) = build_all(&p, 1).unwrap();
        for n in 2..=4 {
            let f = flag(&p, &format!("(C{n})"));
            assert_eq!(rinv.value(&f).unwrap().kind, Some(RingKind::Poly(-2)));
            assert_eq!(rtw.value(&f).unwrap().name(), "Q[c][W2]");
        }
    }

    #[test]
    fn o2_rinv_is_ra() {
        let p = build_poset(Group::O2, &Truncation::rank_one(3)).unwrap();
        let (ra, rinv, _) = build_all(&p, 1).unwrap();
        for (a, b) in ra.values.iter().zip(&rinv.values) {
            assert_eq!(a.kind, b.kind);
        }
    }

    #[test]
    fn rinv_is_fixed_points_of_ra() {
        let p = so3(3);
        let (ra, rinv, _) = build_all(&p, 1).unwrap();
        for (a, b) in ra.values.iter().zip(&rinv.values) {
            let (Some(RingKind::Poly(g)) | Some(RingKind::Laurent(g))) = a.kind else { continue };
            let kind = a.kind.unwrap();
            let s = if kind.is_laurent() { "L0" } else { "F0" };
            let m = NormalForm::parse(kind, Some(-1), s).unwrap().to_windowed(-24, 0);
            let m = if b.action.group.order() > 1 { m } else { m.forget_w().with_identity_w(1) };
            let (fx, _) = m.fixed_points().unwrap();
            for d in -24..=0 {
                assert_eq!(Some(fx.dim(d)), b.dim_at(d), "{} degree {d} g {g}", b.label);
            }
        }
    }

    #[test]
    fn length_zero_values_are_polynomial_rings() {
        let p = build_poset(Group::Torus2, &torus2_sample()).unwrap();
        let ra = build_ra(&p, 2).unwrap();
        for v in ra.values.iter().filter(|v| v.flag.is_point()) {
            assert!(!v.ring.is_localized());
            let r = polynomial_ring(v.ring.rank);
            for d in [0, -2, -4, -6] {
                assert_eq!(v.dim_at(d), r.dim_at(-d as i64));
            }
        }
        assert!(ra.functoriality(0, 0).ok());
        assert!(ra.depends_on_ends());
        assert!(ra.flags.iter().any(|f| f.length() == 2));
    }

    #[test]
    fn su3_rinv_needs_a_good_structure() {
        let p = build_poset(Group::SU3, &crate::lattice::poset::su3_sample()).unwrap();
        let (cs, flags) = ComponentStructure::on_flags(&p, 2, StructureKind::Lie);
        let r = build_rinv(&p, &cs, &flags);
        match r {
            Ok(d) => assert!(d.functoriality(0, 0).ok()),
            Err(e) => assert!(matches!(e, crate::Error::InvalidConfig(_))),
        }
        let bad = ComponentStructure::on_subgroups(&p, StructureKind::Lie);
        assert!(build_rinv(&p, &bad, &flags).is_err());
    }
}
