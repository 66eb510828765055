//! Change of groups along equal-rank inclusions `H ≤ G`, the restriction
//! and coinduction squares for the cell catalog, and supports.

use super::recipes::pi_a;
use super::spec::{CellKind, CellSpec, FromLevel};
use crate::diagram::descent::{psi, theta_star};
use crate::diagram::module::{DiagramModule, Level, Shape};
use crate::error::{invalid, unsupported, Result};
use crate::gralg::wmod::{GMap, WMod};
use crate::lattice::Group;
use crate::linalg::Mat;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// `H ≤ G`, written `H<=G`; `T` is the maximal torus (the circle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inclusion {
    pub sub: Group,
    pub sup: Group,
}

impl FromStr for Inclusion {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Inclusion> {
        let Some((a, b)) = s.split_once("<=") else {
            return invalid(format!("inclusion '{s}' should read H<=G"));
        };
        let g = |x: &str| -> Result<Group> {
            match x.trim() {
                "T" => Ok(Group::Circle),
                y => y.parse(),
            }
        };
        Ok(Inclusion { sub: g(a)?, sup: g(b)? })
    }
}

impl fmt::Display for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<={}", self.sub, self.sup)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    /// Restriction, `G`-modules to `H`-modules.
    ThetaStar,
    /// Left adjoint of restriction, `H`-modules to `G`-modules.
    ThetaUpperStar,
    /// Right adjoint of restriction.
    ThetaShriek,
}

impl FromStr for Which {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Which> {
        match s {
            "theta_star" | "restrict" => Ok(Which::ThetaStar),
            "theta_upper_star" | "induce" => Ok(Which::ThetaUpperStar),
            "theta_shriek" | "coinduce" => Ok(Which::ThetaShriek),
            _ => invalid(format!("unknown change-of-groups functor '{s}'")),
        }
    }
}

fn relabel(m: &DiagramModule, group: Group, level: Level) -> Result<DiagramModule> {
    let shape = Shape::new(group, level, m.shape.n, m.shape.lo, m.shape.hi)?;
    let mut out = m.clone();
    out.shape = shape;
    out.validate()?;
    Ok(out)
}

fn induce_wmod(m: &WMod) -> WMod {
    let dims = m.dims.iter().map(|n| 2 * n).collect();
    let act = m.act.iter().map(|a| a.as_ref().map(|a| Mat::block_diag(&[a, &a.neg()]))).collect();
    let w = m
        .dims
        .iter()
        .map(|&n| {
            let z = Mat::zeros(n, n);
            let i = Mat::identity(n);
            z.hstack(&i).vstack(&i.hstack(&z))
        })
        .collect();
    WMod { dims, act, w: Some(w), wsign: -1, ..m.clone() }
}

fn induce_gmap(f: &GMap) -> GMap {
    GMap { mats: f.mats.iter().map(|a| Mat::block_diag(&[a, a])).collect(), ..f.clone() }
}

/// `ℚ[W] ⊗ X` from the torus to the normalizer level: `w` swaps the copies
/// and `c` acts by `(c, −c)`.
pub fn induce_from_torus(m: &DiagramModule, group: Group) -> Result<DiagramModule> {
    if m.shape.level != Level::T {
        return invalid("induction takes a torus-level module");
    }
    let shape = Shape::new(group, Level::N, m.shape.n, m.shape.lo, m.shape.hi)?;
    let out = DiagramModule {
        shape,
        sub: m.sub.iter().map(induce_wmod).collect(),
        top: induce_wmod(&m.top),
        flag: m.flag.iter().map(induce_wmod).collect(),
        down: m.down.iter().map(induce_gmap).collect(),
        across: m.across.iter().map(induce_gmap).collect(),
    };
    out.validate()?;
    Ok(out)
}

fn check_pair(inc: Inclusion) -> Result<()> {
    if inc.sub.rank() != inc.sup.rank() {
        return unsupported(format!("change of groups {inc} between groups of different rank"));
    }
    let ok = inc.sub == inc.sup
        || matches!((inc.sub, inc.sup), (Group::Circle, Group::O2) | (Group::Circle, Group::SO3) | (Group::O2, Group::SO3));
    if !ok {
        return unsupported(format!("change of groups {inc}"));
    }
    Ok(())
}

/// `θ_*`, `θ^*` or `θ^!` along `inc`. In equal rank `θ^! = θ^*`.
pub fn change_groups(m: &DiagramModule, inc: Inclusion, which: Which) -> Result<DiagramModule> {
    check_pair(inc)?;
    if inc.sub == inc.sup {
        return Ok(m.clone());
    }
    match which {
        Which::ThetaStar => {
            if m.shape.group != inc.sup {
                return invalid(format!("θ_* along {inc} takes a {} module", inc.sup));
            }
            let n = if m.shape.level == Level::G { theta_star(m)? } else { m.clone() };
            match inc.sub {
                Group::Circle => relabel(&n.forget_to_torus()?, Group::Circle, Level::T),
                _ => relabel(&n, inc.sub, Level::N),
            }
        }
        Which::ThetaUpperStar | Which::ThetaShriek => {
            if m.shape.group != inc.sub {
                return invalid(format!("θ^* along {inc} takes a {} module", inc.sub));
            }
            let n = match inc.sub {
                Group::Circle => induce_from_torus(m, inc.sup)?,
                _ => relabel(m, inc.sup, Level::N)?,
            };
            if inc.sup == Group::SO3 {
                psi(&n)
            } else {
                Ok(n)
            }
        }
    }
}

/// A stalk and degree where two modules differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub stalk: String,
    pub degree: i32,
    /// `(dim, dim of the +1 eigenspace of w)` on each side.
    pub left: (usize, usize),
    pub right: (usize, usize),
}

fn invariant_dim(m: &WMod, d: i32) -> usize {
    let n = m.dim(d);
    if m.w.is_none() || n == 0 {
        return n;
    }
    n - m.w_at(d).sub(&Mat::identity(n)).rank()
}

/// Degreewise comparison of stalk dimensions and `w`-invariant dimensions.
pub fn compare_stalks(a: &DiagramModule, b: &DiagramModule) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for ((label, x), y) in a.stalk_labels().into_iter().zip(a.stalks()).zip(b.stalks()) {
        for d in a.shape.lo..=a.shape.hi {
            let l = (x.dim(d), invariant_dim(x, d));
            let r = (y.dim(d), invariant_dim(y, d));
            if l != r {
                out.push(Mismatch { stalk: label.clone(), degree: d, left: l, right: r });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub cell: String,
    pub square: &'static str,
    pub mismatches: Vec<Mismatch>,
}

impl SquareReport {
    pub fn commutes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `θ_* π^𝒜_G(cell) = π^𝒜_N(cell)`.
pub fn restriction_square(cell: &CellSpec, shape: Shape) -> Result<SquareReport> {
    let g = pi_a(cell, shape.with_level(Level::G)?)?;
    let left = if g.shape.level == Level::G { theta_star(&g)? } else { g };
    let right = pi_a(cell, shape.with_level(Level::N)?)?;
    Ok(SquareReport { cell: cell.to_string(), square: "restriction", mismatches: compare_stalks(&left, &right) })
}

/// `π^𝒜_G(F_N(G₊, Y)) = Ψ π^𝒜_N(Y)`.
pub fn coinduction_square(y: &CellSpec, shape: Shape) -> Result<SquareReport> {
    let gshape = shape.with_level(Level::G)?;
    let coind = CellSpec::single(CellKind::Coinduced(FromLevel::N, Box::new(y.clone())));
    let left = pi_a(&coind, gshape)?;
    let right = psi(&pi_a(y, shape.with_level(Level::N)?)?)?;
    Ok(SquareReport { cell: coind.to_string(), square: "coinduction", mismatches: compare_stalks(&left, &right) })
}

/// Labels of the nonzero subgroup stalks (`C_n` and `T`).
pub fn support(m: &DiagramModule) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = (0..m.shape.n).filter(|&k| !m.sub[k].is_zero()).map(|k| m.shape.sub_label(k)).collect();
    if !m.top.is_zero() {
        out.insert("T".into());
    }
    out
}

/// `e_S · m` for a set `S` of `C_n` labels, on modules with zero `T` stalk:
/// the stalks outside `S` are cut away.
pub fn cut_to_support(m: &DiagramModule, s: &BTreeSet<String>) -> Result<DiagramModule> {
    if !m.top.is_zero() {
        return unsupported("idempotent products of modules with a nonzero T stalk");
    }
    let shape = m.shape;
    let parts = (0..shape.n)
        .filter(|&k| s.contains(&shape.sub_label(k)))
        .map(|k| DiagramModule::concentrated(shape, k, m.sub[k].clone()))
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Ok(DiagramModule::zero(shape));
    }
    DiagramModule::direct_sum(&parts.iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::recipes::catalog;
    use crate::diagram::module::hom_dim;
    use crate::diagram::qce::check_qce;

    const LO: i32 = -24;
    const HI: i32 = 12;

    #[test]
    fn squares_on_the_catalog() {
        for g in [Group::SO3, Group::O2, Group::Circle] {
            let shape = Shape::new(g, Level::N, 4, LO, HI).unwrap();
            for cell in catalog(g, 4) {
                if matches!(cell.summands()[0].0, CellKind::Coinduced(FromLevel::N, _)) {
                    continue;
                }
                if !crate::cells::recipes::is_coinduced(&cell) {
                    let r = restriction_square(&cell, shape).unwrap();
                    assert!(r.commutes(), "{g} {cell}: {:?}", r.mismatches);
                }
                if g == Group::SO3 {
                    if let Ok(r) = coinduction_square(&cell, shape) {
                        assert!(r.commutes(), "{cell}: {:?}", r.mismatches);
                    }
                }
            }
        }
    }

    #[test]
    fn so3_to_o2_sphere() {
        let s = Shape::new(Group::SO3, Level::G, 3, LO, HI).unwrap();
        let m = pi_a(&"sphere".parse().unwrap(), s).unwrap();
        let r = change_groups(&m, "O2<=SO3".parse().unwrap(), Which::ThetaStar).unwrap();
        let o = pi_a(&"sphere".parse().unwrap(), Shape::new(Group::O2, Level::N, 3, LO, HI).unwrap()).unwrap();
        assert!(compare_stalks(&r, &o).is_empty());
        let t = change_groups(&m, "T<=SO3".parse().unwrap(), Which::ThetaStar).unwrap();
        let c = pi_a(&"sphere".parse().unwrap(), Shape::new(Group::Circle, Level::T, 3, LO, HI).unwrap()).unwrap();
        assert!(compare_stalks(&t, &c).is_empty());
    }

    #[test]
    fn identity_and_unsupported() {
        let s = Shape::new(Group::O2, Level::N, 2, LO, HI).unwrap();
        let m = pi_a(&"sphere".parse().unwrap(), s).unwrap();
        assert_eq!(change_groups(&m, "O2<=O2".parse().unwrap(), Which::ThetaStar).unwrap(), m);
        assert!(change_groups(&m, "O2<=SU3".parse().unwrap(), Which::ThetaStar).is_err());
        assert!(change_groups(&m, "T2<=SU3".parse().unwrap(), Which::ThetaStar).is_err());
    }

    /// `Hom_T(θ_* M, X) = Hom_{O(2)}(M, θ^! X)`.
    #[test]
    fn restriction_adjunction() {
        let inc: Inclusion = "T<=O2".parse().unwrap();
        let so = Shape::new(Group::O2, Level::N, 2, LO, HI).unwrap();
        let st = Shape::new(Group::Circle, Level::T, 2, LO, HI).unwrap();
        for (mc, xc) in [("sphere", "sphere"), ("sphere", "idem:C2"), ("idem:C1", "S2:idem:C1"), ("cell:C2", "idem:T")] {
            let m = pi_a(&mc.parse().unwrap(), so).unwrap();
            let x = pi_a(&xc.parse().unwrap(), st).unwrap();
            let rm = change_groups(&m, inc, Which::ThetaStar).unwrap();
            let cx = change_groups(&x, inc, Which::ThetaShriek).unwrap();
            assert!(check_qce(&cx).is_qce());
            for t in -6..=6 {
                assert_eq!(hom_dim(&rm, &x, t), hom_dim(&m, &cx, t), "{mc} {xc} t={t}");
            }
        }
    }

    /// Mackey: two double cosets for `T ≤ O(2)`. For `SO(3)` the `C₁` stalk
    /// is `X(C₁)` over `ℚ[d]`, extended back to `ℚ[c]`.
    #[test]
    fn induce_then_restrict() {
        let st = Shape::new(Group::Circle, Level::T, 2, LO, HI).unwrap();
        let x = pi_a(&"sphere+idem:C2".parse().unwrap(), st).unwrap();
        let xx = DiagramModule::direct_sum(&[&x, &x]).unwrap();
        let inc: Inclusion = "T<=O2".parse().unwrap();
        let back = change_groups(&change_groups(&x, inc, Which::ThetaUpperStar).unwrap(), inc, Which::ThetaStar).unwrap();
        assert!(compare_stalks(&back, &xx).is_empty());
        let inc: Inclusion = "T<=SO3".parse().unwrap();
        let up = change_groups(&x, inc, Which::ThetaUpperStar).unwrap();
        assert_eq!(up.sub[0].dims, x.sub[0].dims);
        let back = change_groups(&up, inc, Which::ThetaStar).unwrap();
        let m = compare_stalks(&back, &xx);
        assert!(m.iter().all(|e| e.stalk == "C1" && e.degree == 0), "{m:?}");
    }

    #[test]
    fn idempotent_supports_intersect() {
        let shape = Shape::new(Group::SO3, Level::G, 5, LO, HI).unwrap();
        let fam = |bits: u32| -> Vec<String> { (1..=5).filter(|i| bits >> (i - 1) & 1 == 1).map(|i| format!("C{i}")).collect() };
        let module = |f: &[String]| -> DiagramModule {
            if f.is_empty() {
                return DiagramModule::zero(shape);
            }
            let spec: CellSpec = f.iter().map(|k| format!("idem:{k}")).collect::<Vec<_>>().join("+").parse().unwrap();
            pi_a(&spec, shape).unwrap()
        };
        for a in 0..32u32 {
            for b in [0, 5, 10, 31, a ^ 7] {
                let (fa, fb) = (fam(a), fam(b));
                let both: Vec<String> = fa.iter().filter(|k| fb.contains(k)).cloned().collect();
                let prod = cut_to_support(&module(&fa), &support(&module(&fb))).unwrap();
                let want: BTreeSet<String> = both.iter().cloned().collect();
                assert_eq!(support(&prod), want);
                assert!(compare_stalks(&prod, &module(&both)).is_empty());
            }
        }
    }
}
