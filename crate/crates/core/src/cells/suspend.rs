//! Suspension by the adjoint representation: `H_*^G(X ∧ S^{LG}) ≅
//! H_*^N(X ∧ S^{LT})`. On diagram modules this is a shift by
//! `dim G − dim T`; the algebra behind it is multiplication by the Euler
//! class `κ` of `LG/LT`.

use crate::diagram::module::{DiagramModule, Shape};
use crate::error::{invariant, unsupported, Result};
use crate::gralg::normal_form::NormalForm;
use crate::gralg::solomon::{solomon_check, SolomonReport};
use crate::gralg::wmod::{GMap, RingKind, WMod};
use crate::lattice::Group;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuspendReport {
    pub shift: i32,
    pub solomon: Option<SolomonReport>,
    /// Degrees where `κ·: H*(BG)·δκ → (δ H*(BT))^W` was checked.
    pub degrees_checked: usize,
    pub kappa_iso: bool,
}

fn shift_wmod(m: &WMod, s: i32) -> WMod {
    WMod { lo: m.lo + s, hi: m.hi + s, ..m.clone() }
}

fn shift_gmap(f: &GMap, s: i32) -> GMap {
    GMap { lo: f.lo + s, hi: f.hi + s, ..f.clone() }
}

/// Every stalk and structure map moved up by `s` degrees.
pub fn shift_module(m: &DiagramModule, s: i32) -> Result<DiagramModule> {
    let shape = Shape::new(m.shape.group, m.shape.level, m.shape.n, m.shape.lo + s, m.shape.hi + s)?;
    Ok(DiagramModule {
        shape,
        sub: m.sub.iter().map(|x| shift_wmod(x, s)).collect(),
        top: shift_wmod(&m.top, s),
        flag: m.flag.iter().map(|x| shift_wmod(x, s)).collect(),
        down: m.down.iter().map(|f| shift_gmap(f, s)).collect(),
        across: m.across.iter().map(|f| shift_gmap(f, s)).collect(),
    })
}

/// `κ·: ℚ[d]·δκ → (δ·ℚ[c])^W` for rank 1, on codegrees up to `bound`.
fn kappa_comparison(group: Group, bound: i32) -> Result<(usize, bool)> {
    if group == Group::Circle {
        return Ok((0, true));
    }
    let lo = -bound;
    // δ spans the sign representation.
    let tgt = NormalForm::parse(RingKind::Poly(-2), Some(-1), "F0-")?.to_windowed(lo, 0);
    let (fixed, incl) = tgt.fixed_points()?;
    let src = NormalForm::parse(RingKind::Poly(-4), None, "F-2")?.to_windowed(lo, 0);
    let mut checked = 0;
    for d in lo..=0 {
        if src.dim(d) != fixed.dim(d) {
            return Ok((checked, false));
        }
        if src.dim(d) == 0 {
            continue;
        }
        // d^k·δκ ↦ c^{2k+1}·δ.
        let k = ((-2 - d) / 4) as u32;
        let Some(img) = tgt.gpow(0, 2 * k + 1) else {
            return invariant("c-power leaves the window");
        };
        let w = tgt.w_at(d);
        if img.is_zero() || w.mul(&img) != img || incl.at(d).solve(&img).is_none() {
            return Ok((checked, false));
        }
        checked += 1;
    }
    Ok((checked, true))
}

/// `H_*^G(X ∧ S^{LG})` from `X`, with the `κ` comparison report.
pub fn suspend_adjoint(m: &DiagramModule) -> Result<(DiagramModule, SuspendReport)> {
    let group = m.shape.group;
    if !group.has_module_category() {
        return unsupported(format!("adjoint suspension for {group}"));
    }
    let (dg, dt) = group.dims();
    let shift = (dg - dt) as i32;
    let solomon = match group {
        Group::SO3 => Some(solomon_check(group, 12)?),
        _ => None,
    };
    let (degrees_checked, kappa_iso) = kappa_comparison(group, (m.shape.hi - m.shape.lo).max(8))?;
    let out = shift_module(m, shift)?;
    Ok((out, SuspendReport { shift, solomon, degrees_checked, kappa_iso }))
}

/// Inverse of `suspend_adjoint` on its image.
pub fn desuspend_adjoint(m: &DiagramModule) -> Result<DiagramModule> {
    let (dg, dt) = m.shape.group.dims();
    shift_module(m, -((dg - dt) as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::recipes::pi_a;
    use crate::diagram::module::Level;
    use crate::diagram::qce::check_qce;

    #[test]
    fn so3_shift_and_kappa() {
        let shape = Shape::new(Group::SO3, Level::G, 3, -16, 8).unwrap();
        let m = pi_a(&"sphere+idem:C2".parse().unwrap(), shape).unwrap();
        let (s, r) = suspend_adjoint(&m).unwrap();
        assert_eq!(r.shift, 2);
        assert!(r.kappa_iso && r.degrees_checked > 0);
        assert!(r.solomon.unwrap().ok());
        assert!(check_qce(&s).is_qce());
        for (a, b) in m.stalks().iter().zip(s.stalks()) {
            for d in m.shape.lo..=m.shape.hi {
                assert_eq!(a.dim(d), b.dim(d + 2));
            }
        }
        assert_eq!(desuspend_adjoint(&s).unwrap(), m);
    }

    #[test]
    fn circle_is_identity_up_to_window() {
        let shape = Shape::new(Group::Circle, Level::T, 2, -10, 6).unwrap();
        let m = pi_a(&"sphere".parse().unwrap(), shape).unwrap();
        let (s, r) = suspend_adjoint(&m).unwrap();
        assert_eq!((r.shift, r.kappa_iso), (0, true));
        assert_eq!(s, m);
    }
}
