//! Passage between the `G` and `N` levels for `SO(3)`: `θ_*` extends the
//! `C₁` stalk from `ℚ[d]` to `ℚ[c]`, `Ψ` takes `W`-fixed points. For other
//! groups both are the identity.

use super::module::{DiagramMap, DiagramModule, Level};
use crate::error::{invalid, invariant, Result};
use crate::gralg::normality::{is_normal_module, nu};
use crate::gralg::wmod::GMap;
use crate::lattice::Group;
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

fn needs_descent(m: &DiagramModule) -> bool {
    m.shape.group == Group::SO3
}

/// `θ_*`: from the `G` level to the `N` level.
pub fn theta_star(m: &DiagramModule) -> Result<DiagramModule> {
    if m.shape.level != Level::G && needs_descent(m) {
        return invalid("θ_* takes a G-level module");
    }
    if !needs_descent(m) {
        return Ok(m.clone());
    }
    let shape = m.shape.with_level(Level::N)?;
    let mut out = m.clone();
    out.shape = shape;
    let (ext, _) = m.sub[0].extend_to_root()?;
    let fl = &m.flag[0];
    let mats = m
        .sub[0]
        .degrees()
        .map(|x| {
            let a = m.down[0].at(x).clone();
            let b = match (fl.act_at(x + 2), m.sub[0].in_window(x + 2)) {
                (Some(act), true) => act.mul(m.down[0].at(x + 2)),
                _ => Mat::zeros(fl.dim(x), 0),
            };
            a.hstack(&b)
        })
        .collect();
    out.down[0] = GMap { t: 0, lo: m.shape.lo, hi: m.shape.hi, mats };
    out.sub[0] = ext;
    out.validate()?;
    Ok(out)
}

/// `Ψ`: from the `N` level to the `G` level.
pub fn psi(m: &DiagramModule) -> Result<DiagramModule> {
    if m.shape.level != Level::N && needs_descent(m) {
        return invalid("Ψ takes an N-level module");
    }
    if !needs_descent(m) {
        return Ok(m.clone());
    }
    let shape = m.shape.with_level(Level::G)?;
    let mut out = m.clone();
    out.shape = shape;
    let (fx, incl) = m.sub[0].fixed_points()?;
    out.down[0] = incl.then(&m.down[0]);
    out.sub[0] = fx;
    out.validate()?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCheck {
    pub is_map: bool,
    pub iso: bool,
    /// First `C₁` degree where the map is not an isomorphism.
    pub witness: Option<i32>,
}

/// Identity away from `C₁`, with the given `C₁` component.
fn with_c1(x: &DiagramModule, c1: GMap) -> DiagramMap {
    let mut f = DiagramMap::identity(x);
    f.sub[0] = c1;
    f
}

/// The unit `M → Ψ θ_* M` of a `G`-level module.
pub fn unit_map(m: &DiagramModule) -> Result<(DiagramModule, DiagramMap)> {
    let target = psi(&theta_star(m)?)?;
    if !needs_descent(m) {
        return Ok((target, DiagramMap::identity(m)));
    }
    let (ext, unit) = m.sub[0].extend_to_root()?;
    let (_, incl) = ext.fixed_points()?;
    let mut mats = Vec::new();
    for d in m.sub[0].degrees() {
        match incl.at(d).solve(unit.at(d)) {
            Some(x) => mats.push(x),
            None => return invariant(format!("unit misses the fixed points in degree {d}")),
        }
    }
    let c1 = GMap { t: 0, lo: m.shape.lo, hi: m.shape.hi, mats };
    Ok((target, with_c1(m, c1)))
}

fn first_non_iso(f: &GMap) -> Option<i32> {
    (f.lo..=f.hi).find(|&d| {
        let a = f.at(d);
        a.rows() != a.cols() || !a.is_invertible()
    })
}

pub fn unit_check(m: &DiagramModule) -> Result<DescentCheck> {
    let (t, f) = unit_map(m)?;
    let witness = first_non_iso(&f.sub[0]);
    Ok(DescentCheck { is_map: f.is_map(m, &t), iso: witness.is_none() && f.is_iso(), witness })
}

/// The counit `θ_* Ψ N → N` of an `N`-level module; at `C₁` this is
/// `ν: ℚ[c] ⊗_{ℚ[d]} N^W → N`.
pub fn counit_map(n: &DiagramModule) -> Result<(DiagramModule, DiagramMap)> {
    let source = theta_star(&psi(n)?)?;
    if !needs_descent(n) {
        return Ok((source, DiagramMap::identity(n)));
    }
    let (_, v) = nu(&n.sub[0])?;
    Ok((source.clone(), with_c1(&source, v)))
}

/// The counit is a map, and an isomorphism exactly when the `C₁` stalk is
/// normal (checked below the top two degrees of the window).
pub fn counit_check(n: &DiagramModule) -> Result<DescentCheck> {
    let (s, f) = counit_map(n)?;
    let is_map = f.is_map(&s, n);
    if !needs_descent(n) {
        return Ok(DescentCheck { is_map, iso: true, witness: None });
    }
    let r = is_normal_module(&n.sub[0])?;
    Ok(DescentCheck { is_map, iso: r.normal, witness: r.witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::module::Shape;
    use crate::diagram::qce::check_qce;
    use crate::gralg::normal_form::NormalForm;
    use crate::gralg::wmod::RingKind;
    use crate::linalg::q;
    use proptest::prelude::*;

    fn sphere(level: Level) -> DiagramModule {
        let shape = Shape::new(Group::SO3, level, 2, -16, 6).unwrap();
        let mut top = shape.zero_top();
        top.dims[16] = 1;
        top.w.as_mut().unwrap()[16] = Mat::identity(1);
        DiagramModule::from_top(shape, top, &[vec![(0, vec![q(1)])], vec![(0, vec![q(1)])]]).unwrap()
    }

    #[test]
    fn theta_of_the_g_sphere_is_the_n_sphere() {
        let g = sphere(Level::G);
        let n = theta_star(&g).unwrap();
        assert_eq!(n.dims(), sphere(Level::N).dims());
        assert!(check_qce(&n).is_qce());
        let back = psi(&n).unwrap();
        assert_eq!(back.dims(), g.dims());
        let u = unit_check(&g).unwrap();
        assert!(u.is_map && u.iso);
        let c = counit_check(&sphere(Level::N)).unwrap();
        assert!(c.is_map && c.iso);
    }

    fn c1_module(s: &str) -> DiagramModule {
        let shape = Shape::new(Group::SO3, Level::N, 1, -16, 8).unwrap();
        let t = NormalForm::parse(RingKind::Poly(-2), Some(-1), s).unwrap().to_windowed(-16, 8);
        DiagramModule::concentrated(shape, 0, t).unwrap()
    }

    #[test]
    fn counit_detects_non_normal_torsion() {
        // ℚ[c]/c² generated by an invariant class is normal; shifted so the
        // generator is anti-invariant it is not.
        let good = counit_check(&c1_module("T0^2")).unwrap();
        assert!(good.is_map && good.iso);
        let bad = counit_check(&c1_module("T2^2-")).unwrap();
        assert!(bad.is_map && !bad.iso);
        assert_eq!(bad.witness, Some(-2));
    }

    #[test]
    fn other_groups_are_untouched() {
        let shape = Shape::new(Group::O2, Level::G, 2, -8, 4).unwrap();
        let m = DiagramModule::zero(shape);
        assert_eq!(theta_star(&m).unwrap(), m);
        assert!(unit_check(&m).unwrap().iso);
    }

    proptest! {
        /// For normal modules the `−1` eigenspace in degree `x` is `c` times
        /// the `+1` eigenspace in degree `x + 2`, so their dimensions agree.
        /// Invariantly generated torsion is normal only in even length.
        #[test]
        fn eigenspace_law(parts in proptest::collection::vec((0i32..4, 1u32..4, any::<bool>()), 1..4)) {
            let s: Vec<String> = parts
                .iter()
                .map(|&(sh, n, free)| if free { format!("F{}", 2 * sh) } else { format!("T{}^{}", 2 * sh, 2 * n) })
                .collect();
            let m = c1_module(&s.join(", "));
            let c = counit_check(&m).unwrap();
            prop_assert!(c.iso && c.is_map);
            let st = &m.sub[0];
            for x in st.lo..=st.hi - 2 {
                let w = st.w_at(x);
                let id = Mat::identity(st.dim(x));
                let minus = w.add(&id).kernel().cols();
                let w2 = st.w_at(x + 2);
                let plus = w2.sub(&Mat::identity(st.dim(x + 2))).kernel().cols();
                prop_assert_eq!(minus, plus, "degree {}", x);
            }
        }
    }
}
