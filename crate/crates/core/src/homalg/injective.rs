//! The injectives `f_T(V)` and `f_{C_n}(P)`, and closed-form Hom into them.
//!
//! A map `X → f_T(V)` is determined by its `T` component, an equivariant
//! linear map `X(T) → V`; a map `X → f_{C_n}(P)` is a module map
//! `X(C_n) → P`.

use crate::diagram::module::{flag_as_stalk, DiagramMap, DiagramModule, Shape};
use crate::diagram::qce::comparison;
use crate::error::{invalid, invariant, Result};
use crate::gralg::wmod::{GMap, WMod};
use crate::linalg::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InjKind {
    Top,
    /// `f_{C_{k+1}}`.
    Sub(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Injective {
    pub kind: InjKind,
    /// `V` or `P`.
    pub value: WMod,
    pub module: DiagramModule,
}

/// `f_T(V)`: `V` at `T`, `ℚ[c,c⁻¹] ⊗ V` on every flag and at every `C_n`.
pub fn f_top(shape: Shape, v: &WMod) -> Result<Injective> {
    let v = if shape.equivariant() && !v.is_equivariant() {
        v.with_identity_w(-1)
    } else if !shape.equivariant() {
        v.forget_w()
    } else {
        v.clone()
    };
    if v.lo != shape.lo || v.hi != shape.hi {
        return invalid("value window differs from the shape window");
    }
    let (fl, unit) = WMod::laurent_on(&v, -2, -1);
    let mut sub = Vec::new();
    let mut down = Vec::new();
    for k in 0..shape.n {
        let (s, incl) = flag_as_stalk(&shape, k, &fl)?;
        sub.push(s);
        down.push(incl);
    }
    let module = DiagramModule {
        shape,
        sub,
        top: v.clone(),
        flag: vec![fl; shape.n],
        down,
        across: vec![unit; shape.n],
    };
    module.validate()?;
    Ok(Injective { kind: InjKind::Top, value: v, module })
}

/// `f_{C_{k+1}}(P)`: `P` at `C_{k+1}`, zero elsewhere.
pub fn f_sub(shape: Shape, k: usize, p: &WMod) -> Result<Injective> {
    let module = DiagramModule::concentrated(shape, k, p.clone())?;
    Ok(Injective { kind: InjKind::Sub(k), value: p.clone(), module })
}

/// Blocks `(e, offset, dim)` of `ℚ[g,g⁻¹] ⊗ V` in degree `d`, as laid out
/// by `WMod::laurent_on`.
fn laurent_blocks(v: &WMod, p: i32, d: i32) -> Vec<(i32, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    let mut e = d.rem_euclid(p) + (v.lo.div_euclid(p) - 1) * p;
    while e <= v.hi {
        let n = v.dim(e);
        if n > 0 {
            out.push((e, off, n));
            off += n;
        }
        e += p;
    }
    out
}

/// `ℚ[c,c⁻¹] ⊗ φ` for a degree-`t` linear map `φ: V → V'`.
fn laurent_map(v: &WMod, v2: &WMod, phi: &GMap) -> GMap {
    let p = 2;
    let t = phi.t;
    let mats = v
        .degrees()
        .map(|d| {
            let src = laurent_blocks(v, p, d);
            let rows: usize = if v2.in_window(d + t) { laurent_blocks(v2, p, d + t).iter().map(|b| b.2).sum() } else { 0 };
            let cols: usize = src.iter().map(|b| b.2).sum();
            let mut m = Mat::zeros(rows, cols);
            if rows == 0 {
                return m;
            }
            let tgt = laurent_blocks(v2, p, d + t);
            for &(e, so, sn) in &src {
                let Some(&(_, to, tn)) = tgt.iter().find(|b| b.0 == e + t) else { continue };
                let f = phi.at(e);
                for i in 0..tn {
                    for j in 0..sn {
                        m[(to + i, so + j)] = f[(i, j)].clone();
                    }
                }
            }
            m
        })
        .collect();
    GMap { t, lo: v.lo, hi: v.hi, mats }
}

/// The map `X → f_T(V)` with `T` component `phi`. Needs `X` extended on
/// the window.
pub fn lift_top(x: &DiagramModule, inj: &Injective, phi: &GMap) -> Result<DiagramMap> {
    let t = phi.t;
    let tgt = &inj.module;
    let lt = laurent_map(&x.top, &inj.value, phi);
    let mut f = DiagramMap::zero(x, tgt, t);
    f.top = phi.clone();
    for k in 0..x.shape.n {
        let (_, comp, _) = comparison(&x.top, &x.across[k], &x.flag[k])?;
        let mut fl = Vec::new();
        let mut sb = Vec::new();
        for d in x.shape.lo..=x.shape.hi {
            let c = comp.at(d);
            let Some(ci) = c.inverse() else {
                return invariant(format!("source is not extended at {} in degree {d}", x.shape.flag_label(k)));
            };
            let fd = lt.at(d).mul(&ci);
            let s = fd.mul(x.down[k].at(d));
            let sd = if tgt.sub[k].in_window(d + t) {
                match tgt.down[k].at(d + t).solve(&s) {
                    Some(y) => y,
                    None => return invariant("lift leaves the C stalk of f_T"),
                }
            } else {
                Mat::zeros(0, x.sub[k].dim(d))
            };
            fl.push(fd);
            sb.push(sd);
        }
        f.flag[k] = GMap { t, lo: x.shape.lo, hi: x.shape.hi, mats: fl };
        f.sub[k] = GMap { t, lo: x.shape.lo, hi: x.shape.hi, mats: sb };
    }
    Ok(f)
}

/// Basis of `Hom^t(X, I)` from the closed form.
pub fn hom_closed(x: &DiagramModule, inj: &Injective, t: i32) -> Result<Vec<DiagramMap>> {
    match inj.kind {
        InjKind::Top => x.top.hom(&inj.value, t).iter().map(|phi| lift_top(x, inj, phi)).collect(),
        InjKind::Sub(k) => Ok(x.sub[k]
            .hom(&inj.value, t)
            .into_iter()
            .map(|psi| {
                let mut f = DiagramMap::zero(x, &inj.module, t);
                f.sub[k] = psi;
                f
            })
            .collect()),
    }
}

pub fn hom_closed_dim(x: &DiagramModule, inj: &Injective, t: i32) -> usize {
    match inj.kind {
        InjKind::Top => x.top.hom_dim(&inj.value, t),
        InjKind::Sub(k) => x.sub[k].hom_dim(&inj.value, t),
    }
}

/// Maps into the summands, assembled into a map into their direct sum.
pub fn stack(parts: &[DiagramMap]) -> DiagramMap {
    let f = &parts[0];
    let vst = |gs: Vec<&GMap>| -> GMap {
        let g0 = gs[0];
        let mats = (0..g0.mats.len())
            .map(|i| {
                let mut m = gs[0].mats[i].clone();
                for g in &gs[1..] {
                    m = m.vstack(&g.mats[i]);
                }
                m
            })
            .collect();
        GMap { t: g0.t, lo: g0.lo, hi: g0.hi, mats }
    };
    let n = f.sub.len();
    DiagramMap {
        t: f.t,
        sub: (0..n).map(|k| vst(parts.iter().map(|p| &p.sub[k]).collect())).collect(),
        top: vst(parts.iter().map(|p| &p.top).collect()),
        flag: (0..n).map(|k| vst(parts.iter().map(|p| &p.flag[k]).collect())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::module::{hom, hom_dim, Level};
    use crate::gralg::normal_form::NormalForm;
    use crate::lattice::Group;
    use crate::linalg::q;
    use proptest::prelude::*;

    const LO: i32 = -20;
    const HI: i32 = 10;

    fn shape(group: Group, level: Level) -> Shape {
        Shape::new(group, level, 2, LO, HI).unwrap()
    }

    fn point(shape: Shape, d: i32, n: usize) -> WMod {
        let mut v = shape.zero_top();
        v.dims[(d - LO) as usize] = n;
        if let Some(w) = v.w.as_mut() {
            w[(d - LO) as usize] = Mat::identity(n);
        }
        v
    }

    fn sphere(shape: Shape, d: i32) -> DiagramModule {
        let lat = vec![vec![(d, vec![q(1)])]; shape.n];
        DiagramModule::from_top(shape, point(shape, d, 1), &lat).unwrap()
    }

    #[test]
    fn f_top_is_qce() {
        for (g, l) in [(Group::Circle, Level::T), (Group::SO3, Level::G), (Group::SO3, Level::N)] {
            let s = shape(g, l);
            let i = f_top(s, &point(s, 0, 1)).unwrap();
            assert!(crate::diagram::qce::check_qce(&i.module).is_qce());
        }
    }

    #[test]
    fn closed_form_matches_naive_hom() {
        for (g, l) in [(Group::Circle, Level::T), (Group::SO3, Level::G), (Group::SO3, Level::N), (Group::O2, Level::N)] {
            let s = shape(g, l);
            let x = sphere(s, 0);
            let it = f_top(s, &point(s, 2, 1)).unwrap();
            let ring = s.sub_ring(1);
            let ws = s.sub_equivariant(1).then_some(-1);
            let p = NormalForm::parse(ring, ws, "D2, D4-").unwrap().to_windowed(LO, HI);
            let ic = f_sub(s, 1, &p).unwrap();
            for t in -6..=8 {
                for inj in [&it, &ic] {
                    let want = hom_dim(&x, &inj.module, t);
                    assert_eq!(hom_closed_dim(&x, inj, t), want, "{g} {l} t={t}");
                    for f in hom_closed(&x, inj, t).unwrap() {
                        assert!(f.is_map(&x, &inj.module));
                    }
                }
            }
        }
    }

    #[test]
    fn stacked_maps_are_maps_into_the_sum() {
        let s = shape(Group::SO3, Level::G);
        let x = sphere(s, 0);
        let a = f_top(s, &point(s, 0, 1)).unwrap();
        let b = f_top(s, &point(s, 0, 2)).unwrap();
        let fa = hom_closed(&x, &a, 0).unwrap();
        let fb = hom_closed(&x, &b, 0).unwrap();
        assert_eq!((fa.len(), fb.len()), (1, 2));
        let sum = DiagramModule::direct_sum(&[&a.module, &b.module]).unwrap();
        let f = stack(&[fa[0].clone(), fb[1].clone()]);
        assert!(f.is_map(&x, &sum));
        assert_eq!(hom(&x, &sum, 0).len(), 3);
    }

    proptest! {
        #[test]
        fn closed_form_hom_random(
            d in -3i32..=2, t in -6i32..=6, n in 1usize..3,
            parts in proptest::collection::vec((0i32..4, any::<bool>(), any::<bool>()), 1..3),
            lvl in 0usize..3,
        ) {
            let (g, l) = [(Group::Circle, Level::T), (Group::SO3, Level::G), (Group::SO3, Level::N)][lvl];
            let s = shape(g, l);
            let x = sphere(s, 2 * d);
            let it = f_top(s, &point(s, 2 * d + 2, n)).unwrap();
            prop_assert_eq!(hom_closed_dim(&x, &it, t), hom_dim(&x, &it.module, t));
            let k = 0;
            let ring = s.sub_ring(k);
            let ws = s.sub_equivariant(k).then_some(-1);
            let spec: Vec<String> = parts
                .iter()
                .map(|&(sh, tors, neg)| {
                    let sg = if neg && ws.is_some() { "-" } else { "" };
                    if tors { format!("T{}^2{sg}", 2 * sh) } else { format!("D{}{sg}", 2 * sh) }
                })
                .collect();
            let p = NormalForm::parse(ring, ws, &spec.join(", ")).unwrap().to_windowed(LO, HI);
            let ic = f_sub(s, k, &p).unwrap();
            prop_assert_eq!(hom_closed_dim(&x, &ic, t), hom_dim(&x, &ic.module, t));
        }
    }
}
