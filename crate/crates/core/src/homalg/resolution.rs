//! Injective resolutions `0 → Y → I₀ → I₁ → 0` of qce modules.
//!
//! `I₀ = f_T(Y(T)) ⊕ ⊕_n f_{C_n}(D_n)` where `D_n` is the divisible hull of
//! the socle of `ker(Y(C_n) → Y(T⊃C_n))`. The cokernel is concentrated at
//! the `C_n` and divisible, hence injective.

use super::injective::{f_sub, f_top, lift_top, stack, InjKind, Injective};
use crate::diagram::module::{cokernel, kernel, DiagramMap, DiagramModule};
use crate::diagram::qce::check_qce;
use crate::error::{invalid, invariant, Result};
use crate::gralg::wmod::{GMap, HomLayout, RingKind, WMod};
use crate::linalg::{q, Mat, SparseSystem, Q};
use num_traits::{One, Zero};

/// Socle (kernel of the generator) per degree; the bottom `|g|` degrees,
/// where the action leaves the window, contribute nothing.
pub fn socle(m: &WMod) -> Vec<Mat> {
    m.degrees()
        .map(|d| match m.act_at(d) {
            Some(a) => a.kernel(),
            None => Mat::zeros(m.dim(d), 0),
        })
        .collect()
}

/// Divisible module with one copy of `ℚ[g,g⁻¹]/g·ℚ[g]` per `(degree, sign)`,
/// in the given order within each degree.
pub fn divisible(ring: RingKind, lo: i32, hi: i32, equivariant: bool, wsign: i8, socs: &[(i32, i8)]) -> WMod {
    let p = -ring.gen_deg().expect("polynomial ring");
    let occ = |d: i32| -> Vec<usize> { (0..socs.len()).filter(|&j| socs[j].0 <= d && (d - socs[j].0) % p == 0).collect() };
    let dims: Vec<usize> = (lo..=hi).map(|d| occ(d).len()).collect();
    let mut m = WMod::from_dims(ring, lo, hi, dims, equivariant, wsign);
    for d in lo..=hi {
        let src = occ(d);
        if let Some(a) = m.act[(d - lo) as usize].as_mut() {
            let tgt = occ(d - p);
            for (j, sj) in src.iter().enumerate() {
                if let Some(i) = tgt.iter().position(|x| x == sj) {
                    a[(i, j)] = Q::one();
                }
            }
        }
        if let Some(w) = m.w.as_mut() {
            let mut diag = Mat::zeros(src.len(), src.len());
            for (j, &sj) in src.iter().enumerate() {
                let (s, e) = socs[sj];
                let k = (d - s) / p;
                let sign = if wsign < 0 && k % 2 == 1 { -e } else { e };
                diag[(j, j)] = q(sign as i64);
            }
            w[(d - lo) as usize] = diag;
        }
    }
    m
}

/// The divisible hull of the socle of `m`, with a map `m → hull` that is
/// an isomorphism on socles. The socle is split into `w`-eigenspaces.
pub fn socle_hull(m: &WMod) -> Result<(WMod, GMap)> {
    let soc = socle(m);
    let mut socs = Vec::new();
    let mut vecs: Vec<(i32, Vec<Q>)> = Vec::new();
    for d in m.degrees() {
        let s = &soc[(d - m.lo) as usize];
        if s.cols() == 0 {
            continue;
        }
        if m.is_equivariant() {
            let w = s.solve(&m.w_at(d).mul(s)).expect("socle is w-stable");
            for sign in [1i8, -1] {
                let e = w.sub(&Mat::scalar(w.rows(), &q(sign as i64))).kernel();
                let v = s.mul(&e);
                for j in 0..v.cols() {
                    socs.push((d, sign));
                    vecs.push((d, v.col(j)));
                }
            }
        } else {
            for j in 0..s.cols() {
                socs.push((d, 1));
                vecs.push((d, s.col(j)));
            }
        }
    }
    let hull = divisible(m.ring, m.lo, m.hi, m.is_equivariant(), m.wsign, &socs);
    // Solve for a module map sending the j-th socle vector to the j-th
    // socle generator of the hull.
    let lay = HomLayout::new(m, &hull, 0);
    let mut sys = SparseSystem::new(lay.nvars);
    m.add_hom_constraints(&hull, 0, &|d| lay.offset(m, d), &mut sys);
    for (j, (d, v)) in vecs.iter().enumerate() {
        let Some(o) = lay.offset(m, *d) else { continue };
        let c = m.dim(*d);
        let pos = (0..j).filter(|&i| socs[i].0 == *d).count()
            + (0..socs.len()).filter(|&i| socs[i].0 < *d && (*d - socs[i].0) % (-m.ring.gen_deg().unwrap()) == 0).count();
        for r in 0..hull.dim(*d) {
            let e: Vec<(usize, Q)> =
                (0..c).filter(|&l| !v[l].is_zero()).map(|l| (o + r * c + l, v[l].clone())).collect();
            let rhs = if r == pos { Q::one() } else { Q::zero() };
            sys.add(e, rhs);
        }
    }
    let Some(x) = sys.particular() else {
        return invariant("no extension of the socle embedding into the hull");
    };
    Ok((hull.clone(), lay.unflatten(m, &hull, 0, &x)))
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub y: DiagramModule,
    pub i0: Vec<Injective>,
    pub i0_total: DiagramModule,
    /// `I₁`, concentrated at the `C_n`.
    pub i1: DiagramModule,
    pub e: DiagramMap,
    pub p: DiagramMap,
}

/// `Y → I₀` with `I₀` as above; `Y` must be qce.
pub fn embed_in_injectives(y: &DiagramModule) -> Result<(Vec<Injective>, DiagramMap)> {
    let r = check_qce(y);
    if !r.is_qce() {
        return invalid(format!("module is not qce: {:?}", r.failures.first()));
    }
    let shape = y.shape;
    let it = f_top(shape, &y.top)?;
    let mut parts = vec![lift_top(y, &it, &GMap::identity(&y.top))?];
    let mut injs = vec![it];
    for k in 0..shape.n {
        let (tors, _) = y.sub[k].kernel_of(&y.down[k])?;
        if tors.is_zero() {
            continue;
        }
        let (hull, psi) = socle_hull(&y.sub[k])?;
        let inj = f_sub(shape, k, &hull)?;
        let mut f = DiagramMap::zero(y, &inj.module, 0);
        f.sub[k] = psi;
        parts.push(f);
        injs.push(inj);
    }
    Ok((injs, stack(&parts)))
}

pub fn injective_resolution(y: &DiagramModule) -> Result<Resolution> {
    let (i0, e) = embed_in_injectives(y)?;
    let mods: Vec<&DiagramModule> = i0.iter().map(|i| &i.module).collect();
    let i0_total = DiagramModule::direct_sum(&mods)?;
    let (i1, p) = cokernel(&i0_total, &e)?;
    if !i1.top.is_zero() || i1.flag.iter().any(|f| !f.is_zero()) {
        return invariant("cokernel of the injective envelope is not concentrated at the C_n");
    }
    for (k, s) in i1.sub.iter().enumerate() {
        if let Some(d) = non_divisible_degree(s) {
            return invariant(format!("cokernel at {} is not divisible in degree {d}", y.shape.sub_label(k)));
        }
    }
    Ok(Resolution { y: y.clone(), i0, i0_total, i1, e, p })
}

/// First degree where the generator fails to be onto.
pub fn non_divisible_degree(m: &WMod) -> Option<i32> {
    m.degrees().find(|&d| m.act_at(d).is_some_and(|a| a.rank() != a.rows()))
}

impl Resolution {
    /// `e` injective, `p` surjective, `p ∘ e = 0` and `ker p = im e`, all by
    /// dimension counts on every stalk.
    pub fn verify(&self) -> bool {
        if !self.e.is_map(&self.y, &self.i0_total) || !self.p.is_map(&self.i0_total, &self.i1) {
            return false;
        }
        if !self.e.is_mono() || !self.e.then(&self.p).is_zero() {
            return false;
        }
        let (k, _) = match kernel(&self.i0_total, &self.p) {
            Ok(x) => x,
            Err(_) => return false,
        };
        let stalks = self.i1.stalks();
        let pc = self.p.components();
        let onto = stalks.iter().zip(&pc).all(|(s, f)| s.degrees().all(|d| f.at(d).rank() == s.dim(d)));
        onto && k.total_dim() == self.y.total_dim()
    }

    pub fn length(&self) -> usize {
        usize::from(!self.i1.is_zero())
    }

    pub fn injectives_at(&self, s: usize) -> Vec<(InjKind, WMod)> {
        match s {
            0 => self.i0.iter().map(|i| (i.kind, i.value.clone())).collect(),
            1 => self
                .i1
                .sub
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .map(|(k, m)| (InjKind::Sub(k), m.clone()))
                .collect(),
            _ => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::module::{Level, Shape};
    use crate::gralg::normal_form::{classify, NormalForm};
    use crate::lattice::Group;
    use proptest::prelude::*;

    const LO: i32 = -24;
    const HI: i32 = 12;

    fn sphere(group: Group, level: Level, n: usize) -> DiagramModule {
        let shape = Shape::new(group, level, n, LO, HI).unwrap();
        let mut top = shape.zero_top();
        top.dims[(-LO) as usize] = 1;
        if let Some(w) = top.w.as_mut() {
            w[(-LO) as usize] = Mat::identity(1);
        }
        DiagramModule::from_top(shape, top, &vec![vec![(0, vec![q(1)])]; n]).unwrap()
    }

    #[test]
    fn sphere_resolution() {
        for (g, l) in [(Group::Circle, Level::T), (Group::SO3, Level::G), (Group::SO3, Level::N)] {
            let y = sphere(g, l, 3);
            let r = injective_resolution(&y).unwrap();
            assert!(r.verify(), "{g} {l}");
            assert_eq!(r.i0.len(), 1);
            assert_eq!(r.length(), 1);
            for k in 0..3 {
                let nf = classify(&r.i1.sub[k]);
                let p = if y.shape.d_stalk(k) { 4 } else { 2 };
                // ℚ[c,c⁻¹]/ℚ[c]: socle one step above the generator.
                assert_eq!(nf.summands.len(), 1, "{nf}");
                assert_eq!(nf.summands[0].shift, p);
            }
        }
    }

    #[test]
    fn hull_of_torsion() {
        let m = NormalForm::parse(RingKind::Poly(-2), Some(-1), "T4^3-, T2^1, F0").unwrap().to_windowed(LO, HI);
        let (h, f) = socle_hull(&m).unwrap();
        assert!(f.is_module_map(&m, &h));
        // Socles in degree 0 (two sign flips from the generator) and 2.
        let nf = classify(&h);
        assert_eq!(nf.to_string(), NormalForm::parse(RingKind::Poly(-2), Some(-1), "D0-, D2").unwrap().to_string());
        let e = divisible(RingKind::Poly(-2), LO, HI, true, -1, &[(0, 1)]);
        e.validate().unwrap();
        assert!(non_divisible_degree(&e).is_none());
    }

    fn torsion_module(shape: Shape, k: usize, s: &str) -> DiagramModule {
        let ring = shape.sub_ring(k);
        let ws = shape.sub_equivariant(k).then_some(-1);
        let t = NormalForm::parse(ring, ws, s).unwrap().to_windowed(shape.lo, shape.hi);
        DiagramModule::concentrated(shape, k, t).unwrap()
    }

    proptest! {
        #[test]
        fn resolutions_are_exact(
            parts in proptest::collection::vec((0i32..3, 1u32..4, any::<bool>()), 0..3),
            lvl in 0usize..3, k in 0usize..2,
        ) {
            let (g, l) = [(Group::Circle, Level::T), (Group::SO3, Level::G), (Group::SO3, Level::N)][lvl];
            let shape = Shape::new(g, l, 2, LO, HI).unwrap();
            let neg = shape.sub_equivariant(k);
            let spec: Vec<String> = parts
                .iter()
                .map(|&(sh, n, s)| format!("T{}^{n}{}", 2 * sh, if s && neg { "-" } else { "" }))
                .collect();
            let t = torsion_module(shape, k, &spec.join(", "));
            let y = DiagramModule::direct_sum(&[&sphere(g, l, 2), &t]).unwrap();
            let r = injective_resolution(&y).unwrap();
            prop_assert!(r.verify());
            prop_assert!(r.length() <= 1);
        }
    }
}
