//! Windowed graded modules over a rank-1 ring: per-degree dimensions over a
//! finite window `[lo, hi]`, the generator action as a matrix per degree,
//! and an optional involution `w` semilinear for `w(g) = wsign·g`.
//!
//! Degrees are internal degrees (minus codegree). The generator `g` has
//! degree `gen_deg < 0`, so `g: M_d → M_{d+gen_deg}`.

use crate::error::{invalid, invariant, Result};
use crate::linalg::{q, Mat, SparseSystem, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    /// `ℚ`, no generator.
    Field,
    /// `ℚ[g]`, `g` in the given (negative) degree.
    Poly(i32),
    /// `ℚ[g, g⁻¹]`.
    Laurent(i32),
}

impl RingKind {
    pub fn gen_deg(self) -> Option<i32> {
        match self {
            RingKind::Field => None,
            RingKind::Poly(g) | RingKind::Laurent(g) => Some(g),
        }
    }

    pub fn is_laurent(self) -> bool {
        matches!(self, RingKind::Laurent(_))
    }

    pub fn localized(self) -> RingKind {
        match self {
            RingKind::Poly(g) => RingKind::Laurent(g),
            k => k,
        }
    }

    /// Ring generated by `g²`.
    pub fn squared(self) -> RingKind {
        match self {
            RingKind::Field => RingKind::Field,
            RingKind::Poly(g) => RingKind::Poly(2 * g),
            RingKind::Laurent(g) => RingKind::Laurent(2 * g),
        }
    }

    pub fn name(self) -> String {
        let v = |g: i32| if g == -2 { "c" } else if g == -4 { "d" } else { "g" };
        match self {
            RingKind::Field => "Q".into(),
            RingKind::Poly(g) => format!("Q[{}]", v(g)),
            RingKind::Laurent(g) => format!("Q[{0},{0}^-1]", v(g)),
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WMod {
    pub ring: RingKind,
    pub lo: i32,
    pub hi: i32,
    pub dims: Vec<usize>,
    /// `act[d-lo]: M_d → M_{d+g}`; `None` when the target is outside the
    /// window or the ring is a field.
    pub act: Vec<Option<Mat>>,
    /// Involution per degree, if equivariant.
    pub w: Option<Vec<Mat>>,
    /// Sign of `w` on the generator.
    pub wsign: i8,
}

/// A degree-`t` family of linear maps `M_d → N_{d+t}` over a common window.
/// Components whose target lies outside the window have zero rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GMap {
    pub t: i32,
    pub lo: i32,
    pub hi: i32,
    pub mats: Vec<Mat>,
}

impl WMod {
    /// The zero module.
    pub fn zero(ring: RingKind, lo: i32, hi: i32, equivariant: bool, wsign: i8) -> WMod {
        let n = (hi - lo + 1).max(0) as usize;
        let dims = vec![0; n];
        WMod::from_dims(ring, lo, hi, dims, equivariant, wsign)
    }

    /// Module with given dimensions and zero action; `w` is the identity.
    pub fn from_dims(ring: RingKind, lo: i32, hi: i32, dims: Vec<usize>, equivariant: bool, wsign: i8) -> WMod {
        let g = ring.gen_deg();
        let act = (lo..=hi)
            .map(|d| {
                let t = g.map(|g| d + g)?;
                (t >= lo).then(|| Mat::zeros(dims[(t - lo) as usize], dims[(d - lo) as usize]))
            })
            .collect();
        let w = equivariant.then(|| dims.iter().map(|&n| Mat::identity(n)).collect());
        WMod { ring, lo, hi, dims, act, w, wsign }
    }

    pub fn in_window(&self, d: i32) -> bool {
        d >= self.lo && d <= self.hi
    }

    fn ix(&self, d: i32) -> usize {
        (d - self.lo) as usize
    }

    pub fn dim(&self, d: i32) -> usize {
        if self.in_window(d) {
            self.dims[self.ix(d)]
        } else {
            0
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn gen_deg(&self) -> Option<i32> {
        self.ring.gen_deg()
    }

    pub fn is_equivariant(&self) -> bool {
        self.w.is_some()
    }

    pub fn act_at(&self, d: i32) -> Option<&Mat> {
        if !self.in_window(d) {
            return None;
        }
        self.act[self.ix(d)].as_ref()
    }

    /// `w` on `M_d`; the identity for non-equivariant modules.
    pub fn w_at(&self, d: i32) -> Mat {
        match &self.w {
            Some(w) if self.in_window(d) => w[self.ix(d)].clone(),
            _ => Mat::identity(self.dim(d)),
        }
    }

    /// `g^k: M_d → M_{d+k·g}`, when every intermediate lies in the window.
    pub fn gpow(&self, d: i32, k: u32) -> Option<Mat> {
        let mut m = Mat::identity(self.dim(d));
        let mut cur = d;
        for _ in 0..k {
            let a = self.act_at(cur)?;
            m = a.mul(&m);
            cur += self.gen_deg()?;
        }
        Some(m)
    }

    /// Shape, involution and semilinearity checks; Laurent modules need
    /// invertible actions.
    pub fn validate(&self) -> Result<()> {
        if self.dims.len() != (self.hi - self.lo + 1).max(0) as usize || self.act.len() != self.dims.len() {
            return invalid("window length mismatch");
        }
        for d in self.degrees() {
            let n = self.dim(d);
            if let Some(a) = self.act_at(d) {
                let t = d + self.gen_deg().unwrap();
                if a.cols() != n || a.rows() != self.dim(t) {
                    return invariant(format!("action at degree {d} has wrong shape"));
                }
                if self.ring.is_laurent() && a.rows() != a.cols() {
                    return invariant(format!("Laurent action at degree {d} is not square"));
                }
                if self.ring.is_laurent() && !a.is_invertible() {
                    return invariant(format!("Laurent action at degree {d} is not invertible"));
                }
                if self.is_equivariant() {
                    let lhs = a.mul(&self.w_at(d));
                    let rhs = self.w_at(t).mul(a).scale(&q(self.wsign as i64));
                    if lhs != rhs {
                        return invariant(format!("w is not semilinear at degree {d}"));
                    }
                }
            }
            if let Some(w) = &self.w {
                let m = &w[self.ix(d)];
                if m.rows() != n || m.cols() != n || m.mul(m) != Mat::identity(n) {
                    return invariant(format!("w is not an involution at degree {d}"));
                }
            }
        }
        Ok(())
    }

    /// Direct sum; all summands share ring, window and equivariance.
    pub fn direct_sum(parts: &[&WMod]) -> WMod {
        let first = parts[0];
        let dims: Vec<usize> = (0..first.dims.len()).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let act = (0..first.dims.len())
            .map(|i| {
                first.act[i].as_ref()?;
                let blocks: Vec<&Mat> = parts.iter().map(|p| p.act[i].as_ref().unwrap()).collect();
                Some(Mat::block_diag(&blocks))
            })
            .collect();
        let w = first.w.as_ref().map(|_| {
            (0..first.dims.len())
                .map(|i| {
                    let blocks: Vec<Mat> = parts.iter().map(|p| p.w_at(p.lo + i as i32)).collect();
                    Mat::block_diag(&blocks.iter().collect::<Vec<_>>())
                })
                .collect()
        });
        WMod { ring: first.ring, lo: first.lo, hi: first.hi, dims, act, w, wsign: first.wsign }
    }

    /// Forget the equivariance.
    pub fn forget_w(&self) -> WMod {
        WMod { w: None, ..self.clone() }
    }

    /// Attach the trivial involution.
    pub fn with_identity_w(&self, wsign: i8) -> WMod {
        let w = self.dims.iter().map(|&n| Mat::identity(n)).collect();
        WMod { w: Some(w), wsign, ..self.clone() }
    }

    /// Restrict scalars along `g² ↦ g²`: the same vector spaces as a module
    /// over `ℚ[g²]`.
    pub fn restrict_to_square(&self) -> WMod {
        let ring = self.ring.squared();
        let act = self
            .degrees()
            .map(|d| if ring == RingKind::Field { None } else { self.gpow(d, 2) })
            .collect();
        let wsign = 1;
        WMod { ring, act, wsign, ..self.clone() }
    }

    /// Submodule spanned by the columns of `basis[d]`, with its inclusion.
    /// The span must be closed under `g` and `w`.
    pub fn submodule(&self, basis: &[Mat]) -> Result<(WMod, GMap)> {
        let dims: Vec<usize> = basis.iter().map(|b| b.cols()).collect();
        let mut act = Vec::with_capacity(dims.len());
        for d in self.degrees() {
            let i = self.ix(d);
            act.push(match self.act_at(d) {
                None => None,
                Some(a) => {
                    let t = d + self.gen_deg().unwrap();
                    let tgt = &basis[self.ix(t)];
                    match tgt.solve(&a.mul(&basis[i])) {
                        Some(x) => Some(x),
                        None => return invariant(format!("span is not closed under the action at degree {d}")),
                    }
                }
            });
        }
        let w = match &self.w {
            None => None,
            Some(ws) => {
                let mut out = Vec::with_capacity(dims.len());
                for (i, b) in basis.iter().enumerate() {
                    match b.solve(&ws[i].mul(b)) {
                        Some(x) => out.push(x),
                        None => return invariant("span is not closed under w"),
                    }
                }
                Some(out)
            }
        };
        let sub = WMod { ring: self.ring, lo: self.lo, hi: self.hi, dims, act, w, wsign: self.wsign };
        let incl = GMap { t: 0, lo: self.lo, hi: self.hi, mats: basis.to_vec() };
        Ok((sub, incl))
    }

    /// Quotient by the submodule spanned by `basis[d]`, with its projection.
    pub fn quotient(&self, basis: &[Mat]) -> (WMod, GMap) {
        let cok: Vec<(Mat, Mat)> = basis.iter().map(|b| b.cokernel()).collect();
        let dims: Vec<usize> = cok.iter().map(|(p, _)| p.rows()).collect();
        let act = self
            .degrees()
            .map(|d| {
                let a = self.act_at(d)?;
                let t = d + self.gen_deg().unwrap();
                Some(cok[self.ix(t)].0.mul(a).mul(&cok[self.ix(d)].1))
            })
            .collect();
        let w = self.w.as_ref().map(|ws| (0..dims.len()).map(|i| cok[i].0.mul(&ws[i]).mul(&cok[i].1)).collect());
        let quo = WMod { ring: self.ring, lo: self.lo, hi: self.hi, dims, act, w, wsign: self.wsign };
        let proj = GMap { t: 0, lo: self.lo, hi: self.hi, mats: cok.into_iter().map(|(p, _)| p).collect() };
        (quo, proj)
    }

    /// Column bases of the submodule generated by the given elements
    /// `(degree, vector)` under `g` and `w`.
    pub fn span_of(&self, gens: &[(i32, Vec<Q>)]) -> Vec<Mat> {
        let mut basis: Vec<Mat> = self.dims.iter().map(|&n| Mat::zeros(n, 0)).collect();
        // g lowers degree, so sweep from the top.
        for d in self.degrees().rev() {
            let i = self.ix(d);
            let mut cols: Vec<Vec<Q>> = gens.iter().filter(|(e, _)| *e == d).map(|(_, v)| v.clone()).collect();
            if let Some(g) = self.gen_deg() {
                let src = d - g;
                if let Some(a) = self.act_at(src) {
                    let img = a.mul(&basis[self.ix(src)]);
                    cols.extend((0..img.cols()).map(|j| img.col(j)));
                }
            }
            let mut m = Mat::from_cols(self.dims[i], &cols);
            if self.is_equivariant() {
                m = m.hstack(&self.w_at(d).mul(&m));
            }
            basis[i] = m.image_basis();
        }
        if let Some(g) = self.gen_deg() {
            if self.ring.is_laurent() {
                // Close up under g⁻¹ by sweeping upward.
                for d in self.degrees() {
                    let t = d + g;
                    if let Some(a) = self.act_at(d) {
                        if t >= self.lo {
                            if let Some(pre) = preimage(a, &basis[self.ix(t)]) {
                                let m = basis[self.ix(d)].hstack(&pre);
                                basis[self.ix(d)] = m.image_basis();
                            }
                        }
                    }
                }
            }
        }
        basis
    }

    /// Kernel of a degree-0 map out of `self`.
    pub fn kernel_of(&self, f: &GMap) -> Result<(WMod, GMap)> {
        let basis: Vec<Mat> = f.mats.iter().map(|m| m.kernel()).collect();
        self.submodule(&basis)
    }

    /// Bottom-stalk localization: `(g⁻¹M)_d = M_b` for the lowest window
    /// degree `b ≡ d` modulo `|g|`, with `g` acting as the identity. Returns
    /// the module and the canonical map `M → g⁻¹M`.
    pub fn localize(&self) -> (WMod, GMap) {
        let Some(g) = self.gen_deg() else {
            let id = GMap::identity(self);
            return (self.clone(), id);
        };
        if self.ring.is_laurent() {
            return (self.clone(), GMap::identity(self));
        }
        let p = -g;
        let bottom = |d: i32| self.lo + (d - self.lo).rem_euclid(p);
        let dims: Vec<usize> = self.degrees().map(|d| self.dim(bottom(d))).collect();
        let act = self
            .degrees()
            .map(|d| (d + g >= self.lo).then(|| Mat::identity(self.dim(bottom(d)))))
            .collect();
        let w = self.w.as_ref().map(|_| {
            self.degrees()
                .map(|d| {
                    let b = bottom(d);
                    let k = (d - b) / p;
                    let s = if self.wsign < 0 && k % 2 == 1 { -1 } else { 1 };
                    self.w_at(b).scale(&q(s))
                })
                .collect()
        });
        let loc = WMod { ring: self.ring.localized(), lo: self.lo, hi: self.hi, dims, act, w, wsign: self.wsign };
        let mats = self
            .degrees()
            .map(|d| {
                let b = bottom(d);
                self.gpow(d, ((d - b) / p) as u32).expect("path to bottom stays in window")
            })
            .collect();
        (loc, GMap { t: 0, lo: self.lo, hi: self.hi, mats })
    }

    /// Fixed points of `w`, a module over the invariant subring (`ℚ[g²]` when
    /// `w` negates `g`). Returns the module and its inclusion.
    pub fn fixed_points(&self) -> Result<(WMod, GMap)> {
        if !self.is_equivariant() {
            return invalid("fixed points need equivariance data");
        }
        let basis: Vec<Mat> =
            self.degrees().map(|d| self.w_at(d).sub(&Mat::identity(self.dim(d))).kernel()).collect();
        let base = if self.wsign < 0 { self.restrict_to_square() } else { self.clone() };
        let base = WMod { w: None, ..base };
        let (m, incl) = base.submodule(&basis)?;
        Ok((m, incl))
    }

    /// Extension of scalars from `ℚ[g²]` to `ℚ[g]` (`g` of degree `h/2` where
    /// `h` is the degree of the current generator): `M ⊕ gM` with
    /// `g(m, m') = (g² m', m)` and `w(m, m') = (w m, −w m')`. Returns the
    /// module and the unit `m ↦ (m, 0)`.
    pub fn extend_to_root(&self) -> Result<(WMod, GMap)> {
        let Some(h) = self.gen_deg() else {
            return invalid("extension of scalars needs a polynomial base ring");
        };
        if h % 2 != 0 {
            return invalid("generator degree is odd");
        }
        let g = h / 2;
        let ring = match self.ring {
            RingKind::Poly(_) => RingKind::Poly(g),
            RingKind::Laurent(_) => RingKind::Laurent(g),
            RingKind::Field => unreachable!(),
        };
        // Degree x holds M_x ⊕ M_{x−g}.
        let top = |x: i32| self.dim(x - g);
        let dims: Vec<usize> = self.degrees().map(|x| self.dim(x) + top(x)).collect();
        let act = self
            .degrees()
            .map(|x| {
                let y = x + g;
                if y < self.lo {
                    return None;
                }
                // (m, m') at x ↦ (g² m', m) at y; g² m' lands in M_{x−g+h} = M_y.
                let (a, b) = (self.dim(x), top(x));
                let (c, e) = (self.dim(y), top(y));
                let mut out = Mat::zeros(c + e, a + b);
                if b > 0 && c > 0 {
                    let gg = self.act_at(x - g).expect("window");
                    for i in 0..c {
                        for j in 0..b {
                            out[(i, a + j)] = gg[(i, j)].clone();
                        }
                    }
                }
                // m ∈ M_x is the top part at y since y − g = x.
                for i in 0..e.min(a) {
                    out[(c + i, i)] = Q::one();
                }
                Some(out)
            })
            .collect();
        let w = Some(
            self.degrees()
                .map(|x| {
                    let w0 = self.w_at(x);
                    let w1 = self.w_at(x - g).neg();
                    Mat::block_diag(&[&w0, &w1])
                })
                .collect(),
        );
        let out = WMod { ring, lo: self.lo, hi: self.hi, dims, act, w, wsign: -1 };
        let unit = GMap {
            t: 0,
            lo: self.lo,
            hi: self.hi,
            mats: self.degrees().map(|x| Mat::identity(self.dim(x)).vstack(&Mat::zeros(top(x), self.dim(x)))).collect(),
        };
        Ok((out, unit))
    }

    /// `target ⊗_{ring} self` for the supported ring maps: identity,
    /// `ℚ[g] → ℚ[g,g⁻¹]`, `ℚ[g²] → ℚ[g]` and `ℚ[g²] → ℚ[g,g⁻¹]`.
    pub fn tensor_over(&self, target: RingKind) -> Result<(WMod, GMap)> {
        if target == self.ring {
            return Ok((self.clone(), GMap::identity(self)));
        }
        let (Some(h), Some(g)) = (self.gen_deg(), target.gen_deg()) else {
            return crate::error::unsupported(format!("no ring map {} → {}", self.ring, target));
        };
        if g == h && target.is_laurent() {
            return Ok(self.localize());
        }
        if 2 * g == h && (target.is_laurent() || !self.ring.is_laurent()) {
            let (ext, unit) = self.extend_to_root()?;
            if target.is_laurent() && !ext.ring.is_laurent() {
                let (loc, f) = ext.localize();
                return Ok((loc, unit.then(&f)));
            }
            return Ok((ext, unit));
        }
        crate::error::unsupported(format!("no ring map {} → {}", self.ring, target))
    }

    /// Graded `ℚ`-vector space `V` (field module) tensored up to
    /// `ℚ[g,g⁻¹] ⊗ V`, with the map `v ↦ 1 ⊗ v`.
    pub fn laurent_on(v: &WMod, g: i32, wsign: i8) -> (WMod, GMap) {
        let p = -g;
        let dims: Vec<usize> = v
            .degrees()
            .map(|d| {
                let mut n = 0;
                let mut e = d.rem_euclid(p) + (v.lo.div_euclid(p) - 1) * p;
                while e <= v.hi {
                    n += v.dim(e);
                    e += p;
                }
                n
            })
            .collect();
        // Basis at degree d: blocks (e, basis of V_e) for e ≡ d, ascending.
        let blocks = |d: i32| -> Vec<(i32, usize, usize)> {
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
        };
        let lo = v.lo;
        let hi = v.hi;
        let act = (lo..=hi)
            .map(|d| (d + g >= lo).then(|| Mat::identity(dims[(d - lo) as usize])))
            .collect();
        let w = v.w.as_ref().map(|_| {
            (lo..=hi)
                .map(|d| {
                    let parts: Vec<Mat> = blocks(d)
                        .iter()
                        .map(|&(e, _, _)| {
                            let k = (e - d) / p;
                            let s = if wsign < 0 && k.rem_euclid(2) == 1 { -1 } else { 1 };
                            v.w_at(e).scale(&q(s))
                        })
                        .collect();
                    Mat::block_diag(&parts.iter().collect::<Vec<_>>())
                })
                .collect()
        });
        let out = WMod { ring: RingKind::Laurent(g), lo, hi, dims: dims.clone(), act, w, wsign };
        let mats = (lo..=hi)
            .map(|d| {
                let n = v.dim(d);
                let mut m = Mat::zeros(dims[(d - lo) as usize], n);
                if let Some(&(_, off, _)) = blocks(d).iter().find(|b| b.0 == d) {
                    for i in 0..n {
                        m[(off + i, i)] = Q::one();
                    }
                }
                m
            })
            .collect();
        (out, GMap { t: 0, lo, hi, mats })
    }

    /// `Hom^t(self, n)`: maps `M_d → N_{d+t}` commuting with `g` and `w`,
    /// computed on the window.
    pub fn hom(&self, n: &WMod, t: i32) -> Vec<GMap> {
        let (sys, layout) = self.hom_system(n, t);
        sys.null_space()
            .into_iter()
            .map(|v| {
                let mut dense = vec![Q::zero(); layout.nvars];
                for (i, x) in v {
                    dense[i] = x;
                }
                layout.unflatten(self, n, t, &dense)
            })
            .collect()
    }

    pub fn hom_dim(&self, n: &WMod, t: i32) -> usize {
        let (sys, layout) = self.hom_system(n, t);
        layout.nvars - sys.rank()
    }

    fn hom_system(&self, n: &WMod, t: i32) -> (SparseSystem, HomLayout) {
        let layout = HomLayout::new(self, n, t);
        let mut sys = SparseSystem::new(layout.nvars);
        self.add_hom_constraints(n, t, &|d| layout.offset(self, d), &mut sys);
        (sys, layout)
    }

    /// Append the constraints for a degree-`t` module map `self → n` to
    /// `sys`; `off(d)` locates the row-major block `φ_d` among the variables.
    pub fn add_hom_constraints(&self, n: &WMod, t: i32, off: &dyn Fn(i32) -> Option<usize>, sys: &mut SparseSystem) {
        let g = self.gen_deg();
        debug_assert_eq!(g, n.gen_deg(), "hom needs a common ring");
        for d in self.degrees() {
            let Some(o) = off(d) else { continue };
            let (r, c) = (n.dim(d + t), self.dim(d));
            if c == 0 {
                continue;
            }
            if let Some(g) = g {
                let dg = d + g;
                if let (Some(ma), Some(na), Some(o2)) = (self.act_at(d), n.act_at(d + t), off(dg)) {
                    // N.act φ_d − φ_{d+g} M.act = 0, entry (i, j).
                    let r2 = n.dim(dg + t);
                    let c2 = self.dim(dg);
                    for i in 0..r2 {
                        for j in 0..c {
                            let mut e = Vec::new();
                            for k in 0..r {
                                if !na[(i, k)].is_zero() {
                                    e.push((o + k * c + j, na[(i, k)].clone()));
                                }
                            }
                            for l in 0..c2 {
                                if !ma[(l, j)].is_zero() {
                                    e.push((o2 + i * c2 + l, -ma[(l, j)].clone()));
                                }
                            }
                            sys.add(e, Q::zero());
                        }
                    }
                }
            }
            if self.is_equivariant() && n.is_equivariant() {
                let mw = self.w_at(d);
                let nw = n.w_at(d + t);
                for i in 0..r {
                    for j in 0..c {
                        let mut e = Vec::new();
                        for k in 0..r {
                            if !nw[(i, k)].is_zero() {
                                e.push((o + k * c + j, nw[(i, k)].clone()));
                            }
                        }
                        for l in 0..c {
                            if !mw[(l, j)].is_zero() {
                                e.push((o + i * c + l, -mw[(l, j)].clone()));
                            }
                        }
                        sys.add(e, Q::zero());
                    }
                }
            }
        }
    }

    /// The same data regarded over another ring with the same generator
    /// degree (e.g. a Laurent module as a polynomial module).
    pub fn as_ring(&self, ring: RingKind) -> WMod {
        WMod { ring, ..self.clone() }
    }

    /// The `g`-power transport `M_from → M_to`: `g^k` when going down,
    /// its inverse when going up. Needs invertible steps to go up.
    pub fn transport(&self, from: i32, to: i32) -> Option<Mat> {
        let p = -self.gen_deg()?;
        if (from - to) % p != 0 {
            return None;
        }
        if from >= to {
            self.gpow(from, ((from - to) / p) as u32)
        } else {
            self.gpow(to, ((to - from) / p) as u32)?.inverse()
        }
    }
}

/// Right inverse images: columns `x` with `a x` in the column span of `b`,
/// spanning the full preimage.
fn preimage(a: &Mat, b: &Mat) -> Option<Mat> {
    let sol = a.solve(b)?;
    Some(sol.hstack(&a.kernel()))
}

/// Variable numbering for a Hom system: blocks `φ_d` in degree order, each
/// row-major.
#[derive(Clone, Debug)]
pub struct HomLayout {
    pub nvars: usize,
    offsets: Vec<Option<usize>>,
    lo: i32,
}

impl HomLayout {
    pub fn new(m: &WMod, n: &WMod, t: i32) -> Self {
        let mut off = 0;
        let offsets = m
            .degrees()
            .map(|d| {
                if n.in_window(d + t) {
                    let o = off;
                    off += n.dim(d + t) * m.dim(d);
                    Some(o)
                } else {
                    None
                }
            })
            .collect();
        HomLayout { nvars: off, offsets, lo: m.lo }
    }

    pub fn offset(&self, m: &WMod, d: i32) -> Option<usize> {
        if !m.in_window(d) {
            return None;
        }
        self.offsets[(d - self.lo) as usize]
    }

    pub fn unflatten(&self, m: &WMod, n: &WMod, t: i32, v: &[Q]) -> GMap {
        let mats = m
            .degrees()
            .map(|d| {
                let (r, c) = (n.dim(d + t), m.dim(d));
                match self.offset(m, d) {
                    Some(o) => {
                        let mut x = Mat::zeros(r, c);
                        for i in 0..r {
                            for j in 0..c {
                                x[(i, j)] = v[o + i * c + j].clone();
                            }
                        }
                        x
                    }
                    None => Mat::zeros(0, c),
                }
            })
            .collect();
        GMap { t, lo: m.lo, hi: m.hi, mats }
    }

    pub fn flatten(&self, m: &WMod, f: &GMap) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.nvars];
        for d in m.degrees() {
            if let Some(o) = self.offset(m, d) {
                let x = &f.mats[(d - m.lo) as usize];
                for i in 0..x.rows() {
                    for j in 0..x.cols() {
                        out[o + i * x.cols() + j] = x[(i, j)].clone();
                    }
                }
            }
        }
        out
    }
}

impl GMap {
    pub fn zero(m: &WMod, n: &WMod, t: i32) -> GMap {
        let mats = m.degrees().map(|d| Mat::zeros(if n.in_window(d + t) { n.dim(d + t) } else { 0 }, m.dim(d))).collect();
        GMap { t, lo: m.lo, hi: m.hi, mats }
    }

    pub fn identity(m: &WMod) -> GMap {
        GMap { t: 0, lo: m.lo, hi: m.hi, mats: m.dims.iter().map(|&n| Mat::identity(n)).collect() }
    }

    /// The component `M_d → N_{d+t}`.
    pub fn at(&self, d: i32) -> &Mat {
        &self.mats[(d - self.lo) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GMap) -> GMap {
        let mats = (self.lo..=self.hi)
            .map(|d| {
                let a = self.at(d);
                let e = d + self.t;
                if e < self.lo || e > self.hi {
                    return Mat::zeros(0, a.cols());
                }
                let b = other.at(e);
                if b.cols() != a.rows() {
                    return Mat::zeros(b.rows(), a.cols());
                }
                b.mul(a)
            })
            .collect();
        GMap { t: self.t + other.t, lo: self.lo, hi: self.hi, mats }
    }

    pub fn add(&self, o: &GMap) -> GMap {
        GMap { mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &GMap) -> GMap {
        GMap { mats: self.mats.iter().zip(&o.mats).map(|(a, b)| a.sub(b)).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &Q) -> GMap {
        GMap { mats: self.mats.iter().map(|a| a.scale(s)).collect(), ..self.clone() }
    }

    /// Block-diagonal sum of maps.
    pub fn direct_sum(parts: &[&GMap]) -> GMap {
        let f = parts[0];
        let mats = (0..f.mats.len())
            .map(|i| Mat::block_diag(&parts.iter().map(|p| &p.mats[i]).collect::<Vec<_>>()))
            .collect();
        GMap { t: f.t, lo: f.lo, hi: f.hi, mats }
    }

    /// Whether this is a module map `m → n` on the window.
    pub fn is_module_map(&self, m: &WMod, n: &WMod) -> bool {
        for d in m.degrees() {
            let e = d + self.t;
            if !n.in_window(e) {
                continue;
            }
            let f = self.at(d);
            if let (Some(g), Some(ma), Some(na)) = (m.gen_deg(), m.act_at(d), n.act_at(e)) {
                if n.in_window(e + g) && na.mul(f) != self.at(d + g).mul(ma) {
                    return false;
                }
            }
            if m.is_equivariant() && n.is_equivariant() && n.w_at(e).mul(f) != f.mul(&m.w_at(d)) {
                return false;
            }
        }
        true
    }

    /// Whether every component is an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.mats.iter().all(|m| m.rows() == m.cols() && m.is_invertible())
    }

    pub fn rank_at(&self, d: i32) -> usize {
        self.at(d).rank()
    }
}

impl fmt::Display for WMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .degrees()
            .filter(|&d| self.dim(d) > 0)
            .map(|d| format!("{d}:{}", self.dim(d)))
            .collect();
        write!(f, "{} [{}..{}] {{{}}}", self.ring, self.lo, self.hi, parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::normal_form::{classify, NormalForm, Summand};

    fn qc(lo: i32, hi: i32) -> WMod {
        NormalForm::equivariant(RingKind::Poly(-2), -1, vec![Summand::free(0)]).to_windowed(lo, hi)
    }

    #[test]
    fn free_module_validates_and_localizes() {
        let m = qc(-20, 6);
        m.validate().unwrap();
        let (l, f) = m.localize();
        l.validate().unwrap();
        assert!(f.is_module_map(&m, &l));
        for d in -20..=6 {
            assert_eq!(l.dim(d), usize::from(d % 2 == 0));
        }
    }

    #[test]
    fn fixed_points_of_sign_action() {
        let m = qc(-40, 0);
        let (f, incl) = m.fixed_points().unwrap();
        assert_eq!(f.ring, RingKind::Poly(-4));
        f.validate().unwrap();
        for d in -40..=0 {
            assert_eq!(f.dim(d), usize::from(d % 4 == 0), "{d}");
        }
        assert_eq!(incl.mats.len(), 41);
        let (lf, _) = m.localize().0.fixed_points().unwrap();
        for d in -40..=0 {
            assert_eq!(lf.dim(d), usize::from(d % 4 == 0));
        }
    }

    #[test]
    fn localize_then_invariants_agrees_with_invariants_then_localize() {
        let m = qc(-40, 0);
        let a = m.localize().0.fixed_points().unwrap().0;
        let b = m.fixed_points().unwrap().0.localize().0;
        assert_eq!(a.dims, b.dims);
        assert_eq!(a.ring, b.ring);
    }

    #[test]
    fn extension_of_scalars_examples() {
        let d = NormalForm::new(RingKind::Poly(-4), vec![Summand::free(0)]).to_windowed(-20, 4);
        let (c, unit) = d.extend_to_root().unwrap();
        c.validate().unwrap();
        assert!(unit.is_module_map(&d.with_identity_w(1), &c.restrict_to_square()));
        for x in -20..=4 {
            assert_eq!(c.dim(x), usize::from(x <= 0 && x % 2 == 0), "{x}");
        }
        let tors = NormalForm::new(RingKind::Poly(-4), vec![Summand::torsion(0, 1)]).to_windowed(-20, 4);
        let (t, _) = tors.extend_to_root().unwrap();
        let dims: Vec<(i32, usize)> = (-20..=4).filter(|&x| t.dim(x) > 0).map(|x| (x, t.dim(x))).collect();
        assert_eq!(dims, vec![(-2, 1), (0, 1)]);
        let lau = NormalForm::new(RingKind::Laurent(-4), vec![Summand::laurent(0)]).to_windowed(-20, 4);
        let (l, _) = lau.extend_to_root().unwrap();
        l.validate().unwrap();
        assert_eq!(l.ring, RingKind::Laurent(-2));
    }

    #[test]
    fn tensor_over_examples() {
        let d = NormalForm::new(RingKind::Poly(-4), vec![Summand::free(0)]).to_windowed(-24, 4);
        let (u, _) = d.tensor_over(RingKind::Poly(-4)).unwrap();
        assert_eq!(u, d);
        let (c, _) = d.tensor_over(RingKind::Poly(-2)).unwrap();
        assert_eq!(classify(&c), NormalForm::equivariant(RingKind::Poly(-2), -1, vec![Summand::free(0)]));
        let dl = NormalForm::new(RingKind::Laurent(-4), vec![Summand::laurent(0)]).to_windowed(-24, 4);
        let (cl, _) = dl.tensor_over(RingKind::Laurent(-2)).unwrap();
        assert_eq!(cl.ring, RingKind::Laurent(-2));
        assert!((-24..=4).all(|x| cl.dim(x) == usize::from(x % 2 == 0)));
        let (cl2, f) = d.tensor_over(RingKind::Laurent(-2)).unwrap();
        assert_eq!(cl2.dims, cl.dims);
        assert_eq!(f.at(0).rank(), 1);
        assert!(c.tensor_over(RingKind::Poly(-4)).is_err());
    }

    #[test]
    fn hom_of_free_modules() {
        let m = qc(-30, 10);
        for t in [-6, -4, 0, 2] {
            let want = usize::from(t <= 0 && t % 4 == 0);
            assert_eq!(m.hom_dim(&m, t), want, "t = {t}");
            for f in m.hom(&m, t) {
                assert!(f.is_module_map(&m, &m));
            }
        }
    }

    #[test]
    fn span_and_quotient() {
        let m = qc(-20, 0);
        // The ideal (c).
        let basis = m.span_of(&[(-2, vec![q(1)])]);
        let (sub, incl) = m.submodule(&basis).unwrap();
        assert_eq!(sub.dim(0), 0);
        assert_eq!(sub.dim(-2), 1);
        assert!(incl.is_module_map(&sub, &m));
        let (quo, proj) = m.quotient(&basis);
        assert_eq!(quo.total_dim(), 1);
        assert!(proj.is_module_map(&m, &quo));
    }

    #[test]
    fn laurent_on_vector_space() {
        let mut v = WMod::from_dims(RingKind::Field, -6, 6, vec![0; 13], true, -1);
        v.dims[6] = 1;
        v.w.as_mut().unwrap()[6] = Mat::identity(1);
        let (l, unit) = WMod::laurent_on(&v, -2, -1);
        l.validate().unwrap();
        for d in -6..=6 {
            assert_eq!(l.dim(d), usize::from(d % 2 == 0));
        }
        assert_eq!(l.w_at(-2), Mat::identity(1).scale(&q(-1)));
        assert_eq!(unit.at(0), &Mat::identity(1));
    }
}
