//! Rank-1 diagram modules `M(C_n) → M(T⊃C_n) ← M(T)` for `n = 1..N`, at
//! the torus (`T`), normalizer (`N`) or group (`G`) level, and maps between
//! them.
//!
//! Stalk rings: `ℚ[c]` at `C_n`, `ℚ` at `T` and `ℚ[c,c⁻¹]` on flags, except
//! that the `G`-level `C₁` stalk of `SO(3)` is a `ℚ[d]`-module whose
//! structure map lands in the `W`-invariants. At levels `N` and `G` every
//! other stalk carries an involution `w` with `w(c) = −c`.

use crate::error::{invalid, invariant, unsupported, Result};
use crate::gralg::wmod::{GMap, RingKind, WMod};
use crate::lattice::Group;
use crate::linalg::{Mat, SparseSystem, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    T,
    N,
    G,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::T => "T",
            Level::N => "N",
            Level::G => "G",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Level {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Level> {
        match s {
            "T" | "t" => Ok(Level::T),
            "N" | "n" => Ok(Level::N),
            "G" | "g" => Ok(Level::G),
            _ => invalid(format!("unknown level {s}")),
        }
    }
}

/// Group, level, truncation and degree window shared by a diagram module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub group: Group,
    pub level: Level,
    pub n: usize,
    pub lo: i32,
    pub hi: i32,
}

pub const FLAG_RING: RingKind = RingKind::Laurent(-2);

impl Shape {
    /// Rank-1 groups only. The circle has a single level; `O(2)` is its own
    /// normalizer so its `G` level coincides with `N`.
    pub fn new(group: Group, level: Level, n: usize, lo: i32, hi: i32) -> Result<Shape> {
        if group.rank() != 1 {
            return unsupported(format!("diagram modules for {group} (rank {})", group.rank()));
        }
        if n == 0 {
            return invalid("truncation N must be at least 1");
        }
        if lo > hi {
            return invalid(format!("empty window {lo}:{hi}"));
        }
        let level = match (group, level) {
            (Group::Circle, _) => Level::T,
            (Group::O2, Level::G) => Level::N,
            (_, l) => l,
        };
        Ok(Shape { group, level, n, lo, hi })
    }

    pub fn with_level(&self, level: Level) -> Result<Shape> {
        Shape::new(self.group, level, self.n, self.lo, self.hi)
    }

    pub fn with_window(&self, lo: i32, hi: i32) -> Result<Shape> {
        Shape::new(self.group, self.level, self.n, lo, hi)
    }

    /// Whether the `C₁` stalk is over `ℚ[d]`.
    pub fn d_stalk(&self, k: usize) -> bool {
        k == 0 && self.group == Group::SO3 && self.level == Level::G
    }

    pub fn sub_ring(&self, k: usize) -> RingKind {
        if self.d_stalk(k) {
            RingKind::Poly(-4)
        } else {
            RingKind::Poly(-2)
        }
    }

    pub fn equivariant(&self) -> bool {
        self.level != Level::T
    }

    pub fn sub_equivariant(&self, k: usize) -> bool {
        self.equivariant() && !self.d_stalk(k)
    }

    pub fn zero_sub(&self, k: usize) -> WMod {
        WMod::zero(self.sub_ring(k), self.lo, self.hi, self.sub_equivariant(k), -1)
    }

    pub fn zero_top(&self) -> WMod {
        WMod::zero(RingKind::Field, self.lo, self.hi, self.equivariant(), -1)
    }

    pub fn zero_flag(&self) -> WMod {
        WMod::zero(FLAG_RING, self.lo, self.hi, self.equivariant(), -1)
    }

    /// `C_{k+1}`.
    pub fn sub_label(&self, k: usize) -> String {
        format!("C{}", k + 1)
    }

    pub fn flag_label(&self, k: usize) -> String {
        format!("(T⊃C{})", k + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramModule {
    pub shape: Shape,
    /// `M(C_{k+1})`.
    pub sub: Vec<WMod>,
    pub top: WMod,
    /// `M(T ⊃ C_{k+1})`.
    pub flag: Vec<WMod>,
    pub down: Vec<GMap>,
    pub across: Vec<GMap>,
}

/// The stalk of `flag` seen over the ring of the `C_{k+1}` stalk, with its
/// inclusion into `flag`: all of it over `ℚ[c]`, the invariants over `ℚ[d]`.
pub fn flag_as_stalk(shape: &Shape, k: usize, flag: &WMod) -> Result<(WMod, GMap)> {
    if shape.d_stalk(k) {
        let (fx, incl) = flag.fixed_points()?;
        Ok((fx.as_ring(RingKind::Poly(-4)), incl))
    } else {
        let m = flag.as_ring(RingKind::Poly(-2));
        let m = if shape.sub_equivariant(k) { m } else { m.forget_w() };
        Ok((m, GMap::identity(flag)))
    }
}

impl DiagramModule {
    pub fn zero(shape: Shape) -> DiagramModule {
        let sub: Vec<WMod> = (0..shape.n).map(|k| shape.zero_sub(k)).collect();
        let top = shape.zero_top();
        let flag: Vec<WMod> = (0..shape.n).map(|_| shape.zero_flag()).collect();
        let down = (0..shape.n).map(|k| GMap::zero(&sub[k], &flag[k], 0)).collect();
        let across = (0..shape.n).map(|k| GMap::zero(&top, &flag[k], 0)).collect();
        DiagramModule { shape, sub, top, flag, down, across }
    }

    /// Extended module on `V`: flags `ℚ[c,c⁻¹] ⊗ V` and `C_{k+1}` stalks
    /// spanned by `lattice[k]`, given as `(degree, flag coordinates)`.
    pub fn from_top(shape: Shape, top: WMod, lattice: &[Vec<(i32, Vec<Q>)>]) -> Result<DiagramModule> {
        if lattice.len() != shape.n {
            return invalid(format!("expected {} lattices, got {}", shape.n, lattice.len()));
        }
        let top = if shape.equivariant() && !top.is_equivariant() {
            top.with_identity_w(-1)
        } else if !shape.equivariant() {
            top.forget_w()
        } else {
            top
        };
        let (fl, unit) = WMod::laurent_on(&top, -2, -1);
        let mut sub = Vec::new();
        let mut down = Vec::new();
        for (k, gens) in lattice.iter().enumerate() {
            let (amb, incl) = flag_as_stalk(&shape, k, &fl)?;
            let gens: Vec<(i32, Vec<Q>)> = if shape.d_stalk(k) {
                let mut out = Vec::new();
                for (d, v) in gens {
                    let col = Mat::from_cols(v.len(), std::slice::from_ref(v));
                    match incl.at(*d).solve(&col) {
                        Some(x) => out.push((*d, x.col(0))),
                        None => return invalid(format!("lattice generator in degree {d} is not W-invariant")),
                    }
                }
                out
            } else {
                gens.clone()
            };
            let basis = amb.span_of(&gens);
            let (s, sincl) = amb.submodule(&basis)?;
            down.push(sincl.then(&incl));
            sub.push(s);
        }
        let flag = vec![fl; shape.n];
        let across = vec![unit; shape.n];
        let m = DiagramModule { shape, sub, top, flag, down, across };
        m.validate()?;
        Ok(m)
    }

    /// Module whose only nonzero value is `m` at `C_{k+1}`.
    pub fn concentrated(shape: Shape, k: usize, m: WMod) -> Result<DiagramModule> {
        let mut out = DiagramModule::zero(shape);
        if k >= shape.n {
            return invalid(format!("C{} is outside the truncation", k + 1));
        }
        out.down[k] = GMap::zero(&m, &out.flag[k], 0);
        out.sub[k] = m;
        out.validate()?;
        Ok(out)
    }

    pub fn direct_sum(parts: &[&DiagramModule]) -> Result<DiagramModule> {
        let Some(first) = parts.first() else {
            return invalid("empty direct sum");
        };
        if parts.iter().any(|p| p.shape != first.shape) {
            return invalid("direct sum of modules with different shapes");
        }
        let n = first.shape.n;
        let sub = (0..n).map(|k| WMod::direct_sum(&parts.iter().map(|p| &p.sub[k]).collect::<Vec<_>>())).collect();
        let top = WMod::direct_sum(&parts.iter().map(|p| &p.top).collect::<Vec<_>>());
        let flag = (0..n).map(|k| WMod::direct_sum(&parts.iter().map(|p| &p.flag[k]).collect::<Vec<_>>())).collect();
        let down = (0..n).map(|k| GMap::direct_sum(&parts.iter().map(|p| &p.down[k]).collect::<Vec<_>>())).collect();
        let across =
            (0..n).map(|k| GMap::direct_sum(&parts.iter().map(|p| &p.across[k]).collect::<Vec<_>>())).collect();
        Ok(DiagramModule { shape: first.shape, sub, top, flag, down, across })
    }

    /// Stalks in a fixed order: `C₁..C_N`, `T`, then the flags.
    pub fn stalks(&self) -> Vec<&WMod> {
        self.sub.iter().chain(std::iter::once(&self.top)).chain(self.flag.iter()).collect()
    }

    pub fn stalk_labels(&self) -> Vec<String> {
        let n = self.shape.n;
        (0..n)
            .map(|k| self.shape.sub_label(k))
            .chain(std::iter::once("T".to_string()))
            .chain((0..n).map(|k| self.shape.flag_label(k)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.stalks().iter().all(|s| s.is_zero())
    }

    pub fn total_dim(&self) -> usize {
        self.stalks().iter().map(|s| s.total_dim()).sum()
    }

    /// Stalk rings, equivariance, module-map and `W`-compatibility checks.
    pub fn validate(&self) -> Result<()> {
        let s = &self.shape;
        if self.sub.len() != s.n || self.flag.len() != s.n || self.down.len() != s.n || self.across.len() != s.n {
            return invalid("stalk count does not match the truncation");
        }
        for st in self.stalks() {
            if st.lo != s.lo || st.hi != s.hi {
                return invalid("stalk window differs from the module window");
            }
            st.validate()?;
        }
        if self.top.ring != RingKind::Field || self.top.is_equivariant() != s.equivariant() {
            return invariant("top stalk has the wrong ring or equivariance");
        }
        for k in 0..s.n {
            let sub = &self.sub[k];
            let fl = &self.flag[k];
            if sub.ring != s.sub_ring(k) || sub.is_equivariant() != s.sub_equivariant(k) {
                return invariant(format!("stalk {} has the wrong ring or equivariance", s.sub_label(k)));
            }
            if fl.is_equivariant() != s.equivariant() {
                return invariant(format!("stalk {} has the wrong equivariance", s.flag_label(k)));
            }
            let fl_view = if s.d_stalk(k) { fl.restrict_to_square() } else { fl.clone() };
            if fl.ring == FLAG_RING && !self.down[k].is_module_map(sub, &fl_view) {
                return invariant(format!("{} → {} is not a module map", s.sub_label(k), s.flag_label(k)));
            }
            if s.d_stalk(k) {
                for d in s.lo..=s.hi {
                    let f = self.down[k].at(d);
                    if fl.w_at(d).mul(f) != *f {
                        return invariant(format!("{} → {} misses the invariants in degree {d}", s.sub_label(k), s.flag_label(k)));
                    }
                }
            }
            if !self.across[k].is_module_map(&self.top, fl) {
                return invariant(format!("T → {} is not W-equivariant", s.flag_label(k)));
            }
        }
        Ok(())
    }

    /// Short structural summary: nonzero `(degree:dim)` per stalk.
    pub fn fingerprint(&self) -> String {
        let labels = self.stalk_labels();
        self.stalks()
            .iter()
            .zip(labels)
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, l)| format!("{l}: {m}"))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Per-stalk dimensions on the window.
    pub fn dims(&self) -> Vec<(String, Vec<usize>)> {
        self.stalk_labels().into_iter().zip(self.stalks()).map(|(l, m)| (l, m.dims.clone())).collect()
    }

    /// Forget the involutions (restriction to the torus).
    pub fn forget_to_torus(&self) -> Result<DiagramModule> {
        if self.shape.d_stalk(0) {
            return invalid("restrict the G-level module along θ_* first");
        }
        let shape = self.shape.with_level(Level::T)?;
        Ok(DiagramModule {
            shape,
            sub: self.sub.iter().map(|m| m.forget_w()).collect(),
            top: self.top.forget_w(),
            flag: self.flag.iter().map(|m| m.forget_w()).collect(),
            down: self.down.clone(),
            across: self.across.clone(),
        })
    }
}

impl DiagramModule {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("modules serialize")
    }

    /// Parse and validate a serialized module.
    pub fn from_json(s: &str) -> Result<DiagramModule> {
        let m: DiagramModule = serde_json::from_str(s).map_err(|e| crate::Error::InvalidConfig(format!("module JSON: {e}")))?;
        let shape = Shape::new(m.shape.group, m.shape.level, m.shape.n, m.shape.lo, m.shape.hi)?;
        if shape != m.shape {
            return invalid("module JSON: shape is not normalized");
        }
        m.validate()?;
        Ok(m)
    }
}

impl fmt::Display for DiagramModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} N={} [{}..{}] {{{}}}", self.shape.group, self.shape.level, self.shape.n, self.shape.lo, self.shape.hi, self.fingerprint())
    }
}

/// A degree-`t` map of diagram modules, one graded map per stalk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramMap {
    pub t: i32,
    pub sub: Vec<GMap>,
    pub top: GMap,
    pub flag: Vec<GMap>,
}

impl DiagramMap {
    pub fn zero(x: &DiagramModule, y: &DiagramModule, t: i32) -> DiagramMap {
        DiagramMap {
            t,
            sub: x.sub.iter().zip(&y.sub).map(|(a, b)| GMap::zero(a, b, t)).collect(),
            top: GMap::zero(&x.top, &y.top, t),
            flag: x.flag.iter().zip(&y.flag).map(|(a, b)| GMap::zero(a, b, t)).collect(),
        }
    }

    pub fn identity(x: &DiagramModule) -> DiagramMap {
        DiagramMap {
            t: 0,
            sub: x.sub.iter().map(GMap::identity).collect(),
            top: GMap::identity(&x.top),
            flag: x.flag.iter().map(GMap::identity).collect(),
        }
    }

    pub fn components(&self) -> Vec<&GMap> {
        self.sub.iter().chain(std::iter::once(&self.top)).chain(self.flag.iter()).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DiagramMap) -> DiagramMap {
        DiagramMap {
            t: self.t + other.t,
            sub: self.sub.iter().zip(&other.sub).map(|(a, b)| a.then(b)).collect(),
            top: self.top.then(&other.top),
            flag: self.flag.iter().zip(&other.flag).map(|(a, b)| a.then(b)).collect(),
        }
    }

    pub fn add(&self, o: &DiagramMap) -> DiagramMap {
        DiagramMap {
            t: self.t,
            sub: self.sub.iter().zip(&o.sub).map(|(a, b)| a.add(b)).collect(),
            top: self.top.add(&o.top),
            flag: self.flag.iter().zip(&o.flag).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> DiagramMap {
        DiagramMap {
            t: self.t,
            sub: self.sub.iter().map(|a| a.scale(s)).collect(),
            top: self.top.scale(s),
            flag: self.flag.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// Stalkwise module maps commuting with the structure maps, on the
    /// window.
    pub fn is_map(&self, x: &DiagramModule, y: &DiagramModule) -> bool {
        let s = &x.shape;
        let t = self.t;
        for k in 0..s.n {
            if !self.sub[k].is_module_map(&x.sub[k], &y.sub[k]) || !self.flag[k].is_module_map(&x.flag[k], &y.flag[k]) {
                return false;
            }
        }
        if !self.top.is_module_map(&x.top, &y.top) {
            return false;
        }
        for k in 0..s.n {
            for d in s.lo..=s.hi {
                if !y.flag[k].in_window(d + t) {
                    continue;
                }
                let lhs = self.flag[k].at(d).mul(x.down[k].at(d));
                let rhs = y.down[k].at(d + t).mul(self.sub[k].at(d));
                if lhs != rhs {
                    return false;
                }
                let lhs = self.flag[k].at(d).mul(x.across[k].at(d));
                let rhs = y.across[k].at(d + t).mul(self.top.at(d));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Injective in every stalk and degree.
    pub fn is_mono(&self) -> bool {
        self.components().iter().all(|c| c.mats.iter().all(|m| m.rank() == m.cols()))
    }

    pub fn is_iso(&self) -> bool {
        self.components().iter().all(|c| c.is_iso())
    }
}

/// `A⁻¹·B` for a column basis `A` containing the span of `B`.
fn coords(a: &Mat, b: &Mat) -> Result<Mat> {
    match a.solve(b) {
        Some(x) => Ok(x),
        None => invariant("image does not lie in the expected subspace"),
    }
}

/// Kernel of a degree-0 map `f: x → y`, with its inclusion.
pub fn kernel(x: &DiagramModule, f: &DiagramMap) -> Result<(DiagramModule, DiagramMap)> {
    let sub_k: Vec<(WMod, GMap)> =
        x.sub.iter().zip(&f.sub).map(|(m, g)| m.kernel_of(g)).collect::<Result<Vec<_>>>()?;
    let (top, top_i) = x.top.kernel_of(&f.top)?;
    let flag_k: Vec<(WMod, GMap)> =
        x.flag.iter().zip(&f.flag).map(|(m, g)| m.kernel_of(g)).collect::<Result<Vec<_>>>()?;
    let s = &x.shape;
    let mut down = Vec::new();
    let mut across = Vec::new();
    for k in 0..s.n {
        let (si, fi) = (&sub_k[k].1, &flag_k[k].1);
        let mats = (s.lo..=s.hi).map(|d| coords(fi.at(d), &x.down[k].at(d).mul(si.at(d)))).collect::<Result<_>>()?;
        down.push(GMap { t: 0, lo: s.lo, hi: s.hi, mats });
        let mats =
            (s.lo..=s.hi).map(|d| coords(fi.at(d), &x.across[k].at(d).mul(top_i.at(d)))).collect::<Result<_>>()?;
        across.push(GMap { t: 0, lo: s.lo, hi: s.hi, mats });
    }
    let incl = DiagramMap {
        t: 0,
        sub: sub_k.iter().map(|p| p.1.clone()).collect(),
        top: top_i,
        flag: flag_k.iter().map(|p| p.1.clone()).collect(),
    };
    let m = DiagramModule {
        shape: x.shape,
        sub: sub_k.into_iter().map(|p| p.0).collect(),
        top,
        flag: flag_k.into_iter().map(|p| p.0).collect(),
        down,
        across,
    };
    Ok((m, incl))
}

/// Quotient of a stalk by the image of `f`, with projection and section.
fn stalk_cokernel(m: &WMod, f: &GMap) -> (WMod, GMap, Vec<Mat>) {
    let basis: Vec<Mat> = f.mats.iter().map(|a| a.image_basis()).collect();
    let (quo, proj) = m.quotient(&basis);
    let sections = basis.iter().map(|b| b.cokernel().1).collect();
    (quo, proj, sections)
}

/// Cokernel of a degree-0 map `f: x → y`, with its projection.
pub fn cokernel(y: &DiagramModule, f: &DiagramMap) -> Result<(DiagramModule, DiagramMap)> {
    let s = &y.shape;
    let subs: Vec<_> = y.sub.iter().zip(&f.sub).map(|(m, g)| stalk_cokernel(m, g)).collect();
    let (top, top_p, top_s) = stalk_cokernel(&y.top, &f.top);
    let flags: Vec<_> = y.flag.iter().zip(&f.flag).map(|(m, g)| stalk_cokernel(m, g)).collect();
    let mut down = Vec::new();
    let mut across = Vec::new();
    for k in 0..s.n {
        let mats = (s.lo..=s.hi)
            .map(|d| flags[k].1.at(d).mul(y.down[k].at(d)).mul(&subs[k].2[(d - s.lo) as usize]))
            .collect();
        down.push(GMap { t: 0, lo: s.lo, hi: s.hi, mats });
        let mats =
            (s.lo..=s.hi).map(|d| flags[k].1.at(d).mul(y.across[k].at(d)).mul(&top_s[(d - s.lo) as usize])).collect();
        across.push(GMap { t: 0, lo: s.lo, hi: s.hi, mats });
    }
    let proj = DiagramMap {
        t: 0,
        sub: subs.iter().map(|p| p.1.clone()).collect(),
        top: top_p,
        flag: flags.iter().map(|p| p.1.clone()).collect(),
    };
    let m = DiagramModule {
        shape: y.shape,
        sub: subs.into_iter().map(|p| p.0).collect(),
        top,
        flag: flags.into_iter().map(|p| p.0).collect(),
        down,
        across,
    };
    Ok((m, proj))
}

/// Variable layout for a diagram Hom system: for each degree, the blocks
/// of every stalk in stalk order, so constraints stay banded.
struct DiagramLayout {
    nvars: usize,
    /// `offsets[stalk][d - lo]`.
    offsets: Vec<Vec<Option<usize>>>,
    lo: i32,
}

impl DiagramLayout {
    fn new(xs: &[&WMod], ys: &[&WMod], t: i32, lo: i32, hi: i32) -> Self {
        let mut offsets = vec![vec![None; (hi - lo + 1) as usize]; xs.len()];
        let mut off = 0;
        for d in lo..=hi {
            for (s, (x, y)) in xs.iter().zip(ys).enumerate() {
                if y.in_window(d + t) {
                    offsets[s][(d - lo) as usize] = Some(off);
                    off += y.dim(d + t) * x.dim(d);
                }
            }
        }
        DiagramLayout { nvars: off, offsets, lo }
    }

    fn offset(&self, s: usize, d: i32) -> Option<usize> {
        let i = d - self.lo;
        if i < 0 || i as usize >= self.offsets[s].len() {
            return None;
        }
        self.offsets[s][i as usize]
    }
}

/// Constraints `φ_tgt · a − b · φ_src = 0` for structure maps `a` (source
/// module) and `b` (target module) between stalks `src → tgt`.
#[allow(clippy::too_many_arguments)]
fn add_square(
    sys: &mut SparseSystem,
    lay: &DiagramLayout,
    (si, ti): (usize, usize),
    (xs, xt): (&WMod, &WMod),
    (ys, yt): (&WMod, &WMod),
    a: &GMap,
    b: &GMap,
    t: i32,
) {
    for d in xs.degrees() {
        if !yt.in_window(d + t) {
            continue;
        }
        let (Some(os), Some(ot)) = (lay.offset(si, d), lay.offset(ti, d)) else { continue };
        let am = a.at(d);
        let bm = b.at(d + t);
        let (r, c) = (yt.dim(d + t), xs.dim(d));
        let (ct, rs) = (xt.dim(d), ys.dim(d + t));
        for i in 0..r {
            for j in 0..c {
                let mut e = Vec::new();
                for l in 0..ct {
                    if !am[(l, j)].is_zero() {
                        e.push((ot + i * ct + l, am[(l, j)].clone()));
                    }
                }
                for l in 0..rs {
                    if !bm[(i, l)].is_zero() {
                        e.push((os + l * c + j, -bm[(i, l)].clone()));
                    }
                }
                if !e.is_empty() {
                    sys.add(e, Q::zero());
                }
            }
        }
    }
}

fn hom_system(x: &DiagramModule, y: &DiagramModule, t: i32) -> (SparseSystem, DiagramLayout) {
    let s = &x.shape;
    let xs = x.stalks();
    let ys = y.stalks();
    let lay = DiagramLayout::new(&xs, &ys, t, s.lo, s.hi);
    let mut sys = SparseSystem::new(lay.nvars);
    for (i, (a, b)) in xs.iter().zip(&ys).enumerate() {
        a.add_hom_constraints(b, t, &|d| lay.offset(i, d), &mut sys);
    }
    let n = s.n;
    for k in 0..n {
        let fk = n + 1 + k;
        add_square(&mut sys, &lay, (k, fk), (&x.sub[k], &x.flag[k]), (&y.sub[k], &y.flag[k]), &x.down[k], &y.down[k], t);
        add_square(&mut sys, &lay, (n, fk), (&x.top, &x.flag[k]), (&y.top, &y.flag[k]), &x.across[k], &y.across[k], t);
    }
    (sys, lay)
}

/// `Hom^t(x, y)` by solving all stalk and compatibility constraints at once.
pub fn hom(x: &DiagramModule, y: &DiagramModule, t: i32) -> Vec<DiagramMap> {
    let (sys, lay) = hom_system(x, y, t);
    let xs = x.stalks();
    let ys = y.stalks();
    sys.null_space()
        .into_iter()
        .map(|v| {
            let mut dense = vec![Q::zero(); lay.nvars];
            for (i, val) in v {
                dense[i] = val;
            }
            let comps: Vec<GMap> = xs
                .iter()
                .zip(&ys)
                .enumerate()
                .map(|(si, (a, b))| {
                    let mats = a
                        .degrees()
                        .map(|d| {
                            let (r, c) = (b.dim(d + t), a.dim(d));
                            match lay.offset(si, d) {
                                Some(o) => {
                                    let mut m = Mat::zeros(r, c);
                                    for i in 0..r {
                                        for j in 0..c {
                                            m[(i, j)] = dense[o + i * c + j].clone();
                                        }
                                    }
                                    m
                                }
                                None => Mat::zeros(0, c),
                            }
                        })
                        .collect();
                    GMap { t, lo: a.lo, hi: a.hi, mats }
                })
                .collect();
            let n = x.shape.n;
            DiagramMap { t, sub: comps[..n].to_vec(), top: comps[n].clone(), flag: comps[n + 1..].to_vec() }
        })
        .collect()
}

pub fn hom_dim(x: &DiagramModule, y: &DiagramModule, t: i32) -> usize {
    let (sys, lay) = hom_system(x, y, t);
    lay.nvars - sys.rank()
}
