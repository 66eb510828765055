//! Closed-form algebraic images `π^𝒜` of the cell catalog, per group and
//! level. Each image is assembled from pieces: an extended module on a
//! top value with lattices, an injective `f_T(V)`, or a module concentrated
//! at one `C_n`.

use super::spec::{CellKind, CellSpec, FromLevel, ToralSub};
use crate::diagram::descent::psi;
use crate::diagram::module::{DiagramModule, Level, Shape};
use crate::error::{invalid, unsupported, Result};
use crate::gralg::normal_form::NormalForm;
use crate::gralg::wmod::{RingKind, WMod};
use crate::homalg::injective::f_top;
use crate::lattice::Group;
use crate::linalg::{q, Mat, Q};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    /// Top value `V` with lattice generators per `C_n` in flag coordinates.
    Extended { top: WMod, lattice: Vec<Vec<(i32, Vec<Q>)>> },
    /// `f_T(V)`.
    Top(WMod),
    /// A module at `C_{k+1}` alone.
    At(usize, WMod),
}

/// `V = ℚ` in degree `d`, or `ℚ[W]` (with `w` swapping) if `regular`.
fn point(shape: &Shape, d: i32, regular: bool) -> Result<WMod> {
    if !(shape.lo..=shape.hi).contains(&d) {
        return invalid(format!("degree {d} lies outside the window"));
    }
    let mut v = shape.zero_top();
    let i = (d - shape.lo) as usize;
    let n = if regular { 2 } else { 1 };
    v.dims[i] = n;
    if let Some(w) = v.w.as_mut() {
        w[i] = if n == 2 { Mat::from_i64(2, 2, &[0, 1, 1, 0]) } else { Mat::identity(1) };
    }
    Ok(v)
}

/// Payload at `C_{k+1}` from a normal-form string, shifted by `s`. Signs
/// are dropped on non-equivariant stalks.
fn payload(shape: &Shape, k: usize, form: &str, s: i32) -> Result<WMod> {
    let ws = shape.sub_equivariant(k).then_some(-1);
    let form = if ws.is_some() { form.to_string() } else { form.replace('-', "") };
    let nf = NormalForm::parse(shape.sub_ring(k), ws, &form)?.shifted(s);
    Ok(nf.to_windowed(shape.lo, shape.hi))
}

fn check_index(shape: &Shape, k: ToralSub) -> Result<Option<usize>> {
    match k {
        ToralSub::T => Ok(None),
        ToralSub::C(n) if n as usize <= shape.n => Ok(Some(n as usize - 1)),
        ToralSub::C(n) => invalid(format!("C{n} is outside the truncation N={}", shape.n)),
    }
}

/// Whether `C_{k+1}` is the `G`-level `C₁` of `SO(3)` (stalk over `ℚ[d]`).
fn d_stalk(shape: &Shape, k: usize) -> bool {
    shape.d_stalk(k)
}

/// `H_*((BW^e K)^{L W^e K})` as a payload at `C_{k+1}`: socle in the degree
/// of the maximal torus of `W^e K` (1 over `ℚ[c]`; 3 over `ℚ[d]`, where the
/// bottom class of the `ℚ[c]` version is not invariant).
fn idem_payload(shape: &Shape, k: usize, s: i32) -> Result<WMod> {
    if d_stalk(shape, k) {
        payload(shape, k, "D3", s)
    } else {
        payload(shape, k, "D1-", s)
    }
}

fn pieces_of(kind: &CellKind, shape: &Shape, s: i32) -> Result<Vec<Piece>> {
    let g = shape.group;
    match kind {
        CellKind::Sphere | CellKind::ToralIdempotentSphere => {
            let top = point(shape, s, false)?;
            Ok(vec![Piece::Extended { top, lattice: vec![vec![(s, vec![q(1)])]; shape.n] }])
        }
        CellKind::Cell(ToralSub::T) => {
            // Φ^K(G/T₊) is 𝔚G points, except Φ^{C₁} = S² for SO(3), whose
            // homology adds the class (e₁ − e₂)/c.
            let top = point(shape, s, g != Group::Circle)?;
            let dim = top.dim(s);
            let gens: Vec<(i32, Vec<Q>)> = (0..dim)
                .map(|i| (s, (0..dim).map(|j| if i == j { q(1) } else { Q::zero() }).collect()))
                .collect();
            let mut lattice = vec![gens; shape.n];
            if g == Group::SO3 {
                lattice[0].push((s + 2, vec![q(1), q(-1)]));
            }
            Ok(vec![Piece::Extended { top, lattice }])
        }
        CellKind::Cell(l) => {
            let Some(km) = check_index(shape, *l)? else { unreachable!() };
            let m = km as u64 + 1;
            let mut out = Vec::new();
            for n in (1..=m).filter(|n| m.is_multiple_of(*n)) {
                let k = n as usize - 1;
                // Borel homology of the free orbit (T/C_n)₊ ∧ 𝔚G/W^e.
                let form = match (g, shape.level) {
                    (Group::Circle, _) => "T1^1",
                    (Group::SO3, Level::G) if k == 0 => "T3^1",
                    (Group::SO3, _) if k == 0 => "T3^2",
                    _ => "T1^1, T1^1-",
                };
                out.push(Piece::At(k, payload(shape, k, form, s)?));
            }
            Ok(out)
        }
        CellKind::Idempotent(kk) => match check_index(shape, *kk)? {
            None => Ok(vec![Piece::Top(point(shape, s, false)?)]),
            Some(k) => Ok(vec![Piece::At(k, idem_payload(shape, k, s)?)]),
        },
        CellKind::Coinduced(FromLevel::T, inner) => coinduced_from_torus(inner, shape, s),
        CellKind::Coinduced(FromLevel::N, inner) => coinduced_from_normalizer(inner, shape, s),
    }
}

/// `F_T(G₊, E⟨(K)⟩)`: payload `ℚ[W^d K] ⊗ H_*((BT/K)^{LT/K})` at `K`, read as
/// a module over the ring of `K`.
fn coinduced_from_torus(inner: &CellSpec, shape: &Shape, s: i32) -> Result<Vec<Piece>> {
    let [(CellKind::Idempotent(kk), s2)] = inner.summands()[..] else {
        return unsupported(format!("coinduction from T of {inner}"));
    };
    let s = s + s2;
    let single = shape.group == Group::Circle;
    match check_index(shape, kk)? {
        None => Ok(vec![Piece::Top(point(shape, s, !single)?)]),
        Some(k) => {
            let form = if single {
                "D1"
            } else if d_stalk(shape, k) {
                // D1 over ℚ[c] restricted to ℚ[d].
                "D1, D3"
            } else {
                "D1, D1-"
            };
            Ok(vec![Piece::At(k, payload(shape, k, form, s)?)])
        }
    }
}

/// `F_N(G₊, Y)` for `Y` built from injective and concentrated pieces: the
/// `N`-level payloads with the `C₁` payload replaced by its invariants.
fn coinduced_from_normalizer(inner: &CellSpec, shape: &Shape, s: i32) -> Result<Vec<Piece>> {
    if shape.level != Level::G {
        return invalid("coinduction from N lands at the G level");
    }
    let nshape = shape.with_level(Level::N)?;
    let mut out = Vec::new();
    for (kind, s2) in inner.summands() {
        for p in pieces_of(&kind, &nshape, s + s2)? {
            out.push(match p {
                Piece::Top(v) => Piece::Top(v),
                Piece::At(k, m) if shape.d_stalk(k) => Piece::At(k, m.fixed_points()?.0),
                Piece::At(k, m) => Piece::At(k, m),
                Piece::Extended { .. } => return unsupported(format!("coinduction from N of {kind}")),
            });
        }
    }
    Ok(out)
}

fn assemble(shape: Shape, pieces: Vec<Piece>) -> Result<DiagramModule> {
    let mut mods = Vec::new();
    for p in pieces {
        mods.push(match p {
            // Over ℚ[d] the lattice is the invariants of the N-level one.
            Piece::Extended { top, lattice } if shape.d_stalk(0) => psi(&DiagramModule::from_top(shape.with_level(Level::N)?, top, &lattice)?)?,
            Piece::Extended { top, lattice } => DiagramModule::from_top(shape, top, &lattice)?,
            Piece::Top(v) => f_top(shape, &v)?.module,
            Piece::At(k, m) => DiagramModule::concentrated(shape, k, m)?,
        });
    }
    if mods.is_empty() {
        return Ok(DiagramModule::zero(shape));
    }
    DiagramModule::direct_sum(&mods.iter().collect::<Vec<_>>())
}

/// Pieces of `π^𝒜(cell)` for the shape's group and level.
pub fn pieces(cell: &CellSpec, shape: Shape) -> Result<Vec<Piece>> {
    if !shape.group.has_module_category() {
        return unsupported(format!("cells for {}", shape.group));
    }
    let mut out = Vec::new();
    for (kind, s) in cell.summands() {
        out.extend(pieces_of(&kind, &shape, s)?);
    }
    Ok(out)
}

/// `π^𝒜(cell)` on the shape's window.
pub fn pi_a(cell: &CellSpec, shape: Shape) -> Result<DiagramModule> {
    assemble(shape, pieces(cell, shape)?)
}

/// The catalog for a rank-1 group with truncation `n`.
pub fn catalog(group: Group, n: usize) -> Vec<CellSpec> {
    let mut subs: Vec<ToralSub> = (1..=n as u64).map(ToralSub::C).collect();
    subs.push(ToralSub::T);
    let mut out = vec![CellSpec::single(CellKind::Sphere), CellSpec::single(CellKind::ToralIdempotentSphere)];
    for &l in &subs {
        out.push(CellSpec::single(CellKind::Cell(l)));
    }
    for &k in &subs {
        out.push(CellSpec::single(CellKind::Idempotent(k)));
    }
    for &k in &subs {
        out.push(CellSpec::single(CellKind::Coinduced(FromLevel::T, Box::new(CellSpec::single(CellKind::Idempotent(k))))));
    }
    if group == Group::SO3 {
        for &k in &subs {
            let idem = CellSpec::single(CellKind::Idempotent(k));
            out.push(CellSpec::single(CellKind::Coinduced(FromLevel::N, Box::new(idem.clone()))));
            let ct = CellSpec::single(CellKind::Coinduced(FromLevel::T, Box::new(idem)));
            out.push(CellSpec::single(CellKind::Coinduced(FromLevel::N, Box::new(ct))));
        }
        for &l in &subs[..subs.len() - 1] {
            let c = CellSpec::single(CellKind::Cell(l));
            out.push(CellSpec::single(CellKind::Coinduced(FromLevel::N, Box::new(c))));
        }
    }
    out
}

/// Whether `cell` is a coinduced cell (restriction to `N` leaves the
/// catalog, so the restriction square does not apply).
pub fn is_coinduced(cell: &CellSpec) -> bool {
    cell.summands().iter().any(|(k, _)| matches!(k, CellKind::Coinduced(..)))
}

/// Whether coinduction from `N` is defined for this cell at the `G` level.
pub fn levels_for(cell: &CellSpec) -> Vec<Level> {
    if cell.summands().iter().any(|(k, _)| matches!(k, CellKind::Coinduced(FromLevel::N, _))) {
        vec![Level::G]
    } else {
        vec![Level::T, Level::N, Level::G]
    }
}

/// Ring of the stalk at `C_{k+1}` and whether it is the `G`-level one.
pub fn stalk_ring(shape: &Shape, k: usize) -> RingKind {
    shape.sub_ring(k)
}
