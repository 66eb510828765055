//! Seeded random corpora: qce diagram modules built from random extended
//! pieces, torsion and divisible payloads and catalog cells, and random
//! normal modules over `ℚ[c]`.

use crate::cells::{catalog, pi_a};
use crate::diagram::descent::psi;
use crate::diagram::module::{DiagramModule, Level, Shape};
use crate::error::Result;
use crate::gralg::normal_form::{NormalForm, Summand, SummandKind};
use crate::gralg::wmod::{RingKind, WMod};
use crate::linalg::{q, Q};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flag coordinates of `c^{-j} ⊗ e_i` for `e_i ∈ V_d`, in degree `d + 2j`.
fn flag_coords(v: &WMod, d: i32, i: usize, j: i32) -> (i32, Vec<Q>) {
    let x = d + 2 * j;
    let mut off = 0;
    let mut n = 0;
    for e in v.degrees() {
        if (e - x).rem_euclid(2) == 0 {
            if e < d {
                off += v.dim(e);
            }
            n += v.dim(e);
        }
    }
    let mut out = vec![Q::zero(); n];
    out[off + i] = q(1);
    (x, out)
}

/// An extended module: `V` in a few degrees, each basis vector generating
/// the lattice at `C_n` from `c^{-j}` with `j ∈ {0, 1, 2}`.
pub fn random_extended(r: &mut impl Rng, shape: Shape) -> Result<DiagramModule> {
    let base = if shape.d_stalk(0) { shape.with_level(Level::N)? } else { shape };
    let mut top = base.zero_top();
    let span = (shape.hi - 6) - (shape.lo + 8);
    for _ in 0..r.gen_range(1..=2) {
        let d = shape.lo + 8 + r.gen_range(0..=span.max(0));
        let i = (d - shape.lo) as usize;
        top.dims[i] += 1;
    }
    if let Some(w) = top.w.as_mut() {
        for (i, m) in w.iter_mut().enumerate() {
            *m = crate::linalg::Mat::identity(top.dims[i]);
        }
    }
    let mut lattice = Vec::new();
    for _ in 0..shape.n {
        let mut gens = Vec::new();
        for d in top.degrees() {
            for i in 0..top.dim(d) {
                let j = r.gen_range(0..=2).min((shape.hi - d) / 2);
                gens.push(flag_coords(&top, d, i, j));
            }
        }
        lattice.push(gens);
    }
    let m = DiagramModule::from_top(base, top, &lattice)?;
    if shape.d_stalk(0) {
        psi(&m)
    } else {
        Ok(m)
    }
}

/// A torsion or divisible payload at `C_{k+1}`.
pub fn random_payload(r: &mut impl Rng, shape: Shape, k: usize) -> Result<DiagramModule> {
    let ring = shape.sub_ring(k);
    let e = -ring.gen_deg().unwrap_or(-2);
    let eq = shape.sub_equivariant(k);
    let mut summands = Vec::new();
    for _ in 0..r.gen_range(1..=2) {
        let sign = if eq && r.gen_bool(0.5) { -1 } else { 1 };
        let s = if r.gen_bool(0.7) {
            let n = r.gen_range(1..=3);
            let top = r.gen_range(shape.lo + e * n as i32..=shape.hi);
            Summand { kind: SummandKind::Torsion(n), shift: top, sign }
        } else {
            Summand { kind: SummandKind::Divisible, shift: r.gen_range(shape.lo + 6..=shape.lo + 18), sign }
        };
        summands.push(s);
    }
    let nf = if eq { NormalForm::equivariant(ring, -1, summands) } else { NormalForm::new(ring, summands) };
    DiagramModule::concentrated(shape, k, nf.to_windowed(shape.lo, shape.hi))
}

/// A random qce module: extended part, payloads, and a catalog cell.
pub fn random_module(r: &mut impl Rng, shape: Shape) -> Result<(String, DiagramModule)> {
    let mut parts = Vec::new();
    let mut desc = Vec::new();
    if r.gen_bool(0.8) {
        parts.push(random_extended(r, shape)?);
        desc.push("ext".to_string());
    }
    for _ in 0..r.gen_range(0..=2) {
        let k = r.gen_range(0..shape.n);
        parts.push(random_payload(r, shape, k)?);
        desc.push(format!("tors@C{}", k + 1));
    }
    if parts.is_empty() || r.gen_bool(0.4) {
        let cells: Vec<_> = catalog(shape.group, shape.n)
            .into_iter()
            .filter(|c| shape.level == Level::G || !crate::cells::recipes::is_coinduced(c))
            .collect();
        let c = cells.choose(r).expect("nonempty catalog").clone();
        let s = 2 * r.gen_range(-2..=1);
        let c = c.shifted(s);
        parts.push(pi_a(&c, shape)?);
        desc.push(c.to_string());
    }
    let m = DiagramModule::direct_sum(&parts.iter().collect::<Vec<_>>())?;
    Ok((desc.join(" + "), m))
}

pub fn corpus(shape: Shape, count: usize, seed: u64) -> Result<Vec<(String, DiagramModule)>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_module(&mut r, shape)).collect()
}

/// A sum of normal cyclic `ℚ[c]`-modules (`w(c) = −c`): free and even-length
/// torsion on invariant generators, divisible with anti-invariant socle,
/// Laurent.
pub fn random_normal(r: &mut impl Rng, lo: i32, hi: i32) -> WMod {
    let mut summands = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let s = match r.gen_range(0..4) {
            0 => Summand { kind: SummandKind::Free, shift: 2 * r.gen_range(-3..=1), sign: 1 },
            1 => Summand { kind: SummandKind::Torsion(2 * r.gen_range(1..=2)), shift: 2 * r.gen_range(-2..=2), sign: 1 },
            2 => Summand { kind: SummandKind::Divisible, shift: 2 * r.gen_range(-3..=0) + 1, sign: -1 },
            _ => Summand { kind: SummandKind::Free, shift: 2 * r.gen_range(-3..=1) + 1, sign: 1 },
        };
        summands.push(s);
    }
    NormalForm::equivariant(RingKind::Poly(-2), -1, summands).to_windowed(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::qce::check_qce;
    use crate::gralg::normality::is_normal_module;
    use crate::lattice::Group;

    #[test]
    fn corpus_is_qce_and_deterministic() {
        let shape = Shape::new(Group::SO3, Level::G, 4, -24, 4).unwrap();
        let a = corpus(shape, 30, 11).unwrap();
        let b = corpus(shape, 30, 11).unwrap();
        for ((da, ma), (db, mb)) in a.iter().zip(&b) {
            assert_eq!((da, ma), (db, mb));
            let r = check_qce(ma);
            assert!(r.is_qce() && r.f_continuous, "{da}: {:?}", r.failures);
        }
    }

    #[test]
    fn random_normal_is_normal() {
        let mut r = rng(3);
        for _ in 0..40 {
            let m = random_normal(&mut r, -24, 12);
            assert!(is_normal_module(&m).unwrap().normal, "{}", crate::gralg::normal_form::classify(&m));
        }
    }
}
