//! `Ext^{s,t}(X, Y)` from the injective resolution of `Y`:
//! `Ext⁰ = ker δ` and `Ext¹ = coker δ` for
//! `δ = p ∘ −: Hom^t(X, I₀) → Hom^t(X, I₁)`.

use super::injective::hom_closed;
use super::resolution::{injective_resolution, Resolution};
use crate::diagram::module::DiagramModule;
use crate::error::{invalid, Result};
use crate::gralg::wmod::{GMap, HomLayout};
use crate::linalg::{sparse_rank, Mat, Q};
use crate::par;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub s: usize,
    pub t: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtTable {
    pub t_lo: i32,
    pub t_hi: i32,
    /// Nonzero entries, sorted by `(s, t)`.
    pub entries: Vec<ExtEntry>,
}

impl ExtTable {
    pub fn dim(&self, s: usize, t: i32) -> usize {
        self.entries.iter().find(|e| e.s == s && e.t == t).map_or(0, |e| e.dim)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.dim).sum()
    }
}

/// Per degree `t`: `(dim Hom(X, I₀), dim Hom(X, I₁), rank δ)`.
pub fn delta_ranks(x: &DiagramModule, r: &Resolution, t: i32) -> Result<(usize, usize, usize)> {
    let mut images: Vec<Vec<(usize, Q)>> = Vec::new();
    let n = x.shape.n;
    let layouts: Vec<HomLayout> = (0..n).map(|k| HomLayout::new(&x.sub[k], &r.i1.sub[k], t)).collect();
    let offs: Vec<usize> = layouts
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.nvars;
            Some(o)
        })
        .collect();
    let width: usize = layouts.iter().map(|l| l.nvars).sum();
    let mut h0 = 0;
    for (j, inj) in r.i0.iter().enumerate() {
        // Row offset of the j-th summand inside I₀ at C_{k+1}, degree e.
        let row_off = |k: usize, e: i32| -> usize { r.i0[..j].iter().map(|i| i.module.sub[k].dim(e)).sum() };
        for f in hom_closed(x, inj, t)? {
            h0 += 1;
            let mut v = Vec::new();
            for k in 0..n {
                let mats = x.sub[k]
                    .degrees()
                    .map(|d| {
                        let e = d + t;
                        let a = f.sub[k].at(d);
                        if !r.i1.sub[k].in_window(e) || a.rows() == 0 {
                            return Mat::zeros(r.i1.sub[k].dim(e), a.cols());
                        }
                        let o = row_off(k, e);
                        let idx: Vec<usize> = (o..o + a.rows()).collect();
                        r.p.sub[k].at(e).select_cols(&idx).mul(a)
                    })
                    .collect();
                let comp = GMap { t, lo: x.shape.lo, hi: x.shape.hi, mats };
                let flat = layouts[k].flatten(&x.sub[k], &comp);
                v.extend(flat.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(i, q)| (offs[k] + i, q)));
            }
            images.push(v);
        }
    }
    let h1: usize = (0..n).map(|k| x.sub[k].hom_dim(&r.i1.sub[k], t)).sum();
    let rank = sparse_rank(width, &images);
    Ok((h0, h1, rank))
}

/// `Ext^{s,t}(X, Y)` for `t ∈ [t_lo, t_hi]`. Both modules share a shape,
/// whose window should exceed the `t` range by a margin.
pub fn ext(x: &DiagramModule, y: &DiagramModule, t_lo: i32, t_hi: i32) -> Result<ExtTable> {
    if x.shape != y.shape {
        return invalid("Ext of modules with different shapes");
    }
    let r = injective_resolution(y)?;
    ext_with(x, &r, t_lo, t_hi)
}

pub fn ext_with(x: &DiagramModule, r: &Resolution, t_lo: i32, t_hi: i32) -> Result<ExtTable> {
    let rows = par::map_range(t_lo as i64, t_hi as i64 + 1, |t| delta_ranks(x, r, t as i32));
    let mut entries = Vec::new();
    let mut ones = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        let (h0, h1, rk) = row?;
        let t = t_lo + i as i32;
        if h0 > rk {
            entries.push(ExtEntry { s: 0, t, dim: h0 - rk });
        }
        if h1 > rk {
            ones.push(ExtEntry { s: 1, t, dim: h1 - rk });
        }
    }
    entries.extend(ones);
    Ok(ExtTable { t_lo, t_hi, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::module::{hom_dim, Level, Shape};
    use crate::gralg::normal_form::NormalForm;
    use crate::lattice::Group;
    use crate::linalg::q;

    const LO: i32 = -32;
    const HI: i32 = 24;

    fn sphere(group: Group, level: Level, n: usize, d: i32) -> DiagramModule {
        let shape = Shape::new(group, level, n, LO, HI).unwrap();
        let mut top = shape.zero_top();
        top.dims[(d - LO) as usize] = 1;
        if let Some(w) = top.w.as_mut() {
            w[(d - LO) as usize] = Mat::identity(1);
        }
        DiagramModule::from_top(shape, top, &vec![vec![(d, vec![q(1)])]; n]).unwrap()
    }

    #[test]
    fn so3_sphere_self_ext() {
        for n in [1, 2, 3] {
            let s = sphere(Group::SO3, Level::G, n, 0);
            let e = ext(&s, &s, -8, 12).unwrap();
            assert_eq!(e.dim(0, 0), 1);
            for t in -8..=12 {
                if t != 0 {
                    assert_eq!(e.dim(0, t), 0);
                }
                let want = if t > 0 && t % 4 == 0 { n } else { 0 };
                assert_eq!(e.dim(1, t), want, "N={n} t={t}");
            }
        }
    }

    #[test]
    fn circle_sphere_self_ext() {
        let s = sphere(Group::Circle, Level::T, 2, 0);
        let e = ext(&s, &s, -6, 10).unwrap();
        assert_eq!(e.dim(0, 0), 1);
        for t in [2, 4, 6, 8, 10] {
            assert_eq!(e.dim(1, t), 2);
        }
        assert_eq!(e.dim(1, 3), 0);
    }

    /// `Ext⁰ = Hom` computed by the naive solver.
    #[test]
    fn ext_zero_is_hom() {
        let shape = Shape::new(Group::SO3, Level::N, 2, LO, HI).unwrap();
        let t = NormalForm::parse(shape.sub_ring(1), Some(-1), "T2^2, T4^1-").unwrap().to_windowed(LO, HI);
        let tm = DiagramModule::concentrated(shape, 1, t).unwrap();
        let s = sphere(Group::SO3, Level::N, 2, 0);
        let y = DiagramModule::direct_sum(&[&s, &tm]).unwrap();
        for x in [&s, &tm, &y] {
            let e = ext(x, &y, -6, 6).unwrap();
            for t in -6..=6 {
                assert_eq!(e.dim(0, t), hom_dim(x, &y, t), "t={t}");
            }
        }
    }
}
