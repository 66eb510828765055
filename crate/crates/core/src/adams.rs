//! Adams `E₂` pages `Ext^{s,t}(π^𝒜X, π^𝒜Y)` and collapse bookkeeping. No
//! differentials are computed.

use crate::cells::{pi_a, CellSpec};
use crate::diagram::module::Shape;
use crate::error::Result;
use crate::homalg::ext::{ext, ExtEntry, ExtTable};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Page {
    pub table: ExtTable,
    pub rank: usize,
    pub collapse_at: usize,
    /// `t − s ↦ Σ_s dim E₂^{s,t}`.
    pub totals: BTreeMap<i32, usize>,
}

impl E2Page {
    pub fn from_table(table: ExtTable, rank: usize) -> E2Page {
        let mut totals = BTreeMap::new();
        for e in &table.entries {
            *totals.entry(e.t - e.s as i32).or_insert(0) += e.dim;
        }
        E2Page { table, rank, collapse_at: rank + 1, totals }
    }

    pub fn total(&self, stem: i32) -> usize {
        self.totals.get(&stem).copied().unwrap_or(0)
    }

    pub fn lines(&self) -> BTreeSet<usize> {
        self.table.entries.iter().map(|e| e.s).collect()
    }

    pub fn max_s(&self) -> usize {
        self.lines().into_iter().max().unwrap_or(0)
    }
}

/// `E₂` for the cells `x`, `y` on `shape`, for internal degrees `t ∈ [t_lo, t_hi]`.
pub fn e2_page(x: &CellSpec, y: &CellSpec, shape: Shape, t_lo: i32, t_hi: i32) -> Result<E2Page> {
    let mx = pi_a(x, shape)?;
    let my = pi_a(y, shape)?;
    let table = ext(&mx, &my, t_lo, t_hi)?;
    Ok(E2Page::from_table(table, shape.group.rank()))
}

/// Default `t` range for a window: clear of the bottom sixth, where
/// truncation makes every bottom class look free.
pub fn default_t_range(lo: i32, hi: i32) -> (i32, i32) {
    (lo + (hi - lo) / 6, hi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    /// `E₂ = E_∞` certified by sparsity.
    pub converged: bool,
    /// Totals along `t − s`; final when `converged`, `E₂` totals otherwise.
    pub totals: BTreeMap<i32, usize>,
    /// Stems with a possible differential or extension ambiguity.
    pub ambiguous: Vec<i32>,
}

/// A differential `d_r: E^{s,t} → E^{s+r,t+r−1}` with `r ≥ 2` needs both
/// ends nonzero; stems where that happens are flagged.
pub fn degeneracy_report(page: &E2Page) -> DegeneracyReport {
    let nonzero: BTreeSet<(usize, i32)> = page.table.entries.iter().filter(|e| e.dim > 0).map(|e| (e.s, e.t)).collect();
    let top = page.max_s();
    let mut ambiguous = BTreeSet::new();
    for &(s, t) in &nonzero {
        for r in 2..=top.saturating_sub(s) {
            let tgt = (s + r, t + r as i32 - 1);
            if nonzero.contains(&tgt) {
                ambiguous.insert(t - s as i32);
                ambiguous.insert(tgt.1 - tgt.0 as i32);
            }
        }
    }
    DegeneracyReport { converged: ambiguous.is_empty(), totals: page.totals.clone(), ambiguous: ambiguous.into_iter().collect() }
}

/// Synthetic table from `(s, t, dim)` triples.
pub fn table_of(t_lo: i32, t_hi: i32, entries: &[(usize, i32, usize)]) -> ExtTable {
    let mut e: Vec<ExtEntry> = entries.iter().map(|&(s, t, dim)| ExtEntry { s, t, dim }).collect();
    e.sort_by_key(|x| (x.s, x.t));
    ExtTable { t_lo, t_hi, entries: e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::module::Level;
    use crate::lattice::Group;

    fn shape(g: Group, n: usize) -> Shape {
        Shape::new(g, Level::G, n, -16, 8).unwrap()
    }

    #[test]
    fn idem_t_is_concentrated_at_zero() {
        let c: CellSpec = "idem:T".parse().unwrap();
        let p = e2_page(&c, &c, shape(Group::SO3, 3), -4, 4).unwrap();
        assert_eq!(p.lines(), BTreeSet::from([0]));
        assert_eq!(p.total(0), 1);
        let r = degeneracy_report(&p);
        assert!(r.converged);
    }

    #[test]
    fn sphere_page_rank_one() {
        let c: CellSpec = "sphere".parse().unwrap();
        let p = e2_page(&c, &c, shape(Group::SO3, 4), -6, 6).unwrap();
        assert_eq!(p.total(0), 1);
        assert!(p.max_s() <= 1);
        assert_eq!(p.collapse_at, 2);
        assert!(degeneracy_report(&p).converged);
    }

    #[test]
    fn bilinear_and_shift() {
        let s = shape(Group::Circle, 2);
        let y: CellSpec = "sphere".parse().unwrap();
        let a: CellSpec = "sphere".parse().unwrap();
        let b: CellSpec = "idem:C2".parse().unwrap();
        let pa = e2_page(&a, &y, s, -4, 4).unwrap();
        let pb = e2_page(&b, &y, s, -4, 4).unwrap();
        let pab = e2_page(&"sphere+idem:C2".parse().unwrap(), &y, s, -4, 4).unwrap();
        for stem in -6..=6 {
            assert_eq!(pab.total(stem), pa.total(stem) + pb.total(stem));
        }
        let ps = e2_page(&a.shifted(2), &y, s, -6, 2).unwrap();
        for st in -4..=2 {
            for sl in 0..2 {
                assert_eq!(ps.table.dim(sl, st - 2), pa.table.dim(sl, st), "s={sl} t={st}");
            }
        }
    }

    #[test]
    fn rank_two_ambiguity_flags() {
        let p = E2Page::from_table(table_of(0, 6, &[(0, 2, 1), (2, 3, 1), (1, 5, 2)]), 2);
        let r = degeneracy_report(&p);
        assert!(!r.converged);
        assert_eq!(r.ambiguous, vec![1, 2]);
        let q = E2Page::from_table(table_of(0, 6, &[(0, 2, 1), (1, 4, 1)]), 1);
        let r = degeneracy_report(&q);
        assert!(r.converged);
        assert_eq!(r.totals, BTreeMap::from([(2, 1), (3, 1)]));
    }
}
