//! Stable Koszul (Čech) complex of a polynomial ring on monomial generators,
//! computed one multidegree at a time.

use super::poly::Poly;
use super::ring::GradedRing;
use crate::error::{invalid, unsupported, Result};
use crate::linalg::{q, Mat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCohomology {
    pub rank: usize,
    pub generators: usize,
    /// Internal degree ↦ `dim Hⁱ` for `i = 0..=generators`.
    pub dims: BTreeMap<i32, Vec<usize>>,
}

/// `Kᵖ = ⊕_{|τ|=p} R[1/∏_{g∈τ} g]`. In multidegree `a` the summand for `τ`
/// is one-dimensional iff `aᵢ ≥ 0` for every variable not dividing `∏τ`.
/// Multidegrees range over `[−bound, bound]^rank`.
pub fn stable_koszul(ring: &GradedRing, gens: &[Poly], bound: i32) -> Result<KoszulCohomology> {
    if gens.is_empty() {
        return invalid("stable Koszul complex needs at least one generator");
    }
    let r = ring.rank;
    let mut supports = Vec::new();
    for g in gens {
        if g.terms.len() != 1 {
            return unsupported(format!("non-monomial generator {g}"));
        }
        let e = g.terms.keys().next().unwrap();
        if e.iter().all(|&k| k == 0) {
            return invalid("generators must have positive codegree");
        }
        supports.push((0..r).filter(|&i| e[i] > 0).collect::<Vec<_>>());
    }
    let n = gens.len();
    let subsets: Vec<Vec<u32>> = (0..=n)
        .map(|p| (0u32..(1 << n)).filter(|m| m.count_ones() as usize == p).collect())
        .collect();
    let mut dims: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    let mut multi = vec![-bound; r];
    loop {
        let present = |mask: u32| -> bool {
            (0..r).all(|i| {
                multi[i] >= 0 || (0..n).any(|j| mask & (1 << j) != 0 && supports[j].contains(&i))
            })
        };
        let basis: Vec<Vec<u32>> = subsets.iter().map(|s| s.iter().copied().filter(|&m| present(m)).collect()).collect();
        // d: Kᵖ → Kᵖ⁺¹, τ ↦ Σ_{j∉τ} ± (τ ∪ j), sign by position.
        let mut ranks = vec![0usize; n + 1];
        for p in 0..n {
            let mut m = Mat::zeros(basis[p + 1].len(), basis[p].len());
            for (c, &tau) in basis[p].iter().enumerate() {
                for j in 0..n {
                    if tau & (1 << j) != 0 {
                        continue;
                    }
                    let up = tau | (1 << j);
                    if let Some(rw) = basis[p + 1].iter().position(|&x| x == up) {
                        let before = (tau & ((1 << j) - 1)).count_ones();
                        m[(rw, c)] = q(if before % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            ranks[p] = m.rank();
        }
        let h: Vec<usize> = (0..=n)
            .map(|p| basis[p].len() - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 })
            .collect();
        if h.iter().any(|&x| x > 0) {
            let deg = -2 * multi.iter().sum::<i32>();
            let entry = dims.entry(deg).or_insert_with(|| vec![0; n + 1]);
            for p in 0..=n {
                entry[p] += h[p];
            }
        }
        // Next multidegree.
        let mut i = 0;
        loop {
            if i == r {
                return Ok(KoszulCohomology { rank: r, generators: n, dims });
            }
            multi[i] += 1;
            if multi[i] <= bound {
                break;
            }
            multi[i] = -bound;
            i += 1;
        }
    }
}
