//! Component structures `σ ↦ W_σ^e ≤ W_σ` on a Weyl poset, the decreasing
//! and normality tests, and the discrete residual.

use super::group::Group;
use super::poset::{Flag, SubgroupPoset};
use super::transport::WPoset;
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Which component structure to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// Toral Weyl groups of identity components of Weyl groups.
    Lie,
    Connected,
    Discrete,
}

#[derive(Clone, Debug)]
pub struct ComponentStructure {
    pub poset: WPoset,
    /// Isotropy groups `W_σ`.
    pub stab: Vec<Vec<usize>>,
    /// `W_σ^e`, sorted element indices.
    pub we: Vec<Vec<usize>>,
}

/// `W^e_G K`: generated by reflections in the roots that vanish on `K`.
pub fn lie_we_subgroup(p: &SubgroupPoset, k: usize) -> Vec<usize> {
    let w = &p.weyl;
    let refl: Vec<usize> = p
        .group
        .positive_roots()
        .iter()
        .filter(|a| p.subgroups[k].kills(a))
        .map(|a| w.reflection_for(a).expect("root reflection"))
        .collect();
    w.generated(&refl)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

impl ComponentStructure {
    /// Structure on the subgroup poset.
    pub fn on_subgroups(p: &SubgroupPoset, kind: StructureKind) -> Self {
        let wp = WPoset::of_subgroups(p);
        let stab: Vec<Vec<usize>> = (0..wp.len()).map(|a| wp.stabilizer(a)).collect();
        let we = (0..wp.len())
            .map(|k| match kind {
                StructureKind::Lie => lie_we_subgroup(p, k),
                StructureKind::Connected => stab[k].clone(),
                StructureKind::Discrete => vec![0],
            })
            .collect();
        ComponentStructure { poset: wp, stab, we }
    }

    /// Structure on flags: `W^e_F = ∩ W^e_{K_i}`.
    pub fn on_flags(p: &SubgroupPoset, max_len: usize, kind: StructureKind) -> (Self, Vec<Flag>) {
        let (wp, flags) = WPoset::of_flags(p, max_len);
        let stab: Vec<Vec<usize>> = (0..wp.len()).map(|a| wp.stabilizer(a)).collect();
        let we = flags
            .iter()
            .enumerate()
            .map(|(i, f)| match kind {
                StructureKind::Lie => {
                    f.0.iter().fold((0..p.weyl.order()).collect::<Vec<_>>(), |acc, &k| {
                        intersect(&acc, &lie_we_subgroup(p, k))
                    })
                }
                StructureKind::Connected => stab[i].clone(),
                StructureKind::Discrete => vec![0],
            })
            .collect();
        (ComponentStructure { poset: wp, stab, we }, flags)
    }

    pub fn len(&self) -> usize {
        self.we.len()
    }

    pub fn is_empty(&self) -> bool {
        self.we.is_empty()
    }

    /// Residual group `W_σ/W_σ^e` as a list of cosets.
    pub fn residual(&self, a: usize) -> Vec<Vec<usize>> {
        let g = &self.poset.group;
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for &x in &self.stab[a] {
            let mut c: Vec<usize> = self.we[a].iter().map(|&e| g.mul(x, e)).collect();
            c.sort_unstable();
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        cosets
    }

    /// Every `W^e_σ` lies in the isotropy group and the assignment is
    /// compatible with the action: `W^e_{σ^w} = w⁻¹ W^e_σ w`.
    pub fn is_sub_orbifold(&self) -> bool {
        let g = &self.poset.group;
        (0..self.len()).all(|a| subset(&self.we[a], &self.stab[a]))
            && (0..g.order()).all(|w| {
                let wi = g.inv(w);
                (0..self.len()).all(|a| {
                    let b = self.poset.act[w][a];
                    let mut conj: Vec<usize> = self.we[a].iter().map(|&x| g.mul(g.mul(wi, x), w)).collect();
                    conj.sort_unstable();
                    conj == self.we[b]
                })
            })
    }

    /// Decreasing: along every morphism `σ → τ` of the poset,
    /// `W^e_τ ⊆ W^e_σ`. Returns the first offending pair if any.
    pub fn decreasing_witness(&self) -> Option<(usize, usize)> {
        for s in 0..self.len() {
            for t in 0..self.len() {
                if s != t && self.poset.arrow[s][t] && !subset(&self.we[t], &self.we[s]) {
                    return Some((s, t));
                }
            }
        }
        None
    }

    pub fn is_decreasing(&self) -> bool {
        self.decreasing_witness().is_none()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.poset.group;
        (0..self.len()).all(|a| g.is_normal_subgroup(&self.we[a], &self.stab[a]))
    }

    pub fn check_flags(&self) -> (bool, bool) {
        (self.is_decreasing(), self.is_normal())
    }

    /// Class of `v` for a morphism `σ → τ`: precomposition by automorphisms
    /// in `W^e_σ` and postcomposition by `W^e_{τ^v}`.
    fn residual_class(&self, s: usize, t: usize, v: usize) -> Vec<usize> {
        let g = &self.poset.group;
        let tv = self.poset.act[v][t];
        let mut out = BTreeSet::new();
        for &a in &self.we[s] {
            for &b in &self.we[tv] {
                out.insert(g.mul(g.mul(a, v), b));
            }
        }
        out.into_iter().collect()
    }

    /// Morphisms of the discrete residual: `(σ, τ, [v])`.
    pub fn residual_morphisms(&self) -> Result<Vec<ResidualMorphism>> {
        if !self.is_normal() {
            return Err(Error::Invariant("discrete residual needs a normal component structure".into()));
        }
        let mut out = Vec::new();
        for s in 0..self.len() {
            for t in 0..self.len() {
                if !self.poset.arrow[s][t] {
                    continue;
                }
                let mut seen: Vec<Vec<usize>> = Vec::new();
                for v in 0..self.poset.group.order() {
                    let c = self.residual_class(s, t, v);
                    if !seen.contains(&c) {
                        seen.push(c.clone());
                        out.push(ResidualMorphism { source: s, inter: t, class: c });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Composition in the residual is independent of representatives.
    pub fn residual_composition_well_defined(&self) -> Result<bool> {
        let ms = self.residual_morphisms()?;
        let wp = &self.poset;
        for a in &ms {
            let a_target = wp.act[a.class[0]][a.inter];
            for b in ms.iter().filter(|b| b.source == a_target) {
                let mut results: Vec<(usize, Vec<usize>)> = Vec::new();
                for &v in &a.class {
                    for &w in &b.class {
                        let m1 = super::transport::TransportMorphism {
                            source: a.source,
                            inter: a.inter,
                            v,
                            target: wp.act[v][a.inter],
                        };
                        let m2 = super::transport::TransportMorphism {
                            source: b.source,
                            inter: b.inter,
                            v: w,
                            target: wp.act[w][b.inter],
                        };
                        let c = wp.compose(&m1, &m2)?;
                        let class = self.residual_class(c.source, c.inter, c.v);
                        if !results.contains(&(c.inter, class.clone())) {
                            results.push((c.inter, class));
                        }
                    }
                }
                if results.len() != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualMorphism {
    pub source: usize,
    pub inter: usize,
    pub class: Vec<usize>,
}

/// Independent catalog of `|𝔚(W_G K)|` for rank-1 groups, from the
/// normalizer structure: for SO(3), `W_G(C₁) = SO(3)`, `W_G(C_n) = O(2)/C_n`
/// and `W_G(T) = 𝔚G`, each with toral Weyl group of order 2.
pub fn rank_one_weyl_of_weyl_order(group: Group, _k: &super::subgroup::Subgroup) -> Option<usize> {
    match group {
        Group::Circle => Some(1),
        Group::O2 | Group::SO3 => Some(2),
        _ => None,
    }
}
