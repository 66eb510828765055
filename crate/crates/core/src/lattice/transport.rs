//! Posets with a right action of a finite group and their transport
//! categories. Morphisms are pairs `(i, v)` with `i: σ → τ` and `v ∈ W`,
//! running from `σ` to `τ^v`, composed by `(i,v)(j,w) = (i j^{v⁻¹}, vw)`.

use super::group::FiniteGroup;
use super::poset::{Flag, SubgroupPoset};
use crate::error::{Error, Result};

/// Finite poset (as a category with at most one arrow between objects) with
/// a right action of `group`.
#[derive(Clone, Debug)]
pub struct WPoset {
    pub labels: Vec<String>,
    /// `arrow[a][b]`: there is a morphism `a → b`.
    pub arrow: Vec<Vec<bool>>,
    /// `act[w][a] = a^w`.
    pub act: Vec<Vec<usize>>,
    pub group: FiniteGroup,
}

impl WPoset {
    /// Subgroups with morphisms `K → L` for cotoral `K ⊇ L`.
    pub fn of_subgroups(p: &SubgroupPoset) -> Self {
        let n = p.len();
        let arrow = (0..n).map(|a| (0..n).map(|b| p.cotoral_leq(a, b)).collect()).collect();
        WPoset {
            labels: (0..n).map(|i| p.label(i)).collect(),
            arrow,
            act: p.on_subgroups.clone(),
            group: p.weyl.clone(),
        }
    }

    /// Flags of length at most `max_len`, with morphisms `F → E` when `F` is
    /// a subflag of `E`.
    pub fn of_flags(p: &SubgroupPoset, max_len: usize) -> (Self, Vec<Flag>) {
        let flags = p.enumerate_flags(max_len);
        let n = flags.len();
        let arrow = (0..n).map(|a| (0..n).map(|b| flags[a].is_subflag_of(&flags[b])).collect()).collect();
        let act = (0..p.weyl.order())
            .map(|w| {
                flags
                    .iter()
                    .map(|f| {
                        let g = p.act_flag(f, w);
                        flags.iter().position(|x| *x == g).expect("flags are Weyl-closed")
                    })
                    .collect()
            })
            .collect();
        let labels = flags.iter().map(|f| p.flag_label(f)).collect();
        (WPoset { labels, arrow, act, group: p.weyl.clone() }, flags)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn stabilizer(&self, a: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&w| self.act[w][a] == a).collect()
    }

    /// Every morphism of the transport category.
    pub fn morphisms(&self) -> Vec<TransportMorphism> {
        let mut out = Vec::new();
        for s in 0..self.len() {
            for t in 0..self.len() {
                if self.arrow[s][t] {
                    for v in 0..self.group.order() {
                        out.push(TransportMorphism { source: s, inter: t, v, target: self.act[v][t] });
                    }
                }
            }
        }
        out
    }

    pub fn identity(&self, a: usize) -> TransportMorphism {
        TransportMorphism { source: a, inter: a, v: 0, target: a }
    }

    /// Composite `m1` then `m2`.
    pub fn compose(&self, m1: &TransportMorphism, m2: &TransportMorphism) -> Result<TransportMorphism> {
        if m1.target != m2.source {
            return Err(Error::Mismatch(format!(
                "cannot compose: target {} is not source {}",
                self.labels[m1.target], self.labels[m2.source]
            )));
        }
        // j: τ^v → φ, so j^{v⁻¹}: τ → φ^{v⁻¹}.
        let vinv = self.group.inv(m1.v);
        let inter = self.act[vinv][m2.inter];
        if !self.arrow[m1.source][inter] {
            return Err(Error::Invariant("composite inclusion does not exist".into()));
        }
        let v = self.group.mul(m1.v, m2.v);
        Ok(TransportMorphism { source: m1.source, inter, v, target: self.act[v][inter] })
    }

    /// Identity and associativity over all composable pairs and triples.
    pub fn check_laws(&self) -> LawReport {
        let ms = self.morphisms();
        let mut report = LawReport { morphisms: ms.len(), ..Default::default() };
        for m in &ms {
            let l = self.compose(&self.identity(m.source), m).ok();
            let r = self.compose(m, &self.identity(m.target)).ok();
            if l.as_ref() != Some(m) || r.as_ref() != Some(m) {
                report.identity_failures += 1;
            }
        }
        for a in &ms {
            for b in ms.iter().filter(|b| b.source == a.target) {
                let ab = self.compose(a, b).expect("composable");
                report.pairs += 1;
                for c in ms.iter().filter(|c| c.source == b.target) {
                    let left = self.compose(&ab, c).expect("composable");
                    let right = self.compose(a, &self.compose(b, c).expect("composable")).expect("composable");
                    report.triples += 1;
                    if left != right {
                        report.associativity_failures += 1;
                    }
                }
            }
        }
        report
    }
}

/// The morphism `(i: source → inter, v)` with codomain `inter^v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransportMorphism {
    pub source: usize,
    pub inter: usize,
    pub v: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub morphisms: usize,
    pub pairs: usize,
    pub triples: usize,
    pub identity_failures: usize,
    pub associativity_failures: usize,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.identity_failures == 0 && self.associativity_failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::group::Group;
    use crate::lattice::poset::{build_poset, su3_sample, Truncation};

    #[test]
    fn identity_element_and_group_part() {
        let p = build_poset(Group::SO3, &Truncation::rank_one(2)).unwrap();
        let (wp, _) = WPoset::of_flags(&p, 1);
        let m = wp.morphisms().into_iter().find(|m| m.source != m.inter && m.v == 0).unwrap();
        let tail = TransportMorphism { source: m.target, inter: m.target, v: 1, target: wp.act[1][m.target] };
        let c = wp.compose(&m, &tail).unwrap();
        assert_eq!((c.source, c.inter, c.v), (m.source, m.inter, 1));
        let a = wp.identity(0);
        let v = TransportMorphism { v: 1, ..a };
        assert_eq!(wp.compose(&v, &v).unwrap().v, 0);
    }

    #[test]
    fn laws_hold_exhaustively() {
        let p = build_poset(Group::SO3, &Truncation::rank_one(2)).unwrap();
        let (wp, _) = WPoset::of_flags(&p, 1);
        let r = wp.check_laws();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.morphisms, 18);
        let p = build_poset(Group::SU3, &su3_sample()).unwrap();
        let r = WPoset::of_subgroups(&p).check_laws();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn mismatched_endpoints_error() {
        let p = build_poset(Group::SO3, &Truncation::rank_one(2)).unwrap();
        let wp = WPoset::of_subgroups(&p);
        assert!(wp.compose(&wp.identity(0), &wp.identity(1)).is_err());
    }
}
