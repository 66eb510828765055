use super::group::{FiniteGroup, Group, IMat};
use super::subgroup::Subgroup;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Truncation parameters: rank-1 posets use `C_1..C_n` plus `T`; rank-2
/// posets use the listed subgroups plus `T`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Truncation {
    pub n: u64,
    pub extra: Vec<Subgroup>,
}

impl Truncation {
    pub fn rank_one(n: u64) -> Self {
        Truncation { n, extra: vec![] }
    }

    pub fn listed(extra: Vec<Subgroup>) -> Self {
        Truncation { n: 0, extra }
    }
}

/// A strictly decreasing cotoral chain `K₀ ⊃ K₁ ⊃ ⋯ ⊃ K_s`, as indices into
/// the poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag(pub Vec<usize>);

impl Flag {
    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Number of strict inclusions.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    /// Whether the flag is a single subgroup.
    pub fn is_point(&self) -> bool {
        self.0.len() == 1
    }

    /// Whether every term of `self` occurs in `other`.
    pub fn is_subflag_of(&self, other: &Flag) -> bool {
        self.0.iter().all(|k| other.0.contains(k))
    }
}

/// Finite Weyl-closed sub-poset of the closed subgroups of the maximal torus,
/// ordered by cotoral inclusion.
#[derive(Clone, Debug)]
pub struct SubgroupPoset {
    pub group: Group,
    pub weyl: FiniteGroup,
    pub subgroups: Vec<Subgroup>,
    /// Pairs `(K, L)` with `K ⊇ L` cotorally, reflexive pairs included.
    pub order: Vec<(usize, usize)>,
    /// `on_subgroups[w][i]` is the index of `subgroups[i]·w`.
    pub on_subgroups: Vec<Vec<usize>>,
    pub truncation: Truncation,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub group: String,
    pub subgroups: Vec<String>,
    pub order: Vec<(String, String)>,
    pub weyl_generators: Vec<IMat>,
}

/// Build the truncated subgroup poset.
pub fn build_poset(group: Group, trunc: &Truncation) -> Result<SubgroupPoset> {
    let rank = group.rank();
    let weyl = group.weyl();
    let mut subgroups: Vec<Subgroup> = if rank == 1 {
        if trunc.n < 1 {
            return invalid("truncation N must be at least 1");
        }
        (1..=trunc.n).map(Subgroup::cyclic).collect()
    } else {
        trunc.extra.clone()
    };
    for s in &subgroups {
        if s.rank != rank {
            return invalid(format!("subgroup {s} has rank {} but {group} has rank {rank}", s.rank));
        }
    }
    subgroups.push(Subgroup::torus(rank));
    subgroups.sort();
    subgroups.dedup();
    let mut on_subgroups = Vec::with_capacity(weyl.order());
    for w in 0..weyl.order() {
        let mut perm = Vec::with_capacity(subgroups.len());
        for s in &subgroups {
            let img = s.act(&weyl, w);
            match subgroups.iter().position(|x| *x == img) {
                Some(j) => perm.push(j),
                None => return invalid(format!("subgroup list is not Weyl-closed: {s}·w = {img} missing")),
            }
        }
        on_subgroups.push(perm);
    }
    let mut order = Vec::new();
    for (i, k) in subgroups.iter().enumerate() {
        for (j, l) in subgroups.iter().enumerate() {
            if k.cotoral_contains(l) {
                order.push((i, j));
            }
        }
    }
    Ok(SubgroupPoset { group, weyl, subgroups, order, on_subgroups, truncation: trunc.clone() })
}

impl SubgroupPoset {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, k: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|s| s == k)
    }

    pub fn torus_index(&self) -> usize {
        self.subgroups.iter().position(|s| s.is_torus()).expect("torus is a member")
    }

    /// `K ⊇ L` cotorally.
    pub fn cotoral_leq(&self, k: usize, l: usize) -> bool {
        self.order.contains(&(k, l))
    }

    pub fn act(&self, i: usize, w: usize) -> usize {
        self.on_subgroups[w][i]
    }

    pub fn act_flag(&self, f: &Flag, w: usize) -> Flag {
        Flag(f.0.iter().map(|&i| self.act(i, w)).collect())
    }

    /// Isotropy group of a subgroup under the Weyl action.
    pub fn stabilizer(&self, i: usize) -> Vec<usize> {
        (0..self.weyl.order()).filter(|&w| self.act(i, w) == i).collect()
    }

    pub fn flag_stabilizer(&self, f: &Flag) -> Vec<usize> {
        (0..self.weyl.order()).filter(|&w| self.act_flag(f, w) == *f).collect()
    }

    /// All flags with at most `max_len` strict inclusions, shorter flags
    /// first and then lexicographic on poset indices.
    pub fn enumerate_flags(&self, max_len: usize) -> Vec<Flag> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            if chain.len() <= max_len {
                for j in 0..self.len() {
                    if j != last && self.cotoral_leq(last, j) {
                        let mut c = chain.clone();
                        c.push(j);
                        stack.push(c);
                    }
                }
            }
            out.push(Flag(chain));
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    pub fn label(&self, i: usize) -> String {
        self.subgroups[i].label()
    }

    pub fn flag_label(&self, f: &Flag) -> String {
        let parts: Vec<String> = f.0.iter().map(|&i| self.label(i)).collect();
        format!("({})", parts.join("⊃"))
    }

    /// Check that the Weyl action preserves the cotoral order.
    pub fn action_preserves_order(&self) -> bool {
        (0..self.weyl.order()).all(|w| {
            self.order.iter().all(|&(k, l)| self.cotoral_leq(self.act(k, w), self.act(l, w)))
        })
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        let refl = (0..n).all(|i| self.cotoral_leq(i, i));
        let anti = self.order.iter().all(|&(a, b)| a == b || !self.cotoral_leq(b, a));
        let trans = self
            .order
            .iter()
            .all(|&(a, b)| (0..n).all(|c| !self.cotoral_leq(b, c) || self.cotoral_leq(a, c)));
        refl && anti && trans
    }

    pub fn to_json(&self) -> PosetJson {
        let gens: Vec<IMat> = self.weyl.elements.iter().skip(1).cloned().collect();
        PosetJson {
            group: self.group.to_string(),
            subgroups: self.subgroups.iter().map(|s| s.label()).collect(),
            order: self.order.iter().map(|&(a, b)| (self.label(a), self.label(b))).collect(),
            weyl_generators: gens,
        }
    }
}

impl fmt::Display for SubgroupPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.subgroups.iter().map(|s| s.label()).collect();
        write!(f, "{} poset {{{}}}", self.group, labels.join(", "))
    }
}

/// The sample rank-2 poset `T ⊃ S¹ ⊃ 1` inside the 2-torus.
pub fn torus2_sample() -> Truncation {
    Truncation::listed(vec![Subgroup::from_annihilator(2, &[vec![0, 1]]), Subgroup::trivial(2)])
}

/// A Weyl-closed SU(3) sample: the trivial group, the three reflection
/// circles, and a pair of order-7 subgroups swapped by transpositions.
pub fn su3_sample() -> Truncation {
    let mut extra = vec![Subgroup::trivial(2)];
    // The circle fixed by the reflection in α has annihilator spanned by α.
    for a in Group::SU3.positive_roots() {
        extra.push(Subgroup::from_annihilator(2, &[a]));
    }
    let k7 = Subgroup::from_annihilator(2, &[vec![3, 1], vec![-1, 2]]);
    let w = Group::SU3.weyl();
    for g in 0..w.order() {
        extra.push(k7.act(&w, g));
    }
    extra.sort();
    extra.dedup();
    Truncation::listed(extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_three() {
        let p = build_poset(Group::SO3, &Truncation::rank_one(3)).unwrap();
        let labels: Vec<String> = p.subgroups.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["C1", "C2", "C3", "T"]);
        let t = p.torus_index();
        let nontrivial: Vec<_> = p.order.iter().filter(|(a, b)| a != b).collect();
        assert_eq!(nontrivial, vec![&(t, 0), &(t, 1), &(t, 2)]);
        // Every subgroup is characteristic.
        for i in 0..p.len() {
            assert_eq!(p.stabilizer(i), vec![0, 1]);
        }
    }

    #[test]
    fn circle_one() {
        let p = build_poset(Group::Circle, &Truncation::rank_one(1)).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.order.iter().filter(|(a, b)| a != b).count(), 1);
        assert!(p.enumerate_flags(2).iter().all(|f| f.length() <= 1));
    }

    #[test]
    fn flag_listing_order() {
        let p = build_poset(Group::SO3, &Truncation::rank_one(2)).unwrap();
        let flags: Vec<String> = p.enumerate_flags(1).iter().map(|f| p.flag_label(f)).collect();
        assert_eq!(flags, ["(C1)", "(C2)", "(T)", "(T⊃C1)", "(T⊃C2)"]);
    }

    #[test]
    fn torus2_has_length_two_flag() {
        let p = build_poset(Group::Torus2, &torus2_sample()).unwrap();
        let flags: Vec<String> = p.enumerate_flags(2).iter().map(|f| p.flag_label(f)).collect();
        assert!(flags.contains(&"(T⊃K[0,1]⊃1)".to_string()), "{flags:?}");
    }

    #[test]
    fn rejects_non_closed_rank_two_list() {
        let k7 = Subgroup::from_annihilator(2, &[vec![3, 1], vec![-1, 2]]);
        let err = build_poset(Group::SU3, &Truncation::listed(vec![k7])).unwrap_err();
        assert!(matches!(err, crate::error::Error::InvalidConfig(_)));
        assert!(build_poset(Group::SU3, &su3_sample()).is_ok());
    }

    #[test]
    fn orders_are_partial_and_equivariant() {
        for (g, t) in [
            (Group::SO3, Truncation::rank_one(6)),
            (Group::O2, Truncation::rank_one(4)),
            (Group::SU3, su3_sample()),
            (Group::Torus2, torus2_sample()),
        ] {
            let p = build_poset(g, &t).unwrap();
            assert!(p.is_partial_order(), "{g}");
            assert!(p.action_preserves_order(), "{g}");
        }
    }
}
