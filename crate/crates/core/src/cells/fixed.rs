//! `(G ×_T A)^L = ∐ᵢ W_G(L)γᵢ ×_{T/Lᵢ} A^{Lᵢ}`: one piece per Weyl conjugate
//! `Lᵢ` of `L` inside `T`.

use crate::lattice::SubgroupPoset;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPiece {
    /// Weyl element `γᵢ` (index into the toral Weyl group).
    pub coset: usize,
    /// Poset index of `Lᵢ = L·γᵢ`.
    pub sub: usize,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointDecomposition {
    pub l: usize,
    /// Order of the stabilizer of `L` in the toral Weyl group.
    pub stabilizer: usize,
    pub pieces: Vec<FixedPiece>,
}

pub fn fixed_point_decomposition(poset: &SubgroupPoset, l: usize) -> FixedPointDecomposition {
    let mut pieces: Vec<FixedPiece> = Vec::new();
    for w in 0..poset.weyl.order() {
        let li = poset.act(l, w);
        if pieces.iter().any(|p| p.sub == li) {
            continue;
        }
        let lab = poset.label(li);
        let description = format!("W_G({})γ{} ×_(T/{lab}) A^{lab}", poset.label(l), pieces.len());
        pieces.push(FixedPiece { coset: w, sub: li, description });
    }
    FixedPointDecomposition { l, stabilizer: poset.stabilizer(l).len(), pieces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_poset, poset::su3_sample, Group, Subgroup, Truncation};

    #[test]
    fn rank_one_has_single_pieces() {
        for g in [Group::SO3, Group::O2, Group::Circle] {
            let p = build_poset(g, &Truncation::rank_one(6)).unwrap();
            for l in 0..p.len() {
                let d = fixed_point_decomposition(&p, l);
                assert_eq!(d.pieces.len(), 1);
                assert_eq!(d.pieces[0].sub, l);
                assert_eq!(d.stabilizer, p.weyl.order());
            }
        }
    }

    #[test]
    fn orbit_stabilizer_counts() {
        let p = build_poset(Group::SU3, &su3_sample()).unwrap();
        let mut saw_two = false;
        for l in 0..p.len() {
            let d = fixed_point_decomposition(&p, l);
            assert_eq!(d.pieces.len() * d.stabilizer, p.weyl.order());
            saw_two |= d.pieces.len() == 2;
        }
        assert!(saw_two);
        let one = p.index_of(&Subgroup::trivial(2)).unwrap();
        assert_eq!(fixed_point_decomposition(&p, one).pieces.len(), 1);
    }
}
