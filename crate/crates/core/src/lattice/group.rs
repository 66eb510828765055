use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Supported compact Lie groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    Circle,
    Torus2,
    O2,
    SO3,
    SU3,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::Circle, Group::Torus2, Group::O2, Group::SO3, Group::SU3];

    pub fn rank(self) -> usize {
        match self {
            Group::Circle | Group::O2 | Group::SO3 => 1,
            Group::Torus2 | Group::SU3 => 2,
        }
    }

    /// `(dim G, dim T)`.
    pub fn dims(self) -> (usize, usize) {
        match self {
            Group::Circle => (1, 1),
            Group::O2 => (1, 1),
            Group::SO3 => (3, 1),
            Group::Torus2 => (2, 2),
            Group::SU3 => (8, 2),
        }
    }

    /// Whether module categories are available (rank 1 only).
    pub fn has_module_category(self) -> bool {
        self.rank() == 1
    }

    /// Toral Weyl group acting on the character lattice.
    pub fn weyl(self) -> FiniteGroup {
        match self {
            Group::Circle | Group::Torus2 => FiniteGroup::trivial(self.rank()),
            Group::O2 | Group::SO3 => FiniteGroup::from_matrices(vec![vec![vec![1]], vec![vec![-1]]]),
            Group::SU3 => su3_weyl(),
        }
    }

    /// Positive roots as characters of the maximal torus.
    pub fn positive_roots(self) -> Vec<Vec<i64>> {
        match self {
            Group::SO3 => vec![vec![1]],
            // Characters of T ⊂ SU(3) in the basis ē₁, ē₂ with ē₃ = −ē₁ − ē₂.
            Group::SU3 => vec![vec![1, -1], vec![2, 1], vec![1, 2]],
            _ => vec![],
        }
    }

    /// Display name.
    pub fn name(self) -> &'static str {
        match self {
            Group::Circle => "Circle",
            Group::Torus2 => "Torus2",
            Group::O2 => "O2",
            Group::SO3 => "SO3",
            Group::SU3 => "SU3",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circle" | "t" | "so2" => Ok(Group::Circle),
            "torus2" | "t2" => Ok(Group::Torus2),
            "o2" => Ok(Group::O2),
            "so3" => Ok(Group::SO3),
            "su3" => Ok(Group::SU3),
            _ => invalid(format!("unknown group '{s}'")),
        }
    }
}

/// Integer matrix as nested rows.
pub type IMat = Vec<Vec<i64>>;

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

pub fn imat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn imat_identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Determinant of a 1×1 or 2×2 integer matrix.
pub fn imat_det(a: &IMat) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => panic!("determinant only implemented for rank ≤ 2"),
    }
}

/// A finite group of integer matrices, closed under products, with element 0
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub rank: usize,
    pub elements: Vec<IMat>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn trivial(rank: usize) -> Self {
        FiniteGroup { rank, elements: vec![imat_identity(rank)], table: vec![vec![0]] }
    }

    /// Close a generating set under multiplication.
    pub fn from_matrices(gens: Vec<IMat>) -> Self {
        let rank = gens[0].len();
        let mut elements = vec![imat_identity(rank)];
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in &gens {
                let p = imat_mul(&elements[i], g);
                if !elements.contains(&p) {
                    elements.push(p);
                    frontier.push(elements.len() - 1);
                }
            }
        }
        let table = (0..elements.len())
            .map(|i| {
                (0..elements.len())
                    .map(|j| {
                        let p = imat_mul(&elements[i], &elements[j]);
                        elements.iter().position(|e| *e == p).expect("closed under products")
                    })
                    .collect()
            })
            .collect();
        FiniteGroup { rank, elements, table }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group inverse")
    }

    pub fn det(&self, a: usize) -> i64 {
        imat_det(&self.elements[a])
    }

    pub fn index_of(&self, m: &IMat) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    /// Right action on characters: `χ·w = M_w⁻¹ χ`.
    pub fn act_right(&self, chi: &[i64], w: usize) -> Vec<i64> {
        imat_vec(&self.elements[self.inv(w)], chi)
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for &g in gens {
                let p = self.mul(i, g);
                if !out.contains(&p) {
                    out.push(p);
                    frontier.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_normal_subgroup(&self, h: &[usize], g: &[usize]) -> bool {
        g.iter().all(|&x| {
            let xi = self.inv(x);
            h.iter().all(|&y| h.contains(&self.mul(self.mul(x, y), xi)))
        })
    }

    /// Reflection in the root `alpha` (an element of order 2 fixing a
    /// hyperplane and negating `alpha`).
    pub fn reflection_for(&self, alpha: &[i64]) -> Option<usize> {
        (0..self.order()).find(|&w| {
            let m = &self.elements[w];
            let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
            w != 0 && self.mul(w, w) == 0 && imat_vec(m, alpha) == neg && imat_det(m) == -1
        })
    }
}

fn su3_weyl() -> FiniteGroup {
    // Transposition (12) swaps ē₁, ē₂; (23) sends ē₁ ↦ ē₁, ē₂ ↦ ē₃ = −ē₁ − ē₂.
    // Columns are images of basis vectors.
    let s12 = vec![vec![0, 1], vec![1, 0]];
    let s23 = vec![vec![1, -1], vec![0, -1]];
    FiniteGroup::from_matrices(vec![s12, s23])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_orders() {
        assert_eq!(Group::Circle.weyl().order(), 1);
        assert_eq!(Group::SO3.weyl().order(), 2);
        assert_eq!(Group::SU3.weyl().order(), 6);
    }

    #[test]
    fn su3_roots_have_reflections() {
        let w = Group::SU3.weyl();
        for a in Group::SU3.positive_roots() {
            assert!(w.reflection_for(&a).is_some(), "root {a:?}");
        }
        let dets: i64 = (0..6).map(|g| w.det(g)).sum();
        assert_eq!(dets, 0);
    }

    #[test]
    fn right_action_is_an_action() {
        let w = Group::SU3.weyl();
        let chi = vec![2, -1];
        for a in 0..6 {
            for b in 0..6 {
                let lhs = w.act_right(&w.act_right(&chi, a), b);
                let rhs = w.act_right(&chi, w.mul(a, b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("so3".parse::<Group>().unwrap(), Group::SO3);
        assert!("G2".parse::<Group>().is_err());
    }
}
