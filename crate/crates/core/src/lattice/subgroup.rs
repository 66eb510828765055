//! Closed subgroups of a torus, encoded by their annihilating character
//! sublattice `A_K = {χ : χ|_K = 1}` in Hermite normal form.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Row-style Hermite normal form of the lattice spanned by `rows`: pivots
/// positive and strictly increasing, entries above each pivot reduced into
/// `[0, pivot)`, zero rows dropped.
pub fn hnf(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    for col in 0..dim {
        // Euclid on column `col` among remaining rows.
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let f = m[i][col].div_euclid(m[p][col]);
                    let prow = m[p].clone();
                    for (x, y) in m[i].iter_mut().zip(&prow) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(i) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut r = m.remove(i);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        m.retain(|r| r.iter().any(|&x| x != 0));
    }
    // Reduce entries above pivots.
    for k in 0..out.len() {
        let pc = out[k].iter().position(|&x| x != 0).unwrap();
        let pv = out[k][pc];
        let pr = out[k].clone();
        for row in out.iter_mut().take(k) {
            let f = row[pc].div_euclid(pv);
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= f * y;
                }
            }
        }
    }
    out
}

/// Integer coordinates of `v` in an HNF basis, if `v` lies in the lattice.
pub fn coords_in(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for row in basis {
        let pc = row.iter().position(|&x| x != 0).unwrap();
        if rest[pc] % row[pc] != 0 {
            return None;
        }
        let f = rest[pc] / row[pc];
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= f * y;
        }
        out.push(f);
    }
    if rest.iter().all(|&x| x == 0) {
        Some(out)
    } else {
        None
    }
}

fn gcd_all(xs: impl IntoIterator<Item = i64>) -> i64 {
    xs.into_iter().fold(0i64, |a, b| a.gcd(&b))
}

/// gcd of the maximal minors of an integer `k × m` matrix, `k ≤ 2`.
fn minor_gcd(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => gcd_all(m[0].iter().copied()),
        2 => {
            let n = m[0].len();
            let mut g = 0;
            for i in 0..n {
                for j in i + 1..n {
                    g = g.gcd(&(m[0][i] * m[1][j] - m[0][j] * m[1][i]));
                }
            }
            g
        }
        _ => panic!("minor_gcd only implemented for rank ≤ 2"),
    }
}

/// A closed subgroup of the rank-`rank` torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    pub rank: usize,
    /// HNF basis of the annihilating character sublattice.
    pub ann: Vec<Vec<i64>>,
}

impl Subgroup {
    pub fn from_annihilator(rank: usize, rows: &[Vec<i64>]) -> Self {
        Subgroup { rank, ann: hnf(rows, rank) }
    }

    pub fn torus(rank: usize) -> Self {
        Subgroup { rank, ann: vec![] }
    }

    pub fn trivial(rank: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        Subgroup::from_annihilator(rank, &rows)
    }

    /// The cyclic subgroup `C_n` of the circle.
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 1, "cyclic order must be positive");
        Subgroup { rank: 1, ann: vec![vec![n as i64]] }
    }

    pub fn is_torus(&self) -> bool {
        self.ann.is_empty()
    }

    /// Dimension of the subgroup.
    pub fn dim(&self) -> usize {
        self.rank - self.ann.len()
    }

    /// For rank 1, `Some(n)` when the subgroup is `C_n`.
    pub fn cyclic_order(&self) -> Option<u64> {
        if self.rank == 1 && self.ann.len() == 1 {
            Some(self.ann[0][0] as u64)
        } else {
            None
        }
    }

    /// Whether `χ|_K` is trivial.
    pub fn kills(&self, chi: &[i64]) -> bool {
        coords_in(&self.ann, chi).is_some()
    }

    /// `L ≤ K` as subgroups (equivalently `A_K ⊆ A_L`).
    pub fn contains(&self, l: &Subgroup) -> bool {
        self.ann.iter().all(|r| l.kills(r))
    }

    /// Cotoral inclusion `K ⊇ L`: `L ≤ K` with `K/L` a torus, i.e. `A_L/A_K`
    /// torsion-free.
    pub fn cotoral_contains(&self, l: &Subgroup) -> bool {
        if !self.contains(l) {
            return false;
        }
        let c: Vec<Vec<i64>> = self.ann.iter().map(|r| coords_in(&l.ann, r).unwrap()).collect();
        // Torsion-free quotient iff the coordinate rows extend to a basis.
        minor_gcd(&c).abs() == 1
    }

    /// Right Weyl action on the subgroup through its characters.
    pub fn act(&self, g: &super::group::FiniteGroup, w: usize) -> Subgroup {
        let rows: Vec<Vec<i64>> = self.ann.iter().map(|r| g.act_right(r, w)).collect();
        Subgroup::from_annihilator(self.rank, &rows)
    }

    /// Smith invariants (> 1) of `ℤʳ/A_K` torsion, i.e. the component group
    /// of `K` up to duality.
    pub fn finite_part(&self) -> Vec<i64> {
        let k = self.ann.len();
        if k == 0 {
            return vec![];
        }
        let d1 = gcd_all(self.ann.iter().flatten().copied());
        let mut inv = if k == 1 { vec![d1] } else { vec![d1, minor_gcd(&self.ann).abs() / d1] };
        inv.retain(|&x| x > 1);
        inv
    }

    /// Cocharacter sublattice of the identity component: the integer vectors
    /// orthogonal to every annihilating character.
    pub fn identity_component(&self) -> Vec<Vec<i64>> {
        match (self.rank, self.ann.len()) {
            (r, 0) => (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect(),
            (2, 1) => {
                let (a, b) = (self.ann[0][0], self.ann[0][1]);
                let g = a.gcd(&b);
                hnf(&[vec![-b / g, a / g]], 2)
            }
            _ => vec![],
        }
    }

    /// Canonical short label.
    pub fn label(&self) -> String {
        if self.is_torus() {
            return "T".into();
        }
        if let Some(n) = self.cyclic_order() {
            return format!("C{n}");
        }
        if self.ann.len() == self.rank && self.finite_part().is_empty() {
            return "1".into();
        }
        let rows: Vec<String> =
            self.ann.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        format!("K[{}]", rows.join(";"))
    }

    /// Deterministic order key: lower-dimensional subgroups first, then by
    /// the HNF entries.
    pub fn sort_key(&self) -> (usize, Vec<i64>) {
        (self.dim(), self.ann.iter().flatten().copied().collect())
    }

    /// Parse `T`, `1`, `Cn`, or `K[a,b;c,d]`.
    pub fn parse(rank: usize, s: &str) -> crate::error::Result<Subgroup> {
        let s = s.trim();
        if s == "T" {
            return Ok(Subgroup::torus(rank));
        }
        if s == "1" {
            return Ok(Subgroup::trivial(rank));
        }
        if let Some(n) = s.strip_prefix('C') {
            if rank != 1 {
                return crate::error::invalid("cyclic labels apply to rank-1 groups");
            }
            let n: u64 = n.parse().map_err(|_| crate::error::Error::InvalidConfig(format!("bad label '{s}'")))?;
            if n == 0 {
                return crate::error::invalid("cyclic order must be positive");
            }
            return Ok(Subgroup::cyclic(n));
        }
        if let Some(body) = s.strip_prefix("K[").and_then(|b| b.strip_suffix(']')) {
            let mut rows = Vec::new();
            for r in body.split(';') {
                let row: std::result::Result<Vec<i64>, _> = r.split(',').map(|x| x.trim().parse::<i64>()).collect();
                let row = row.map_err(|_| crate::error::Error::InvalidConfig(format!("bad label '{s}'")))?;
                if row.len() != rank {
                    return crate::error::invalid(format!("row length in '{s}' does not match rank {rank}"));
                }
                rows.push(row);
            }
            return Ok(Subgroup::from_annihilator(rank, &rows));
        }
        crate::error::invalid(format!("bad subgroup label '{s}'"))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::group::Group;
    use proptest::prelude::*;

    #[test]
    fn rank_one_cotoral_order() {
        let t = Subgroup::torus(1);
        assert!(t.cotoral_contains(&Subgroup::cyclic(5)));
        assert!(!Subgroup::cyclic(4).cotoral_contains(&Subgroup::cyclic(2)));
        assert!(Subgroup::cyclic(4).contains(&Subgroup::cyclic(2)));
        assert!(Subgroup::cyclic(3).cotoral_contains(&Subgroup::cyclic(3)));
        assert!(!Subgroup::cyclic(2).contains(&Subgroup::cyclic(3)));
    }

    #[test]
    fn rank_two_flag_chain() {
        let t = Subgroup::torus(2);
        let s1 = Subgroup::from_annihilator(2, &[vec![0, 1]]);
        let one = Subgroup::trivial(2);
        assert!(t.cotoral_contains(&s1));
        assert!(s1.cotoral_contains(&one));
        assert!(t.cotoral_contains(&one));
        // A circle times a finite group is not cotoral over the trivial group.
        let s1_c2 = Subgroup::from_annihilator(2, &[vec![0, 2]]);
        assert!(s1_c2.contains(&one));
        assert!(!s1_c2.cotoral_contains(&one));
        assert_eq!(s1_c2.finite_part(), vec![2]);
        assert_eq!(s1.identity_component(), vec![vec![1, 0]]);
    }

    #[test]
    fn labels_parse_back() {
        for s in ["T", "C7", "1"] {
            let rank = if s == "1" { 2 } else { 1 };
            assert_eq!(Subgroup::parse(rank, s).unwrap().label(), s);
        }
        let k = Subgroup::parse(2, "K[3,1;0,7]").unwrap();
        assert_eq!(Subgroup::parse(2, &k.label()).unwrap(), k);
        assert_eq!(k.finite_part(), vec![21]);
    }

    #[test]
    fn weyl_orbit_of_order_seven_subgroup_has_size_two() {
        let w = Group::SU3.weyl();
        let k = Subgroup::from_annihilator(2, &[vec![3, 1], vec![-1, 2]]);
        let mut orbit: Vec<Subgroup> = (0..w.order()).map(|g| k.act(&w, g)).collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit.len(), 2);
    }

    proptest! {
        #[test]
        fn hnf_is_canonical(a in -6i64..7, b in -6i64..7, c in -6i64..7, d in -6i64..7) {
            let rows = vec![vec![a, b], vec![c, d]];
            let h = hnf(&rows, 2);
            let h2 = hnf(&[vec![a + c, b + d], vec![c, d]], 2);
            prop_assert_eq!(&h, &h2);
            for r in &rows {
                prop_assert!(coords_in(&h, r).is_some());
            }
        }
    }
}
