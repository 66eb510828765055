//! Rank-1 normal forms: finite sums of free, torsion, divisible and Laurent
//! cyclic summands, each with a `w`-sign on its reference element.
//!
//! Reference elements: the generator for `Free`, `Torsion` and `Laurent`,
//! the socle for `Divisible`. With `e = |deg g|`:
//! `Free(s)` lives in degrees `s, s−e, …`; `Torsion(s, n)` in
//! `s, …, s−(n−1)e`; `Divisible(s)` in `s, s+e, …`; `Laurent(s)` in all
//! degrees `≡ s mod e`. Over a field every summand is `ℚ` in degree `s`.

use super::wmod::{RingKind, WMod};
use crate::error::{invalid, Result};
use crate::linalg::{q, Mat};
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SummandKind {
    Free,
    Torsion(u32),
    Divisible,
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub kind: SummandKind,
    pub shift: i32,
    /// `w` on the reference element; `1` when not equivariant.
    pub sign: i8,
}

impl Summand {
    pub fn free(s: i32) -> Self {
        Summand { kind: SummandKind::Free, shift: s, sign: 1 }
    }

    pub fn torsion(s: i32, n: u32) -> Self {
        Summand { kind: SummandKind::Torsion(n), shift: s, sign: 1 }
    }

    pub fn divisible(s: i32) -> Self {
        Summand { kind: SummandKind::Divisible, shift: s, sign: 1 }
    }

    pub fn laurent(s: i32) -> Self {
        Summand { kind: SummandKind::Laurent, shift: s, sign: 1 }
    }

    pub fn with_sign(self, sign: i8) -> Self {
        Summand { sign, ..self }
    }

    /// Whether the summand has a nonzero element in degree `d`.
    pub fn occupies(&self, d: i32, e: Option<i32>) -> bool {
        let Some(e) = e else { return d == self.shift };
        if (d - self.shift).rem_euclid(e) != 0 {
            return false;
        }
        let j = (self.shift - d) / e;
        match self.kind {
            SummandKind::Free => j >= 0,
            SummandKind::Torsion(n) => j >= 0 && j < n as i32,
            SummandKind::Divisible => j <= 0,
            SummandKind::Laurent => true,
        }
    }

    /// Formal `w`-sign at any degree congruent to the shift.
    pub fn sign_at(&self, d: i32, e: Option<i32>, wsign: i8) -> i8 {
        match e {
            Some(e) if wsign < 0 && ((self.shift - d) / e).rem_euclid(2) == 1 => -self.sign,
            _ => self.sign,
        }
    }

    fn code(&self) -> String {
        let s = match self.kind {
            SummandKind::Free => format!("F{}", self.shift),
            SummandKind::Torsion(n) => format!("T{}^{}", self.shift, n),
            SummandKind::Divisible => format!("D{}", self.shift),
            SummandKind::Laurent => format!("L{}", self.shift),
        };
        if self.sign < 0 {
            format!("{s}-")
        } else {
            s
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub ring: RingKind,
    /// `Some(ε)` when equivariant with `w(g) = ε g`.
    pub wsign: Option<i8>,
    pub summands: Vec<Summand>,
}

impl NormalForm {
    /// Non-equivariant normal form; signs are reset to `+`.
    pub fn new(ring: RingKind, summands: Vec<Summand>) -> Self {
        let summands = summands.into_iter().map(|s| s.with_sign(1)).collect();
        NormalForm { ring, wsign: None, summands }.normalized()
    }

    pub fn equivariant(ring: RingKind, wsign: i8, summands: Vec<Summand>) -> Self {
        NormalForm { ring, wsign: Some(wsign), summands }.normalized()
    }

    pub fn zero(ring: RingKind, wsign: Option<i8>) -> Self {
        NormalForm { ring, wsign, summands: vec![] }
    }

    fn e(&self) -> Option<i32> {
        self.ring.gen_deg().map(|g| -g)
    }

    /// Laurent shifts reduced to `[0, e)`, with the sign moved along; the
    /// summands sorted.
    pub fn normalized(mut self) -> Self {
        self.summands = self.summands.iter().map(|s| self.canonical(s)).collect();
        self.summands.sort();
        self
    }

    fn canonical(&self, s: &Summand) -> Summand {
        match (s.kind, self.e()) {
            (SummandKind::Laurent, Some(e)) => {
                let r = s.shift.rem_euclid(e);
                Summand { shift: r, sign: s.sign_at(r, Some(e), self.wsign.unwrap_or(1)), ..*s }
            }
            _ => *s,
        }
    }

    pub fn dim(&self, d: i32) -> usize {
        self.summands.iter().filter(|s| s.occupies(d, self.e())).count()
    }

    /// Realize on the window `[lo, hi]`.
    pub fn to_windowed(&self, lo: i32, hi: i32) -> WMod {
        let e = self.e();
        let wsign = self.wsign;
        let ws = wsign.unwrap_or(1);
        let occ: Vec<Vec<usize>> = (lo..=hi)
            .map(|d| (0..self.summands.len()).filter(|&i| self.summands[i].occupies(d, e)).collect())
            .collect();
        let dims: Vec<usize> = occ.iter().map(|v| v.len()).collect();
        let mut m = WMod::from_dims(self.ring, lo, hi, dims, wsign.is_some(), ws);
        if let Some(e) = e {
            for d in lo..=hi {
                let t = d - e;
                if t < lo {
                    continue;
                }
                let src = &occ[(d - lo) as usize];
                let tgt = &occ[(t - lo) as usize];
                let a = m.act[(d - lo) as usize].as_mut().unwrap();
                for (j, si) in src.iter().enumerate() {
                    if let Some(i) = tgt.iter().position(|x| x == si) {
                        a[(i, j)] = num_rational::BigRational::one();
                    }
                }
            }
        }
        if let Some(w) = m.w.as_mut() {
            for d in lo..=hi {
                let src = &occ[(d - lo) as usize];
                let mut diag = Mat::zeros(src.len(), src.len());
                for (j, &si) in src.iter().enumerate() {
                    diag[(j, j)] = q(self.summands[si].sign_at(d, e, ws) as i64);
                }
                w[(d - lo) as usize] = diag;
            }
        }
        m
    }

    pub fn shifted(&self, k: i32) -> NormalForm {
        let summands = self.summands.iter().map(|s| Summand { shift: s.shift + k, ..*s }).collect();
        NormalForm { summands, ..self.clone() }.normalized()
    }

    pub fn direct_sum(&self, o: &NormalForm) -> NormalForm {
        let mut summands = self.summands.clone();
        summands.extend(o.summands.iter().copied());
        NormalForm { summands, ..self.clone() }.normalized()
    }

    /// Parse `F0, T2^3, D1-, L0` (a trailing `-` marks sign −1).
    pub fn parse(ring: RingKind, wsign: Option<i8>, s: &str) -> Result<NormalForm> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty() && *x != "0") {
            let (body, sign) = match item.strip_suffix('-') {
                Some(b) => (b, -1),
                None => (item.strip_suffix('+').unwrap_or(item), 1),
            };
            let mut chars = body.chars();
            let tag = chars.next().unwrap();
            let rest: String = chars.collect();
            let num = |x: &str| x.parse::<i32>().map_err(|_| crate::Error::InvalidConfig(format!("bad summand '{item}'")));
            let kind_shift = match tag {
                'F' => (SummandKind::Free, num(&rest)?),
                'D' => (SummandKind::Divisible, num(&rest)?),
                'L' => (SummandKind::Laurent, num(&rest)?),
                'T' => {
                    let Some((a, b)) = rest.split_once('^') else {
                        return invalid(format!("torsion summand '{item}' needs an exponent"));
                    };
                    let n = b.parse::<u32>().map_err(|_| crate::Error::InvalidConfig(format!("bad exponent in '{item}'")))?;
                    if n == 0 {
                        return invalid(format!("torsion exponent must be positive in '{item}'"));
                    }
                    (SummandKind::Torsion(n), num(a)?)
                }
                _ => return invalid(format!("unknown summand '{item}'")),
            };
            out.push(Summand { kind: kind_shift.0, shift: kind_shift.1, sign });
        }
        if ring == RingKind::Field && out.iter().any(|s| s.kind != SummandKind::Free) {
            return invalid("over a field only F summands are allowed");
        }
        if ring.is_laurent() && out.iter().any(|s| s.kind != SummandKind::Laurent) {
            return invalid("over a Laurent ring only L summands are allowed");
        }
        Ok(match wsign {
            Some(ws) => NormalForm::equivariant(ring, ws, out),
            None => NormalForm::new(ring, out),
        })
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| s.code()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Closed-form `dim Hom^t(x, y)` between cyclic summands.
pub fn summand_hom_dim(x: &Summand, y: &Summand, t: i32, e: Option<i32>, wsign: Option<i8>) -> usize {
    use SummandKind::*;
    let a = x.shift + t;
    let b = y.shift;
    let sign_ok = |deg: i32| match wsign {
        None => true,
        Some(ws) => y.sign_at(deg, e, ws) == x.sign,
    };
    let Some(e) = e else {
        return usize::from(a == b && sign_ok(a));
    };
    if (a - b).rem_euclid(e) != 0 {
        return 0;
    }
    // Target reached from the reference element of y: a = b − e·j.
    let j = (b - a) / e;
    let ok = match (x.kind, y.kind) {
        (Free, Free) => j >= 0,
        (Free, Torsion(n)) => j >= 0 && j < n as i32,
        (Free, Divisible) => j <= 0,
        (Free, Laurent) => true,
        (Torsion(_), Free | Laurent) => false,
        (Torsion(m), Torsion(n)) => j >= (n as i32 - m as i32).max(0) && j < n as i32,
        (Torsion(m), Divisible) => j <= 0 && -j < m as i32,
        (Divisible, Divisible) => j >= 0,
        (Divisible, _) => false,
        (Laurent, Divisible | Laurent) => true,
        (Laurent, _) => false,
    };
    usize::from(ok && sign_ok(a))
}

/// Closed-form `dim Hom^t(x, y)`; equivariant when both are.
pub fn hom_dim(x: &NormalForm, y: &NormalForm, t: i32) -> usize {
    let e = x.ring.gen_deg().map(|g| -g);
    let ws = match (x.wsign, y.wsign) {
        (Some(s), Some(_)) => Some(if e.is_some() { s } else { 1 }),
        _ => None,
    };
    x.summands
        .iter()
        .map(|a| y.summands.iter().map(|b| summand_hom_dim(a, b, t, e, ws)).sum::<usize>())
        .sum()
}

/// Persistence rank of `g^k: E_a → M_b` restricted to `basis_a`.
fn prank(m: &WMod, basis: &[Mat], a: i32, b: i32, e: i32) -> usize {
    if !m.in_window(a) || !m.in_window(b) || b > a {
        return 0;
    }
    let k = ((a - b) / e) as u32;
    match m.gpow(a, k) {
        Some(p) => p.mul(&basis[(a - m.lo) as usize]).rank(),
        None => 0,
    }
}

/// Classify a windowed module by barcodes. Bars touching the lower window
/// edge are read as free (or Laurent), bars touching the upper edge as
/// divisible (or Laurent). Needs a window wider than every torsion bar.
pub fn classify(m: &WMod) -> NormalForm {
    let Some(g) = m.gen_deg() else {
        let mut out = Vec::new();
        for d in m.degrees() {
            if m.is_equivariant() {
                let w = m.w_at(d);
                let n = m.dim(d);
                let plus = w.sub(&Mat::identity(n)).kernel().cols();
                out.extend(std::iter::repeat_n(Summand::free(d), plus));
                out.extend(std::iter::repeat_n(Summand::free(d).with_sign(-1), n - plus));
            } else {
                out.extend(std::iter::repeat_n(Summand::free(d), m.dim(d)));
            }
        }
        return NormalForm { ring: m.ring, wsign: m.is_equivariant().then_some(m.wsign), summands: out }.normalized();
    };
    let e = -g;
    let ws = m.wsign;
    let eps: Vec<i8> = if m.is_equivariant() { vec![1, -1] } else { vec![1] };
    let mut out = Vec::new();
    for &ep in &eps {
        // Twisted eigenspaces are g-stable.
        let basis: Vec<Mat> = m
            .degrees()
            .map(|d| {
                let n = m.dim(d);
                if !m.is_equivariant() {
                    return Mat::identity(n);
                }
                let j = d.div_euclid(e);
                let s = if ws < 0 && j.rem_euclid(2) == 1 { -ep } else { ep };
                m.w_at(d).sub(&Mat::identity(n).scale(&q(s as i64))).kernel()
            })
            .collect();
        let r = |a: i32, b: i32| prank(m, &basis, a, b, e);
        for a in m.degrees() {
            let top_edge = a + e > m.hi;
            let mut b = a;
            while b >= m.lo {
                let n = r(a, b) + r(a + e, b - e) - r(a + e, b) - r(a, b - e);
                let bottom_edge = b - e < m.lo;
                if n > 0 {
                    let j = a.div_euclid(e);
                    let sa = if ws < 0 && m.is_equivariant() && j.rem_euclid(2) == 1 { -ep } else { ep };
                    let jb = b.div_euclid(e);
                    let sb = if ws < 0 && m.is_equivariant() && jb.rem_euclid(2) == 1 { -ep } else { ep };
                    let s = match (top_edge || m.ring.is_laurent(), bottom_edge || m.ring.is_laurent()) {
                        (true, true) => Summand::laurent(a).with_sign(sa),
                        (false, true) => Summand::free(a).with_sign(sa),
                        (true, false) => Summand::divisible(b).with_sign(sb),
                        (false, false) => Summand::torsion(a, ((a - b) / e + 1) as u32).with_sign(sa),
                    };
                    out.extend(std::iter::repeat_n(s, n));
                }
                b -= e;
            }
        }
    }
    if m.ring.is_laurent() {
        // One bar per residue class suffices; keep those starting at the top.
        out.retain(|s| s.shift + e > m.hi);
    }
    NormalForm { ring: m.ring, wsign: m.is_equivariant().then_some(ws), summands: out }.normalized()
}

/// A module in either representation.
#[derive(Clone, Debug)]
pub enum GradedModule {
    Normal(NormalForm),
    Windowed(WMod),
}

impl GradedModule {
    pub fn to_windowed(&self, lo: i32, hi: i32) -> WMod {
        match self {
            GradedModule::Normal(n) => n.to_windowed(lo, hi),
            GradedModule::Windowed(w) => w.clone(),
        }
    }

    pub fn to_normal(&self) -> NormalForm {
        match self {
            GradedModule::Normal(n) => n.clone(),
            GradedModule::Windowed(w) => classify(w),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const C: RingKind = RingKind::Poly(-2);

    #[test]
    fn parse_and_display() {
        let nf = NormalForm::parse(C, Some(-1), "F0, T2^3, D1-, L3").unwrap();
        assert_eq!(nf.to_string(), "F0, T2^3, D1-, L1-");
        assert_eq!(NormalForm::parse(C, None, "L3").unwrap().to_string(), "L1");
        assert!(NormalForm::parse(C, None, "T2").is_err());
        assert!(NormalForm::parse(RingKind::Laurent(-2), None, "F0").is_err());
    }

    #[test]
    fn classify_round_trip_examples() {
        let nf = NormalForm::parse(C, Some(-1), "F0, F-3, T2^3, T2^1, D1, D1-, L0").unwrap();
        let w = nf.to_windowed(-30, 30);
        w.validate().unwrap();
        assert_eq!(classify(&w), nf);
        let plain = NormalForm::parse(C, None, "F0, T4^2, D5").unwrap();
        assert_eq!(classify(&plain.to_windowed(-20, 20)), plain);
    }

    #[test]
    fn closed_form_hom_matches_windowed_examples() {
        let nf = NormalForm::parse(C, Some(-1), "F0, T2^3, D1-, L0, D-1").unwrap();
        let w = nf.to_windowed(-40, 40);
        for t in -8..=8 {
            assert_eq!(hom_dim(&nf, &nf, t), w.hom_dim(&w, t), "t = {t}");
        }
    }

    fn summand() -> impl Strategy<Value = Summand> {
        (0u8..4, -6i32..6, 1u32..4, any::<bool>()).prop_map(|(k, s, n, neg)| {
            let kind = match k {
                0 => SummandKind::Free,
                1 => SummandKind::Torsion(n),
                2 => SummandKind::Divisible,
                _ => SummandKind::Laurent,
            };
            Summand { kind, shift: s, sign: if neg { -1 } else { 1 } }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn round_trip(ss in prop::collection::vec(summand(), 0..5), equi in any::<bool>()) {
            let nf = if equi { NormalForm::equivariant(C, -1, ss) } else { NormalForm::new(C, ss) };
            let w = nf.to_windowed(-24, 24);
            prop_assert_eq!(classify(&w), nf);
        }

        #[test]
        fn closed_form_hom_matches_windowed(x in prop::collection::vec(summand(), 1..3),
                                            y in prop::collection::vec(summand(), 1..3),
                                            t in -6i32..6) {
            let x = NormalForm::equivariant(C, -1, x);
            let y = NormalForm::equivariant(C, -1, y);
            let (lo, hi) = (-36, 36);
            let wx = x.to_windowed(lo, hi);
            let wy = y.to_windowed(lo, hi);
            prop_assert_eq!(hom_dim(&x, &y, t), wx.hom_dim(&wy, t));
        }
    }
}
