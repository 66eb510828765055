//! Normal modules: `ν: R ⊗_{R^W} M^W → M` is an isomorphism.

use super::wmod::{GMap, RingKind, WMod};
use crate::error::{invalid, unsupported, Result};
use crate::linalg::Mat;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub normal: bool,
    /// First degree where `ν` fails to be an isomorphism.
    pub witness: Option<i32>,
    /// `(dim source, dim target)` of `ν` at the witness.
    pub dims_at_witness: Option<(usize, usize)>,
}

/// The map `ν` on the window, degreewise.
pub fn nu(m: &WMod) -> Result<(WMod, GMap)> {
    let (fixed, incl) = m.fixed_points()?;
    if m.wsign > 0 || fixed.ring == RingKind::Field {
        return Ok((fixed, incl));
    }
    let (ext, _) = fixed.extend_to_root()?;
    let g = m.gen_deg().expect("polynomial ring");
    let mats = m
        .degrees()
        .map(|x| {
            let a = incl.at(x).clone();
            // The g-part: m' ∈ M^W_{x−g} maps to g·m' ∈ M_x.
            let y = x - g;
            let b = match (m.in_window(y), m.act_at(y)) {
                (true, Some(act)) => act.mul(incl.at(y)),
                _ => Mat::zeros(m.dim(x), 0),
            };
            a.hstack(&b)
        })
        .collect();
    Ok((ext, GMap { t: 0, lo: m.lo, hi: m.hi, mats }))
}

/// Check `ν` on `[lo, hi − |g|]` (the top `|g|` degrees lack the `g`-part).
pub fn is_normal_module(m: &WMod) -> Result<NormalityReport> {
    if !m.is_equivariant() {
        return invalid("normality needs equivariance data");
    }
    let Some(g) = m.gen_deg() else {
        return unsupported("normality is defined over a polynomial ring");
    };
    let (_, f) = nu(m)?;
    for x in m.lo..=m.hi + g {
        let a = f.at(x);
        if a.rows() != a.cols() || !a.is_invertible() {
            return Ok(NormalityReport { normal: false, witness: Some(x), dims_at_witness: Some((a.cols(), a.rows())) });
        }
    }
    Ok(NormalityReport { normal: true, witness: None, dims_at_witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gralg::normal_form::{NormalForm, Summand};
    use crate::linalg::{q, Q};
    use proptest::prelude::*;

    const C: RingKind = RingKind::Poly(-2);

    fn nf(s: &str) -> WMod {
        NormalForm::parse(C, Some(-1), s).unwrap().to_windowed(-24, 12)
    }

    #[test]
    fn examples() {
        let free = nf("F0");
        assert!(is_normal_module(&free).unwrap().normal);
        let ideal = {
            let basis = free.span_of(&[(-2, vec![q(1)])]);
            free.submodule(&basis).unwrap().0
        };
        let r = is_normal_module(&ideal).unwrap();
        assert!(!r.normal);
        assert_eq!(r.witness, Some(-2));
        let lau = NormalForm::parse(RingKind::Laurent(-2), Some(-1), "L0, L1-").unwrap().to_windowed(-24, 12);
        assert!(is_normal_module(&lau).unwrap().normal);
        assert!(is_normal_module(&nf("D1-")).unwrap().normal);
        assert!(!is_normal_module(&nf("D1")).unwrap().normal);
    }

    /// Random equivariant endomorphism of a sum of normal free modules.
    fn random_map(m: &WMod, coeffs: &[i64]) -> GMap {
        let basis = m.hom(m, 0);
        let mut f = GMap::zero(m, m, 0);
        for (b, &c) in basis.iter().zip(coeffs.iter().cycle()) {
            f = f.add(&b.scale(&Q::from_integer(c.into())));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn kernels_and_cokernels_stay_normal(shifts in prop::collection::vec(-2i32..2, 1..3),
                                              coeffs in prop::collection::vec(-2i64..3, 1..6)) {
            let summands: Vec<Summand> = shifts.iter().map(|&s| Summand::free(2 * s)).collect();
            let m = NormalForm::equivariant(C, -1, summands).to_windowed(-20, 8);
            prop_assert!(is_normal_module(&m).unwrap().normal);
            let f = random_map(&m, &coeffs);
            prop_assert!(f.is_module_map(&m, &m));
            let (k, _) = m.kernel_of(&f).unwrap();
            prop_assert!(is_normal_module(&k).unwrap().normal);
            let img: Vec<Mat> = f.mats.iter().map(|a| a.image_basis()).collect();
            let (c, _) = m.quotient(&img);
            prop_assert!(is_normal_module(&c).unwrap().normal);
            let sum = WMod::direct_sum(&[&m, &k]);
            prop_assert!(is_normal_module(&sum).unwrap().normal);
        }
    }
}
