//! The acceptance checks as library functions, shared by the `selftest`
//! command and the acceptance test target. Each check is exact.

use crate::adams::e2_page;
use crate::cells::{catalog, coinduction_square, restriction_square, suspend_adjoint, CellSpec};
use crate::cells::recipes::is_coinduced;
use crate::corpus::{corpus, random_normal, rng};
use crate::diagram::descent::{counit_check, psi, theta_star, unit_check};
use crate::diagram::module::{DiagramModule, Level, Shape};
use crate::diagram::qce::check_qce;
use crate::diagram::rings::{build_all, kind_dim};
use crate::error::Result;
use crate::gralg::invariants::{invariants, molien_series};
use crate::gralg::normal_form::NormalForm;
use crate::gralg::normality::is_normal_module;
use crate::gralg::ring::{polynomial_ring, RingAction};
use crate::gralg::solomon::solomon_check;
use crate::gralg::wmod::{GMap, RingKind, WMod};
use crate::homalg::resolution::injective_resolution;
use crate::lattice::poset::su3_sample;
use crate::lattice::transport::WPoset;
use crate::lattice::{build_poset, ComponentStructure, Group, StructureKind, Truncation};
use crate::linalg::{q, Mat, Q};
use crate::par;
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, name: &'static str, pass: bool, detail: String) -> Outcome {
        Outcome { id, name, pass, detail }
    }

    fn failed(id: u8, name: &'static str, e: crate::Error) -> Outcome {
        Outcome { id, name, pass: false, detail: format!("error: {e}") }
    }

    pub fn line(&self) -> String {
        let v = if self.pass { "PASS" } else { "FAIL" };
        format!("{v} criterion {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn wrap(id: u8, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    match f() {
        Ok((pass, detail)) => Outcome::new(id, name, pass, detail),
        Err(e) => Outcome::failed(id, name, e),
    }
}

/// Invariant dimensions against the Molien series.
pub fn criterion_1() -> Outcome {
    wrap(1, "invariants vs Molien", || {
        let sign = RingAction::sign(1);
        let inv = invariants(&polynomial_ring(1), &sign, 40);
        let m = molien_series(&sign, 40);
        let ok1 = (0..=40).all(|k| q(inv.dims[k] as i64) == m.coeffs[k]);
        let su3 = RingAction::new(Group::SU3.weyl());
        let inv3 = invariants(&polynomial_ring(2), &su3, 30);
        let m3 = molien_series(&su3, 30);
        let ok2 = (0..=30).all(|k| q(inv3.dims[k] as i64) == m3.coeffs[k]);
        let gens = inv3.generator_codegrees();
        Ok((ok1 && ok2 && gens == vec![4, 6], format!("sign to t^40: {ok1}; SU3 to t^30: {ok2}; SU3 generators in codegrees {gens:?}")))
    })
}

pub fn criterion_2() -> Outcome {
    wrap(2, "SO(3) ring tables", || {
        let p = build_poset(Group::SO3, &Truncation::rank_one(1))?;
        let (ra, rinv, _) = build_all(&p, 1)?;
        let find = |r: &crate::diagram::rings::RingDiagram, l: &str| r.values.iter().find(|v| v.label == l).cloned();
        let (Some(t_c1), Some(c1)) = (find(&rinv, "(T⊃C1)"), find(&rinv, "(C1)")) else {
            return Ok((false, "missing flags".into()));
        };
        let warn = t_c1.dim_at(2) == Some(1) && c1.localized_kind().map(|k| kind_dim(k, 2)) == Some(0);
        let functorial = ra.functoriality(-20, 0).ok() && rinv.functoriality(-20, 0).ok();
        Ok((warn && functorial, format!("Rinv(T⊃C1) in degree 2: {:?}; localized Rinv(C1) in degree 2: {:?}; functorial: {functorial}", t_c1.dim_at(2), c1.localized_kind().map(|k| kind_dim(k, 2)))))
    })
}

pub const C3_SHAPE: (usize, i32, i32) = (4, -24, 4);

pub fn criterion_3(count: usize, seed: u64) -> Outcome {
    wrap(3, "descent adjunction", || {
        let (n, lo, hi) = C3_SHAPE;
        let shape = Shape::new(Group::SO3, Level::G, n, lo, hi)?;
        let mods = corpus(shape, count, seed)?;
        let results = par::map(&mods, |(desc, m)| -> Result<Option<String>> {
            let u = unit_check(m)?;
            if !(u.is_map && u.iso) {
                return Ok(Some(format!("unit fails on {desc} at {:?}", u.witness)));
            }
            let t = theta_star(m)?;
            let r = check_qce(&t);
            if !(r.is_qce() && r.f_continuous) {
                return Ok(Some(format!("θ_* of {desc} not qce: {:?}", r.failures.first())));
            }
            if !check_qce(&psi(&t)?).is_qce() {
                return Ok(Some(format!("Ψθ_* of {desc} not qce")));
            }
            Ok(None)
        });
        let mut fails = Vec::new();
        for r in results {
            if let Some(f) = r? {
                fails.push(f);
            }
        }
        Ok((fails.is_empty(), format!("{} modules, {} failures{}", mods.len(), fails.len(), fails.first().map(|f| format!("; first: {f}")).unwrap_or_default())))
    })
}

fn random_endo(r: &mut impl Rng, m: &WMod) -> GMap {
    let mut f = GMap::zero(m, m, 0);
    for b in m.hom(m, 0) {
        f = f.add(&b.scale(&Q::from_integer(r.gen_range(-2i64..=2).into())));
    }
    f
}

pub fn criterion_4(count: usize, seed: u64) -> Outcome {
    wrap(4, "normality", || {
        let c = RingKind::Poly(-2);
        let free = NormalForm::parse(c, Some(-1), "F0")?.to_windowed(-24, 8);
        let ideal = free.submodule(&free.span_of(&[(-2, vec![q(1)])]))?.0;
        let lau = NormalForm::parse(RingKind::Laurent(-2), Some(-1), "L0")?.to_windowed(-24, 8);
        let examples = !is_normal_module(&ideal)?.normal && is_normal_module(&free)?.normal && is_normal_module(&lau)?.normal;
        let mut r = rng(seed);
        let mut fails = 0;
        for _ in 0..count {
            let a = random_normal(&mut r, -24, 8);
            let b = random_normal(&mut r, -24, 8);
            let f = random_endo(&mut r, &a);
            let (k, _) = a.kernel_of(&f)?;
            let img: Vec<Mat> = f.mats.iter().map(|x| x.image_basis()).collect();
            let (im, _) = a.submodule(&img)?;
            let (cok, _) = a.quotient(&img);
            let sum = WMod::direct_sum(&[&a, &b]);
            // `a` is an extension of `cok` by `im`.
            let all = [&a, &b, &k, &im, &cok, &sum].iter().map(|m| is_normal_module(m).map(|x| x.normal)).collect::<Result<Vec<_>>>()?;
            if all.iter().any(|x| !x) {
                fails += 1;
            }
        }
        Ok((examples && fails == 0, format!("(c) ⊂ Q[c] non-normal, Q[c] and Q[c,c^-1] normal: {examples}; {count} closure instances, {fails} failures")))
    })
}

pub fn criterion_5() -> Outcome {
    wrap(5, "Solomon and adjoint suspension", || {
        let s3 = solomon_check(Group::SO3, 20)?;
        let su3 = solomon_check(Group::SU3, 20)?;
        let shape = Shape::new(Group::SO3, Level::G, 4, -24, 4)?;
        let m = crate::cells::pi_a(&"sphere+idem:C2+cell:C3".parse()?, shape)?;
        let (s, rep) = suspend_adjoint(&m)?;
        let shifted = m.stalks().iter().zip(s.stalks()).all(|(a, b)| (a.lo..=a.hi).all(|d| a.dim(d) == b.dim(d + 2)));
        let pass = s3.ok() && su3.ok() && rep.shift == 2 && rep.kappa_iso && shifted;
        Ok((pass, format!("SO3 κ={} ok={}; SU3 κ={} (codegree {}) ok={}; shift {} exact={shifted}; κ iso on {} degrees", s3.kappa, s3.ok(), su3.kappa, su3.kappa_codegree, su3.ok(), rep.shift, rep.degrees_checked)))
    })
}

pub const C6_SHAPE: (usize, i32, i32) = (8, -24, 4);

pub fn criterion_6(count: usize, seed: u64) -> Outcome {
    wrap(6, "injective dimension = rank", || {
        let (n, lo, hi) = C6_SHAPE;
        let shape = Shape::new(Group::SO3, Level::G, n, lo, hi)?;
        let mut mods = corpus(shape, count, seed)?;
        let circle = Shape::new(Group::Circle, Level::T, n, lo, hi)?;
        mods.push(("Circle cell:C1".into(), crate::cells::pi_a(&"cell:C1".parse()?, circle)?));
        let results = par::map(&mods, |(desc, m)| injective_resolution(m).map(|r| (desc.clone(), r.length(), r.verify())));
        let mut bad = Vec::new();
        let mut ones = 0;
        let mut free_cell = 0;
        for r in results {
            let (desc, len, ok) = r?;
            if len > 1 || !ok {
                bad.push(desc.clone());
            }
            if len == 1 {
                ones += 1;
                if desc.starts_with("Circle") {
                    free_cell = 1;
                }
            }
        }
        Ok((bad.is_empty() && ones > 0 && free_cell == 1, format!("{} modules, {} of length 1, Circle free cell length 1: {}, failures: {:?}", mods.len(), ones, free_cell == 1, bad)))
    })
}

pub fn criterion_7() -> Outcome {
    wrap(7, "Adams E2 for the sphere", || {
        let s: CellSpec = "etoral".parse()?;
        let (lo, hi) = (-16, 8);
        let (tl, th) = crate::adams::default_t_range(lo, hi);
        let p8 = e2_page(&s, &s, Shape::new(Group::SO3, Level::G, 8, lo, hi)?, tl, th)?;
        let p12 = e2_page(&s, &s, Shape::new(Group::SO3, Level::G, 12, lo, hi)?, tl, th)?;
        let lines_ok = p8.max_s() <= 1 && p12.max_s() <= 1;
        let pass = p8.total(0) == 1 && p12.total(0) == 1 && lines_ok;
        Ok((pass, format!("t in [{tl},{th}]; total at t-s=0: N=8 {}, N=12 {}; lines {:?}", p8.total(0), p12.total(0), p8.lines())))
    })
}

pub fn criterion_8() -> Outcome {
    wrap(8, "functor squares", || {
        let mut checked = 0;
        let mut skipped = 0;
        let mut fails = Vec::new();
        for g in [Group::SO3, Group::O2] {
            let shape = Shape::new(g, Level::N, 4, -24, 8)?;
            for cell in catalog(g, 4) {
                if !is_coinduced(&cell) {
                    let r = restriction_square(&cell, shape)?;
                    checked += 1;
                    if !r.commutes() {
                        fails.push(format!("{g} restriction {cell}"));
                    }
                    if g == Group::SO3 {
                        // Coinduction from N is modelled on injective and
                        // concentrated pieces only.
                        match coinduction_square(&cell, shape) {
                            Ok(r) => {
                                checked += 1;
                                if !r.commutes() {
                                    fails.push(format!("{g} coinduction {cell}"));
                                }
                            }
                            Err(crate::Error::Unsupported(_)) => skipped += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
        Ok((fails.is_empty(), format!("{checked} squares ({skipped} coinductions of extended cells out of scope), failures: {fails:?}")))
    })
}

pub fn counit_control(form: &str) -> Result<bool> {
    let shape = Shape::new(Group::SO3, Level::N, 1, -16, 8)?;
    let t = NormalForm::parse(RingKind::Poly(-2), Some(-1), form)?.to_windowed(-16, 8);
    let c = counit_check(&DiagramModule::concentrated(shape, 0, t)?)?;
    Ok(c.is_map && c.iso)
}

pub fn criterion_9() -> Outcome {
    wrap(9, "counit negative control", || {
        let sym = counit_control("T0^2")?;
        let asym = counit_control("T2^2-")?;
        Ok((sym && !asym, format!("Q[c]/c^2 passes: {sym}; Q + S^2 Q~ passes: {asym}")))
    })
}

pub fn criterion_10() -> Outcome {
    wrap(10, "transport and component laws", || {
        let mut laws = true;
        let so3 = build_poset(Group::SO3, &Truncation::rank_one(6))?;
        let su3 = build_poset(Group::SU3, &su3_sample())?;
        for p in [&so3, &su3] {
            laws &= WPoset::of_subgroups(p).check_laws().ok();
            laws &= WPoset::of_flags(p, 2).0.check_laws().ok();
        }
        let sub = ComponentStructure::on_subgroups(&so3, StructureKind::Lie);
        let (fl, _) = ComponentStructure::on_flags(&so3, 1, StructureKind::Lie);
        let sub_dec = sub.is_decreasing();
        let (fl_dec, fl_norm) = fl.check_flags();
        let pass = laws && !sub_dec && sub.is_normal() && fl_dec && fl_norm;
        Ok((pass, format!("laws: {laws}; SO3 subgroup structure decreasing: {sub_dec}, normal: {}; flag structure decreasing: {fl_dec}, normal: {fl_norm}", sub.is_normal())))
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub descent_count: usize,
    pub normal_count: usize,
    pub resolution_count: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 7, descent_count: 200, normal_count: 100, resolution_count: 100 }
    }
}

pub fn run(cfg: &SelftestConfig) -> Vec<Outcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(cfg.descent_count, cfg.seed),
        criterion_4(cfg.normal_count, cfg.seed),
        criterion_5(),
        criterion_6(cfg.resolution_count, cfg.seed),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
