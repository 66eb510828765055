use super::output::Report;
use super::{parse_range, Command, Common, ModuleArgs, PairArgs};
use crate::adams::{default_t_range, degeneracy_report, e2_page};
use crate::cells::recipes::levels_for;
use crate::cells::{catalog, change_groups, pi_a, CellSpec, Inclusion, Which};
use crate::diagram::module::{DiagramModule, Level, Shape};
use crate::diagram::qce::check_qce;
use crate::diagram::rings::build_all;
use crate::error::{invalid, Result};
use crate::gralg::normal_form::{classify, NormalForm};
use crate::gralg::normality::is_normal_module;
use crate::gralg::wmod::RingKind;
use crate::homalg::ext::ext;
use crate::homalg::injective::InjKind;
use crate::homalg::resolution::injective_resolution;
use crate::lattice::poset::{su3_sample, torus2_sample};
use crate::lattice::transport::WPoset;
use crate::lattice::{build_poset, ComponentStructure, Group, StructureKind, SubgroupPoset, Truncation};
use crate::selftest::{self, SelftestConfig};

pub fn dispatch(c: &Common, cmd: &Command) -> Result<Report> {
    if c.n == 0 {
        return invalid("truncation N must be at least 1");
    }
    parse_range(&c.window)?;
    match cmd {
        Command::Poset => poset(c),
        Command::Structure { kind } => structure(c, kind),
        Command::Rings => rings(c),
        Command::CheckQce(m) => check(c, m),
        Command::Normal { module, ring } => normal(c, module, ring),
        Command::Resolve(m) => resolve(c, m),
        Command::Ext(p) => ext_cmd(c, p),
        Command::E2(p) => e2(c, p),
        Command::Cells { list, cell, level } => cells(c, *list, cell.as_deref(), *level),
        Command::ChangeGroups { inclusion, which, cell } => change(c, inclusion, which, cell),
        Command::Selftest { quick } => run_selftest(c, *quick),
    }
}

fn truncation(c: &Common) -> Truncation {
    match c.group {
        Group::Torus2 => torus2_sample(),
        Group::SU3 => su3_sample(),
        _ => Truncation::rank_one(c.n as u64),
    }
}

fn poset_of(c: &Common) -> Result<SubgroupPoset> {
    build_poset(c.group, &truncation(c))
}

fn shape(c: &Common, level: Level) -> Result<Shape> {
    let (lo, hi) = parse_range(&c.window)?;
    Shape::new(c.group, level, c.n, lo, hi)
}

/// A cell expression, or a JSON file holding a serialized module.
fn load_module(arg: &str, shape: Shape) -> Result<DiagramModule> {
    if arg.trim_start().starts_with('{') {
        return DiagramModule::from_json(arg);
    }
    if arg.ends_with(".json") {
        let text = std::fs::read_to_string(arg).map_err(|e| crate::Error::InvalidConfig(format!("cannot read {arg}: {e}")))?;
        return DiagramModule::from_json(&text);
    }
    let cell: CellSpec = arg.parse()?;
    pi_a(&cell, shape)
}

fn stalk_rows(r: &mut Report, m: &DiagramModule) {
    for (label, s) in m.stalk_labels().into_iter().zip(m.stalks()) {
        r.row(vec![label, s.ring.to_string(), classify(s).to_string(), s.total_dim().to_string()]);
    }
}

fn poset(c: &Common) -> Result<Report> {
    let p = poset_of(c)?;
    let mut r = Report::new(&["index", "subgroup", "dim", "stabilizer", "contains"]);
    for i in 0..p.len() {
        let below: Vec<String> = (0..p.len()).filter(|&j| j != i && p.cotoral_leq(i, j)).map(|j| p.label(j)).collect();
        r.row(vec![i.to_string(), p.label(i), p.subgroups[i].dim().to_string(), p.stabilizer(i).len().to_string(), below.join(",")]);
    }
    let pairs = p.order.iter().filter(|(a, b)| a != b).count();
    r.note(format!("{}: {} subgroups, {} cotoral pairs, Weyl order {}", c.group, p.len(), pairs, p.weyl.order()));
    r.note(format!("partial order: {}, Weyl action preserves order: {}", p.is_partial_order(), p.action_preserves_order()));
    r.extra = Some(serde_json::to_value(p.to_json()).expect("poset serializes"));
    Ok(r)
}

fn structure(c: &Common, kind: &str) -> Result<Report> {
    let kind = match kind.to_ascii_lowercase().as_str() {
        "lie" => StructureKind::Lie,
        "connected" => StructureKind::Connected,
        "discrete" => StructureKind::Discrete,
        k => return invalid(format!("unknown structure kind '{k}'")),
    };
    let p = poset_of(c)?;
    let max_len = c.group.rank();
    let sub = ComponentStructure::on_subgroups(&p, kind);
    let (fl, _) = ComponentStructure::on_flags(&p, max_len, kind);
    let mut r = Report::new(&["on", "object", "W", "We", "residual"]);
    for (on, cs) in [("subgroups", &sub), ("flags", &fl)] {
        for a in 0..cs.len() {
            r.row(vec![on.into(), cs.poset.labels[a].clone(), cs.stab[a].len().to_string(), cs.we[a].len().to_string(), cs.residual(a).len().to_string()]);
        }
    }
    let (fd, fnorm) = fl.check_flags();
    r.note(format!("subgroups: decreasing {}, normal {}, sub-orbifold {}", sub.is_decreasing(), sub.is_normal(), sub.is_sub_orbifold()));
    r.note(format!("flags: decreasing {fd}, normal {fnorm}"));
    let laws_s = WPoset::of_subgroups(&p).check_laws();
    let laws_f = WPoset::of_flags(&p, max_len).0.check_laws();
    r.note(format!("transport laws: subgroups {} ({} triples), flags {} ({} triples)", laws_s.ok(), laws_s.triples, laws_f.ok(), laws_f.triples));
    Ok(r)
}

fn rings(c: &Common) -> Result<Report> {
    let (lo, hi) = parse_range(&c.window)?;
    let p = poset_of(c)?;
    let (ra, rinv, rtw) = build_all(&p, c.group.rank())?;
    let degrees: Vec<String> = (lo..=hi).map(|d| d.to_string()).collect();
    let mut headers = vec!["flavor", "flag", "ring"];
    headers.extend(degrees.iter().map(String::as_str));
    let mut r = Report::new(&headers);
    for diag in [&ra, &rinv, &rtw] {
        for v in &diag.values {
            let mut row = vec![diag.flavor.to_string(), v.label.clone(), v.name()];
            row.extend((lo..=hi).map(|d| v.dim_at(d).map_or("inf".to_string(), |x| x.to_string())));
            r.row(row);
        }
        let f = diag.functoriality(lo, hi);
        r.note(format!("{}: {} maps, {} composites, functorial {}", diag.flavor, f.maps, f.composites, f.ok()));
    }
    Ok(r)
}

fn check(c: &Common, a: &ModuleArgs) -> Result<Report> {
    let m = load_module(&a.module, shape(c, a.level)?)?;
    let q = check_qce(&m);
    let mut r = Report::new(&["condition", "flag", "source", "degree"]);
    for f in &q.failures {
        r.row(vec![format!("{:?}", f.condition), f.flag.clone(), f.source.clone(), f.degree.to_string()]);
    }
    r.note(format!("quasi-coherent {}, extended {}, F-continuous {}", q.quasi_coherent, q.extended, q.f_continuous));
    r.note(format!("F exponents: {:?}", q.f_exponents));
    r.extra = Some(serde_json::to_value(&q).expect("report serializes"));
    if !q.is_qce() {
        r.exit_code = 2;
    }
    Ok(r)
}

fn normal(c: &Common, module: &str, ring: &str) -> Result<Report> {
    let (lo, hi) = parse_range(&c.window)?;
    let (kind, ws) = match ring {
        "c" => (RingKind::Poly(-2), Some(-1)),
        "d" => (RingKind::Poly(-4), None),
        "laurent" => (RingKind::Laurent(-2), Some(-1)),
        _ => return invalid(format!("unknown ring '{ring}'")),
    };
    let m = NormalForm::parse(kind, ws, module)?.to_windowed(lo, hi);
    let mut r = Report::new(&["module", "normal", "witness"]);
    if ws.is_none() {
        r.row(vec![classify(&m).to_string(), "n/a".into(), "-".into()]);
        r.note("modules over Q[d] carry no involution");
        return Ok(r);
    }
    let n = is_normal_module(&m)?;
    r.row(vec![classify(&m).to_string(), n.normal.to_string(), n.witness.map_or("-".into(), |w| w.to_string())]);
    r.extra = Some(serde_json::to_value(&n).expect("report serializes"));
    Ok(r)
}

fn resolve(c: &Common, a: &ModuleArgs) -> Result<Report> {
    let m = load_module(&a.module, shape(c, a.level)?)?;
    let res = injective_resolution(&m)?;
    let mut r = Report::new(&["s", "injective", "value"]);
    for s in 0..=1 {
        for (kind, v) in res.injectives_at(s) {
            let name = match kind {
                InjKind::Top => "f_T".to_string(),
                InjKind::Sub(k) => format!("f_C{}", k + 1),
            };
            r.row(vec![s.to_string(), name, classify(&v).to_string()]);
        }
    }
    let ok = res.verify();
    r.note(format!("length {}, exact {ok}", res.length()));
    if !ok {
        r.exit_code = 2;
    }
    Ok(r)
}

fn t_range(c: &Common, p: &PairArgs) -> Result<(i32, i32)> {
    match &p.t {
        Some(s) => parse_range(s),
        None => {
            let (lo, hi) = parse_range(&c.window)?;
            Ok(default_t_range(lo, hi))
        }
    }
}

fn ext_cmd(c: &Common, p: &PairArgs) -> Result<Report> {
    let sh = shape(c, p.level)?;
    let (x, y) = (load_module(&p.x, sh)?, load_module(&p.y, sh)?);
    let (tl, th) = t_range(c, p)?;
    let t = ext(&x, &y, tl, th)?;
    let mut r = Report::new(&["s", "t", "dim"]);
    for e in &t.entries {
        r.row(vec![e.s.to_string(), e.t.to_string(), e.dim.to_string()]);
    }
    r.note(format!("t in [{tl}, {th}], total dimension {}", t.total()));
    r.extra = Some(serde_json::to_value(&t).expect("table serializes"));
    Ok(r)
}

fn e2(c: &Common, p: &PairArgs) -> Result<Report> {
    let sh = shape(c, p.level)?;
    let (tl, th) = t_range(c, p)?;
    let page = e2_page(&p.x.parse()?, &p.y.parse()?, sh, tl, th)?;
    let deg = degeneracy_report(&page);
    let mut r = Report::new(&["s", "t", "t-s", "dim"]);
    for e in &page.table.entries {
        r.row(vec![e.s.to_string(), e.t.to_string(), (e.t - e.s as i32).to_string(), e.dim.to_string()]);
    }
    let totals: Vec<String> = page.totals.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    r.note(format!("rank {}, collapses at E{}", page.rank, page.collapse_at));
    r.note(format!("totals along t-s: {}", totals.join(" ")));
    if deg.converged {
        r.note("converged: no differential has a nonzero source and target");
    } else {
        r.note(format!("extension/differential ambiguity at t-s in {:?}", deg.ambiguous));
    }
    r.extra = Some(serde_json::json!({ "page": page, "degeneracy": deg }));
    Ok(r)
}

fn cells(c: &Common, list: bool, cell: Option<&str>, level: Level) -> Result<Report> {
    if list || cell.is_none() {
        let mut r = Report::new(&["cell", "levels"]);
        for spec in catalog(c.group, c.n) {
            let lv: Vec<String> = levels_for(&spec).iter().map(|l| l.to_string()).collect();
            r.row(vec![spec.to_string(), lv.join(",")]);
        }
        r.note(format!("{} cells for {} with N={}", r.rows.len(), c.group, c.n));
        return Ok(r);
    }
    let m = load_module(cell.expect("checked"), shape(c, level)?)?;
    let mut r = Report::new(&["stalk", "ring", "normal form", "total dim"]);
    stalk_rows(&mut r, &m);
    let q = check_qce(&m);
    r.note(format!("{}: qce {}, F-continuous {}", m.shape.level, q.is_qce(), q.f_continuous));
    r.extra = Some(serde_json::from_str(&m.to_json()).expect("module JSON"));
    Ok(r)
}

fn change(c: &Common, inclusion: &str, which: &str, cell: &str) -> Result<Report> {
    let inc: Inclusion = inclusion.parse()?;
    let which: Which = which.parse()?;
    let (lo, hi) = parse_range(&c.window)?;
    let src_group = match which {
        Which::ThetaStar => inc.sup,
        _ => inc.sub,
    };
    let level = if src_group == Group::Circle { Level::T } else { Level::G };
    let src = load_module(cell, Shape::new(src_group, level, c.n, lo, hi)?)?;
    let out = change_groups(&src, inc, which)?;
    let mut r = Report::new(&["stalk", "ring", "normal form", "total dim"]);
    stalk_rows(&mut r, &out);
    r.note(format!("{which:?} along {inc}: {} {} module, qce {}", out.shape.group, out.shape.level, check_qce(&out).is_qce()));
    Ok(r)
}

fn run_selftest(c: &Common, quick: bool) -> Result<Report> {
    let mut cfg = SelftestConfig { seed: c.seed, ..Default::default() };
    if quick {
        cfg.descent_count = 20;
        cfg.normal_count = 20;
        cfg.resolution_count = 10;
    }
    let outcomes = selftest::run(&cfg);
    let mut r = Report::new(&["criterion", "name", "verdict", "detail"]);
    for o in &outcomes {
        r.row(vec![o.id.to_string(), o.name.to_string(), if o.pass { "PASS" } else { "FAIL" }.into(), o.detail.clone()]);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    r.note(format!("{passed}/{} criteria pass (seed {})", outcomes.len(), c.seed));
    if passed != outcomes.len() {
        r.exit_code = 2;
    }
    r.extra = Some(serde_json::to_value(&outcomes).expect("outcomes serialize"));
    Ok(r)
}
