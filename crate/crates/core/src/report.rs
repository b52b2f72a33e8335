//! Batch runs over sample sets and their JSON reports.

use std::collections::BTreeMap;
use std::io;
use std::path::PathBuf;

use serde::Serialize;

use crate::coframe::{Coframe, CoframeSpec};
use crate::error::{Error, Result};
use crate::examples::{by_name, Example};
use crate::input::load_coframe;
use crate::invariants::{
    analyze_point, classify, compute_c, compute_c3, one_adapt, region, structure_residuals,
    taut_circle_transform, taut_hyperbola_transform, CaseTag, Class, InvariantRecord, Tolerances,
};
use crate::prolong4d::{analyze_4d, curvature4, normal_form_4d, parse_h, symplectic_quadratic_check, QOde};
use crate::riemannian::{curvature, leaf_geometry, levi_civita, scalar_curvature};
use crate::sampling::SampleSpec;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Source {
    Example {
        name: String,
        params: BTreeMap<String, String>,
    },
    File(PathBuf),
    /// No coframe input (`normal-form` builds its own).
    None,
}

/// Inputs of the 4D normal-form construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormConfig {
    /// `C(z)`.
    pub c: String,
    pub eps: i8,
    pub z0: f64,
    /// `[(Q₁, Q₁'), (Q₂, Q₂')]` at `z0`.
    pub init: [(f64, f64); 2],
    /// `h_ij(x, y)`, row major.
    pub h: [[String; 2]; 2],
}

impl Default for NormalFormConfig {
    fn default() -> Self {
        NormalFormConfig {
            c: "tan(z)".into(),
            eps: 1,
            z0: 0.0,
            init: [(0.0, 1.0), (1.0, 0.0)],
            h: [["1".into(), "0".into()], ["x^2/2".into(), "1".into()]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Invariants,
    Classify,
    Taut,
    Curvature,
    Fourdim,
    NormalForm(NormalFormConfig),
    Example,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Invariants => "invariants",
            Command::Classify => "classify",
            Command::Taut => "taut",
            Command::Curvature => "curvature",
            Command::Fourdim => "fourdim",
            Command::NormalForm(_) => "normal-form",
            Command::Example => "example",
        }
    }
}

/// How samples are chosen. `Default` uses the example's own box.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Samples {
    Default { count: usize, seed: u64 },
    Given(SampleSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub source: Source,
    pub command: Command,
    pub order: usize,
    pub tolerances: Tolerances,
    pub samples: Samples,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(source: Source, command: Command) -> RunConfig {
        RunConfig {
            source,
            command,
            order: 6,
            tolerances: Tolerances::default(),
            samples: Samples::Default { count: 100, seed: 42 },
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("shallow", t.shallow),
            ("deep", t.deep),
            ("c3_band", t.c3_band),
            ("case3_band", t.case3_band),
            ("linear_band", t.linear_band),
            ("constant_band", t.constant_band),
        ] {
            if !(v > 0.0) {
                return Err(Error::Invalid(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        if self.order < 3 {
            return Err(Error::Invalid(format!("jet order must be at least 3, got {}", self.order)));
        }
        Ok(())
    }
}

/// Fixed statements of the sign and normalization conventions.
#[derive(Debug, Clone, Serialize)]
pub struct Conventions {
    pub adaptation: &'static str,
    pub invariant_c: &'static str,
    pub connection: &'static str,
    pub scalar_curvature: &'static str,
    pub tolerance_split: &'static str,
}

const CONVENTIONS: Conventions = Conventions {
    adaptation: "ω¹∧dω¹ = Ω = ω¹∧ω²∧ω³ = −ε ω²∧dω²; δ = +1",
    invariant_c: "ω¹∧dω² + ω²∧dω¹ = 2CΩ; θ¹∧θ² = 2CΩ₄ in 4D",
    connection: "ωⁱⱼ = Γⁱⱼₖωᵏ, dωⁱ = −ωⁱⱼ∧ωʲ, Θⁱⱼ = dωⁱⱼ + ωⁱₖ∧ωᵏⱼ",
    scalar_curvature: "S = 2 Σ_{i<j} Θⁱⱼ(eᵢ,eⱼ)",
    tolerance_split: "adapt.*, symp.*, quad.*, cartan.* use the shallow tolerance; all other residuals and expected values use the deep one",
};

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointError {
    pub index: usize,
    pub point: Vec<f64>,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourRow {
    pub point: Vec<f64>,
    pub eps: i8,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pfaffian: Option<f64>,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub point: Vec<f64>,
    pub eps: i8,
    #[serde(rename = "C")]
    pub c: f64,
    pub class: Class,
    /// `𝒫_C` coefficients of `a₁²`, `a₂²`, `a₁a₂`.
    pub quadratic: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureRow {
    pub point: Vec<f64>,
    pub frame: &'static str,
    /// `Θ¹₂(e₁,e₂)`, `Θ¹₃(e₁,e₃)`, `Θ²₃(e₂,e₃)`.
    pub sectional: [f64; 3],
    pub scalar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafRow>,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeafRow {
    pub mean_curvature: f64,
    pub trace: f64,
    pub intrinsic_k: f64,
    pub det: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalFormRow {
    pub point: Vec<f64>,
    pub w0: f64,
    pub det_h: f64,
    #[serde(rename = "Q")]
    pub q: [f64; 4],
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub point: Vec<f64>,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Row {
    Record(Box<InvariantRecord>),
    Four(FourRow),
    Class(ClassRow),
    Curvature(CurvatureRow),
    NormalForm(NormalFormRow),
    Residuals(Residuals),
}

impl Row {
    fn residuals(&self) -> Option<&BTreeMap<String, f64>> {
        match self {
            Row::Record(r) => Some(&r.residuals),
            Row::Four(r) => Some(&r.residuals),
            Row::Curvature(r) => Some(&r.residuals),
            Row::NormalForm(r) => Some(&r.residuals),
            Row::Residuals(r) => Some(&r.residuals),
            Row::Class(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub conventions: Conventions,
    pub rows: Vec<Row>,
    pub residual_summary: BTreeMap<String, Summary>,
    pub histogram: BTreeMap<String, usize>,
    pub checks: Vec<Check>,
    pub errors: Vec<PointError>,
    pub passed: bool,
}

impl Report {
    /// Compact JSON, every float written with 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
        self.serialize(&mut ser).expect("report serialization");
        let mut s = String::from_utf8(buf).expect("utf-8 JSON");
        s.push('\n');
        s
    }
}

struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write!(w, "{:.16e}", v as f64)
    }
}

/// Residual names checked against the shallow tolerance.
pub fn tolerance_for(name: &str, tol: &Tolerances) -> f64 {
    let shallow = ["adapt.", "symp.", "quad.", "cartan."];
    if shallow.iter().any(|p| name.starts_with(p)) {
        tol.shallow
    } else {
        tol.deep
    }
}

struct Inputs {
    spec: Option<CoframeSpec>,
    example: Option<Example>,
    points: Vec<Vec<f64>>,
}

fn resolve(cfg: &RunConfig) -> Result<Inputs> {
    let (spec, example) = match &cfg.source {
        Source::Example { name, params } => {
            let ex = by_name(name, params)?;
            (Some(ex.spec.clone()), Some(ex))
        }
        Source::File(path) => (Some(load_coframe(path)?), None),
        Source::None => (None, None),
    };
    let dim = spec.as_ref().map_or(4, CoframeSpec::dim);
    let required = match cfg.command {
        Command::Classify | Command::Taut => Some(3),
        Command::Fourdim => Some(4),
        _ => None,
    };
    if let Some(d) = required {
        if d != dim {
            return Err(Error::Structure(format!(
                "`{}` works on {d}D coframes, got {dim}D",
                cfg.command.name()
            )));
        }
    }
    let points = match &cfg.samples {
        Samples::Given(s) => {
            if let Some(d) = s.dim() {
                if d != dim {
                    return Err(Error::Invalid(format!("samples have {d} coordinates, chart has {dim}")));
                }
            }
            s.points()
        }
        Samples::Default { count, seed } => {
            let ranges = match (&example, &cfg.command) {
                (Some(ex), _) => ex.sample_box.clone(),
                (None, Command::NormalForm(_)) => vec![(-0.5, 0.5), (0.2, 1.2), (0.0, 1.0), (0.5, 2.0)],
                (None, _) => vec![(-0.5, 0.5); dim],
            };
            SampleSpec::Box {
                ranges,
                count: *count,
                seed: *seed,
            }
            .points()
        }
    };
    Ok(Inputs {
        spec,
        example,
        points,
    })
}

fn realize(inp: &Inputs, p: &[f64], order: usize) -> Result<Coframe> {
    match (&inp.example, &inp.spec) {
        (Some(ex), _) => ex.at(p, order),
        (None, Some(spec)) => spec.at(p, order),
        (None, None) => Err(Error::Invalid("this command needs a coframe input".into())),
    }
}

fn needs_dim(f: &Coframe, dim: usize, cmd: &str) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::Structure(format!("`{cmd}` works on {dim}D coframes, got {}D", f.dim())));
    }
    Ok(())
}

fn abs_map(m: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    m.into_iter().map(|(k, v)| (k, v.abs())).collect()
}

fn four_row(f: &Coframe, with_curvature: bool) -> Result<FourRow> {
    let s = analyze_4d(f)?;
    let mut residuals = abs_map(s.residuals.clone());
    let mut row = FourRow {
        point: f.point.clone(),
        eps: s.eps,
        c: s.c.value(),
        e: s.e.value(),
        scalar: None,
        pfaffian: None,
        residuals: BTreeMap::new(),
    };
    if with_curvature {
        let quad = symplectic_quadratic_check(f, &unit_circle(8))?;
        for (k, v) in quad {
            residuals.insert(format!("quad.{k}"), v);
        }
        let c = curvature4(f)?;
        residuals.insert("curv.scalar".into(), (c.scalar - c.scalar_predicted).abs());
        residuals.insert("curv.pfaffian".into(), (c.pfaffian - c.pfaffian_predicted).abs());
        residuals.insert("curv.theta34".into(), c.theta34);
        residuals.insert("curv.leaf_trace".into(), c.leaf_trace.abs());
        residuals.insert("curv.connection".into(), c.connection_residual);
        row.scalar = Some(c.scalar);
        row.pfaffian = Some(c.pfaffian);
    }
    row.residuals = residuals;
    Ok(row)
}

/// `n` evenly spaced points on the unit circle.
pub fn unit_circle(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            (t.cos(), t.sin())
        })
        .collect()
}

fn taut_row(f: &Coframe) -> Result<Residuals> {
    let one = one_adapt(f)?.coframe;
    let c = compute_c(&one)?;
    let c3 = compute_c3(&one, &c)?[2].value();
    let mut residuals = BTreeMap::new();
    if one.eps() == -1 {
        let t = taut_circle_transform(&one, &c, c3)?;
        let mut worst = 0.0f64;
        for (a1, a2) in unit_circle(20) {
            worst = worst.max((t.volume_ratio(a1, a2)? - t.predicted(a1, a2)).abs());
        }
        residuals.insert("taut.circle".into(), worst);
        residuals.insert("taut.volume".into(), (t.volume_match()? - 1.0).abs());
    } else {
        let t = taut_hyperbola_transform(&one, &c)?;
        let [r1, r2] = t.residuals()?;
        residuals.insert("taut.hyperbola1".into(), r1.abs());
        residuals.insert("taut.hyperbola2".into(), r2.abs());
    }
    Ok(Residuals {
        point: f.point.clone(),
        residuals,
    })
}

fn curvature_row(f: &Coframe, tol: &Tolerances) -> Result<CurvatureRow> {
    let a = analyze_point(f, tol)?;
    let frame = if a.case2.is_some() { "case2" } else { "one-adapted" };
    let h = if a.case2.is_some() { a.coframe.clone() } else { one_adapt(f)?.coframe };
    let conn = levi_civita(&h)?;
    let curv = curvature(&conn)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("curv.first_structure".into(), conn.residual);
    residuals.insert("curv.bianchi".into(), curv.bianchi_residual()?);
    let leaf = match leaf_geometry(&h, &conn, &curv, tol.deep) {
        Ok(l) => {
            if let Some(c2) = &a.case2 {
                let a3 = c2.a[2].value();
                let c = c2.c.value();
                let eps = h.eps() as f64;
                residuals.insert("leaf.H_eq_A3".into(), (l.h - a3).abs());
                residuals.insert(
                    "leaf.K_eq_A3sq_minus_Csq".into(),
                    (l.det - (a3 * a3 - c * c - 0.5 * (1.0 + eps))).abs(),
                );
            }
            Some(LeafRow {
                mean_curvature: l.h,
                trace: l.trace,
                intrinsic_k: l.k,
                det: l.det,
            })
        }
        Err(Error::NotIntegrable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(CurvatureRow {
        point: f.point.clone(),
        frame,
        sectional: [curv.sectional(0, 1), curv.sectional(0, 2), curv.sectional(1, 2)],
        scalar: scalar_curvature(&curv),
        leaf,
        residuals,
    })
}

fn check_row(f: &Coframe) -> Result<Row> {
    if f.dim() == 4 {
        return Ok(Row::Four(four_row(f, false)?));
    }
    let one = one_adapt(f)?.coframe;
    let (r1, r2) = structure_residuals(&one)?;
    let mut residuals = BTreeMap::new();
    residuals.insert("adapt.w1dw1".into(), r1.abs());
    residuals.insert("adapt.w2dw2".into(), r2.abs());
    Ok(Row::Residuals(Residuals {
        point: f.point.clone(),
        residuals,
    }))
}

/// Observed value of an expected-table entry.
fn observe(name: &str, raw: &Coframe, row: &Row, tol: &Tolerances) -> Result<Option<f64>> {
    Ok(match (name, row) {
        ("C", Row::Record(r)) => r.c,
        ("C", Row::Four(r)) => Some(r.c),
        ("E", Row::Four(r)) => Some(r.e),
        ("C3", Row::Record(r)) => r.c3,
        ("A1", Row::Record(r)) => r.a.map(|a| a[0]),
        ("A2", Row::Record(r)) => r.a.map(|a| a[1]),
        ("A3", Row::Record(r)) => r.a.map(|a| a[2]),
        ("zeta", Row::Record(r)) => r.zeta,
        ("K", Row::Record(r)) => r.k,
        ("volume", _) => Some(raw.volume()?.top().value()),
        ("theta12", _) => Some(curvature_row(raw, tol)?.sectional[0]),
        _ => None,
    })
}

fn histogram_key(row: &Row) -> Option<String> {
    match row {
        Row::Record(r) => match (r.case, r.class) {
            (Some(case), Some(class)) => Some(format!("{}/{}", case.name(), class.name())),
            _ => None,
        },
        Row::Class(r) => Some(
            if r.class == Class::Linear {
                "linear_band".to_string()
            } else {
                r.class.name().to_string()
            },
        ),
        Row::Four(r) => Some(format!("eps={}", r.eps)),
        _ => None,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let inp = resolve(cfg)?;
    let tol = &cfg.tolerances;
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    let mut checks = Vec::new();
    let mut expected_dev: BTreeMap<String, f64> = BTreeMap::new();

    let ode_and_h = match &cfg.command {
        Command::NormalForm(nf) => {
            let ode = QOde::new(&nf.c, nf.eps, nf.z0, nf.init)?;
            let h = parse_h([
                [nf.h[0][0].as_str(), nf.h[0][1].as_str()],
                [nf.h[1][0].as_str(), nf.h[1][1].as_str()],
            ])?;
            let zs: Vec<f64> = inp.points.iter().map(|p| p[2]).collect();
            let lo = zs.iter().cloned().fold(nf.z0, f64::min);
            let hi = zs.iter().cloned().fold(nf.z0, f64::max);
            let drift = ode.wronskian_drift(lo, hi, 21)?;
            checks.push(Check {
                name: "ode.wronskian_drift".into(),
                value: drift,
                tolerance: 1e-8,
                pass: drift <= 1e-8,
            });
            Some((ode, h))
        }
        _ => None,
    };

    for (index, p) in inp.points.iter().enumerate() {
        let result: Result<Row> = (|| {
            if let Some((ode, h)) = &ode_and_h {
                if p.len() != 4 {
                    return Err(Error::Invalid("normal-form points are (x, y, z, w)".into()));
                }
                let nf = normal_form_4d(ode, h, [p[0], p[1], p[2], p[3]], cfg.order)?;
                let s = analyze_4d(&nf.coframe)?;
                let mut residuals = abs_map(s.residuals.clone());
                residuals.insert("nf.E_eq_w".into(), (s.e.value() - p[3]).abs());
                residuals.insert("nf.eps".into(), (s.eps - ode.eps).abs() as f64);
                let c_expected = ode.c.eval(&[p[2]], &Default::default())?;
                residuals.insert("nf.C".into(), (s.c.value() - c_expected).abs());
                return Ok(Row::NormalForm(NormalFormRow {
                    point: p.clone(),
                    w0: nf.w0,
                    det_h: nf.det_h,
                    q: nf.q,
                    c: s.c.value(),
                    e: s.e.value(),
                    residuals,
                }));
            }
            let f = realize(&inp, p, cfg.order)?;
            let row = match &cfg.command {
                Command::Check => check_row(&f)?,
                Command::Invariants | Command::Example => {
                    if f.dim() == 4 {
                        Row::Four(four_row(&f, false)?)
                    } else {
                        Row::Record(Box::new(analyze_point(&f, tol)?.record))
                    }
                }
                Command::Classify => {
                    needs_dim(&f, 3, "classify")?;
                    let one = one_adapt(&f)?.coframe;
                    let c = compute_c(&one)?.value();
                    let q = classify(c, one.eps(), tol.linear_band);
                    Row::Class(ClassRow {
                        point: p.clone(),
                        eps: one.eps(),
                        c,
                        class: q.class,
                        quadratic: q.coeffs,
                    })
                }
                Command::Taut => {
                    needs_dim(&f, 3, "taut")?;
                    Row::Residuals(taut_row(&f)?)
                }
                Command::Curvature => {
                    if f.dim() == 4 {
                        Row::Four(four_row(&f, true)?)
                    } else {
                        Row::Curvature(curvature_row(&f, tol)?)
                    }
                }
                Command::Fourdim => {
                    needs_dim(&f, 4, "fourdim")?;
                    Row::Four(four_row(&f, true)?)
                }
                Command::NormalForm(_) => unreachable!(),
            };
            if cfg.command == Command::Example {
                if let Some(ex) = &inp.example {
                    for (name, _) in &ex.expected {
                        if let (Some(got), Some(want)) = (observe(name, &f, &row, tol)?, ex.expected(name, p)) {
                            let d = (got - want?).abs();
                            let e = expected_dev.entry(format!("expected.{name}")).or_insert(0.0);
                            *e = e.max(d);
                        }
                    }
                }
            }
            Ok(row)
        })();
        match result {
            Ok(r) => rows.push(r),
            Err(e) => errors.push(PointError {
                index,
                point: p.clone(),
                error: e.to_string(),
            }),
        }
    }

    let mut acc: BTreeMap<String, (f64, f64, usize)> = BTreeMap::new();
    for r in &rows {
        if let Some(res) = r.residuals() {
            for (k, v) in res {
                let e = acc.entry(k.clone()).or_insert((0.0, 0.0, 0));
                e.0 = e.0.max(*v);
                e.1 += v;
                e.2 += 1;
            }
        }
    }
    let residual_summary: BTreeMap<String, Summary> = acc
        .into_iter()
        .map(|(k, (max, sum, count))| {
            (
                k,
                Summary {
                    max,
                    mean: sum / count as f64,
                    count,
                },
            )
        })
        .collect();
    for (k, s) in &residual_summary {
        let t = tolerance_for(k, tol);
        checks.push(Check {
            name: k.clone(),
            value: s.max,
            tolerance: t,
            pass: s.max <= t,
        });
    }
    for (k, v) in expected_dev {
        checks.push(Check {
            name: k,
            value: v,
            tolerance: tol.deep,
            pass: v <= tol.deep,
        });
    }
    region_checks(&rows, inp.example.as_ref(), &mut checks);

    let mut histogram = BTreeMap::new();
    for r in &rows {
        if let Some(k) = histogram_key(r) {
            *histogram.entry(k).or_insert(0) += 1;
        }
    }
    let passed = errors.is_empty() && checks.iter().all(|c| c.pass) && !rows.is_empty();
    Ok(Report {
        tool: "bicontact",
        version: VERSION,
        config: cfg.clone(),
        conventions: CONVENTIONS,
        rows,
        residual_summary,
        histogram,
        checks,
        errors,
        passed,
    })
}

fn region_checks(rows: &[Row], example: Option<&Example>, checks: &mut Vec<Check>) {
    let eps: Vec<i8> = rows
        .iter()
        .filter_map(|r| match r {
            Row::Record(r) => r.eps,
            Row::Four(r) => Some(r.eps),
            Row::Class(r) => Some(r.eps),
            _ => None,
        })
        .collect();
    if eps.is_empty() {
        return;
    }
    let common = region::common_epsilon(&eps);
    checks.push(Check {
        name: "region.epsilon".into(),
        value: if common.is_ok() { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: common.is_ok(),
    });
    if let (Ok(e), Some(want)) = (common, example.and_then(|x| x.eps)) {
        checks.push(Check {
            name: "expected.eps".into(),
            value: (e - want).abs() as f64,
            tolerance: 0.0,
            pass: e == want,
        });
    }
    let tags: Vec<CaseTag> = rows
        .iter()
        .filter_map(|r| match r {
            Row::Record(r) => r.case,
            _ => None,
        })
        .collect();
    if !tags.is_empty() {
        let ok = region::common_case(&tags).is_ok();
        checks.push(Check {
            name: "region.case".into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        });
    }
}
