//! Closed-form coframes with known invariants.
//!
//! Each generator returns an [`Example`]: a symbolic coframe, the region it
//! is defined on, a default sampling box, and a table of expected values
//! written as expressions in the chart coordinates.

use std::collections::BTreeMap;

use crate::coframe::{Chart, Coframe, CoframeSpec};
use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub name: String,
    pub spec: CoframeSpec,
    /// ε the pipeline should recover, when the example fixes it.
    pub eps: Option<i8>,
    /// Open box on which the coframe is defined.
    pub domain: Vec<(f64, f64)>,
    /// Default box for random sampling, inside `domain`.
    pub sample_box: Vec<(f64, f64)>,
    /// Expected invariant values as expressions in the chart coordinates.
    pub expected: Vec<(String, Expr)>,
    pub citation: String,
}

impl Example {
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn at(&self, point: &[f64], order: usize) -> Result<Coframe> {
        for (i, (&v, &(lo, hi))) in point.iter().zip(&self.domain).enumerate() {
            if !(v > lo && v < hi) {
                return Err(Error::Domain {
                    func: format!("{} ({} ∉ ({lo}, {hi}))", self.name, self.spec.chart.coords[i]),
                    value: v,
                });
            }
        }
        self.spec.at(point, order)
    }

    pub fn expected_expr(&self, name: &str) -> Option<&Expr> {
        self.expected.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn expected(&self, name: &str, point: &[f64]) -> Option<Result<f64>> {
        self.expected_expr(name)
            .map(|e| e.eval(point, &self.spec.chart.params))
    }
}

const R: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);

struct Builder {
    chart: Chart,
    subs: Vec<(&'static str, Expr)>,
}

impl Builder {
    fn new(coords: &[&str], params: &[(&str, f64)], placeholders: &[&'static str]) -> Builder {
        let mut all: Vec<(&str, f64)> = params.to_vec();
        all.extend(placeholders.iter().map(|p| (*p, f64::NAN)));
        Builder {
            chart: Chart::new(coords, &all).expect("static chart"),
            subs: Vec::new(),
        }
    }

    /// Parse a user expression in the chart and register it under `name`.
    fn bind(&mut self, name: &'static str, text: &str) -> Result<Expr> {
        let e = self.expr(text)?;
        self.subs.push((name, e.clone()));
        Ok(e)
    }

    fn bind_expr(&mut self, name: &'static str, e: Expr) {
        self.subs.push((name, e));
    }

    fn expr(&self, text: &str) -> Result<Expr> {
        let mut e = self.chart.parse(text)?;
        for (n, s) in &self.subs {
            e = e.substitute(n, s);
        }
        Ok(e)
    }

    fn finish(
        self,
        name: String,
        forms: &[&[&str]],
        eps: Option<i8>,
        domain: Vec<(f64, f64)>,
        sample_box: Vec<(f64, f64)>,
        expected: &[(&str, &str)],
        citation: &str,
    ) -> Result<Example> {
        let rows = forms
            .iter()
            .map(|r| r.iter().map(|t| self.expr(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let expected = expected
            .iter()
            .map(|(n, t)| Ok((n.to_string(), self.expr(t)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut chart = self.chart;
        for (n, _) in &self.subs {
            chart.params.remove(*n);
        }
        chart.params.retain(|_, v| !v.is_nan());
        Ok(Example {
            name,
            spec: CoframeSpec::new(chart, rows)?,
            eps,
            domain,
            sample_box,
            expected,
            citation: citation.to_string(),
        })
    }
}

fn check_eps(eps: i8) -> Result<f64> {
    match eps {
        1 | -1 => Ok(eps as f64),
        _ => Err(Error::Invalid(format!("ε must be ±1, got {eps}"))),
    }
}

/// ω¹ = dx+dy−(q₁/C₃)dz, ω² = dx−dy+(q₂/C₃)dz, ω³ = dz/C₃ with
/// q₁ = (x+y)z−(x−y), q₂ = ε(x+y)+(x−y)z. Here C = z.
///
/// Direct expansion gives dC∧ω¹∧ω² = C₃·Ω, which is what the expected
/// table records.
pub fn example_hyp_c3(eps: i8, c3: &str) -> Result<Example> {
    let e = check_eps(eps)?;
    let mut b = Builder::new(&["x", "y", "z"], &[("eps", e)], &["C3"]);
    b.bind("C3", c3)?;
    b.finish(
        format!("hyp-c3(eps={eps}, C3={c3})"),
        &[
            &["1", "1", "-((x+y)*z-(x-y))/C3"],
            &["1", "-1", "(eps*(x+y)+(x-y)*z)/C3"],
            &["0", "0", "1/C3"],
        ],
        Some(eps),
        vec![R, R, R],
        vec![(-1.0, 1.0), (-1.0, 1.0), (-0.9, 0.9)],
        &[("C", "z"), ("C3", "C3")],
        "Example hyp-ex-C3-nonzero",
    )
}

/// Constant-C example on T²×ℝ with C = sinh 2ψ,
/// f = cosh(Ψ−ψ)/cosh 2ψ, g = sinh(Ψ+ψ)/cosh 2ψ (so f²−g²+2Cfg = 1).
pub fn example_t2xr(psi: f64, big_psi: &str) -> Result<Example> {
    let mut b = Builder::new(
        &["theta", "phi", "z"],
        &[("psi", psi)],
        &["Psi", "dPsi", "f", "g", "C"],
    );
    let p = b.bind("Psi", big_psi)?;
    b.bind_expr("dPsi", p.diff(2));
    b.bind("C", "sinh(2*psi)")?;
    b.bind("f", "cosh(Psi-psi)/cosh(2*psi)")?;
    b.bind("g", "sinh(Psi+psi)/cosh(2*psi)")?;
    b.finish(
        format!("t2xr(psi={psi}, Psi={big_psi})"),
        &[
            &["f", "g", "g-2*C*f"],
            &["2*C*f-g", "-f", "g"],
            &["0", "0", "dPsi/cosh(2*psi)"],
        ],
        Some(1),
        vec![R, R, R],
        vec![(0.0, 6.28), (0.0, 6.28), (-1.0, 1.0)],
        &[
            ("C", "sinh(2*psi)"),
            ("volume", "-dPsi/cosh(2*psi)"),
            ("theta12", "cosh(2*psi)^2"),
        ],
        "Example T^2xR ex",
    )
}

fn n_terms(eps: i8) -> (&'static str, &'static str) {
    if eps == 1 {
        (
            "y^2*g + 2*y*(f-2*cot(2*x))*csc(2*x) - (f^2+df+1)*y^2*ln(y) - z*f",
            "(2*z - y^2*f - 2*y*csc(2*x))/y",
        )
    } else {
        // N₂ carries 2y·cot 2x; the single cot 2x term fails the structure equations.
        (
            "y^2*g - 2*y*cot(2*x)*f + 2*y + 4*y*csc(2*x)^2 - (f^2+df+1)*y^2*ln(y) - z*f",
            "(2*z - y^2*f + 2*y*cot(2*x))/y",
        )
    }
}

fn normal_form_builder(eps: i8, f: &str, g: &str) -> Result<Builder> {
    check_eps(eps)?;
    let mut b = Builder::new(
        &["x", "y", "z"],
        &[],
        &["f", "df", "g", "N1", "N2", "e11", "e12", "e13", "e21", "e22"],
    );
    let fe = b.bind("f", f)?;
    b.bind_expr("df", fe.diff(0));
    b.bind("g", g)?;
    let (n1, n2) = n_terms(eps);
    b.bind("N1", n1)?;
    b.bind("N2", n2)?;
    b.bind("e11", "N1/y^2")?;
    b.bind("e12", "N2/y^2")?;
    b.bind("e13", "-1/y^2")?;
    b.bind("e21", "z/y^2")?;
    b.bind("e22", "-1/y")?;
    Ok(b)
}

const NF_DOMAIN: [(f64, f64); 3] = [
    (0.0, std::f64::consts::FRAC_PI_4),
    (0.0, f64::INFINITY),
    R,
];
const NF_BOX: [(f64, f64); 3] = [(0.15, 0.7), (0.5, 2.0), (-1.0, 1.0)];

/// Normal-form coframe: η¹ = (N₁dx+N₂dy−dz)/y², η² = (z dx − y dy)/y²,
/// ω¹ = cos x η¹ + sin x η², ω² = −sin x η¹ + cos x η², ω³ = dx/y.
pub fn normal_form_3d(eps: i8, f: &str, g: &str) -> Result<Example> {
    let b = normal_form_builder(eps, f, g)?;
    let c = if eps == 1 { "cot(2*x)" } else { "-csc(2*x)" };
    let a3 = if eps == 1 {
        "y*f + csc(2*x)"
    } else {
        "y*f - cot(2*x)"
    };
    b.finish(
        format!("normal-form(eps={eps}, f={f}, g={g})"),
        &[
            &["cos(x)*e11 + sin(x)*e21", "cos(x)*e12 + sin(x)*e22", "cos(x)*e13"],
            &["-sin(x)*e11 + cos(x)*e21", "-sin(x)*e12 + cos(x)*e22", "-sin(x)*e13"],
            &["1/y", "0", "0"],
        ],
        Some(eps),
        NF_DOMAIN.to_vec(),
        NF_BOX.to_vec(),
        &[("C", c), ("A1", "0"), ("A2", "0"), ("A3", a3), ("zeta", "x")],
        "Theorem normal-form",
    )
}

/// The pair `(η¹, η²)` of the ε = +1 normal form with `η³ = y·ω³ = dx`.
/// Its invariant is `C = csc(2x)/y`; the pair has ε = −1.
pub fn eta_frame(f: &str, g: &str) -> Result<Example> {
    let b = normal_form_builder(1, f, g)?;
    b.finish(
        format!("eta-frame(f={f}, g={g})"),
        &[&["e11", "e12", "e13"], &["e21", "e22", "0"], &["1", "0", "0"]],
        Some(-1),
        vec![(0.0, std::f64::consts::FRAC_PI_2), (0.0, f64::INFINITY), R],
        NF_BOX.to_vec(),
        &[("C", "csc(2*x)/y")],
        "Prop. normal-form-eta-pos",
    )
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind4 {
    /// Relabelled hyp example with ω⁴ = ds, for either ε and any C₃(z).
    Ezero { eps: i8, c3: String },
    /// `E = y⁻¹e^{2w−y(x+z)}`, ε = +1.
    Enonzero,
}

pub fn example_4d(kind: &Kind4) -> Result<Example> {
    match kind {
        Kind4::Ezero { eps, c3 } => {
            let e = check_eps(*eps)?;
            let mut b = Builder::new(&["x", "y", "z", "s"], &[("eps", e)], &["C3"]);
            b.bind("C3", c3)?;
            b.finish(
                format!("4d-ezero(eps={eps}, C3={c3})"),
                &[
                    &["exp(-s)", "exp(-s)", "exp(-s)*(s*(1-z)-((x+y)*z-(x-y)))/C3", "exp(-s)"],
                    &["exp(-s)", "-exp(-s)", "exp(-s)*(s*(z+eps)+eps*(x+y)+(x-y)*z)/C3", "exp(-s)"],
                    &["0", "0", "1/C3", "0"],
                    &["0", "0", "0", "1"],
                ],
                Some(*eps),
                vec![R; 4],
                vec![(-1.0, 1.0), (-1.0, 1.0), (-0.9, 0.9), (-0.5, 0.5)],
                &[("C", "z"), ("E", "0")],
                "§2.3, example of the case E=0",
            )
        }
        Kind4::Enonzero => {
            let b = Builder::new(&["x", "y", "z", "w"], &[], &[]);
            let half_pi = std::f64::consts::FRAC_PI_2;
            b.finish(
                "4d-enonzero".to_string(),
                &[
                    &["z*exp(-w)", "y*exp(y*(x+z)-w)", "z*exp(-w)", "0"],
                    &[
                        "-(z*tan(z)+1)*exp(-w)",
                        "-y*tan(z)*exp(y*(x+z)-w)",
                        "-(z*tan(z)+1)*exp(-w)",
                        "0",
                    ],
                    &["0", "0", "1", "0"],
                    &["-y", "0", "-y", "1"],
                ],
                Some(1),
                vec![R, R, (-half_pi, half_pi), R],
                vec![(-0.5, 0.5), (0.5, 1.5), (-0.8, 0.8), (-0.5, 0.5)],
                &[("C", "-tan(z)"), ("E", "exp(2*w-y*(x+z))/y")],
                "§2.3, example with E = y^{-1}e^{2w-y(x+z)}",
            )
        }
    }
}

/// Euler-angle coframe on the unit tangent bundle of the round sphere:
/// dω¹ = ω²∧ω³, dω² = −ω¹∧ω³, dω³ = ω¹∧ω².
pub fn sphere_frame() -> Result<Example> {
    let b = Builder::new(&["theta", "phi", "psi"], &[], &[]);
    b.finish(
        "sphere".to_string(),
        &[
            &["cos(psi)", "sin(psi)*sin(theta)", "0"],
            &["-sin(psi)", "cos(psi)*sin(theta)", "0"],
            &["0", "-cos(theta)", "-1"],
        ],
        Some(-1),
        vec![(0.0, std::f64::consts::PI), R, R],
        vec![(0.3, 2.8), (0.0, 6.28), (0.0, 6.28)],
        &[("C", "0"), ("K", "1")],
        "§2.5, frame bundle of a surface",
    )
}

/// Generator lookup for the command line. Values in `params` are raw strings.
pub fn by_name(name: &str, params: &BTreeMap<String, String>) -> Result<Example> {
    let get = |k: &str, default: &str| params.get(k).cloned().unwrap_or_else(|| default.into());
    let num = |k: &str, default: f64| -> Result<f64> {
        match params.get(k) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("parameter {k}: `{v}` is not a number"))),
        }
    };
    let eps = |default: f64| -> Result<i8> {
        let v = num("eps", default)?;
        if v == 1.0 || v == -1.0 {
            Ok(v as i8)
        } else {
            Err(Error::Invalid(format!("ε must be ±1, got {v}")))
        }
    };
    match name {
        "hyp" | "hyp-c3" => example_hyp_c3(eps(-1.0)?, &get("C3", "1")),
        "t2xr" => example_t2xr(num("psi", 0.3)?, &get("Psi", "z")),
        "normal-form" => normal_form_3d(eps(1.0)?, &get("f", "0"), &get("g", "0")),
        "eta" => eta_frame(&get("f", "0"), &get("g", "0")),
        "4d-ezero" => example_4d(&Kind4::Ezero {
            eps: eps(-1.0)?,
            c3: get("C3", "1"),
        }),
        "4d-enonzero" => example_4d(&Kind4::Enonzero),
        "sphere" => sphere_frame(),
        _ => Err(Error::Invalid(format!(
            "unknown example `{name}` (expected one of: {})",
            NAMES.join(", ")
        ))),
    }
}

pub const NAMES: [&str; 7] = [
    "hyp-c3",
    "t2xr",
    "normal-form",
    "eta",
    "4d-ezero",
    "4d-enonzero",
    "sphere",
];
