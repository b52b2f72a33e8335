use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use bicontact::report::{run, Command, NormalFormConfig, RunConfig, Samples, Source};
use bicontact::sampling::{parse_box, parse_point, SampleSpec};
use clap::{Args, Parser, Subcommand};

/// Invariants of bi-contact structures on 3- and 4-dimensional charts.
///
/// Exit status: 0 when every check passes, 1 when a check fails or a
/// sample point errors, 2 for invalid arguments or inputs.
#[derive(Parser, Debug)]
#[command(name = "bicontact", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Jet truncation order.
    #[arg(long, default_value_t = 6, global = true)]
    order: usize,

    /// Tolerance for identities with at most two derivative levels.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol_shallow: f64,

    /// Tolerance for deeper identities and expected values.
    #[arg(long, default_value_t = 1e-6, global = true)]
    tol_deep: f64,

    /// Number of random sample points.
    #[arg(long, default_value_t = 100, global = true)]
    points: usize,

    /// Seed for the sampler.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,

    /// Sampling box `lo:hi,lo:hi,...`; defaults to the example's box.
    #[arg(long = "box", global = true)]
    sample_box: Option<String>,

    /// Explicit sample point `x,y,z[,w]` (repeatable; overrides the box).
    #[arg(long = "at", global = true, allow_hyphen_values = true)]
    at: Vec<String>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Coframe definition file.
    #[arg(long, conflicts_with = "example")]
    input: Option<PathBuf>,

    /// Built-in example name.
    #[arg(long)]
    example: Option<String>,

    /// Example parameter `k=v` (repeatable).
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// One-adaptation (3D) or symplectic structure-equation (4D) residuals.
    Check(SourceArgs),
    /// Full pointwise invariant pipeline.
    Invariants(SourceArgs),
    /// Elliptic / hyperbolic / linear classification of 𝒫_C.
    Classify(SourceArgs),
    /// Taut circle (ε = −1) or hyperbola (ε = +1) transform residuals.
    Taut(SourceArgs),
    /// Levi-Civita curvature and leaf geometry.
    Curvature(SourceArgs),
    /// Symplectic identities and curvature of a 4D coframe.
    Fourdim(SourceArgs),
    /// Build the 4D normal-form coframe and verify it.
    NormalForm(NormalFormArgs),
    /// Run a built-in example against its expected-value table.
    Example {
        /// One of: hyp-c3, t2xr, normal-form, eta, 4d-ezero, 4d-enonzero, sphere.
        name: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
    },
}

#[derive(Args, Debug)]
struct NormalFormArgs {
    /// C as an expression in z.
    #[arg(long, default_value = "tan(z)")]
    c: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eps: i8,
    /// Point where the initial data are given.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z0: f64,
    /// `Q1,Q1',Q2,Q2'` at z0.
    #[arg(long, default_value = "0,1,1,0", allow_hyphen_values = true)]
    init: String,
    /// `h11,h12,h21,h22` as expressions in x, y (`;`-separated).
    #[arg(long, default_value = "1;0;x^2/2;1", allow_hyphen_values = true)]
    h: String,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("`{s}` is not k=v"))
}

fn source(args: &SourceArgs) -> Result<Source, String> {
    match (&args.input, &args.example) {
        (Some(p), None) => Ok(Source::File(p.clone())),
        (None, Some(name)) => Ok(Source::Example {
            name: name.clone(),
            params: args.params.iter().cloned().collect(),
        }),
        _ => Err("give exactly one of --input FILE or --example NAME".into()),
    }
}

fn normal_form(args: &NormalFormArgs) -> Result<NormalFormConfig, String> {
    let init = parse_point(&args.init).map_err(|e| e.to_string())?;
    let [q1, p1, q2, p2] = init[..] else {
        return Err("--init needs four numbers".into());
    };
    let h: Vec<&str> = args.h.split(';').map(str::trim).collect();
    let [h11, h12, h21, h22] = h[..] else {
        return Err("--h needs four `;`-separated expressions".into());
    };
    Ok(NormalFormConfig {
        c: args.c.clone(),
        eps: args.eps,
        z0: args.z0,
        init: [(q1, p1), (q2, p2)],
        h: [[h11.into(), h12.into()], [h21.into(), h22.into()]],
    })
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    let (src, command) = match &cli.command {
        Cmd::Check(s) => (source(s)?, Command::Check),
        Cmd::Invariants(s) => (source(s)?, Command::Invariants),
        Cmd::Classify(s) => (source(s)?, Command::Classify),
        Cmd::Taut(s) => (source(s)?, Command::Taut),
        Cmd::Curvature(s) => (source(s)?, Command::Curvature),
        Cmd::Fourdim(s) => (source(s)?, Command::Fourdim),
        Cmd::NormalForm(a) => (Source::None, Command::NormalForm(normal_form(a)?)),
        Cmd::Example { name, params } => (
            Source::Example {
                name: name.clone(),
                params: params.iter().cloned().collect::<BTreeMap<_, _>>(),
            },
            Command::Example,
        ),
    };
    let mut cfg = RunConfig::new(src, command);
    cfg.order = cli.order;
    cfg.tolerances.shallow = cli.tol_shallow;
    cfg.tolerances.deep = cli.tol_deep;
    cfg.out = cli.out.clone();
    cfg.samples = if !cli.at.is_empty() {
        let pts = cli
            .at
            .iter()
            .map(|p| parse_point(p))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Samples::Given(SampleSpec::Points(pts))
    } else if let Some(b) = &cli.sample_box {
        Samples::Given(SampleSpec::Box {
            ranges: parse_box(b).map_err(|e| e.to_string())?,
            count: cli.points,
            seed: cli.seed,
        })
    } else {
        Samples::Default {
            count: cli.points,
            seed: cli.seed,
        }
    };
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    eprintln!(
        "{}: {} points, {} checks, {} failed{}, {} point errors",
        cfg.command.name(),
        report.rows.len(),
        report.checks.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) },
        report.errors.len()
    );
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
