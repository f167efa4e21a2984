//! powsum: representation counts for sums of 2m-th powers and certified
//! bounds for the shifted series Σ r_{m,k}(n)/(n+a).
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 verification failure
//! (`verify` and `check`). Output is plain text with LF endings and no
//! color; equal invocations produce identical bytes.

// `!(x > 0.0)` rather than `x <= 0.0`: the negated form rejects NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod check;
mod config;
mod fmt;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use powsum::bounds::{b_ana, b_geo, crossover, verify_bounds};
use powsum::representation::r_convolution;
use powsum::series::{integral_s, s_bracket, s_lattice};
use powsum::special::{theta, u_closed, u_direct};
use powsum::{EvalOptions, PowerParams};

use crate::fmt::{render_record, render_rows, Cell, Format};

#[derive(Parser)]
#[command(
    name = "powsum",
    version,
    about = "Representation counts for sums of 2m-th powers and certified bounds \
             for their shifted reciprocal series"
)]
struct Cli {
    /// Defaults file with key=value lines (tol, terms, quad-points,
    /// points, a-min, a-max, columns, format); command-line flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact count of integer vectors with x_1^2m + ... + x_k^2m = n
    Rcount {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        n: u64,
    },
    /// Theta series 1 + 2 Σ q^(t^2m) with certified truncation error
    Theta {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        q: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'N', long = "terms")]
        terms: Option<u64>,
    },
    /// Lattice series U_2m(z) = Σ 1/(t^2m + z^2m): closed form and direct sum
    Ucot {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        z: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'N', long = "terms")]
        terms: Option<u64>,
    },
    /// Certified two-sided bracket for S_{m,k}(a)
    Series {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        a: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'N', long = "terms")]
        terms: Option<u64>,
        /// Also sum the lattice box of this radius (no certificate)
        #[arg(long, value_name = "RADIUS")]
        lattice: Option<u64>,
        /// Also evaluate the theta-power integral route
        #[arg(long)]
        integral: bool,
    },
    /// The geometric and analytic lower bounds and their ratio
    Bounds {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        a: f64,
    },
    /// Check both bounds against a certified bracket; exit 2 on failure
    Verify {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(short)]
        a: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'N', long = "terms")]
        terms: Option<u64>,
    },
    /// Bisect for a shift where the two bounds trade places
    Crossover {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(long = "a-min")]
        a_min: Option<f64>,
        #[arg(long = "a-max")]
        a_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate bound columns over a log-spaced grid of shifts
    Sweep {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        k: u32,
        #[arg(long = "a-min")]
        a_min: Option<f64>,
        #[arg(long = "a-max")]
        a_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Comma list from: a, b_geo, b_ana, ratio, s_lower, s_upper
        #[arg(long)]
        columns: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'N', long = "terms")]
        terms: Option<u64>,
    },
    /// Run the built-in oracle and bound verification suite; exit 2 on failure
    Check {
        /// Cap bracket refinement at 1e9 terms; deeper points are
        /// reported as skipped instead of verified
        #[arg(long)]
        quick: bool,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

type Cfg = BTreeMap<String, String>;

fn run(cli: Cli) -> Result<i32> {
    let cfg: Cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => Cfg::new(),
    };
    let format = resolve_format(cli.format, &cfg)?;
    let out = cli.out;

    match cli.cmd {
        Cmd::Rcount { m, k, n } => {
            let params = PowerParams::new(m, k, 1.0)?;
            let count = r_convolution(&params, n)?.counts()[n as usize];
            let content = if format == Format::Human {
                format!("{count}\n")
            } else {
                render_record(
                    &[("m", Cell::I(m)), ("k", Cell::I(k)), ("n", Cell::U(n)), ("r", Cell::U(count))],
                    format,
                )
            };
            emit(&out, &content)?;
            Ok(0)
        }
        Cmd::Theta { m, q, tol, terms } => {
            let opts = eval_opts(tol, terms, &cfg)?;
            let v = theta(m, q, &opts)?;
            let content = render_record(
                &[
                    ("m", Cell::I(m)),
                    ("q", Cell::F(q)),
                    ("value", Cell::F(v.value)),
                    ("error_bound", Cell::F(v.error_bound)),
                    ("terms", Cell::U(v.terms_used)),
                ],
                format,
            );
            emit(&out, &content)?;
            Ok(0)
        }
        Cmd::Ucot { m, z, tol, terms } => {
            let opts = eval_opts(tol, terms, &cfg)?;
            let direct = u_direct(m, z, &opts)?;
            let closed = match u_closed(m, z) {
                Ok(v) => Some(v),
                Err(powsum::Error::UnsupportedOrder { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let content = render_record(
                &[
                    ("m", Cell::I(m)),
                    ("z", Cell::F(z)),
                    ("closed", closed.map_or(Cell::None, Cell::F)),
                    ("direct", Cell::F(direct.value)),
                    ("error_bound", Cell::F(direct.error_bound)),
                    ("terms", Cell::U(direct.terms_used)),
                    ("gap", closed.map_or(Cell::None, |c| Cell::F((c - direct.value).abs()))),
                ],
                format,
            );
            emit(&out, &content)?;
            Ok(0)
        }
        Cmd::Series { m, k, a, tol, terms, lattice, integral } => {
            let params = PowerParams::new(m, k, a)?;
            let opts = eval_opts(tol, terms, &cfg)?;
            let bracket = s_bracket(&params, &opts)?;
            let mut fields = vec![
                ("m", Cell::I(m)),
                ("k", Cell::I(k)),
                ("a", Cell::F(a)),
                ("lower", Cell::F(bracket.lower)),
                ("upper", Cell::F(bracket.upper)),
                ("width", Cell::F(bracket.width())),
                ("terms", Cell::U(bracket.terms)),
                ("method", Cell::S(bracket.method.as_str().into())),
                ("converged", Cell::B(bracket.converged)),
            ];
            if let Some(radius) = lattice {
                fields.push(("lattice_radius", Cell::U(radius)));
                fields.push(("lattice", Cell::F(s_lattice(&params, radius))));
            }
            if integral {
                let quad = integral_s(&params, &opts)?;
                fields.push(("integral", Cell::F(quad.value)));
                fields.push(("integral_error", Cell::F(quad.error_bound)));
            }
            emit(&out, &render_record(&fields, format))?;
            Ok(0)
        }
        Cmd::Bounds { m, k, a } => {
            let params = PowerParams::new(m, k, a)?;
            let geo = b_geo(&params)?;
            let ana = b_ana(&params)?;
            let content = render_record(
                &[
                    ("m", Cell::I(m)),
                    ("k", Cell::I(k)),
                    ("a", Cell::F(a)),
                    ("b_geo", Cell::F(geo)),
                    ("b_ana", Cell::F(ana)),
                    ("ratio", Cell::F(ana / geo)),
                    ("series_convergent", Cell::B(params.series_convergent())),
                ],
                format,
            );
            emit(&out, &content)?;
            Ok(0)
        }
        Cmd::Verify { m, k, a, tol, terms } => {
            let params = PowerParams::new(m, k, a)?;
            // Verification wants a tight bracket; default to 1e-3 rather
            // than the general-purpose 1e-6 so the slow points stay cheap.
            let opts = match (tol, config::get(&cfg, "tol")?) {
                (Some(t), _) | (None, Some(t)) => eval_opts(Some(t), terms, &cfg)?,
                (None, None) => eval_opts(Some(1e-3), terms, &cfg)?,
            };
            let report = verify_bounds(&params, &opts)?;
            let passed = report.geo_verified
                && report.ana_verified
                && report.geo_strict
                && report.ana_strict;
            let content = render_record(
                &[
                    ("m", Cell::I(m)),
                    ("k", Cell::I(k)),
                    ("a", Cell::F(a)),
                    ("b_geo", Cell::F(report.b_geo)),
                    ("b_ana", Cell::F(report.b_ana)),
                    ("ratio", Cell::F(report.ratio)),
                    ("lower", Cell::F(report.bracket.lower)),
                    ("upper", Cell::F(report.bracket.upper)),
                    ("width", Cell::F(report.bracket.width())),
                    ("terms", Cell::U(report.bracket.terms)),
                    ("converged", Cell::B(report.bracket.converged)),
                    ("geo_verified", Cell::B(report.geo_verified)),
                    ("ana_verified", Cell::B(report.ana_verified)),
                    ("geo_strict", Cell::B(report.geo_strict)),
                    ("ana_strict", Cell::B(report.ana_strict)),
                    ("verdict", Cell::S(if passed { "pass".into() } else { "fail".into() })),
                ],
                format,
            );
            emit(&out, &content)?;
            Ok(if passed { 0 } else { 2 })
        }
        Cmd::Crossover { m, k, a_min, a_max, tol } => {
            let params = PowerParams::new(m, k, 1.0)?;
            let lo = resolve(a_min, &cfg, "a-min", 1e-6)?;
            let hi = resolve(a_max, &cfg, "a-max", 1e6)?;
            let tol = resolve(tol, &cfg, "tol", 1e-6)?;
            let found = crossover(&params, lo, hi, tol)?;
            let log_ratio = |a: f64| -> Result<f64> {
                let p = params.with_a(a)?;
                Ok((b_ana(&p)? / b_geo(&p)?).ln())
            };
            let content = render_record(
                &[
                    ("m", Cell::I(m)),
                    ("k", Cell::I(k)),
                    ("a_min", Cell::F(lo)),
                    ("a_max", Cell::F(hi)),
                    ("log_ratio_at_min", Cell::F(log_ratio(lo)?)),
                    ("log_ratio_at_max", Cell::F(log_ratio(hi)?)),
                    ("found", Cell::B(found.is_some())),
                    ("crossover", found.map_or(Cell::None, Cell::F)),
                ],
                format,
            );
            emit(&out, &content)?;
            Ok(0)
        }
        Cmd::Sweep { m, k, a_min, a_max, points, columns, tol, terms } => {
            let params = PowerParams::new(m, k, 1.0)?;
            let lo = resolve(a_min, &cfg, "a-min", 0.1)?;
            let hi = resolve(a_max, &cfg, "a-max", 100.0)?;
            let points = points
                .map(Ok)
                .unwrap_or_else(|| config::get(&cfg, "points").map(|v| v.unwrap_or(17)))?;
            if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
                bail!("sweep needs 0 < a-min < a-max, got [{lo}, {hi}]");
            }
            if points < 2 {
                bail!("sweep needs at least 2 points, got {points}");
            }
            let spec = columns
                .or_else(|| cfg.get("columns").cloned())
                .unwrap_or_else(|| "a,b_geo,b_ana,ratio".into());
            let mut cols = parse_columns(&spec)?;
            let wants_series = cols.iter().any(|c| matches!(c, Col::SLower | Col::SUpper));
            if wants_series && !params.series_convergent() {
                eprintln!(
                    "warning: dropping series columns: the series diverges for m = {m}, \
                     k = {k} (convergence requires k < 2m)"
                );
                cols.retain(|c| !matches!(c, Col::SLower | Col::SUpper));
                if cols.is_empty() {
                    bail!("no sweep columns left after dropping the series columns");
                }
            }
            let opts = eval_opts(tol, terms, &cfg)?;
            let header: Vec<String> = cols.iter().map(|c| c.name().to_string()).collect();
            let mut rows = Vec::with_capacity(points);
            for i in 0..points {
                let la = lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64;
                let a = la.exp();
                let p = params.with_a(a)?;
                let geo = b_geo(&p)?;
                let ana = b_ana(&p)?;
                let bracket = if cols.iter().any(|c| matches!(c, Col::SLower | Col::SUpper)) {
                    Some(s_bracket(&p, &opts)?)
                } else {
                    None
                };
                let row: Vec<Cell> = cols
                    .iter()
                    .map(|c| match c {
                        Col::A => Cell::F(a),
                        Col::BGeo => Cell::F(geo),
                        Col::BAna => Cell::F(ana),
                        Col::Ratio => Cell::F(ana / geo),
                        Col::SLower => Cell::F(bracket.as_ref().unwrap().lower),
                        Col::SUpper => Cell::F(bracket.as_ref().unwrap().upper),
                    })
                    .collect();
                rows.push(row);
            }
            emit(&out, &render_rows(&header, &rows, format))?;
            Ok(0)
        }
        Cmd::Check { quick } => Ok(check::run(quick)),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Col {
    A,
    BGeo,
    BAna,
    Ratio,
    SLower,
    SUpper,
}

impl Col {
    fn name(self) -> &'static str {
        match self {
            Col::A => "a",
            Col::BGeo => "b_geo",
            Col::BAna => "b_ana",
            Col::Ratio => "ratio",
            Col::SLower => "s_lower",
            Col::SUpper => "s_upper",
        }
    }
}

fn parse_columns(spec: &str) -> Result<Vec<Col>> {
    let mut cols = Vec::new();
    for name in spec.split(',') {
        let col = match name.trim() {
            "a" => Col::A,
            "b_geo" => Col::BGeo,
            "b_ana" => Col::BAna,
            "ratio" => Col::Ratio,
            "s_lower" => Col::SLower,
            "s_upper" => Col::SUpper,
            other => bail!(
                "unknown sweep column {other:?} (choose from a, b_geo, b_ana, ratio, \
                 s_lower, s_upper)"
            ),
        };
        if !cols.contains(&col) {
            cols.push(col);
        }
    }
    if cols.is_empty() {
        bail!("no sweep columns selected");
    }
    Ok(cols)
}

fn resolve(flag: Option<f64>, cfg: &Cfg, key: &str, default: f64) -> Result<f64> {
    Ok(flag.or(config::get(cfg, key)?).unwrap_or(default))
}

fn eval_opts(tol: Option<f64>, terms: Option<u64>, cfg: &Cfg) -> Result<EvalOptions> {
    let opts = EvalOptions {
        abs_tol: tol.or(config::get(cfg, "tol")?).unwrap_or(1e-6),
        max_terms: terms.or(config::get(cfg, "terms")?).unwrap_or(10_000_000),
        quad_points: config::get(cfg, "quad-points")?.unwrap_or(16),
    };
    opts.validate()?;
    Ok(opts)
}

fn resolve_format(flag: Option<Format>, cfg: &Cfg) -> Result<Format> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match cfg.get("format").map(String::as_str) {
        None => Ok(Format::Human),
        Some("human") => Ok(Format::Human),
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => bail!("config key format = {other:?}: expected human, csv or json"),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}
