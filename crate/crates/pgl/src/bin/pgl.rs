//! Command-line front end: parse a game instance, run the solvers,
//! enumerations, and certificate suites, and emit JSON or CSV.
//!
//! Exit codes: 0 success (and all certificates pass), 2 invalid input,
//! 3 solver failure, 4 certificate failure, 5 i/o failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pgl::analysis::altruistic_sufficient_support;
use pgl::analysis::{altruistic_poa_growth, selfish_poa, AltruisticGrowthEntry, PoaReport};
use pgl::curve::{curve_series, default_quartet, CurveSeries};
use pgl::epidemic::final_size;
use pgl::equilibrium::{
    altruistic_stability_interval, enumerate_uniform_ess, max_selfish_support, EssRecord,
    SelfishSupportBound,
};
use pgl::output::{fmt_f64, render_json, write_output, CsvDoc, Format};
use pgl::verify::{run_suite, VerifyGrid, VerifyReport};
use pgl::{Error, GameParams, PopulationType};

const EXIT_OK: i32 = 0;
const EXIT_BAD_INPUT: i32 = 2;
const EXIT_SOLVER: i32 = 3;
const EXIT_CERTIFICATE: i32 = 4;
const EXIT_IO: i32 = 5;

#[derive(Parser)]
#[command(
    name = "pgl",
    version,
    about = "Pandemic location game: final sizes, stable states, price-of-anarchy certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

fn parse_population(s: &str) -> Result<PopulationType, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the final-size relation at one density
    Solve {
        /// Basic reproduction number
        #[arg(long)]
        r0: f64,
        /// Initial infected fraction (0 runs the disease-free diagnostic)
        #[arg(long)]
        eta: f64,
        /// Isolation cost coefficient
        #[arg(long)]
        c: f64,
        /// Location density
        #[arg(long)]
        x: f64,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate uniform evolutionarily stable states
    Ess {
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        c: f64,
        /// Population type: selfish or altruistic
        #[arg(long = "type", value_parser = parse_population)]
        population: PopulationType,
        /// Largest support size to scan
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price-of-anarchy certificates (selfish) or growth table (altruistic)
    Poa {
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        c: f64,
        #[arg(long = "type", value_parser = parse_population)]
        population: PopulationType,
        /// Support sizes for the altruistic growth table, comma separated
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cost-curve samples with equilibrium markers, for plotting
    Curve {
        /// Basic reproduction number (omit all three for the default quartet)
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        /// Number of density samples per series
        #[arg(long, default_value_t = 500)]
        grid: usize,
        /// Largest support size scanned for markers
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the numerical certificate suite over a parameter grid
    Verify {
        /// Values per axis for a refined grid (omit for the default grid)
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    std::process::exit(match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    });
}

/// `PGL_THREADS` caps sweep concurrency; default is machine parallelism.
fn configure_threads() {
    if let Ok(raw) = std::env::var("PGL_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring PGL_THREADS={raw:?} (expected a positive integer)"),
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter { .. }
        | Error::DomainDensity { .. }
        | Error::InvalidAllocation(_)
        | Error::DegenerateCurvature => EXIT_BAD_INPUT,
        Error::SolverFailure { .. } | Error::SingularDerivative { .. } => EXIT_SOLVER,
        Error::Io(_) | Error::Serialize(_) => EXIT_IO,
    }
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Cmd::Solve {
            r0,
            eta,
            c,
            x,
            format,
            out,
        } => cmd_solve(r0, eta, c, x, format, out.as_deref()),
        Cmd::Ess {
            r0,
            eta,
            c,
            population,
            n_max,
            format,
            out,
        } => cmd_ess(r0, eta, c, population, n_max, format, out.as_deref()),
        Cmd::Poa {
            r0,
            eta,
            c,
            population,
            k,
            n_max,
            format,
            out,
        } => cmd_poa(r0, eta, c, population, k, n_max, format, out.as_deref()),
        Cmd::Curve {
            r0,
            eta,
            c,
            grid,
            n_max,
            format,
            out,
        } => cmd_curve(r0, eta, c, grid, n_max, format, out.as_deref()),
        Cmd::Verify { grid, format, out } => cmd_verify(grid, format, out.as_deref()),
    }
}

#[derive(Serialize, Deserialize)]
struct SolveMeta {
    command: String,
    r0: f64,
    eta: f64,
    c: f64,
    x: f64,
}

fn cmd_solve(
    r0: f64,
    eta: f64,
    c: f64,
    x: f64,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let params = GameParams::diagnostic(r0, eta, c)?;
    let sol = final_size(x, &params)?;
    let meta = SolveMeta {
        command: "solve".into(),
        r0,
        eta,
        c,
        x,
    };
    let text = match format {
        Format::Json => render_json(&meta, &sol)?,
        Format::Csv => {
            let mut doc = CsvDoc::new("x,r_inf,p,residual,r_prime,r_double_prime");
            doc.comment("command", "solve");
            doc.comment("r0", fmt_f64(r0));
            doc.comment("eta", fmt_f64(eta));
            doc.comment("c", fmt_f64(c));
            doc.row(&[
                fmt_f64(sol.x),
                fmt_f64(sol.r_inf),
                fmt_f64(sol.p),
                fmt_f64(sol.residual),
                fmt_f64(sol.r_prime),
                fmt_f64(sol.r_double_prime),
            ]);
            doc.render()
        }
    };
    write_output(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize, Deserialize)]
struct EssMeta {
    command: String,
    r0: f64,
    eta: f64,
    c: f64,
    population: PopulationType,
    n_max: usize,
}

#[derive(Serialize, Deserialize)]
struct EssData {
    records: Vec<EssRecord>,
    /// Selfish populations: the support bound and its threshold density.
    #[serde(skip_serializing_if = "Option::is_none")]
    support_bound: Option<SelfishSupportBound>,
    /// Altruistic populations: the convexity interval endpoint.
    #[serde(skip_serializing_if = "Option::is_none")]
    stability_interval: Option<f64>,
    /// Altruistic populations: smallest support size certified stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    sufficient_support: Option<usize>,
}

fn ess_csv(doc: &mut CsvDoc, records: &[EssRecord]) {
    for r in records {
        doc.row(&[
            r.population.to_string(),
            r.support_size.to_string(),
            fmt_f64(r.density),
            fmt_f64(r.location_cost),
            fmt_f64(r.social_cost),
            fmt_f64(r.stability_margin),
        ]);
    }
}

fn cmd_ess(
    r0: f64,
    eta: f64,
    c: f64,
    population: PopulationType,
    n_max: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let params = GameParams::diagnostic(r0, eta, c)?;
    let records = enumerate_uniform_ess(&params, population, n_max)?;
    let mut data = EssData {
        records,
        support_bound: None,
        stability_interval: None,
        sufficient_support: None,
    };
    match population {
        PopulationType::Selfish => {
            data.support_bound = Some(max_selfish_support(&params)?);
        }
        PopulationType::Altruistic => {
            data.stability_interval = match altruistic_stability_interval(&params) {
                Ok(a) => Some(a),
                Err(Error::DegenerateCurvature) => None,
                Err(e) => return Err(e),
            };
            data.sufficient_support = altruistic_sufficient_support(&params, n_max)?;
        }
    }
    let meta = EssMeta {
        command: "ess".into(),
        r0,
        eta,
        c,
        population,
        n_max,
    };
    let text = match format {
        Format::Json => render_json(&meta, &data)?,
        Format::Csv => {
            let mut doc = CsvDoc::new(
                "population,support_size,density,location_cost,social_cost,stability_margin",
            );
            doc.comment("command", "ess");
            doc.comment("r0", fmt_f64(r0));
            doc.comment("eta", fmt_f64(eta));
            doc.comment("c", fmt_f64(c));
            doc.comment("population", population);
            doc.comment("n_max", n_max);
            if let Some(bound) = &data.support_bound {
                doc.comment("m_g", bound.m_g);
                if let Some(x_bar) = bound.x_bar {
                    doc.comment("x_bar", fmt_f64(x_bar));
                }
            }
            if let Some(a) = data.stability_interval {
                doc.comment("stability_interval", fmt_f64(a));
            }
            if let Some(n0) = data.sufficient_support {
                doc.comment("sufficient_support", n0);
            }
            ess_csv(&mut doc, &data.records);
            doc.render()
        }
    };
    write_output(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize, Deserialize)]
struct PoaMeta {
    command: String,
    r0: f64,
    eta: f64,
    c: f64,
    population: PopulationType,
    n_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<Vec<usize>>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_poa(
    r0: f64,
    eta: f64,
    c: f64,
    population: PopulationType,
    k: Option<Vec<usize>>,
    n_max: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let params = GameParams::new(r0, eta, c)?;
    match population {
        PopulationType::Selfish => {
            let report = selfish_poa(&params, n_max)?;
            let meta = PoaMeta {
                command: "poa".into(),
                r0,
                eta,
                c,
                population,
                n_max,
                k: None,
            };
            let text = match format {
                Format::Json => render_json(&meta, &report)?,
                Format::Csv => selfish_poa_csv(&meta, &report),
            };
            write_output(out, &text)?;
            let ok = report.bound_satisfied && report.ess_cost_bound_satisfied;
            if !ok {
                eprintln!(
                    "certificate failure at r0={r0} eta={eta} c={c}: \
                     worst stable cost {} against bounds {} and {}",
                    report.worst_ess_cost, report.ess_cost_bound, report.theorem_bound
                );
            }
            Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
        }
        PopulationType::Altruistic => {
            let Some(sizes) = k.filter(|s| !s.is_empty()) else {
                return Err(Error::InvalidParameter {
                    name: "k",
                    value: 0.0,
                    constraint: "a nonempty support-size list for altruistic tables",
                });
            };
            let entries = altruistic_poa_growth(&params, &sizes, n_max)?;
            let meta = PoaMeta {
                command: "poa".into(),
                r0,
                eta,
                c,
                population,
                n_max,
                k: Some(sizes),
            };
            let text = match format {
                Format::Json => render_json(&meta, &entries)?,
                Format::Csv => {
                    let mut doc = CsvDoc::new("support_size,is_ess,social_cost,ratio,floor");
                    doc.comment("command", "poa");
                    doc.comment("r0", fmt_f64(r0));
                    doc.comment("eta", fmt_f64(eta));
                    doc.comment("c", fmt_f64(c));
                    doc.comment("population", population);
                    for e in &entries {
                        doc.row(&[
                            e.support_size.to_string(),
                            e.is_ess.to_string(),
                            fmt_f64(e.social_cost),
                            fmt_f64(e.ratio),
                            fmt_f64(e.floor),
                        ]);
                    }
                    doc.render()
                }
            };
            write_output(out, &text)?;
            // Sizes that fail the stability check are per-entry markers;
            // a verified entry below its floor is a certificate failure.
            let ok = entries
                .iter()
                .filter(|e| e.is_ess)
                .all(|e: &AltruisticGrowthEntry| e.ratio >= e.floor);
            Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
        }
    }
}

fn selfish_poa_csv(meta: &PoaMeta, report: &PoaReport) -> String {
    let mut doc = CsvDoc::new(
        "worst_ess_cost,worst_ess_support,opt_lower,opt_upper,opt_argmin_support,\
         poa_lower,poa_upper_estimate,theorem_bound,bound_satisfied,\
         ess_cost_bound,ess_cost_bound_satisfied",
    );
    doc.comment("command", "poa");
    doc.comment("r0", fmt_f64(meta.r0));
    doc.comment("eta", fmt_f64(meta.eta));
    doc.comment("c", fmt_f64(meta.c));
    doc.comment("population", meta.population);
    doc.row(&[
        fmt_f64(report.worst_ess_cost),
        report.worst_ess_support.to_string(),
        fmt_f64(report.opt_lower),
        fmt_f64(report.opt_upper),
        report.opt_argmin_support.to_string(),
        fmt_f64(report.poa_lower),
        fmt_f64(report.poa_upper_estimate),
        fmt_f64(report.theorem_bound),
        report.bound_satisfied.to_string(),
        fmt_f64(report.ess_cost_bound),
        report.ess_cost_bound_satisfied.to_string(),
    ]);
    doc.render()
}

#[derive(Serialize, Deserialize)]
struct CurveMeta {
    command: String,
    grid: usize,
    n_max: usize,
    /// True when no parameters were given and the built-in quartet was
    /// used; the exact sets are the implementation's choice.
    default_quartet: bool,
    series: Vec<GameParams>,
}

fn cmd_curve(
    r0: Option<f64>,
    eta: Option<f64>,
    c: Option<f64>,
    grid: usize,
    n_max: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let (sets, used_default) = match (r0, eta, c) {
        (Some(r0), Some(eta), Some(c)) => (vec![GameParams::new(r0, eta, c)?], false),
        (None, None, None) => (default_quartet(), true),
        _ => {
            return Err(Error::InvalidParameter {
                name: "r0/eta/c",
                value: f64::NAN,
                constraint: "either all of --r0 --eta --c or none (default quartet)",
            })
        }
    };

    let mut series = Vec::with_capacity(sets.len());
    for params in &sets {
        series.push(curve_series(params, grid, n_max)?);
    }
    let meta = CurveMeta {
        command: "curve".into(),
        grid,
        n_max,
        default_quartet: used_default,
        series: sets,
    };

    match format {
        Format::Json => {
            let text = render_json(&meta, &series)?;
            write_output(out, &text)?;
        }
        Format::Csv => {
            let (samples_doc, markers_doc) = curve_csv(&meta, &series);
            match out {
                Some(path) => {
                    write_output(Some(path), &samples_doc.render())?;
                    let marker_path = PathBuf::from(format!("{}.markers", path.display()));
                    write_output(Some(&marker_path), &markers_doc.render())?;
                }
                None => {
                    let mut text = samples_doc.render();
                    text.push('\n');
                    text.push_str(&markers_doc.render());
                    write_output(None, &text)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn curve_csv(meta: &CurveMeta, series: &[CurveSeries]) -> (CsvDoc, CsvDoc) {
    let mut samples = CsvDoc::new("series,x,selfish_total,isolation,infection,altruistic_marginal");
    let mut markers =
        CsvDoc::new("series,population,support_size,density,curve_cost,location_cost");
    for doc in [&mut samples, &mut markers] {
        doc.comment("command", "curve");
        doc.comment("grid", meta.grid);
        doc.comment("n_max", meta.n_max);
        doc.comment("default_quartet", meta.default_quartet);
        for (idx, params) in meta.series.iter().enumerate() {
            doc.comment(
                &format!("series{idx}"),
                format!(
                    "r0={} eta={} c={}",
                    fmt_f64(params.r0()),
                    fmt_f64(params.eta()),
                    fmt_f64(params.c())
                ),
            );
        }
    }
    for (idx, s) in series.iter().enumerate() {
        for sample in &s.samples {
            samples.row(&[
                idx.to_string(),
                fmt_f64(sample.x),
                fmt_f64(sample.selfish_total),
                fmt_f64(sample.isolation),
                fmt_f64(sample.infection),
                fmt_f64(sample.altruistic_marginal),
            ]);
        }
        for marker in &s.markers {
            markers.row(&[
                idx.to_string(),
                marker.population.to_string(),
                marker.support_size.to_string(),
                fmt_f64(marker.density),
                fmt_f64(marker.curve_cost),
                fmt_f64(marker.location_cost),
            ]);
        }
    }
    (samples, markers)
}

#[derive(Serialize, Deserialize)]
struct VerifyMeta {
    command: String,
    grid: VerifyGrid,
}

fn cmd_verify(grid: Option<usize>, format: Format, out: Option<&Path>) -> Result<i32, Error> {
    let grid = match grid {
        Some(n) if n < 2 => {
            return Err(Error::InvalidParameter {
                name: "grid",
                value: n as f64,
                constraint: ">= 2 values per axis",
            })
        }
        Some(n) => VerifyGrid::refined(n),
        None => VerifyGrid::default(),
    };
    let report = run_suite(&grid)?;
    let meta = VerifyMeta {
        command: "verify".into(),
        grid,
    };
    let text = match format {
        Format::Json => render_json(&meta, &report)?,
        Format::Csv => verify_csv(&report),
    };
    write_output(out, &text)?;
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        for row in report.failures() {
            eprintln!(
                "FAIL {} at r0={} eta={}{}: observed {} against {}",
                row.check,
                row.r0,
                row.eta,
                row.c.map(|c| format!(" c={c}")).unwrap_or_default(),
                row.observed,
                row.bound
            );
        }
        eprintln!(
            "verify: {} of {} checks failed",
            report.failed,
            report.rows.len()
        );
        Ok(EXIT_CERTIFICATE)
    }
}

fn verify_csv(report: &VerifyReport) -> String {
    let mut doc = CsvDoc::new("check,r0,eta,c,passed,observed,bound");
    doc.comment("command", "verify");
    doc.comment("passed", report.passed);
    doc.comment("failed", report.failed);
    for row in &report.rows {
        doc.row(&[
            row.check.to_string(),
            fmt_f64(row.r0),
            fmt_f64(row.eta),
            row.c.map(fmt_f64).unwrap_or_default(),
            row.passed.to_string(),
            fmt_f64(row.observed),
            fmt_f64(row.bound),
        ]);
    }
    doc.render()
}
