//! `meub` — bound tables, moment tables, entropy estimates, and randomized
//! bound-comparison experiments for univariate Gaussian mixtures.
//!
//! Mixture files are plain text (`w mu sigma` per line, `#` comments) or
//! JSON (`{"components":[{"w":…,"mu":…,"sigma":…},…]}`). Results go to
//! standard output, diagnostics to standard error. Exit codes: 0 success,
//! 2 unreadable/unparseable input, 3 invalid mixture or parameter domain,
//! 4 numerical failure.

use clap::{Parser, Subcommand, ValueEnum};
use meub::bounds::{bound_series, optimize_shift, BoundSeries};
use meub::estimators::{mc_abs_moment, mc_entropy, quad_abs_moment, quad_entropy};
use meub::experiment::{run_experiment, ExperimentConfig};
use meub::{Error, Gmm, McConfig, QuadConfig};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "meub",
    version,
    about = "Closed-form maximum-entropy upper bounds on the differential entropy of univariate Gaussian mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Mc,
    Quad,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    None,
    Quad,
    Mc,
    Both,
}

#[derive(Clone, Copy, Debug)]
enum DeltaArg {
    Mean,
    Optimize,
    Value(f64),
}

fn parse_delta(s: &str) -> Result<DeltaArg, String> {
    match s {
        "mean" => Ok(DeltaArg::Mean),
        "optimize" => Ok(DeltaArg::Optimize),
        other => other
            .parse()
            .map(DeltaArg::Value)
            .map_err(|_| format!("expected `mean`, `optimize`, or a number, got `{other}`")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bound series U_1..U_lmax, the best (minimal) bound, and skipped orders
    Bounds {
        /// Mixture file (text `w mu sigma` lines or JSON)
        mixture: PathBuf,
        /// Highest bound order to compute
        #[arg(long, default_value_t = 10)]
        lmax: u32,
        /// Shift: `mean`, `optimize` (refine the best order's shift), or a number
        #[arg(long, default_value = "mean", value_parser = parse_delta)]
        delta: DeltaArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also report the quadrature entropy and the bound margin
        #[arg(long)]
        verify: bool,
    },
    /// Closed-form raw absolute moments, optionally checked against oracles
    Moments {
        mixture: PathBuf,
        /// Highest moment order (table covers 0..=lmax)
        #[arg(long, default_value_t = 10)]
        lmax: u32,
        /// Shift subtracted from the component means
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Oracle(s) to compare against
        #[arg(long, value_enum, default_value_t = VerifyMode::None)]
        verify: VerifyMode,
        /// Monte-Carlo samples (when verifying with `mc` or `both`)
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Seed; defaults to MEUB_SEED or 42
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Differential entropy estimate by Monte-Carlo or quadrature
    Entropy {
        mixture: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Seed; defaults to MEUB_SEED or 42
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Randomized comparison of the Laplacian and Gaussian bounds
    Experiment {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Monte-Carlo samples per trial
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Master seed; defaults to MEUB_SEED or 42
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        components: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::InvalidMixture(_) | Error::Domain(_) => 3,
        _ => 4,
    }
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Bounds {
            mixture,
            lmax,
            delta,
            format,
            verify,
        } => cmd_bounds(&mixture, lmax, delta, format, verify),
        Command::Moments {
            mixture,
            lmax,
            delta,
            verify,
            samples,
            seed,
            format,
        } => cmd_moments(
            &mixture,
            lmax,
            delta,
            verify,
            samples,
            resolve_seed(seed)?,
            format,
        ),
        Command::Entropy {
            mixture,
            method,
            samples,
            seed,
            format,
        } => cmd_entropy(&mixture, method, samples, resolve_seed(seed)?, format),
        Command::Experiment {
            trials,
            samples,
            seed,
            components,
            format,
        } => cmd_experiment(trials, samples, resolve_seed(seed)?, components, format),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("MEUB_SEED") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| Error::Parse(format!("MEUB_SEED=`{raw}` is not a valid 64-bit seed"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_mixture(path: &Path) -> Result<Gmm, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Gmm::parse_str(&text)
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Verification {
    entropy_quad: f64,
    margin: f64,
}

#[derive(Serialize)]
struct BoundsOutput {
    #[serde(flatten)]
    series: BoundSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<Verification>,
}

fn cmd_bounds(
    path: &Path,
    lmax: u32,
    delta: DeltaArg,
    format: Format,
    verify: bool,
) -> Result<(), Error> {
    let g = read_mixture(path)?;
    let series = match delta {
        DeltaArg::Mean => bound_series(&g, lmax, g.mean())?,
        DeltaArg::Value(v) => bound_series(&g, lmax, v)?,
        DeltaArg::Optimize => {
            // Refine the shift for whichever order wins under mean-centering,
            // then recompute the whole series at the refined shift.
            let centered = bound_series(&g, lmax, g.mean())?;
            let optimum = optimize_shift(&g, centered.best_order(), None)?;
            bound_series(&g, lmax, optimum.shift)?
        }
    };
    let verification = if verify {
        let entropy_quad = quad_entropy(&g, &QuadConfig::default())?;
        Some(Verification {
            entropy_quad,
            margin: series.best_value() - entropy_quad,
        })
    } else {
        None
    };

    match format {
        Format::Json => {
            let out = BoundsOutput {
                series,
                verify: verification,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
        }
        Format::Csv => {
            println!("order,value,status");
            for e in series.entries() {
                println!("{},{},ok", e.order, e.value);
            }
            for s in series.skipped() {
                println!("{},,overflow", s.order);
            }
            println!("# shift={}", series.shift());
            println!("# best_order={}", series.best_order());
            println!("# best_value={}", series.best_value());
            if let Some(v) = &verification {
                println!("# entropy_quad={}", v.entropy_quad);
                println!("# margin={}", v.margin);
            }
        }
        Format::Table => {
            println!("{:>5}  {:>14}", "order", "bound");
            for e in series.entries() {
                println!("{:>5}  {:>14.6}", e.order, e.value);
            }
            for s in series.skipped() {
                println!("{:>5}  {:>14}  {}", s.order, "-", s.reason);
            }
            println!();
            println!("shift       {:.6}", series.shift());
            println!("best order  {}", series.best_order());
            println!("best value  {:.6}", series.best_value());
            if let Some(v) = &verification {
                println!("entropy     {:.6}  (adaptive quadrature)", v.entropy_quad);
                println!("margin      {:.6}", v.margin);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct MomentRow {
    order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    err_quad_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    err_mc_pct: Option<f64>,
}

#[derive(Serialize)]
struct MomentsOutput {
    shift: f64,
    samples: u64,
    seed: u64,
    rows: Vec<MomentRow>,
}

fn cmd_moments(
    path: &Path,
    lmax: u32,
    delta: f64,
    verify: VerifyMode,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<(), Error> {
    let g = read_mixture(path)?;
    let with_quad = matches!(verify, VerifyMode::Quad | VerifyMode::Both);
    let with_mc = matches!(verify, VerifyMode::Mc | VerifyMode::Both);
    let quad_cfg = QuadConfig::default();

    let mut rows = Vec::with_capacity(lmax as usize + 1);
    for order in 0..=lmax {
        let formula = g.abs_moment(order, delta).ok();
        let mut row = MomentRow {
            order,
            formula,
            quad: None,
            err_quad_pct: None,
            mc: None,
            mc_std_error: None,
            err_mc_pct: None,
        };
        // Oracle columns only exist where the closed form is finite; rows
        // past the overflow order are flagged, not silently dropped.
        if let Some(f) = formula {
            if with_quad {
                let q = quad_abs_moment(&g, order, delta, &quad_cfg)?;
                row.quad = Some(q);
                row.err_quad_pct = Some(100.0 * ((f - q) / q).abs());
            }
            if with_mc {
                let est = mc_abs_moment(&g, order, delta, &McConfig::new(samples, seed));
                row.mc = Some(est.value);
                row.mc_std_error = Some(est.std_error);
                row.err_mc_pct = Some(100.0 * ((f - est.value) / est.value).abs());
            }
        }
        rows.push(row);
    }

    match format {
        Format::Json => {
            let out = MomentsOutput {
                shift: delta,
                samples,
                seed,
                rows,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
        }
        Format::Csv => {
            println!("order,formula,quad,err_quad_pct,mc,mc_std_error,err_mc_pct");
            for r in rows {
                let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                println!(
                    "{},{},{},{},{},{},{}",
                    r.order,
                    r.formula
                        .map(|x| x.to_string())
                        .unwrap_or_else(|| "overflow".into()),
                    cell(r.quad),
                    cell(r.err_quad_pct),
                    cell(r.mc),
                    cell(r.mc_std_error),
                    cell(r.err_mc_pct)
                );
            }
        }
        Format::Table => {
            let mut header = format!("{:>5}  {:>18}", "order", "formula");
            if with_quad {
                write!(header, "  {:>18}  {:>12}", "quad", "err quad %").unwrap();
            }
            if with_mc {
                write!(
                    header,
                    "  {:>18}  {:>12}  {:>12}",
                    "mc", "mc se", "err mc %"
                )
                .unwrap();
            }
            println!("{header}");
            for r in rows {
                let mut line = match r.formula {
                    Some(f) => format!("{:>5}  {:>18.6}", r.order, f),
                    None => format!("{:>5}  {:>18}", r.order, "overflow"),
                };
                if with_quad {
                    match (r.quad, r.err_quad_pct) {
                        (Some(q), Some(e)) => write!(line, "  {q:>18.6}  {e:>12.6}").unwrap(),
                        _ => write!(line, "  {:>18}  {:>12}", "-", "-").unwrap(),
                    }
                }
                if with_mc {
                    match (r.mc, r.mc_std_error, r.err_mc_pct) {
                        (Some(m), Some(se), Some(e)) => {
                            write!(line, "  {m:>18.6}  {se:>12.6}  {e:>12.6}").unwrap()
                        }
                        _ => write!(line, "  {:>18}  {:>12}  {:>12}", "-", "-", "-").unwrap(),
                    }
                }
                println!("{line}");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EntropyOutput {
    method: &'static str,
    estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn cmd_entropy(
    path: &Path,
    method: Method,
    samples: u64,
    seed: u64,
    format: Format,
) -> Result<(), Error> {
    let g = read_mixture(path)?;
    let out = match method {
        Method::Quad => EntropyOutput {
            method: "quad",
            estimate: quad_entropy(&g, &QuadConfig::default())?,
            std_error: None,
            samples: None,
            seed: None,
        },
        Method::Mc => {
            let est = mc_entropy(&g, &McConfig::new(samples, seed));
            EntropyOutput {
                method: "mc",
                estimate: est.value,
                std_error: Some(est.std_error),
                samples: Some(samples),
                seed: Some(seed),
            }
        }
    };
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        ),
        Format::Csv => {
            println!("method,estimate,std_error,samples,seed");
            println!(
                "{},{},{},{},{}",
                out.method,
                out.estimate,
                out.std_error.map(|v| v.to_string()).unwrap_or_default(),
                out.samples.map(|v| v.to_string()).unwrap_or_default(),
                out.seed.map(|v| v.to_string()).unwrap_or_default()
            );
        }
        Format::Table => {
            println!("entropy    {:.6}  ({})", out.estimate, out.method);
            if let Some(se) = out.std_error {
                println!("std error  {se:.6}");
            }
            if let (Some(s), Some(seed)) = (out.samples, out.seed) {
                println!("samples    {s}");
                println!("seed       {seed}");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

fn cmd_experiment(
    trials: u64,
    samples: u64,
    seed: u64,
    components: u32,
    format: Format,
) -> Result<(), Error> {
    let report = run_experiment(&ExperimentConfig {
        trials,
        samples,
        components,
        seed,
    })?;
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            )
        }
        Format::Csv => {
            println!(
                "trials,samples_per_trial,components,seed,mean_excess_u1_pct,mean_excess_u2_pct,u1_beats_u2_fraction,averaged_trials,excluded_near_zero_entropy"
            );
            let pct = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            println!(
                "{},{},{},{},{},{},{},{},{}",
                report.trials,
                report.samples_per_trial,
                report.components,
                report.seed,
                pct(report.mean_excess_u1_pct),
                pct(report.mean_excess_u2_pct),
                report.u1_beats_u2_fraction,
                report.averaged_trials,
                report.excluded_near_zero_entropy
            );
        }
        Format::Table => {
            println!("trials                {}", report.trials);
            println!("samples per trial     {}", report.samples_per_trial);
            println!("components            {}", report.components);
            println!("seed                  {}", report.seed);
            match report.mean_excess_u1_pct {
                Some(v) => println!("mean excess U1        {v:.2}%"),
                None => println!("mean excess U1        n/a"),
            }
            match report.mean_excess_u2_pct {
                Some(v) => println!("mean excess U2        {v:.2}%"),
                None => println!("mean excess U2        n/a"),
            }
            println!(
                "U1 beats U2           {:.1}%",
                100.0 * report.u1_beats_u2_fraction
            );
            println!("averaged trials       {}", report.averaged_trials);
            println!(
                "excluded (|H| < 1e-3) {}",
                report.excluded_near_zero_entropy
            );
        }
    }
    Ok(())
}
