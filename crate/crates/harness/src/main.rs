//! `dos` — estimate false-null proportions from p-value files, run adaptive
//! BH, reproduce the simulation tables, and evaluate asymptotic limits.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dos_core::asymptotics::{check_a2, ideal_changepoint, QuantileModel};
use dos_core::error::Error as CoreError;
use dos_core::estimators::{
    dos_storey, jd_bootstrap, jd_default_grid, lsl, storey_at, storey_median, udos,
    DosParams, JD_DEFAULT_B,
};
use dos_core::fdr::adaptive_bh;
use dos_core::PValueSample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dos_harness::config::OutputFormat;
use dos_harness::io::{read_pvalues, InputFormat};
use dos_harness::{report, ExperimentConfig, HarnessError};

#[derive(Parser)]
#[command(
    name = "dos",
    about = "Difference-of-slopes change-point estimation of the false null proportion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the false null proportion from a p-value file.
    Estimate {
        /// Path to the p-value file.
        #[arg(long)]
        input: PathBuf,
        /// Input layout: plain | csv:COLUMN.
        #[arg(long, default_value = "plain")]
        format: String,
        /// Estimator: dos | udos | storey | st-med | lsl | jd.
        #[arg(long)]
        method: String,
        /// DOS exponent in [1/2, 1].
        #[arg(long)]
        alpha: Option<f64>,
        /// Fraction of leading DOS indices excluded, in [0, 1/2).
        #[arg(long)]
        c: Option<f64>,
        /// Storey threshold in (0, 1).
        #[arg(long)]
        lambda: Option<f64>,
        /// Seed for the jd bootstrap.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Adaptive Benjamini-Hochberg on a p-value file.
    AdaptiveBh {
        #[arg(long)]
        input: PathBuf,
        /// Input layout: plain | csv:COLUMN.
        #[arg(long, default_value = "plain")]
        format: String,
        /// Target FDR level in (0, 1).
        #[arg(long)]
        level: f64,
        /// pi0 source: dos1 | dos05 | st-half | st-med | fixed:X.
        #[arg(long)]
        pi0_method: String,
    },
    /// Run a proportion-estimation experiment from a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output format: md | csv (overrides the config).
        #[arg(long)]
        out: Option<String>,
        /// Master seed (overrides the config).
        #[arg(long)]
        seed: Option<u64>,
        /// Replicates (overrides the config).
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Run an adaptive-BH FDR experiment from a TOML config.
    FdrSim {
        #[arg(long)]
        config: PathBuf,
        /// Target FDR level in (0, 1).
        #[arg(long)]
        level: f64,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Asymptotic limits of the DOS statistics for an analytic model.
    Asymptotics {
        /// Model: gaussian:PI1,MU1 | uniform:PI1,B | composite:PI1,MU0,MU1.
        #[arg(long)]
        model: String,
        /// DOS exponent in [1/2, 1].
        #[arg(long)]
        alpha: f64,
    },
    /// Sensitivity of the estimates to the exclusion fraction c.
    SweepC {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated c values in [0, 1/2).
        #[arg(long, value_delimiter = ',', required = true)]
        c_values: Vec<f64>,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run() -> Result<(), HarnessError> {
    match Cli::parse().command {
        Command::Estimate {
            input,
            format,
            method,
            alpha,
            c,
            lambda,
            seed,
        } => estimate(&input, &format, &method, alpha, c, lambda, seed),
        Command::AdaptiveBh {
            input,
            format,
            level,
            pi0_method,
        } => adaptive(&input, &format, level, &pi0_method),
        Command::Simulate {
            config,
            out,
            seed,
            reps,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let stats = cfg.into_experiment(seed, reps)?.run()?;
            match output_format(&cfg, out.as_deref())? {
                OutputFormat::Csv => print!("{}", report::render_csv(&stats)),
                OutputFormat::Markdown => print!("{}", report::render_markdown(&stats)),
            }
            Ok(())
        }
        Command::FdrSim {
            config,
            level,
            out,
            seed,
            reps,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let stats = cfg.into_experiment(seed, reps)?.run_fdr(level)?;
            match output_format(&cfg, out.as_deref())? {
                OutputFormat::Csv => print!("{}", report::render_csv(&stats)),
                OutputFormat::Markdown => print!("{}", report::render_markdown(&stats)),
            }
            Ok(())
        }
        Command::Asymptotics { model, alpha } => asymptotics(&model, alpha),
        Command::SweepC {
            config,
            c_values,
            out,
            seed,
            reps,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let rows = cfg.into_experiment(seed, reps)?.sweep_c(&c_values)?;
            match output_format(&cfg, out.as_deref())? {
                OutputFormat::Csv => print!("{}", report::render_sweep_csv(&rows)),
                OutputFormat::Markdown => {
                    print!("{}", report::render_sweep_markdown(&rows))
                }
            }
            Ok(())
        }
    }
}

fn output_format(
    cfg: &ExperimentConfig,
    flag: Option<&str>,
) -> Result<OutputFormat, HarnessError> {
    match flag {
        None => Ok(cfg.output),
        Some("csv") => Ok(OutputFormat::Csv),
        Some("md") | Some("markdown") => Ok(OutputFormat::Markdown),
        Some(other) => Err(HarnessError::Config(format!(
            "unknown output format {other:?}; expected csv or md"
        ))),
    }
}

fn load(input: &Path, format: &str) -> Result<PValueSample, HarnessError> {
    let format: InputFormat = format.parse()?;
    read_pvalues(input, &format)
}

fn estimate(
    input: &Path,
    format: &str,
    method: &str,
    alpha: Option<f64>,
    c: Option<f64>,
    lambda: Option<f64>,
    seed: u64,
) -> Result<(), HarnessError> {
    let sample = load(input, format)?;
    let n = sample.n() as f64;
    println!("# input: {} (n = {})", input.display(), sample.n());
    println!("# seed: {seed}");
    match method {
        "dos" => {
            let params = DosParams::new(alpha.unwrap_or(1.0), c.unwrap_or(0.0))?;
            let est = dos_storey(&sample, &params)?;
            println!("method: dos (alpha={}, c={})", params.alpha(), params.c());
            println!("k_hat: {}", est.k_hat);
            println!("lambda: {}", est.lambda);
            println!("pi1_raw: {}", est.pi1_raw);
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        "udos" => {
            let params = DosParams::new(alpha.unwrap_or(1.0), c.unwrap_or(0.0))?;
            let est = udos(&sample, &params)?;
            println!("method: udos (alpha={}, c={})", params.alpha(), params.c());
            println!("lambda: {}", est.lambda_used.unwrap_or(f64::NAN));
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        "storey" => {
            let l = lambda.unwrap_or(0.5);
            let est = storey_at(&sample, l)?;
            println!("method: storey (lambda={l})");
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        "st-med" => {
            let est = storey_median(&sample)?;
            println!("method: st-med (lambda={})", est.lambda_used.unwrap());
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        "lsl" => {
            let est = lsl(&sample)?;
            println!("method: lsl");
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        "jd" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let est = jd_bootstrap(&sample, &jd_default_grid(), JD_DEFAULT_B, &mut rng)?;
            println!("method: jd (B={JD_DEFAULT_B})");
            println!("pi1: {}", est.pi1);
            println!("count: {}", n * est.pi1);
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown method {other:?}; expected dos|udos|storey|st-med|lsl|jd"
            )))
        }
    }
    Ok(())
}

fn adaptive(
    input: &Path,
    format: &str,
    level: f64,
    pi0_method: &str,
) -> Result<(), HarnessError> {
    let sample = load(input, format)?;
    let pi0 = match pi0_method {
        "dos1" => dos_storey(&sample, &DosParams::new(1.0, 0.0)?)?.proportion().pi0,
        "dos05" => dos_storey(&sample, &DosParams::new(0.5, 0.0)?)?.proportion().pi0,
        "st-half" => storey_at(&sample, 0.5)?.pi0,
        "st-med" => storey_median(&sample)?.pi0,
        other => match other.strip_prefix("fixed:") {
            Some(x) => x.parse::<f64>().map_err(|e| {
                HarnessError::Config(format!("bad fixed pi0 {x:?}: {e}"))
            })?,
            None => {
                return Err(HarnessError::Config(format!(
                    "unknown pi0 method {other:?}; expected dos1|dos05|st-half|st-med|fixed:X"
                )))
            }
        },
    };
    let rejections = adaptive_bh(&sample, level, pi0)?;
    let mut indices = rejections.rejected_original_indices.clone();
    indices.sort_unstable();
    println!("# input: {} (n = {})", input.display(), sample.n());
    println!("pi0_method: {pi0_method}");
    println!("pi0_hat: {pi0}");
    println!("effective_level: {}", rejections.effective_level);
    println!("rejected_count: {}", rejections.rejected_count());
    println!(
        "rejected_indices: {}",
        indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

fn parse_model(spec: &str) -> Result<QuantileModel, HarnessError> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| {
        HarnessError::Config(format!(
            "bad model {spec:?}; expected kind:params, e.g. gaussian:0.1,3"
        ))
    })?;
    let params: Vec<f64> = rest
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| HarnessError::Config(format!("bad model parameter {p:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let expect = |k: usize| -> Result<(), HarnessError> {
        if params.len() == k {
            Ok(())
        } else {
            Err(HarnessError::Config(format!(
                "model {kind} needs {k} parameters, got {}",
                params.len()
            )))
        }
    };
    let model = match kind {
        "gaussian" => {
            expect(2)?;
            QuantileModel::gaussian_mixture(params[0], params[1])?
        }
        "uniform" => {
            expect(2)?;
            QuantileModel::uniform_mixture(params[0], params[1])?
        }
        "composite" => {
            expect(3)?;
            QuantileModel::composite_gaussian(params[0], params[1], params[2])?
        }
        other => {
            return Err(HarnessError::Config(format!(
                "unknown model kind {other:?}; expected gaussian|uniform|composite"
            )))
        }
    };
    Ok(model)
}

fn asymptotics(model_spec: &str, alpha: f64) -> Result<(), HarnessError> {
    let model = parse_model(model_spec)?;
    let report = check_a2(&model, alpha, 2000)?;
    println!("model: {}", model.describe());
    println!("alpha: {alpha}");
    println!("a2_status: {}", report.status);
    match ideal_changepoint(&model, alpha) {
        Ok(q) => {
            println!("t_tilde: {}", q.t_tilde);
            println!("quantile_at_t: {}", q.quantile_at_t);
            println!("pi1_estimable: {}", q.pi1_estimable);
            println!("h_at_max: {}", q.h_at_max);
        }
        Err(CoreError::A2Violated(status)) => {
            println!("limits: undefined ({status})");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}
