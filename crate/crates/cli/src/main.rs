#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sos_core::gallery;
use sos_core::harness::{self, CertificateInstance, ExperimentConfig, OutputFormat};
use sos_core::path::{restricted_path, PathConfig, DEFAULT_STEP};
use sos_core::solver::SolverConfig;
use sos_core::sosmap::sigma;
use sos_core::{CoordinateRing, QuadraticForm, VarietySpec};

#[derive(Parser)]
#[command(
    name = "sos",
    version,
    about = "Low-rank sum-of-squares experiments on projective varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random-target experiment; writes one row per k.
    Run(RunArgs),
    /// Check a certificate instance against a variety.
    Certify {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print a named instance and its certificate report as JSON.
    Gallery {
        /// One of: veronese-surface, scroll22, scroll-spurious, veronese-quartic.
        name: String,
        /// Heights for scroll-spurious.
        #[arg(long, value_delimiter = ',')]
        heights: Option<Vec<u32>>,
        /// Projective dimension for veronese-quartic.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Restricted-path sum-of-squares test; prints one JSON record per step.
    Path(PathArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Success threshold on ||sigma_k(l) - f||.
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    /// Seconds per solve.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Evaluation cap, or "auto" for 20 * dim R1.
    #[arg(long, default_value = "auto")]
    max_evals: String,
    /// LBFGS history, or "auto".
    #[arg(long, default_value = "auto")]
    memory: String,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            success_eps: self.eps,
            time_limit: self.time_limit,
            max_evals: parse_auto(&self.max_evals, "--max-evals")?,
            memory: parse_auto(&self.memory, "--memory")?,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Variety spec: a JSON file or an inline JSON object.
    #[arg(long)]
    variety: String,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; defaults from the output extension.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    variety: String,
    #[arg(long)]
    k: usize,
    /// Seed for the start tuple and, without --target, the random target.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Target coordinates as a JSON array; a random sum of dim R1 squares when absent.
    #[arg(long)]
    target: Option<PathBuf>,
    /// Increment of v per step; defaults to 0.05 / ||g||.
    #[arg(long)]
    u: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    v_lower: f64,
    /// Upper bound; "inf" for none.
    #[arg(long, default_value_t = 1.0)]
    v_upper: f64,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

fn parse_auto(s: &str, flag: &str) -> Result<Option<usize>> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    let n: usize = s
        .parse()
        .with_context(|| format!("{flag} expects a positive integer or auto"))?;
    Ok(Some(n))
}

fn load_variety(arg: &str) -> Result<VarietySpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading variety spec {arg}"))?
    };
    Ok(VarietySpec::from_json_str(&text)?)
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let cfg = ExperimentConfig {
        variety: load_variety(&args.variety)?,
        k_values: args.k,
        trials: args.trials,
        seed: args.seed,
        solver: args.solver.config()?,
        workers: args.workers,
        output_path: args.out.as_ref().map(|p| p.display().to_string()),
    };
    let table = harness::run_experiment(&cfg)?;
    let format = match (&args.format, &args.out) {
        (Some(f), _) => f.parse()?,
        (None, Some(p)) => OutputFormat::from_path(p),
        (None, None) => OutputFormat::Csv,
    };
    match &args.out {
        Some(p) => {
            harness::emit_results(&table, format, p)?;
            log::info!("wrote {}", p.display());
        }
        None => harness::write_results(&table, format, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_certify(variety: &str, instance: &Path) -> Result<()> {
    let ring = CoordinateRing::build(&load_variety(variety)?)?;
    let bytes = fs::read(instance).with_context(|| format!("reading {}", instance.display()))?;
    let report = CertificateInstance::from_json_slice(&bytes)?.verify(&ring)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_gallery(name: &str, heights: Option<Vec<u32>>, m: Option<u32>, tol: f64) -> Result<()> {
    let inst = gallery::by_name(name, heights.as_deref(), m)?;
    let report = inst.verify(tol)?;
    let out = json!({
        "instance": inst,
        "basis1": inst.ring.basis1().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "basis2": inst.ring.basis2().iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn cmd_path(args: PathArgs) -> Result<()> {
    let ring = CoordinateRing::build(&load_variety(&args.variety)?)?;
    let solver = args.solver.config()?;
    let target = match &args.target {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let t: QuadraticForm = serde_json::from_str(&text)?;
            ring.check_quadratic(&t)?;
            t
        }
        None => harness::trial_target(&ring, args.seed, 0)?,
    };
    if !(args.v_lower < 1.0) {
        bail!("--v-lower must be below 1");
    }
    let l0 = harness::trial_start(&ring, args.seed, 0, 0, args.k)?;
    // f - v_lower g = sigma(l0) and f - g = target
    let s0 = sigma(&ring, &l0)?;
    let g = s0.sub(&target)?.scaled(1.0 / (1.0 - args.v_lower));
    let f = s0.add_scaled(args.v_lower, &g)?;
    let mut cfg = PathConfig::normalized(&g, args.v_lower, args.v_upper, solver);
    if let Some(u) = args.u {
        cfg.step_u = u;
    }
    cfg.max_steps = args.max_steps;
    log::info!(
        "step u = {} (default displacement {DEFAULT_STEP})",
        cfg.step_u
    );
    let outcome = restricted_path(&ring, &f, &g, args.k, &l0, &cfg)?;
    let mut out = io::stdout().lock();
    for step in &outcome.steps {
        let line = json!({
            "step": step.step,
            "v": step.v,
            "start_distance": step.start_distance,
            "final_distance": step.record.final_distance,
            "status": step.record.status,
            "evals": step.record.evals,
            "wall_time": step.record.wall_time,
        });
        writeln!(out, "{line}")?;
    }
    let summary = json!({
        "v_final": outcome.v_final,
        "final_distance": outcome.final_distance,
        "stop": outcome.stop,
        "certified": outcome.v_final >= 1.0,
        "l_final": outcome.l_final.to_rows(),
    });
    writeln!(out, "{summary}")?;
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SOS_LOG", "warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Certify { variety, instance } => cmd_certify(&variety, &instance),
        Command::Gallery {
            name,
            heights,
            m,
            tol,
        } => {
            if !(tol > 0.0) {
                bail!("--tol must be positive");
            }
            cmd_gallery(&name, heights, m, tol)
        }
        Command::Path(args) => cmd_path(args),
    }
}
