use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, ValueEnum};

use qimage::cli::{self, Command, JobConfig, EXIT_ERROR};

/// Images of multilinear polynomials on quaternion algebras.
#[derive(Parser, Debug)]
#[command(name = "qimage", version)]
struct Cli {
    /// classify, trichotomy, decompose-commutator, vk, canonicalize, intertwine,
    /// express, realize, waring, char2-sum, char2-prodsum, fit-form,
    /// matrix-center or suite.
    #[arg(value_parser = parse_command)]
    command: Command,

    #[command(flatten)]
    job: JobArgs,

    /// Read the job from a config file or an earlier report; other job
    /// flags are then rejected.
    #[arg(long, conflicts_with_all = ["field", "algebra", "poly", "poly2", "target", "beta", "k", "ring", "n", "seed", "budget", "adjoin"])]
    config: Option<PathBuf>,

    /// Report path.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,

    /// Leave wall-clock fields empty so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct JobArgs {
    /// Q, GF(p), GF(2^k), GF(2^k:modulus-bits) or QTower[d1,...].
    #[arg(long)]
    field: Option<String>,
    /// H(a,b), Hq(qi,qj) or H2[u,v].
    #[arg(long)]
    algebra: Option<String>,
    /// s2, standard:m, vk:k, mono:m, zero:m, deg3:l1,l2, deg4:l1,...,l9 or JSON.
    #[arg(long)]
    poly: Option<String>,
    /// Second polynomial for waring (default: --poly).
    #[arg(long)]
    poly2: Option<String>,
    /// Target quaternion, e.g. "1 + 2i - k".
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    /// Second quaternion for intertwine.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Depth for vk.
    #[arg(long)]
    k: Option<u32>,
    /// Coefficient ring for matrix-center: GF(q) or Z/mZ.
    #[arg(long)]
    ring: Option<String>,
    /// Matrix size for matrix-center.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluation budget for exhaustive enumeration.
    #[arg(long)]
    budget: Option<u64>,
    /// Adjoin square roots to towers when needed.
    #[arg(long, value_enum)]
    adjoin: Option<Switch>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Switch {
    On,
    Off,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse()
}

fn job_config(cli: &Cli) -> anyhow::Result<JobConfig> {
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config = JobConfig::from_json(&text).map_err(anyhow::Error::msg).context("parsing --config")?;
        if config.command != cli.command {
            bail!("--config describes a {} job, not {}", config.command, cli.command);
        }
        return Ok(config);
    }
    let a = &cli.job;
    let d = JobConfig::default();
    Ok(JobConfig {
        command: cli.command,
        field: a.field.clone().unwrap_or(d.field),
        algebra: a.algebra.clone().unwrap_or(d.algebra),
        poly: a.poly.clone().unwrap_or(d.poly),
        poly2: a.poly2.clone(),
        target: a.target.clone(),
        beta: a.beta.clone(),
        k: a.k.unwrap_or(d.k),
        ring: a.ring.clone().unwrap_or(d.ring),
        n: a.n.unwrap_or(d.n),
        seed: a.seed.unwrap_or(d.seed),
        budget: a.budget.unwrap_or(d.budget),
        adjoin: a.adjoin.map_or(d.adjoin, |s| matches!(s, Switch::On)),
    })
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would read as a negative result
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = match job_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qimage: {e:#}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("qimage: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let result = pool.install(|| cli::run_to_file(&config, &cli.out, !cli.no_timing));
    match result {
        Ok((code, report)) => {
            println!("{}", report.summary());
            println!("report written to {}", cli.out.display());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("qimage: writing {}: {e}", cli.out.display());
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
