use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use evaqs_core::circuits::{Basis, Circuit};
use evaqs_harness::config::{parse_list, Overrides, StudyConfig, StudyKind};
use evaqs_harness::{report, study, summary};

#[derive(Parser)]
#[command(name = "evaqs", version, about = "Fidelity verification of simulated quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the output of one serialized circuit against another.
    Verify(VerifyArgs),
    /// Run a seeded study and write one CSV row per (circuit, infidelity).
    Study(StudyArgs),
    /// Concentration and sample-cost report for a target circuit.
    Cost(CostArgs),
    /// Per-cell median and 10th/90th percentiles of a study CSV.
    Summarize(SummarizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Computational,
    Hadamard,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Computational => Basis::Computational,
            BasisArg::Hadamard => Basis::Hadamard,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Ideal (target) circuit file.
    #[arg(long)]
    target: PathBuf,
    /// Circuit that prepares the state under test.
    #[arg(long)]
    test: PathBuf,
    /// Measurement basis (IQP circuits only).
    #[arg(long, value_enum, default_value = "computational")]
    basis: BasisArg,
    #[arg(long, default_value_t = 10_000)]
    shots: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write every shot as `x,y,b,w` to this file.
    #[arg(long)]
    trials: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(value_parser = |s: &str| s.parse::<StudyKind>().map_err(|e| e.to_string()))]
    kind: StudyKind,
    /// Comma-separated qubit counts.
    #[arg(long)]
    qubits: Option<String>,
    /// Comma-separated target infidelities.
    #[arg(long)]
    infidelity: Option<String>,
    /// Circuits per cell.
    #[arg(long)]
    circuits: Option<usize>,
    /// Shots per verification.
    #[arg(long)]
    shots: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Circuit depth as a multiple of the qubit count.
    #[arg(long)]
    depth_factor: Option<usize>,
    /// Mean qubits per IQP rotation.
    #[arg(long)]
    mean_weight: Option<f64>,
    /// Supremacy cycles.
    #[arg(long)]
    cycles: Option<usize>,
    /// Single-qubit gate-noise strength (supremacy).
    #[arg(long)]
    sigma1: Option<f64>,
    /// Two-qubit gate-noise strength (supremacy).
    #[arg(long)]
    sigma2: Option<f64>,
    /// Use the full published grids instead of desk-scale presets.
    #[arg(long)]
    paper_scale: bool,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CostArgs {
    /// Target circuit file.
    #[arg(long)]
    target: PathBuf,
    #[arg(long, value_enum, default_value = "computational")]
    basis: BasisArg,
    /// Infidelity assumed for the cost estimate.
    #[arg(long, default_value_t = 0.1)]
    infidelity: f64,
    /// Desired standard error of the fidelity estimate.
    #[arg(long, default_value_t = 0.01)]
    precision: f64,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Study CSV.
    input: PathBuf,
    /// Output CSV (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Circuit::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn study_overrides(a: &StudyArgs) -> Result<Overrides> {
    Ok(Overrides {
        qubits: a.qubits.as_deref().map(parse_list).transpose().context("--qubits")?,
        infidelities: a.infidelity.as_deref().map(parse_list).transpose().context("--infidelity")?,
        depth_factor: a.depth_factor,
        mean_weight: a.mean_weight,
        cycles: a.cycles,
        circuits: a.circuits,
        shots: a.shots,
        seed: a.seed,
        out: a.out.clone(),
        threads: a.threads,
        sigma1: a.sigma1,
        sigma2: a.sigma2,
        paper_scale: a.paper_scale.then_some(true),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify(a) => {
            let (target, test) = (read_circuit(&a.target)?, read_circuit(&a.test)?);
            let mut log = a.trials.as_deref().map(|p| output(Some(p))).transpose()?;
            let r = report::verify(&target, &test, a.basis.into(), a.shots, a.seed, log.as_deref_mut().map(|w| w as &mut dyn Write))?;
            if let Some(mut w) = log {
                w.flush()?;
            }
            println!("{r}");
        }
        Command::Study(a) => {
            let file = a.config.as_deref().map(Overrides::from_file).transpose()?;
            let cfg = StudyConfig::resolve(a.kind, file.as_ref(), &study_overrides(&a)?)?;
            let rows = study::run_study(&cfg)?;
            let mut out = output(cfg.out.as_deref())?;
            study::write_csv(&mut out, &rows)?;
            out.flush()?;
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            eprintln!("{}: {} rows ({failed} failed), seed {}", cfg.kind, rows.len(), cfg.seed);
        }
        Command::Cost(a) => {
            let target = read_circuit(&a.target)?;
            println!("{}", report::cost(&target, a.basis.into(), a.infidelity, a.precision)?);
        }
        Command::Summarize(a) => {
            let file = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
            let cells = summary::summarize(&summary::read_csv(file)?)?;
            let mut out = output(a.out.as_deref())?;
            summary::write_summary(&mut out, &cells)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
