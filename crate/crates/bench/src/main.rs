//! `bench`: run scheduler comparisons, generate instances and validate
//! instance files.
//!
//! Exit codes: 0 on success, 2 when an input or schedule fails validation,
//! 3 on I/O errors.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use busytime::experiment::{
    emit_report, parse_weights, run_experiment, ExperimentError, ExperimentSpec, InstanceSource, Report,
};
use busytime::model::{bounds_for_instance, Instance};
use busytime::sched::SortOrder;
use busytime::workload::{generate_jobs, read_instance, write_instance, write_swf, GeneratorConfig, WorkloadError};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bench", version, about = "Energy-aware VM placement benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured schedulers on one instance and compare energy.
    Run(RunArgs),
    /// Generate a seeded synthetic instance.
    Gen(GenArgs),
    /// Check an instance file for structural errors and oversized VMs.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Experiment spec (JSON). Without one, the standard comparison runs on
    /// the default synthetic workload.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Number of identical hosts.
    #[arg(long)]
    hosts: Option<usize>,
    /// EMinTRE-LFT weights, e.g. `time=0.01,cores=1,ram=0.5`.
    #[arg(long)]
    weights: Option<String>,
    /// EMinTRE-LFT VM order.
    #[arg(long, value_parser = ["lft", "ldtf"])]
    sort: Option<String>,
    /// Scheduler slug or row label used for normalization.
    #[arg(long)]
    baseline: Option<String>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall-clock time per scheduler (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    jobs: usize,
    /// Output file; a `.swf` extension writes the job trace instead of a
    /// JSON instance.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = busytime::experiment::DEFAULT_HOSTS)]
    hosts: usize,
}

enum Failure {
    Invalid(anyhow::Error),
    Io(anyhow::Error),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        if e.is_io() {
            Failure::Io(e.into())
        } else {
            Failure::Invalid(e.into())
        }
    }
}

impl From<WorkloadError> for Failure {
    fn from(e: WorkloadError) -> Self {
        ExperimentError::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Gen(args) => gen(args),
        Command::Validate { instance } => validate(instance),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut spec = match &args.spec {
        Some(path) => ExperimentSpec::load(path)?,
        None => ExperimentSpec::standard(InstanceSource::Generator(GeneratorConfig::default())),
    };
    if let Some(n) = args.hosts {
        spec.hosts = Some(n);
    }
    if let Some(w) = &args.weights {
        spec.apply_weight_overrides(&parse_weights(w)?);
    }
    if let Some(order) = &args.sort {
        let order: SortOrder = order.parse().map_err(ExperimentError::from)?;
        spec.apply_sort_override(order);
    }
    if let Some(b) = args.baseline {
        spec.baseline = b;
    }
    if args.csv.is_some() {
        spec.output.csv = args.csv;
    }
    if args.json.is_some() {
        spec.output.json = args.json;
    }
    spec.record_wall_time |= args.timing;
    if let Ok(threads) = std::env::var("BENCH_THREADS") {
        let n = threads
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("BENCH_THREADS must be a positive integer, got `{threads}`"))
            .map_err(Failure::Invalid)?;
        spec.threads = Some(n);
    }

    let report = run_experiment(&spec)?;
    print_table(&report);
    emit_report(&report, &spec.output)?;
    Ok(())
}

fn print_table(report: &Report) {
    println!(
        "{} VMs on {} hosts, normalized against {}",
        report.vms, report.hosts, report.baseline
    );
    if report.rejected_vms > 0 {
        println!("{} oversized VMs rejected before scheduling", report.rejected_vms);
    }
    if let Some(w) = report.vbp_weights {
        let w: Vec<String> = w.iter().map(|x| format!("{x:.4}")).collect();
        println!("VBP-Norm-L2 weights: [{}]", w.join(", "));
    }
    let width = report.rows.iter().map(|r| r.algorithm.len()).max().unwrap_or(0).max(9);
    println!(
        "{:<width$}  {:>14}  {:>12}  {:>10}  {:>12}  {:>8}",
        "Algorithm", "Energy (kWh)", "Norm. Energy", "Saving (%)", "Busy (s)", "Unplaced"
    );
    for r in &report.rows {
        println!(
            "{:<width$}  {:>14.3}  {:>12.3}  {:>10.3}  {:>12}  {:>8}",
            r.algorithm, r.energy_kwh, r.norm_energy, r.saving_pct, r.busy_time_s, r.unplaced
        );
    }
    if report.unequal_unplaced {
        println!("warning: schedulers left different numbers of VMs unplaced; energies are not comparable");
    }
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let cfg = GeneratorConfig {
        seed: args.seed,
        jobs: args.jobs,
        ..Default::default()
    };
    if args.out.extension().is_some_and(|e| e == "swf") {
        let jobs = generate_jobs(&cfg)?;
        let io = |e: std::io::Error| Failure::Io(anyhow::anyhow!("{}: {e}", args.out.display()));
        let file = File::create(&args.out).map_err(io)?;
        write_swf(&jobs, BufWriter::new(file)).map_err(io)?;
        println!("wrote {} jobs to {}", jobs.len(), args.out.display());
        return Ok(());
    }
    let spec = ExperimentSpec {
        hosts: Some(args.hosts),
        ..ExperimentSpec::standard(InstanceSource::Generator(cfg))
    };
    let (instance, rejected) = busytime::experiment::build_instance(&spec)?;
    write_instance(&instance, &args.out)?;
    println!(
        "wrote {} VMs and {} hosts to {} ({} oversized VMs rejected)",
        instance.vms.len(),
        instance.hosts.len(),
        args.out.display(),
        rejected
    );
    Ok(())
}

fn validate(path: PathBuf) -> Result<(), Failure> {
    let instance: Instance = read_instance(&path)?;
    let oversized = instance.oversized_vms();
    let b = bounds_for_instance(&instance);
    println!(
        "{}: {} VMs, {} hosts, len {} s, span {} s, g {}",
        path.display(),
        instance.vms.len(),
        instance.hosts.len(),
        b.len,
        b.span,
        b.g
    );
    if !oversized.is_empty() {
        return Err(Failure::Invalid(anyhow::anyhow!(
            "{} VMs fit on no host (first: {})",
            oversized.len(),
            oversized[0]
        )));
    }
    println!("ok");
    Ok(())
}
