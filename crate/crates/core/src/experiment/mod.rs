//! Benchmark runner: builds one instance, runs every configured scheduler
//! on it, re-validates each schedule and reports exact energy figures.

mod report;
mod spec;

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Instance, ValidationError};
use crate::power::WATT_SECONDS_PER_KWH;
use crate::sched::{vbp_default_weights, SchedError, Scheduler, SchedulerKind};
use crate::workload::{
    generate_synthetic, jobs_to_vms, read_instance, read_swf_file, reject_oversized, VmTypeCatalog, WorkloadError,
};
use crate::{schedule_energy_exact, Rational};

pub use report::{emit_report, format_csv, CSV_HEADER};
pub use spec::{
    parse_weights, ExperimentSpec, HostTemplate, InstanceSource, OutputPaths, SchedulerEntry, WeightOverrides,
    DEFAULT_HOSTS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Scheduler(#[from] SchedError),
    #[error("{algorithm} produced an invalid schedule: {source}")]
    Validation { algorithm: String, source: ValidationError },
    #[error("baseline `{0}` is not among the configured schedulers")]
    BaselineMissing(String),
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl ExperimentError {
    pub fn is_io(&self) -> bool {
        match self {
            ExperimentError::Io(_) => true,
            ExperimentError::Workload(w) => w.is_io(),
            _ => false,
        }
    }
}

/// One line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub algorithm: String,
    pub energy_kwh: f64,
    /// Energy divided by the baseline's energy.
    pub norm_energy: f64,
    /// `(1 - norm_energy) * 100`.
    pub saving_pct: f64,
    pub busy_time_s: u64,
    pub unplaced: usize,
    pub wall_ms: Option<u64>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    /// Sorted by energy, lowest first.
    pub rows: Vec<ResultRow>,
    pub baseline: String,
    pub vms: usize,
    pub hosts: usize,
    /// VMs dropped before scheduling because no host could ever hold them.
    pub rejected_vms: usize,
    /// Weights used by VBP-Norm-L2, when it ran.
    pub vbp_weights: Option<[f64; 5]>,
    /// Set when schedulers left different numbers of VMs unplaced, which
    /// makes their energies incomparable.
    pub unequal_unplaced: bool,
}

/// Builds the instance described by `spec`, returning it with the number
/// of VMs rejected as oversized.
pub fn build_instance(spec: &ExperimentSpec) -> Result<(Instance, usize), ExperimentError> {
    let fleet = |n: usize| spec.host.fleet(n);
    let hosts = spec.hosts.unwrap_or(DEFAULT_HOSTS);
    match &spec.instance {
        InstanceSource::Generator(cfg) => {
            let vms = generate_synthetic(cfg)?;
            let (vms, rejected) = reject_oversized(vms, &spec.host.capacity);
            Ok((Instance::new(vms, fleet(hosts)), rejected))
        }
        InstanceSource::Swf(path) => {
            let trace = read_swf_file(path)?;
            let vms = jobs_to_vms(&trace.jobs, &VmTypeCatalog::standard())?.vms;
            let (vms, rejected) = reject_oversized(vms, &spec.host.capacity);
            Ok((Instance::new(vms, fleet(hosts)), rejected))
        }
        InstanceSource::Json(path) => {
            let mut instance = read_instance(path)?;
            if spec.hosts.is_some() || instance.hosts.is_empty() {
                instance.hosts = fleet(hosts);
            }
            Ok((instance, 0))
        }
    }
}

struct Run {
    label: String,
    slug: &'static str,
    energy_ws: Rational,
    busy: u64,
    unplaced: usize,
    wall_ms: u64,
}

fn run_one(label: String, kind: &SchedulerKind, instance: &Instance) -> Result<Run, ExperimentError> {
    let started = Instant::now();
    let schedule = kind.schedule(instance);
    let wall_ms = started.elapsed().as_millis() as u64;
    schedule
        .validate(instance)
        .map_err(|source| ExperimentError::Validation {
            algorithm: label.clone(),
            source,
        })?;
    let energy = schedule_energy_exact(&schedule);
    Ok(Run {
        label,
        slug: kind.slug(),
        energy_ws: energy.total,
        busy: schedule.cost(),
        unplaced: schedule.unplaced().len(),
        wall_ms,
    })
}

/// Runs every scheduler in `spec` on the same instance.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report, ExperimentError> {
    let (instance, rejected) = build_instance(spec)?;
    run_on_instance(spec, &instance, rejected)
}

/// Like [`run_experiment`] with an already built instance.
pub fn run_on_instance(
    spec: &ExperimentSpec,
    instance: &Instance,
    rejected_vms: usize,
) -> Result<Report, ExperimentError> {
    instance
        .validate()
        .map_err(|e| ExperimentError::InvalidSpec(e.to_string()))?;
    if spec.schedulers.is_empty() {
        return Err(ExperimentError::InvalidSpec("no schedulers configured".into()));
    }
    let mut entries = Vec::with_capacity(spec.schedulers.len());
    let mut vbp_weights = None;
    for entry in &spec.schedulers {
        let (label, mut kind) = entry.build()?;
        if let SchedulerKind::VbpNormL2(w) = &mut kind {
            let weights = w.unwrap_or_else(|| vbp_default_weights(instance));
            *w = Some(weights);
            vbp_weights.get_or_insert(weights);
        }
        entries.push((label, kind));
    }

    let threads = spec.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::InvalidSpec(e.to_string()))?;
    let runs: Vec<Run> = pool.install(|| {
        entries
            .into_par_iter()
            .map(|(label, kind)| run_one(label, &kind, instance))
            .collect::<Result<_, _>>()
    })?;

    let baseline = runs
        .iter()
        .find(|r| r.label.eq_ignore_ascii_case(&spec.baseline))
        .or_else(|| runs.iter().find(|r| r.slug.eq_ignore_ascii_case(&spec.baseline)))
        .ok_or_else(|| ExperimentError::BaselineMissing(spec.baseline.clone()))?;
    let base_energy = baseline.energy_ws;
    let baseline_label = baseline.label.clone();

    let mut ordered: Vec<&Run> = runs.iter().collect();
    ordered.sort_by(|a, b| a.energy_ws.cmp(&b.energy_ws).then_with(|| a.label.cmp(&b.label)));
    let rows = ordered
        .into_iter()
        .map(|run| {
            let norm = normalized(run.energy_ws, base_energy);
            ResultRow {
                algorithm: run.label.clone(),
                energy_kwh: to_f64(run.energy_ws / Rational::from_integer(WATT_SECONDS_PER_KWH as i128)),
                norm_energy: norm,
                saving_pct: (1.0 - norm) * 100.0,
                busy_time_s: run.busy,
                unplaced: run.unplaced,
                wall_ms: spec.record_wall_time.then_some(run.wall_ms),
            }
        })
        .collect::<Vec<_>>();
    let unequal_unplaced = rows.windows(2).any(|w| w[0].unplaced != w[1].unplaced);

    Ok(Report {
        rows,
        baseline: baseline_label,
        vms: instance.vms.len(),
        hosts: instance.hosts.len(),
        rejected_vms,
        vbp_weights,
        unequal_unplaced,
    })
}

fn to_f64(x: Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn normalized(energy: Rational, baseline: Rational) -> f64 {
    if baseline.is_zero() {
        if energy.is_zero() {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        to_f64(energy / baseline)
    }
}
