//! Workload ingestion: SWF traces, job-to-VM conversion, synthetic
//! generation and the JSON instance interchange format.

mod catalog;
mod swf;
mod synth;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::model::{Instance, ModelError};

pub use catalog::{jobs_to_vms, reject_oversized, Conversion, VmTypeCatalog};
pub use swf::{parse_swf, write_swf, SwfJob, SwfTrace, SWF_FIELDS};
pub use synth::{generate_jobs, generate_synthetic, GeneratorConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkloadError {
    #[error("line {line}: expected 18 fields, found {found}")]
    MissingField { line: usize, found: usize },
    #[error("line {line}: malformed field `{token}`")]
    Malformed { line: usize, token: String },
    #[error("job {job}: {source}")]
    InvalidJob { job: u64, source: ModelError },
    #[error("VM type catalog is empty")]
    EmptyCatalog,
    #[error("invalid generator configuration: {0}")]
    InvalidGenerator(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl WorkloadError {
    pub fn is_io(&self) -> bool {
        matches!(self, WorkloadError::Io(_))
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> WorkloadError {
    WorkloadError::Io(format!("{}: {e}", path.display()))
}

pub fn read_swf_file(path: &Path) -> Result<SwfTrace, WorkloadError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    parse_swf(BufReader::new(file))
}

/// Reads and structurally validates a JSON instance
/// (`{"vms": [...], "hosts": [...]}`).
pub fn read_instance(path: &Path) -> Result<Instance, WorkloadError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    let instance: Instance = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| WorkloadError::InvalidInstance(format!("{}: {e}", path.display())))?;
    instance
        .validate()
        .map_err(|e| WorkloadError::InvalidInstance(e.to_string()))?;
    Ok(instance)
}

pub fn write_instance(instance: &Instance, path: &Path) -> Result<(), WorkloadError> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, instance).map_err(|e| io_error(path, e))?;
    out.write_all(b"\n").map_err(|e| io_error(path, e))?;
    out.flush().map_err(|e| io_error(path, e))
}
