//! Standard Workload Format traces.
//!
//! Lines starting with `;` are header comments. Every other non-blank line
//! holds 18 whitespace-separated numeric fields; this reader uses field 1
//! (job id), 2 (submit time), 3 (wait time), 4 (run time), 5 (allocated
//! processors) and 8 (requested processors, used when field 5 is `-1`).

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::WorkloadError;

pub const SWF_FIELDS: usize = 18;

/// A job as retained from a trace. Times are in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwfJob {
    pub id: u64,
    pub submit: u64,
    pub wait: u64,
    pub run_time: u64,
    pub processors: u64,
}

impl SwfJob {
    /// Submission time plus waiting time.
    pub fn start(&self) -> u64 {
        self.submit + self.wait
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwfTrace {
    pub jobs: Vec<SwfJob>,
    /// Jobs filtered out for a non-positive run time or processor count,
    /// or an unknown submission time.
    pub dropped: usize,
}

pub fn parse_swf(reader: impl BufRead) -> Result<SwfTrace, WorkloadError> {
    let mut trace = SwfTrace::default();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| WorkloadError::Io(e.to_string()))?;
        let body = line.trim();
        if body.is_empty() || body.starts_with(';') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != SWF_FIELDS {
            return Err(WorkloadError::MissingField {
                line: line_no,
                found: fields.len(),
            });
        }
        let mut values = [0i64; SWF_FIELDS];
        for (i, (slot, token)) in values.iter_mut().zip(&fields).enumerate() {
            let malformed = || WorkloadError::Malformed {
                line: line_no,
                token: token.to_string(),
            };
            if USED_FIELDS.contains(&i) {
                *slot = parse_integral(token).ok_or_else(malformed)?;
            } else if token.parse::<f64>().is_err() {
                return Err(malformed());
            }
        }
        let [id, submit, wait, run_time, allocated, _, _, requested, ..] = values;
        let processors = if allocated == -1 { requested } else { allocated };
        if id < 0 || submit < 0 || run_time <= 0 || processors <= 0 {
            trace.dropped += 1;
            continue;
        }
        trace.jobs.push(SwfJob {
            id: id as u64,
            submit: submit as u64,
            wait: wait.max(0) as u64,
            run_time: run_time as u64,
            processors: processors as u64,
        });
    }
    Ok(trace)
}

/// Zero-based indices of the fields this reader interprets.
const USED_FIELDS: [usize; 6] = [0, 1, 2, 3, 4, 7];

/// Integer field; some archives write whole numbers as `12.0`.
fn parse_integral(token: &str) -> Option<i64> {
    if let Ok(v) = token.parse::<i64>() {
        return Some(v);
    }
    let f = token.parse::<f64>().ok()?;
    (f.is_finite() && f.fract() == 0.0).then_some(f as i64)
}

/// Writes `jobs` as an SWF trace; unused fields are `-1`.
pub fn write_swf(jobs: &[SwfJob], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "; Version: 2.2")?;
    writeln!(out, "; MaxJobs: {}", jobs.len())?;
    for job in jobs {
        write!(
            out,
            "{} {} {} {} {} -1 -1 {}",
            job.id, job.submit, job.wait, job.run_time, job.processors, job.processors
        )?;
        for _ in 8..SWF_FIELDS {
            write!(out, " -1")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
