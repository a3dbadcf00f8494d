use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;
use serde::{Deserialize, Serialize};

use crate::model::VmRequest;

use super::{jobs_to_vms, SwfJob, VmTypeCatalog, WorkloadError};

/// Parameters of the synthetic parallel-job generator.
///
/// Jobs arrive as a Poisson process, run for a log-uniform duration, and
/// request a processor count that is a power of two with probability
/// `power_of_two_prob` (otherwise uniform in `1..=max_processors`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub jobs: usize,
    /// Mean seconds between consecutive arrivals.
    pub mean_interarrival: f64,
    pub min_duration: u64,
    pub max_duration: u64,
    pub max_processors: u64,
    pub power_of_two_prob: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            jobs: 1000,
            mean_interarrival: 600.0,
            min_duration: 60,
            max_duration: 36_000,
            max_processors: 32,
            power_of_two_prob: 0.75,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), WorkloadError> {
        let bad = |what: &str| Err(WorkloadError::InvalidGenerator(what.to_string()));
        if !(self.mean_interarrival.is_finite() && self.mean_interarrival > 0.0) {
            return bad("mean_interarrival must be positive");
        }
        if self.min_duration == 0 || self.min_duration > self.max_duration {
            return bad("durations must satisfy 0 < min_duration <= max_duration");
        }
        if self.max_processors == 0 {
            return bad("max_processors must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.power_of_two_prob) {
            return bad("power_of_two_prob must lie in [0, 1]");
        }
        Ok(())
    }
}

pub fn generate_jobs(config: &GeneratorConfig) -> Result<Vec<SwfJob>, WorkloadError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let gaps = Exp::new(1.0 / config.mean_interarrival).expect("validated rate");
    let log_duration = Uniform::new_inclusive((config.min_duration as f64).ln(), (config.max_duration as f64).ln());
    let max_exponent = 63 - config.max_processors.leading_zeros();
    let uniform_procs = Uniform::new_inclusive(1, config.max_processors);

    let mut clock = 0.0f64;
    let mut jobs = Vec::with_capacity(config.jobs);
    for i in 0..config.jobs {
        clock += gaps.sample(&mut rng);
        let run_time =
            (log_duration.sample(&mut rng).exp().round() as u64).clamp(config.min_duration, config.max_duration);
        let processors = if rng.gen_bool(config.power_of_two_prob) {
            1u64 << rng.gen_range(0..=max_exponent)
        } else {
            uniform_procs.sample(&mut rng)
        };
        jobs.push(SwfJob {
            id: i as u64 + 1,
            submit: clock.floor() as u64,
            wait: 0,
            run_time,
            processors,
        });
    }
    Ok(jobs)
}

/// Seeded synthetic instance: generated jobs converted with the standard
/// VM-type catalog.
pub fn generate_synthetic(config: &GeneratorConfig) -> Result<Vec<VmRequest>, WorkloadError> {
    let jobs = generate_jobs(config)?;
    Ok(jobs_to_vms(&jobs, &VmTypeCatalog::standard())?.vms)
}
