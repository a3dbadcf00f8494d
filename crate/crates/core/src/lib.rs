//! Energy-aware placement of fixed-interval virtual machines.
//!
//! Each VM runs over a fixed half-open interval and demands a vector of
//! resources. A host is powered on exactly while at least one of its VMs
//! runs, so on identical hosts minimizing energy reduces to minimizing the
//! total busy time (the sum over hosts of the span of their VMs).
//!
//! The crate provides:
//!  * [`model`]: intervals, resources, host timelines, schedules and their
//!    feasibility validation;
//!  * [`power`]: the linear power model and exact energy accounting;
//!  * [`sched`]: the EMinTRE-LFT heuristic, four baselines and an exhaustive
//!    oracle for small instances;
//!  * [`workload`]: SWF trace ingestion, VM-type conversion and a seeded
//!    synthetic generator;
//!  * [`experiment`]: the benchmark runner and its CSV/JSON reports.
//!
//! Power, energy and metric computations are generic over [`Scalar`]; the
//! aliases below fix the two scalar types used in practice.
//!
//! ```
//! use busytime::model::{HostConfig, Instance, ResourceVector, VmRequest};
//! use busytime::sched::{Scheduler, SchedulerKind};
//!
//! let demand = ResourceVector::new(2, 2500, 1700, 100, 422_500);
//! let vms = vec![
//!     VmRequest::new(0, 0, 3600, demand).unwrap(),
//!     VmRequest::new(1, 1800, 3600, demand).unwrap(),
//! ];
//! let hosts = vec![HostConfig::reference(0), HostConfig::reference(1)];
//! let instance = Instance::new(vms, hosts);
//!
//! let schedule = SchedulerKind::emintre_lft().schedule(&instance);
//! assert_eq!(schedule.cost(), 5400);
//! let energy = busytime::schedule_energy_exact(&schedule);
//! assert!(energy.total > busytime::Rational::from_integer(0));
//! ```

pub mod experiment;
pub mod model;
pub mod power;
mod scalar;
pub mod sched;
pub mod workload;

pub use scalar::{Rational, Scalar};

/// Energy report in exact watt-seconds.
pub type ExactEnergyReport = power::EnergyReport<Rational>;
/// Energy report in floating-point watt-seconds.
pub type EnergyReportF64 = power::EnergyReport<f64>;
pub type PowerModelF64 = power::PowerModel<f64>;
pub type ExactPowerModel = power::PowerModel<Rational>;
pub type SchedulerConfigF64 = sched::SchedulerConfig<f64>;
pub type ExactSchedulerConfig = sched::SchedulerConfig<Rational>;

/// [`power::schedule_energy`] in exact arithmetic.
pub fn schedule_energy_exact(schedule: &model::Schedule) -> ExactEnergyReport {
    power::schedule_energy(schedule)
}
