//! Domain types, interval algebra and capacity checking shared by every
//! scheduler.

mod host;
mod instance;
mod interval;
mod resources;
mod schedule;

pub use host::{HostConfig, HostId, HostState};
pub use instance::{bounds_for_instance, Instance, InstanceBounds, VmId, VmRequest};
pub use interval::{interval_union_length, merge_intervals, total_length, Interval, Tick};
pub use resources::{Load, Resource, ResourceVector, RESOURCE_COUNT};
pub use schedule::{cost_by_sweep, schedule_cost, Schedule};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("interval [{start}, {finish}) is empty")]
    EmptyInterval { start: Tick, finish: Tick },
    #[error("interval starting at {start} with duration {duration} overflows")]
    TimeOverflow { start: Tick, duration: Tick },
    #[error("{host}: idle power {p_idle} W must be in (0, p_max = {p_max} W]")]
    InvalidPower { host: HostId, p_idle: u64, p_max: u64 },
    #[error("unknown resource `{0}`")]
    UnknownResource(String),
    #[error("duplicate {0}")]
    DuplicateVm(VmId),
    #[error("duplicate {0}")]
    DuplicateHost(HostId),
    #[error("unknown {0}")]
    UnknownVm(VmId),
    #[error("unknown {0}")]
    UnknownHost(HostId),
    #[error("{0} is already placed")]
    AlreadyPlaced(VmId),
    #[error("{vm} does not fit on {host}")]
    CapacityExceeded { vm: VmId, host: HostId },
}

/// A feasibility violation, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("{vm} is not part of the instance")]
    UnknownVm { vm: VmId },
    #[error("{vm} is mapped to unknown {host}")]
    UnknownHost { vm: VmId, host: HostId },
    #[error("{vm} is neither placed nor reported unplaced")]
    Missing { vm: VmId },
    #[error("{vm} is accounted for more than once")]
    DoublyAccounted { vm: VmId },
    #[error("{vm} demands more than the capacity of {host}")]
    Oversized { vm: VmId, host: HostId },
    #[error("{host} holds VMs that disagree with the mapping")]
    StateMismatch { host: HostId },
    #[error("{host} overloaded on {resource} at t={time}: {used} > {capacity}")]
    Overload {
        host: HostId,
        time: Tick,
        resource: Resource,
        used: u64,
        capacity: u64,
    },
}
