use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::host::{HostConfig, HostId};
use super::interval::{interval_union_length, total_length, Interval, Tick};
use super::resources::{Resource, ResourceVector};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VmId(pub u64);

impl fmt::Display for VmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vm#{}", self.0)
    }
}

/// A virtual machine that must run over a fixed interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VmRecord", into = "VmRecord")]
pub struct VmRequest {
    pub id: VmId,
    pub interval: Interval,
    pub demand: ResourceVector,
}

/// Interchange form: `{id, start, duration, demand}`.
#[derive(Serialize, Deserialize)]
struct VmRecord {
    id: VmId,
    start: Tick,
    duration: Tick,
    demand: ResourceVector,
}

impl TryFrom<VmRecord> for VmRequest {
    type Error = ModelError;

    fn try_from(r: VmRecord) -> Result<Self, Self::Error> {
        Ok(VmRequest {
            id: r.id,
            interval: Interval::with_duration(r.start, r.duration)?,
            demand: r.demand,
        })
    }
}

impl From<VmRequest> for VmRecord {
    fn from(vm: VmRequest) -> Self {
        VmRecord {
            id: vm.id,
            start: vm.interval.start(),
            duration: vm.interval.length(),
            demand: vm.demand,
        }
    }
}

impl VmRequest {
    pub fn new(id: u64, start: Tick, duration: Tick, demand: ResourceVector) -> Result<Self, ModelError> {
        Ok(Self {
            id: VmId(id),
            interval: Interval::with_duration(start, duration)?,
            demand,
        })
    }

    pub fn start(&self) -> Tick {
        self.interval.start()
    }

    pub fn finish(&self) -> Tick {
        self.interval.finish()
    }

    pub fn duration(&self) -> Tick {
        self.interval.length()
    }
}

/// A complete placement problem: every VM is known up front.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub vms: Vec<VmRequest>,
    pub hosts: Vec<HostConfig>,
}

/// `len`, `span` and the concurrency cap `g` of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceBounds {
    pub len: Tick,
    pub span: Tick,
    pub g: u64,
}

impl Instance {
    pub fn new(vms: Vec<VmRequest>, hosts: Vec<HostConfig>) -> Self {
        Self { vms, hosts }
    }

    /// Structural checks: unique ids and valid power figures. VMs too large
    /// for every host are reported by [`Instance::oversized_vms`], not here.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for vm in &self.vms {
            if !seen.insert(vm.id) {
                return Err(ModelError::DuplicateVm(vm.id));
            }
        }
        let mut seen = BTreeSet::new();
        for host in &self.hosts {
            if !seen.insert(host.id) {
                return Err(ModelError::DuplicateHost(host.id));
            }
            host.validate()?;
        }
        Ok(())
    }

    pub fn host(&self, id: HostId) -> Option<&HostConfig> {
        self.hosts.iter().find(|h| h.id == id)
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.vms.iter().map(|vm| vm.interval).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.hosts.windows(2).all(|w| w[0].same_class(&w[1]))
    }

    /// VMs that fit on no host of the instance.
    pub fn oversized_vms(&self) -> Vec<VmId> {
        self.vms
            .iter()
            .filter(|vm| !self.hosts.iter().any(|h| vm.demand.fits_within(&h.capacity)))
            .map(|vm| vm.id)
            .collect()
    }
}

/// Total length, span and concurrency cap of `instance`.
///
/// `g` is the largest number of copies of the componentwise-minimal VM
/// demand that fit on the largest host; with uniform demands it is exact.
/// It is at least 1, and equals `max(n, 1)` when no resource is demanded.
pub fn bounds_for_instance(instance: &Instance) -> InstanceBounds {
    let intervals = instance.intervals();
    let len = total_length(&intervals);
    let span = interval_union_length(&intervals);

    let n = instance.vms.len() as u64;
    let mut g = n.max(1);
    if let Some(first) = instance.vms.first() {
        let min_load = instance.vms.iter().fold(first.demand.load(), |mut acc, vm| {
            for (a, b) in acc.0.iter_mut().zip(vm.demand.load().0) {
                *a = (*a).min(b);
            }
            acc
        });
        let per_host = instance
            .hosts
            .iter()
            .map(|h| {
                let cap = h.capacity.load();
                Resource::ALL
                    .into_iter()
                    .filter(|&r| min_load[r] > 0)
                    .map(|r| cap[r] / min_load[r])
                    .min()
                    .unwrap_or(u64::MAX)
            })
            .max()
            .unwrap_or(u64::MAX);
        if per_host != u64::MAX {
            g = per_host.max(1);
        }
    }
    InstanceBounds { len, span, g }
}
