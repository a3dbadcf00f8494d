use std::fmt;

use serde::{Deserialize, Serialize};

use super::instance::VmRequest;
use super::interval::{Interval, Tick};
use super::resources::{Load, ResourceVector};
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HostId(pub u32);

impl fmt::Display for HostId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "host#{}", self.0)
    }
}

/// Static description of a physical machine. Power figures are in watts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HostConfig {
    pub id: HostId,
    pub capacity: ResourceVector,
    pub p_idle: u64,
    pub p_max: u64,
}

impl HostConfig {
    /// The typical machine used throughout the benchmarks: 16 cores at
    /// 3250 MIPS, 140084 MB of RAM, 10 Gbit/s, 10 TB of storage, 175 W idle
    /// and 250 W at full load.
    pub const fn reference(id: u32) -> Self {
        Self {
            id: HostId(id),
            capacity: ResourceVector::new(16, 3250, 140_084, 10_000, 10_000_000),
            p_idle: 175,
            p_max: 250,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.p_idle == 0 || self.p_idle > self.p_max {
            return Err(ModelError::InvalidPower {
                host: self.id,
                p_idle: self.p_idle,
                p_max: self.p_max,
            });
        }
        Ok(())
    }

    /// Hosts that are interchangeable for placement purposes.
    pub fn same_class(&self, other: &HostConfig) -> bool {
        self.capacity == other.capacity && self.p_idle == other.p_idle && self.p_max == other.p_max
    }
}

/// A host together with the VMs assigned to it so far.
///
/// VMs are kept sorted by start time and the busy periods (the merged
/// union of assigned intervals) are maintained incrementally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostState {
    config: HostConfig,
    vms: Vec<VmRequest>,
    max_duration: Tick,
    busy: Vec<Interval>,
    busy_time: Tick,
}

impl HostState {
    pub fn new(config: HostConfig) -> Self {
        Self {
            config,
            vms: Vec::new(),
            max_duration: 0,
            busy: Vec::new(),
            busy_time: 0,
        }
    }

    pub fn config(&self) -> &HostConfig {
        &self.config
    }

    pub fn id(&self) -> HostId {
        self.config.id
    }

    pub fn vms(&self) -> &[VmRequest] {
        &self.vms
    }

    pub fn is_empty(&self) -> bool {
        self.vms.is_empty()
    }

    /// Disjoint periods during which the host is powered on.
    pub fn busy_periods(&self) -> &[Interval] {
        &self.busy
    }

    /// Span of the assigned intervals.
    pub fn busy_time(&self) -> Tick {
        self.busy_time
    }

    pub fn is_busy_at(&self, t: Tick) -> bool {
        let idx = self.busy.partition_point(|b| b.finish() <= t);
        self.busy.get(idx).is_some_and(|b| b.contains(t))
    }

    /// VMs whose intervals intersect `window`.
    pub fn overlapping<'a>(&'a self, window: &Interval) -> impl Iterator<Item = &'a VmRequest> + 'a {
        let earliest = window.start().saturating_sub(self.max_duration);
        let lo = self.vms.partition_point(|vm| vm.interval.start() < earliest);
        let hi = self.vms.partition_point(|vm| vm.interval.start() < window.finish());
        let window = *window;
        self.vms[lo..hi].iter().filter(move |vm| vm.interval.overlaps(&window))
    }

    pub fn load_at(&self, t: Tick) -> Load {
        let point = Interval::new(t, t + 1).expect("unit interval");
        self.overlapping(&point)
            .fold(Load::default(), |acc, vm| acc + vm.demand.load())
    }

    /// Componentwise maximum of the concurrent load of assigned VMs over
    /// `window`. Usage is piecewise constant between interval endpoints, so
    /// only those points are visited.
    pub fn peak_load_over(&self, window: &Interval) -> Load {
        let mut events: Vec<(Tick, bool, Load)> = Vec::new();
        for vm in self.overlapping(window) {
            let clipped = vm.interval.intersection(window).expect("overlapping");
            let load = vm.demand.load();
            events.push((clipped.start(), true, load));
            events.push((clipped.finish(), false, load));
        }
        // Departures sort before arrivals at equal times.
        events.sort_unstable_by_key(|&(t, arriving, _)| (t, arriving));
        let mut current = Load::default();
        let mut peak = Load::default();
        for (_, arriving, load) in events {
            if arriving {
                current += load;
                for (p, c) in peak.0.iter_mut().zip(current.0) {
                    *p = (*p).max(c);
                }
            } else {
                current -= load;
            }
        }
        peak
    }

    /// Whether `vm` can be added without exceeding capacity at any instant.
    pub fn can_place(&self, vm: &VmRequest) -> bool {
        let capacity = &self.config.capacity;
        if vm.demand.mips > capacity.mips {
            return false;
        }
        let needed = self.peak_load_over(&vm.interval) + vm.demand.load();
        needed.le(&capacity.load())
    }

    /// Busy time this host would have after also running over `extra`.
    pub fn busy_time_with(&self, extra: &Interval) -> Tick {
        let lo = self.busy.partition_point(|b| b.finish() <= extra.start());
        let covered: Tick = self.busy[lo..]
            .iter()
            .take_while(|b| b.start() < extra.finish())
            .filter_map(|b| b.intersection(extra))
            .map(|i| i.length())
            .sum();
        self.busy_time + extra.length() - covered
    }

    /// Adds `vm` after checking capacity.
    pub fn assign(&mut self, vm: VmRequest) -> Result<(), ModelError> {
        if !self.can_place(&vm) {
            return Err(ModelError::CapacityExceeded {
                vm: vm.id,
                host: self.config.id,
            });
        }
        self.push_unchecked(vm);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, vm: VmRequest) {
        let iv = vm.interval;
        let pos = self
            .vms
            .partition_point(|v| (v.interval.start(), v.id) < (iv.start(), vm.id));
        self.vms.insert(pos, vm);
        self.max_duration = self.max_duration.max(iv.length());

        // Splice the new interval into the merged busy list; adjacent
        // periods are joined.
        let lo = self.busy.partition_point(|b| b.finish() < iv.start());
        let hi = self.busy.partition_point(|b| b.start() <= iv.finish());
        let (mut start, mut finish) = (iv.start(), iv.finish());
        if lo < hi {
            start = start.min(self.busy[lo].start());
            finish = finish.max(self.busy[hi - 1].finish());
        }
        let removed: Tick = self.busy[lo..hi].iter().map(Interval::length).sum();
        let merged = Interval::new(start, finish).expect("non-empty");
        self.busy.splice(lo..hi, std::iter::once(merged));
        self.busy_time = self.busy_time - removed + merged.length();
    }
}
