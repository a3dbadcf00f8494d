use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::host::{HostConfig, HostId, HostState};
use super::instance::{Instance, VmId, VmRequest};
use super::interval::Tick;
use super::resources::{Load, Resource};
use super::{ModelError, ValidationError};

/// An assignment of VMs to hosts, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    hosts: Vec<HostState>,
    placements: BTreeMap<VmId, HostId>,
    unplaced: Vec<VmId>,
}

impl Schedule {
    /// Empty schedule over `hosts`; host states are ordered by id.
    pub fn new(hosts: &[HostConfig]) -> Self {
        let mut configs = hosts.to_vec();
        configs.sort_by_key(|h| h.id);
        Self {
            hosts: configs.into_iter().map(HostState::new).collect(),
            placements: BTreeMap::new(),
            unplaced: Vec::new(),
        }
    }

    /// Builds a schedule from an externally supplied mapping without any
    /// capacity checks. VMs of `instance` missing from `mapping` are left
    /// unaccounted for; run [`Schedule::validate`] afterwards.
    pub fn from_mapping(instance: &Instance, mapping: &BTreeMap<VmId, HostId>) -> Result<Self, ModelError> {
        let mut schedule = Schedule::new(&instance.hosts);
        let vms: HashMap<VmId, &VmRequest> = instance.vms.iter().map(|vm| (vm.id, vm)).collect();
        for (&vm_id, &host_id) in mapping {
            let vm = vms.get(&vm_id).ok_or(ModelError::UnknownVm(vm_id))?;
            let idx = schedule.index_of(host_id).ok_or(ModelError::UnknownHost(host_id))?;
            schedule.place_unchecked(**vm, idx);
        }
        Ok(schedule)
    }

    pub fn hosts(&self) -> &[HostState] {
        &self.hosts
    }

    pub fn host(&self, id: HostId) -> Option<&HostState> {
        self.index_of(id).map(|i| &self.hosts[i])
    }

    pub fn index_of(&self, id: HostId) -> Option<usize> {
        self.hosts.binary_search_by_key(&id, |h| h.id()).ok()
    }

    pub fn placements(&self) -> &BTreeMap<VmId, HostId> {
        &self.placements
    }

    pub fn host_of(&self, vm: VmId) -> Option<HostId> {
        self.placements.get(&vm).copied()
    }

    pub fn unplaced(&self) -> &[VmId] {
        &self.unplaced
    }

    pub fn is_complete(&self) -> bool {
        self.unplaced.is_empty()
    }

    /// Number of hosts that received at least one VM.
    pub fn hosts_used(&self) -> usize {
        self.hosts.iter().filter(|h| !h.is_empty()).count()
    }

    /// Places `vm` on the host at `host_index` after checking capacity.
    pub fn place(&mut self, vm: VmRequest, host_index: usize) -> Result<(), ModelError> {
        if self.placements.contains_key(&vm.id) {
            return Err(ModelError::AlreadyPlaced(vm.id));
        }
        self.hosts[host_index].assign(vm)?;
        self.placements.insert(vm.id, self.hosts[host_index].id());
        Ok(())
    }

    pub(crate) fn place_unchecked(&mut self, vm: VmRequest, host_index: usize) {
        let host = &mut self.hosts[host_index];
        host.push_unchecked(vm);
        self.placements.insert(vm.id, host.id());
    }

    pub fn mark_unplaced(&mut self, vm: VmId) {
        self.unplaced.push(vm);
    }

    /// Total busy time: the sum of each host's span.
    pub fn cost(&self) -> Tick {
        self.hosts.iter().map(HostState::busy_time).sum()
    }

    /// Re-checks the schedule against `instance` from the raw mapping only.
    ///
    /// Every instance VM must be either mapped to exactly one existing host
    /// or listed as unplaced; every mapped VM must fit its host on its own;
    /// and the concurrent load on every host must stay within capacity.
    pub fn validate(&self, instance: &Instance) -> Result<(), ValidationError> {
        let vms: BTreeMap<VmId, &VmRequest> = instance.vms.iter().map(|vm| (vm.id, vm)).collect();
        let hosts: BTreeMap<HostId, &HostConfig> = instance.hosts.iter().map(|h| (h.id, h)).collect();

        let mut unplaced = BTreeSet::new();
        for &id in &self.unplaced {
            if !vms.contains_key(&id) {
                return Err(ValidationError::UnknownVm { vm: id });
            }
            if self.placements.contains_key(&id) || !unplaced.insert(id) {
                return Err(ValidationError::DoublyAccounted { vm: id });
            }
        }
        for id in vms.keys() {
            if !self.placements.contains_key(id) && !unplaced.contains(id) {
                return Err(ValidationError::Missing { vm: *id });
            }
        }

        let mut per_host: BTreeMap<HostId, Vec<&VmRequest>> = BTreeMap::new();
        for (&vm_id, &host_id) in &self.placements {
            let vm = vms.get(&vm_id).ok_or(ValidationError::UnknownVm { vm: vm_id })?;
            let host = hosts.get(&host_id).ok_or(ValidationError::UnknownHost {
                vm: vm_id,
                host: host_id,
            })?;
            if !vm.demand.fits_within(&host.capacity) {
                return Err(ValidationError::Oversized {
                    vm: vm_id,
                    host: host_id,
                });
            }
            per_host.entry(host_id).or_default().push(vm);
        }

        for state in &self.hosts {
            let mapped: BTreeSet<VmId> = per_host
                .get(&state.id())
                .map(|v| v.iter().map(|vm| vm.id).collect())
                .unwrap_or_default();
            let held: BTreeSet<VmId> = state.vms().iter().map(|vm| vm.id).collect();
            if mapped != held {
                return Err(ValidationError::StateMismatch { host: state.id() });
            }
        }

        for (host_id, assigned) in &per_host {
            check_capacity(hosts[host_id], assigned)?;
        }
        Ok(())
    }
}

fn check_capacity(host: &HostConfig, assigned: &[&VmRequest]) -> Result<(), ValidationError> {
    let capacity = host.capacity.load();
    let mut events: Vec<(Tick, bool, Load)> = assigned
        .iter()
        .flat_map(|vm| {
            let load = vm.demand.load();
            [(vm.start(), true, load), (vm.finish(), false, load)]
        })
        .collect();
    events.sort_unstable_by_key(|&(t, arriving, _)| (t, arriving));
    let mut current = Load::default();
    for (t, arriving, load) in events {
        if arriving {
            current += load;
            if let Some(resource) = current.first_excess(&capacity) {
                return Err(overload(host.id, t, resource, current, capacity));
            }
        } else {
            current -= load;
        }
    }
    Ok(())
}

fn overload(host: HostId, time: Tick, resource: Resource, used: Load, capacity: Load) -> ValidationError {
    ValidationError::Overload {
        host,
        time,
        resource,
        used: used[resource],
        capacity: capacity[resource],
    }
}

/// Integral over time of the number of powered-on hosts, computed by an
/// event sweep over the raw mapping.
pub fn cost_by_sweep(instance: &Instance, placements: &BTreeMap<VmId, HostId>) -> Tick {
    let host_slot: HashMap<HostId, usize> = instance.hosts.iter().enumerate().map(|(i, h)| (h.id, i)).collect();
    let mut events: Vec<(Tick, bool, usize)> = Vec::new();
    for vm in &instance.vms {
        if let Some(slot) = placements.get(&vm.id).and_then(|h| host_slot.get(h)) {
            events.push((vm.start(), true, *slot));
            events.push((vm.finish(), false, *slot));
        }
    }
    events.sort_unstable_by_key(|&(t, arriving, slot)| (t, arriving, slot));

    let mut active = vec![0usize; instance.hosts.len()];
    let mut powered: u64 = 0;
    let mut last = 0;
    let mut total = 0;
    for (t, arriving, slot) in events {
        total += powered * (t - last);
        last = t;
        if arriving {
            if active[slot] == 0 {
                powered += 1;
            }
            active[slot] += 1;
        } else {
            active[slot] -= 1;
            if active[slot] == 0 {
                powered -= 1;
            }
        }
    }
    total
}

/// Total busy time of a schedule that passes validation.
pub fn schedule_cost(schedule: &Schedule, instance: &Instance) -> Result<Tick, ValidationError> {
    schedule.validate(instance)?;
    let cost = schedule.cost();
    debug_assert_eq!(cost, cost_by_sweep(instance, schedule.placements()));
    Ok(cost)
}
