use std::cmp::Ordering;

use crate::model::{Instance, Resource, Schedule, RESOURCE_COUNT};
use crate::power::{cpu_fraction, PowerModel};
use crate::Rational;

use super::greedy::run_greedy;
use super::{load_after, PlacementDecision, SortOrder};

/// Power-aware best-fit decreasing: VMs by decreasing CPU demand, each on
/// the host whose power draw at the VM's start instant grows the least.
/// A host with nothing running at that instant is off, so waking it costs
/// its idle power on top of the VM's dynamic share.
pub fn pabfd(instance: &Instance) -> (Schedule, Vec<PlacementDecision>) {
    let mut order = instance.vms.clone();
    SortOrder::CpuUtilizationDecreasing.sort(&mut order);
    run_greedy(instance, order, |host, vm, _| {
        load_after(host, vm)?;
        let config = host.config();
        let model = PowerModel::<Rational>::from_config(config);
        let capacity = &config.capacity;
        let before_load = host.load_at(vm.start());
        let u_before = if capacity.total_mips() == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(before_load[Resource::Mips] as i128, capacity.total_mips() as i128)
        };
        let u_after = u_before + cpu_fraction::<Rational>(&vm.demand, capacity);
        let before = if host.is_busy_at(vm.start()) {
            model.power(u_before)
        } else {
            Rational::from_integer(0)
        };
        Some(model.power(u_after) - before)
    })
}

/// Default VBP-Norm-L2 weights: `exp` of the mean demand of each resource,
/// normalized by the capacity of the first host.
pub fn vbp_default_weights(instance: &Instance) -> [f64; RESOURCE_COUNT] {
    let mut weights = [1.0; RESOURCE_COUNT];
    let Some(host) = instance.hosts.first() else {
        return weights;
    };
    if instance.vms.is_empty() {
        return weights;
    }
    let capacity = host.capacity.load();
    for r in Resource::ALL {
        if capacity[r] == 0 {
            continue;
        }
        let mean = instance
            .vms
            .iter()
            .map(|vm| vm.demand.load()[r] as f64 / capacity[r] as f64)
            .sum::<f64>()
            / instance.vms.len() as f64;
        weights[r.index()] = mean.exp();
    }
    weights
}

/// Norm-based greedy vector packing of degree 2: VMs by decreasing weighted
/// demand norm, each on the host minimizing the squared weighted L2 norm of
/// its normalized residual capacity after placement. Residual capacity is
/// taken at the peak of the VM's interval.
pub fn vbp_norm_l2(instance: &Instance, weights: &[f64; RESOURCE_COUNT]) -> (Schedule, Vec<PlacementDecision>) {
    let reference = instance.hosts.first().map(|h| h.capacity.load());
    let size = |vm: &crate::model::VmRequest| -> f64 {
        let Some(capacity) = reference else { return 0.0 };
        let demand = vm.demand.load();
        Resource::ALL
            .into_iter()
            .filter(|&r| capacity[r] > 0)
            .map(|r| {
                let x = weights[r.index()] * demand[r] as f64 / capacity[r] as f64;
                x * x
            })
            .sum()
    };
    let mut keyed: Vec<(f64, _)> = instance.vms.iter().map(|vm| (size(vm), *vm)).collect();
    keyed.sort_by(|(a, va), (b, vb)| b.partial_cmp(a).unwrap_or(Ordering::Equal).then(va.id.cmp(&vb.id)));
    let order = keyed.into_iter().map(|(_, vm)| vm).collect();

    run_greedy(instance, order, |host, vm, _| {
        let load = load_after(host, vm)?;
        let capacity = host.config().capacity.load();
        let norm: f64 = Resource::ALL
            .into_iter()
            .filter(|&r| capacity[r] > 0)
            .map(|r| {
                let residual = (capacity[r] - load[r]) as f64 / capacity[r] as f64;
                let x = weights[r.index()] * residual;
                x * x
            })
            .sum();
        Some(norm)
    })
}

/// Modified first-fit decreasing earliest: VMs by decreasing duration
/// (earlier start first on ties), each on the lowest-id host it fits.
pub fn tian_mffde(instance: &Instance) -> (Schedule, Vec<PlacementDecision>) {
    let mut order = instance.vms.clone();
    SortOrder::LongestDurationFirst.sort(&mut order);
    run_greedy(instance, order, |host, vm, _| {
        load_after(host, vm)?;
        Some(0.0f64)
    })
}

/// MinDFT-LDTF: VMs by start time (later finish first on ties), each on the
/// host whose busy time grows the least.
pub fn mindft_ldtf(instance: &Instance) -> (Schedule, Vec<PlacementDecision>) {
    let mut order = instance.vms.clone();
    SortOrder::EarliestStartFirst.sort(&mut order);
    run_greedy(instance, order, |host, vm, _| {
        load_after(host, vm)?;
        let growth = host.busy_time_with(&vm.interval) - host.busy_time();
        Some(growth as f64)
    })
}
