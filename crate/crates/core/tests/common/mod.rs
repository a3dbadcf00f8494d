//! Random instance builders and brute-force per-tick oracles shared by the
//! integration tests. Nothing here calls into the library's own
//! feasibility, cost or energy code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use busytime::model::{HostConfig, HostId, Instance, ResourceVector, VmId, VmRequest};
use busytime::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_host(id: u32) -> HostConfig {
    HostConfig {
        id: HostId(id),
        capacity: ResourceVector::new(4, 1000, 8, 4, 8),
        p_idle: 175,
        p_max: 250,
    }
}

pub fn random_demand(rng: &mut impl Rng) -> ResourceVector {
    ResourceVector::new(
        rng.gen_range(1..=4),
        rng.gen_range(1..=10) * 100,
        rng.gen_range(0..=8),
        rng.gen_range(0..=4),
        rng.gen_range(0..=8),
    )
}

pub fn random_vms(rng: &mut impl Rng, n: usize, horizon: u64, max_len: u64) -> Vec<VmRequest> {
    (0..n as u64)
        .map(|id| {
            let start = rng.gen_range(0..horizon);
            let len = rng.gen_range(1..=max_len);
            VmRequest::new(id, start, len, random_demand(rng)).unwrap()
        })
        .collect()
}

/// Mixed-demand instance on `m` identical small hosts; every VM fits an
/// empty host.
pub fn mixed_instance(rng: &mut impl Rng, n: usize, m: usize) -> Instance {
    let vms = random_vms(rng, n, 100, 40);
    Instance::new(vms, (0..m as u32).map(small_host).collect())
}

/// Uniform-demand instance on reference hosts where exactly `g` VMs fit on
/// one host at a time.
pub fn uniform_instance(rng: &mut impl Rng, n: usize, m: usize, g: u64) -> Instance {
    let cores = match g {
        1 => 16,
        2 => 8,
        3 => 5,
        _ => panic!("unsupported g"),
    };
    let demand = ResourceVector::new(cores, 3250, 1, 1, 1);
    let vms = (0..n as u64)
        .map(|id| {
            let start = rng.gen_range(0..50);
            VmRequest::new(id, start, rng.gen_range(1..=30), demand).unwrap()
        })
        .collect();
    Instance::new(vms, (0..m as u32).map(HostConfig::reference).collect())
}

pub fn vm_by_id(instance: &Instance) -> BTreeMap<VmId, VmRequest> {
    instance.vms.iter().map(|vm| (vm.id, *vm)).collect()
}

/// Loads as (cores, cores*mips, ram, netbw, storage), written out longhand.
fn usage(d: &ResourceVector) -> [u64; 5] {
    [d.cores, d.cores * d.mips, d.ram, d.netbw, d.storage]
}

/// Checks every tick of every host against capacity, plus the per-core
/// MIPS limit. Returns false on any violation.
pub fn tick_feasible(instance: &Instance, mapping: &BTreeMap<VmId, HostId>) -> bool {
    let vms = vm_by_id(instance);
    for host in &instance.hosts {
        let cap = usage(&host.capacity);
        let on: Vec<&VmRequest> = mapping
            .iter()
            .filter(|(_, h)| **h == host.id)
            .map(|(v, _)| &vms[v])
            .collect();
        if on.iter().any(|vm| vm.demand.mips > host.capacity.mips) {
            return false;
        }
        let horizon = on.iter().map(|vm| vm.finish()).max().unwrap_or(0);
        for t in 0..horizon {
            let mut used = [0u64; 5];
            for vm in on.iter().filter(|vm| vm.start() <= t && t < vm.finish()) {
                for (u, d) in used.iter_mut().zip(usage(&vm.demand)) {
                    *u += d;
                }
            }
            if used.iter().zip(cap).any(|(u, c)| *u > c) {
                return false;
            }
        }
    }
    true
}

/// Number of (host, tick) pairs with at least one VM running.
pub fn tick_cost(instance: &Instance, mapping: &BTreeMap<VmId, HostId>) -> u64 {
    let vms = vm_by_id(instance);
    let mut cost = 0;
    for host in &instance.hosts {
        let on: Vec<&VmRequest> = mapping
            .iter()
            .filter(|(_, h)| **h == host.id)
            .map(|(v, _)| &vms[v])
            .collect();
        let horizon = on.iter().map(|vm| vm.finish()).max().unwrap_or(0);
        cost += (0..horizon)
            .filter(|&t| on.iter().any(|vm| vm.start() <= t && t < vm.finish()))
            .count() as u64;
    }
    cost
}

/// Total VM length and the length of the union of VM intervals, by ticks.
pub fn tick_len_span(vms: &[VmRequest]) -> (u64, u64) {
    let len = vms.iter().map(|vm| vm.finish() - vm.start()).sum();
    let horizon = vms.iter().map(|vm| vm.finish()).max().unwrap_or(0);
    let span = (0..horizon)
        .filter(|&t| vms.iter().any(|vm| vm.start() <= t && t < vm.finish()))
        .count() as u64;
    (len, span)
}

/// Energy in watt-seconds of a whole mapping by summing, tick by tick, the
/// linear power draw of every powered host.
pub fn tick_energy(instance: &Instance, mapping: &BTreeMap<VmId, HostId>) -> Rational {
    let vms = vm_by_id(instance);
    let mut total = Rational::from_integer(0);
    for host in &instance.hosts {
        let on: Vec<&VmRequest> = mapping
            .iter()
            .filter(|(_, h)| **h == host.id)
            .map(|(v, _)| &vms[v])
            .collect();
        let horizon = on.iter().map(|vm| vm.finish()).max().unwrap_or(0);
        let cap = (host.capacity.cores * host.capacity.mips) as i128;
        let (p_idle, p_max) = (host.p_idle as i128, host.p_max as i128);
        for t in 0..horizon {
            let active: Vec<_> = on.iter().filter(|vm| vm.start() <= t && t < vm.finish()).collect();
            if active.is_empty() {
                continue;
            }
            let mips: i128 = active.iter().map(|vm| (vm.demand.cores * vm.demand.mips) as i128).sum();
            // P = p_idle + (p_max - p_idle) * U
            total += Rational::from_integer(p_idle) + Rational::new((p_max - p_idle) * mips, cap);
        }
    }
    total
}

/// Every VM->host mapping, in lexicographic order of the host index list.
pub fn all_mappings(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (m as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut digits = vec![0; n];
        for d in digits.iter_mut().rev() {
            *d = (code % m as u64) as usize;
            code /= m as u64;
        }
        digits
    })
}

pub fn to_mapping(instance: &Instance, hosts: &[usize]) -> BTreeMap<VmId, HostId> {
    let mut sorted = instance.vms.clone();
    sorted.sort_by_key(|vm| vm.id);
    sorted
        .iter()
        .zip(hosts)
        .map(|(vm, &j)| (vm.id, instance.hosts[j].id))
        .collect()
}
