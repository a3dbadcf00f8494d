//! Linear power model and energy accounting.
//!
//! A powered-on host draws `(alpha + (1 - alpha) * U) * p_max` watts where
//! `alpha = p_idle / p_max` and `U` is its CPU utilization; an idle host
//! with no running VM is off. Host energy therefore splits into a base term
//! `alpha * p_max * busy_time` and one increment per VM,
//! `(1 - alpha) * p_max * du * duration`, where `du` is the share of the
//! host's aggregate MIPS the VM occupies. Only CPU contributes to power.
//!
//! All energies are in watt-seconds.

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    bounds_for_instance, HostConfig, HostId, HostState, Instance, Resource, ResourceVector, Schedule, Tick, VmId,
    VmRequest,
};
use crate::Scalar;

pub const WATT_SECONDS_PER_KWH: f64 = 3.6e6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowerError {
    #[error("energy bounds require identical hosts")]
    Heterogeneous,
    #[error("instance has VMs but no hosts")]
    NoHosts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel<T> {
    p_idle: T,
    p_max: T,
}

impl<T: Scalar> PowerModel<T> {
    pub fn from_config(host: &HostConfig) -> Self {
        Self {
            p_idle: T::from_u64(host.p_idle),
            p_max: T::from_u64(host.p_max),
        }
    }

    pub fn p_idle(&self) -> T {
        self.p_idle
    }

    pub fn p_max(&self) -> T {
        self.p_max
    }

    pub fn alpha(&self) -> T {
        self.p_idle / self.p_max
    }

    /// Draw of a powered-on host at CPU utilization `u`.
    pub fn power(&self, u: T) -> T {
        let alpha = self.alpha();
        (alpha + (T::one() - alpha) * u) * self.p_max
    }

    /// Dynamic range `(1 - alpha) * p_max`.
    pub fn dynamic_range(&self) -> T {
        (T::one() - self.alpha()) * self.p_max
    }
}

/// Share of the host's aggregate compute rate that `demand` occupies.
pub fn cpu_fraction<T: Scalar>(demand: &ResourceVector, capacity: &ResourceVector) -> T {
    let total = capacity.total_mips();
    if total == 0 {
        return T::zero();
    }
    T::ratio(demand.total_mips(), total)
}

/// CPU utilization of `host` at instant `t`.
pub fn host_utilization<T: Scalar>(host: &HostState, t: Tick) -> T {
    let total = host.config().capacity.total_mips();
    if total == 0 {
        return T::zero();
    }
    T::ratio(host.load_at(t)[Resource::Mips], total)
}

/// Energy attributable to `vm` on top of the host's base draw.
pub fn vm_energy<T: Scalar>(vm: &VmRequest, host: &HostConfig) -> T {
    let model = PowerModel::<T>::from_config(host);
    model.dynamic_range() * cpu_fraction::<T>(&vm.demand, &host.capacity) * T::from_u64(vm.duration())
}

/// Base draw over the busy time plus the increments of every assigned VM.
pub fn host_energy<T: Scalar>(host: &HostState) -> T {
    let config = host.config();
    let model = PowerModel::<T>::from_config(config);
    let base = model.alpha() * model.p_max() * T::from_u64(host.busy_time());
    host.vms().iter().fold(base, |acc, vm| acc + vm_energy::<T>(vm, config))
}

/// Integrates the instantaneous power draw over time, segment by segment
/// between consecutive VM start/finish events.
pub fn host_energy_by_sweep<T: Scalar>(host: &HostState) -> T {
    let config = host.config();
    let model = PowerModel::<T>::from_config(config);
    let total_mips = config.capacity.total_mips();
    let mut events: Vec<(Tick, bool, u64)> = host
        .vms()
        .iter()
        .flat_map(|vm| {
            let mips = vm.demand.total_mips();
            [(vm.start(), true, mips), (vm.finish(), false, mips)]
        })
        .collect();
    events.sort_unstable_by_key(|&(t, arriving, _)| (t, arriving));

    let mut energy = T::zero();
    let mut active = 0usize;
    let mut mips = 0u64;
    let mut last = 0;
    for (t, arriving, vm_mips) in events {
        if active > 0 && t > last {
            let u = if total_mips == 0 {
                T::zero()
            } else {
                T::ratio(mips, total_mips)
            };
            energy = energy + model.power(u) * T::from_u64(t - last);
        }
        last = t;
        if arriving {
            active += 1;
            mips += vm_mips;
        } else {
            active -= 1;
            mips -= vm_mips;
        }
    }
    energy
}

/// Energy decomposition of a schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport<T> {
    /// `alpha * p_max * busy_time` per host, in host-id order.
    pub per_host_base: Vec<(HostId, T)>,
    /// Per-VM increments, in VM-id order.
    pub per_vm_increment: Vec<(VmId, T)>,
    pub total: T,
    /// Set when the hosts differ in capacity or power figures. The total is
    /// still exact, but it no longer orders schedules the same way busy time
    /// does.
    pub heterogeneous: bool,
}

impl<T: Scalar> EnergyReport<T> {
    pub fn base_total(&self) -> T {
        self.per_host_base.iter().map(|&(_, e)| e).sum()
    }

    pub fn increment_total(&self) -> T {
        self.per_vm_increment.iter().map(|&(_, e)| e).sum()
    }

    pub fn kwh(&self) -> f64 {
        self.total.to_f64() / WATT_SECONDS_PER_KWH
    }
}

pub fn schedule_energy<T: Scalar>(schedule: &Schedule) -> EnergyReport<T> {
    let mut per_host_base = Vec::with_capacity(schedule.hosts().len());
    let mut per_vm_increment = Vec::new();
    for host in schedule.hosts() {
        let config = host.config();
        let model = PowerModel::<T>::from_config(config);
        per_host_base.push((host.id(), model.alpha() * model.p_max() * T::from_u64(host.busy_time())));
        per_vm_increment.extend(host.vms().iter().map(|vm| (vm.id, vm_energy::<T>(vm, config))));
    }
    per_vm_increment.sort_by_key(|&(id, _)| id);
    let heterogeneous = !schedule
        .hosts()
        .windows(2)
        .all(|w| w[0].config().same_class(w[1].config()));
    let mut report = EnergyReport {
        per_host_base,
        per_vm_increment,
        total: T::zero(),
        heterogeneous,
    };
    report.total = report.base_total() + report.increment_total();
    report
}

/// Bounds on the energy of an optimal schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnergyBounds<T> {
    pub lower: T,
    pub upper: T,
}

/// `p_idle * len / g <= E_opt <= p_max * len` on identical hosts.
pub fn optimal_energy_bounds<T: Scalar>(instance: &Instance) -> Result<EnergyBounds<T>, PowerError> {
    let Some(host) = instance.hosts.first() else {
        return if instance.vms.is_empty() {
            Ok(EnergyBounds {
                lower: T::zero(),
                upper: T::zero(),
            })
        } else {
            Err(PowerError::NoHosts)
        };
    };
    if !instance.is_homogeneous() {
        return Err(PowerError::Heterogeneous);
    }
    let bounds = bounds_for_instance(instance);
    let len = T::from_u64(bounds.len);
    Ok(EnergyBounds {
        lower: T::from_u64(host.p_idle) * len / T::from_u64(bounds.g),
        upper: T::from_u64(host.p_max) * len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HostId, Interval};
    use crate::Rational;

    fn type2(id: u64, start: Tick, duration: Tick) -> VmRequest {
        VmRequest::new(id, start, duration, ResourceVector::new(2, 2500, 1700, 100, 422_500)).unwrap()
    }

    fn full_cpu(id: u64, start: Tick, duration: Tick) -> VmRequest {
        VmRequest::new(id, start, duration, ResourceVector::new(16, 3250, 0, 0, 0)).unwrap()
    }

    fn no_cpu(id: u64, start: Tick, duration: Tick) -> VmRequest {
        VmRequest::new(id, start, duration, ResourceVector::new(0, 0, 1, 0, 0)).unwrap()
    }

    #[test]
    fn power_model_endpoints() {
        let m = PowerModel::<Rational>::from_config(&HostConfig::reference(0));
        assert_eq!(m.alpha(), Rational::new(7, 10));
        assert_eq!(m.power(Rational::from_integer(0)), Rational::from_integer(175));
        assert_eq!(m.power(Rational::from_integer(1)), Rational::from_integer(250));
        assert_eq!(m.dynamic_range(), Rational::from_integer(75));
    }

    #[test]
    fn utilization_examples() {
        let mut host = HostState::new(HostConfig::reference(0));
        assert_eq!(host_utilization::<f64>(&host, 0), 0.0);
        host.assign(type2(0, 0, 3600)).unwrap();
        assert_eq!(host_utilization::<Rational>(&host, 10), Rational::new(5000, 52000));
        assert!((host_utilization::<f64>(&host, 10) - 0.0962).abs() < 1e-4);
        assert_eq!(host_utilization::<f64>(&host, 3600), 0.0);

        let mut host = HostState::new(HostConfig::reference(1));
        host.assign(full_cpu(0, 0, 10)).unwrap();
        assert_eq!(host_utilization::<f64>(&host, 5), 1.0);
    }

    #[test]
    fn vm_energy_examples() {
        let host = HostConfig::reference(0);
        assert_eq!(vm_energy::<f64>(&no_cpu(0, 0, 100), &host), 0.0);

        let flat = HostConfig { p_idle: 250, ..host };
        assert_eq!(
            vm_energy::<Rational>(&type2(0, 0, 3600), &flat),
            Rational::from_integer(0)
        );

        // 0.3 * 250 * (5000 / 52000) * 3600
        let e = vm_energy::<Rational>(&type2(0, 0, 3600), &host);
        assert_eq!(e, Rational::new(75 * 5000 * 3600, 52000));
        assert!((vm_energy::<f64>(&type2(0, 0, 3600), &host) - 25_961.538_461_5).abs() < 1e-6);
    }

    #[test]
    fn host_energy_examples() {
        let empty = HostState::new(HostConfig::reference(0));
        assert_eq!(host_energy::<f64>(&empty), 0.0);
        assert_eq!(host_energy_by_sweep::<f64>(&empty), 0.0);

        let mut idle = HostState::new(HostConfig::reference(0));
        idle.assign(no_cpu(0, 0, 60)).unwrap();
        idle.assign(no_cpu(1, 40, 60)).unwrap();
        assert_eq!(host_energy::<Rational>(&idle), Rational::from_integer(175 * 100));
        assert_eq!(
            host_energy_by_sweep::<Rational>(&idle),
            Rational::from_integer(175 * 100)
        );
    }

    #[test]
    fn sweep_skips_gaps() {
        let mut host = HostState::new(HostConfig::reference(0));
        host.assign(full_cpu(0, 0, 10)).unwrap();
        host.assign(type2(1, 20, 10)).unwrap();
        assert_eq!(host.busy_periods().len(), 2);
        assert_eq!(host.busy_periods()[1], Interval::new(20, 30).unwrap());
        let exact = host_energy::<Rational>(&host);
        assert_eq!(exact, host_energy_by_sweep::<Rational>(&host));
        assert_eq!(
            exact,
            Rational::from_integer(2500) + Rational::from_integer(1750) + Rational::new(75 * 5000 * 10, 52000)
        );
    }

    #[test]
    fn single_type2_schedule() {
        let inst = Instance::new(vec![type2(0, 0, 3600)], vec![HostConfig::reference(0)]);
        let mut s = Schedule::new(&inst.hosts);
        s.place(inst.vms[0], 0).unwrap();
        let r = schedule_energy::<Rational>(&s);
        assert_eq!(r.per_host_base, vec![(HostId(0), Rational::from_integer(175 * 3600))]);
        assert_eq!(r.increment_total(), Rational::new(75 * 5000 * 3600, 52000));
        assert_eq!(r.total, Rational::from_integer(630_000) + r.increment_total());
        assert!(!r.heterogeneous);
        assert_eq!(schedule_energy::<f64>(&Schedule::new(&inst.hosts)).total, 0.0);
    }

    #[test]
    fn heterogeneous_fleet_is_flagged() {
        let mut other = HostConfig::reference(1);
        other.p_max = 300;
        let s = Schedule::new(&[HostConfig::reference(0), other]);
        assert!(schedule_energy::<f64>(&s).heterogeneous);
        let inst = Instance::new(vec![], vec![HostConfig::reference(0), other]);
        assert_eq!(optimal_energy_bounds::<f64>(&inst), Err(PowerError::Heterogeneous));
    }

    #[test]
    fn bounds_examples() {
        let empty = Instance::new(vec![], vec![HostConfig::reference(0)]);
        let b = optimal_energy_bounds::<Rational>(&empty).unwrap();
        assert_eq!(
            (b.lower, b.upper),
            (Rational::from_integer(0), Rational::from_integer(0))
        );

        // Two full-host-halves: g = 2.
        let half = ResourceVector::new(8, 3250, 70_042, 5000, 5_000_000);
        let inst = Instance::new(
            vec![
                VmRequest::new(0, 0, 3600, half).unwrap(),
                VmRequest::new(1, 0, 3600, half).unwrap(),
            ],
            vec![HostConfig::reference(0), HostConfig::reference(1)],
        );
        assert_eq!(bounds_for_instance(&inst).g, 2);
        let b = optimal_energy_bounds::<Rational>(&inst).unwrap();
        assert_eq!(b.lower, Rational::from_integer(630_000));
        assert_eq!(b.upper, Rational::from_integer(1_800_000));

        let orphan = Instance::new(vec![type2(0, 0, 1)], vec![]);
        assert_eq!(optimal_energy_bounds::<f64>(&orphan), Err(PowerError::NoHosts));
    }
}
