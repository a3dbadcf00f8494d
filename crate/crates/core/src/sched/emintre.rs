use crate::model::{Instance, Schedule};
use crate::Scalar;

use super::greedy::run_greedy;
use super::{load_after, tre, PlacementDecision, SchedulerConfig};

/// EMinTRE-LFT: VMs in `config.sort_order` (latest finish first by default),
/// each placed on the feasible host with the smallest TRE score.
///
/// The fleet busy-time total is maintained incrementally, so the growth
/// term is simply the chosen host's busy-time growth.
pub fn emintre_lft<T: Scalar>(instance: &Instance, config: &SchedulerConfig<T>) -> (Schedule, Vec<PlacementDecision>) {
    let mut order = instance.vms.clone();
    config.sort_order.sort(&mut order);
    run_greedy(instance, order, |host, vm, _fleet| {
        let load = load_after(host, vm)?;
        let busy_after = host.busy_time_with(&vm.interval);
        let t_diff = busy_after - host.busy_time();
        Some(tre::score(host, load, t_diff, busy_after, config))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{HostConfig, HostId, ResourceVector, VmId, VmRequest};
    use crate::sched::{tre_metric, SortOrder};
    use crate::Rational;

    fn small(id: u64, start: u64, dur: u64) -> VmRequest {
        VmRequest::new(id, start, dur, ResourceVector::new(2, 2500, 1700, 100, 422_500)).unwrap()
    }

    fn hosts(n: u32) -> Vec<HostConfig> {
        (0..n).map(HostConfig::reference).collect()
    }

    #[test]
    fn single_vm_lands_on_only_host() {
        let inst = Instance::new(vec![small(0, 0, 10)], hosts(1));
        let (s, trace) = emintre_lft(&inst, &SchedulerConfig::<f64>::default());
        assert_eq!(s.host_of(VmId(0)), Some(HostId(0)));
        assert_eq!(trace.len(), 1);
        assert!(s.is_complete());
    }

    #[test]
    fn disjoint_vms_consolidate_on_first_host() {
        let inst = Instance::new(vec![small(0, 0, 10), small(1, 20, 10)], hosts(2));
        let (s, _) = emintre_lft(&inst, &SchedulerConfig::<Rational>::default());
        assert_eq!(s.host_of(VmId(0)), Some(HostId(0)));
        assert_eq!(s.host_of(VmId(1)), Some(HostId(0)));
        assert_eq!(s.cost(), 20);
    }

    #[test]
    fn oversized_vm_is_unplaced() {
        let huge = VmRequest::new(0, 0, 10, ResourceVector::new(32, 3250, 1, 1, 1)).unwrap();
        let inst = Instance::new(vec![huge, small(1, 0, 5)], hosts(2));
        let (s, trace) = emintre_lft(&inst, &SchedulerConfig::<f64>::default());
        assert_eq!(s.unplaced(), &[VmId(0)]);
        assert!(trace[0].host.is_none());
        assert_eq!(trace[0].candidates_examined, 0);
        assert!(s.validate(&inst).is_ok());
    }

    #[test]
    fn trace_records_tre_of_choice() {
        let inst = Instance::new(vec![small(0, 0, 10), small(1, 5, 10)], hosts(3));
        let cfg = SchedulerConfig::<Rational>::default();
        let (s, trace) = emintre_lft(&inst, &cfg);
        // VM 1 finishes later, so it goes first onto host 0.
        assert_eq!(trace[0].vm, VmId(1));
        let mut replay = crate::model::HostState::new(HostConfig::reference(0));
        replay.assign(inst.vms[1]).unwrap();
        let expected = tre_metric(&replay, &inst.vms[0], 10, &cfg).unwrap();
        assert!((trace[1].metric_value - expected.to_f64()).abs() < 1e-12);
        assert_eq!(s.host_of(VmId(0)), Some(HostId(0)));
        // Host 0 and one fresh host were the only candidates.
        assert_eq!(trace[1].candidates_examined, 2);
    }

    #[test]
    fn sort_order_is_configurable() {
        let inst = Instance::new(vec![small(0, 0, 30), small(1, 20, 20)], hosts(2));
        let lft = SchedulerConfig::<f64>::default();
        let ldf = lft.with_sort_order(SortOrder::LongestDurationFirst);
        assert_eq!(emintre_lft(&inst, &lft).1[0].vm, VmId(1));
        assert_eq!(emintre_lft(&inst, &ldf).1[0].vm, VmId(0));
    }
}
