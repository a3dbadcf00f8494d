use crate::model::{HostState, Load, Resource, Tick, VmRequest};
use crate::Scalar;

use super::{load_after, SchedError, SchedulerConfig};

/// Time-and-resource-efficiency score of placing `vm` on `host`; lower is
/// better.
///
/// `TRE = (t_diff * w_time / T_busy)^2 + D^2`, where `t_diff` is the growth
/// of the fleet's total busy time, `T_busy` is the host's busy time after
/// the placement, and `D^2 = sum_r ((1 - U_r) * w_r)^2` over the host's
/// post-placement utilization `U_r` of each resource. `U_r` is the peak
/// concurrent usage during the VM's interval divided by capacity.
pub fn tre_metric<T: Scalar>(
    host: &HostState,
    vm: &VmRequest,
    fleet_busy_before: Tick,
    config: &SchedulerConfig<T>,
) -> Result<T, SchedError> {
    let load = load_after(host, vm).ok_or(SchedError::Infeasible {
        vm: vm.id,
        host: host.id(),
    })?;
    let busy_after = host.busy_time_with(&vm.interval);
    let fleet_after = fleet_busy_before as i128 - host.busy_time() as i128 + busy_after as i128;
    let t_diff = (fleet_after - fleet_busy_before as i128).max(0) as u64;
    Ok(score(host, load, t_diff, busy_after, config))
}

pub(crate) fn score<T: Scalar>(
    host: &HostState,
    load: Load,
    t_diff: Tick,
    busy_after: Tick,
    config: &SchedulerConfig<T>,
) -> T {
    let capacity = host.config().capacity.load();
    let time = T::ratio(t_diff, busy_after) * config.weight_time;
    let mut total = time * time;
    for r in Resource::ALL {
        let utilization = if capacity[r] == 0 {
            T::one()
        } else {
            T::ratio(load[r], capacity[r])
        };
        let residual = (T::one() - utilization) * config.weight(r);
        total = total + residual * residual;
    }
    total
}
