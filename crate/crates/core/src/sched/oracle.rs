use crate::model::{HostState, Instance, Schedule, Tick, VmRequest};

use super::SchedError;

/// Size limits for [`brute_force_optimal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vms: usize,
    pub max_hosts: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_vms: 8,
            max_hosts: 4,
        }
    }
}

/// Minimum-cost placement of every VM, by exhaustive search.
///
/// VMs are assigned in id order and hosts tried in id order, so the first
/// optimum found is the lexicographically smallest mapping. Among untouched
/// hosts of one configuration class only the lowest-id one is tried, and a
/// branch is cut as soon as its partial cost reaches the best known cost
/// (busy time never shrinks as VMs are added).
pub fn brute_force_optimal(instance: &Instance, limits: OracleLimits) -> Result<Schedule, SchedError> {
    let (n, m) = (instance.vms.len(), instance.hosts.len());
    if n > limits.max_vms || m > limits.max_hosts {
        return Err(SchedError::OracleLimit {
            vms: n,
            hosts: m,
            max_vms: limits.max_vms,
            max_hosts: limits.max_hosts,
        });
    }
    let mut vms = instance.vms.clone();
    vms.sort_by_key(|vm| vm.id);

    let empty = Schedule::new(&instance.hosts);
    let mut hosts: Vec<HostState> = empty.hosts().to_vec();
    let class_of: Vec<usize> = (0..m)
        .map(|j| {
            (0..=j)
                .find(|&k| hosts[k].config().same_class(hosts[j].config()))
                .expect("j matches itself")
        })
        .collect();

    let mut search = Search {
        vms: &vms,
        class_of: &class_of,
        assignment: Vec::with_capacity(n),
        best: None,
    };
    search.descend(&mut hosts, 0);

    let (_, assignment) = search.best.ok_or(SchedError::NoFeasibleSchedule)?;
    let mut schedule = empty;
    for (vm, idx) in vms.iter().zip(assignment) {
        schedule.place(*vm, idx).expect("oracle assignment is feasible");
    }
    Ok(schedule)
}

struct Search<'a> {
    vms: &'a [VmRequest],
    class_of: &'a [usize],
    assignment: Vec<usize>,
    best: Option<(Tick, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, hosts: &mut [HostState], cost: Tick) {
        if matches!(&self.best, Some((best, _)) if cost >= *best) {
            return;
        }
        let depth = self.assignment.len();
        let Some(vm) = self.vms.get(depth) else {
            self.best = Some((cost, self.assignment.clone()));
            return;
        };
        for j in 0..hosts.len() {
            if hosts[j].is_empty() && (0..j).any(|k| self.class_of[k] == self.class_of[j] && hosts[k].is_empty()) {
                continue;
            }
            if !hosts[j].can_place(vm) {
                continue;
            }
            let saved = hosts[j].clone();
            let before = hosts[j].busy_time();
            hosts[j].push_unchecked(*vm);
            let delta = hosts[j].busy_time() - before;
            self.assignment.push(j);
            self.descend(hosts, cost + delta);
            self.assignment.pop();
            hosts[j] = saved;
        }
    }
}
