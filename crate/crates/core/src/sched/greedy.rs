use std::collections::VecDeque;

use crate::model::{HostConfig, HostState, Instance, Schedule, Tick, VmRequest};
use crate::Scalar;

use super::PlacementDecision;

/// Host bookkeeping for one greedy pass.
///
/// Untouched hosts with identical configurations are interchangeable, so
/// only the lowest-id untouched host of each configuration class is offered
/// as a candidate. Every score in this crate depends only on the host's
/// configuration and assigned VMs, hence the argmin (with lowest-id
/// tie-break) is the same as when scanning every host.
pub(crate) struct Fleet {
    schedule: Schedule,
    used: Vec<usize>,
    fresh: Vec<VecDeque<usize>>,
    total_busy: Tick,
}

impl Fleet {
    pub(crate) fn new(hosts: &[HostConfig]) -> Self {
        let schedule = Schedule::new(hosts);
        let mut classes: Vec<(HostConfig, VecDeque<usize>)> = Vec::new();
        for (idx, host) in schedule.hosts().iter().enumerate() {
            match classes.iter_mut().find(|(rep, _)| rep.same_class(host.config())) {
                Some((_, members)) => members.push_back(idx),
                None => classes.push((*host.config(), VecDeque::from([idx]))),
            }
        }
        Self {
            schedule,
            used: Vec::new(),
            fresh: classes.into_iter().map(|(_, m)| m).collect(),
            total_busy: 0,
        }
    }

    #[cfg(test)]
    fn total_busy(&self) -> Tick {
        self.total_busy
    }

    fn candidates(&self) -> impl Iterator<Item = usize> + '_ {
        self.used
            .iter()
            .copied()
            .chain(self.fresh.iter().filter_map(|m| m.front().copied()))
    }

    fn host(&self, idx: usize) -> &HostState {
        &self.schedule.hosts()[idx]
    }

    fn place(&mut self, vm: VmRequest, idx: usize) {
        if self.host(idx).is_empty() {
            for members in &mut self.fresh {
                if members.front() == Some(&idx) {
                    members.pop_front();
                }
            }
            self.used.push(idx);
        }
        let before = self.host(idx).busy_time();
        self.schedule.place_unchecked(vm, idx);
        self.total_busy += self.host(idx).busy_time() - before;
    }

    pub(crate) fn into_schedule(self) -> Schedule {
        self.schedule
    }
}

/// Places `order` one VM at a time on the host minimizing `score`; `score`
/// returns `None` for hosts the VM does not fit on.
pub(crate) fn run_greedy<S, F>(
    instance: &Instance,
    order: Vec<VmRequest>,
    mut score: F,
) -> (Schedule, Vec<PlacementDecision>)
where
    S: Scalar,
    F: FnMut(&HostState, &VmRequest, &Fleet) -> Option<S>,
{
    let mut fleet = Fleet::new(&instance.hosts);
    let mut trace = Vec::with_capacity(order.len());
    for vm in order {
        let mut best: Option<(S, usize)> = None;
        let mut examined = 0;
        for idx in fleet.candidates() {
            let Some(value) = score(fleet.host(idx), &vm, &fleet) else {
                continue;
            };
            examined += 1;
            let better = match best {
                None => true,
                Some((b, b_idx)) => value < b || (value == b && idx < b_idx),
            };
            if better {
                best = Some((value, idx));
            }
        }
        let host = best.map(|(_, idx)| fleet.host(idx).id());
        trace.push(PlacementDecision {
            vm: vm.id,
            host,
            metric_value: best.map_or(f64::NAN, |(v, _)| v.to_f64()),
            candidates_examined: examined,
        });
        match best {
            Some((_, idx)) => fleet.place(vm, idx),
            None => fleet.schedule.mark_unplaced(vm.id),
        }
    }
    (fleet.into_schedule(), trace)
}
