//! Placement heuristics and the exhaustive oracle.
//!
//! Every heuristic is a greedy pass: VMs are taken in a heuristic-specific
//! order and each goes to the feasible host minimizing a heuristic-specific
//! score, ties going to the lowest host id. VMs that fit nowhere are
//! recorded as unplaced.

mod baselines;
mod emintre;
mod greedy;
mod oracle;
mod tre;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{HostId, HostState, Instance, Load, Resource, Schedule, VmId, VmRequest, RESOURCE_COUNT};
use crate::Scalar;

pub use baselines::{mindft_ldtf, pabfd, tian_mffde, vbp_default_weights, vbp_norm_l2};
pub use emintre::emintre_lft;
pub use oracle::{brute_force_optimal, OracleLimits};
pub use tre::tre_metric;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("{vm} does not fit on {host}")]
    Infeasible { vm: VmId, host: HostId },
    #[error("oracle refuses {vms} VMs on {hosts} hosts (limits: {max_vms} VMs, {max_hosts} hosts)")]
    OracleLimit {
        vms: usize,
        hosts: usize,
        max_vms: usize,
        max_hosts: usize,
    },
    #[error("no feasible placement of every VM exists")]
    NoFeasibleSchedule,
    #[error("unknown scheduler `{0}`")]
    UnknownScheduler(String),
    #[error("unknown sort order `{0}`")]
    UnknownSortOrder(String),
}

/// Order in which a greedy pass visits VMs. Remaining ties always go to
/// the lower VM id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SortOrder {
    /// Descending finish time, then longer duration first.
    #[default]
    LatestFinishFirst,
    /// Descending duration, then earlier start first.
    LongestDurationFirst,
    /// Ascending start time, then later finish first.
    EarliestStartFirst,
    /// Descending aggregate MIPS demand.
    CpuUtilizationDecreasing,
}

impl SortOrder {
    pub fn sort(self, vms: &mut [VmRequest]) {
        use std::cmp::Reverse;
        match self {
            SortOrder::LatestFinishFirst => vms.sort_by_key(|vm| (Reverse(vm.finish()), Reverse(vm.duration()), vm.id)),
            SortOrder::LongestDurationFirst => vms.sort_by_key(|vm| (Reverse(vm.duration()), vm.start(), vm.id)),
            SortOrder::EarliestStartFirst => vms.sort_by_key(|vm| (vm.start(), Reverse(vm.finish()), vm.id)),
            SortOrder::CpuUtilizationDecreasing => vms.sort_by_key(|vm| (Reverse(vm.demand.total_mips()), vm.id)),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SortOrder::LatestFinishFirst => "lft",
            SortOrder::LongestDurationFirst => "ldtf",
            SortOrder::EarliestStartFirst => "est",
            SortOrder::CpuUtilizationDecreasing => "cpu",
        }
    }
}

impl FromStr for SortOrder {
    type Err = SchedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lft" | "latest-finish-first" => Ok(SortOrder::LatestFinishFirst),
            "ldtf" | "ldf" | "longest-duration-first" => Ok(SortOrder::LongestDurationFirst),
            "est" | "earliest-start-first" => Ok(SortOrder::EarliestStartFirst),
            "cpu" | "cpu-utilization-decreasing" => Ok(SortOrder::CpuUtilizationDecreasing),
            _ => Err(SchedError::UnknownSortOrder(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    LowestHostId,
}

/// Weights and ordering for EMinTRE-LFT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulerConfig<T> {
    pub weight_time: T,
    /// Indexed by [`Resource`].
    pub weight_resources: [T; RESOURCE_COUNT],
    pub sort_order: SortOrder,
    pub tie_break: TieBreak,
}

impl<T: Scalar> Default for SchedulerConfig<T> {
    fn default() -> Self {
        Self {
            weight_time: T::one(),
            weight_resources: [T::one(); RESOURCE_COUNT],
            sort_order: SortOrder::LatestFinishFirst,
            tie_break: TieBreak::LowestHostId,
        }
    }
}

impl<T: Scalar> SchedulerConfig<T> {
    pub fn with_weight_time(mut self, w: T) -> Self {
        self.weight_time = w;
        self
    }

    pub fn with_sort_order(mut self, order: SortOrder) -> Self {
        self.sort_order = order;
        self
    }

    pub fn weight(&self, r: Resource) -> T {
        self.weight_resources[r.index()]
    }
}

/// One greedy step, kept for tracing and debugging.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementDecision {
    pub vm: VmId,
    pub host: Option<HostId>,
    pub metric_value: f64,
    pub candidates_examined: usize,
}

pub trait Scheduler {
    fn name(&self) -> String;

    fn schedule_traced(&self, instance: &Instance) -> (Schedule, Vec<PlacementDecision>);

    fn schedule(&self, instance: &Instance) -> Schedule {
        self.schedule_traced(instance).0
    }
}

/// The heuristics selectable from the benchmark runner.
#[derive(Debug, Clone, PartialEq)]
pub enum SchedulerKind {
    EMinTreLft(SchedulerConfig<f64>),
    Pabfd,
    /// `None` selects the exponential-average default weights.
    VbpNormL2(Option<[f64; RESOURCE_COUNT]>),
    TianMffde,
    MinDftLdtf,
}

impl SchedulerKind {
    pub fn emintre_lft() -> Self {
        SchedulerKind::EMinTreLft(SchedulerConfig::default())
    }

    /// Stable identifier used on the command line and in spec files.
    pub fn slug(&self) -> &'static str {
        match self {
            SchedulerKind::EMinTreLft(_) => "emintre-lft",
            SchedulerKind::Pabfd => "pabfd",
            SchedulerKind::VbpNormL2(_) => "vbp-norm-l2",
            SchedulerKind::TianMffde => "tian-mffde",
            SchedulerKind::MinDftLdtf => "mindft-ldtf",
        }
    }

    pub fn from_slug(slug: &str) -> Result<Self, SchedError> {
        match slug.to_ascii_lowercase().as_str() {
            "emintre-lft" | "emintre" => Ok(Self::emintre_lft()),
            "pabfd" => Ok(SchedulerKind::Pabfd),
            "vbp-norm-l2" | "norm-vbp-l2" => Ok(SchedulerKind::VbpNormL2(None)),
            "tian-mffde" | "mffde" => Ok(SchedulerKind::TianMffde),
            "mindft-ldtf" | "mindft" => Ok(SchedulerKind::MinDftLdtf),
            _ => Err(SchedError::UnknownScheduler(slug.to_string())),
        }
    }
}

impl fmt::Display for SchedulerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulerKind::EMinTreLft(cfg) => {
                write!(f, "EMinTRE-LFT wt{}", cfg.weight_time)?;
                if cfg.sort_order != SortOrder::LatestFinishFirst {
                    write!(f, " ({})", cfg.sort_order.short_name())?;
                }
                Ok(())
            }
            SchedulerKind::Pabfd => f.write_str("PABFD"),
            SchedulerKind::VbpNormL2(_) => f.write_str("VBP-Norm-L2"),
            SchedulerKind::TianMffde => f.write_str("Tian-MFFDE"),
            SchedulerKind::MinDftLdtf => f.write_str("MinDFT-LDTF"),
        }
    }
}

impl Scheduler for SchedulerKind {
    fn name(&self) -> String {
        self.to_string()
    }

    fn schedule_traced(&self, instance: &Instance) -> (Schedule, Vec<PlacementDecision>) {
        match self {
            SchedulerKind::EMinTreLft(cfg) => emintre_lft(instance, cfg),
            SchedulerKind::Pabfd => pabfd(instance),
            SchedulerKind::VbpNormL2(weights) => {
                let weights = weights.unwrap_or_else(|| vbp_default_weights(instance));
                vbp_norm_l2(instance, &weights)
            }
            SchedulerKind::TianMffde => tian_mffde(instance),
            SchedulerKind::MinDftLdtf => mindft_ldtf(instance),
        }
    }
}

/// Post-placement peak load over the VM's interval, or `None` when the VM
/// does not fit. Agrees with [`HostState::can_place`].
pub(crate) fn load_after(host: &HostState, vm: &VmRequest) -> Option<Load> {
    let capacity = &host.config().capacity;
    if vm.demand.mips > capacity.mips {
        return None;
    }
    let load = host.peak_load_over(&vm.interval) + vm.demand.load();
    load.le(&capacity.load()).then_some(load)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_orders() {
        use crate::model::ResourceVector;
        let d = |c| ResourceVector::new(c, 1, 0, 0, 0);
        let mut vms = vec![
            VmRequest::new(0, 0, 10, d(1)).unwrap(),
            VmRequest::new(1, 5, 5, d(3)).unwrap(),
            VmRequest::new(2, 2, 8, d(2)).unwrap(),
            VmRequest::new(3, 0, 4, d(2)).unwrap(),
        ];
        let ids = |v: &[VmRequest]| v.iter().map(|vm| vm.id.0).collect::<Vec<_>>();
        SortOrder::LatestFinishFirst.sort(&mut vms);
        assert_eq!(ids(&vms), vec![0, 2, 1, 3]);
        SortOrder::LongestDurationFirst.sort(&mut vms);
        assert_eq!(ids(&vms), vec![0, 2, 1, 3]);
        SortOrder::EarliestStartFirst.sort(&mut vms);
        assert_eq!(ids(&vms), vec![0, 3, 2, 1]);
        SortOrder::CpuUtilizationDecreasing.sort(&mut vms);
        assert_eq!(ids(&vms), vec![1, 2, 3, 0]);
    }

    #[test]
    fn names_and_slugs() {
        for slug in ["emintre-lft", "pabfd", "vbp-norm-l2", "tian-mffde", "mindft-ldtf"] {
            assert_eq!(SchedulerKind::from_slug(slug).unwrap().slug(), slug);
        }
        assert!(SchedulerKind::from_slug("ffd").is_err());
        let wt = SchedulerKind::EMinTreLft(SchedulerConfig::default().with_weight_time(0.001));
        assert_eq!(wt.name(), "EMinTRE-LFT wt0.001");
        let ldtf =
            SchedulerKind::EMinTreLft(SchedulerConfig::default().with_sort_order(SortOrder::LongestDurationFirst));
        assert_eq!(ldtf.name(), "EMinTRE-LFT wt1 (ldtf)");
        assert_eq!("ldtf".parse::<SortOrder>().unwrap(), SortOrder::LongestDurationFirst);
        assert!("xyz".parse::<SortOrder>().is_err());
    }
}
