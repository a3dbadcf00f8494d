use serde::{Deserialize, Serialize};

use crate::model::{ResourceVector, VmRequest};

use super::{SwfJob, WorkloadError};

/// Ordered VM types handed out round-robin when converting jobs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VmTypeCatalog {
    types: Vec<ResourceVector>,
}

impl VmTypeCatalog {
    pub fn new(types: Vec<ResourceVector>) -> Result<Self, WorkloadError> {
        if types.is_empty() {
            return Err(WorkloadError::EmptyCatalog);
        }
        Ok(Self { types })
    }

    /// The eight standard types (per-core MIPS, cores, RAM MB, Mbit/s,
    /// storage). Storage is held in MB so that the 422.5 GB and 211.25 GB
    /// types stay exact.
    pub fn standard() -> Self {
        const GB: u64 = 1000;
        Self {
            types: vec![
                ResourceVector::new(8, 2500, 6800, 100, 1000 * GB),
                ResourceVector::new(2, 2500, 1700, 100, 422_500),
                ResourceVector::new(8, 3250, 68_400, 100, 1000 * GB),
                ResourceVector::new(4, 3250, 34_200, 100, 845 * GB),
                ResourceVector::new(2, 3250, 17_100, 100, 422_500),
                ResourceVector::new(4, 2000, 15_000, 100, 1690 * GB),
                ResourceVector::new(2, 2000, 7500, 100, 845 * GB),
                ResourceVector::new(1, 1000, 1875, 100, 211_250),
            ],
        }
    }

    pub fn types(&self) -> &[ResourceVector] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }
}

impl Default for VmTypeCatalog {
    fn default() -> Self {
        Self::standard()
    }
}

/// VMs produced from a job list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Conversion {
    pub vms: Vec<VmRequest>,
    /// Number of VMs created per catalog entry.
    pub type_histogram: Vec<usize>,
    /// Index into the catalog of each VM, parallel to `vms`.
    pub type_of: Vec<usize>,
}

/// One VM per processor of each job, all running over
/// `[start, start + run_time)`. The `k`-th VM overall gets type
/// `k mod catalog.len()` and id `k`.
pub fn jobs_to_vms(jobs: &[SwfJob], catalog: &VmTypeCatalog) -> Result<Conversion, WorkloadError> {
    let mut out = Conversion {
        type_histogram: vec![0; catalog.len()],
        ..Default::default()
    };
    let mut k: u64 = 0;
    for job in jobs {
        for _ in 0..job.processors {
            let ty = (k % catalog.len() as u64) as usize;
            let vm = VmRequest::new(k, job.start(), job.run_time, catalog.types[ty])
                .map_err(|source| WorkloadError::InvalidJob { job: job.id, source })?;
            out.vms.push(vm);
            out.type_of.push(ty);
            out.type_histogram[ty] += 1;
            k += 1;
        }
    }
    Ok(out)
}

/// Splits off VMs that do not fit `capacity`; returns the kept VMs and the
/// number rejected.
pub fn reject_oversized(vms: Vec<VmRequest>, capacity: &ResourceVector) -> (Vec<VmRequest>, usize) {
    let before = vms.len();
    let kept: Vec<VmRequest> = vms.into_iter().filter(|vm| vm.demand.fits_within(capacity)).collect();
    let rejected = before - kept.len();
    (kept, rejected)
}
