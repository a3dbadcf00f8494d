use std::fmt;
use std::ops::{Add, AddAssign, Index, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Resource dimensions tracked by the capacity model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Cores,
    Mips,
    Ram,
    NetBw,
    Storage,
}

pub const RESOURCE_COUNT: usize = 5;

impl Resource {
    pub const ALL: [Resource; RESOURCE_COUNT] = [
        Resource::Cores,
        Resource::Mips,
        Resource::Ram,
        Resource::NetBw,
        Resource::Storage,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Resource::Cores => "cores",
            Resource::Mips => "mips",
            Resource::Ram => "ram",
            Resource::NetBw => "netbw",
            Resource::Storage => "storage",
        }
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Resource {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Resource::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ModelError::UnknownResource(s.to_string()))
    }
}

/// Demand or capacity of a machine.
///
/// `mips` is the rate of a single core; the aggregate compute rate is
/// `cores * mips`. `ram` is in MB, `netbw` in Mbit/s and `storage` in MB.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResourceVector {
    pub cores: u64,
    pub mips: u64,
    pub ram: u64,
    pub netbw: u64,
    pub storage: u64,
}

impl ResourceVector {
    pub const fn new(cores: u64, mips: u64, ram: u64, netbw: u64, storage: u64) -> Self {
        Self {
            cores,
            mips,
            ram,
            netbw,
            storage,
        }
    }

    pub fn total_mips(&self) -> u64 {
        self.cores * self.mips
    }

    /// Additive view used for capacity accounting: per-core MIPS becomes
    /// the aggregate compute rate.
    pub fn load(&self) -> Load {
        Load([self.cores, self.total_mips(), self.ram, self.netbw, self.storage])
    }

    /// Componentwise `<=` on the raw fields.
    pub fn le(&self, other: &ResourceVector) -> bool {
        self.cores <= other.cores
            && self.mips <= other.mips
            && self.ram <= other.ram
            && self.netbw <= other.netbw
            && self.storage <= other.storage
    }

    /// Whether a single VM with this demand can run on an otherwise empty
    /// host with the given capacity.
    pub fn fits_within(&self, capacity: &ResourceVector) -> bool {
        self.mips <= capacity.mips && self.load().le(&capacity.load())
    }
}

/// Aggregate resource usage indexed by [`Resource`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Load(pub [u64; RESOURCE_COUNT]);

impl Load {
    pub fn le(&self, other: &Load) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// First resource on which `self` exceeds `capacity`.
    pub fn first_excess(&self, capacity: &Load) -> Option<Resource> {
        Resource::ALL.into_iter().find(|r| self[*r] > capacity[*r])
    }
}

impl Index<Resource> for Load {
    type Output = u64;

    fn index(&self, r: Resource) -> &u64 {
        &self.0[r.index()]
    }
}

impl Add for Load {
    type Output = Load;

    fn add(mut self, rhs: Load) -> Load {
        self += rhs;
        self
    }
}

impl AddAssign for Load {
    fn add_assign(&mut self, rhs: Load) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for Load {
    type Output = Load;

    fn sub(mut self, rhs: Load) -> Load {
        self -= rhs;
        self
    }
}

impl SubAssign for Load {
    fn sub_assign(&mut self, rhs: Load) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}
