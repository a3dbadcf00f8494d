//! Scalar types used for power, energy and placement metrics.
//!
//! Time and resource quantities are always exact integers. Quantities
//! derived from them (utilizations, watts, watt-seconds, metric values) are
//! computed in a caller-chosen [`Scalar`]: `f64` for speed, or [`Rational`]
//! when results must be compared exactly.

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

/// Exact rational arithmetic over 128-bit integers.
pub type Rational = Ratio<i128>;

pub trait Scalar: Copy + Debug + PartialOrd + Num + Sum + Send + Sync + 'static {
    fn from_u64(value: u64) -> Self;

    fn to_f64(self) -> f64;

    /// `num / den`. `den` must be non-zero.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_u64(num) / Self::from_u64(den)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f32 {
    fn from_u64(value: u64) -> Self {
        value as f32
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_u64(value: u64) -> Self {
        value as f64
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for Rational {
    fn from_u64(value: u64) -> Self {
        Ratio::from_integer(value as i128)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn ratio(num: u64, den: u64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}
