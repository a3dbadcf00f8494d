use serde::{Deserialize, Serialize};

use super::ModelError;

/// Integer trace time. One tick is one second.
pub type Tick = u64;

/// Half-open time interval `[start, finish)` with `finish > start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    start: Tick,
    finish: Tick,
}

#[derive(Deserialize)]
struct RawInterval {
    start: Tick,
    finish: Tick,
}

impl TryFrom<RawInterval> for Interval {
    type Error = ModelError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.start, raw.finish)
    }
}

impl Interval {
    pub fn new(start: Tick, finish: Tick) -> Result<Self, ModelError> {
        if finish <= start {
            return Err(ModelError::EmptyInterval { start, finish });
        }
        Ok(Self { start, finish })
    }

    pub fn with_duration(start: Tick, duration: Tick) -> Result<Self, ModelError> {
        let finish = start
            .checked_add(duration)
            .ok_or(ModelError::TimeOverflow { start, duration })?;
        Self::new(start, finish)
    }

    #[inline]
    pub fn start(&self) -> Tick {
        self.start
    }

    #[inline]
    pub fn finish(&self) -> Tick {
        self.finish
    }

    #[inline]
    pub fn length(&self) -> Tick {
        self.finish - self.start
    }

    #[inline]
    pub fn contains(&self, t: Tick) -> bool {
        self.start <= t && t < self.finish
    }

    /// Touching intervals (`[0,5)` and `[5,9)`) do not overlap.
    #[inline]
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.finish && other.start < self.finish
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let finish = self.finish.min(other.finish);
        (start < finish).then_some(Interval { start, finish })
    }
}

/// Sorted, pairwise disjoint, non-adjacent cover of the input intervals.
pub fn merge_intervals(intervals: impl IntoIterator<Item = Interval>) -> Vec<Interval> {
    let mut sorted: Vec<Interval> = intervals.into_iter().collect();
    sorted.sort_unstable();
    let mut merged: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match merged.last_mut() {
            Some(last) if iv.start <= last.finish => last.finish = last.finish.max(iv.finish),
            _ => merged.push(iv),
        }
    }
    merged
}

/// Length of the union of `intervals`, i.e. their span.
pub fn interval_union_length(intervals: &[Interval]) -> Tick {
    merge_intervals(intervals.iter().copied())
        .iter()
        .map(Interval::length)
        .sum()
}

/// Sum of the individual interval lengths.
pub fn total_length(intervals: &[Interval]) -> Tick {
    intervals.iter().map(Interval::length).sum()
}
