//! Half-open intervals and threshold grids.
//!
//! Every value handled by the pattern languages is reduced to an interval
//! `]lo, hi]`: raw intervals directly, scalars as the degenerate interval
//! `]y - eps, y]`, and cdfs through their inter-quantile interval. A
//! [`ThresholdGrid`] fixes the frontiers `s_1 < ... < s_k` inside a domain
//! `]s_0, s_(k+1)]` together with the data resolution `eps`.

use std::fmt;

use crate::error::{Error, Result};

/// Half-open interval `]lo, hi]`, non-empty by construction.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `]y - eps, y]` standing for the scalar `y`.
    pub fn point(y: f64, eps: f64) -> Result<Self> {
        Interval::new(y - eps, y)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Membership test: `x` is inside `]lo, hi]`.
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.hi > other.lo && other.hi > self.lo
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Containment of the closed range `[lo, hi]`.
    pub fn contains_closed(&self, lo: f64, hi: f64) -> bool {
        self.lo < lo && hi <= self.hi
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "]{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "]{}, {}]", self.lo, self.hi)
    }
}

/// Thresholds `s_1 < ... < s_k` inside the domain `]s_0, s_(k+1)]`.
///
/// Indices 0 and k+1 address the virtual domain bounds; pattern atoms over
/// them are always true and never enter a vocabulary. `epsilon` is the
/// resolution of the underlying data: the width granted to scalar values
/// and the step used when a pattern is read back as "contains
/// `[s_j, s_i + epsilon]`".
#[derive(Clone, PartialEq, Debug)]
pub struct ThresholdGrid {
    bounds: Vec<f64>,
    epsilon: f64,
}

impl ThresholdGrid {
    pub fn new(domain_lo: f64, domain_hi: f64, thresholds: &[f64], epsilon: f64) -> Result<Self> {
        let mut bounds = Vec::with_capacity(thresholds.len() + 2);
        bounds.push(domain_lo);
        bounds.extend_from_slice(thresholds);
        bounds.push(domain_hi);
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::Invalid("grid bounds must be finite".into()));
        }
        if !bounds.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "grid bounds must be strictly increasing".into(),
            ));
        }
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::Invalid("grid resolution must be positive".into()));
        }
        Ok(ThresholdGrid { bounds, epsilon })
    }

    /// Number of real thresholds `k`.
    pub fn k(&self) -> usize {
        self.bounds.len() - 2
    }

    /// Bound `s_i` for `i` in `0..=k+1`.
    pub fn bound(&self, i: usize) -> f64 {
        self.bounds[i]
    }

    /// The real thresholds `s_1..s_k`.
    pub fn thresholds(&self) -> &[f64] {
        &self.bounds[1..self.bounds.len() - 1]
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.bounds[0],
            hi: self.bounds[self.bounds.len() - 1],
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn contains(&self, iv: &Interval) -> bool {
        iv.is_subset_of(&self.domain())
    }

    /// Greatest index `i` in `0..=k` with `s_i < x`; 0 when none is below.
    pub(crate) fn greatest_below(&self, x: f64) -> usize {
        let k = self.k();
        (0..=k).rev().find(|&i| self.bounds[i] < x).unwrap_or(0)
    }

    /// Smallest index `j` in `1..=k+1` with `s_j > x`; k+1 when none is above.
    pub(crate) fn least_above(&self, x: f64) -> usize {
        let k = self.k();
        (1..=k + 1).find(|&j| self.bounds[j] > x).unwrap_or(k + 1)
    }

    /// Greatest index `i` in `0..=k` with `s_i <= x`; 0 when none.
    pub(crate) fn greatest_at_most(&self, x: f64) -> usize {
        let k = self.k();
        (0..=k).rev().find(|&i| self.bounds[i] <= x).unwrap_or(0)
    }

    /// Smallest index `j` in `1..=k+1` with `s_j >= x`; k+1 when none.
    pub(crate) fn least_at_least(&self, x: f64) -> usize {
        let k = self.k();
        (1..=k + 1).find(|&j| self.bounds[j] >= x).unwrap_or(k + 1)
    }
}
