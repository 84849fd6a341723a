//! Extended-real distances and dense pre-metric matrices.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A non-negative distance that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distance {
    Finite(f64),
    Infinite,
}

impl Distance {
    /// `−log p`, with `p ≤ 1e-300` treated as unreachable.
    pub fn from_probability(p: f64) -> Self {
        if p <= 1e-300 {
            Distance::Infinite
        } else if p >= 1.0 {
            Distance::Finite(0.0)
        } else {
            Distance::Finite(-p.ln())
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    /// `+∞` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.to_f64().total_cmp(&other.to_f64())
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_f64(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Symmetric N×N distance matrix indexed by 1-based spins. Zero on the
/// diagonal; the triangle inequality is not assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct PreMetric {
    n: usize,
    entries: Vec<Distance>,
}

impl PreMetric {
    /// Builds the matrix from `f(i, j)` evaluated once per unordered pair
    /// `i < j` (1-based).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Distance) -> Self {
        let mut entries = vec![Distance::Finite(0.0); n * n];
        for i in 1..=n {
            for j in i + 1..=n {
                let d = f(i, j);
                entries[(i - 1) * n + j - 1] = d;
                entries[(j - 1) * n + i - 1] = d;
            }
        }
        PreMetric { n, entries }
    }

    pub(crate) fn from_entries(n: usize, entries: Vec<Distance>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        PreMetric { n, entries }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Distance {
        self.entries[(i - 1) * self.n + j - 1]
    }

    /// Row `i` (1-based) as a slice indexed by `j − 1`.
    pub fn row(&self, i: usize) -> &[Distance] {
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    /// Multiplies every finite entry by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|d| match d {
                Distance::Finite(x) => Distance::Finite(x * c),
                Distance::Infinite => Distance::Infinite,
            })
            .collect();
        PreMetric { n: self.n, entries }
    }
}
