//! Per-task metric series with explicitly-undefined entries.
//!
//! Forgetting-family metrics have no value at k = 1; those entries are `None`
//! rather than zero so that "not defined" never masquerades as "no
//! forgetting".

use std::fmt;

/// Label of a metric series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricName {
    Aa,
    Af,
    URaa,
    URaf,
    Raa,
    Raf,
    Gamma,
    Beta,
}

impl MetricName {
    pub fn label(self) -> &'static str {
        match self {
            MetricName::Aa => "AA",
            MetricName::Af => "AF",
            MetricName::URaa => "uRAA",
            MetricName::URaf => "uRAF",
            MetricName::Raa => "RAA",
            MetricName::Raf => "RAF",
            MetricName::Gamma => "gamma",
            MetricName::Beta => "beta",
        }
    }
}

impl fmt::Display for MetricName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A metric value per task id k in [1, K]. `None` marks an entry that is
/// explicitly undefined (e.g. forgetting at k = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    name: MetricName,
    values: Vec<Option<f64>>,
}

impl MetricSeries {
    pub fn new(name: MetricName, values: Vec<Option<f64>>) -> Self {
        Self { name, values }
    }

    /// A series of length `len` with every entry undefined.
    pub fn undefined(name: MetricName, len: usize) -> Self {
        Self {
            name,
            values: vec![None; len],
        }
    }

    pub fn name(&self) -> MetricName {
        self.name
    }

    /// Number of tasks covered (K).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at task id `k` (1-based). Panics if `k` is out of [1, K].
    pub fn get(&self, k: usize) -> Option<f64> {
        assert!(
            k >= 1 && k <= self.values.len(),
            "task id {k} out of range 1..={}",
            self.values.len()
        );
        self.values[k - 1]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Iterate as (task id, value) pairs, task ids starting at 1.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<f64>)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (i + 1, *v))
    }

    /// Defined values only, with their task ids.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.iter().filter_map(|(k, v)| v.map(|x| (k, x)))
    }

    pub fn into_values(self) -> Vec<Option<f64>> {
        self.values
    }
}
