//! The random-classifier baseline.
//!
//! A uniform guesser over all classes seen so far has expected accuracy 1/C_k
//! on every task, which makes its accuracy matrix and forgetting available in
//! closed form. These values are the denominators of the rescaled metrics. A
//! seeded Monte-Carlo simulation provides a statistical cross-check of the
//! expectation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::schedule::{AccuracyMatrix, TaskSchedule};
use crate::series::{MetricName, MetricSeries};
use crate::traditional::average_forgetting;

/// The k-th harmonic number H_k = sum_{i=1..k} 1/i, by forward summation.
///
/// Panics at k = 0; every caller works with 1-based task ids.
pub fn harmonic(k: usize) -> f64 {
    assert!(k >= 1, "harmonic numbers start at H_1");
    (1..=k).map(|i| 1.0 / i as f64).sum()
}

/// Cached harmonic numbers H_1..=H_max, built once by forward summation and
/// immutable afterwards.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    values: Vec<f64>,
}

impl HarmonicTable {
    pub fn up_to(max: usize) -> Self {
        assert!(max >= 1, "harmonic numbers start at H_1");
        let mut values = Vec::with_capacity(max);
        let mut sum = 0.0;
        for i in 1..=max {
            sum += 1.0 / i as f64;
            values.push(sum);
        }
        Self { values }
    }

    /// H_k (1-based).
    pub fn h(&self, k: usize) -> f64 {
        assert!(
            k >= 1 && k <= self.values.len(),
            "H_{k} outside cached range 1..={}",
            self.values.len()
        );
        self.values[k - 1]
    }

    pub fn max_index(&self) -> usize {
        self.values.len()
    }
}

/// Expected accuracy matrix of the random classifier: a(k, j) = 1/C_k for
/// every j <= k.
pub fn rand_accuracy_matrix(schedule: &TaskSchedule) -> AccuracyMatrix {
    AccuracyMatrix::from_fn(schedule.clone(), |k, _| {
        1.0 / schedule.cumulative_classes(k) as f64
    })
}

/// AF_k of the random classifier for every k, with k = 1 undefined.
///
/// Uniform schedules use the closed form (1/C_k)(k H_{k-1}/(k-1) - 1); the
/// closed form's derivation needs C_{k+1} = C_k + n_C, so non-uniform
/// schedules fall back to the definitional computation on the expected
/// accuracy matrix.
pub fn rand_average_forgetting_series(schedule: &TaskSchedule) -> MetricSeries {
    let num_tasks = schedule.num_tasks();
    if !schedule.is_uniform() {
        return MetricSeries::new(
            MetricName::Af,
            average_forgetting(&rand_accuracy_matrix(schedule)).into_values(),
        );
    }
    let mut values = vec![None; num_tasks];
    if num_tasks >= 2 {
        let harmonics = HarmonicTable::up_to(num_tasks - 1);
        for (i, slot) in values.iter_mut().enumerate().skip(1) {
            let k = i + 1;
            let kf = k as f64;
            let ck = schedule.cumulative_classes(k) as f64;
            *slot = Some((kf * harmonics.h(k - 1) / (kf - 1.0) - 1.0) / ck);
        }
    }
    MetricSeries::new(MetricName::Af, values)
}

/// AF_k of the random classifier at a single task id k (k >= 2).
pub fn rand_average_forgetting(schedule: &TaskSchedule, k: usize) -> f64 {
    assert!(
        k >= 2 && k <= schedule.num_tasks(),
        "random-classifier forgetting needs 2 <= k <= K, got k = {k}"
    );
    rand_average_forgetting_series(schedule)
        .get(k)
        .expect("k >= 2 entries are always defined")
}

/// Empirical accuracy matrix from simulated uniform guessing.
///
/// For each cell (k, j), draws `samples_per_task` true labels uniformly from
/// task j's classes and guesses uniformly over all C_k classes seen so far.
/// Deterministic for a fixed seed.
pub fn monte_carlo_random_classifier(
    schedule: &TaskSchedule,
    samples_per_task: usize,
    seed: u64,
) -> AccuracyMatrix {
    assert!(samples_per_task >= 1, "need at least one sample per cell");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AccuracyMatrix::from_fn(schedule.clone(), |k, j| {
        let total = schedule.cumulative_classes(k);
        let task_lo = if j == 1 {
            0
        } else {
            schedule.cumulative_classes(j - 1)
        };
        let task_hi = schedule.cumulative_classes(j);
        let mut hits = 0usize;
        for _ in 0..samples_per_task {
            let truth = rng.random_range(task_lo..task_hi);
            let guess = rng.random_range(0..total);
            if truth == guess {
                hits += 1;
            }
        }
        hits as f64 / samples_per_task as f64
    })
}
