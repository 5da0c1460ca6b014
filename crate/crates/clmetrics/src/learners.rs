//! Synthetic learner models.
//!
//! Each learner kind is a strategy behind the [`Learner`] trait, registered
//! by name and selected at runtime (the CLI's `--learner` flag goes through
//! [`LearnerSpec::parse`]). They generate analytically tractable accuracy
//! matrices — chance-level, ceiling, floor, and a two-parameter
//! stability/plasticity model — so every metric can be exercised without
//! training anything.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{AccuracyMatrix, TaskSchedule};

/// A strategy that yields the accuracy reached on `on_task` after training
/// through `after_task` (1-based, `on_task <= after_task`).
pub trait Learner {
    fn kind(&self) -> &'static str;
    fn accuracy(&self, schedule: &TaskSchedule, after_task: usize, on_task: usize) -> f64;
}

/// Uniform guesser over all classes seen so far: 1/C_k everywhere in row k.
pub struct RandomLearner;

impl Learner for RandomLearner {
    fn kind(&self) -> &'static str {
        "random"
    }

    fn accuracy(&self, schedule: &TaskSchedule, after_task: usize, _on_task: usize) -> f64 {
        1.0 / schedule.cumulative_classes(after_task) as f64
    }
}

/// Ceiling: every accuracy is 1.
pub struct PerfectLearner;

impl Learner for PerfectLearner {
    fn kind(&self) -> &'static str {
        "perfect"
    }

    fn accuracy(&self, _schedule: &TaskSchedule, _after_task: usize, _on_task: usize) -> f64 {
        1.0
    }
}

/// Floor: learns each task perfectly, then loses it completely — maximal
/// forgetting, f(k, j) = 1 everywhere.
pub struct WorstLearner;

impl Learner for WorstLearner {
    fn kind(&self) -> &'static str {
        "worst"
    }

    fn accuracy(&self, _schedule: &TaskSchedule, after_task: usize, on_task: usize) -> f64 {
        if after_task == on_task {
            1.0
        } else {
            0.0
        }
    }
}

/// Two-parameter stability/plasticity model.
///
/// On its own task the learner scores `plasticity` (p). Afterwards the
/// above-chance signal it had at learning time, p - 1/C_j, decays
/// geometrically with retention factor `stability` (s) while riding on the
/// current chance floor:
///
/// a(k, j) = 1/C_k + (p - 1/C_j) * s^(k-j), clipped to [0, 1].
///
/// s -> 0 collapses the history toward the current chance level; p below
/// chance is allowed and produces negative-deviation decay.
pub struct ParametricLearner {
    plasticity: f64,
    stability: f64,
}

impl ParametricLearner {
    pub fn new(plasticity: f64, stability: f64) -> Self {
        Self {
            plasticity,
            stability,
        }
    }
}

impl Learner for ParametricLearner {
    fn kind(&self) -> &'static str {
        "parametric"
    }

    fn accuracy(&self, schedule: &TaskSchedule, after_task: usize, on_task: usize) -> f64 {
        if after_task == on_task {
            return self.plasticity;
        }
        let chance_now = 1.0 / schedule.cumulative_classes(after_task) as f64;
        let deviation = self.plasticity - 1.0 / schedule.cumulative_classes(on_task) as f64;
        let retained = deviation * self.stability.powi((after_task - on_task) as i32);
        (chance_now + retained).clamp(0.0, 1.0)
    }
}

/// Registry of learner kinds: name and whether the kind takes the
/// plasticity/stability parameters.
pub const LEARNER_KINDS: &[(&str, bool)] = &[
    ("random", false),
    ("perfect", false),
    ("worst", false),
    ("parametric", true),
];

/// A validated, serializable description of a synthetic learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LearnerSpec {
    Random,
    Perfect,
    Worst,
    Parametric { plasticity: f64, stability: f64 },
}

impl LearnerSpec {
    /// Resolve a kind by registry name. Parametric requires both parameters
    /// in [0, 1]; the other kinds reject them.
    pub fn parse(kind: &str, plasticity: Option<f64>, stability: Option<f64>) -> Result<Self> {
        let entry = LEARNER_KINDS.iter().find(|(name, _)| *name == kind);
        let Some(&(name, needs_params)) = entry else {
            let known: Vec<&str> = LEARNER_KINDS.iter().map(|(n, _)| *n).collect();
            return Err(Error::Learner(format!(
                "unknown kind '{kind}'; expected one of {}",
                known.join(", ")
            )));
        };
        if !needs_params {
            if plasticity.is_some() || stability.is_some() {
                return Err(Error::Learner(format!(
                    "kind '{name}' takes no plasticity/stability parameters"
                )));
            }
            return Ok(match name {
                "random" => LearnerSpec::Random,
                "perfect" => LearnerSpec::Perfect,
                _ => LearnerSpec::Worst,
            });
        }
        let (Some(p), Some(s)) = (plasticity, stability) else {
            return Err(Error::Learner(
                "kind 'parametric' requires both --plasticity and --stability".into(),
            ));
        };
        for (label, v) in [("plasticity", p), ("stability", s)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Learner(format!("{label} = {v} is outside [0,1]")));
            }
        }
        Ok(LearnerSpec::Parametric {
            plasticity: p,
            stability: s,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LearnerSpec::Random => "random",
            LearnerSpec::Perfect => "perfect",
            LearnerSpec::Worst => "worst",
            LearnerSpec::Parametric { .. } => "parametric",
        }
    }

    /// Instantiate the strategy behind this spec.
    pub fn build(&self) -> Box<dyn Learner> {
        match *self {
            LearnerSpec::Random => Box::new(RandomLearner),
            LearnerSpec::Perfect => Box::new(PerfectLearner),
            LearnerSpec::Worst => Box::new(WorstLearner),
            LearnerSpec::Parametric {
                plasticity,
                stability,
            } => Box::new(ParametricLearner::new(plasticity, stability)),
        }
    }

    /// Generate the full accuracy matrix for a schedule.
    pub fn generate(&self, schedule: &TaskSchedule) -> AccuracyMatrix {
        let learner = self.build();
        AccuracyMatrix::from_fn(schedule.clone(), |k, j| learner.accuracy(schedule, k, j))
    }
}
