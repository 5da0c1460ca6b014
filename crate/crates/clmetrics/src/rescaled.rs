//! Difficulty-rescaled metrics.
//!
//! uRAA/uRAF divide AA/AF by the random classifier's value at the same task,
//! removing the performance loss any model suffers just because the class set
//! grows. RAA/RAF normalize those ratios by their analytic maxima over all
//! classifiers and tasks, which puts them back on a [0, 1]-like scale with
//! equality to AA/AF at the final task.
//!
//! Every RAA/RAF value is computed twice: definitionally (ratio, then
//! normalizer) and through the closed-form coefficients gamma_k = C_k/C_K and
//! beta_k = (H_K - 1)(k - 1) / ((H_k - 1)(K - 1)). The two routes must agree
//! to [`PATH_TOLERANCE`]; disagreement is a hard error, not something to
//! reconcile silently. The closed form for beta requires a uniform schedule;
//! non-uniform schedules fall back to a numeric normalizer and are flagged.

use crate::error::{Error, Result};
use crate::random_baseline::{rand_average_forgetting_series, HarmonicTable};
use crate::schedule::{AccuracyMatrix, TaskSchedule};
use crate::series::{MetricName, MetricSeries};
use crate::traditional::{average_accuracy, average_forgetting};

/// Maximum allowed gap between the definitional and closed-form routes.
pub const PATH_TOLERANCE: f64 = 1e-12;

/// Task-difficulty coefficients: RAA_k = gamma_k * AA_k and (on uniform
/// schedules) RAF_k = beta_k * AF_k. Both live in (0, 1] and reach 1 at k = K.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyCoefficients {
    pub gamma: MetricSeries,
    /// Undefined at k = 1, where no forgetting exists.
    pub beta: MetricSeries,
    /// True when beta came from the numeric fallback because the schedule is
    /// not uniform. gamma is exact either way.
    pub general_path: bool,
}

/// Analytic maxima of the unnormalized ratios over all classifiers and tasks:
/// the perfect classifier attains max uRAA = C_K, the always-forgets-all
/// classifier attains max uRAF.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizers {
    pub max_uraa: f64,
    /// `None` for single-task schedules, where forgetting does not exist.
    pub max_uraf: Option<f64>,
    /// True when max_uraf came from the numeric path (non-uniform schedule).
    pub general_path: bool,
}

impl Normalizers {
    pub fn for_schedule(schedule: &TaskSchedule) -> Self {
        let num_tasks = schedule.num_tasks();
        let max_uraa = schedule.total_classes() as f64;
        if num_tasks < 2 {
            return Self {
                max_uraa,
                max_uraf: None,
                general_path: !schedule.is_uniform(),
            };
        }
        if schedule.is_uniform() {
            // C_K (K - 1) / (K (H_K - 1)): the worst classifier's uRAF at K,
            // which the monotone ratio (k - 1)/(H_k - 1) makes the max over k.
            let kf = num_tasks as f64;
            let h_k = HarmonicTable::up_to(num_tasks).h(num_tasks);
            Self {
                max_uraa,
                max_uraf: Some(max_uraa * (kf - 1.0) / (kf * (h_k - 1.0))),
                general_path: false,
            }
        } else {
            Self {
                max_uraa,
                max_uraf: Self::max_uraf_numeric(schedule),
                general_path: true,
            }
        }
    }

    /// Numeric route for max uRAF: the worst classifier has AF_k = 1, so its
    /// uRAF at k is 1/AF_k(Rand); take the max over k. Valid on any schedule,
    /// and the oracle the uniform closed form is tested against.
    pub fn max_uraf_numeric(schedule: &TaskSchedule) -> Option<f64> {
        let rand_af = rand_average_forgetting_series(schedule);
        rand_af
            .defined()
            .map(|(_, af)| af)
            .fold(None, |acc: Option<f64>, af| {
                Some(acc.map_or(af, |m| m.min(af)))
            })
            .map(|min_af| 1.0 / min_af)
    }
}

/// gamma_k = C_k / C_K for every k; beta_k as the closed form on uniform
/// schedules or the numeric normalizer ratio otherwise (flagged, never
/// rejected).
pub fn difficulty_coefficients(schedule: &TaskSchedule) -> DifficultyCoefficients {
    let num_tasks = schedule.num_tasks();
    let total = schedule.total_classes() as f64;
    let gamma_values = (1..=num_tasks)
        .map(|k| Some(schedule.cumulative_classes(k) as f64 / total))
        .collect();
    let gamma = MetricSeries::new(MetricName::Gamma, gamma_values);

    let mut beta_values = vec![None; num_tasks];
    let general_path = !schedule.is_uniform();
    if num_tasks >= 2 {
        if !general_path {
            let harmonics = HarmonicTable::up_to(num_tasks);
            let h_last = harmonics.h(num_tasks);
            let kf = num_tasks as f64;
            for (i, slot) in beta_values.iter_mut().enumerate().skip(1) {
                let k = i + 1;
                let numerator = (h_last - 1.0) * (k as f64 - 1.0);
                let denominator = (harmonics.h(k) - 1.0) * (kf - 1.0);
                *slot = Some(numerator / denominator);
            }
        } else {
            // beta_k such that RAF_k = beta_k * AF_k under the numeric
            // normalizer: min_k AF_k(Rand) / AF_k(Rand).
            let rand_af = rand_average_forgetting_series(schedule);
            let min_af = rand_af
                .defined()
                .map(|(_, af)| af)
                .fold(f64::INFINITY, f64::min);
            for (k, af) in rand_af.defined() {
                beta_values[k - 1] = Some(min_af / af);
            }
        }
    }
    DifficultyCoefficients {
        gamma,
        beta: MetricSeries::new(MetricName::Beta, beta_values),
        general_path,
    }
}

/// uRAA_k = AA_k / AA_k(Rand) = C_k * AA_k, defined for every k.
pub fn unnormalized_rescaled_accuracy(matrix: &AccuracyMatrix) -> MetricSeries {
    let schedule = matrix.schedule();
    let values = average_accuracy(matrix)
        .iter()
        .map(|(k, aa)| aa.map(|aa| schedule.cumulative_classes(k) as f64 * aa))
        .collect();
    MetricSeries::new(MetricName::URaa, values)
}

/// uRAF_k = AF_k / AF_k(Rand) for k >= 2; undefined at k = 1.
pub fn unnormalized_rescaled_forgetting(matrix: &AccuracyMatrix) -> Result<MetricSeries> {
    if matrix.num_tasks() < 2 {
        return Err(Error::SingleTask);
    }
    let af = average_forgetting(matrix);
    let rand_af = rand_average_forgetting_series(matrix.schedule());
    let values = af
        .iter()
        .map(|(k, v)| v.map(|v| v / rand_af.get(k).expect("defined for k >= 2")))
        .collect();
    Ok(MetricSeries::new(MetricName::URaf, values))
}

fn check_paths(metric: &'static str, k: usize, definitional: f64, closed_form: f64) -> Result<()> {
    if (definitional - closed_form).abs() > PATH_TOLERANCE {
        return Err(Error::PathMismatch {
            metric,
            k,
            definitional,
            closed_form,
        });
    }
    Ok(())
}

/// RAA_k = uRAA_k / max uRAA, cross-checked against gamma_k * AA_k. The
/// definitional value is returned.
pub fn rescaled_average_accuracy(matrix: &AccuracyMatrix) -> Result<MetricSeries> {
    let schedule = matrix.schedule();
    let max_uraa = Normalizers::for_schedule(schedule).max_uraa;
    let coefficients = difficulty_coefficients(schedule);
    let aa = average_accuracy(matrix);
    let uraa = unnormalized_rescaled_accuracy(matrix);
    let mut values = Vec::with_capacity(matrix.num_tasks());
    for (k, v) in uraa.iter() {
        let definitional = v.expect("uRAA is defined everywhere") / max_uraa;
        let closed_form =
            coefficients.gamma.get(k).expect("gamma is total") * aa.get(k).expect("AA is total");
        check_paths("RAA", k, definitional, closed_form)?;
        values.push(Some(definitional));
    }
    Ok(MetricSeries::new(MetricName::Raa, values))
}

/// RAF_k = uRAF_k / max uRAF for k >= 2, cross-checked against beta_k * AF_k
/// on uniform schedules (where the closed form holds). The definitional value
/// is returned.
pub fn rescaled_average_forgetting(matrix: &AccuracyMatrix) -> Result<MetricSeries> {
    if matrix.num_tasks() < 2 {
        return Err(Error::SingleTask);
    }
    let schedule = matrix.schedule();
    let normalizers = Normalizers::for_schedule(schedule);
    let max_uraf = normalizers.max_uraf.expect("K >= 2 has a normalizer");
    let uraf = unnormalized_rescaled_forgetting(matrix)?;
    let af = average_forgetting(matrix);
    let coefficients = difficulty_coefficients(schedule);
    let mut values = vec![None; matrix.num_tasks()];
    for (k, v) in uraf.defined() {
        let definitional = v / max_uraf;
        if !normalizers.general_path {
            let closed_form = coefficients.beta.get(k).expect("beta defined for k >= 2")
                * af.get(k).expect("AF defined for k >= 2");
            check_paths("RAF", k, definitional, closed_form)?;
        }
        values[k - 1] = Some(definitional);
    }
    Ok(MetricSeries::new(MetricName::Raf, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_baseline::rand_accuracy_matrix;
    use crate::schedule::TaskSchedule;

    fn uniform(tasks: usize, classes: u32) -> TaskSchedule {
        TaskSchedule::uniform(tasks, classes).unwrap()
    }

    fn perfect(schedule: &TaskSchedule) -> AccuracyMatrix {
        AccuracyMatrix::from_fn(schedule.clone(), |_, _| 1.0)
    }

    fn worst(schedule: &TaskSchedule) -> AccuracyMatrix {
        AccuracyMatrix::from_fn(schedule.clone(), |k, j| if k == j { 1.0 } else { 0.0 })
    }

    #[test]
    fn uraa_of_the_random_classifier_is_one() {
        let m = rand_accuracy_matrix(&uniform(5, 2));
        for (_, v) in unnormalized_rescaled_accuracy(&m).defined() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uraa_of_the_perfect_classifier_is_the_class_count() {
        // Brute force over the all-ones matrix: uRAA_k = C_k, peaking at C_K,
        // which is exactly the normalizer.
        let s = uniform(5, 2);
        let uraa = unnormalized_rescaled_accuracy(&perfect(&s));
        let expected = [2.0, 4.0, 6.0, 8.0, 10.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((uraa.get(k + 1).unwrap() - e).abs() < 1e-12);
        }
        let max = uraa.defined().map(|(_, v)| v).fold(f64::MIN, f64::max);
        assert_eq!(max, Normalizers::for_schedule(&s).max_uraa);
    }

    #[test]
    fn uraa_is_the_product_of_class_count_and_aa() {
        let s = uniform(3, 2);
        let m = AccuracyMatrix::from_fn(s, |k, _| if k == 3 { 0.5 } else { 0.2 });
        assert!((unnormalized_rescaled_accuracy(&m).get(3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn uraf_of_the_random_classifier_is_one() {
        let m = rand_accuracy_matrix(&uniform(5, 2));
        let uraf = unnormalized_rescaled_forgetting(&m).unwrap();
        assert_eq!(uraf.get(1), None);
        for (_, v) in uraf.defined() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uraf_of_the_worst_classifier_divides_by_the_rand_baseline() {
        // AF_2(worst) = 1 and AF_2(Rand) = 0.25, so uRAF_2 = 4.
        let m = worst(&uniform(5, 2));
        let uraf = unnormalized_rescaled_forgetting(&m).unwrap();
        assert!((uraf.get(2).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn uraf_of_a_zero_forgetting_learner_is_zero() {
        let uraf = unnormalized_rescaled_forgetting(&perfect(&uniform(5, 2))).unwrap();
        for (_, v) in uraf.defined() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn uraf_rejects_single_task_matrices() {
        let m = perfect(&uniform(1, 2));
        assert!(matches!(
            unnormalized_rescaled_forgetting(&m),
            Err(Error::SingleTask)
        ));
        assert!(matches!(
            rescaled_average_forgetting(&m),
            Err(Error::SingleTask)
        ));
    }

    #[test]
    fn gamma_is_the_cumulative_count_ratio() {
        // Oracle: C_k / C_K computed straight from the schedule.
        let s = uniform(5, 2);
        let c = difficulty_coefficients(&s);
        let expected = [0.2, 0.4, 0.6, 0.8, 1.0];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(c.gamma.get(k + 1).unwrap(), *e);
        }
        assert!(!c.general_path);
    }

    #[test]
    fn beta_matches_the_exact_fraction_oracle() {
        // beta_3 for K=5, n_C=2: (H_5-1)*2 / ((H_3-1)*4) = (77/60 * 2)/(5/6 * 4)
        // = 77/100 exactly.
        let c = difficulty_coefficients(&uniform(5, 2));
        assert_eq!(c.beta.get(1), None);
        assert!((c.beta.get(3).unwrap() - 0.77).abs() < 1e-15);
        // beta_2 = 77/120, beta_4 = 231/260 by the same oracle.
        assert!((c.beta.get(2).unwrap() - 77.0 / 120.0).abs() < 1e-15);
        assert!((c.beta.get(4).unwrap() - 231.0 / 260.0).abs() < 1e-15);
    }

    #[test]
    fn coefficients_reach_exactly_one_at_the_final_task() {
        for (tasks, classes) in [(2usize, 1u32), (5, 2), (20, 10), (100, 2)] {
            let c = difficulty_coefficients(&uniform(tasks, classes));
            assert_eq!(c.gamma.get(tasks).unwrap(), 1.0);
            assert_eq!(c.beta.get(tasks).unwrap(), 1.0);
        }
    }

    #[test]
    fn coefficients_are_nondecreasing_and_in_unit_interval() {
        let c = difficulty_coefficients(&uniform(50, 3));
        let mut prev_gamma = 0.0;
        let mut prev_beta = 0.0;
        for k in 1..=50 {
            let g = c.gamma.get(k).unwrap();
            assert!(g > 0.0 && g <= 1.0 && g >= prev_gamma);
            prev_gamma = g;
            if let Some(b) = c.beta.get(k) {
                assert!(b > 0.0 && b <= 1.0 && b > prev_beta);
                prev_beta = b;
            }
        }
    }

    #[test]
    fn non_uniform_beta_uses_the_numeric_path_and_is_flagged() {
        let s = TaskSchedule::new(3, &[2, 3, 5]).unwrap();
        let c = difficulty_coefficients(&s);
        assert!(c.general_path);
        assert_eq!(c.beta.get(1), None);
        // The numeric beta still satisfies RAF_k = beta_k * AF_k by
        // construction against the numeric normalizer.
        let n = Normalizers::for_schedule(&s);
        assert!(n.general_path);
        let rand_af = rand_average_forgetting_series(&s);
        for (k, af) in rand_af.defined() {
            let beta = c.beta.get(k).unwrap();
            assert!((beta - 1.0 / (af * n.max_uraf.unwrap())).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_max_uraf_matches_the_numeric_oracle() {
        for (tasks, classes) in [(2usize, 3u32), (5, 2), (50, 10), (200, 1)] {
            let s = uniform(tasks, classes);
            let closed = Normalizers::for_schedule(&s).max_uraf.unwrap();
            let numeric = Normalizers::max_uraf_numeric(&s).unwrap();
            assert!(
                (closed - numeric).abs() < 1e-12,
                "K={tasks} n_C={classes}: {closed} vs {numeric}"
            );
        }
    }

    #[test]
    fn normalizers_for_single_task_schedules_have_no_uraf() {
        let n = Normalizers::for_schedule(&uniform(1, 4));
        assert_eq!(n.max_uraa, 4.0);
        assert_eq!(n.max_uraf, None);
    }

    #[test]
    fn raa_of_the_random_classifier_is_constant() {
        let s = uniform(5, 2);
        let raa = rescaled_average_accuracy(&rand_accuracy_matrix(&s)).unwrap();
        for (_, v) in raa.defined() {
            assert!((v - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn raa_equals_aa_at_the_final_task() {
        let s = uniform(7, 3);
        let m = rand_accuracy_matrix(&s);
        let aa = average_accuracy(&m);
        let raa = rescaled_average_accuracy(&m).unwrap();
        assert!((raa.get(7).unwrap() - aa.get(7).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn raa_of_the_perfect_classifier_is_gamma() {
        let s = uniform(5, 2);
        let raa = rescaled_average_accuracy(&perfect(&s)).unwrap();
        let c = difficulty_coefficients(&s);
        for (k, v) in raa.defined() {
            assert!((v - c.gamma.get(k).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn raf_of_the_random_classifier_is_constant() {
        // The constant is K (H_K - 1) / (C_K (K - 1)) = 77/480 for the table
        // setup, i.e. the same 16.04% that ends the AF column.
        let s = uniform(5, 2);
        let raf = rescaled_average_forgetting(&rand_accuracy_matrix(&s)).unwrap();
        assert_eq!(raf.get(1), None);
        for (_, v) in raf.defined() {
            assert!((v - 77.0 / 480.0).abs() < 1e-12);
        }
    }

    #[test]
    fn raf_equals_af_at_the_final_task() {
        let s = uniform(6, 2);
        let m = worst(&s);
        let af = average_forgetting(&m);
        let raf = rescaled_average_forgetting(&m).unwrap();
        assert!((raf.get(6).unwrap() - af.get(6).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn raf_of_a_zero_forgetting_learner_is_zero() {
        let raf = rescaled_average_forgetting(&perfect(&uniform(5, 2))).unwrap();
        for (_, v) in raf.defined() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn worst_classifier_attains_the_uraf_normalizer_at_the_final_task() {
        let s = uniform(5, 2);
        let uraf = unnormalized_rescaled_forgetting(&worst(&s)).unwrap();
        let max_uraf = Normalizers::for_schedule(&s).max_uraf.unwrap();
        assert!((uraf.get(5).unwrap() - max_uraf).abs() < 1e-12);
        // And RAF_K = 1 follows.
        let raf = rescaled_average_forgetting(&worst(&s)).unwrap();
        assert!((raf.get(5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raf_works_on_non_uniform_schedules_without_a_closed_form() {
        let s = TaskSchedule::new(4, &[2, 3, 5, 1]).unwrap();
        let m = worst(&s);
        let raf = rescaled_average_forgetting(&m).unwrap();
        // The worst classifier reaches the numeric normalizer at its argmax.
        let max = raf.defined().map(|(_, v)| v).fold(f64::MIN, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
    }

    mod properties {
        use super::*;
        use proptest::collection::vec;
        use proptest::prelude::*;

        prop_compose! {
            fn arb_uniform_matrix(max_tasks: usize)
                (num_tasks in 2..=max_tasks, classes in 1u32..=20)
                (entries in vec(0.0f64..=1.0, num_tasks * (num_tasks + 1) / 2),
                 schedule in Just(TaskSchedule::uniform(num_tasks, classes).unwrap()))
                -> AccuracyMatrix
            {
                let mut it = entries.into_iter();
                AccuracyMatrix::from_fn(schedule, |_, _| it.next().unwrap())
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn raa_definitional_equals_gamma_times_aa(m in arb_uniform_matrix(40)) {
                // rescaled_average_accuracy errors on disagreement, so success
                // is the property; verify the values against the closed form
                // independently anyway.
                let raa = rescaled_average_accuracy(&m).unwrap();
                let aa = average_accuracy(&m);
                let c = difficulty_coefficients(m.schedule());
                for (k, v) in raa.defined() {
                    let closed = c.gamma.get(k).unwrap() * aa.get(k).unwrap();
                    prop_assert!((v - closed).abs() <= PATH_TOLERANCE);
                }
            }

            #[test]
            fn raf_definitional_equals_beta_times_af(m in arb_uniform_matrix(40)) {
                let raf = rescaled_average_forgetting(&m).unwrap();
                let af = average_forgetting(&m);
                let c = difficulty_coefficients(m.schedule());
                for (k, v) in raf.defined() {
                    let closed = c.beta.get(k).unwrap() * af.get(k).unwrap();
                    prop_assert!((v - closed).abs() <= PATH_TOLERANCE);
                }
            }

            #[test]
            fn endpoints_coincide(m in arb_uniform_matrix(30)) {
                let k = m.num_tasks();
                let raa = rescaled_average_accuracy(&m).unwrap();
                let aa = average_accuracy(&m);
                prop_assert!((raa.get(k).unwrap() - aa.get(k).unwrap()).abs() <= PATH_TOLERANCE);
                let raf = rescaled_average_forgetting(&m).unwrap();
                let af = average_forgetting(&m);
                prop_assert!((raf.get(k).unwrap() - af.get(k).unwrap()).abs() <= PATH_TOLERANCE);
            }

            #[test]
            fn raf_preserves_the_sign_of_af(m in arb_uniform_matrix(30)) {
                let raf = rescaled_average_forgetting(&m).unwrap();
                let af = average_forgetting(&m);
                for (k, v) in raf.defined() {
                    let a = af.get(k).unwrap();
                    prop_assert!(
                        (v == 0.0 && a == 0.0) || v.signum() == a.signum(),
                        "RAF_{k} = {v} vs AF_{k} = {a}"
                    );
                }
            }
        }
    }
}
