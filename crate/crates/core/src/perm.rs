//! The permutation-test engine: label shuffles, tail counts, p-values, and
//! randomized tie-breaking.
//!
//! Stream layout under the stream handed to [`permutation_battery`]:
//!
//! * `[0]` — the shared sequence of label shuffles (one stream, `r` shuffles
//!   drawn in order), identical for every statistic so comparisons are
//!   paired;
//! * `[1, s, k]` — the resampling plan for statistic `s` at evaluation `k`
//!   (`k = 0` is the observed statistic, `k = 1..=r` the permutations; fixed
//!   plans only consume `k = 0`).

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::accuracy::{draw_plan, ResamplingPlan};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::{shuffle, RngStream};
use crate::statistic::{evaluate_statistic, StatisticSpec};

/// How tail probabilities are turned into p-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PvalueMode {
    /// The plain proportion `(greater + equal) / r`, which can be exactly 0.
    #[serde(rename = "paper")]
    PaperExact,
    /// `(greater + equal + 1) / (r + 1)`: never 0, finite-sample valid, and
    /// the default outside of reproduction runs.
    #[default]
    #[serde(rename = "add-one")]
    AddOne,
}

/// Whether fold/bootstrap plans are redrawn after each label permutation.
///
/// Refolding only affects statistics that consume a resampling plan;
/// location and resubstitution statistics evaluate identically either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefoldPolicy {
    #[default]
    RefoldPerPermutation,
    FixedFolds,
}

/// Tail counts of a permutation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationReport {
    pub observed: f64,
    /// Number of permutations `r`.
    pub permutations: u32,
    /// Permuted values strictly above the observed one (after canonical
    /// rounding).
    pub greater: u32,
    /// Permuted values equal to the observed one (after canonical rounding).
    pub equal: u32,
}

impl PermutationReport {
    /// `P{T_pi >= T}` as a plain proportion.
    pub fn p_value_paper(&self) -> f64 {
        f64::from(self.greater + self.equal) / f64::from(self.permutations)
    }

    /// Add-one p-value `(greater + equal + 1) / (r + 1)`.
    pub fn p_value_add_one(&self) -> f64 {
        f64::from(self.greater + self.equal + 1) / f64::from(self.permutations + 1)
    }

    pub fn p_value(&self, mode: PvalueMode) -> f64 {
        match mode {
            PvalueMode::PaperExact => self.p_value_paper(),
            PvalueMode::AddOne => self.p_value_add_one(),
        }
    }
}

/// Outcome of a test decision at level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestDecision {
    pub p_value: f64,
    pub rejected: bool,
    /// True when the decision consulted the tie-breaking variate.
    pub tie_randomization_used: bool,
    pub alpha: f64,
}

/// Canonical rounding to 12 significant digits, applied before any equality
/// comparison of statistics. Accuracy statistics are exact rationals `k/n`,
/// so rounding cannot merge genuinely distinct values at the sample sizes in
/// play; it only heals last-bit float noise.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0; // normalizes -0.0
    }
    let exp = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - exp);
    (x * scale).round() / scale
}

/// Count `(greater, equal)` of permuted values against the observed one,
/// both sides canonically rounded.
pub fn permutation_counts<I: IntoIterator<Item = f64>>(observed: f64, permuted: I) -> (u32, u32) {
    let obs = round_sig12(observed);
    let mut greater = 0;
    let mut equal = 0;
    for v in permuted {
        let v = round_sig12(v);
        if v > obs {
            greater += 1;
        } else if v == obs {
            equal += 1;
        }
    }
    (greater, equal)
}

/// One statistic's permutation run plus the wall time it took.
#[derive(Debug, Clone)]
pub struct StatOutcome {
    pub report: PermutationReport,
    pub eval_time: Duration,
}

/// Run the full battery against one shared sequence of label permutations.
///
/// Every statistic sees the same `r` shuffles, so power comparisons between
/// statistics are paired. A statistic failing on any permutation aborts the
/// run; nothing is skipped silently.
pub fn permutation_battery(
    ds: &LabeledDataset,
    stats: &[StatisticSpec],
    r: u32,
    policy: RefoldPolicy,
    stream: &RngStream,
) -> Result<Vec<StatOutcome>> {
    if r == 0 {
        return Err(Error::NoPermutations);
    }
    let mut shuffler = stream.derive(&[0]).rng();
    let permuted_labels: Vec<Vec<u8>> = (0..r)
        .map(|_| {
            let mut labels = ds.labels().to_vec();
            shuffle(&mut labels, &mut shuffler);
            labels
        })
        .collect();

    stats
        .iter()
        .enumerate()
        .map(|(s, spec)| {
            let start = Instant::now();
            let plan_stream = stream.derive(&[1, s as u64]);
            let observed_plan = draw_plan_for(ds, ds.labels(), spec, &plan_stream, 0)?;
            let observed = evaluate_statistic(ds, ds.labels(), spec, &observed_plan)?;

            let obs_rounded = round_sig12(observed);
            let mut greater = 0u32;
            let mut equal = 0u32;
            let refold = policy == RefoldPolicy::RefoldPerPermutation && spec.needs_plan();
            for (k, labels) in permuted_labels.iter().enumerate() {
                let fresh;
                let plan = if refold {
                    fresh = draw_plan_for(ds, labels, spec, &plan_stream, k as u64 + 1)?;
                    &fresh
                } else {
                    &observed_plan
                };
                let value = round_sig12(evaluate_statistic(ds, labels, spec, plan)?);
                if value > obs_rounded {
                    greater += 1;
                } else if value == obs_rounded {
                    equal += 1;
                }
            }
            Ok(StatOutcome {
                report: PermutationReport {
                    observed,
                    permutations: r,
                    greater,
                    equal,
                },
                eval_time: start.elapsed(),
            })
        })
        .collect()
}

fn draw_plan_for(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &StatisticSpec,
    plan_stream: &RngStream,
    k: u64,
) -> Result<ResamplingPlan> {
    if !spec.needs_plan() {
        return Ok(ResamplingPlan::None);
    }
    let estimator = match spec {
        StatisticSpec::Accuracy(acc) => &acc.estimator,
        StatisticSpec::Location(_) => unreachable!("location statistics need no plan"),
    };
    let mut rng = plan_stream.derive(&[k]).rng();
    draw_plan(ds.n(), labels, estimator, &mut rng)
}

/// Permutation test for a single statistic.
pub fn permutation_test(
    ds: &LabeledDataset,
    spec: &StatisticSpec,
    r: u32,
    policy: RefoldPolicy,
    stream: &RngStream,
) -> Result<PermutationReport> {
    let outcomes = permutation_battery(ds, std::slice::from_ref(spec), r, policy, stream)?;
    Ok(outcomes.into_iter().next().expect("one statistic").report)
}

/// Accept/reject at level `alpha`, optionally exhausting the level by
/// randomizing on ties: when the p-value exceeds `alpha` and ties exist,
/// reject with probability `max{(alpha - greater/r) / (equal/r), 0}` using
/// the uniform variate `u`.
pub fn decide(
    report: &PermutationReport,
    alpha: f64,
    mode: PvalueMode,
    tie_break: bool,
    u: f64,
) -> TestDecision {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    debug_assert!((0.0..1.0).contains(&u));
    let p_value = report.p_value(mode);
    if p_value <= alpha {
        return TestDecision {
            p_value,
            rejected: true,
            tie_randomization_used: false,
            alpha,
        };
    }
    if tie_break && report.equal > 0 {
        let r = f64::from(report.permutations);
        let greater = f64::from(report.greater) / r;
        let equal = f64::from(report.equal) / r;
        let threshold = ((alpha - greater) / equal).max(0.0);
        return TestDecision {
            p_value,
            rejected: u < threshold,
            tie_randomization_used: true,
            alpha,
        };
    }
    TestDecision {
        p_value,
        rejected: false,
        tie_randomization_used: false,
        alpha,
    }
}
