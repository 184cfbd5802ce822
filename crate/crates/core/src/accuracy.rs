//! Accuracy estimators (resubstitution, V-fold CV, leave-one-out bootstrap)
//! and the resampling plans they consume.
//!
//! Degenerate-resample policy, applied identically on observed and permuted
//! labels so the statistic stays total and permutation-symmetric:
//!
//! * a fold whose training complement holds a single class trains a constant
//!   model predicting that class everywhere;
//! * a single-class bootstrap sample is redrawn (at most 100 times, then the
//!   constant fallback above applies at fit time);
//! * a bootstrap sample with an empty holdout is skipped, not redrawn.

use rand::Rng;

use crate::classifier::{constant_model, fit_on, ClassifierSpec, LinearModel, TrainShape};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

/// How an accuracy statistic resamples the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorSpec {
    /// Train and evaluate on the full sample.
    Resub,
    /// V-fold cross validation, optionally class-stratified.
    VFold { folds: usize, balanced: bool },
    /// Leave-one-out bootstrap with `samples` resamples.
    Bloo { samples: usize },
}

impl EstimatorSpec {
    pub fn name(&self) -> String {
        match self {
            EstimatorSpec::Resub => "resub".into(),
            EstimatorSpec::VFold { folds, balanced } => {
                format!("{}fold{}", folds, if *balanced { "" } else { ".unbal" })
            }
            EstimatorSpec::Bloo { samples } => format!("bloo{samples}"),
        }
    }
}

/// Which estimator produced an accuracy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Resub,
    VFold,
    Bloo,
}

/// An estimated accuracy in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyEstimate {
    pub value: f64,
    pub estimator: EstimatorKind,
    /// Number of prediction events averaged.
    pub support: usize,
}

/// Assignment of each observation to one of `1..=folds` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    /// Fold id per observation, values in `1..=folds`.
    pub fold_of: Vec<u32>,
    pub folds: usize,
    pub balanced: bool,
}

/// Bootstrap index multisets and their holdout complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapPlan {
    /// Each inner vector holds exactly `n` indices drawn with replacement.
    pub samples: Vec<Vec<u32>>,
    /// `holdout_of[b]` is the sorted set of indices absent from `samples[b]`.
    pub holdout_of: Vec<Vec<u32>>,
}

/// The resampling indices an accuracy statistic is evaluated with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResamplingPlan {
    None,
    Folds(FoldAssignment),
    Bootstrap(BootstrapPlan),
}

/// Draw folds against the dataset's own labels.
pub fn make_folds<R: Rng>(
    ds: &LabeledDataset,
    folds: usize,
    balanced: bool,
    rng: &mut R,
) -> Result<FoldAssignment> {
    make_folds_with(ds.n(), ds.labels(), folds, balanced, rng)
}

/// Draw folds for `n` observations labeled by `labels`.
///
/// Fold sizes differ by at most one; under `balanced`, per-class counts per
/// fold also differ by at most one. Assignment is uniform over the legal
/// ones: the shuffled fold order decides which folds carry remainders, and
/// shuffled index lists are dealt into the per-fold quotas.
pub fn make_folds_with<R: Rng>(
    n: usize,
    labels: &[u8],
    folds: usize,
    balanced: bool,
    rng: &mut R,
) -> Result<FoldAssignment> {
    if folds < 2 {
        return Err(Error::TooFewFolds { folds });
    }
    if folds > n {
        return Err(Error::TooManyFolds { folds, n });
    }
    let mut fold_of = vec![0u32; n];
    if balanced {
        // Per-class quotas. Remainder folds for class 1 prefer folds that
        // did not get a class-0 remainder, keeping total sizes within one.
        let class0: Vec<usize> = (0..n).filter(|&i| labels[i] == 0).collect();
        let class1: Vec<usize> = (0..n).filter(|&i| labels[i] != 0).collect();
        let (rem0, rem1) = (class0.len() % folds, class1.len() % folds);
        let mut quota0 = vec![class0.len() / folds; folds];
        let mut quota1 = vec![class1.len() / folds; folds];
        let mut order: Vec<usize> = (0..folds).collect();
        shuffle(&mut order, rng);
        for &f in order.iter().take(rem0) {
            quota0[f] += 1;
        }
        let mut without_extra: Vec<usize> = order[rem0..].to_vec();
        let mut with_extra: Vec<usize> = order[..rem0].to_vec();
        shuffle(&mut without_extra, rng);
        shuffle(&mut with_extra, rng);
        for &f in without_extra.iter().chain(&with_extra).take(rem1) {
            quota1[f] += 1;
        }
        deal(&class0, &mut quota0, &mut fold_of, rng);
        deal(&class1, &mut quota1, &mut fold_of, rng);
    } else {
        let mut quota = vec![n / folds; folds];
        let mut order: Vec<usize> = (0..folds).collect();
        shuffle(&mut order, rng);
        for &f in order.iter().take(n % folds) {
            quota[f] += 1;
        }
        let all: Vec<usize> = (0..n).collect();
        deal(&all, &mut quota, &mut fold_of, rng);
    }
    Ok(FoldAssignment {
        fold_of,
        folds,
        balanced,
    })
}

use crate::rng::shuffle;

/// Shuffle `indices` and deal them round-robin into folds with remaining
/// quota.
fn deal<R: Rng>(indices: &[usize], quota: &mut [usize], fold_of: &mut [u32], rng: &mut R) {
    let folds = quota.len();
    let mut pool = indices.to_vec();
    shuffle(&mut pool, rng);
    let mut fold = 0usize;
    for &i in &pool {
        while quota[fold] == 0 {
            fold = (fold + 1) % folds;
        }
        quota[fold] -= 1;
        fold_of[i] = fold as u32 + 1;
        fold = (fold + 1) % folds;
    }
}

/// Draw a bootstrap plan of `samples` multisets of size `n`.
pub fn draw_bootstrap<R: Rng>(
    n: usize,
    labels: &[u8],
    samples: usize,
    rng: &mut R,
) -> Result<BootstrapPlan> {
    if samples == 0 {
        return Err(Error::NoBootstrapSamples);
    }
    let mut plan = BootstrapPlan {
        samples: Vec::with_capacity(samples),
        holdout_of: Vec::with_capacity(samples),
    };
    for _ in 0..samples {
        let mut draw = draw_multiset(n, rng);
        // Redraw single-class samples; after 100 tries keep the last one and
        // let the constant-model fallback handle it.
        for _ in 0..100 {
            if !single_class(&draw, labels) {
                break;
            }
            draw = draw_multiset(n, rng);
        }
        let mut included = vec![false; n];
        for &i in &draw {
            included[i as usize] = true;
        }
        let holdout: Vec<u32> = (0..n as u32).filter(|&i| !included[i as usize]).collect();
        plan.samples.push(draw);
        plan.holdout_of.push(holdout);
    }
    Ok(plan)
}

fn draw_multiset<R: Rng>(n: usize, rng: &mut R) -> Vec<u32> {
    (0..n).map(|_| rng.random_range(0..n as u32)).collect()
}

fn single_class(draw: &[u32], labels: &[u8]) -> bool {
    let first = labels[draw[0] as usize];
    draw.iter().all(|&i| labels[i as usize] == first)
}

/// Draw the resampling plan an estimator needs, if any.
pub fn draw_plan<R: Rng>(
    n: usize,
    labels: &[u8],
    estimator: &EstimatorSpec,
    rng: &mut R,
) -> Result<ResamplingPlan> {
    match *estimator {
        EstimatorSpec::Resub => Ok(ResamplingPlan::None),
        EstimatorSpec::VFold { folds, balanced } => Ok(ResamplingPlan::Folds(make_folds_with(
            n, labels, folds, balanced, rng,
        )?)),
        EstimatorSpec::Bloo { samples } => Ok(ResamplingPlan::Bootstrap(draw_bootstrap(
            n, labels, samples, rng,
        )?)),
    }
}

fn fit_or_constant(
    ds: &LabeledDataset,
    idx: &[usize],
    labels: &[u8],
    spec: &ClassifierSpec,
) -> Result<LinearModel> {
    match fit_on(ds, idx, labels, spec) {
        Err(Error::SingleClassTrainingSet) => {
            let class = labels[idx[0]];
            let n1 = idx.iter().filter(|&&i| labels[i] != 0).count();
            let shape = TrainShape {
                n: idx.len(),
                p: ds.p(),
                n0: idx.len() - n1,
                n1,
            };
            Ok(constant_model(class, ds.p(), shape))
        }
        other => other,
    }
}

/// Resubstitution accuracy on the dataset's own labels.
pub fn resub_accuracy(ds: &LabeledDataset, spec: &ClassifierSpec) -> Result<AccuracyEstimate> {
    resub_accuracy_with(ds, ds.labels(), spec)
}

pub fn resub_accuracy_with(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &ClassifierSpec,
) -> Result<AccuracyEstimate> {
    let idx: Vec<usize> = (0..ds.n()).collect();
    let model = fit_on(ds, &idx, labels, spec)?;
    let hits = (0..ds.n())
        .filter(|&i| model.predict_unchecked(ds.row(i)) == labels[i])
        .count();
    Ok(AccuracyEstimate {
        value: hits as f64 / ds.n() as f64,
        estimator: EstimatorKind::Resub,
        support: ds.n(),
    })
}

/// V-fold CV accuracy: the mean of per-fold accuracies (not the pooled
/// count), which matters when fold sizes differ.
pub fn vfold_accuracy(
    ds: &LabeledDataset,
    spec: &ClassifierSpec,
    folds: &FoldAssignment,
) -> Result<AccuracyEstimate> {
    vfold_accuracy_with(ds, ds.labels(), spec, folds)
}

pub fn vfold_accuracy_with(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &ClassifierSpec,
    folds: &FoldAssignment,
) -> Result<AccuracyEstimate> {
    let n = ds.n();
    let mut fold_means = Vec::with_capacity(folds.folds);
    for v in 1..=folds.folds as u32 {
        let test: Vec<usize> = (0..n).filter(|&i| folds.fold_of[i] == v).collect();
        let train: Vec<usize> = (0..n).filter(|&i| folds.fold_of[i] != v).collect();
        let model = fit_or_constant(ds, &train, labels, spec)?;
        let hits = test
            .iter()
            .filter(|&&i| model.predict_unchecked(ds.row(i)) == labels[i])
            .count();
        fold_means.push(hits as f64 / test.len() as f64);
    }
    Ok(AccuracyEstimate {
        value: fold_means.iter().sum::<f64>() / fold_means.len() as f64,
        estimator: EstimatorKind::VFold,
        support: n,
    })
}

/// Leave-one-out bootstrap accuracy: for each resample with a non-empty
/// holdout, score the holdout under the model fit on the resample, then
/// average those holdout accuracies.
pub fn bloo_accuracy<R: Rng>(
    ds: &LabeledDataset,
    spec: &ClassifierSpec,
    samples: usize,
    rng: &mut R,
) -> Result<AccuracyEstimate> {
    let plan = draw_bootstrap(ds.n(), ds.labels(), samples, rng)?;
    bloo_accuracy_with(ds, ds.labels(), spec, &plan)
}

pub fn bloo_accuracy_with(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &ClassifierSpec,
    plan: &BootstrapPlan,
) -> Result<AccuracyEstimate> {
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut support = 0usize;
    for (sample, holdout) in plan.samples.iter().zip(&plan.holdout_of) {
        if holdout.is_empty() {
            continue;
        }
        let idx: Vec<usize> = sample.iter().map(|&i| i as usize).collect();
        let model = fit_or_constant(ds, &idx, labels, spec)?;
        let hits = holdout
            .iter()
            .filter(|&&i| model.predict_unchecked(ds.row(i as usize)) == labels[i as usize])
            .count();
        sum += hits as f64 / holdout.len() as f64;
        used += 1;
        support += holdout.len();
    }
    if used == 0 {
        return Err(Error::AllHoldoutsEmpty);
    }
    Ok(AccuracyEstimate {
        value: sum / used as f64,
        estimator: EstimatorKind::Bloo,
        support,
    })
}

/// Evaluate an accuracy statistic against a pre-drawn plan.
pub fn accuracy_with_plan(
    ds: &LabeledDataset,
    labels: &[u8],
    classifier: &ClassifierSpec,
    plan: &ResamplingPlan,
) -> Result<AccuracyEstimate> {
    match plan {
        ResamplingPlan::None => resub_accuracy_with(ds, labels, classifier),
        ResamplingPlan::Folds(folds) => vfold_accuracy_with(ds, labels, classifier, folds),
        ResamplingPlan::Bootstrap(boot) => bloo_accuracy_with(ds, labels, classifier, boot),
    }
}
