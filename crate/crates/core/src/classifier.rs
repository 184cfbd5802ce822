//! Linear classifiers used as accuracy-test engines.
//!
//! All families produce a [`LinearModel`]; training is deterministic given
//! the training rows, so fits on different permutations can run concurrently.

use nalgebra::{DMatrix, DVector};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::solve_spd;
use crate::svm;

/// A classifier family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    /// Pooled-covariance linear discriminant.
    Lda,
    /// Diagonal (naive Bayes style) linear discriminant.
    Dlda,
    /// Diagonal discriminant with variances shrunk toward their mean.
    Sdlda,
    /// Pooled covariance blended with a scaled identity before inversion.
    Hdrda { mix: f64 },
    /// L1-hinge linear SVM with a cost parameter.
    LinearSvm { cost: f64 },
}

impl ClassifierSpec {
    pub fn hdrda(mix: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mix) {
            return Err(Error::BadHdrdaMix { mix });
        }
        Ok(ClassifierSpec::Hdrda { mix })
    }

    pub fn linear_svm(cost: f64) -> Result<Self> {
        if !(cost > 0.0) {
            return Err(Error::NonPositiveCost { cost });
        }
        Ok(ClassifierSpec::LinearSvm { cost })
    }

    pub fn name(&self) -> String {
        match self {
            ClassifierSpec::Lda => "lda".into(),
            ClassifierSpec::Dlda => "dlda".into(),
            ClassifierSpec::Sdlda => "sdlda".into(),
            ClassifierSpec::Hdrda { mix } => format!("hdrda(mix={mix})"),
            ClassifierSpec::LinearSvm { cost } => format!("svm(cost={cost})"),
        }
    }
}

/// Shape of the data a model was trained on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainShape {
    pub n: usize,
    pub p: usize,
    pub n0: usize,
    pub n1: usize,
}

/// A trained linear decision rule: predict 1 iff `weights . x + bias >= 0`
/// (an exact zero resolves to class 1).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub trained_on: TrainShape,
    /// False only for an SVM stopped at the epoch cap; the iterate is still
    /// a usable statistic.
    pub converged: bool,
}

impl LinearModel {
    /// Signed decision value; no dimension check.
    #[inline]
    pub(crate) fn decision(&self, x: &[f64]) -> f64 {
        self.bias
            + self
                .weights
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>()
    }

    #[inline]
    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> u8 {
        u8::from(self.decision(x) >= 0.0)
    }

    pub fn predict(&self, x: &[f64]) -> Result<u8> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }
}

/// The model a degenerate (single-class) training set falls back to:
/// predicts `class` everywhere.
pub(crate) fn constant_model(class: u8, p: usize, shape: TrainShape) -> LinearModel {
    LinearModel {
        weights: vec![0.0; p],
        bias: if class == 1 { 1.0 } else { -1.0 },
        trained_on: shape,
        converged: true,
    }
}

/// Fit on the full dataset with its own labels.
///
/// The stream argument is part of the training contract (identical inputs
/// give bit-identical models); none of the current families consume
/// randomness.
pub fn fit(ds: &LabeledDataset, spec: &ClassifierSpec, _rng: &RngStream) -> Result<LinearModel> {
    let idx: Vec<usize> = (0..ds.n()).collect();
    fit_on(ds, &idx, ds.labels(), spec)
}

/// Fit on the rows `idx` (repeats allowed) labeled by `labels[idx[k]]`.
pub(crate) fn fit_on(
    ds: &LabeledDataset,
    idx: &[usize],
    labels: &[u8],
    spec: &ClassifierSpec,
) -> Result<LinearModel> {
    let p = ds.p();
    let m = idx.len();
    let n1 = idx.iter().filter(|&&i| labels[i] != 0).count();
    let n0 = m - n1;
    if n0 == 0 || n1 == 0 {
        return Err(Error::SingleClassTrainingSet);
    }
    let shape = TrainShape { n: m, p, n0, n1 };

    match *spec {
        ClassifierSpec::LinearSvm { cost } => {
            let mut feats = Vec::with_capacity(m * p);
            let mut y = Vec::with_capacity(m);
            for &i in idx {
                feats.extend_from_slice(ds.row(i));
                y.push(if labels[i] == 0 { -1.0 } else { 1.0 });
            }
            let fitted = svm::train(&feats, &y, p, cost);
            let (weights, bias_slice) = {
                let mut w = fitted.weights;
                let b = w.pop().unwrap();
                (w, b)
            };
            Ok(LinearModel {
                weights,
                bias: bias_slice,
                trained_on: shape,
                converged: fitted.converged,
            })
        }
        _ => fit_discriminant(ds, idx, labels, spec, shape),
    }
}

/// Shared scaffolding for the discriminant families: class means, pooled
/// residual scatter, and the family-specific weighting.
fn fit_discriminant(
    ds: &LabeledDataset,
    idx: &[usize],
    labels: &[u8],
    spec: &ClassifierSpec,
    shape: TrainShape,
) -> Result<LinearModel> {
    let p = ds.p();
    let m = idx.len();
    let (n0, n1) = (shape.n0, shape.n1);

    let mut mean0 = DVector::zeros(p);
    let mut mean1 = DVector::zeros(p);
    for &i in idx {
        let row = ds.row(i);
        let target = if labels[i] == 0 { &mut mean0 } else { &mut mean1 };
        for j in 0..p {
            target[j] += row[j];
        }
    }
    mean0 /= n0 as f64;
    mean1 /= n1 as f64;
    let d = &mean1 - &mean0;

    // Pooled residuals in training order; divisor m - 2 (zero scatter when
    // both classes are singletons).
    let mut resid = DMatrix::zeros(m, p);
    for (k, &i) in idx.iter().enumerate() {
        let row = ds.row(i);
        let mean = if labels[i] == 0 { &mean0 } else { &mean1 };
        for j in 0..p {
            resid[(k, j)] = row[j] - mean[j];
        }
    }
    let df = if m > 2 { m as f64 - 2.0 } else { 1.0 };

    let weights = match *spec {
        ClassifierSpec::Lda => lda_weights(&resid, &d, df, p, m),
        ClassifierSpec::Hdrda { mix } => {
            let pooled = (resid.transpose() * &resid) / df;
            let trace_mean = pooled.trace() / p as f64;
            let mut blended = pooled * (1.0 - mix);
            for j in 0..p {
                blended[(j, j)] += mix * trace_mean;
            }
            regularized_solve(&blended, &d)
        }
        ClassifierSpec::Dlda => diagonal_weights(&resid, &d, df, p, None),
        ClassifierSpec::Sdlda => {
            let lambda = variance_shrinkage_intensity(&resid, df, p, m);
            diagonal_weights(&resid, &d, df, p, Some(lambda))
        }
        ClassifierSpec::LinearSvm { .. } => unreachable!("handled by fit_on"),
    };

    let mid = (&mean0 + &mean1) / 2.0;
    let bias = -weights.dot(&mid) + (n1 as f64 / n0 as f64).ln();
    let model = LinearModel {
        weights: weights.iter().copied().collect(),
        bias,
        trained_on: shape,
        converged: true,
    };
    debug_assert!(model.weights.iter().all(|w| w.is_finite()) && model.bias.is_finite());
    Ok(model)
}

/// `w = S^+ d`, with one refinement: a component of `d` outside the span of
/// the pooled scatter has zero within-class variance, separates the training
/// classes exactly, and dominates any regularized limit of the rule — when
/// present (relative norm above 1e-8) it is used as the weight vector.
fn lda_weights(resid: &DMatrix<f64>, d: &DVector<f64>, df: f64, p: usize, m: usize) -> DVector<f64> {
    if p <= m {
        let pooled = (resid.transpose() * resid) / df;
        let base = solve_spd(&pooled, d).expect("pooled covariance is symmetric");
        let leftover = d - &pooled * &base.solution;
        if leftover.norm() > 1e-8 * d.norm() {
            leftover
        } else {
            base.solution
        }
    } else {
        // p > m: work through the m x m Gram matrix of the residual rows;
        // S = R'R/df shares its nonzero spectrum with G = RR'.
        let gram = resid * resid.transpose();
        let eig = gram.symmetric_eigen();
        let max_mag = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let cut = crate::stats::SPD_RTOL * max_mag;
        let rd = resid * d;
        let mut coeff = DVector::zeros(m);
        for k in 0..m {
            let lk = eig.eigenvalues[k];
            if lk.abs() <= cut {
                continue;
            }
            let uk = eig.eigenvectors.column(k);
            coeff.axpy(df * uk.dot(&rd) / (lk * lk), &uk.clone_owned(), 1.0);
        }
        let base = resid.transpose() * coeff;
        let leftover = d - resid.transpose() * (resid * &base) / df;
        if leftover.norm() > 1e-8 * d.norm() {
            leftover
        } else {
            base
        }
    }
}

fn regularized_solve(matrix: &DMatrix<f64>, d: &DVector<f64>) -> DVector<f64> {
    let base = solve_spd(matrix, d).expect("blended covariance is symmetric");
    let leftover = d - matrix * &base.solution;
    if leftover.norm() > 1e-8 * d.norm() {
        leftover
    } else {
        base.solution
    }
}

/// Per-coordinate weights `d_j / v_j`, optionally with variances shrunk
/// toward their mean; zero-variance coordinates get weight zero.
fn diagonal_weights(
    resid: &DMatrix<f64>,
    d: &DVector<f64>,
    df: f64,
    p: usize,
    shrink: Option<f64>,
) -> DVector<f64> {
    let m = resid.nrows();
    let mut var = DVector::zeros(p);
    for j in 0..p {
        let mut ss = 0.0;
        for k in 0..m {
            ss += resid[(k, j)] * resid[(k, j)];
        }
        var[j] = ss / df;
    }
    if let Some(lambda) = shrink {
        let vbar = var.sum() / p as f64;
        for j in 0..p {
            var[j] = (1.0 - lambda) * var[j] + lambda * vbar;
        }
    }
    let max_var = var.iter().fold(0.0f64, |a, &v| a.max(v));
    let cut = 1e-12 * max_var;
    DVector::from_fn(p, |j, _| if var[j] > cut { d[j] / var[j] } else { 0.0 })
}

/// Analytic shrinkage intensity for the coordinate variances: the variance
/// of each sample variance over the squared distance of the variances from
/// their mean, clamped to `[0, 1]`. Estimated on the pooled residuals with
/// the same `m/((m-1) df^2)` scaling used for covariance shrinkage.
fn variance_shrinkage_intensity(resid: &DMatrix<f64>, df: f64, p: usize, m: usize) -> f64 {
    if m <= 2 {
        return 1.0;
    }
    let mf = m as f64;
    let mut var = vec![0.0f64; p];
    let mut var_of_var = vec![0.0f64; p];
    for j in 0..p {
        let mut wbar = 0.0;
        for k in 0..m {
            wbar += resid[(k, j)] * resid[(k, j)];
        }
        var[j] = wbar / df;
        wbar /= mf;
        let mut ss = 0.0;
        for k in 0..m {
            let w = resid[(k, j)] * resid[(k, j)] - wbar;
            ss += w * w;
        }
        var_of_var[j] = mf / ((mf - 1.0) * df * df) * ss;
    }
    let vbar = var.iter().sum::<f64>() / p as f64;
    let denom: f64 = var.iter().map(|v| (v - vbar) * (v - vbar)).sum();
    if denom > 0.0 {
        (var_of_var.iter().sum::<f64>() / denom).clamp(0.0, 1.0)
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::validate_dataset;
    use crate::rng::derive_stream;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn stream() -> RngStream {
        derive_stream(0, &[])
    }

    fn random_dataset(n: usize, p: usize, seed: u64) -> LabeledDataset {
        let mut rng = derive_stream(seed, &[31]).rng();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i % 2 == 1)).collect();
        validate_dataset(&rows, &labels).unwrap()
    }

    #[test]
    fn lda_zero_within_class_variance_uses_mean_difference() {
        // Duplicated points: pooled scatter is zero, the boundary must still
        // be the axis between the class means.
        let ds = validate_dataset(
            &[
                vec![-1.0, 0.0],
                vec![-1.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 0.0],
            ],
            &[0, 0, 1, 1],
        )
        .unwrap();
        let model = fit(&ds, &ClassifierSpec::Lda, &stream()).unwrap();
        assert_eq!(model.predict(&[2.0, 0.0]).unwrap(), 1);
        assert_eq!(model.predict(&[-2.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn lda_majority_rule_on_constant_features() {
        let ds = validate_dataset(
            &[vec![3.0], vec![3.0], vec![3.0], vec![3.0], vec![3.0]],
            &[0, 0, 1, 1, 1],
        )
        .unwrap();
        let model = fit(&ds, &ClassifierSpec::Lda, &stream()).unwrap();
        // d = 0, S = 0: the prior term alone decides, here toward class 1.
        for i in 0..ds.n() {
            assert_eq!(model.predict(ds.row(i)).unwrap(), 1);
        }
    }

    #[test]
    fn lda_midpoint_rule_under_spherical_scatter() {
        // With S = s^2 I, the balanced rule reduces to "closer mean wins".
        let rows = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, 2.0],
            vec![10.0, 10.0],
            vec![12.0, 10.0],
            vec![10.0, 12.0],
        ];
        let ds = validate_dataset(&rows, &[0, 0, 0, 1, 1, 1]).unwrap();
        let model = fit(&ds, &ClassifierSpec::Lda, &stream()).unwrap();
        let mean0 = [2.0 / 3.0, 2.0 / 3.0];
        let mean1 = [32.0 / 3.0, 32.0 / 3.0];
        let mut rng = derive_stream(5, &[1]).rng();
        for _ in 0..50 {
            let x: [f64; 2] = [rng.random_range(-5.0..15.0), rng.random_range(-5.0..15.0)];
            let d0: f64 = (x[0] - mean0[0]).powi(2) + (x[1] - mean0[1]).powi(2);
            let d1: f64 = (x[0] - mean1[0]).powi(2) + (x[1] - mean1[1]).powi(2);
            if (d0 - d1).abs() > 1e-9 {
                assert_eq!(
                    model.predict(&x).unwrap(),
                    u8::from(d1 < d0),
                    "x = {x:?}"
                );
            }
        }
    }

    #[test]
    fn lda_gram_route_matches_direct_route() {
        // p > n exercises the Gram path; compare against the explicit
        // pseudo-inverse on the p x p pooled matrix.
        let ds = random_dataset(8, 12, 77);
        let model = fit(&ds, &ClassifierSpec::Lda, &stream()).unwrap();

        let summary = crate::stats::group_summary(&ds);
        let pooled = crate::stats::pooled_covariance(&ds).matrix;
        let base = solve_spd(&pooled, &summary.diff).unwrap().solution;
        let leftover = &summary.diff - &pooled * &base;
        let want = if leftover.norm() > 1e-8 * summary.diff.norm() {
            leftover
        } else {
            base
        };
        for j in 0..ds.p() {
            assert_relative_eq!(model.weights[j], want[j], epsilon = 1e-8, max_relative = 1e-6);
        }
    }

    #[test]
    fn svm_separable_example() {
        let ds = validate_dataset(
            &[
                vec![-1.0, 0.0],
                vec![-1.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 0.0],
            ],
            &[0, 0, 1, 1],
        )
        .unwrap();
        let spec = ClassifierSpec::linear_svm(100.0).unwrap();
        let model = fit(&ds, &spec, &stream()).unwrap();
        assert!(model.converged);
        assert_relative_eq!(model.weights[0], 1.0, epsilon = 1e-5);
        assert_relative_eq!(model.weights[1], 0.0, epsilon = 1e-5);
        assert_relative_eq!(model.bias, 0.0, epsilon = 1e-5);
    }

    #[test]
    fn sdlda_equals_dlda_under_equal_variances() {
        // Coordinates are permutations of the same values per class, so all
        // sample variances agree and shrinking toward their mean is a no-op.
        let rows = vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![2.0, 3.0],
            vec![3.0, 2.0],
        ];
        let ds = validate_dataset(&rows, &[0, 0, 1, 1]).unwrap();
        let a = fit(&ds, &ClassifierSpec::Dlda, &stream()).unwrap();
        let b = fit(&ds, &ClassifierSpec::Sdlda, &stream()).unwrap();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias, b.bias);
    }

    #[test]
    fn hdrda_interpolates_between_lda_and_scaled_identity() {
        let ds = random_dataset(20, 3, 41);
        let lda = fit(&ds, &ClassifierSpec::Lda, &stream()).unwrap();
        let zero = fit(&ds, &ClassifierSpec::hdrda(0.0).unwrap(), &stream()).unwrap();
        for j in 0..3 {
            assert_relative_eq!(zero.weights[j], lda.weights[j], max_relative = 1e-10);
        }
        // At mix = 1 the weighting is (tr S / p) I: weights parallel to d.
        let one = fit(&ds, &ClassifierSpec::hdrda(1.0).unwrap(), &stream()).unwrap();
        let d = crate::stats::group_summary(&ds).diff;
        let ratio = one.weights[0] / d[0];
        for j in 1..3 {
            assert_relative_eq!(one.weights[j], ratio * d[j], max_relative = 1e-8);
        }
    }

    #[test]
    fn single_class_training_set_is_an_error() {
        let ds = random_dataset(6, 2, 42);
        let idx = [0usize, 2, 4]; // labels 0, 0, 0 under the alternating scheme
        let err = fit_on(&ds, &idx, ds.labels(), &ClassifierSpec::Lda).unwrap_err();
        assert!(matches!(err, Error::SingleClassTrainingSet));
    }

    #[test]
    fn fit_is_deterministic() {
        let ds = random_dataset(16, 4, 43);
        for spec in [
            ClassifierSpec::Lda,
            ClassifierSpec::Dlda,
            ClassifierSpec::Sdlda,
            ClassifierSpec::hdrda(0.5).unwrap(),
            ClassifierSpec::linear_svm(10.0).unwrap(),
        ] {
            let a = fit(&ds, &spec, &stream()).unwrap();
            let b = fit(&ds, &spec, &stream()).unwrap();
            assert_eq!(a, b, "{}", spec.name());
        }
    }

    #[test]
    fn predict_tie_and_dimension_rules() {
        let model = LinearModel {
            weights: vec![1.0, 0.0],
            bias: 0.0,
            trained_on: TrainShape { n: 4, p: 2, n0: 2, n1: 2 },
            converged: true,
        };
        assert_eq!(model.predict(&[3.0, 9.0]).unwrap(), 1);
        assert_eq!(model.predict(&[0.0, 5.0]).unwrap(), 1); // tie -> class 1
        assert_eq!(model.predict(&[-1.0, 2.0]).unwrap(), 0);
        assert!(matches!(
            model.predict(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));

        let negative = LinearModel {
            weights: vec![0.0, 0.0],
            bias: -1.0,
            trained_on: TrainShape { n: 4, p: 2, n0: 2, n1: 2 },
            converged: true,
        };
        assert_eq!(negative.predict(&[100.0, -7.0]).unwrap(), 0);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            ClassifierSpec::linear_svm(0.0),
            Err(Error::NonPositiveCost { .. })
        ));
        assert!(matches!(
            ClassifierSpec::hdrda(1.5),
            Err(Error::BadHdrdaMix { .. })
        ));
    }
}
