//! Group moments, covariance estimators, and the symmetric solves they need.
//!
//! Everything here is a pure function of its inputs and safe to call
//! concurrently. Summation order is documented where results are asserted to
//! fixed tolerances: means and residual products accumulate in observation
//! (row) order.

use nalgebra::{DMatrix, DVector};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

/// Per-class means and their difference.
#[derive(Debug, Clone)]
pub struct GroupSummary {
    pub mean0: DVector<f64>,
    pub mean1: DVector<f64>,
    /// `mean1 - mean0`.
    pub diff: DVector<f64>,
    pub n0: usize,
    pub n1: usize,
}

/// Which estimator produced a covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovKind {
    Pooled,
    Shrunk,
    Diagonal,
    Oracle,
}

/// A symmetric covariance estimate tagged with its provenance.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    pub matrix: DMatrix<f64>,
    pub kind: CovKind,
    /// Shrinkage intensity in `[0, 1]`; present iff `kind == Shrunk`.
    pub shrinkage_weight: Option<f64>,
}

/// Group means using the dataset's own labels.
pub fn group_summary(ds: &LabeledDataset) -> GroupSummary {
    group_summary_with(ds, ds.labels())
}

/// Group means under an alternative labeling of the same rows.
pub fn group_summary_with(ds: &LabeledDataset, labels: &[u8]) -> GroupSummary {
    let p = ds.p();
    let mut sum0 = DVector::zeros(p);
    let mut sum1 = DVector::zeros(p);
    let mut n0 = 0usize;
    let mut n1 = 0usize;
    for (i, &y) in labels.iter().enumerate() {
        let row = ds.row(i);
        if y == 0 {
            n0 += 1;
            for j in 0..p {
                sum0[j] += row[j];
            }
        } else {
            n1 += 1;
            for j in 0..p {
                sum1[j] += row[j];
            }
        }
    }
    let mean0 = sum0 / n0 as f64;
    let mean1 = sum1 / n1 as f64;
    let diff = &mean1 - &mean0;
    GroupSummary {
        mean0,
        mean1,
        diff,
        n0,
        n1,
    }
}

/// Pooled within-class residuals, one row per observation, in row order.
pub(crate) fn class_centered_residuals(
    ds: &LabeledDataset,
    labels: &[u8],
    summary: &GroupSummary,
) -> DMatrix<f64> {
    let (n, p) = (ds.n(), ds.p());
    let mut resid = DMatrix::zeros(n, p);
    for i in 0..n {
        let row = ds.row(i);
        let mean = if labels[i] == 0 {
            &summary.mean0
        } else {
            &summary.mean1
        };
        for j in 0..p {
            resid[(i, j)] = row[j] - mean[j];
        }
    }
    resid
}

/// Pooled two-sample covariance with divisor `n - 2`.
pub fn pooled_covariance(ds: &LabeledDataset) -> CovarianceEstimate {
    pooled_covariance_with(ds, ds.labels())
}

/// Pooled covariance under an alternative labeling.
///
/// Equals `[(n0-1) S0 + (n1-1) S1] / (n-2)` with per-class divisors `n_j - 1`;
/// a single-member class contributes a zero term. Guaranteed `n >= 4` by
/// dataset validation, so the divisor is always positive.
pub fn pooled_covariance_with(ds: &LabeledDataset, labels: &[u8]) -> CovarianceEstimate {
    let summary = group_summary_with(ds, labels);
    let resid = class_centered_residuals(ds, labels, &summary);
    let matrix = scatter_of(&resid) / (ds.n() as f64 - 2.0);
    CovarianceEstimate {
        matrix,
        kind: CovKind::Pooled,
        shrinkage_weight: None,
    }
}

/// Sum of outer products of the rows of `resid`, exactly symmetric.
fn scatter_of(resid: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = resid.shape();
    let mut scatter = DMatrix::zeros(p, p);
    for i in 0..n {
        for a in 0..p {
            let ra = resid[(i, a)];
            for b in a..p {
                scatter[(a, b)] += ra * resid[(i, b)];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            scatter[(a, b)] = scatter[(b, a)];
        }
    }
    scatter
}

/// Diagonal-target shrinkage of the pooled covariance.
pub fn shrink_covariance(ds: &LabeledDataset) -> CovarianceEstimate {
    shrink_covariance_with(ds, ds.labels())
}

/// Shrinkage covariance under an alternative labeling.
///
/// Returns `S* = lambda * diag(S) + (1 - lambda) * S`, i.e. off-diagonal
/// entries are damped by `1 - lambda` while variances are kept. The intensity
/// is the analytic optimum for the diagonal target,
///
/// ```text
/// lambda = sum_{i<j} Var(s_ij) / sum_{i<j} s_ij^2 ,
/// ```
///
/// estimated from the pooled within-class residuals (classes centered
/// separately, divisor `n - 2`), with
/// `Var(s_ij) = n / ((n-1) (n-2)^2) * sum_k (w_kij - wbar_ij)^2` for
/// `w_kij = r_ki r_kj`. The ratio is clamped to `[0, 1]`, and a fully
/// degenerate pooled estimate (no off-diagonal mass) yields `lambda = 1`.
pub fn shrink_covariance_with(ds: &LabeledDataset, labels: &[u8]) -> CovarianceEstimate {
    let (n, p) = (ds.n(), ds.p());
    let nf = n as f64;
    let summary = group_summary_with(ds, labels);
    let resid = class_centered_residuals(ds, labels, &summary);
    let pooled = scatter_of(&resid) / (nf - 2.0);

    let mut var_sum = 0.0;
    let mut sq_sum = 0.0;
    for a in 0..p {
        for b in (a + 1)..p {
            let mut wbar = 0.0;
            for i in 0..n {
                wbar += resid[(i, a)] * resid[(i, b)];
            }
            wbar /= nf;
            let mut ss = 0.0;
            for i in 0..n {
                let d = resid[(i, a)] * resid[(i, b)] - wbar;
                ss += d * d;
            }
            var_sum += nf / ((nf - 1.0) * (nf - 2.0) * (nf - 2.0)) * ss;
            sq_sum += pooled[(a, b)] * pooled[(a, b)];
        }
    }
    let lambda = if sq_sum > 0.0 {
        (var_sum / sq_sum).clamp(0.0, 1.0)
    } else {
        1.0
    };

    let mut matrix = pooled;
    let damp = 1.0 - lambda;
    for a in 0..p {
        for b in 0..p {
            if a != b {
                matrix[(a, b)] *= damp;
            }
        }
    }
    CovarianceEstimate {
        matrix,
        kind: CovKind::Shrunk,
        shrinkage_weight: Some(lambda),
    }
}

/// Relative tolerance for declaring a symmetric matrix singular.
pub const SPD_RTOL: f64 = 1e-10;

/// Result of a symmetric solve.
#[derive(Debug, Clone)]
pub struct SpdSolution {
    pub solution: DVector<f64>,
    /// True when small eigenvalues were dropped and the minimum-norm
    /// least-squares solution was returned instead of an exact solve.
    pub pseudo_inverse_used: bool,
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let p = m.nrows();
    let mut max_abs = 0.0f64;
    let mut max_asym = 0.0f64;
    for a in 0..p {
        for b in a..p {
            max_abs = max_abs.max(m[(a, b)].abs()).max(m[(b, a)].abs());
            max_asym = max_asym.max((m[(a, b)] - m[(b, a)]).abs());
        }
    }
    if max_asym > 1e-12 * max_abs.max(1.0) {
        return Err(Error::NotSymmetric { max_asym });
    }
    Ok(())
}

/// Solve `M w = v` for symmetric `M` via eigendecomposition.
///
/// Eigenvalues with `|lambda| <= SPD_RTOL * max|lambda|` are treated as zero;
/// when any are dropped the minimum-norm least-squares solution is returned
/// and flagged.
pub fn solve_spd(m: &DMatrix<f64>, v: &DVector<f64>) -> Result<SpdSolution> {
    check_symmetric(m)?;
    let eig = m.clone().symmetric_eigen();
    let max_mag = eig.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let cut = SPD_RTOL * max_mag;
    let p = m.nrows();
    let mut solution = DVector::zeros(p);
    let mut dropped = false;
    for k in 0..p {
        let lk = eig.eigenvalues[k];
        if lk.abs() <= cut {
            dropped = true;
            continue;
        }
        let vk = eig.eigenvectors.column(k);
        let coef = vk.dot(v) / lk;
        solution.axpy(coef, &vk.clone_owned(), 1.0);
    }
    Ok(SpdSolution {
        solution,
        pseudo_inverse_used: dropped,
    })
}

/// Eigenpairs of a symmetric matrix, ordered and sign-fixed.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    /// Eigenvalues in descending order.
    pub values: DVector<f64>,
    /// Unit eigenvectors as columns, matching `values`; the first coordinate
    /// of each vector larger than 1e-12 in magnitude is made positive.
    pub vectors: DMatrix<f64>,
}

/// Ordered eigendecomposition of a symmetric matrix.
pub fn principal_axes(m: &DMatrix<f64>) -> Result<EigenPairs> {
    check_symmetric(m)?;
    let p = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut values = DVector::zeros(p);
    let mut vectors = DMatrix::zeros(p, p);
    for (slot, &k) in order.iter().enumerate() {
        values[slot] = eig.eigenvalues[k];
        let col = eig.eigenvectors.column(k);
        let flip = col
            .iter()
            .find(|x| x.abs() > 1e-12)
            .is_some_and(|&x| x < 0.0);
        for j in 0..p {
            vectors[(j, slot)] = if flip { -col[j] } else { col[j] };
        }
    }
    Ok(EigenPairs { values, vectors })
}
