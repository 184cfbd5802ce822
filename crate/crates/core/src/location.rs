//! Location statistics: one quadratic-form kernel with pluggable weighting.
//!
//! Every statistic here has the form `T = (n0 n1 / n) * d' W d` with
//! `d = mean1 - mean0` and a weight matrix `W` chosen by name. Larger values
//! are more extreme (right-tailed rejection region). The group-size prefactor
//! is constant under label permutation, so permutation p-values do not depend
//! on it; it is kept so small-sample values match the classical forms.

use nalgebra::{DMatrix, DVector};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::stats::{
    group_summary_with, pooled_covariance_with, shrink_covariance_with, solve_spd,
};

/// The statistic catalog for location tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocationStatName {
    /// Mahalanobis form with the known generative covariance.
    Oracle,
    /// Classical two-group form with the pooled covariance.
    Hotelling,
    /// Pooled covariance with diagonal-target shrinkage.
    HotellingShrink,
    /// Identity weighting: squared Euclidean norm of the mean difference.
    /// Monotone-equivalent to the global-test form at fixed group sizes.
    Goeman,
    /// Diagonal (per-coordinate variance) weighting; scalar invariant.
    Sd,
}

impl LocationStatName {
    pub fn as_str(&self) -> &'static str {
        match self {
            LocationStatName::Oracle => "oracle",
            LocationStatName::Hotelling => "hotelling",
            LocationStatName::HotellingShrink => "hotelling.shrink",
            LocationStatName::Goeman => "goeman",
            LocationStatName::Sd => "sd",
        }
    }
}

/// A fully parameterized location statistic.
#[derive(Debug, Clone)]
pub struct LocationStatSpec {
    pub name: LocationStatName,
    /// Generative covariance; required iff `name == Oracle`.
    pub oracle_sigma: Option<DMatrix<f64>>,
}

impl LocationStatSpec {
    pub fn new(name: LocationStatName) -> Self {
        LocationStatSpec {
            name,
            oracle_sigma: None,
        }
    }

    /// Oracle statistic with a validated symmetric positive definite sigma.
    pub fn oracle(sigma: DMatrix<f64>) -> Result<Self> {
        let p = sigma.nrows();
        if sigma.ncols() != p {
            return Err(Error::OracleSigmaShape {
                p,
                rows: sigma.nrows(),
                cols: sigma.ncols(),
            });
        }
        let mut max_abs = 0.0f64;
        let mut max_asym = 0.0f64;
        for a in 0..p {
            for b in a..p {
                max_abs = max_abs.max(sigma[(a, b)].abs());
                max_asym = max_asym.max((sigma[(a, b)] - sigma[(b, a)]).abs());
            }
        }
        if max_asym > 1e-12 * max_abs.max(1.0) {
            return Err(Error::NotSymmetric { max_asym });
        }
        if sigma.clone().cholesky().is_none() {
            return Err(Error::OracleSigmaNotPd);
        }
        Ok(LocationStatSpec {
            name: LocationStatName::Oracle,
            oracle_sigma: Some(sigma),
        })
    }
}

/// A computed location statistic with its numerical flags.
#[derive(Debug, Clone, Copy)]
pub struct LocationStatValue {
    pub value: f64,
    /// A singular weighting matrix forced the minimum-norm pseudo-inverse.
    pub pseudo_inverse_used: bool,
    /// Coordinates dropped by the `sd` statistic for zero pooled variance.
    pub dropped_coordinates: usize,
}

/// Evaluate `spec` on the dataset's own labels.
pub fn location_statistic(
    ds: &LabeledDataset,
    spec: &LocationStatSpec,
) -> Result<LocationStatValue> {
    location_statistic_with(ds, ds.labels(), spec)
}

/// Evaluate `spec` under an alternative labeling of the same rows.
pub fn location_statistic_with(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &LocationStatSpec,
) -> Result<LocationStatValue> {
    let summary = group_summary_with(ds, labels);
    let prefactor = (summary.n0 as f64) * (summary.n1 as f64) / ds.n() as f64;
    let d = &summary.diff;

    match spec.name {
        LocationStatName::Goeman => Ok(LocationStatValue {
            value: prefactor * d.dot(d),
            pseudo_inverse_used: false,
            dropped_coordinates: 0,
        }),
        LocationStatName::Sd => {
            let pooled = pooled_covariance_with(ds, labels).matrix;
            Ok(sd_statistic(prefactor, d, &pooled))
        }
        LocationStatName::Oracle => {
            let sigma = spec
                .oracle_sigma
                .as_ref()
                .ok_or(Error::MissingOracleSigma)?;
            if sigma.nrows() != ds.p() {
                return Err(Error::OracleSigmaShape {
                    p: ds.p(),
                    rows: sigma.nrows(),
                    cols: sigma.ncols(),
                });
            }
            quadratic_form(prefactor, d, sigma)
        }
        LocationStatName::Hotelling => {
            let pooled = pooled_covariance_with(ds, labels).matrix;
            quadratic_form(prefactor, d, &pooled)
        }
        LocationStatName::HotellingShrink => {
            let shrunk = shrink_covariance_with(ds, labels).matrix;
            quadratic_form(prefactor, d, &shrunk)
        }
    }
}

fn quadratic_form(
    prefactor: f64,
    d: &DVector<f64>,
    weight_inverse_of: &DMatrix<f64>,
) -> Result<LocationStatValue> {
    let solved = solve_spd(weight_inverse_of, d)?;
    Ok(LocationStatValue {
        value: prefactor * d.dot(&solved.solution),
        pseudo_inverse_used: solved.pseudo_inverse_used,
        dropped_coordinates: 0,
    })
}

/// Zero pooled variance in a coordinate carries no two-sample information;
/// such coordinates get weight zero and are counted in the flag.
fn sd_statistic(prefactor: f64, d: &DVector<f64>, pooled: &DMatrix<f64>) -> LocationStatValue {
    let p = d.len();
    let max_diag = (0..p).fold(0.0f64, |m, j| m.max(pooled[(j, j)]));
    let cut = 1e-12 * max_diag;
    let mut total = 0.0;
    let mut dropped = 0;
    for j in 0..p {
        let v = pooled[(j, j)];
        if v <= cut {
            dropped += 1;
        } else {
            total += d[j] * d[j] / v;
        }
    }
    LocationStatValue {
        value: prefactor * total,
        pseudo_inverse_used: false,
        dropped_coordinates: dropped,
    }
}

/// The Goeman statistic next to its definitional form `(n0 n1 / n) ||d||^2`.
pub fn goeman_equivalence_check(ds: &LabeledDataset) -> Result<(f64, f64)> {
    let stat = location_statistic(ds, &LocationStatSpec::new(LocationStatName::Goeman))?;
    let summary = group_summary_with(ds, ds.labels());
    let prefactor = (summary.n0 as f64) * (summary.n1 as f64) / ds.n() as f64;
    Ok((stat.value, prefactor * summary.diff.dot(&summary.diff)))
}
