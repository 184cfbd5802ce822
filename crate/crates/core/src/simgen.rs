//! Generative scenarios: covariance families, calibrated signal vectors,
//! and dataset sampling for the Monte Carlo experiments.
//!
//! Sampling order per observation is fixed and documented for determinism:
//! first the mixture component (mixture scenarios only, one uniform), then
//! `p` standard normals, then the chi-square divisor (Student-t noise only).
//! Labels are exactly balanced: the first `n/2` rows are class 0.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::perm::PvalueMode;
use crate::rng::{derive_stream, RngStream};
use crate::stats::{principal_axes, solve_spd};

/// Covariance families used across the simulation grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovarianceSpec {
    /// Identity.
    Identity,
    /// Short-memory correlation `S_kl = rho^|k-l|`.
    Ar1 { rho: f64 },
    /// Long-memory correlation `min(k, l) / sqrt(k l)` (1-based indices).
    Brownian,
    /// A random correlation matrix `D^-1 (A'A) D^-1`, `A` a p x p matrix of
    /// independent standard normals drawn once from `seed`.
    RandomCorr { seed: u64 },
    /// Heteroskedastic diagonal `diag(1, 2, ..., p)`.
    HeteroDiag,
}

/// Build the p x p covariance matrix of a family.
pub fn make_covariance(spec: &CovarianceSpec, p: usize) -> Result<DMatrix<f64>> {
    match *spec {
        CovarianceSpec::Identity => Ok(DMatrix::identity(p, p)),
        CovarianceSpec::Ar1 { rho } => {
            if !(-1.0 < rho && rho < 1.0) {
                return Err(Error::BadRho { rho });
            }
            Ok(DMatrix::from_fn(p, p, |a, b| {
                rho.powi((a as i32 - b as i32).abs())
            }))
        }
        CovarianceSpec::Brownian => Ok(DMatrix::from_fn(p, p, |a, b| {
            let (k, l) = (a as f64 + 1.0, b as f64 + 1.0);
            k.min(l) / (k * l).sqrt()
        })),
        CovarianceSpec::RandomCorr { seed } => {
            let mut rng = derive_stream(seed, &[0x5ec0]).rng();
            let a = DMatrix::from_fn(p, p, |_, _| {
                <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
            });
            let r = a.transpose() * &a;
            Ok(DMatrix::from_fn(p, p, |i, j| {
                r[(i, j)] / (r[(i, i)] * r[(j, j)]).sqrt()
            }))
        }
        CovarianceSpec::HeteroDiag => Ok(DMatrix::from_fn(p, p, |a, b| {
            if a == b {
                a as f64 + 1.0
            } else {
                0.0
            }
        })),
    }
}

/// How the shift vector's size is calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    /// `mu' Sigma^-1 mu = c^2 p`.
    Mahalanobis,
    /// `||mu||^2 = c^2 p`.
    Euclidean,
}

/// Which principal axis carries the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcPick {
    Highest,
    Lowest,
    /// 1-based rank in descending-variance order.
    Index(usize),
}

/// Direction of the shift vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalDirection {
    /// Equal shift in every coordinate.
    Constant,
    /// Along a unit eigenvector of the covariance.
    Pc(PcPick),
}

/// A calibrated mean-shift specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    pub direction: SignalDirection,
    /// The effect index `c >= 0`.
    pub strength: f64,
    pub norm: NormMode,
}

/// Build the shift vector satisfying the norm constraint.
pub fn make_signal(spec: &SignalSpec, sigma: &DMatrix<f64>) -> Result<DVector<f64>> {
    let p = sigma.nrows();
    let c = spec.strength;
    if c == 0.0 {
        return Ok(DVector::zeros(p));
    }
    match spec.direction {
        SignalDirection::Constant => {
            let ones = DVector::from_element(p, 1.0);
            let scale = match spec.norm {
                NormMode::Euclidean => c,
                NormMode::Mahalanobis => {
                    let solved = solve_spd(sigma, &ones)?;
                    if solved.pseudo_inverse_used {
                        return Err(Error::SingularSigma);
                    }
                    let quad = ones.dot(&solved.solution);
                    if quad <= 0.0 {
                        return Err(Error::SingularSigma);
                    }
                    c * (p as f64 / quad).sqrt()
                }
            };
            Ok(ones * scale)
        }
        SignalDirection::Pc(pick) => {
            let axes = principal_axes(sigma)?;
            let slot = match pick {
                PcPick::Highest => 0,
                PcPick::Lowest => p - 1,
                PcPick::Index(k) => {
                    if k == 0 || k > p {
                        return Err(Error::InvalidConfig(format!(
                            "pc index {k} out of range 1..={p}"
                        )));
                    }
                    k - 1
                }
            };
            let lambda = axes.values[slot];
            let scale = match spec.norm {
                NormMode::Euclidean => c * (p as f64).sqrt(),
                NormMode::Mahalanobis => {
                    if lambda <= 0.0 {
                        return Err(Error::SingularSigma);
                    }
                    c * (p as f64 * lambda).sqrt()
                }
            };
            Ok(axes.vectors.column(slot) * scale)
        }
    }
}

/// Noise distribution of the shift model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    Gaussian,
    /// Multivariate t via `z / sqrt(w / df)`; not rescaled to unit variance.
    StudentT { df: f64 },
}

/// The class-conditional generative model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalModel {
    /// `x = mu * y + noise`.
    Shift(SignalSpec),
    /// Two-component Gaussian mixtures with mirrored weights
    /// `(1/2 -+ weight, 1/2 +- weight)`, component means `0` and
    /// `(scale / sqrt(p)) * ones`, identity covariance.
    Mixture { weight: f64, scale: f64 },
}

impl SignalModel {
    /// The scalar effect index: `c` for shifts, the weight for mixtures.
    pub fn effect(&self) -> f64 {
        match *self {
            SignalModel::Shift(spec) => spec.strength,
            SignalModel::Mixture { weight, .. } => weight,
        }
    }
}

/// A single cell of a simulation grid: one generative model at one effect
/// size, with the engine settings needed to run it.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub id: String,
    pub n: usize,
    pub p: usize,
    pub replications: u32,
    pub permutations: u32,
    pub alpha: f64,
    pub folds: usize,
    pub balanced_folds: bool,
    pub refold: bool,
    pub pvalue_mode: PvalueMode,
    pub tie_break: bool,
    pub noise: NoiseSpec,
    pub covariance: CovarianceSpec,
    pub signal: SignalModel,
    /// Catalog names, resolved against the folding settings at run time.
    pub statistics: Vec<String>,
}

impl ScenarioConfig {
    /// The workhorse configuration: n = 40, p = 23, identity covariance,
    /// Gaussian noise, constant-direction shift of strength `c`.
    pub fn basic(id: &str, c: f64) -> Self {
        ScenarioConfig {
            id: id.to_string(),
            n: 40,
            p: 23,
            replications: 1000,
            permutations: 300,
            alpha: 0.05,
            folds: 4,
            balanced_folds: true,
            refold: true,
            pvalue_mode: PvalueMode::PaperExact,
            tie_break: false,
            noise: NoiseSpec::Gaussian,
            covariance: CovarianceSpec::Identity,
            signal: SignalModel::Shift(SignalSpec {
                direction: SignalDirection::Constant,
                strength: c,
                norm: NormMode::Mahalanobis,
            }),
            statistics: vec!["oracle".into(), "hotelling".into()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::TooFewObservations { n: self.n });
        }
        if self.n % 2 != 0 {
            return Err(Error::OddSampleSize { n: self.n });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::BadAlpha { alpha: self.alpha });
        }
        if self.folds < 2 {
            return Err(Error::TooFewFolds { folds: self.folds });
        }
        if self.folds > self.n {
            return Err(Error::TooManyFolds {
                folds: self.folds,
                n: self.n,
            });
        }
        if self.statistics.is_empty() {
            return Err(Error::InvalidConfig("no statistics listed".into()));
        }
        match self.signal {
            SignalModel::Shift(spec) => {
                if spec.strength < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "signal strength must be nonnegative, got {}",
                        spec.strength
                    )));
                }
            }
            SignalModel::Mixture { weight, .. } => {
                if !(0.0..=0.5).contains(&weight) {
                    return Err(Error::BadMixtureWeight { weight });
                }
                if self.covariance != CovarianceSpec::Identity {
                    return Err(Error::InvalidConfig(
                        "mixture scenarios use the identity covariance".into(),
                    ));
                }
                if self.noise != NoiseSpec::Gaussian {
                    return Err(Error::InvalidConfig(
                        "mixture scenarios use Gaussian components".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A scenario with its covariance factored and signal built, ready to draw
/// replication datasets cheaply.
#[derive(Debug, Clone)]
pub struct PreparedScenario {
    pub config: ScenarioConfig,
    pub sigma: DMatrix<f64>,
    /// A factor `F` with `F F' = Sigma`.
    factor: DMatrix<f64>,
    /// The shift vector (zero for mixtures; they carry their own means).
    mu: DVector<f64>,
    /// Mixture component mean `mu2` when the model is a mixture.
    mixture_mean: Option<DVector<f64>>,
}

impl PreparedScenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let sigma = make_covariance(&config.covariance, config.p)?;
        let factor = match sigma.clone().cholesky() {
            Some(chol) => chol.l(),
            None => {
                // PSD fallback: eigen square root with clamped eigenvalues.
                let axes = principal_axes(&sigma)?;
                let mut f = axes.vectors.clone();
                for j in 0..config.p {
                    let s = axes.values[j].max(0.0).sqrt();
                    for i in 0..config.p {
                        f[(i, j)] *= s;
                    }
                }
                f
            }
        };
        let (mu, mixture_mean) = match config.signal {
            SignalModel::Shift(spec) => (make_signal(&spec, &sigma)?, None),
            SignalModel::Mixture { scale, .. } => {
                let m = DVector::from_element(config.p, scale / (config.p as f64).sqrt());
                (DVector::zeros(config.p), Some(m))
            }
        };
        Ok(PreparedScenario {
            config,
            sigma,
            factor,
            mu,
            mixture_mean,
        })
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    /// Draw one replication dataset from `stream`.
    pub fn draw(&self, stream: &RngStream) -> LabeledDataset {
        let cfg = &self.config;
        let (n, p) = (cfg.n, cfg.p);
        let mut rng = stream.rng();
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i >= n / 2)).collect();
        let mut features = Vec::with_capacity(n * p);
        let mut z = DVector::zeros(p);
        for &y in &labels {
            match (&self.mixture_mean, cfg.noise) {
                (Some(mu2), _) => {
                    let SignalModel::Mixture { weight, .. } = cfg.signal else {
                        unreachable!()
                    };
                    // P(component 2) is 1/2 + weight for class 1, mirrored
                    // for class 0.
                    let p2 = if y == 1 { 0.5 + weight } else { 0.5 - weight };
                    let from_second = rng.random::<f64>() < p2;
                    for j in 0..p {
                        let g: f64 = StandardNormal.sample(&mut rng);
                        let mean = if from_second { mu2[j] } else { 0.0 };
                        features.push(mean + g);
                    }
                }
                (None, noise) => {
                    for j in 0..p {
                        z[j] = StandardNormal.sample(&mut rng);
                    }
                    let mut eta = &self.factor * &z;
                    if let NoiseSpec::StudentT { df } = noise {
                        let w: f64 = ChiSquared::new(df).expect("valid df").sample(&mut rng);
                        eta /= (w / df).sqrt();
                    }
                    for j in 0..p {
                        let shift = if y == 1 { self.mu[j] } else { 0.0 };
                        features.push(shift + eta[j]);
                    }
                }
            }
        }
        LabeledDataset::from_flat(features, labels, p).expect("generated data is valid")
    }
}

/// Draw a dataset for `cfg` from `stream` (one-shot convenience; the harness
/// prepares the scenario once instead).
pub fn draw_dataset(cfg: &ScenarioConfig, stream: &RngStream) -> Result<LabeledDataset> {
    Ok(PreparedScenario::new(cfg.clone())?.draw(stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::principal_axes;
    use approx::assert_relative_eq;

    fn mahalanobis_sq(mu: &DVector<f64>, sigma: &DMatrix<f64>) -> f64 {
        let solved = solve_spd(sigma, mu).unwrap();
        mu.dot(&solved.solution)
    }

    #[test]
    fn ar1_entries() {
        let sigma = make_covariance(&CovarianceSpec::Ar1 { rho: 0.6 }, 5).unwrap();
        assert_relative_eq!(sigma[(0, 2)], 0.36, max_relative = 1e-15);
        assert_eq!(sigma[(3, 3)], 1.0);
        let id = make_covariance(&CovarianceSpec::Ar1 { rho: 0.0 }, 5).unwrap();
        assert_eq!(id, DMatrix::identity(5, 5));
        assert!(matches!(
            make_covariance(&CovarianceSpec::Ar1 { rho: 1.0 }, 5),
            Err(Error::BadRho { .. })
        ));
    }

    #[test]
    fn brownian_entries() {
        let sigma = make_covariance(&CovarianceSpec::Brownian, 4).unwrap();
        assert_relative_eq!(sigma[(0, 1)], 1.0 / 2.0f64.sqrt(), max_relative = 1e-15);
        for j in 0..4 {
            assert_relative_eq!(sigma[(j, j)], 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn random_corr_is_a_correlation_matrix_and_deterministic() {
        let a = make_covariance(&CovarianceSpec::RandomCorr { seed: 7 }, 6).unwrap();
        let b = make_covariance(&CovarianceSpec::RandomCorr { seed: 7 }, 6).unwrap();
        assert_eq!(a, b);
        let other = make_covariance(&CovarianceSpec::RandomCorr { seed: 8 }, 6).unwrap();
        assert_ne!(a, other);
        for j in 0..6 {
            assert_relative_eq!(a[(j, j)], 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn all_families_are_psd() {
        for spec in [
            CovarianceSpec::Identity,
            CovarianceSpec::Ar1 { rho: 0.6 },
            CovarianceSpec::Ar1 { rho: -0.4 },
            CovarianceSpec::Brownian,
            CovarianceSpec::RandomCorr { seed: 3 },
            CovarianceSpec::HeteroDiag,
        ] {
            let sigma = make_covariance(&spec, 23).unwrap();
            let axes = principal_axes(&sigma).unwrap();
            let floor = -1e-10 * axes.values[0].abs();
            assert!(axes.values[22] >= floor, "{spec:?}: {}", axes.values[22]);
        }
    }

    #[test]
    fn constant_signal_identity_effect_sizes() {
        // c = 1/2, p = 23: squared norms are c^2 p = 5.75 in both modes.
        let sigma = DMatrix::identity(23, 23);
        for norm in [NormMode::Mahalanobis, NormMode::Euclidean] {
            let mu = make_signal(
                &SignalSpec {
                    direction: SignalDirection::Constant,
                    strength: 0.5,
                    norm,
                },
                &sigma,
            )
            .unwrap();
            assert_relative_eq!(mu.dot(&mu), 5.75, max_relative = 1e-10);
            assert_relative_eq!(mahalanobis_sq(&mu, &sigma), 5.75, max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_strength_gives_zero_signal() {
        let sigma = make_covariance(&CovarianceSpec::Ar1 { rho: 0.6 }, 8).unwrap();
        for norm in [NormMode::Mahalanobis, NormMode::Euclidean] {
            let mu = make_signal(
                &SignalSpec {
                    direction: SignalDirection::Constant,
                    strength: 0.0,
                    norm,
                },
                &sigma,
            )
            .unwrap();
            assert_eq!(mu.norm(), 0.0);
        }
    }

    #[test]
    fn norm_constraints_hold_across_directions_and_families() {
        let families = [
            CovarianceSpec::Ar1 { rho: 0.6 },
            CovarianceSpec::Brownian,
            CovarianceSpec::RandomCorr { seed: 11 },
            CovarianceSpec::HeteroDiag,
        ];
        let directions = [
            SignalDirection::Constant,
            SignalDirection::Pc(PcPick::Highest),
            SignalDirection::Pc(PcPick::Lowest),
            SignalDirection::Pc(PcPick::Index(7)),
        ];
        for family in families {
            let sigma = make_covariance(&family, 23).unwrap();
            for direction in directions {
                for norm in [NormMode::Mahalanobis, NormMode::Euclidean] {
                    let mu = make_signal(
                        &SignalSpec {
                            direction,
                            strength: 0.5,
                            norm,
                        },
                        &sigma,
                    )
                    .unwrap();
                    let got = match norm {
                        NormMode::Euclidean => mu.dot(&mu),
                        NormMode::Mahalanobis => mahalanobis_sq(&mu, &sigma),
                    };
                    assert_relative_eq!(got, 5.75, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn pc_highest_of_hetero_diag_hand_value() {
        // Sigma = diag(1..p): the top eigenvalue is p, so calibration gives
        // scale a = c sqrt(p * p) and mu' Sigma^-1 mu = a^2 / p = c^2 p.
        let p = 23;
        let sigma = make_covariance(&CovarianceSpec::HeteroDiag, p).unwrap();
        let mu = make_signal(
            &SignalSpec {
                direction: SignalDirection::Pc(PcPick::Highest),
                strength: 0.25,
                norm: NormMode::Mahalanobis,
            },
            &sigma,
        )
        .unwrap();
        let a = 0.25 * (p as f64);
        assert_relative_eq!(mu.norm(), a, max_relative = 1e-10);
        assert_relative_eq!(
            mahalanobis_sq(&mu, &sigma),
            0.0625 * p as f64,
            max_relative = 1e-10
        );
    }

    #[test]
    fn draw_is_balanced_and_deterministic() {
        let cfg = ScenarioConfig::basic("t", 0.25);
        let scenario = PreparedScenario::new(cfg).unwrap();
        let stream = derive_stream(9, &[1]);
        let a = scenario.draw(&stream);
        let b = scenario.draw(&stream);
        assert_eq!(a, b);
        assert_eq!(a.n0(), 20);
        assert_eq!(a.n1(), 20);
    }

    #[test]
    fn mean_difference_moment_oracle() {
        // E ||mean1 - mean0||^2 = ||mu||^2 + tr(Sigma) (1/n0 + 1/n1).
        let cfg = ScenarioConfig::basic("t", 0.5);
        let scenario = PreparedScenario::new(cfg).unwrap();
        let expect = 5.75 + 2.0 * 23.0 / 20.0;
        let reps = 10_000;
        let mut values = Vec::with_capacity(reps);
        for rep in 0..reps {
            let ds = scenario.draw(&derive_stream(31, &[rep as u64]));
            let d = crate::stats::group_summary(&ds).diff;
            values.push(d.dot(&d));
        }
        let mean = values.iter().sum::<f64>() / reps as f64;
        let var = values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (reps as f64 - 1.0);
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - expect).abs() <= 3.0 * se,
            "mean {mean}, expect {expect}, se {se}"
        );
    }

    #[test]
    fn student_t_tails_are_unrescaled() {
        // |t_3| exceeds 3.182 with probability 0.05; a variance-rescaled
        // variant would cut that tail to about 0.012.
        let mut cfg = ScenarioConfig::basic("t", 0.0);
        cfg.noise = NoiseSpec::StudentT { df: 3.0 };
        cfg.n = 40;
        cfg.p = 10;
        let scenario = PreparedScenario::new(cfg).unwrap();
        let mut exceed = 0usize;
        let mut total = 0usize;
        for rep in 0..150 {
            let ds = scenario.draw(&derive_stream(17, &[rep]));
            for i in 0..ds.n() {
                for &v in ds.row(i) {
                    total += 1;
                    if v.abs() > 3.182 {
                        exceed += 1;
                    }
                }
            }
        }
        let frac = exceed as f64 / total as f64;
        // Observations within a draw share the chi-square divisor, so allow
        // a generous band around 0.05.
        assert!((0.03..0.08).contains(&frac), "tail fraction {frac}");
    }

    #[test]
    fn mixture_weight_zero_matches_null_and_half_is_a_shift() {
        let mut cfg = ScenarioConfig::basic("mix", 0.0);
        cfg.signal = SignalModel::Mixture {
            weight: 0.0,
            scale: 3.0,
        };
        let null = PreparedScenario::new(cfg.clone()).unwrap();
        let mut diff_norms = 0.0;
        for rep in 0..400 {
            let ds = null.draw(&derive_stream(23, &[rep]));
            let d = crate::stats::group_summary(&ds).diff;
            diff_norms += d.dot(&d) / 400.0;
        }
        // Under the null the expected squared difference is tr(Var) * 2/(n/2)
        // with per-coordinate variance 1 + (3/sqrt(p))^2/4 (component spread).
        let var = 1.0 + 9.0 / 23.0 / 4.0;
        let expect = 2.0 * 23.0 * var / 20.0;
        assert!(
            (diff_norms - expect).abs() < 0.35 * expect,
            "null mean {diff_norms} vs {expect}"
        );

        cfg.signal = SignalModel::Mixture {
            weight: 0.5,
            scale: 3.0,
        };
        let shifted = PreparedScenario::new(cfg).unwrap();
        let mut mean_diff = DVector::zeros(23);
        for rep in 0..400 {
            let ds = shifted.draw(&derive_stream(29, &[rep]));
            mean_diff += crate::stats::group_summary(&ds).diff / 400.0;
        }
        // Pure components: the class mean difference is mu2 itself.
        let want = 3.0 / 23.0f64.sqrt();
        for j in 0..23 {
            assert!(
                (mean_diff[j] - want).abs() < 0.15,
                "coordinate {j}: {} vs {want}",
                mean_diff[j]
            );
        }
    }

    #[test]
    fn label_swap_and_negated_shift_match_in_distribution() {
        // x' = x - mu with labels complemented is a draw from the mirrored
        // model (classes swapped, shift negated); its statistic distribution
        // must match the original's. Compare across independent seed ranges.
        let base = ScenarioConfig::basic("sym", 0.5);
        let scenario = PreparedScenario::new(base).unwrap();
        let mu = scenario.mu().clone();

        let stat = |ds: &LabeledDataset| {
            crate::location::location_statistic(
                ds,
                &crate::location::LocationStatSpec::new(crate::location::LocationStatName::Goeman),
            )
            .unwrap()
            .value
        };
        let reps: u64 = 500;
        let mut mean_a = 0.0;
        let mut mean_b = 0.0;
        let mut sq_a = 0.0;
        let mut sq_b = 0.0;
        for rep in 0..reps {
            let va = stat(&scenario.draw(&derive_stream(41, &[rep])));

            let ds = scenario.draw(&derive_stream(41, &[reps + rep]));
            let rows: Vec<Vec<f64>> = (0..ds.n())
                .map(|i| ds.row(i).iter().zip(mu.iter()).map(|(x, m)| x - m).collect())
                .collect();
            let swapped: Vec<u8> = ds.labels().iter().map(|&y| 1 - y).collect();
            let vb = stat(&crate::dataset::validate_dataset(&rows, &swapped).unwrap());

            mean_a += va / reps as f64;
            mean_b += vb / reps as f64;
            sq_a += va * va / reps as f64;
            sq_b += vb * vb / reps as f64;
        }
        let se = (((sq_a - mean_a * mean_a) + (sq_b - mean_b * mean_b)) / reps as f64).sqrt();
        assert!(
            (mean_a - mean_b).abs() <= 4.0 * se,
            "means {mean_a} vs {mean_b} (se {se})"
        );
    }

    #[test]
    fn config_validation_errors() {
        let mut cfg = ScenarioConfig::basic("v", 0.25);
        cfg.n = 39;
        assert!(matches!(cfg.validate(), Err(Error::OddSampleSize { .. })));

        let mut cfg = ScenarioConfig::basic("v", 0.25);
        cfg.signal = SignalModel::Mixture {
            weight: 0.7,
            scale: 3.0,
        };
        assert!(matches!(
            cfg.validate(),
            Err(Error::BadMixtureWeight { .. })
        ));

        let mut cfg = ScenarioConfig::basic("v", 0.25);
        cfg.covariance = CovarianceSpec::Ar1 { rho: 0.6 };
        cfg.signal = SignalModel::Mixture {
            weight: 0.2,
            scale: 3.0,
        };
        assert!(cfg.validate().is_err());
    }
}
