//! Python bindings for the permutest toolkit: datasets, statistics,
//! classifiers, permutation tests, and a small power-simulation front end.

use nalgebra::DMatrix;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use permutest_core::accuracy;
use permutest_core::classifier::{self, ClassifierSpec};
use permutest_core::dataset::LabeledDataset;
use permutest_core::harness;
use permutest_core::location::{LocationStatName, LocationStatSpec};
use permutest_core::perm::{self, PvalueMode, RefoldPolicy};
use permutest_core::rng::derive_stream;
use permutest_core::simgen::{
    CovarianceSpec, NoiseSpec, NormMode, ScenarioConfig, SignalDirection, SignalModel, SignalSpec,
};
use permutest_core::statistic::{FoldingConfig, StatisticSpec};

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn square_matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let p = rows.len();
    for row in rows {
        if row.len() != p {
            return Err(value_error(format!(
                "matrix must be square, found a row of length {} in a {}x{} matrix",
                row.len(),
                p,
                p
            )));
        }
    }
    Ok(DMatrix::from_fn(p, p, |i, j| rows[i][j]))
}

fn classifier_spec(family: &str, cost: Option<f64>, mix: Option<f64>) -> PyResult<ClassifierSpec> {
    match family.to_ascii_lowercase().as_str() {
        "lda" => Ok(ClassifierSpec::Lda),
        "dlda" => Ok(ClassifierSpec::Dlda),
        "sdlda" => Ok(ClassifierSpec::Sdlda),
        "hdrda" => ClassifierSpec::hdrda(mix.unwrap_or(0.5)).map_err(value_error),
        "svm" => ClassifierSpec::linear_svm(cost.unwrap_or(10.0)).map_err(value_error),
        other => Err(value_error(format!(
            "unknown classifier family '{other}' (expected lda, dlda, sdlda, hdrda, or svm)"
        ))),
    }
}

fn pvalue_mode(name: &str) -> PyResult<PvalueMode> {
    match name {
        "paper" => Ok(PvalueMode::PaperExact),
        "add-one" => Ok(PvalueMode::AddOne),
        other => Err(value_error(format!(
            "p-value mode must be 'paper' or 'add-one', got '{other}'"
        ))),
    }
}

/// A validated two-class dataset.
#[pyclass(frozen)]
struct Dataset {
    inner: LabeledDataset,
}

#[pymethods]
impl Dataset {
    #[new]
    fn new(features: Vec<Vec<f64>>, labels: Vec<u8>) -> PyResult<Self> {
        let inner = LabeledDataset::from_rows(&features, &labels).map_err(value_error)?;
        Ok(Dataset { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn n0(&self) -> usize {
        self.inner.n0()
    }

    #[getter]
    fn n1(&self) -> usize {
        self.inner.n1()
    }

    #[getter]
    fn labels(&self) -> Vec<u8> {
        self.inner.labels().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(n={}, p={}, n0={}, n1={})",
            self.inner.n(),
            self.inner.p(),
            self.inner.n0(),
            self.inner.n1()
        )
    }
}

/// A trained linear decision rule.
#[pyclass(frozen)]
struct Model {
    inner: classifier::LinearModel,
}

#[pymethods]
impl Model {
    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    #[getter]
    fn bias(&self) -> f64 {
        self.inner.bias
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<u8> {
        self.inner.predict(&x).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(p={}, bias={:.6}, converged={})",
            self.inner.weights.len(),
            self.inner.bias,
            self.inner.converged
        )
    }
}

/// Tail counts of a permutation run.
#[pyclass(frozen)]
struct Report {
    inner: perm::PermutationReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn observed(&self) -> f64 {
        self.inner.observed
    }

    #[getter]
    fn permutations(&self) -> u32 {
        self.inner.permutations
    }

    #[getter]
    fn greater(&self) -> u32 {
        self.inner.greater
    }

    #[getter]
    fn equal(&self) -> u32 {
        self.inner.equal
    }

    #[getter]
    fn p_value_paper(&self) -> f64 {
        self.inner.p_value_paper()
    }

    #[getter]
    fn p_value_add_one(&self) -> f64 {
        self.inner.p_value_add_one()
    }

    /// Accept/reject at `alpha`, optionally randomizing on ties; the tie
    /// variate is drawn from `seed`. Returns
    /// `(rejected, p_value, tie_randomization_used)`.
    #[pyo3(signature = (alpha=0.05, mode="add-one", tie_break=false, seed=0))]
    fn decide(
        &self,
        alpha: f64,
        mode: &str,
        tie_break: bool,
        seed: u64,
    ) -> PyResult<(bool, f64, bool)> {
        use rand::Rng;
        let mode = pvalue_mode(mode)?;
        let u: f64 = derive_stream(seed, &[0x71e]).rng().random();
        let d = perm::decide(&self.inner, alpha, mode, tie_break, u);
        Ok((d.rejected, d.p_value, d.tie_randomization_used))
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(observed={:.6}, permutations={}, greater={}, equal={})",
            self.inner.observed, self.inner.permutations, self.inner.greater, self.inner.equal
        )
    }
}

/// All statistic names in the catalog.
#[pyfunction]
fn statistic_names() -> Vec<String> {
    StatisticSpec::catalog_names()
        .into_iter()
        .map(String::from)
        .collect()
}

/// Evaluate a location statistic on the dataset's own labels.
#[pyfunction]
#[pyo3(signature = (ds, name, oracle_sigma=None))]
fn location_statistic(
    ds: &Dataset,
    name: &str,
    oracle_sigma: Option<Vec<Vec<f64>>>,
) -> PyResult<f64> {
    let spec = match name.to_ascii_lowercase().replace('_', ".").as_str() {
        "oracle" => {
            let sigma =
                oracle_sigma.ok_or_else(|| value_error("the oracle statistic needs oracle_sigma"))?;
            LocationStatSpec::oracle(square_matrix(&sigma)?).map_err(value_error)?
        }
        "hotelling" => LocationStatSpec::new(LocationStatName::Hotelling),
        "hotelling.shrink" => LocationStatSpec::new(LocationStatName::HotellingShrink),
        "goeman" => LocationStatSpec::new(LocationStatName::Goeman),
        "sd" => LocationStatSpec::new(LocationStatName::Sd),
        other => return Err(value_error(format!("unknown location statistic '{other}'"))),
    };
    Ok(permutest_core::location::location_statistic(&ds.inner, &spec)
        .map_err(value_error)?
        .value)
}

/// Train a classifier on the full dataset.
#[pyfunction]
#[pyo3(signature = (ds, family, cost=None, mix=None))]
fn fit_classifier(
    ds: &Dataset,
    family: &str,
    cost: Option<f64>,
    mix: Option<f64>,
) -> PyResult<Model> {
    let spec = classifier_spec(family, cost, mix)?;
    let stream = derive_stream(0, &[]);
    let inner = classifier::fit(&ds.inner, &spec, &stream).map_err(value_error)?;
    Ok(Model { inner })
}

/// Resubstitution accuracy of a classifier on the dataset.
#[pyfunction]
#[pyo3(signature = (ds, family, cost=None, mix=None))]
fn resub_accuracy(ds: &Dataset, family: &str, cost: Option<f64>, mix: Option<f64>) -> PyResult<f64> {
    let spec = classifier_spec(family, cost, mix)?;
    Ok(accuracy::resub_accuracy(&ds.inner, &spec)
        .map_err(value_error)?
        .value)
}

/// Stratified (or plain) V-fold cross-validated accuracy.
#[pyfunction]
#[pyo3(signature = (ds, family, folds=4, balanced=true, seed=0, cost=None, mix=None))]
fn vfold_accuracy(
    ds: &Dataset,
    family: &str,
    folds: usize,
    balanced: bool,
    seed: u64,
    cost: Option<f64>,
    mix: Option<f64>,
) -> PyResult<f64> {
    let spec = classifier_spec(family, cost, mix)?;
    let mut rng = derive_stream(seed, &[0xf01d]).rng();
    let assignment =
        accuracy::make_folds(&ds.inner, folds, balanced, &mut rng).map_err(value_error)?;
    Ok(accuracy::vfold_accuracy(&ds.inner, &spec, &assignment)
        .map_err(value_error)?
        .value)
}

/// Leave-one-out bootstrap accuracy with `samples` resamples.
#[pyfunction]
#[pyo3(signature = (ds, family, samples=10, seed=0, cost=None, mix=None))]
fn bloo_accuracy(
    ds: &Dataset,
    family: &str,
    samples: usize,
    seed: u64,
    cost: Option<f64>,
    mix: Option<f64>,
) -> PyResult<f64> {
    let spec = classifier_spec(family, cost, mix)?;
    let mut rng = derive_stream(seed, &[0xb100]).rng();
    Ok(accuracy::bloo_accuracy(&ds.inner, &spec, samples, &mut rng)
        .map_err(value_error)?
        .value)
}

/// Permutation test of a catalog statistic against label permutations.
#[pyfunction]
#[pyo3(signature = (ds, statistic, permutations=300, seed=0, refold=true, folds=4, balanced=true, oracle_sigma=None))]
#[allow(clippy::too_many_arguments)]
fn permutation_test(
    ds: &Dataset,
    statistic: &str,
    permutations: u32,
    seed: u64,
    refold: bool,
    folds: usize,
    balanced: bool,
    oracle_sigma: Option<Vec<Vec<f64>>>,
) -> PyResult<Report> {
    let folding = FoldingConfig { folds, balanced };
    let mut spec = StatisticSpec::from_name(statistic, folding).map_err(value_error)?;
    if let Some(sigma) = oracle_sigma {
        spec = spec
            .with_oracle_sigma(&square_matrix(&sigma)?)
            .map_err(value_error)?;
    }
    let policy = if refold {
        RefoldPolicy::RefoldPerPermutation
    } else {
        RefoldPolicy::FixedFolds
    };
    let stream = derive_stream(seed, &[0x9e57]);
    let inner = perm::permutation_test(&ds.inner, &spec, permutations, policy, &stream)
        .map_err(value_error)?;
    Ok(Report { inner })
}

/// Run the basic simulation grid (identity covariance, Gaussian noise,
/// constant-direction shift; `mixture=True` switches to the mixture model
/// with the effects read as mixing weights). Returns one
/// `(statistic, effect, power, mc_se, rejections, replications)` tuple per
/// cell.
#[pyfunction]
#[pyo3(signature = (n, p, effects, statistics, replications=100, permutations=100, seed=0, alpha=0.05, mixture=false, student_t_df=None))]
#[allow(clippy::too_many_arguments)]
fn run_power(
    n: usize,
    p: usize,
    effects: Vec<f64>,
    statistics: Vec<String>,
    replications: u32,
    permutations: u32,
    seed: u64,
    alpha: f64,
    mixture: bool,
    student_t_df: Option<f64>,
) -> PyResult<Vec<(String, f64, f64, f64, u32, u32)>> {
    let mut rows = Vec::new();
    for effect in effects {
        let signal = if mixture {
            SignalModel::Mixture {
                weight: effect,
                scale: 3.0,
            }
        } else {
            SignalModel::Shift(SignalSpec {
                direction: SignalDirection::Constant,
                strength: effect,
                norm: NormMode::Mahalanobis,
            })
        };
        let cfg = ScenarioConfig {
            id: "python".into(),
            n,
            p,
            replications,
            permutations,
            alpha,
            folds: 4,
            balanced_folds: true,
            refold: true,
            pvalue_mode: PvalueMode::PaperExact,
            tie_break: false,
            noise: match student_t_df {
                Some(df) => NoiseSpec::StudentT { df },
                None => NoiseSpec::Gaussian,
            },
            covariance: CovarianceSpec::Identity,
            signal,
            statistics: statistics.clone(),
        };
        let report = harness::run_scenario(&cfg, seed).map_err(value_error)?;
        for row in report.rows {
            rows.push((
                row.statistic,
                row.effect,
                row.power,
                row.mc_se,
                row.rejections,
                row.replications,
            ));
        }
    }
    Ok(rows)
}

#[pymodule]
fn permutest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<Model>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(statistic_names, m)?)?;
    m.add_function(wrap_pyfunction!(location_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(fit_classifier, m)?)?;
    m.add_function(wrap_pyfunction!(resub_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(vfold_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(bloo_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_test, m)?)?;
    m.add_function(wrap_pyfunction!(run_power, m)?)?;
    Ok(())
}
