use thiserror::Error;

/// Errors raised by dataset validation, estimation, and the test engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("class {class} has no members")]
    EmptyClass { class: u8 },

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {rows} feature rows vs {labels} labels")]
    ShapeMismatch { rows: usize, labels: usize },

    #[error("dataset needs at least 4 observations, got {n}")]
    TooFewObservations { n: usize },

    #[error("feature matrix is not rectangular: row {row} has {got} values, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("matrix is not symmetric (max asymmetry {max_asym:e})")]
    NotSymmetric { max_asym: f64 },

    #[error("oracle statistic requires a generative covariance matrix")]
    MissingOracleSigma,

    #[error("oracle covariance must be {p}x{p}, got {rows}x{cols}")]
    OracleSigmaShape { p: usize, rows: usize, cols: usize },

    #[error("oracle covariance is not positive definite")]
    OracleSigmaNotPd,

    #[error("classifier cost must be positive, got {cost}")]
    NonPositiveCost { cost: f64 },

    #[error("hdrda mixing weight must lie in [0, 1], got {mix}")]
    BadHdrdaMix { mix: f64 },

    #[error("fold count {folds} exceeds the {n} observations")]
    TooManyFolds { folds: usize, n: usize },

    #[error("fold count must be at least 2, got {folds}")]
    TooFewFolds { folds: usize },

    #[error("bootstrap needs at least one sample")]
    NoBootstrapSamples,

    #[error("every bootstrap holdout was empty")]
    AllHoldoutsEmpty,

    #[error("training set contains a single class")]
    SingleClassTrainingSet,

    #[error("input has {got} coordinates, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("AR(1) correlation must satisfy -1 < rho < 1, got {rho}")]
    BadRho { rho: f64 },

    #[error("Mahalanobis signal calibration requires a non-singular covariance")]
    SingularSigma,

    #[error("unknown statistic name '{name}'")]
    UnknownStatistic { name: String },

    #[error("mixture weight must lie in [0, 1/2], got {weight}")]
    BadMixtureWeight { weight: f64 },

    #[error("scenario with class-balanced designs needs an even n, got {n}")]
    OddSampleSize { n: usize },

    #[error("permutation count must be at least 1")]
    NoPermutations,

    #[error("alpha must lie in (0, 1), got {alpha}")]
    BadAlpha { alpha: f64 },

    #[error("no power cell for statistic '{statistic}' at effect {effect}")]
    MissingCell { statistic: String, effect: f64 },

    #[error("replication {replication} failed: {source}")]
    ReplicationFailed {
        replication: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
