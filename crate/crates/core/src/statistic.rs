//! The unified statistic catalog: every named test statistic, location or
//! accuracy flavored, with a single evaluation entry point.

use nalgebra::DMatrix;

use crate::accuracy::{accuracy_with_plan, EstimatorSpec, ResamplingPlan};
use crate::classifier::ClassifierSpec;
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::location::{location_statistic_with, LocationStatName, LocationStatSpec};

/// An accuracy test statistic: a classifier plus an accuracy estimator.
#[derive(Debug, Clone)]
pub struct AccuracyStatSpec {
    pub classifier: ClassifierSpec,
    pub estimator: EstimatorSpec,
    /// Display name, kept from the catalog when parsed by name.
    label: Option<String>,
}

impl AccuracyStatSpec {
    pub fn new(classifier: ClassifierSpec, estimator: EstimatorSpec) -> Self {
        AccuracyStatSpec {
            classifier,
            estimator,
            label: None,
        }
    }

    fn labeled(classifier: ClassifierSpec, estimator: EstimatorSpec, label: &str) -> Self {
        AccuracyStatSpec {
            classifier,
            estimator,
            label: Some(label.to_string()),
        }
    }
}

/// A named, fully parameterized test statistic.
#[derive(Debug, Clone)]
pub enum StatisticSpec {
    Location(LocationStatSpec),
    Accuracy(AccuracyStatSpec),
}

/// Fold settings carried into `*.CV.*` catalog names.
#[derive(Debug, Clone, Copy)]
pub struct FoldingConfig {
    pub folds: usize,
    pub balanced: bool,
}

impl Default for FoldingConfig {
    fn default() -> Self {
        FoldingConfig {
            folds: 4,
            balanced: true,
        }
    }
}

impl StatisticSpec {
    pub fn location(name: LocationStatName) -> Self {
        StatisticSpec::Location(LocationStatSpec::new(name))
    }

    pub fn accuracy(classifier: ClassifierSpec, estimator: EstimatorSpec) -> Self {
        StatisticSpec::Accuracy(AccuracyStatSpec::new(classifier, estimator))
    }

    /// Canonical display name.
    pub fn name(&self) -> String {
        match self {
            StatisticSpec::Location(spec) => spec.name.as_str().to_string(),
            StatisticSpec::Accuracy(spec) => spec.label.clone().unwrap_or_else(|| {
                format!("{}.{}", spec.classifier.name(), spec.estimator.name())
            }),
        }
    }

    /// Whether evaluation consumes a resampling plan.
    pub fn needs_plan(&self) -> bool {
        matches!(
            self,
            StatisticSpec::Accuracy(AccuracyStatSpec {
                estimator: EstimatorSpec::VFold { .. } | EstimatorSpec::Bloo { .. },
                ..
            })
        )
    }

    /// Install the generative covariance on an oracle statistic; other
    /// statistics are returned unchanged.
    pub fn with_oracle_sigma(mut self, sigma: &DMatrix<f64>) -> Result<Self> {
        if let StatisticSpec::Location(spec) = &mut self {
            if spec.name == LocationStatName::Oracle {
                *spec = LocationStatSpec::oracle(sigma.clone())?;
            }
        }
        Ok(self)
    }

    /// Resolve a catalog name. `folding` fills in the fold count and balance
    /// for cross-validated entries.
    pub fn from_name(name: &str, folding: FoldingConfig) -> Result<Self> {
        let key = name.to_ascii_lowercase().replace('_', ".");
        let vfold = EstimatorSpec::VFold {
            folds: folding.folds,
            balanced: folding.balanced,
        };
        let svm = |cost: f64| ClassifierSpec::linear_svm(cost).expect("catalog cost");
        let spec = match key.as_str() {
            "oracle" => StatisticSpec::location(LocationStatName::Oracle),
            "hotelling" => StatisticSpec::location(LocationStatName::Hotelling),
            "hotelling.shrink" => StatisticSpec::location(LocationStatName::HotellingShrink),
            "goeman" => StatisticSpec::location(LocationStatName::Goeman),
            "sd" => StatisticSpec::location(LocationStatName::Sd),
            "lda.cv.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Lda,
                vfold,
                "lda.CV.1",
            )),
            "lda.nocv.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Lda,
                EstimatorSpec::Resub,
                "lda.noCV.1",
            )),
            "svm.cv.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(10.0),
                vfold,
                "svm.CV.1",
            )),
            "svm.cv.2" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(0.1),
                vfold,
                "svm.CV.2",
            )),
            "svm.cv.5" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(100.0),
                vfold,
                "svm.CV.5",
            )),
            "svm.cv.6" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(0.01),
                vfold,
                "svm.CV.6",
            )),
            "svm.nocv.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(10.0),
                EstimatorSpec::Resub,
                "svm.noCV.1",
            )),
            "svm.nocv.2" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(0.1),
                EstimatorSpec::Resub,
                "svm.noCV.2",
            )),
            "lda.boot.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Lda,
                EstimatorSpec::Bloo { samples: 10 },
                "lda.Boot.1",
            )),
            "svm.boot.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(10.0),
                EstimatorSpec::Bloo { samples: 10 },
                "svm.Boot.1",
            )),
            "svm.boot.2" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(0.1),
                EstimatorSpec::Bloo { samples: 10 },
                "svm.Boot.2",
            )),
            "svm.boot.3" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(10.0),
                EstimatorSpec::Bloo { samples: 50 },
                "svm.Boot.3",
            )),
            "svm.boot.4" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                svm(0.1),
                EstimatorSpec::Bloo { samples: 50 },
                "svm.Boot.4",
            )),
            "lda.highdim.1" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Dlda,
                vfold,
                "lda.highdim.1",
            )),
            "lda.highdim.2" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::hdrda(0.5).expect("catalog mix"),
                vfold,
                "lda.highdim.2",
            )),
            "lda.highdim.3" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Sdlda,
                vfold,
                "lda.highdim.3",
            )),
            "lda.highdim.4" => StatisticSpec::Accuracy(AccuracyStatSpec::labeled(
                ClassifierSpec::Sdlda,
                EstimatorSpec::Bloo { samples: 50 },
                "lda.highdim.4",
            )),
            _ => {
                return Err(Error::UnknownStatistic {
                    name: name.to_string(),
                })
            }
        };
        Ok(spec)
    }

    /// All catalog names, battery by battery.
    pub fn catalog_names() -> Vec<&'static str> {
        vec![
            "oracle",
            "hotelling",
            "hotelling.shrink",
            "goeman",
            "sd",
            "lda.CV.1",
            "lda.noCV.1",
            "svm.CV.1",
            "svm.CV.2",
            "svm.noCV.1",
            "svm.noCV.2",
            "lda.Boot.1",
            "svm.Boot.1",
            "svm.Boot.2",
            "svm.Boot.3",
            "svm.Boot.4",
            "svm.CV.5",
            "svm.CV.6",
            "lda.highdim.1",
            "lda.highdim.2",
            "lda.highdim.3",
            "lda.highdim.4",
        ]
    }

    /// The initial battery: five location statistics plus the six V-fold /
    /// resubstitution accuracy statistics.
    pub fn battery_initial(folding: FoldingConfig) -> Vec<StatisticSpec> {
        [
            "oracle",
            "hotelling",
            "hotelling.shrink",
            "goeman",
            "sd",
            "lda.CV.1",
            "lda.noCV.1",
            "svm.CV.1",
            "svm.CV.2",
            "svm.noCV.1",
            "svm.noCV.2",
        ]
        .iter()
        .map(|name| StatisticSpec::from_name(name, folding).expect("catalog name"))
        .collect()
    }
}

/// Evaluate a statistic on `labels` (observed or permuted) with a pre-drawn
/// resampling plan.
pub fn evaluate_statistic(
    ds: &LabeledDataset,
    labels: &[u8],
    spec: &StatisticSpec,
    plan: &ResamplingPlan,
) -> Result<f64> {
    match spec {
        StatisticSpec::Location(loc) => {
            Ok(location_statistic_with(ds, labels, loc)?.value)
        }
        StatisticSpec::Accuracy(acc) => {
            Ok(accuracy_with_plan(ds, labels, &acc.classifier, plan)?.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_names_parse_and_round_trip() {
        let folding = FoldingConfig::default();
        for name in StatisticSpec::catalog_names() {
            let spec = StatisticSpec::from_name(name, folding).unwrap();
            assert_eq!(spec.name(), name, "display name mismatch");
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        let err = StatisticSpec::from_name("svm.CV.99", FoldingConfig::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownStatistic { .. }));
    }

    #[test]
    fn aliases_with_underscores_parse() {
        let spec =
            StatisticSpec::from_name("hotelling_shrink", FoldingConfig::default()).unwrap();
        assert_eq!(spec.name(), "hotelling.shrink");
    }

    #[test]
    fn folding_config_reaches_cv_entries() {
        let folding = FoldingConfig {
            folds: 5,
            balanced: false,
        };
        match StatisticSpec::from_name("svm.CV.1", folding).unwrap() {
            StatisticSpec::Accuracy(acc) => {
                assert_eq!(
                    acc.estimator,
                    EstimatorSpec::VFold {
                        folds: 5,
                        balanced: false
                    }
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oracle_sigma_installation() {
        let spec = StatisticSpec::from_name("oracle", FoldingConfig::default()).unwrap();
        let sigma = DMatrix::identity(3, 3);
        let installed = spec.with_oracle_sigma(&sigma).unwrap();
        match installed {
            StatisticSpec::Location(loc) => assert!(loc.oracle_sigma.is_some()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
