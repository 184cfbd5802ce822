//! TOML run configurations: one file describes a scenario grid (a generative
//! model crossed with a list of effect sizes and a statistic battery).

use permutest_core::perm::PvalueMode;
use permutest_core::simgen::{
    CovarianceSpec, NoiseSpec, NormMode, PcPick, ScenarioConfig, SignalDirection, SignalModel,
    SignalSpec,
};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub id: String,
    pub n: usize,
    pub p: usize,
    #[serde(default = "defaults::replications")]
    pub replications: u32,
    #[serde(default = "defaults::permutations")]
    pub permutations: u32,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::folds")]
    pub folds: usize,
    #[serde(default = "defaults::yes")]
    pub balanced_folds: bool,
    #[serde(default = "defaults::yes")]
    pub refold: bool,
    /// Reproduction runs pin the plain-proportion p-value.
    #[serde(default = "defaults::pvalue_mode")]
    pub pvalue_mode: PvalueMode,
    #[serde(default)]
    pub tie_break: bool,
    pub effects: Vec<f64>,
    pub statistics: Vec<String>,
    #[serde(default = "defaults::noise")]
    pub noise: NoiseSpec,
    #[serde(default = "defaults::covariance")]
    pub covariance: CovarianceSpec,
    #[serde(default)]
    pub signal: SignalConfig,
}

mod defaults {
    use permutest_core::perm::PvalueMode;
    use permutest_core::simgen::{CovarianceSpec, NoiseSpec};

    pub fn replications() -> u32 {
        1000
    }
    pub fn permutations() -> u32 {
        300
    }
    pub fn alpha() -> f64 {
        0.05
    }
    pub fn folds() -> usize {
        4
    }
    pub fn yes() -> bool {
        true
    }
    pub fn pvalue_mode() -> PvalueMode {
        PvalueMode::PaperExact
    }
    pub fn noise() -> NoiseSpec {
        NoiseSpec::Gaussian
    }
    pub fn covariance() -> CovarianceSpec {
        CovarianceSpec::Identity
    }
}

/// The `[signal]` table. `kind = "constant" | "pc" | "mixture"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalConfig {
    Constant {
        #[serde(default = "default_norm")]
        norm: NormMode,
    },
    Pc {
        pc: PcField,
        #[serde(default = "default_norm")]
        norm: NormMode,
    },
    Mixture {
        #[serde(default = "default_mixture_scale")]
        scale: f64,
    },
}

fn default_norm() -> NormMode {
    NormMode::Mahalanobis
}

fn default_mixture_scale() -> f64 {
    3.0
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig::Constant {
            norm: default_norm(),
        }
    }
}

/// `pc = "highest" | "lowest" | <1-based rank>`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PcField {
    Rank(usize),
    Named(String),
}

impl PcField {
    fn resolve(&self) -> Result<PcPick, String> {
        match self {
            PcField::Rank(k) => Ok(PcPick::Index(*k)),
            PcField::Named(name) => match name.as_str() {
                "highest" => Ok(PcPick::Highest),
                "lowest" => Ok(PcPick::Lowest),
                other => Err(format!(
                    "signal.pc must be \"highest\", \"lowest\", or a 1-based rank; got \"{other}\""
                )),
            },
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if cfg.effects.is_empty() {
            return Err("effects list is empty".into());
        }
        Ok(cfg)
    }

    /// Expand the effect grid into per-cell scenario configurations.
    pub fn scenarios(&self) -> Result<Vec<ScenarioConfig>, String> {
        self.effects
            .iter()
            .map(|&effect| {
                let signal = match &self.signal {
                    SignalConfig::Constant { norm } => SignalModel::Shift(SignalSpec {
                        direction: SignalDirection::Constant,
                        strength: effect,
                        norm: *norm,
                    }),
                    SignalConfig::Pc { pc, norm } => SignalModel::Shift(SignalSpec {
                        direction: SignalDirection::Pc(pc.resolve()?),
                        strength: effect,
                        norm: *norm,
                    }),
                    SignalConfig::Mixture { scale } => SignalModel::Mixture {
                        weight: effect,
                        scale: *scale,
                    },
                };
                let cfg = ScenarioConfig {
                    id: self.id.clone(),
                    n: self.n,
                    p: self.p,
                    replications: self.replications,
                    permutations: self.permutations,
                    alpha: self.alpha,
                    folds: self.folds,
                    balanced_folds: self.balanced_folds,
                    refold: self.refold,
                    pvalue_mode: self.pvalue_mode,
                    tie_break: self.tie_break,
                    noise: self.noise,
                    covariance: self.covariance,
                    signal,
                    statistics: self.statistics.clone(),
                };
                cfg.validate().map_err(|e| e.to_string())?;
                Ok(cfg)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = RunConfig::parse(
            r#"
id = "demo"
n = 16
p = 4
effects = [0.0, 0.5]
statistics = ["goeman", "sd"]
"#,
        )
        .unwrap();
        assert_eq!(cfg.replications, 1000);
        assert_eq!(cfg.folds, 4);
        assert_eq!(cfg.pvalue_mode, PvalueMode::PaperExact);
        let scenarios = cfg.scenarios().unwrap();
        assert_eq!(scenarios.len(), 2);
        assert_eq!(scenarios[1].signal.effect(), 0.5);
    }

    #[test]
    fn pc_signal_with_rank() {
        let cfg = RunConfig::parse(
            r#"
id = "pc"
n = 16
p = 8
effects = [0.5]
statistics = ["hotelling"]

[covariance]
kind = "ar1"
rho = 0.6

[signal]
kind = "pc"
pc = 7
norm = "euclidean"
"#,
        )
        .unwrap();
        let scenarios = cfg.scenarios().unwrap();
        match scenarios[0].signal {
            SignalModel::Shift(spec) => {
                assert_eq!(spec.direction, SignalDirection::Pc(PcPick::Index(7)));
                assert_eq!(spec.norm, NormMode::Euclidean);
            }
            _ => panic!("expected a shift"),
        }
    }

    #[test]
    fn mixture_signal() {
        let cfg = RunConfig::parse(
            r#"
id = "mix"
n = 16
p = 4
effects = [0.0, 0.25, 0.5]
statistics = ["goeman"]

[signal]
kind = "mixture"
"#,
        )
        .unwrap();
        let scenarios = cfg.scenarios().unwrap();
        assert!(matches!(
            scenarios[2].signal,
            SignalModel::Mixture { weight, scale } if weight == 0.5 && scale == 3.0
        ));
    }

    #[test]
    fn unknown_fields_are_diagnosed() {
        let err = RunConfig::parse("id = \"x\"\nn = 16\np = 4\nbogus = 1\n").unwrap_err();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn bad_effect_grid_rejected() {
        let err = RunConfig::parse(
            "id = \"x\"\nn = 16\np = 4\neffects = []\nstatistics = [\"sd\"]\n",
        )
        .unwrap_err();
        assert!(err.contains("effects"), "{err}");
    }
}
