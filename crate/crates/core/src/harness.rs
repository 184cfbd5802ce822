//! Orchestration: replications x permutations x statistics, reduced into
//! power estimates with Monte Carlo standard errors.
//!
//! Stream layout under the master seed: each scenario derives a root at
//! `[salt]` where `salt` hashes `(id, effect)`; replication `i` owns
//! `[salt, 0, i]` with children `[0]` (dataset), `[1]` (permutation battery,
//! see the engine's layout), and `[2, s]` (tie-break variate of statistic
//! `s`). Replications run in parallel and are reduced in index order, so a
//! report is a pure function of `(config, master_seed)` whatever the thread
//! count.

use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{decide, permutation_battery, RefoldPolicy};
use crate::rng::{fnv1a64, mix64, RngStream};
use crate::simgen::{PreparedScenario, ScenarioConfig};
use crate::statistic::{FoldingConfig, StatisticSpec};

/// One `(statistic, effect)` cell of a power table.
#[derive(Debug, Clone)]
pub struct PowerRow {
    pub scenario: String,
    pub statistic: String,
    pub effect: f64,
    pub replications: u32,
    pub rejections: u32,
    /// `rejections / replications`.
    pub power: f64,
    /// Binomial Monte Carlo standard error `sqrt(power (1-power) / reps)`.
    pub mc_se: f64,
    /// Mean wall time this statistic's permutation run took per replication.
    pub mean_eval_time: Duration,
}

/// Power rows produced under a single master seed.
#[derive(Debug, Clone, Default)]
pub struct PowerReport {
    pub master_seed: u64,
    pub rows: Vec<PowerRow>,
}

impl PowerReport {
    pub fn merge(&mut self, other: PowerReport) {
        debug_assert!(self.rows.is_empty() || self.master_seed == other.master_seed);
        self.master_seed = other.master_seed;
        self.rows.extend(other.rows);
    }

    pub fn find(&self, statistic: &str, effect: f64) -> Option<&PowerRow> {
        self.rows
            .iter()
            .find(|row| row.statistic == statistic && row.effect == effect)
    }
}

/// Salt separating this scenario's streams from other grid cells run under
/// the same master seed.
fn scenario_salt(cfg: &ScenarioConfig) -> u64 {
    fnv1a64(cfg.id.as_bytes()) ^ mix64(cfg.signal.effect().to_bits())
}

/// Run one scenario cell: for every replication draw a dataset, run the
/// shared-permutation battery, decide at `alpha`, and tally rejections.
pub fn run_scenario(cfg: &ScenarioConfig, master_seed: u64) -> Result<PowerReport> {
    let prepared = PreparedScenario::new(cfg.clone())?;
    let folding = FoldingConfig {
        folds: cfg.folds,
        balanced: cfg.balanced_folds,
    };
    let stats: Vec<StatisticSpec> = cfg
        .statistics
        .iter()
        .map(|name| {
            StatisticSpec::from_name(name, folding)?.with_oracle_sigma(&prepared.sigma)
        })
        .collect::<Result<_>>()?;
    if cfg.replications == 0 {
        return Ok(PowerReport {
            master_seed,
            rows: Vec::new(),
        });
    }
    let policy = if cfg.refold {
        RefoldPolicy::RefoldPerPermutation
    } else {
        RefoldPolicy::FixedFolds
    };
    let root = RngStream::root(master_seed).derive(&[scenario_salt(cfg)]);

    let replication = |rep: u32| -> Result<Vec<(bool, Duration)>> {
        let rep_stream = root.derive(&[0, u64::from(rep)]);
        let ds = prepared.draw(&rep_stream.derive(&[0]));
        let outcomes = permutation_battery(
            &ds,
            &stats,
            cfg.permutations,
            policy,
            &rep_stream.derive(&[1]),
        )
        .map_err(|source| Error::ReplicationFailed {
            replication: rep,
            source: Box::new(source),
        })?;
        Ok(outcomes
            .iter()
            .enumerate()
            .map(|(s, outcome)| {
                let u: f64 = rep_stream.derive(&[2, s as u64]).rng().random();
                let decision =
                    decide(&outcome.report, cfg.alpha, cfg.pvalue_mode, cfg.tie_break, u);
                (decision.rejected, outcome.eval_time)
            })
            .collect())
    };

    let per_rep: Vec<Result<Vec<(bool, Duration)>>> =
        (0..cfg.replications).into_par_iter().map(replication).collect();

    let mut rejections = vec![0u32; stats.len()];
    let mut eval_time = vec![Duration::ZERO; stats.len()];
    for outcome in per_rep {
        let decisions = outcome?;
        for (s, (rejected, time)) in decisions.into_iter().enumerate() {
            if rejected {
                rejections[s] += 1;
            }
            eval_time[s] += time;
        }
    }

    let reps = cfg.replications;
    let rows = stats
        .iter()
        .zip(rejections)
        .zip(eval_time)
        .map(|((spec, rej), time)| {
            let power = f64::from(rej) / f64::from(reps);
            PowerRow {
                scenario: cfg.id.clone(),
                statistic: spec.name(),
                effect: cfg.signal.effect(),
                replications: reps,
                rejections: rej,
                power,
                mc_se: (power * (1.0 - power) / f64::from(reps)).sqrt(),
                mean_eval_time: time / reps,
            }
        })
        .collect();
    Ok(PowerReport { master_seed, rows })
}

/// Paired-design power difference with a conservative unpaired standard
/// error: the battery shares permutations within a replication, which can
/// only reduce the variance of the difference below the reported `se`.
pub fn compare_powers(
    report: &PowerReport,
    stat_a: &str,
    stat_b: &str,
    effect: f64,
) -> Result<(f64, f64)> {
    let cell = |name: &str| {
        report.find(name, effect).ok_or(Error::MissingCell {
            statistic: name.to_string(),
            effect,
        })
    };
    let a = cell(stat_a)?;
    let b = cell(stat_b)?;
    let diff = a.power - b.power;
    let se = (a.power * (1.0 - a.power) / f64::from(a.replications)
        + b.power * (1.0 - b.power) / f64::from(b.replications))
    .sqrt();
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok((diff, z))
}
