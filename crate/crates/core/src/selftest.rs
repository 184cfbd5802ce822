//! Fast subset of the property suite, callable from the command line.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::classifier::ClassifierSpec;
use crate::dataset::{validate_dataset, LabeledDataset};
use crate::location::{
    goeman_equivalence_check, location_statistic, LocationStatName, LocationStatSpec,
};
use crate::perm::{permutation_counts, round_sig12};
use crate::rng::derive_stream;
use crate::statistic::{evaluate_statistic, FoldingConfig, StatisticSpec};
use crate::stats::{pooled_covariance, solve_spd};

type Check = (&'static str, fn() -> Result<(), String>);

fn random_dataset(n: usize, p: usize, seed: u64) -> LabeledDataset {
    let mut rng = derive_stream(seed, &[0xfa57]).rng();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let labels: Vec<u8> = (0..n).map(|i| u8::from(i % 2 == 1)).collect();
    validate_dataset(&rows, &labels).unwrap()
}

fn check_rng_determinism() -> Result<(), String> {
    let a: Vec<u64> = derive_stream(9, &[1, 2]).rng().random_iter().take(8).collect();
    let b: Vec<u64> = derive_stream(9, &[1, 2]).rng().random_iter().take(8).collect();
    if a != b {
        return Err("identical streams disagreed".into());
    }
    let c: u64 = derive_stream(9, &[1, 3]).rng().random();
    if c == a[0] {
        return Err("sibling streams collided".into());
    }
    Ok(())
}

fn check_goeman_equivalence() -> Result<(), String> {
    let ds = random_dataset(14, 4, 1);
    let (a, b) = goeman_equivalence_check(&ds).map_err(|e| e.to_string())?;
    let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-12 {
        return Err(format!("forms differ by relative {rel:e}"));
    }
    Ok(())
}

fn check_sd_scalar_invariance() -> Result<(), String> {
    let ds = random_dataset(12, 3, 2);
    let scales = [4.0, -0.5, 12.5];
    let rows: Vec<Vec<f64>> = (0..ds.n())
        .map(|i| ds.row(i).iter().zip(scales).map(|(x, s)| x * s).collect())
        .collect();
    let rescaled = validate_dataset(&rows, ds.labels()).unwrap();
    let spec = LocationStatSpec::new(LocationStatName::Sd);
    let a = location_statistic(&ds, &spec).map_err(|e| e.to_string())?.value;
    let b = location_statistic(&rescaled, &spec)
        .map_err(|e| e.to_string())?
        .value;
    let rel = (a - b).abs() / a.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-10 {
        return Err(format!("sd moved by relative {rel:e} under rescaling"));
    }
    Ok(())
}

fn check_hotelling_affine_invariance() -> Result<(), String> {
    let ds = random_dataset(16, 3, 3);
    let a = DMatrix::from_row_slice(3, 3, &[1.5, 0.2, -0.7, 0.0, 2.0, 0.3, 0.1, -0.4, 1.1]);
    let shift = [2.0, -1.0, 0.5];
    let rows: Vec<Vec<f64>> = (0..ds.n())
        .map(|i| {
            let x = ds.row(i);
            (0..3)
                .map(|r| (0..3).map(|c| a[(r, c)] * x[c]).sum::<f64>() + shift[r])
                .collect()
        })
        .collect();
    let transformed = validate_dataset(&rows, ds.labels()).unwrap();
    let spec = LocationStatSpec::new(LocationStatName::Hotelling);
    let base = location_statistic(&ds, &spec).map_err(|e| e.to_string())?.value;
    let moved = location_statistic(&transformed, &spec)
        .map_err(|e| e.to_string())?
        .value;
    let rel = (base - moved).abs() / base.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-8 {
        return Err(format!("statistic moved by relative {rel:e}"));
    }
    Ok(())
}

fn check_oracle_identity_matches_goeman() -> Result<(), String> {
    let ds = random_dataset(10, 3, 4);
    let oracle = LocationStatSpec::oracle(DMatrix::identity(3, 3)).map_err(|e| e.to_string())?;
    let a = location_statistic(&ds, &oracle).map_err(|e| e.to_string())?.value;
    let b = location_statistic(&ds, &LocationStatSpec::new(LocationStatName::Goeman))
        .map_err(|e| e.to_string())?
        .value;
    if a != b {
        return Err(format!("oracle(I) = {a} but goeman = {b}"));
    }
    Ok(())
}

fn check_pooled_covariance_brute_force() -> Result<(), String> {
    let ds = random_dataset(11, 3, 5);
    let fast = pooled_covariance(&ds).matrix;
    let mut brute = DMatrix::zeros(3, 3);
    for class in [0u8, 1u8] {
        let idx: Vec<usize> = (0..ds.n()).filter(|&i| ds.labels()[i] == class).collect();
        let mut mean = [0.0f64; 3];
        for &i in &idx {
            for j in 0..3 {
                mean[j] += ds.row(i)[j] / idx.len() as f64;
            }
        }
        for &i in &idx {
            for a in 0..3 {
                for b in 0..3 {
                    brute[(a, b)] += (ds.row(i)[a] - mean[a]) * (ds.row(i)[b] - mean[b]);
                }
            }
        }
    }
    brute /= ds.n() as f64 - 2.0;
    let err = (&fast - &brute).amax();
    if err > 1e-12 * brute.amax().max(1.0) {
        return Err(format!("covariance mismatch {err:e}"));
    }
    Ok(())
}

fn check_pseudo_inverse_minimum_norm() -> Result<(), String> {
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    let v = DVector::from_row_slice(&[1.0, 1.0]);
    let s = solve_spd(&m, &v).map_err(|e| e.to_string())?;
    if !s.pseudo_inverse_used {
        return Err("rank-1 solve did not flag the pseudo-inverse".into());
    }
    if (s.solution[0] - 0.5).abs() > 1e-12 || (s.solution[1] - 0.5).abs() > 1e-12 {
        return Err(format!("minimum-norm solution was {:?}", s.solution));
    }
    Ok(())
}

fn check_svm_gap_certificate() -> Result<(), String> {
    for seed in 0..3u64 {
        let mut rng = derive_stream(seed, &[0x57e5]).rng();
        let feats: Vec<f64> = (0..12).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        for cost in [0.1, 10.0] {
            let model = crate::svm::train(&feats, &y, 2, cost);
            if !model.converged {
                return Err(format!("seed {seed} cost {cost}: no convergence"));
            }
            let primal = crate::svm::primal_objective(&feats, &y, 2, cost, &model.weights);
            let gap = primal - model.dual_objective();
            if gap > 1e-6 * (1.0 + primal.abs()) {
                return Err(format!("seed {seed} cost {cost}: gap {gap:e}"));
            }
        }
    }
    Ok(())
}

fn check_monotone_decision_invariance() -> Result<(), String> {
    let ds = random_dataset(12, 3, 6);
    let spec = StatisticSpec::from_name("goeman", FoldingConfig::default())
        .map_err(|e| e.to_string())?;
    let mut shuffler = derive_stream(6, &[0x0b5]).rng();
    let observed =
        evaluate_statistic(&ds, ds.labels(), &spec, &crate::accuracy::ResamplingPlan::None)
            .map_err(|e| e.to_string())?;
    let mut values = Vec::new();
    let mut labels = ds.labels().to_vec();
    for _ in 0..200 {
        crate::rng::shuffle(&mut labels, &mut shuffler);
        values.push(
            evaluate_statistic(&ds, &labels, &spec, &crate::accuracy::ResamplingPlan::None)
                .map_err(|e| e.to_string())?,
        );
    }
    let base = permutation_counts(observed, values.iter().copied());
    let affine = permutation_counts(2.0 * observed + 1.0, values.iter().map(|v| 2.0 * v + 1.0));
    let cubic = permutation_counts(observed.powi(3), values.iter().map(|v| v.powi(3)));
    if base != affine || base != cubic {
        return Err(format!("counts moved: {base:?} vs {affine:?} vs {cubic:?}"));
    }
    if round_sig12(0.1 + 0.2) != round_sig12(0.3) {
        return Err("canonical rounding failed to heal float noise".into());
    }
    Ok(())
}

/// Run every fast check, returning `(name, outcome)` pairs.
pub fn run_fast_checks() -> Vec<(&'static str, Result<(), String>)> {
    let checks: Vec<Check> = vec![
        ("rng determinism", check_rng_determinism),
        ("goeman equivalence", check_goeman_equivalence),
        ("sd scalar invariance", check_sd_scalar_invariance),
        ("hotelling affine invariance", check_hotelling_affine_invariance),
        ("oracle(identity) = goeman", check_oracle_identity_matches_goeman),
        ("pooled covariance brute force", check_pooled_covariance_brute_force),
        ("pseudo-inverse minimum norm", check_pseudo_inverse_minimum_norm),
        ("svm duality-gap certificate", check_svm_gap_certificate),
        ("monotone decision invariance", check_monotone_decision_invariance),
    ];
    checks
        .into_iter()
        .map(|(name, run)| (name, run()))
        .collect()
}

/// Classifier smoke check used by the bindings' test script.
pub fn classifier_families() -> Vec<ClassifierSpec> {
    vec![
        ClassifierSpec::Lda,
        ClassifierSpec::Dlda,
        ClassifierSpec::Sdlda,
        ClassifierSpec::hdrda(0.5).expect("valid mix"),
        ClassifierSpec::linear_svm(10.0).expect("valid cost"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fast_checks_pass() {
        for (name, outcome) in run_fast_checks() {
            assert!(outcome.is_ok(), "{name}: {:?}", outcome.err());
        }
    }
}
