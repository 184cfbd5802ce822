//! Dual coordinate descent for the L2-regularized L1-hinge linear SVM.
//!
//! Solves, over `w` in R^(p+1) with the bias carried by an appended
//! constant-1 feature,
//!
//! ```text
//! min_w  1/2 ||w||^2 + cost * sum_i max(0, 1 - y_i <w, xhat_i>)
//! ```
//!
//! via its dual `min_a 1/2 a'Qa - e'a, 0 <= a_i <= cost`, where
//! `Q_ij = y_i y_j <xhat_i, xhat_j>`. Coordinates are visited cyclically in
//! the order of the training rows (never shuffled), so a fit is a pure
//! function of its inputs. Coordinates locked at a bound by a strong
//! gradient are shrunk out of the sweep using the previous epoch's extreme
//! violations; when the working set converges it is reset to the full index
//! range, so the returned iterate always satisfies the tolerance over every
//! coordinate.
//!
//! Stopping rule: once a full-set epoch's largest projected-gradient
//! violation drops below [`SVM_TOL`], the iterate must also pass a
//! duality-gap certificate, `primal - dual <= GAP_RTOL * (1 + |primal|)`; if
//! it does not, the violation threshold is tightened tenfold and descent
//! continues. After [`SVM_MAX_EPOCHS`] epochs the current iterate is
//! returned with `converged = false`.

pub(crate) const SVM_TOL: f64 = 1e-4;
pub(crate) const GAP_RTOL: f64 = 1e-6;
pub(crate) const SVM_MAX_EPOCHS: usize = 10_000;

pub(crate) struct SvmModel {
    /// `p` feature weights followed by the bias.
    pub weights: Vec<f64>,
    /// Dual variables at termination, one per training row.
    pub alpha: Vec<f64>,
    pub converged: bool,
}

impl SvmModel {
    /// Dual objective `e'a - 1/2 ||w||^2` (the maximization form).
    pub fn dual_objective(&self) -> f64 {
        let reg: f64 = 0.5 * self.weights.iter().map(|x| x * x).sum::<f64>();
        self.alpha.iter().sum::<f64>() - reg
    }
}

/// Train on `m` rows stored flat in `features` (`m * p`, row-major) with
/// labels `y` in `{-1, +1}`.
pub(crate) fn train(features: &[f64], y: &[f64], p: usize, cost: f64) -> SvmModel {
    let m = y.len();
    debug_assert_eq!(features.len(), m * p);

    let mut alpha = vec![0.0f64; m];
    let mut w = vec![0.0f64; p + 1];
    // Q_ii = ||xhat_i||^2; at least 1 thanks to the constant feature.
    let qii: Vec<f64> = (0..m)
        .map(|k| {
            let row = &features[k * p..(k + 1) * p];
            1.0 + row.iter().map(|x| x * x).sum::<f64>()
        })
        .collect();

    let mut converged = false;
    let mut pg_tol = SVM_TOL;
    let mut active: Vec<usize> = (0..m).collect();
    let mut kept: Vec<usize> = Vec::with_capacity(m);
    // Shrinking thresholds: the previous epoch's extreme violations.
    let mut hi = f64::INFINITY;
    let mut lo = f64::NEG_INFINITY;
    for _ in 0..SVM_MAX_EPOCHS {
        let mut max_pg = f64::NEG_INFINITY;
        let mut min_pg = f64::INFINITY;
        kept.clear();
        for &k in &active {
            let row = &features[k * p..(k + 1) * p];
            let margin: f64 = w[p] + row.iter().zip(&w[..p]).map(|(x, wj)| x * wj).sum::<f64>();
            let g = y[k] * margin - 1.0;
            let pg = if alpha[k] == 0.0 {
                if g > hi {
                    continue; // locked at the lower bound; drop from the sweep
                }
                g.min(0.0)
            } else if alpha[k] == cost {
                if g < lo {
                    continue; // locked at the upper bound
                }
                g.max(0.0)
            } else {
                g
            };
            kept.push(k);
            max_pg = max_pg.max(pg);
            min_pg = min_pg.min(pg);
            if pg != 0.0 {
                let old = alpha[k];
                let new = (old - g / qii[k]).clamp(0.0, cost);
                if new != old {
                    alpha[k] = new;
                    let step = (new - old) * y[k];
                    for (wj, x) in w[..p].iter_mut().zip(row) {
                        *wj += step * x;
                    }
                    w[p] += step;
                }
            }
        }
        std::mem::swap(&mut active, &mut kept);
        let violation = max_pg.max(-min_pg).max(0.0);
        if violation < pg_tol {
            if active.len() < m {
                // Working set converged; verify against all coordinates.
                active.clear();
                active.extend(0..m);
                hi = f64::INFINITY;
                lo = f64::NEG_INFINITY;
                continue;
            }
            let primal = primal_objective(features, y, p, cost, &w);
            let reg: f64 = 0.5 * w.iter().map(|x| x * x).sum::<f64>();
            let dual = alpha.iter().sum::<f64>() - reg;
            if primal - dual <= GAP_RTOL * (1.0 + primal.abs()) {
                converged = true;
                break;
            }
            pg_tol *= 0.1;
        } else {
            hi = if max_pg > 0.0 { max_pg } else { f64::INFINITY };
            lo = if min_pg < 0.0 { min_pg } else { f64::NEG_INFINITY };
        }
    }
    SvmModel {
        weights: w,
        alpha,
        converged,
    }
}

/// Primal objective of a weight vector on the same training encoding.
pub(crate) fn primal_objective(features: &[f64], y: &[f64], p: usize, cost: f64, w: &[f64]) -> f64 {
    let m = y.len();
    let reg: f64 = 0.5 * w.iter().map(|x| x * x).sum::<f64>();
    let hinge: f64 = (0..m)
        .map(|k| {
            let row = &features[k * p..(k + 1) * p];
            let margin: f64 =
                w[p] + row.iter().zip(&w[..p]).map(|(x, wj)| x * wj).sum::<f64>();
            (1.0 - y[k] * margin).max(0.0)
        })
        .sum();
    reg + cost * hinge
}
