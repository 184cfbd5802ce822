//! The labeled two-class dataset all statistics operate on.

use crate::error::{Error, Result};

/// An immutable n x p feature matrix with binary class labels.
///
/// Rows are observations. Construction validates shape, finiteness, and that
/// both classes are present; `n` and `p` never change afterwards, so a
/// dataset can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<f64>, // row-major, n * p
    labels: Vec<u8>,
    n: usize,
    p: usize,
    n0: usize,
    n1: usize,
}

impl LabeledDataset {
    /// Validate and build a dataset from a rectangular feature matrix.
    pub fn from_rows(rows: &[Vec<f64>], labels: &[u8]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::ShapeMismatch {
                rows: rows.len(),
                labels: labels.len(),
            });
        }
        let p = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != p {
                return Err(Error::RaggedRow {
                    row: i,
                    got: r.len(),
                    expected: p,
                });
            }
        }
        let mut flat = Vec::with_capacity(rows.len() * p);
        for r in rows {
            flat.extend_from_slice(r);
        }
        Self::from_flat(flat, labels.to_vec(), p)
    }

    /// Build from an already-flat row-major buffer of length `labels.len() * p`.
    pub fn from_flat(features: Vec<f64>, labels: Vec<u8>, p: usize) -> Result<Self> {
        let n = labels.len();
        if p == 0 || features.len() != n * p {
            return Err(Error::ShapeMismatch {
                rows: if p == 0 { 0 } else { features.len() / p },
                labels: n,
            });
        }
        if n < 4 {
            return Err(Error::TooFewObservations { n });
        }
        for (idx, &v) in features.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / p,
                    col: idx % p,
                });
            }
        }
        let n1 = labels.iter().filter(|&&y| y != 0).count();
        let n0 = n - n1;
        if n0 == 0 {
            return Err(Error::EmptyClass { class: 0 });
        }
        if n1 == 0 {
            return Err(Error::EmptyClass { class: 1 });
        }
        // Normalize labels to {0, 1}.
        let labels = labels.into_iter().map(|y| u8::from(y != 0)).collect();
        Ok(LabeledDataset {
            features,
            labels,
            n,
            p,
            n0,
            n1,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Count of class-0 observations.
    pub fn n0(&self) -> usize {
        self.n0
    }

    /// Count of class-1 observations.
    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Observation `i` as a feature slice of length `p`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.p..(i + 1) * self.p]
    }

    /// Flat row-major feature buffer.
    pub fn features(&self) -> &[f64] {
        &self.features
    }
}

/// Validate `(features, labels)` and construct a dataset.
pub fn validate_dataset(features: &[Vec<f64>], labels: &[u8]) -> Result<LabeledDataset> {
    LabeledDataset::from_rows(features, labels)
}
