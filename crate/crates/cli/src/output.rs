//! Power-table CSV and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use permutest_core::harness::PowerReport;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Stable schema: `scenario,statistic,effect,replications,rejections,power,mc_se,seed`.
pub fn power_csv(report: &PowerReport) -> String {
    let mut out = String::from("scenario,statistic,effect,replications,rejections,power,mc_se,seed\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.scenario,
            row.statistic,
            row.effect,
            row.replications,
            row.rejections,
            row.power,
            row.mc_se,
            report.master_seed,
        ));
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

#[derive(Serialize)]
pub struct ManifestFile {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reconstruct a run: resolved config digest, seed, and
/// the emitted files with their content digests. Written last.
#[derive(Serialize)]
pub struct RunManifest {
    pub config: String,
    pub config_sha256: String,
    pub master_seed: u64,
    pub out_dir: String,
    pub threads: usize,
    pub files: Vec<ManifestFile>,
}

pub struct OutputWriter {
    dir: PathBuf,
    files: Vec<ManifestFile>,
}

impl OutputWriter {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(ManifestFile {
            path: name.to_string(),
            sha256: sha256_hex(contents),
        });
        Ok(path)
    }

    pub fn finish(self, config: &str, config_text: &str, master_seed: u64, threads: usize) -> Result<PathBuf> {
        let manifest = RunManifest {
            config: config.to_string(),
            config_sha256: sha256_hex(config_text.as_bytes()),
            master_seed,
            out_dir: self.dir.display().to_string(),
            threads,
            files: self.files,
        };
        let path = self.dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&manifest)?;
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
