use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::iou;
use super::noise::{add_salt_pepper_binary, NoiseSpec, PRNG_IDENTITY};
use super::report::{table_csv, DensityRow};
use super::synthetic::{make_synthetic_truth, SYNTHETIC_SIZE};
use crate::denoise::{denoise_binary, DenoiseParams, DenoiseTrace, StopPolicy};
use crate::error::{Error, Result};
use crate::image::BinaryImage;
use crate::persistence::oracle::oracle_betti;
use crate::persistence::BettiPair;
use crate::pnm;

pub const DEFAULT_SIZE_TOL: u32 = 5;
pub const DEFAULT_MAX_ITER: u32 = 10;

fn default_size_tol() -> u32 {
    DEFAULT_SIZE_TOL
}

fn default_max_iter() -> u32 {
    DEFAULT_MAX_ITER
}

fn default_truth() -> String {
    "synthetic".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub densities: Vec<f64>,
    pub trials: usize,
    #[serde(default = "default_size_tol")]
    pub size_tol: u32,
    #[serde(default = "default_max_iter")]
    pub max_iter: u32,
    /// `"synthetic"` or a path to a binary PGM.
    #[serde(default = "default_truth")]
    pub truth: String,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_max: Option<usize>,
    #[serde(default)]
    pub stop: StopPolicy,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.densities.is_empty() {
            return Err(Error::InvalidParams("at least one density is required".into()));
        }
        for &d in &self.densities {
            NoiseSpec::new(d, 0)?;
        }
        self.params().validate()
    }

    pub fn params(&self) -> DenoiseParams {
        let params = DenoiseParams::new(self.size_tol, self.max_iter).with_stop(self.stop);
        match self.se_max {
            Some(n) => params.with_se_max(n),
            None => params,
        }
    }

    /// Relative truth paths resolve against `base_dir`.
    pub fn load_truth(&self, base_dir: &Path) -> Result<BinaryImage> {
        if self.truth == "synthetic" {
            make_synthetic_truth(SYNTHETIC_SIZE, SYNTHETIC_SIZE)
        } else {
            pnm::load_binary(base_dir.join(&self.truth))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub density: f64,
    pub trial: usize,
    pub trial_seed: u64,
    /// IOU of the noisy image against the truth.
    pub noisy_iou: f64,
    /// IOU of the denoised image against the truth.
    pub iou: f64,
    pub betti: BettiPair,
    pub trace: DenoiseTrace,
}

/// `count` seeds drawn in order from a generator keyed by `master_seed`.
pub fn trial_seeds(master_seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

pub fn run_trial(
    truth: &BinaryImage,
    density: f64,
    trial: usize,
    trial_seed: u64,
    params: &DenoiseParams,
) -> Result<TrialResult> {
    let noisy = add_salt_pepper_binary(truth, NoiseSpec::new(density, trial_seed)?)?;
    let truth_set = truth.zero_set();
    let (out, trace) = denoise_binary(&noisy, params)?;
    let out_set = out.zero_set();
    Ok(TrialResult {
        density,
        trial,
        trial_seed,
        noisy_iou: iou(&truth_set, &noisy.zero_set())?,
        iou: iou(&truth_set, &out_set)?,
        betti: oracle_betti(&out_set),
        trace,
    })
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Summary of one density's trials. `results` must be non-empty.
pub fn aggregate(density: f64, results: &[TrialResult]) -> DensityRow {
    let (noisy_iou_mean, noisy_iou_std) = mean_std(results.iter().map(|r| r.noisy_iou));
    let (iou_mean, iou_std) = mean_std(results.iter().map(|r| r.iou));
    let (beta0_mean, beta0_std) = mean_std(results.iter().map(|r| r.betti.beta0 as f64));
    let (beta1_mean, beta1_std) = mean_std(results.iter().map(|r| r.betti.beta1 as f64));
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in results {
        *counts.entry((r.betti.beta0, r.betti.beta1)).or_default() += 1;
    }
    let (&(modal_beta0, modal_beta1), &top) = counts
        .iter()
        .fold(None, |best: Option<(&(usize, usize), &usize)>, kv| match best {
            Some((_, c)) if c >= kv.1 => best,
            _ => Some(kv),
        })
        .expect("at least one trial");
    DensityRow {
        density,
        trials: results.len(),
        noisy_iou_mean,
        noisy_iou_std,
        iou_mean,
        iou_std,
        beta0_mean,
        beta0_std,
        beta1_mean,
        beta1_std,
        modal_beta0,
        modal_beta1,
        modal_fraction: top as f64 / results.len() as f64,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutput {
    pub rows: Vec<DensityRow>,
    /// Every trial, ordered by density then trial index.
    pub trials: Vec<TrialResult>,
}

#[derive(Serialize)]
struct Meta<'a> {
    prng: &'a str,
    seed_derivation: &'a str,
    config: &'a ExperimentConfig,
    params: DenoiseParams,
    crate_version: &'a str,
}

impl BenchmarkOutput {
    pub fn table_csv(&self) -> String {
        table_csv(&self.rows)
    }

    pub fn traces_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.trials)?)
    }

    /// Writes `report.csv`, `traces.json` and `meta.json` into `dir`.
    pub fn write(&self, config: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let meta = Meta {
            prng: PRNG_IDENTITY,
            seed_derivation: "trial seed k = k-th next_u64 of ChaCha8Rng::seed_from_u64(master_seed), \
                              k = density_index * trials + trial",
            config,
            params: config.params(),
            crate_version: env!("CARGO_PKG_VERSION"),
        };
        let files = [
            ("report.csv", self.table_csv()),
            ("traces.json", self.traces_json()?),
            ("meta.json", serde_json::to_string_pretty(&meta)?),
        ];
        let mut paths = Vec::new();
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body)?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Runs every (density, trial) pair in parallel and aggregates in a fixed order.
pub fn run_benchmark(config: &ExperimentConfig, truth: &BinaryImage) -> Result<BenchmarkOutput> {
    config.validate()?;
    let params = config.params();
    let seeds = trial_seeds(config.master_seed, config.densities.len() * config.trials);
    let trials = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &seed)| {
            let density = config.densities[k / config.trials];
            run_trial(truth, density, k % config.trials, seed, &params)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = config
        .densities
        .iter()
        .zip(trials.chunks(config.trials))
        .map(|(&d, chunk)| aggregate(d, chunk))
        .collect();
    Ok(BenchmarkOutput { rows, trials })
}
