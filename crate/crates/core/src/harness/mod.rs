//! Benchmark plumbing: noise, metrics, synthetic ground truth, the trial runner and reports.

mod bench;
mod metrics;
mod noise;
mod report;
mod svg;
mod synthetic;

pub use bench::{
    aggregate, run_benchmark, run_trial, trial_seeds, BenchmarkOutput, ExperimentConfig, TrialResult,
    DEFAULT_MAX_ITER, DEFAULT_SIZE_TOL,
};
pub use metrics::{extended_iou, iou};
pub use noise::{add_salt_pepper_binary, add_salt_pepper_gray, NoiseSpec, PRNG_IDENTITY};
pub use report::{parse_table_csv, table_csv, DensityRow, TABLE_HEADER};
pub use svg::diagram_svg;
pub use synthetic::{make_synthetic_truth, SYNTHETIC_BETTI, SYNTHETIC_SIZE};
