use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const TABLE_HEADER: &str = "density,trials,noisy_iou_mean,noisy_iou_std,iou_mean,iou_std,\
beta0_mean,beta0_std,beta1_mean,beta1_std,modal_beta0,modal_beta1,modal_fraction";

/// Per-density summary: mean and sample standard deviation of each metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub density: f64,
    pub trials: usize,
    pub noisy_iou_mean: f64,
    pub noisy_iou_std: f64,
    pub iou_mean: f64,
    pub iou_std: f64,
    pub beta0_mean: f64,
    pub beta0_std: f64,
    pub beta1_mean: f64,
    pub beta1_std: f64,
    pub modal_beta0: usize,
    pub modal_beta1: usize,
    /// Share of trials whose Betti pair equals the modal one.
    pub modal_fraction: f64,
}

pub fn table_csv(rows: &[DensityRow]) -> String {
    let mut out = format!("{TABLE_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{:.4},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{},{},{:.4}",
            r.density,
            r.trials,
            r.noisy_iou_mean,
            r.noisy_iou_std,
            r.iou_mean,
            r.iou_std,
            r.beta0_mean,
            r.beta0_std,
            r.beta1_mean,
            r.beta1_std,
            r.modal_beta0,
            r.modal_beta1,
            r.modal_fraction
        )
        .expect("writing to a String");
    }
    out
}

pub fn parse_table_csv(text: &str) -> Result<Vec<DensityRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows = reader.deserialize().collect::<std::result::Result<Vec<DensityRow>, _>>()?;
    Ok(rows)
}
