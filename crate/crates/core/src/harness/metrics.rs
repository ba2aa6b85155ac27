use crate::error::Result;
use crate::image::{threshold, GrayImage, LevelSet, LEVEL_COUNT};

/// `|a ∩ b| / |a ∪ b|`, 1 when both are empty.
pub fn iou(a: &LevelSet, b: &LevelSet) -> Result<f64> {
    let union = a.union_count(b)?;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(a.intersection_count(b)? as f64 / union as f64)
}

/// Mean IOU of the black sets of `τ_t` over all 256 thresholds, empty levels included.
pub fn extended_iou(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.grid().ensure_same(b.grid())?;
    let mut total = 0.0;
    for t in 0..LEVEL_COUNT as u32 {
        total += iou(&threshold(a, t).zero_set(), &threshold(b, t).zero_set())?;
    }
    Ok(total / LEVEL_COUNT as f64)
}
