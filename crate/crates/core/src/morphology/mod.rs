//! Flat grayscale morphology on rectangular pixel domains.
//!
//! Windows are clipped to the image domain: `ε_B(g)(x) = min g((x + B) ∩ P)` and
//! `δ_B(g)(x) = max g((x − B) ∩ P)`. No padding value is ever introduced.
//! Rectangular elements take a separable sliding-window path that is bit-identical
//! to the direct window scan in [`erode_reference`] / [`dilate_reference`].

mod se;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use se::{Rect, SeSequence, StructuringElement};

use crate::image::{BinaryImage, GrayImage};

/// Morphological operators exposed by the CLI and the filtration builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphOp {
    Erode,
    Dilate,
    Open,
    Close,
    Wth,
    Bth,
    Sth,
}

impl MorphOp {
    pub fn apply(self, g: &GrayImage, b: &StructuringElement) -> GrayImage {
        match self {
            MorphOp::Erode => erode(g, b),
            MorphOp::Dilate => dilate(g, b),
            MorphOp::Open => open(g, b),
            MorphOp::Close => close(g, b),
            MorphOp::Wth => white_top_hat(g, b),
            MorphOp::Bth => black_top_hat(g, b),
            MorphOp::Sth => self_comp_top_hat(g, b),
        }
    }

    /// Binary in, binary out for every operator (top-hat residues of binaries stay in `{0,1}`).
    pub fn apply_binary(self, f: &BinaryImage, b: &StructuringElement) -> BinaryImage {
        BinaryImage::from_gray_unchecked(self.apply(f.as_gray(), b))
    }
}

impl std::str::FromStr for MorphOp {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Ok(match s {
            "erode" => MorphOp::Erode,
            "dilate" => MorphOp::Dilate,
            "open" => MorphOp::Open,
            "close" => MorphOp::Close,
            "wth" => MorphOp::Wth,
            "bth" => MorphOp::Bth,
            "sth" => MorphOp::Sth,
            other => {
                return Err(crate::Error::InvalidParams(format!(
                    "unknown morphological operator {other:?}"
                )))
            }
        })
    }
}

#[derive(Clone, Copy)]
enum Extreme {
    Min,
    Max,
}

impl Extreme {
    #[inline]
    fn dominates(self, a: u32, b: u32) -> bool {
        match self {
            Extreme::Min => a <= b,
            Extreme::Max => a >= b,
        }
    }

    #[inline]
    fn pick(self, a: u32, b: u32) -> u32 {
        match self {
            Extreme::Min => a.min(b),
            Extreme::Max => a.max(b),
        }
    }
}

/// Erosion `ε_B(g)(x) = min g((x + B) ∩ P)`.
pub fn erode(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    match b.as_rect() {
        Some(r) => separable(g, (r.x_lo, r.x_hi), (r.y_lo, r.y_hi), Extreme::Min),
        None => erode_reference(g, b),
    }
}

/// Dilation `δ_B(g)(x) = max g((x − B) ∩ P)`.
pub fn dilate(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    match b.as_rect() {
        Some(r) => separable(g, (-r.x_hi, -r.x_lo), (-r.y_hi, -r.y_lo), Extreme::Max),
        None => dilate_reference(g, b),
    }
}

/// Opening `δ_B ∘ ε_B`.
pub fn open(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    dilate(&erode(g, b), b)
}

/// Closing `ε_B ∘ δ_B`.
pub fn close(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    erode(&dilate(g, b), b)
}

/// `g − O_B(g)`.
pub fn white_top_hat(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    g.saturating_sub(&open(g, b)).expect("same grid")
}

/// `C_B(g) − g`.
pub fn black_top_hat(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    close(g, b).saturating_sub(g).expect("same grid")
}

/// `C_B(g) − O_B(g)`.
pub fn self_comp_top_hat(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    close(g, b).saturating_sub(&open(g, b)).expect("same grid")
}

/// Direct window scan for erosion, `O(|P|·|B|)`.
pub fn erode_reference(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    window_scan(g, b, 1, Extreme::Min)
}

/// Direct window scan for dilation, `O(|P|·|B|)`.
pub fn dilate_reference(g: &GrayImage, b: &StructuringElement) -> GrayImage {
    window_scan(g, b, -1, Extreme::Max)
}

fn window_scan(g: &GrayImage, b: &StructuringElement, sign: i64, ext: Extreme) -> GrayImage {
    let grid = *g.grid();
    GrayImage::from_fn(grid, |x, y| {
        b.offsets()
            .iter()
            .filter_map(|&(dx, dy)| {
                grid.checked_index(x as i64 + sign * dx as i64, y as i64 + sign * dy as i64)
            })
            .map(|i| g.values()[i])
            .reduce(|a, v| ext.pick(a, v))
            .expect("origin keeps the window non-empty")
    })
}

/// Row pass over `[x + dx_lo, x + dx_hi]`, then column pass over `[y + dy_lo, y + dy_hi]`,
/// each clipped to the domain. Min/max over a clipped rectangle factor exactly.
fn separable(g: &GrayImage, dx: (i32, i32), dy: (i32, i32), ext: Extreme) -> GrayImage {
    let (w, h) = (g.width(), g.height());
    let mut rows = vec![0u32; w * h];
    let mut deque = VecDeque::new();
    for y in 0..h {
        sliding(
            &g.values()[y * w..(y + 1) * w],
            &mut rows[y * w..(y + 1) * w],
            dx,
            ext,
            &mut deque,
        );
    }
    if dy == (0, 0) {
        return GrayImage::new(*g.grid(), rows).expect("same length");
    }
    let mut out = vec![0u32; w * h];
    let mut col = vec![0u32; h];
    let mut col_out = vec![0u32; h];
    for x in 0..w {
        for y in 0..h {
            col[y] = rows[y * w + x];
        }
        sliding(&col, &mut col_out, dy, ext, &mut deque);
        for y in 0..h {
            out[y * w + x] = col_out[y];
        }
    }
    GrayImage::new(*g.grid(), out).expect("same length")
}

/// `out[i] = ext(src[max(i+lo,0) ..= min(i+hi,n-1)])` using a monotone deque.
fn sliding(src: &[u32], out: &mut [u32], (lo, hi): (i32, i32), ext: Extreme, deque: &mut VecDeque<usize>) {
    let n = src.len() as i64;
    if lo == 0 && hi == 0 {
        out.copy_from_slice(src);
        return;
    }
    deque.clear();
    let mut next = 0i64;
    for i in 0..n {
        let right = (i + hi as i64).min(n - 1);
        let left = (i + lo as i64).max(0);
        while next <= right {
            let v = src[next as usize];
            while let Some(&back) = deque.back() {
                if ext.dominates(v, src[back]) {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next as usize);
            next += 1;
        }
        while let Some(&front) = deque.front() {
            if (front as i64) < left {
                deque.pop_front();
            } else {
                break;
            }
        }
        out[i as usize] = src[*deque.front().expect("window contains i")];
    }
}
