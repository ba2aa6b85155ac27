//! Pixel grids, grayscale and binary images, level sets and thresholding.
//!
//! Images are stored row-major with the origin at the top-left pixel. A pixel at
//! column `x`, row `y` corresponds to the lattice point `origin + (x, y)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rectangular pixel domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelGrid {
    width: usize,
    height: usize,
    origin: (i64, i64),
}

impl PixelGrid {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        Self::with_origin(width, height, (0, 0))
    }

    pub fn with_origin(width: usize, height: usize, origin: (i64, i64)) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyGrid { width, height });
        }
        Ok(Self {
            width,
            height,
            origin,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn origin(&self) -> (i64, i64) {
        self.origin
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Row-major index of `(x, y)` when it lies inside the grid.
    #[inline]
    pub fn checked_index(&self, x: i64, y: i64) -> Option<usize> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            None
        } else {
            Some(y as usize * self.width + x as usize)
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub(crate) fn ensure_same(&self, other: &PixelGrid) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }
}

/// Non-negative integer valued image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    grid: PixelGrid,
    values: Vec<u32>,
}

impl GrayImage {
    pub fn new(grid: PixelGrid, values: Vec<u32>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::BufferLength {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn filled(grid: PixelGrid, value: u32) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: PixelGrid, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for y in 0..grid.height() {
            for x in 0..grid.width() {
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &PixelGrid {
        &self.grid
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [u32] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.values[self.grid.index(x, y)]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u32) {
        let i = self.grid.index(x, y);
        self.values[i] = value;
    }

    pub fn max_value(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// `g⁻¹(0)`.
    pub fn zero_set(&self) -> LevelSet {
        LevelSet {
            grid: self.grid,
            mask: self.values.iter().map(|&v| v == 0).collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(u32) -> u32) -> GrayImage {
        GrayImage {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise `self - other`, saturating at zero.
    pub fn saturating_sub(&self, other: &GrayImage) -> Result<GrayImage> {
        self.grid.ensure_same(&other.grid)?;
        Ok(GrayImage {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a.saturating_sub(b))
                .collect(),
        })
    }

    pub fn pointwise_min(&self, other: &GrayImage) -> Result<GrayImage> {
        self.grid.ensure_same(&other.grid)?;
        Ok(GrayImage {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        })
    }

    /// Pointwise order `self ≤ other`.
    pub fn le(&self, other: &GrayImage) -> Result<bool> {
        image_le(self, other)
    }
}

/// Image with values in `{0, 1}`; 0 is black, 1 is white.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage(GrayImage);

impl BinaryImage {
    pub fn new(grid: PixelGrid, values: Vec<u32>) -> Result<Self> {
        Self::try_from_gray(GrayImage::new(grid, values)?)
    }

    pub fn try_from_gray(image: GrayImage) -> Result<Self> {
        if let Some((index, &value)) = image.values.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(Error::NotBinary { index, value });
        }
        Ok(Self(image))
    }

    pub fn white(grid: PixelGrid) -> Self {
        Self(GrayImage::filled(grid, 1))
    }

    pub fn black(grid: PixelGrid) -> Self {
        Self(GrayImage::filled(grid, 0))
    }

    /// Black exactly on `set`, white elsewhere.
    pub fn from_level_set(set: &LevelSet) -> Self {
        Self(GrayImage {
            grid: set.grid,
            values: set.mask.iter().map(|&b| u32::from(!b)).collect(),
        })
    }

    pub(crate) fn from_gray_unchecked(image: GrayImage) -> Self {
        debug_assert!(image.values.iter().all(|&v| v <= 1));
        Self(image)
    }

    pub fn as_gray(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_gray(self) -> GrayImage {
        self.0
    }

    pub fn grid(&self) -> &PixelGrid {
        &self.0.grid
    }

    pub fn values(&self) -> &[u32] {
        &self.0.values
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.0.get(x, y)
    }

    pub fn set(&mut self, x: usize, y: usize, white: bool) {
        self.0.set(x, y, u32::from(white));
    }

    pub fn zero_set(&self) -> LevelSet {
        self.0.zero_set()
    }

    pub fn is_all_black(&self) -> bool {
        self.0.values.iter().all(|&v| v == 0)
    }

    pub fn is_all_white(&self) -> bool {
        self.0.values.iter().all(|&v| v == 1)
    }

    /// Scale to `{0, max}` for display or export.
    pub fn to_gray_scaled(&self, max: u32) -> GrayImage {
        self.0.map(|v| v * max)
    }
}

/// Membership mask of a pixel subset, typically `g⁻¹(0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelSet {
    grid: PixelGrid,
    mask: Vec<bool>,
}

impl LevelSet {
    pub fn new(grid: PixelGrid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.len() {
            return Err(Error::BufferLength {
                expected: grid.len(),
                actual: mask.len(),
            });
        }
        Ok(Self { grid, mask })
    }

    pub fn empty(grid: PixelGrid) -> Self {
        Self {
            grid,
            mask: vec![false; grid.len()],
        }
    }

    pub fn full(grid: PixelGrid) -> Self {
        Self {
            grid,
            mask: vec![true; grid.len()],
        }
    }

    pub fn grid(&self) -> &PixelGrid {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.mask[self.grid.index(x, y)]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &LevelSet) -> Result<bool> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b))
    }

    pub fn intersection_count(&self, other: &LevelSet) -> Result<usize> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .mask
            .iter()
            .zip(&other.mask)
            .filter(|(&a, &b)| a && b)
            .count())
    }

    pub fn union_count(&self, other: &LevelSet) -> Result<usize> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self
            .mask
            .iter()
            .zip(&other.mask)
            .filter(|(&a, &b)| a || b)
            .count())
    }

    /// Member pixels as `(x, y)` in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.grid.width();
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }
}

/// Three-channel 8-bit color image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    channels: [GrayImage; 3],
}

impl RgbImage {
    pub fn new(red: GrayImage, green: GrayImage, blue: GrayImage) -> Result<Self> {
        red.grid().ensure_same(green.grid())?;
        red.grid().ensure_same(blue.grid())?;
        Ok(Self {
            channels: [red, green, blue],
        })
    }

    pub fn grid(&self) -> &PixelGrid {
        self.channels[0].grid()
    }

    pub fn channels(&self) -> &[GrayImage; 3] {
        &self.channels
    }

    pub fn into_channels(self) -> [GrayImage; 3] {
        self.channels
    }
}

/// Global threshold `τₜ`: black (0) where `g ≤ t`, white (1) otherwise.
pub fn threshold(g: &GrayImage, t: u32) -> BinaryImage {
    BinaryImage(g.map(|v| u32::from(v > t)))
}

/// `f⁻¹(0)` of a binary image.
pub fn zero_level_set(f: &BinaryImage) -> LevelSet {
    f.zero_set()
}

/// Pointwise partial order on images over the same grid.
pub fn image_le(f: &GrayImage, g: &GrayImage) -> Result<bool> {
    f.grid.ensure_same(&g.grid)?;
    Ok(f.values.iter().zip(&g.values).all(|(a, b)| a <= b))
}

pub const LEVEL_COUNT: usize = 256;

/// Pointwise sum of the 256 binary levels `τ₀(g), …, τ₂₅₅(g)` (or their denoised versions).
pub fn sum_binary_levels(levels: &[BinaryImage]) -> Result<GrayImage> {
    if levels.len() != LEVEL_COUNT {
        return Err(Error::LevelCount {
            expected: LEVEL_COUNT,
            actual: levels.len(),
        });
    }
    let grid = *levels[0].grid();
    let mut acc = vec![0u32; grid.len()];
    for level in levels {
        grid.ensure_same(level.grid())?;
        for (a, &v) in acc.iter_mut().zip(level.values()) {
            *a += v;
        }
    }
    GrayImage::new(grid, acc)
}

/// All 256 thresholds of an 8-bit image.
pub fn threshold_levels(g: &GrayImage) -> Vec<BinaryImage> {
    (0..LEVEL_COUNT as u32).map(|t| threshold(g, t)).collect()
}
