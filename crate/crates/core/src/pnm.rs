//! Netpbm codecs: PGM (P2/P5) grayscale and PPM (P6) color, 8-bit only.
//!
//! Binary images are stored as PGM with values `{0, 255}` and decoded by mapping 255 to 1.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::image::{BinaryImage, GrayImage, PixelGrid, RgbImage};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("unknown magic number {0:?}")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("maxval {0} out of range 1..=65535")]
    MaxvalOutOfRange(u64),
    #[error("unsupported maxval {0}: only 8-bit images (maxval ≤ 255) are supported")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u64, maxval: u32 },
    #[error("malformed ASCII sample {0:?}")]
    BadSample(String),
    #[error("expected a {expected} file, found {found}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("value {value} cannot be encoded with maxval 255")]
    ValueTooLarge { value: u32 },
    #[error("binary image pixel holds {value}; expected 0 or 255")]
    NotBinary { value: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmFormat {
    /// ASCII graymap.
    P2,
    /// Raw graymap.
    P5,
    /// Raw pixmap.
    P6,
}

impl PnmFormat {
    fn magic(self) -> &'static str {
        match self {
            PnmFormat::P2 => "P2",
            PnmFormat::P5 => "P5",
            PnmFormat::P6 => "P6",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl Decoded {
    fn kind(&self) -> &'static str {
        match self {
            Decoded::Gray(_) => "PGM",
            Decoded::Rgb(_) => "PPM",
        }
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.data.len() {
            let c = self.data[self.pos];
            if c == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, what: &str) -> Result<u64, PnmError> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PnmError::MalformedHeader(format!("missing {what}")));
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).unwrap_or("");
        text.parse()
            .map_err(|_| PnmError::MalformedHeader(format!("{what} {text:?} does not fit")))
    }
}

/// Decode a PGM (P2/P5) or PPM (P6) byte buffer.
pub fn decode(data: &[u8]) -> Result<Decoded, PnmError> {
    if data.len() < 2 {
        return Err(PnmError::MalformedHeader("missing magic number".into()));
    }
    let format = match &data[..2] {
        b"P2" => PnmFormat::P2,
        b"P5" => PnmFormat::P5,
        b"P6" => PnmFormat::P6,
        other => return Err(PnmError::BadMagic(String::from_utf8_lossy(other).into())),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PnmError::MalformedHeader(format!(
            "empty image {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(PnmError::MaxvalOutOfRange(maxval));
    }
    if maxval > 255 {
        return Err(PnmError::UnsupportedMaxval(maxval as u32));
    }
    let maxval = maxval as u32;
    let grid = PixelGrid::new(width as usize, height as usize)
        .map_err(|e| PnmError::MalformedHeader(e.to_string()))?;
    let n = grid.len();

    match format {
        PnmFormat::P2 => {
            let mut values = Vec::with_capacity(n);
            let text = &data[cur.pos..];
            for token in text
                .split(|c| c.is_ascii_whitespace())
                .filter(|t| !t.is_empty())
            {
                if values.len() == n {
                    break;
                }
                let s = std::str::from_utf8(token).unwrap_or("?");
                let value: u64 = s
                    .parse()
                    .map_err(|_| PnmError::BadSample(s.to_string()))?;
                if value > maxval as u64 {
                    return Err(PnmError::SampleOutOfRange { value, maxval });
                }
                values.push(value as u32);
            }
            if values.len() < n {
                return Err(PnmError::Truncated {
                    expected: n,
                    found: values.len(),
                });
            }
            Ok(Decoded::Gray(GrayImage::new(grid, values).expect("length checked")))
        }
        PnmFormat::P5 | PnmFormat::P6 => {
            // exactly one whitespace byte separates the header from the raster
            if cur.pos >= data.len() || !data[cur.pos].is_ascii_whitespace() {
                return Err(PnmError::Truncated {
                    expected: n,
                    found: 0,
                });
            }
            let raster = &data[cur.pos + 1..];
            let channels = if format == PnmFormat::P6 { 3 } else { 1 };
            let expected = n * channels;
            if raster.len() < expected {
                return Err(PnmError::Truncated {
                    expected,
                    found: raster.len(),
                });
            }
            if let Some(&v) = raster[..expected].iter().find(|&&v| v as u32 > maxval) {
                return Err(PnmError::SampleOutOfRange {
                    value: v as u64,
                    maxval,
                });
            }
            if channels == 1 {
                let values = raster[..n].iter().map(|&v| v as u32).collect();
                Ok(Decoded::Gray(GrayImage::new(grid, values).expect("length checked")))
            } else {
                let plane = |c: usize| {
                    let values = (0..n).map(|i| raster[3 * i + c] as u32).collect();
                    GrayImage::new(grid, values).expect("length checked")
                };
                Ok(Decoded::Rgb(
                    RgbImage::new(plane(0), plane(1), plane(2)).expect("same grid"),
                ))
            }
        }
    }
}

fn check_8bit(image: &GrayImage) -> Result<(), PnmError> {
    match image.values().iter().find(|&&v| v > 255) {
        Some(&value) => Err(PnmError::ValueTooLarge { value }),
        None => Ok(()),
    }
}

/// Encode a grayscale image as P2 or P5 with maxval 255.
pub fn encode_gray(image: &GrayImage, format: PnmFormat) -> Result<Vec<u8>, PnmError> {
    check_8bit(image)?;
    let mut out = format!(
        "{} {} {} 255\n",
        format.magic(),
        image.width(),
        image.height()
    )
    .into_bytes();
    match format {
        PnmFormat::P2 => {
            for row in image.values().chunks(image.width()) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PnmFormat::P5 => out.extend(image.values().iter().map(|&v| v as u8)),
        PnmFormat::P6 => {
            return Err(PnmError::WrongKind {
                expected: "PGM",
                found: "PPM",
            })
        }
    }
    Ok(out)
}

/// Encode a color image as P6 with maxval 255.
pub fn encode_rgb(image: &RgbImage) -> Result<Vec<u8>, PnmError> {
    let [r, g, b] = image.channels();
    for c in image.channels() {
        check_8bit(c)?;
    }
    let mut out = format!("P6 {} {} 255\n", r.width(), r.height()).into_bytes();
    for i in 0..r.values().len() {
        out.extend_from_slice(&[
            r.values()[i] as u8,
            g.values()[i] as u8,
            b.values()[i] as u8,
        ]);
    }
    Ok(out)
}

pub fn load_image(path: impl AsRef<Path>) -> crate::Result<Decoded> {
    let data = fs::read(path)?;
    Ok(decode(&data)?)
}

pub fn load_gray(path: impl AsRef<Path>) -> crate::Result<GrayImage> {
    match load_image(path)? {
        Decoded::Gray(g) => Ok(g),
        other => Err(PnmError::WrongKind {
            expected: "PGM",
            found: other.kind(),
        }
        .into()),
    }
}

pub fn load_rgb(path: impl AsRef<Path>) -> crate::Result<RgbImage> {
    match load_image(path)? {
        Decoded::Rgb(c) => Ok(c),
        other => Err(PnmError::WrongKind {
            expected: "PPM",
            found: other.kind(),
        }
        .into()),
    }
}

/// Load a `{0, 255}` PGM as a binary image.
pub fn load_binary(path: impl AsRef<Path>) -> crate::Result<BinaryImage> {
    let gray = load_gray(path)?;
    binary_from_pgm_values(gray)
}

pub fn binary_from_pgm_values(gray: GrayImage) -> crate::Result<BinaryImage> {
    if let Some(&value) = gray.values().iter().find(|&&v| v != 0 && v != 255) {
        return Err(PnmError::NotBinary { value }.into());
    }
    BinaryImage::try_from_gray(gray.map(|v| u32::from(v == 255)))
}

pub fn save_gray(image: &GrayImage, path: impl AsRef<Path>, format: PnmFormat) -> crate::Result<()> {
    fs::write(path, encode_gray(image, format)?)?;
    Ok(())
}

pub fn save_binary(image: &BinaryImage, path: impl AsRef<Path>) -> crate::Result<()> {
    save_gray(&image.to_gray_scaled(255), path, PnmFormat::P5)
}

pub fn save_rgb(image: &RgbImage, path: impl AsRef<Path>) -> crate::Result<()> {
    fs::write(path, encode_rgb(image)?)?;
    Ok(())
}
