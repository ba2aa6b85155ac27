//! Morphological filtrations of digital images and their persistent homology.
//!
//! The crate is organised bottom-up:
//!
//! * [`image`] and [`pnm`]: pixel grids, grayscale/binary images, thresholding and Netpbm I/O.
//! * [`morphology`]: flat structuring elements, erosion/dilation/opening/closing and top-hats.
//! * [`filtration`]: one-parameter filtrations built from those operators, the multi-index
//!   operator calculus and multiparameter families.
//! * [`persistence`]: cubical complexes over nested pixel sets, Z/2 persistence and diagrams.
//! * [`denoise`]: the persistence-guided alternating closing/opening denoiser for binary,
//!   grayscale and RGB images.
//! * [`harness`]: salt-and-pepper noise, IOU, synthetic ground truth and the benchmark runner.

pub mod denoise;
pub mod error;
pub mod filtration;
pub mod harness;
pub mod image;
pub mod morphology;
pub mod persistence;
pub mod pnm;

pub use error::{Error, Result};
pub use image::{BinaryImage, GrayImage, LevelSet, PixelGrid, RgbImage};
pub use morphology::{SeSequence, StructuringElement};
