use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage, PixelGrid};
use crate::persistence::BettiPair;

pub const SYNTHETIC_SIZE: usize = 190;
pub const SYNTHETIC_BETTI: BettiPair = BettiPair { beta0: 6, beta1: 5 };

type Rect = [usize; 4]; // x0, x1, y0, y1, half-open

/// Layout on the 190×190 base grid: blobs with an optional hole each.
const LAYOUT: [(Rect, Option<Rect>); 6] = [
    ([10, 53, 10, 85], Some([24, 39, 24, 44])),
    ([73, 116, 10, 85], Some([87, 102, 30, 65])),
    ([136, 180, 10, 85], Some([150, 166, 24, 71])),
    ([10, 53, 105, 180], Some([24, 39, 150, 166])),
    ([73, 116, 105, 180], Some([87, 102, 119, 166])),
    ([136, 180, 105, 180], None),
];

fn inside(r: &Rect, x: usize, y: usize) -> bool {
    (r[0]..r[1]).contains(&x) && (r[2]..r[3]).contains(&y)
}

/// White field with six black rectangles, five of them pierced by a rectangular hole.
/// Every blob, hole, wall and gap is at least 12 pixels across. Larger grids stretch the layout.
pub fn make_synthetic_truth(width: usize, height: usize) -> Result<BinaryImage> {
    if width < SYNTHETIC_SIZE || height < SYNTHETIC_SIZE {
        return Err(Error::InvalidParams(format!(
            "synthetic truth needs at least {SYNTHETIC_SIZE}x{SYNTHETIC_SIZE}, got {width}x{height}"
        )));
    }
    let grid = PixelGrid::new(width, height)?;
    let image = GrayImage::from_fn(grid, |x, y| {
        let (bx, by) = (x * SYNTHETIC_SIZE / width, y * SYNTHETIC_SIZE / height);
        let black = LAYOUT
            .iter()
            .any(|(blob, hole)| inside(blob, bx, by) && !hole.is_some_and(|h| inside(&h, bx, by)));
        u32::from(!black)
    });
    Ok(BinaryImage::from_gray_unchecked(image))
}
