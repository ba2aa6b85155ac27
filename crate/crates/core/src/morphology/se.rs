use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Inclusive offset bounds of a rectangular structuring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x_lo: i32,
    pub x_hi: i32,
    pub y_lo: i32,
    pub y_hi: i32,
}

/// Flat structuring element: a finite offset set containing the origin.
///
/// Offsets are `(dx, dy)` with `dx` along columns and `dy` along rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i32, i32)>", into = "Vec<(i32, i32)>")]
pub struct StructuringElement {
    offsets: Vec<(i32, i32)>,
}

impl TryFrom<Vec<(i32, i32)>> for StructuringElement {
    type Error = Error;

    fn try_from(offsets: Vec<(i32, i32)>) -> Result<Self> {
        Self::new(offsets)
    }
}

impl From<StructuringElement> for Vec<(i32, i32)> {
    fn from(se: StructuringElement) -> Self {
        se.offsets
    }
}

impl StructuringElement {
    pub fn new(offsets: impl IntoIterator<Item = (i32, i32)>) -> Result<Self> {
        let set: BTreeSet<(i32, i32)> = offsets.into_iter().collect();
        if !set.contains(&(0, 0)) {
            return Err(Error::MissingOrigin);
        }
        Ok(Self {
            offsets: set.into_iter().collect(),
        })
    }

    pub fn origin() -> Self {
        Self {
            offsets: vec![(0, 0)],
        }
    }

    /// Full rectangle `[x_lo, x_hi] × [y_lo, y_hi]`; the bounds must straddle zero.
    pub fn rectangle(rect: Rect) -> Result<Self> {
        let mut offsets = Vec::new();
        for dx in rect.x_lo..=rect.x_hi {
            for dy in rect.y_lo..=rect.y_hi {
                offsets.push((dx, dy));
            }
        }
        Self::new(offsets)
    }

    /// The `(i+1) × (i+1)` square `Bᵢ` of the square family.
    pub fn square(i: usize) -> Self {
        let lo = -((i / 2) as i32);
        let hi = (i - i / 2) as i32;
        Self::rectangle(Rect {
            x_lo: lo,
            x_hi: hi,
            y_lo: lo,
            y_hi: hi,
        })
        .expect("square contains the origin")
    }

    /// Parse whitespace separated integer pairs, one `dx dy` pair per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut offsets = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let pair = match parts.as_slice() {
                [a, b] => a.parse::<i32>().ok().zip(b.parse::<i32>().ok()),
                _ => None,
            };
            match pair {
                Some(p) => offsets.push(p),
                None => {
                    return Err(Error::InvalidParams(format!(
                        "line {}: expected an integer pair, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(offsets)
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn contains(&self, offset: (i32, i32)) -> bool {
        self.offsets.binary_search(&offset).is_ok()
    }

    pub fn is_subset(&self, other: &StructuringElement) -> bool {
        self.offsets.iter().all(|&o| other.contains(o))
    }

    /// `-B`.
    pub fn reflect(&self) -> Self {
        Self::new(self.offsets.iter().map(|&(x, y)| (-x, -y))).expect("origin is self-reflected")
    }

    /// `B = -B`.
    pub fn is_symmetric(&self) -> bool {
        self.offsets.iter().all(|&(x, y)| self.contains((-x, -y)))
    }

    /// Bounds when the offsets fill their bounding box exactly.
    pub fn as_rect(&self) -> Option<Rect> {
        let x_lo = self.offsets.iter().map(|o| o.0).min()?;
        let x_hi = self.offsets.iter().map(|o| o.0).max()?;
        let y_lo = self.offsets.iter().map(|o| o.1).min()?;
        let y_hi = self.offsets.iter().map(|o| o.1).max()?;
        let area = (x_hi - x_lo + 1) as usize * (y_hi - y_lo + 1) as usize;
        (area == self.offsets.len()).then_some(Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }
}

/// Nested chain `B₀ ⊆ B₁ ⊆ … ⊆ Bₙ` with `B₀ = {(0,0)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeSequence {
    elements: Vec<StructuringElement>,
}

impl SeSequence {
    pub fn new(elements: Vec<StructuringElement>) -> Result<Self> {
        match elements.first() {
            None => return Err(Error::InvalidSequence("empty sequence".into())),
            Some(b0) if *b0 != StructuringElement::origin() => {
                return Err(Error::InvalidSequence(
                    "first element must be the origin".into(),
                ))
            }
            _ => {}
        }
        for (i, w) in elements.windows(2).enumerate() {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::InvalidSequence(format!(
                    "element {i} is not contained in element {}",
                    i + 1
                )));
            }
        }
        Ok(Self { elements })
    }

    /// `B₀, …, Bₙ` of the square family.
    pub fn square(n: usize) -> Self {
        Self {
            elements: (0..=n).map(StructuringElement::square).collect(),
        }
    }

    /// Largest index `n`.
    pub fn max_index(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Option<&StructuringElement> {
        self.elements.get(i)
    }

    pub fn elements(&self) -> &[StructuringElement] {
        &self.elements
    }

    /// Whether this is exactly the square family, which satisfies shift inclusion.
    pub fn is_square_family(&self) -> bool {
        self.elements
            .iter()
            .enumerate()
            .all(|(i, b)| *b == StructuringElement::square(i))
    }
}

impl std::ops::Index<usize> for SeSequence {
    type Output = StructuringElement;

    fn index(&self, i: usize) -> &StructuringElement {
        &self.elements[i]
    }
}
