use crate::filtration::OneParamFiltration;
use crate::image::LevelSet;

/// Cell dimension in a 2D cubical complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellDim {
    Vertex = 0,
    Edge = 1,
    Square = 2,
}

const ABSENT: u32 = u32::MAX;

/// Lower-star cubical complex on the doubled grid.
///
/// Cell `(cx, cy)` with `0 ≤ cx ≤ 2w`, `0 ≤ cy ≤ 2h` has dimension `(cx & 1) + (cy & 1)`;
/// pixel `(x, y)` is the square `(2x+1, 2y+1)`. Cell ids are row-major on that grid.
#[derive(Debug, Clone)]
pub struct CubicalComplex {
    cols: usize,
    rows: usize,
    labels: Vec<i32>,
    /// Filtration position per cell id, `ABSENT` when the cell never appears.
    position: Vec<u32>,
    /// Present cell ids sorted by (position, dimension, id).
    order: Vec<u32>,
}

impl CubicalComplex {
    pub fn build(filt: &OneParamFiltration) -> Self {
        let mut c = Self::from_sets(filt.sets());
        c.labels = filt.labels().to_vec();
        c
    }

    /// `sets` must be nested; positions are taken from the first set containing each pixel.
    pub fn from_sets(sets: &[LevelSet]) -> Self {
        let grid = *sets[0].grid();
        let (w, h) = (grid.width(), grid.height());
        let mut first = vec![ABSENT; w * h];
        for (k, set) in sets.iter().enumerate().rev() {
            for (slot, &inside) in first.iter_mut().zip(set.mask()) {
                if inside {
                    *slot = k as u32;
                }
            }
        }
        Self::from_pixel_positions(w, h, &first, sets.len())
    }

    fn from_pixel_positions(w: usize, h: usize, first: &[u32], levels: usize) -> Self {
        let (cols, rows) = (2 * w + 1, 2 * h + 1);
        let mut position = vec![ABSENT; cols * rows];
        for y in 0..h {
            for x in 0..w {
                let p = first[y * w + x];
                if p == ABSENT {
                    continue;
                }
                for cy in 2 * y..=2 * y + 2 {
                    let row = &mut position[cy * cols..(cy + 1) * cols];
                    for slot in &mut row[2 * x..=2 * x + 2] {
                        if p < *slot {
                            *slot = p;
                        }
                    }
                }
            }
        }

        // Counting sort by (position, dimension); ids stay ascending inside each bucket.
        let buckets = levels * 3;
        let mut counts = vec![0usize; buckets + 1];
        for (id, &p) in position.iter().enumerate() {
            if p != ABSENT {
                counts[p as usize * 3 + dim_of(id, cols) as usize + 1] += 1;
            }
        }
        for b in 0..buckets {
            counts[b + 1] += counts[b];
        }
        let mut order = vec![0u32; counts[buckets]];
        for (id, &p) in position.iter().enumerate() {
            if p != ABSENT {
                let b = p as usize * 3 + dim_of(id, cols) as usize;
                order[counts[b]] = id as u32;
                counts[b] += 1;
            }
        }
        Self {
            cols,
            rows,
            labels: (0..levels as i32).collect(),
            position,
            order,
        }
    }

    pub fn levels(&self) -> usize {
        self.labels.len()
    }

    /// Label of each filtration position.
    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Cell ids in filtration order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    #[inline]
    pub fn dim(&self, id: u32) -> CellDim {
        dim_of(id as usize, self.cols)
    }

    #[inline]
    pub fn position(&self, id: u32) -> Option<usize> {
        let p = self.position[id as usize];
        (p != ABSENT).then_some(p as usize)
    }

    /// Facets of a cell, by id. Vertices have none.
    pub fn boundary(&self, id: u32) -> Vec<u32> {
        let id = id as usize;
        let (cx, cy) = (id % self.cols, id / self.cols);
        let c = self.cols;
        match (cx & 1, cy & 1) {
            (1, 1) => vec![id - c, id - 1, id + 1, id + c],
            (1, 0) => vec![id - 1, id + 1],
            (0, 1) => vec![id - c, id + c],
            _ => vec![],
        }
        .into_iter()
        .map(|i| i as u32)
        .collect()
    }

    /// Cell counts `(V, E, F)` present at position `m` or earlier.
    pub fn counts_at(&self, m: usize) -> (usize, usize, usize) {
        let mut counts = [0usize; 3];
        for &id in &self.order {
            if self.position[id as usize] as usize > m {
                break;
            }
            counts[self.dim(id) as usize] += 1;
        }
        (counts[0], counts[1], counts[2])
    }

    /// `V − E + F` of the sub-complex at position `m`.
    pub fn euler_characteristic_at(&self, m: usize) -> i64 {
        let (v, e, f) = self.counts_at(m);
        v as i64 - e as i64 + f as i64
    }

    /// `(cols, rows)` of the doubled cell grid.
    pub fn cell_grid(&self) -> (usize, usize) {
        (self.cols, self.rows)
    }
}

#[inline]
fn dim_of(id: usize, cols: usize) -> CellDim {
    match ((id % cols) & 1) + ((id / cols) & 1) {
        0 => CellDim::Vertex,
        1 => CellDim::Edge,
        _ => CellDim::Square,
    }
}
