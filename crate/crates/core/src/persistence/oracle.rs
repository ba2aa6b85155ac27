//! Betti numbers computed directly from a pixel set, independent of any reduction.

use super::diagram::BettiPair;
use crate::image::LevelSet;

/// `β0` by 8-connected union-find, `β1 = β0 − χ` with `χ` counted on the filled squares.
pub fn oracle_betti(set: &LevelSet) -> BettiPair {
    let beta0 = components_8(set);
    let chi = euler_characteristic(set);
    BettiPair {
        beta0,
        beta1: (beta0 as i64 - chi) as usize,
    }
}

pub fn components_8(set: &LevelSet) -> usize {
    let (w, h) = set.grid().dims();
    let mut parent: Vec<usize> = (0..w * h).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mask = set.mask();
    for y in 0..h {
        for x in 0..w {
            if !mask[y * w + x] {
                continue;
            }
            for (dx, dy) in [(1i64, 0i64), (-1, 1), (0, 1), (1, 1)] {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if mask[j] {
                    let (a, b) = (find(&mut parent, y * w + x), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    (0..w * h)
        .filter(|&i| mask[i] && find(&mut parent, i) == i)
        .count()
}

/// `V − E + F` of the union of closed unit squares at the set's pixels.
pub fn euler_characteristic(set: &LevelSet) -> i64 {
    let (w, h) = set.grid().dims();
    let (cols, rows) = (2 * w + 1, 2 * h + 1);
    let mut present = vec![false; cols * rows];
    for (x, y) in set.points() {
        for cy in 2 * y..=2 * y + 2 {
            for cx in 2 * x..=2 * x + 2 {
                present[cy * cols + cx] = true;
            }
        }
    }
    let mut chi = 0i64;
    for cy in 0..rows {
        for cx in 0..cols {
            if present[cy * cols + cx] {
                chi += if (cx + cy) % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    chi
}
