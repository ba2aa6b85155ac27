use super::complex::{CellDim, CubicalComplex};
use super::diagram::{Death, PersistenceDiagram, PersistencePair};

/// Strategy for the boundary-matrix reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// Squares reduced with clearing, dimension 0 by union-find under the elder rule.
    #[default]
    Fast,
    /// Standard column reduction of every column.
    Full,
}

pub fn compute_persistence(complex: &CubicalComplex) -> PersistenceDiagram {
    compute_persistence_with(complex, Reduction::Fast)
}

pub fn compute_persistence_with(complex: &CubicalComplex, strategy: Reduction) -> PersistenceDiagram {
    let order = complex.order();
    let (cols, rows) = complex.cell_grid();
    let mut rank = vec![u32::MAX; cols * rows];
    for (k, &id) in order.iter().enumerate() {
        rank[id as usize] = k as u32;
    }
    let pos = |k: u32| complex.position(order[k as usize]).unwrap();
    let column = |k: u32| -> Vec<u32> {
        let mut col: Vec<u32> = complex
            .boundary(order[k as usize])
            .into_iter()
            .map(|f| rank[f as usize])
            .collect();
        col.sort_unstable();
        col
    };

    let n = order.len();
    // paired[k]: the cell of lower (birth) or higher (death) dimension matched with k
    let mut partner = vec![u32::MAX; n];

    let reduce_dim = |dim: CellDim, partner: &mut Vec<u32>, clear: bool| {
        let mut owner: Vec<u32> = vec![u32::MAX; n];
        let mut reduced: Vec<Vec<u32>> = Vec::new();
        let mut slot: Vec<u32> = vec![u32::MAX; n];
        for k in 0..n as u32 {
            if complex.dim(order[k as usize]) != dim {
                continue;
            }
            if clear && partner[k as usize] != u32::MAX {
                continue;
            }
            let mut col = column(k);
            while let Some(&low) = col.last() {
                let o = owner[low as usize];
                if o == u32::MAX {
                    break;
                }
                col = xor(&col, &reduced[slot[o as usize] as usize]);
            }
            if let Some(&low) = col.last() {
                owner[low as usize] = k;
                slot[k as usize] = reduced.len() as u32;
                reduced.push(col);
                partner[low as usize] = k;
                partner[k as usize] = low;
            }
        }
    };

    reduce_dim(CellDim::Square, &mut partner, false);
    match strategy {
        Reduction::Full => reduce_dim(CellDim::Edge, &mut partner, true),
        Reduction::Fast => elder_rule(complex, &rank, &mut partner),
    }

    let mut pairs = Vec::new();
    for k in 0..n as u32 {
        let p = partner[k as usize];
        let dim = complex.dim(order[k as usize]) as u8;
        if p == u32::MAX {
            pairs.push(PersistencePair {
                dim,
                birth: pos(k),
                death: Death::Never,
            });
        } else if p > k {
            let (b, d) = (pos(k), pos(p));
            if b != d {
                pairs.push(PersistencePair {
                    dim,
                    birth: b,
                    death: Death::At(d),
                });
            }
        }
    }
    PersistenceDiagram::new(pairs, complex.labels().to_vec())
}

fn elder_rule(complex: &CubicalComplex, rank: &[u32], partner: &mut [u32]) {
    let order = complex.order();
    let n = order.len();
    // root of each vertex rank; roots hold the oldest vertex of their component
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            let up = parent[parent[v as usize] as usize];
            parent[v as usize] = up;
            v = up;
        }
        v
    }
    for k in 0..n as u32 {
        let id = order[k as usize];
        if complex.dim(id) != CellDim::Edge || partner[k as usize] != u32::MAX {
            continue;
        }
        let b = complex.boundary(id);
        let ru = find(&mut parent, rank[b[0] as usize]);
        let rv = find(&mut parent, rank[b[1] as usize]);
        if ru == rv {
            continue;
        }
        let (old, young) = if ru < rv { (ru, rv) } else { (rv, ru) };
        parent[young as usize] = old;
        partner[young as usize] = k;
        partner[k as usize] = young;
    }
}

fn xor(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
