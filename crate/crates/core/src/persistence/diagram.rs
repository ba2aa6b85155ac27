use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Death position of a class; `Never` is the infinity sentinel for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Death {
    At(usize),
    Never,
}

impl Death {
    pub fn position(self) -> Option<usize> {
        match self {
            Death::At(d) => Some(d),
            Death::Never => None,
        }
    }

    fn after(self, m: usize) -> bool {
        match self {
            Death::At(d) => d > m,
            Death::Never => true,
        }
    }
}

/// Birth/death pair in filtration positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dim: u8,
    pub birth: usize,
    pub death: Death,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death == Death::Never
    }

    pub fn alive_at(&self, m: usize) -> bool {
        self.birth <= m && self.death.after(m)
    }
}

/// Pair expressed in the filtration's own index labels. `death == None` is the sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledPair {
    pub dim: u8,
    pub birth: i32,
    pub death: Option<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BettiPair {
    pub beta0: usize,
    pub beta1: usize,
}

impl BettiPair {
    pub fn new(beta0: usize, beta1: usize) -> Self {
        Self { beta0, beta1 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.beta0 as i64 - self.beta1 as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
    labels: Vec<i32>,
}

impl PersistenceDiagram {
    /// Pairs are sorted; `labels[p]` is the label of position `p`.
    pub fn new(mut pairs: Vec<PersistencePair>, labels: Vec<i32>) -> Self {
        pairs.sort_unstable();
        Self { pairs, labels }
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim(&self, k: u8) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.pairs.iter().filter(move |p| p.dim == k)
    }

    pub fn label(&self, position: usize) -> i32 {
        self.labels[position]
    }

    pub fn labeled_pair(&self, p: &PersistencePair) -> LabeledPair {
        LabeledPair {
            dim: p.dim,
            birth: self.labels[p.birth],
            death: p.death.position().map(|d| self.labels[d]),
        }
    }

    pub fn labeled(&self) -> Vec<LabeledPair> {
        self.pairs.iter().map(|p| self.labeled_pair(p)).collect()
    }

    /// Finite pairs as `(birth, death)` labels in dimension `k`.
    pub fn finite_labels(&self, k: u8) -> Vec<(i32, i32)> {
        self.labeled()
            .into_iter()
            .filter(|p| p.dim == k)
            .filter_map(|p| p.death.map(|d| (p.birth, d)))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        labeled_to_csv(&self.labeled())
    }
}

pub fn labeled_to_csv(pairs: &[LabeledPair]) -> String {
    let mut out = String::from("dim,birth_label,death_label\n");
    for p in pairs {
        match p.death {
            Some(d) => writeln!(out, "{},{},{}", p.dim, p.birth, d),
            None => writeln!(out, "{},{},inf", p.dim, p.birth),
        }
        .expect("writing to a String");
    }
    out
}

/// Inverse of [`PersistenceDiagram::to_csv`].
pub fn labeled_from_csv(text: &str) -> Result<Vec<LabeledPair>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["dim", "birth_label", "death_label"] {
        return Err(Error::InvalidParams(format!("unexpected diagram header {headers:?}")));
    }
    let bad = |field: &str| Error::InvalidParams(format!("bad diagram field {field:?}"));
    let mut pairs = Vec::new();
    for row in reader.records() {
        let row = row?;
        let dim = row[0].parse().map_err(|_| bad(&row[0]))?;
        let birth = row[1].parse().map_err(|_| bad(&row[1]))?;
        let death = match &row[2] {
            "inf" => None,
            s => Some(s.parse().map_err(|_| bad(s))?),
        };
        pairs.push(LabeledPair { dim, birth, death });
    }
    Ok(pairs)
}

/// Betti numbers at position `m`: pairs with `b ≤ m < d`.
pub fn betti_at(diagram: &PersistenceDiagram, m: usize) -> BettiPair {
    let mut betti = BettiPair::default();
    for p in diagram.pairs.iter().filter(|p| p.alive_at(m)) {
        match p.dim {
            0 => betti.beta0 += 1,
            1 => betti.beta1 += 1,
            _ => {}
        }
    }
    betti
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClosingDecomposition {
    /// Components alive in the original image; death is the sentinel.
    pub essential: Vec<LabeledPair>,
    /// Finite merge pairs.
    pub rest: Vec<LabeledPair>,
}

impl ClosingDecomposition {
    /// Essential pairs with the sentinel written as death label 0.
    pub fn essential_zero_death(&self) -> Vec<(i32, i32)> {
        self.essential.iter().map(|p| (p.birth, 0)).collect()
    }

    /// Absolute birth scales of the essential components.
    pub fn scales(&self) -> Vec<u32> {
        self.essential.iter().map(|p| p.birth.unsigned_abs()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OpeningDecomposition {
    /// Holes of the original image (birth label 0).
    pub original: Vec<LabeledPair>,
    pub rest: Vec<LabeledPair>,
}

impl OpeningDecomposition {
    /// Finite death scales of the original holes.
    pub fn scales(&self) -> Vec<u32> {
        self.original
            .iter()
            .filter_map(|p| p.death)
            .map(i32::unsigned_abs)
            .collect()
    }
}

/// Splits dimension-0 pairs of a closing filtration diagram.
pub fn decompose_closing(diagram: &PersistenceDiagram) -> ClosingDecomposition {
    let (essential, rest) = diagram
        .labeled()
        .into_iter()
        .filter(|p| p.dim == 0)
        .partition(|p| p.death.is_none());
    ClosingDecomposition { essential, rest }
}

/// Splits dimension-1 pairs of an opening filtration diagram.
pub fn decompose_opening(diagram: &PersistenceDiagram) -> OpeningDecomposition {
    let (original, rest) = diagram
        .labeled()
        .into_iter()
        .filter(|p| p.dim == 1)
        .partition(|p| p.birth == 0);
    OpeningDecomposition { original, rest }
}

/// Left endpoint of the widest gap between consecutive distinct scales; ties take the first.
pub fn gap_scale(scales: &[u32]) -> Option<u32> {
    let mut distinct = scales.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .windows(2)
        .map(|w| (w[1] - w[0], w[0]))
        .fold(None, |best: Option<(u32, u32)>, (gap, left)| match best {
            Some((g, _)) if g >= gap => best,
            _ => Some((gap, left)),
        })
        .map(|(_, left)| left)
}
