//! One-parameter filtrations built from thresholds and morphological operators, and the
//! multi-index operator calculus that assembles them into multiparameter families.

mod multi;

use serde::{Deserialize, Serialize};

pub use multi::{
    apply_m, apply_m_multi, check_axioms, grayscale_grid_filtration, level_set_multi,
    path_filtration, verify_multifiltration, Axiom, AxiomViolation, BinaryMultiFiltration,
    GridFiltration, GridIndex, IndexedFamily, MorphPair, MultiIndex, NondecreasingPath,
    OperatorPair, PairKind, TopHatPair, VerificationReport,
};

use crate::image::{threshold, BinaryImage, GrayImage, LevelSet};
use crate::morphology::{MorphOp, SeSequence};
use crate::{Error, Result};

/// Which one-parameter construction produced a filtration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum FiltrationSource {
    Sublevel { thresholds: Vec<u32> },
    Morph { kind: MorphKind, se_max: usize },
    Extended { pair: ExtendedPair, se_max: usize },
    Path { nodes: Vec<String> },
    Custom { description: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphKind {
    Erosion,
    Dilation,
    Opening,
    Closing,
    Wth,
    Bth,
    Sth,
}

impl MorphKind {
    pub const ALL: [MorphKind; 7] = [
        MorphKind::Erosion,
        MorphKind::Dilation,
        MorphKind::Opening,
        MorphKind::Closing,
        MorphKind::Wth,
        MorphKind::Bth,
        MorphKind::Sth,
    ];

    fn op(self) -> MorphOp {
        match self {
            MorphKind::Erosion => MorphOp::Erode,
            MorphKind::Dilation => MorphOp::Dilate,
            MorphKind::Opening => MorphOp::Open,
            MorphKind::Closing => MorphOp::Close,
            MorphKind::Wth => MorphOp::Wth,
            MorphKind::Bth => MorphOp::Bth,
            MorphKind::Sth => MorphOp::Sth,
        }
    }

    /// Black sets grow with the scale index for these kinds (labels `0..=n`).
    fn expanding(self) -> bool {
        matches!(self, MorphKind::Erosion | MorphKind::Opening)
    }

    fn needs_square_family(self) -> bool {
        !matches!(self, MorphKind::Erosion | MorphKind::Dilation)
    }

    fn name(self) -> &'static str {
        match self {
            MorphKind::Erosion => "erosion filtration",
            MorphKind::Dilation => "dilation filtration",
            MorphKind::Opening => "opening filtration",
            MorphKind::Closing => "closing filtration",
            MorphKind::Wth => "white top-hat filtration",
            MorphKind::Bth => "black top-hat filtration",
            MorphKind::Sth => "self-complementary top-hat filtration",
        }
    }
}

impl std::str::FromStr for MorphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "erosion" => MorphKind::Erosion,
            "dilation" => MorphKind::Dilation,
            "opening" => MorphKind::Opening,
            "closing" => MorphKind::Closing,
            "wth" => MorphKind::Wth,
            "bth" => MorphKind::Bth,
            "sth" => MorphKind::Sth,
            other => return Err(Error::InvalidParams(format!("unknown filtration kind {other:?}"))),
        })
    }
}

/// Contracting/expanding operator pair glued at the original image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendedPair {
    ErosionDilation,
    OpeningClosing,
}

/// Nested sequence of pixel sets `sets[0] ⊆ sets[1] ⊆ …` with strictly increasing labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneParamFiltration {
    sets: Vec<LevelSet>,
    labels: Vec<i32>,
    source: FiltrationSource,
}

impl OneParamFiltration {
    /// Validates grids, label order and nesting of every adjacent pair.
    pub fn new(sets: Vec<LevelSet>, labels: Vec<i32>, source: FiltrationSource) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParams("a filtration needs at least one set".into()));
        }
        if sets.len() != labels.len() {
            return Err(Error::InvalidParams(format!(
                "{} sets but {} labels",
                sets.len(),
                labels.len()
            )));
        }
        if let Some(position) = labels.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingLabels { position });
        }
        for (lower, w) in sets.windows(2).enumerate() {
            if !w[0].is_subset(&w[1])? {
                return Err(Error::NotNested {
                    lower,
                    upper: lower + 1,
                });
            }
        }
        Ok(Self {
            sets,
            labels,
            source,
        })
    }

    /// Labels `0..len`.
    pub fn with_positions(sets: Vec<LevelSet>, source: FiltrationSource) -> Result<Self> {
        let labels = (0..sets.len() as i32).collect();
        Self::new(sets, labels, source)
    }

    pub fn sets(&self) -> &[LevelSet] {
        &self.sets
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn source(&self) -> &FiltrationSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn last(&self) -> &LevelSet {
        self.sets.last().expect("non-empty")
    }

    pub fn set_at_label(&self, label: i32) -> Option<&LevelSet> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|p| &self.sets[p])
    }
}

/// Sublevel sets `g⁻¹_{t₁}(0) ⊆ … ⊆ g⁻¹_{t_T}(0)`, labelled `0..T`.
pub fn sublevel_filtration(g: &GrayImage, thresholds: &[u32]) -> Result<OneParamFiltration> {
    if thresholds.is_empty() {
        return Err(Error::InvalidParams("at least one threshold is required".into()));
    }
    if let Some(position) = thresholds.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::NonIncreasingThresholds { position });
    }
    let sets = thresholds.iter().map(|&t| threshold(g, t).zero_set()).collect();
    OneParamFiltration::with_positions(
        sets,
        FiltrationSource::Sublevel {
            thresholds: thresholds.to_vec(),
        },
    )
}

fn require_square(ses: &SeSequence, construction: &'static str) -> Result<()> {
    if ses.is_square_family() {
        Ok(())
    } else {
        Err(Error::UnsupportedFamily { construction })
    }
}

/// Zero sets of `op(f, Bᵢ)` for `i = 0..=n`, indexed by scale.
fn scale_sets(f: &BinaryImage, op: MorphOp, ses: &SeSequence) -> Vec<LevelSet> {
    ses.elements()
        .iter()
        .map(|b| op.apply(f.as_gray(), b).zero_set())
        .collect()
}

/// Erosion/opening filtrations carry labels `0..=n`; dilation, closing and the top-hats are
/// listed smallest set first with labels `-n..=0`, so `sets[k]` uses `B_{n-k}`.
pub fn morph_filtration(
    f: &BinaryImage,
    kind: MorphKind,
    ses: &SeSequence,
) -> Result<OneParamFiltration> {
    if kind.needs_square_family() {
        require_square(ses, kind.name())?;
    }
    let n = ses.max_index() as i32;
    let mut sets = scale_sets(f, kind.op(), ses);
    let labels = if kind.expanding() {
        (0..=n).collect()
    } else {
        sets.reverse();
        (-n..=0).collect()
    };
    OneParamFiltration::new(
        sets,
        labels,
        FiltrationSource::Morph {
            kind,
            se_max: ses.max_index(),
        },
    )
}

/// `{X̃ᵢ}_{i=-n}^{n}`: the contracting side (dilation/closing) at negative labels, `f⁻¹(0)` at
/// 0 and the expanding side (erosion/opening) at positive labels.
pub fn extended_filtration(
    f: &BinaryImage,
    pair: ExtendedPair,
    ses: &SeSequence,
) -> Result<OneParamFiltration> {
    let (lower, upper) = match pair {
        ExtendedPair::ErosionDilation => (MorphKind::Dilation, MorphKind::Erosion),
        ExtendedPair::OpeningClosing => {
            require_square(ses, "extended opening/closing filtration")?;
            (MorphKind::Closing, MorphKind::Opening)
        }
    };
    let n = ses.max_index() as i32;
    let mut sets: Vec<LevelSet> = scale_sets(f, lower.op(), ses).into_iter().skip(1).rev().collect();
    sets.push(f.zero_set());
    sets.extend(scale_sets(f, upper.op(), ses).into_iter().skip(1));
    OneParamFiltration::new(
        sets,
        (-n..=n).collect(),
        FiltrationSource::Extended {
            pair,
            se_max: ses.max_index(),
        },
    )
}

#[cfg(test)]
mod tests;
