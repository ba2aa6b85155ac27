use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FiltrationSource, OneParamFiltration};
use crate::image::{threshold, BinaryImage, GrayImage, LevelSet};
use crate::morphology::{self, SeSequence};
use crate::{Error, Result};

/// Multi-index `(i₁, …, i_k)` with entries in `{0, ±1, …, ±n}`.
///
/// Ordered componentwise; indices of different length are incomparable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyMultiIndex);
        }
        Ok(Self(entries))
    }

    pub fn single(i: i32) -> Self {
        Self(vec![i])
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Consecutive entries have non-positive products.
    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|w| w[0] * w[1] <= 0)
    }

    /// Every index in `{-n..=n}^k`.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let n = n as i32;
        let mut out: Vec<Vec<i32>> = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (-n..=n).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Alternating indices in `{-n..=n}^k`.
    pub fn alternating(n: usize, k: usize) -> Vec<MultiIndex> {
        Self::all(n, k)
            .into_iter()
            .filter(MultiIndex::is_alternating)
            .collect()
    }

    fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|e| e.unsigned_abs() as usize > n) {
            Some(&entry) => Err(Error::IndexOutOfRange { entry, max: n }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn componentwise(a: &[i32], b: &[i32]) -> Option<Ordering> {
    if a.len() != b.len() {
        return None;
    }
    let mut ord = Ordering::Equal;
    for (x, y) in a.iter().zip(b) {
        match (ord, x.cmp(y)) {
            (_, Ordering::Equal) => {}
            (Ordering::Equal, c) => ord = c,
            (o, c) if o == c => {}
            _ => return None,
        }
    }
    Some(ord)
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        componentwise(&self.0, &other.0)
    }
}

/// Node `(t, u)` of the threshold × multi-index grid, ordered componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridIndex {
    pub t: u32,
    pub u: MultiIndex,
}

impl PartialOrd for GridIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let u = self.u.partial_cmp(&other.u)?;
        match (self.t.cmp(&other.t), u) {
            (Ordering::Equal, o) | (o, Ordering::Equal) => Some(o),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} u={}", self.t, self.u)
    }
}

/// Indexed operator families `E₀…Eₙ` (values decrease with the index) and `D₀…Dₙ`
/// (values increase with the index).
///
/// Meant to satisfy (A1) monotonicity, (A2) absorption order and (A3) `E₀ = D₀ = id`;
/// [`check_axioms`] spot-checks those on sample images.
pub trait OperatorPair {
    fn max_index(&self) -> usize;
    /// `Eᵢ(g)`.
    fn lower(&self, i: usize, g: &GrayImage) -> GrayImage;
    /// `Dᵢ(g)`.
    fn raise(&self, i: usize, g: &GrayImage) -> GrayImage;
    fn describe(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    ErosionDilation,
    OpeningClosing,
    ErosionClosing,
    OpeningDilation,
}

/// Morphological operator pair parameterised by a structuring element sequence.
#[derive(Debug, Clone)]
pub struct MorphPair {
    kind: PairKind,
    ses: SeSequence,
}

impl MorphPair {
    /// Openings and closings need the square family to nest.
    pub fn new(kind: PairKind, ses: SeSequence) -> Result<Self> {
        if kind != PairKind::ErosionDilation && !ses.is_square_family() {
            return Err(Error::UnsupportedFamily {
                construction: "opening/closing operator pair",
            });
        }
        Ok(Self { kind, ses })
    }

    pub fn opening_closing(n: usize) -> Self {
        Self {
            kind: PairKind::OpeningClosing,
            ses: SeSequence::square(n),
        }
    }

    pub fn erosion_dilation(n: usize) -> Self {
        Self {
            kind: PairKind::ErosionDilation,
            ses: SeSequence::square(n),
        }
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }
}

impl OperatorPair for MorphPair {
    fn max_index(&self) -> usize {
        self.ses.max_index()
    }

    fn lower(&self, i: usize, g: &GrayImage) -> GrayImage {
        let b = &self.ses[i];
        match self.kind {
            PairKind::ErosionDilation | PairKind::ErosionClosing => morphology::erode(g, b),
            PairKind::OpeningClosing | PairKind::OpeningDilation => morphology::open(g, b),
        }
    }

    fn raise(&self, i: usize, g: &GrayImage) -> GrayImage {
        let b = &self.ses[i];
        match self.kind {
            PairKind::ErosionDilation | PairKind::OpeningDilation => morphology::dilate(g, b),
            PairKind::OpeningClosing | PairKind::ErosionClosing => morphology::close(g, b),
        }
    }

    fn describe(&self) -> String {
        format!("{:?} over B_0..B_{}", self.kind, self.max_index())
    }
}

/// White top-hats as `Eᵢ` and black top-hats as `Dᵢ`. These violate (A1) and (A3) in general
/// and exist to exercise the axiom checks.
#[derive(Debug, Clone)]
pub struct TopHatPair {
    ses: SeSequence,
}

impl TopHatPair {
    pub fn new(ses: SeSequence) -> Self {
        Self { ses }
    }
}

impl OperatorPair for TopHatPair {
    fn max_index(&self) -> usize {
        self.ses.max_index()
    }

    fn lower(&self, i: usize, g: &GrayImage) -> GrayImage {
        morphology::white_top_hat(g, &self.ses[i])
    }

    fn raise(&self, i: usize, g: &GrayImage) -> GrayImage {
        morphology::black_top_hat(g, &self.ses[i])
    }

    fn describe(&self) -> String {
        format!("top-hat pair over B_0..B_{}", self.max_index())
    }
}

/// `M_i(g)`: `E_i(g)` for `i ≥ 0`, `D_{|i|}(g)` for `i < 0`.
pub fn apply_m<P: OperatorPair + ?Sized>(g: &GrayImage, i: i32, pair: &P) -> Result<GrayImage> {
    let n = pair.max_index();
    if i.unsigned_abs() as usize > n {
        return Err(Error::IndexOutOfRange { entry: i, max: n });
    }
    Ok(apply_m_unchecked(g, i, pair))
}

fn apply_m_unchecked<P: OperatorPair + ?Sized>(g: &GrayImage, i: i32, pair: &P) -> GrayImage {
    if i >= 0 {
        pair.lower(i as usize, g)
    } else {
        pair.raise(i.unsigned_abs() as usize, g)
    }
}

/// `M_u(g) = (M_{u₁} ∘ ⋯ ∘ M_{u_k})(g)`: the last entry acts first.
pub fn apply_m_multi<P: OperatorPair + ?Sized>(
    g: &GrayImage,
    u: &MultiIndex,
    pair: &P,
) -> Result<GrayImage> {
    u.check_range(pair.max_index())?;
    Ok(u
        .entries()
        .iter()
        .rev()
        .fold(g.clone(), |acc, &i| apply_m_unchecked(&acc, i, pair)))
}

/// `X_u = M_u(g)⁻¹(0)`.
pub fn level_set_multi<P: OperatorPair + ?Sized>(
    g: &GrayImage,
    u: &MultiIndex,
    pair: &P,
) -> Result<LevelSet> {
    Ok(apply_m_multi(g, u, pair)?.zero_set())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// Each operator is increasing.
    A1,
    /// `Eᵢ ≥ Eⱼ` and `Dᵢ ≤ Dⱼ` for `i ≤ j`.
    A2,
    /// `E₀ = D₀ = id`.
    A3,
    /// Each operator commutes with thresholding.
    A4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub index: usize,
    pub detail: String,
}

/// Spot-check (A1)–(A3) on `g` and on `samples` random images over its grid; when `g` is not
/// binary, (A4) is checked at every threshold between 0 and its maximum.
pub fn check_axioms<P: OperatorPair + ?Sized>(
    pair: &P,
    g: &GrayImage,
    samples: usize,
    seed: u64,
) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let n = pair.max_index();
    let max = g.max_value().max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = vec![g.clone()];
    for _ in 0..samples {
        images.push(g.map(|_| rng.gen_range(0..=max)));
    }

    for h in &images {
        if pair.lower(0, h) != *h || pair.raise(0, h) != *h {
            out.push(AxiomViolation {
                axiom: Axiom::A3,
                index: 0,
                detail: "E_0 or D_0 differs from the identity".into(),
            });
            break;
        }
    }

    'a1: for h in &images {
        // f ≤ h by construction: lower a random subset of pixels.
        let f = h.map(|v| if rng.gen_bool(0.3) { rng.gen_range(0..=v) } else { v });
        for i in 0..=n {
            let lower_ok = pair.lower(i, &f).le(&pair.lower(i, h)).unwrap_or(false);
            let raise_ok = pair.raise(i, &f).le(&pair.raise(i, h)).unwrap_or(false);
            if !(lower_ok && raise_ok) {
                out.push(AxiomViolation {
                    axiom: Axiom::A1,
                    index: i,
                    detail: "order-preservation fails for a pair f ≤ g".into(),
                });
                break 'a1;
            }
        }
    }

    'a2: for h in &images {
        let lowers: Vec<_> = (0..=n).map(|i| pair.lower(i, h)).collect();
        let raises: Vec<_> = (0..=n).map(|i| pair.raise(i, h)).collect();
        for i in 0..n {
            let ok = lowers[i + 1].le(&lowers[i]).unwrap_or(false)
                && raises[i].le(&raises[i + 1]).unwrap_or(false);
            if !ok {
                out.push(AxiomViolation {
                    axiom: Axiom::A2,
                    index: i,
                    detail: format!("scales {i} and {} are out of order", i + 1),
                });
                break 'a2;
            }
        }
    }

    if g.max_value() > 1 {
        'a4: for t in 0..g.max_value() {
            let gt = threshold(g, t);
            for i in 0..=n {
                let lower_ok = pair.lower(i, gt.as_gray()) == *threshold(&pair.lower(i, g), t).as_gray();
                let raise_ok = pair.raise(i, gt.as_gray()) == *threshold(&pair.raise(i, g), t).as_gray();
                if !(lower_ok && raise_ok) {
                    out.push(AxiomViolation {
                        axiom: Axiom::A4,
                        index: i,
                        detail: format!("threshold {t} does not commute"),
                    });
                    break 'a4;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Comparable pairs `u < v` actually checked.
    pub pairs_checked: usize,
    pub comparable_pairs: usize,
    /// Pairs `u ≤ v` with `X_u ⊄ X_v`.
    pub inclusion_violations: Vec<(MultiIndex, MultiIndex)>,
    pub axiom_violations: Vec<AxiomViolation>,
}

impl VerificationReport {
    pub fn is_filtration(&self) -> bool {
        self.inclusion_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.inclusion_violations.is_empty() && self.axiom_violations.is_empty()
    }
}

/// Check `X_u ⊆ X_v` for comparable `u < v` in `indices`; all pairs when there are at most
/// `sample` of them, otherwise a seeded random sample of `sample` pairs. Also runs the axiom
/// spot-checks.
pub fn verify_multifiltration<P: OperatorPair + ?Sized>(
    g: &GrayImage,
    indices: &[MultiIndex],
    pair: &P,
    sample: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut sets: HashMap<&MultiIndex, LevelSet> = HashMap::new();
    for u in indices {
        if !sets.contains_key(u) {
            sets.insert(u, level_set_multi(g, u, pair)?);
        }
    }
    let mut comparable = Vec::new();
    for (a, u) in indices.iter().enumerate() {
        for v in &indices[a + 1..] {
            match u.partial_cmp(v) {
                Some(Ordering::Less) => comparable.push((u, v)),
                Some(Ordering::Greater) => comparable.push((v, u)),
                _ => {}
            }
        }
    }
    let comparable_pairs = comparable.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if comparable.len() > sample {
        comparable.shuffle(&mut rng);
        comparable.truncate(sample);
    }
    let mut inclusion_violations = Vec::new();
    for (u, v) in &comparable {
        if !sets[u].is_subset(&sets[v])? {
            inclusion_violations.push(((*u).clone(), (*v).clone()));
        }
    }
    Ok(VerificationReport {
        pairs_checked: comparable.len(),
        comparable_pairs,
        inclusion_violations,
        axiom_violations: check_axioms(pair, g, 4, rng.gen()),
    })
}

/// Family of pixel sets indexed by a partially ordered set.
pub trait IndexedFamily {
    type Index: PartialOrd + Clone + fmt::Display;

    fn level_set(&self, index: &Self::Index) -> Result<LevelSet>;
}

/// `{X_u(g)}` over multi-indices, evaluated on demand.
pub struct BinaryMultiFiltration<'a, P: OperatorPair + ?Sized> {
    image: &'a BinaryImage,
    pair: &'a P,
}

impl<'a, P: OperatorPair + ?Sized> BinaryMultiFiltration<'a, P> {
    pub fn new(image: &'a BinaryImage, pair: &'a P) -> Self {
        Self { image, pair }
    }
}

impl<P: OperatorPair + ?Sized> IndexedFamily for BinaryMultiFiltration<'_, P> {
    type Index = MultiIndex;

    fn level_set(&self, index: &MultiIndex) -> Result<LevelSet> {
        level_set_multi(self.image.as_gray(), index, self.pair)
    }
}

/// Materialised rows of the `(t, u)` grid: `X_{t,u} = τₜ(M_u(g))⁻¹(0)` for the requested
/// multi-indices and thresholds only.
#[derive(Debug, Clone)]
pub struct GridFiltration {
    thresholds: Vec<u32>,
    indices: Vec<MultiIndex>,
    /// `sets[row][col]` for `indices[row]`, `thresholds[col]`.
    sets: Vec<Vec<LevelSet>>,
}

impl GridFiltration {
    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, row: usize, col: usize) -> &LevelSet {
        &self.sets[row][col]
    }
}

impl IndexedFamily for GridFiltration {
    type Index = GridIndex;

    fn level_set(&self, index: &GridIndex) -> Result<LevelSet> {
        let row = self
            .indices
            .iter()
            .position(|u| *u == index.u)
            .ok_or(Error::UnknownIndex)?;
        let col = self
            .thresholds
            .iter()
            .position(|&t| t == index.t)
            .ok_or(Error::UnknownIndex)?;
        Ok(self.sets[row][col].clone())
    }
}

pub fn grayscale_grid_filtration<P: OperatorPair + ?Sized>(
    g: &GrayImage,
    u_axis: &[MultiIndex],
    thresholds: &[u32],
    pair: &P,
) -> Result<GridFiltration> {
    if let Some(position) = thresholds.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::NonIncreasingThresholds { position });
    }
    let mut sets = Vec::with_capacity(u_axis.len());
    for u in u_axis {
        let m = apply_m_multi(g, u, pair)?;
        sets.push(thresholds.iter().map(|&t| threshold(&m, t).zero_set()).collect());
    }
    Ok(GridFiltration {
        thresholds: thresholds.to_vec(),
        indices: u_axis.to_vec(),
        sets,
    })
}

/// Sequence of indices with `nodes[i] ≤ nodes[i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NondecreasingPath<I> {
    nodes: Vec<I>,
}

impl<I: PartialOrd> NondecreasingPath<I> {
    pub fn new(nodes: Vec<I>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParams("a path needs at least one node".into()));
        }
        for (position, w) in nodes.windows(2).enumerate() {
            if !matches!(w[0].partial_cmp(&w[1]), Some(Ordering::Less | Ordering::Equal)) {
                return Err(Error::NotNondecreasing {
                    position,
                    next: position + 1,
                });
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[I] {
        &self.nodes
    }
}

/// The one-parameter filtration `{X_{uᵢ}}ᵢ` along a nondecreasing path, labelled by position.
pub fn path_filtration<F: IndexedFamily>(
    family: &F,
    path: &NondecreasingPath<F::Index>,
) -> Result<OneParamFiltration> {
    let sets = path
        .nodes()
        .iter()
        .map(|u| family.level_set(u))
        .collect::<Result<Vec<_>>>()?;
    OneParamFiltration::with_positions(
        sets,
        FiltrationSource::Path {
            nodes: path.nodes().iter().map(|u| u.to_string()).collect(),
        },
    )
}
