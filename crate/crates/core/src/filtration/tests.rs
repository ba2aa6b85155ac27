use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::image::{image_le, PixelGrid};
use crate::morphology::{close, open, StructuringElement};

fn grid(w: usize, h: usize) -> PixelGrid {
    PixelGrid::new(w, h).unwrap()
}

fn random_binary(w: usize, h: usize, p_white: f64, seed: u64) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BinaryImage::try_from_gray(GrayImage::from_fn(grid(w, h), |_, _| {
        u32::from(rng.gen_bool(p_white))
    }))
    .unwrap()
}

fn random_gray(w: usize, h: usize, max: u32, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(grid(w, h), |_, _| rng.gen_range(0..=max))
}

/// Black 16×12 field with a 1×1 white hole at (3,5) and a 3×3 white hole at (9..=11, 4..=6).
fn two_holes() -> BinaryImage {
    BinaryImage::try_from_gray(GrayImage::from_fn(grid(16, 12), |x, y| {
        u32::from((x, y) == (3, 5) || ((9..=11).contains(&x) && (4..=6).contains(&y)))
    }))
    .unwrap()
}

/// White 20×20 field, black 12×12 block at (4..16)² with a white 1×1 hole at (10,10),
/// plus a black 1×1 speck at (1,1).
fn speck_and_hole() -> BinaryImage {
    BinaryImage::try_from_gray(GrayImage::from_fn(grid(20, 20), |x, y| {
        let in_block = (4..16).contains(&x) && (4..16).contains(&y);
        let black = (in_block && (x, y) != (10, 10)) || (x, y) == (1, 1);
        u32::from(!black)
    }))
    .unwrap()
}

fn assert_nested(f: &OneParamFiltration) {
    for w in f.sets().windows(2) {
        assert!(w[0].is_subset(&w[1]).unwrap());
    }
}

#[test]
fn sublevel_constant_image() {
    let g = GrayImage::filled(grid(4, 4), 7);
    let f = sublevel_filtration(&g, &[0, 3, 6, 7, 200]).unwrap();
    assert_eq!(f.labels(), &[0, 1, 2, 3, 4]);
    for (k, set) in f.sets().iter().enumerate() {
        if k < 3 {
            assert!(set.is_empty());
        } else {
            assert_eq!(set.count(), 16);
        }
    }
}

#[test]
fn sublevel_full_range_nests() {
    let g = random_gray(17, 9, 255, 4);
    let thresholds: Vec<u32> = (0..=255).collect();
    let f = sublevel_filtration(&g, &thresholds).unwrap();
    assert_eq!(f.len(), 256);
    for a in (0..256).step_by(17) {
        for b in a..256 {
            assert!(f.sets()[a].is_subset(&f.sets()[b]).unwrap());
        }
    }
}

#[test]
fn sublevel_single_threshold_and_errors() {
    let g = random_gray(5, 5, 9, 1);
    assert_eq!(sublevel_filtration(&g, &[4]).unwrap().len(), 1);
    assert!(matches!(
        sublevel_filtration(&g, &[4, 4]),
        Err(Error::NonIncreasingThresholds { position: 0 })
    ));
    assert!(sublevel_filtration(&g, &[]).is_err());
}

#[test]
fn opening_filtration_fills_holes_by_size() {
    let f = two_holes();
    let filt = morph_filtration(&f, MorphKind::Opening, &SeSequence::square(4)).unwrap();
    assert_eq!(filt.labels(), &[0, 1, 2, 3, 4]);
    let small = |k: usize| filt.sets()[k].contains(3, 5);
    let large = |k: usize| filt.sets()[k].contains(10, 5);
    assert!(!small(0));
    assert!((1..=4).all(small));
    assert!(!large(0) && !large(1) && !large(2));
    assert!(large(3) && large(4));
}

#[test]
fn erosion_with_origin_only() {
    let f = random_binary(8, 8, 0.5, 2);
    let filt = morph_filtration(&f, MorphKind::Erosion, &SeSequence::square(0)).unwrap();
    assert_eq!(filt.len(), 1);
    assert_eq!(filt.sets()[0], f.zero_set());
}

#[test]
fn closing_filtration_of_single_speck() {
    let mut f = BinaryImage::white(grid(9, 9));
    f.set(4, 4, false);
    let n = 3;
    let filt = morph_filtration(&f, MorphKind::Closing, &SeSequence::square(n)).unwrap();
    assert_eq!(filt.labels(), &[-3, -2, -1, 0]);
    for k in 0..n {
        assert!(filt.sets()[k].is_empty());
    }
    assert_eq!(filt.sets()[n].points().collect::<Vec<_>>(), vec![(4, 4)]);
}

#[test]
fn opening_needs_square_family() {
    let f = random_binary(6, 6, 0.5, 3);
    let cross = StructuringElement::new([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]).unwrap();
    let ses = SeSequence::new(vec![StructuringElement::origin(), cross]).unwrap();
    for kind in [MorphKind::Opening, MorphKind::Closing, MorphKind::Wth] {
        assert!(matches!(
            morph_filtration(&f, kind, &ses),
            Err(Error::UnsupportedFamily { .. })
        ));
    }
    assert!(morph_filtration(&f, MorphKind::Erosion, &ses).is_ok());
    assert!(morph_filtration(&f, MorphKind::Dilation, &ses).is_ok());
    assert!(extended_filtration(&f, ExtendedPair::OpeningClosing, &ses).is_err());
}

#[test]
fn all_kinds_nest_on_random_images() {
    for seed in 0..10 {
        let f = random_binary(20, 15, 0.5, seed);
        let ses = SeSequence::square(4);
        for kind in MorphKind::ALL {
            assert_nested(&morph_filtration(&f, kind, &ses).unwrap());
        }
    }
}

#[test]
fn extended_with_no_scales() {
    let f = random_binary(7, 5, 0.4, 9);
    for pair in [ExtendedPair::ErosionDilation, ExtendedPair::OpeningClosing] {
        let filt = extended_filtration(&f, pair, &SeSequence::square(0)).unwrap();
        assert_eq!(filt.labels(), &[0]);
        assert_eq!(filt.sets()[0], f.zero_set());
    }
}

#[test]
fn extended_opening_closing_on_speck_and_hole() {
    let f = speck_and_hole();
    let filt = extended_filtration(&f, ExtendedPair::OpeningClosing, &SeSequence::square(2)).unwrap();
    assert_eq!(filt.labels(), &[-2, -1, 0, 1, 2]);
    let at = |l: i32| filt.set_at_label(l).unwrap();
    // closing side drops the speck, opening side fills the hole
    assert!(!at(-1).contains(1, 1));
    assert!(at(0).contains(1, 1));
    assert!(!at(0).contains(10, 10));
    assert!(at(1).contains(10, 10));
    assert!(at(-1).count() < at(0).count());
    assert!(at(0).count() < at(1).count());
    assert_nested(&filt);
}

#[test]
fn extended_all_black() {
    let f = BinaryImage::black(grid(6, 6));
    for pair in [ExtendedPair::ErosionDilation, ExtendedPair::OpeningClosing] {
        let filt = extended_filtration(&f, pair, &SeSequence::square(3)).unwrap();
        assert_eq!(filt.len(), 7);
        assert!(filt.sets().iter().all(|s| s.count() == 36));
    }
}

#[test]
fn filtration_constructor_rejects_bad_input() {
    let g = grid(3, 3);
    let full = LevelSet::full(g);
    let empty = LevelSet::empty(g);
    let src = || FiltrationSource::Custom {
        description: "test".into(),
    };
    assert!(matches!(
        OneParamFiltration::new(vec![full.clone(), empty.clone()], vec![0, 1], src()),
        Err(Error::NotNested { lower: 0, upper: 1 })
    ));
    assert!(matches!(
        OneParamFiltration::new(vec![empty.clone(), full.clone()], vec![1, 1], src()),
        Err(Error::NonIncreasingLabels { .. })
    ));
    assert!(OneParamFiltration::new(vec![empty, full], vec![-3, 5], src()).is_ok());
}

#[test]
fn single_index_operator() {
    let pair = MorphPair::opening_closing(3);
    let g = speck_and_hole().into_gray();
    assert_eq!(apply_m(&g, 0, &pair).unwrap(), g);
    assert_eq!(apply_m(&g, 1, &pair).unwrap(), open(&g, &StructuringElement::square(1)));
    assert_eq!(apply_m(&g, -2, &pair).unwrap(), close(&g, &StructuringElement::square(2)));
    assert!(matches!(
        apply_m(&g, 4, &pair),
        Err(Error::IndexOutOfRange { entry: 4, max: 3 })
    ));
}

#[test]
fn multi_index_composition_order() {
    let pair = MorphPair::opening_closing(2);
    let g = speck_and_hole().into_gray();
    let zero = MultiIndex::new(vec![0, 0, 0]).unwrap();
    assert_eq!(apply_m_multi(&g, &zero, &pair).unwrap(), g);
    let u = MultiIndex::new(vec![-1, 1]).unwrap();
    let b1 = StructuringElement::square(1);
    assert_eq!(apply_m_multi(&g, &u, &pair).unwrap(), close(&open(&g, &b1), &b1));
    assert!(MultiIndex::new(vec![]).is_err());
}

/// Independent evaluation: explicit loop from the last entry to the first.
fn fold_oracle(g: &GrayImage, u: &[i32], n: usize) -> GrayImage {
    let mut img = g.clone();
    let mut k = u.len();
    while k > 0 {
        k -= 1;
        let b = StructuringElement::square(u[k].unsigned_abs() as usize);
        img = if u[k] >= 0 { open(&img, &b) } else { close(&img, &b) };
    }
    let _ = n;
    img
}

proptest! {
    #[test]
    fn multi_index_matches_fold(entries in proptest::collection::vec(-3i32..=3, 1..5), seed in any::<u64>()) {
        let pair = MorphPair::opening_closing(3);
        let g = random_binary(12, 10, 0.5, seed).into_gray();
        let u = MultiIndex::new(entries.clone()).unwrap();
        prop_assert_eq!(apply_m_multi(&g, &u, &pair).unwrap(), fold_oracle(&g, &entries, 3));
    }

    #[test]
    fn contravariant_order(seed in any::<u64>(), kind in 0usize..4) {
        let kinds = [PairKind::ErosionDilation, PairKind::OpeningClosing, PairKind::ErosionClosing, PairKind::OpeningDilation];
        let n = 4;
        let pair = MorphPair::new(kinds[kind], SeSequence::square(n)).unwrap();
        let g = random_binary(14, 11, 0.5, seed).into_gray();
        let images: Vec<_> = (-4..=4).map(|i| apply_m(&g, i, &pair).unwrap()).collect();
        for i in 0..images.len() {
            for j in i..images.len() {
                prop_assert!(image_le(&images[j], &images[i]).unwrap());
            }
        }
    }
}

#[test]
fn multi_index_order_and_alternation() {
    let a = MultiIndex::new(vec![-1, 2]).unwrap();
    let b = MultiIndex::new(vec![0, 2]).unwrap();
    let c = MultiIndex::new(vec![1, -3]).unwrap();
    assert!(a < b);
    assert_eq!(a.partial_cmp(&c), None);
    assert_eq!(a.partial_cmp(&MultiIndex::single(0)), None);
    assert!(a.is_alternating());
    assert!(!MultiIndex::new(vec![1, 2]).unwrap().is_alternating());
    assert!(MultiIndex::new(vec![0, 2, 0, -1]).unwrap().is_alternating());
    assert_eq!(MultiIndex::all(1, 2).len(), 9);
    // (0,0) plus 2×2 sign-mixed pairs plus 4 pairs with exactly one zero
    assert_eq!(MultiIndex::alternating(1, 2).len(), 7);
}

#[test]
fn verify_single_index() {
    let g = random_binary(8, 8, 0.5, 1).into_gray();
    let report =
        verify_multifiltration(&g, &[MultiIndex::single(2)], &MorphPair::opening_closing(3), 100, 0)
            .unwrap();
    assert_eq!(report.pairs_checked, 0);
    assert!(report.passes());
}

#[test]
fn verify_alternating_opening_closing() {
    let g = random_binary(16, 16, 0.5, 5).into_gray();
    let indices = MultiIndex::alternating(2, 3);
    let report =
        verify_multifiltration(&g, &indices, &MorphPair::opening_closing(2), usize::MAX, 0).unwrap();
    assert_eq!(report.pairs_checked, report.comparable_pairs);
    assert!(report.pairs_checked > 100);
    assert!(report.passes(), "{report:?}");
}

/// Flips black and white at every positive scale: breaks (A1) and (A2).
struct Inverting;

impl OperatorPair for Inverting {
    fn max_index(&self) -> usize {
        2
    }
    fn lower(&self, i: usize, g: &GrayImage) -> GrayImage {
        if i == 0 {
            g.clone()
        } else {
            g.map(|v| 1 - v.min(1))
        }
    }
    fn raise(&self, _i: usize, g: &GrayImage) -> GrayImage {
        g.clone()
    }
    fn describe(&self) -> String {
        "inverting".into()
    }
}

#[test]
fn verify_flags_broken_operator() {
    let g = random_binary(10, 10, 0.5, 8).into_gray();
    let report =
        verify_multifiltration(&g, &MultiIndex::alternating(2, 1), &Inverting, 1000, 0).unwrap();
    assert!(!report.inclusion_violations.is_empty());
    assert!(report.axiom_violations.iter().any(|v| v.axiom == Axiom::A1));
}

#[test]
fn top_hat_pair_fails_axioms() {
    let g = random_binary(12, 12, 0.5, 2).into_gray();
    let violations = check_axioms(&TopHatPair::new(SeSequence::square(3)), &g, 8, 1);
    assert!(violations.iter().any(|v| v.axiom == Axiom::A3));
    assert!(violations.iter().any(|v| v.axiom == Axiom::A1));
    assert!(check_axioms(&MorphPair::opening_closing(3), &g, 8, 1).is_empty());
    let gray = random_gray(9, 9, 6, 3);
    assert!(check_axioms(&MorphPair::opening_closing(3), &gray, 4, 1).is_empty());
}

#[test]
fn grid_single_cell() {
    let g = random_gray(6, 6, 20, 4);
    let grid = grayscale_grid_filtration(&g, &[MultiIndex::single(1)], &[10], &MorphPair::opening_closing(2))
        .unwrap();
    assert_eq!(grid.get(0, 0), &threshold(&open(&g, &StructuringElement::square(1)), 10).zero_set());
}

#[test]
fn opening_threshold_bifiltration_nests() {
    let g = random_gray(20, 20, 255, 6);
    let pair = MorphPair::opening_closing(4);
    let rows: Vec<_> = (0..=4).map(MultiIndex::single).collect();
    let thresholds: Vec<u32> = (0..8).map(|k| k * 32).collect();
    let grid = grayscale_grid_filtration(&g, &rows, &thresholds, &pair).unwrap();
    for r in 0..rows.len() {
        for c in 0..thresholds.len() {
            if c + 1 < thresholds.len() {
                assert!(grid.get(r, c).is_subset(grid.get(r, c + 1)).unwrap());
            }
            if r + 1 < rows.len() {
                assert!(grid.get(r, c).is_subset(grid.get(r + 1, c)).unwrap());
            }
        }
    }
}

#[test]
fn threshold_then_operator_route_agrees() {
    let g = random_gray(15, 13, 40, 7);
    let pair = MorphPair::opening_closing(3);
    let u = MultiIndex::new(vec![2, -1, 3]).unwrap();
    let m = apply_m_multi(&g, &u, &pair).unwrap();
    for t in 0..=40 {
        let via_threshold_first = apply_m_multi(threshold(&g, t).as_gray(), &u, &pair).unwrap();
        assert_eq!(threshold(&m, t).as_gray(), &via_threshold_first);
    }
}

#[test]
fn constant_path_repeats() {
    let f = random_binary(8, 8, 0.5, 2);
    let pair = MorphPair::opening_closing(2);
    let family = BinaryMultiFiltration::new(&f, &pair);
    let node = MultiIndex::new(vec![1, -1]).unwrap();
    let path = NondecreasingPath::new(vec![node.clone(), node.clone(), node]).unwrap();
    let filt = path_filtration(&family, &path).unwrap();
    assert_eq!(filt.len(), 3);
    assert_eq!(filt.sets()[0], filt.sets()[2]);
}

#[test]
fn row_path_is_sublevel_filtration_of_opened_image() {
    let g = random_gray(16, 16, 255, 11);
    let pair = MorphPair::opening_closing(3);
    let rows: Vec<_> = (0..=3).map(MultiIndex::single).collect();
    let thresholds: Vec<u32> = vec![10, 60, 90, 128, 200, 255];
    let grid = grayscale_grid_filtration(&g, &rows, &thresholds, &pair).unwrap();
    let path = NondecreasingPath::new(
        thresholds
            .iter()
            .map(|&t| GridIndex {
                t,
                u: MultiIndex::single(2),
            })
            .collect(),
    )
    .unwrap();
    let along = path_filtration(&grid, &path).unwrap();
    let direct = sublevel_filtration(&open(&g, &StructuringElement::square(2)), &thresholds).unwrap();
    assert_eq!(along.sets(), direct.sets());
}

#[test]
fn non_monotone_path_rejected() {
    let nodes = vec![
        MultiIndex::new(vec![0, 1]).unwrap(),
        MultiIndex::new(vec![-1, 2]).unwrap(),
    ];
    assert!(matches!(
        NondecreasingPath::new(nodes),
        Err(Error::NotNondecreasing { position: 0, next: 1 })
    ));
    let a = GridIndex {
        t: 5,
        u: MultiIndex::single(1),
    };
    let b = GridIndex {
        t: 3,
        u: MultiIndex::single(2),
    };
    assert!(NondecreasingPath::new(vec![a, b]).is_err());
}
