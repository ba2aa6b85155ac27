use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use morphtda::image::{BinaryImage, GrayImage, PixelGrid};
use morphtda::morphology::{erode, StructuringElement};
use morphtda::pnm::{self, PnmFormat};

fn morphtda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphtda"))
        .args(args)
        .output()
        .expect("spawn morphtda")
}

fn ok(args: &[&str]) -> Output {
    let out = morphtda(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn binary(w: usize, h: usize, black: impl Fn(usize, usize) -> bool) -> BinaryImage {
    let grid = PixelGrid::new(w, h).unwrap();
    BinaryImage::try_from_gray(GrayImage::from_fn(grid, |x, y| u32::from(!black(x, y)))).unwrap()
}

/// Black field with a 1×1 and a 3×3 white hole.
fn two_holes() -> BinaryImage {
    binary(16, 12, |x, y| !((x, y) == (3, 5) || ((9..=11).contains(&x) && (4..=6).contains(&y))))
}

fn blob(x: usize, y: usize) -> bool {
    (8..32).contains(&x) && (8..32).contains(&y)
}

#[test]
fn morph_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let grid = PixelGrid::new(9, 7).unwrap();
    let g = GrayImage::from_fn(grid, |x, y| ((x * 37 + y * 91) % 256) as u32);
    let (input, out) = (dir.path().join("in.pgm"), dir.path().join("out.pgm"));
    pnm::save_gray(&g, &input, PnmFormat::P2).unwrap();
    ok(&["morph", "--op", "erode", "--se", "square:2", "--in", p(&input), "--out", p(&out)]);
    assert_eq!(pnm::load_gray(&out).unwrap(), erode(&g, &StructuringElement::square(2)));

    let se_file = dir.path().join("se.txt");
    fs::write(&se_file, "# cross\n0 0\n1,0\n-1 0\n0 1\n0 -1\n").unwrap();
    let se_arg = format!("file:{}", p(&se_file));
    ok(&["morph", "--op", "dilate", "--se", &se_arg, "--in", p(&input), "--out", p(&out)]);
    assert!(!morphtda(&["morph", "--op", "blur", "--se", "square:1", "--in", p(&input), "--out", p(&out)]).status.success());
    assert!(!morphtda(&["morph", "--op", "open", "--se", "disk:3", "--in", p(&input), "--out", p(&out)]).status.success());
}

#[test]
fn filtrate_then_persist() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("holes.pgm");
    pnm::save_binary(&two_holes(), &input).unwrap();
    let filt = dir.path().join("filt");
    ok(&["filtrate", "--kind", "opening", "--se-max", "4", "--in", p(&input), "--out-dir", p(&filt)]);
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(filt.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["labels"], serde_json::json!([0, 1, 2, 3, 4]));
    assert_eq!(manifest["source"]["construction"], "morph");
    assert!(filt.join("level_004.pgm").exists());

    let (csv, svg) = (dir.path().join("d.csv"), dir.path().join("d.svg"));
    ok(&["persist", "--in-dir", p(&filt), "--out", p(&csv), "--svg", p(&svg)]);
    assert_eq!(fs::read_to_string(&csv).unwrap(), "dim,birth_label,death_label\n0,0,inf\n1,0,1\n1,0,3\n");
    let svg = fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("class=\"dim1\"").count() == 2);
}

#[test]
fn filtrate_closing_and_sublevel_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("holes.pgm");
    pnm::save_binary(&two_holes(), &input).unwrap();
    let out = dir.path().join("c");
    ok(&["filtrate", "--kind", "extended-opening-closing", "--se-max", "2", "--in", p(&input), "--out-dir", p(&out)]);
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["labels"], serde_json::json!([-2, -1, 0, 1, 2]));

    let gray = dir.path().join("g.pgm");
    let grid = PixelGrid::new(6, 6).unwrap();
    pnm::save_gray(&GrayImage::from_fn(grid, |x, _| (x * 40) as u32), &gray, PnmFormat::P5).unwrap();
    let out = dir.path().join("s");
    ok(&["filtrate", "--kind", "sublevel", "--thresholds", "0,80,200", "--in", p(&gray), "--out-dir", p(&out)]);
    let csv = dir.path().join("s.csv");
    ok(&["persist", "--in-dir", p(&out), "--out", p(&csv)]);
    assert_eq!(fs::read_to_string(&csv).unwrap(), "dim,birth_label,death_label\n0,0,inf\n");
    assert!(!morphtda(&["filtrate", "--kind", "sublevel", "--in", p(&gray), "--out-dir", p(&out)]).status.success());
}

#[test]
fn denoise_binary_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = binary(40, 40, |x, y| (blob(x, y) && (x, y) != (20, 20)) || (x, y) == (3, 3));
    let (input, out, trace) = (dir.path().join("n.pgm"), dir.path().join("o.pgm"), dir.path().join("t.json"));
    pnm::save_binary(&noisy, &input).unwrap();
    ok(&["denoise", "--in", p(&input), "--out", p(&out), "--size-tol", "5", "--max-iter", "10", "--trace", p(&trace)]);
    assert_eq!(pnm::load_binary(&out).unwrap(), binary(40, 40, blob));
    let t: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["sequence"], serde_json::json!([1, -1]));
    assert_eq!(t["stop_reason"], "size-tol-exceeded-closing");

    ok(&["denoise", "--in", p(&input), "--out", p(&out), "--open-first", "--stop", "both-exceeded", "--trace", p(&trace)]);
    let t: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["sequence"], serde_json::json!([-1, 1]));

    let bad = morphtda(&["denoise", "--in", p(&input), "--out", p(&out), "--size-tol", "5", "--se-max", "5"]);
    assert!(!bad.status.success());
    let bad = morphtda(&["denoise", "--in", p(&input), "--out", p(&out), "--mode", "gray", "--trace", p(&trace)]);
    assert!(!bad.status.success());
}

#[test]
fn denoise_gray_and_rgb_modes() {
    let dir = tempfile::tempdir().unwrap();
    let grid = PixelGrid::new(32, 32).unwrap();
    let g = GrayImage::from_fn(grid, |x, y| if blob(x + 4, y + 4) { 40 } else { 220 });
    let input = dir.path().join("g.pgm");
    pnm::save_gray(&g, &input, PnmFormat::P5).unwrap();
    let out = dir.path().join("o.pgm");
    ok(&["denoise", "--mode", "gray", "--in", p(&input), "--out", p(&out), "--max-iter", "3"]);
    assert_eq!(pnm::load_gray(&out).unwrap(), g);

    let rgb = morphtda::image::RgbImage::new(g.clone(), g.map(|v| 255 - v), g.clone()).unwrap();
    let (input, out) = (dir.path().join("c.ppm"), dir.path().join("o.ppm"));
    pnm::save_rgb(&rgb, &input).unwrap();
    ok(&["denoise", "--mode", "rgb", "--in", p(&input), "--out", p(&out), "--max-iter", "3"]);
    assert_eq!(pnm::load_rgb(&out).unwrap(), rgb);
}

#[test]
fn noise_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let grid = PixelGrid::new(30, 20).unwrap();
    let input = dir.path().join("g.pgm");
    pnm::save_gray(&GrayImage::filled(grid, 128), &input, PnmFormat::P5).unwrap();
    let (a, b, c) = (dir.path().join("a.pgm"), dir.path().join("b.pgm"), dir.path().join("c.pgm"));
    ok(&["noise", "--density", "0.3", "--seed", "5", "--in", p(&input), "--out", p(&a)]);
    ok(&["noise", "--density", "0.3", "--seed", "5", "--in", p(&input), "--out", p(&b)]);
    ok(&["noise", "--density", "0.3", "--seed", "6", "--in", p(&input), "--out", p(&c)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let noisy = pnm::load_gray(&a).unwrap();
    assert!(noisy.values().iter().all(|&v| v == 0 || v == 128 || v == 255));
    assert!(!morphtda(&["noise", "--density", "1.5", "--seed", "5", "--in", p(&input), "--out", p(&a)]).status.success());
}

#[test]
fn bench_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let truth = dir.path().join("truth.pgm");
    pnm::save_binary(&binary(40, 40, blob), &truth).unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"densities":[0.0,0.1],"trials":3,"size_tol":2,"max_iter":5,"truth":"truth.pgm","master_seed":7}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = ok(&["bench", "--config", p(&config), "--out-dir", p(&a)]);
    ok(&["bench", "--config", p(&config), "--out-dir", p(&b)]);
    for name in ["report.csv", "traces.json", "meta.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let report = fs::read_to_string(a.join("report.csv")).unwrap();
    assert_eq!(String::from_utf8(first.stdout).unwrap(), report);
    let rows = morphtda::harness::parse_table_csv(&report).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0].iou_mean, rows[0].modal_beta0, rows[0].modal_beta1), (1.0, 1, 0));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("meta.json")).unwrap()).unwrap();
    assert!(meta["prng"].as_str().unwrap().contains("ChaCha8"));
}
