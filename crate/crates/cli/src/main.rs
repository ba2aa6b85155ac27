use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use morphtda::denoise::{denoise_binary, denoise_gray, denoise_rgb, DenoiseParams, StopPolicy};
use morphtda::filtration::{
    extended_filtration, morph_filtration, sublevel_filtration, ExtendedPair, FiltrationSource,
    MorphKind, OneParamFiltration,
};
use morphtda::harness::{add_salt_pepper_gray, diagram_svg, run_benchmark, ExperimentConfig, NoiseSpec};
use morphtda::image::{BinaryImage, LevelSet, RgbImage};
use morphtda::morphology::{MorphOp, SeSequence, StructuringElement};
use morphtda::persistence::filtration_diagram;
use morphtda::pnm::{self, Decoded, PnmFormat};

#[derive(Parser)]
#[command(name = "morphtda", version, about = "Morphological filtrations, persistence and denoising")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one morphological operator to a PGM.
    Morph {
        #[arg(long, value_parser = parse_op)]
        op: MorphOp,
        /// `square:<i>` or `file:<path>` (one `dx dy` pair per line).
        #[arg(long)]
        se: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the sets of a filtration as PGMs plus `manifest.json`.
    Filtrate {
        /// erosion, dilation, opening, closing, wth, bth, sth, extended-erosion-dilation,
        /// extended-opening-closing or sublevel.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 5)]
        se_max: usize,
        /// Comma-separated thresholds for `sublevel`.
        #[arg(long, value_delimiter = ',')]
        thresholds: Vec<u32>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Persistence diagram of a filtration directory.
    Persist {
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Persistence-guided salt-and-pepper removal.
    Denoise {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Binary)]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        size_tol: u32,
        #[arg(long, default_value_t = 10)]
        max_iter: u32,
        /// Defaults to size-tol + 1.
        #[arg(long)]
        se_max: Option<usize>,
        #[arg(long)]
        open_first: bool,
        #[arg(long, value_enum, default_value_t = Stop::FirstExceeded)]
        stop: Stop,
        /// Trace JSON (binary mode only).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a noise/denoise benchmark described by a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Add salt-and-pepper noise to a PGM or PPM.
    Noise {
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Binary,
    Gray,
    Rgb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stop {
    FirstExceeded,
    BothExceeded,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    source: FiltrationSource,
    labels: Vec<i32>,
    files: Vec<String>,
}

fn parse_op(s: &str) -> Result<MorphOp, String> {
    s.parse().map_err(|e: morphtda::Error| e.to_string())
}

fn parse_se(spec: &str) -> Result<StructuringElement> {
    match spec.split_once(':') {
        Some(("square", i)) => Ok(StructuringElement::square(i.parse().context("square size")?)),
        Some(("file", path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            Ok(StructuringElement::parse(&text)?)
        }
        _ => bail!("structuring element must be square:<i> or file:<path>, got {spec:?}"),
    }
}

fn build_filtration(kind: &str, se_max: usize, thresholds: &[u32], input: &Path) -> Result<OneParamFiltration> {
    let ses = SeSequence::square(se_max);
    let filt = match kind {
        "sublevel" => {
            if thresholds.is_empty() {
                bail!("sublevel needs --thresholds");
            }
            sublevel_filtration(&pnm::load_gray(input)?, thresholds)?
        }
        "extended-erosion-dilation" => {
            extended_filtration(&pnm::load_binary(input)?, ExtendedPair::ErosionDilation, &ses)?
        }
        "extended-opening-closing" => {
            extended_filtration(&pnm::load_binary(input)?, ExtendedPair::OpeningClosing, &ses)?
        }
        other => {
            let kind: MorphKind = other.parse()?;
            morph_filtration(&pnm::load_binary(input)?, kind, &ses)?
        }
    };
    Ok(filt)
}

fn write_filtration(filt: &OneParamFiltration, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (k, set) in filt.sets().iter().enumerate() {
        let name = format!("level_{k:03}.pgm");
        pnm::save_binary(&BinaryImage::from_level_set(set), dir.join(&name))?;
        files.push(name);
    }
    let manifest = Manifest {
        source: filt.source().clone(),
        labels: filt.labels().to_vec(),
        files,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn read_filtration(dir: &Path) -> Result<OneParamFiltration> {
    let text = fs::read_to_string(dir.join("manifest.json")).context("reading manifest.json")?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    let sets = manifest
        .files
        .iter()
        .map(|name| Ok(pnm::load_binary(dir.join(name))?.zero_set()))
        .collect::<Result<Vec<LevelSet>>>()?;
    Ok(OneParamFiltration::new(sets, manifest.labels, manifest.source)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Morph { op, se, input, out } => {
            let g = pnm::load_gray(&input)?;
            pnm::save_gray(&op.apply(&g, &parse_se(&se)?), &out, PnmFormat::P5)?;
        }
        Command::Filtrate {
            kind,
            se_max,
            thresholds,
            input,
            out_dir,
        } => {
            let filt = build_filtration(&kind, se_max, &thresholds, &input)?;
            write_filtration(&filt, &out_dir)?;
        }
        Command::Persist { in_dir, out, svg } => {
            let diagram = filtration_diagram(&read_filtration(&in_dir)?);
            fs::write(&out, diagram.to_csv())?;
            if let Some(path) = svg {
                fs::write(path, diagram_svg(&diagram))?;
            }
        }
        Command::Denoise {
            input,
            out,
            mode,
            size_tol,
            max_iter,
            se_max,
            open_first,
            stop,
            trace,
        } => {
            let mut params = DenoiseParams::new(size_tol, max_iter).with_open_first(open_first);
            if let Some(n) = se_max {
                params = params.with_se_max(n);
            }
            params = params.with_stop(match stop {
                Stop::FirstExceeded => StopPolicy::FirstExceeded,
                Stop::BothExceeded => StopPolicy::BothExceeded,
            });
            params.validate()?;
            if trace.is_some() && !matches!(mode, Mode::Binary) {
                bail!("--trace is only available in binary mode");
            }
            match mode {
                Mode::Binary => {
                    let (clean, record) = denoise_binary(&pnm::load_binary(&input)?, &params)?;
                    pnm::save_binary(&clean, &out)?;
                    if let Some(path) = trace {
                        fs::write(path, serde_json::to_string_pretty(&record)?)?;
                    }
                }
                Mode::Gray => {
                    let clean = denoise_gray(&pnm::load_gray(&input)?, &params)?;
                    pnm::save_gray(&clean, &out, PnmFormat::P5)?;
                }
                Mode::Rgb => {
                    let clean = denoise_rgb(&pnm::load_rgb(&input)?, &params)?;
                    pnm::save_rgb(&clean, &out)?;
                }
            }
        }
        Command::Bench { config, out_dir } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::from_json(&text)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let truth = cfg.load_truth(base)?;
            let output = run_benchmark(&cfg, &truth)?;
            output.write(&cfg, &out_dir)?;
            print!("{}", output.table_csv());
        }
        Command::Noise {
            density,
            seed,
            input,
            out,
        } => {
            let spec = NoiseSpec::new(density, seed)?;
            match pnm::load_image(&input)? {
                Decoded::Gray(g) => {
                    pnm::save_gray(&add_salt_pepper_gray(&g, spec, 255)?, &out, PnmFormat::P5)?;
                }
                Decoded::Rgb(c) => {
                    let [r, g, b] = c.channels();
                    let channel = |k: u64, img| {
                        add_salt_pepper_gray(img, NoiseSpec::new(density, seed.wrapping_add(k))?, 255)
                    };
                    let noisy = RgbImage::new(channel(0, r)?, channel(1, g)?, channel(2, b)?)?;
                    pnm::save_rgb(&noisy, &out)?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
