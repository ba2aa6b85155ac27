//! Persistence-guided alternating closing/opening denoiser.
//!
//! Each round closes away the smallest black components that are born in the current image,
//! then opens away the smallest holes of the result. Scales come from the diagrams of the
//! closing and opening filtrations built on the current image.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{morph_filtration, MorphKind};
use crate::image::{sum_binary_levels, threshold, BinaryImage, GrayImage, RgbImage, LEVEL_COUNT};
use crate::morphology::{close, open, SeSequence};
use crate::persistence::{decompose_closing, decompose_opening, filtration_diagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenoiseParams {
    pub size_tol: u32,
    pub max_iter: u32,
    pub se_max: usize,
    /// Run the opening half-step before the closing one.
    #[serde(default)]
    pub open_first: bool,
    #[serde(default)]
    pub stop: StopPolicy,
}

/// When a half-step's selection exceeds `size_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopPolicy {
    /// Return immediately.
    #[default]
    FirstExceeded,
    /// Skip that half-step and return only when both half-steps of a round exceed.
    /// The trace may then repeat a sign.
    BothExceeded,
}

impl DenoiseParams {
    /// `se_max` defaults to `size_tol + 1`, the shortest sequence that can exceed the tolerance.
    pub fn new(size_tol: u32, max_iter: u32) -> Self {
        Self {
            size_tol,
            max_iter,
            se_max: size_tol as usize + 1,
            open_first: false,
            stop: StopPolicy::FirstExceeded,
        }
    }

    pub fn with_se_max(mut self, se_max: usize) -> Self {
        self.se_max = se_max;
        self
    }

    pub fn with_open_first(mut self, open_first: bool) -> Self {
        self.open_first = open_first;
        self
    }

    pub fn with_stop(mut self, stop: StopPolicy) -> Self {
        self.stop = stop;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidParams("max_iter must be at least 1".into()));
        }
        if self.size_tol as usize >= self.se_max {
            return Err(Error::InvalidParams(format!(
                "size_tol ({}) must be smaller than se_max ({})",
                self.size_tol, self.se_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    SizeTolExceededClosing,
    SizeTolExceededOpening,
    MaxIter,
    DegenerateImage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfStep {
    Closing,
    Opening,
}

/// One half-step: the scale selected from the diagram (`None` when nothing qualified) and
/// the signed entry applied, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iteration: u32,
    pub half: HalfStep,
    pub selected: Option<u32>,
    pub applied: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenoiseTrace {
    /// Signed scales, most recent first: negative for closings, positive for openings.
    pub sequence: Vec<i32>,
    pub iterations_run: u32,
    pub stop_reason: StopReason,
    /// Half-steps in execution order.
    pub steps: Vec<StepRecord>,
}

enum Outcome {
    Applied,
    Exceeded,
}

struct Runner<'a> {
    params: &'a DenoiseParams,
    ses: SeSequence,
    current: BinaryImage,
    sequence: Vec<i32>,
    steps: Vec<StepRecord>,
}

impl Runner<'_> {
    fn half_step(&mut self, iteration: u32, half: HalfStep) -> Outcome {
        let tol = self.params.size_tol;
        let (selected, applied) = match half {
            HalfStep::Closing => {
                let f = morph_filtration(&self.current, MorphKind::Closing, &self.ses)
                    .expect("square family");
                let sel = decompose_closing(&filtration_diagram(&f)).scales().into_iter().min();
                match sel {
                    Some(i) if i <= tol => {
                        let b = &self.ses[i as usize + 1];
                        self.current = BinaryImage::from_gray_unchecked(close(self.current.as_gray(), b));
                        (sel, Some(-(i as i32 + 1)))
                    }
                    _ => (sel, None),
                }
            }
            HalfStep::Opening => {
                let f = morph_filtration(&self.current, MorphKind::Opening, &self.ses)
                    .expect("square family");
                let sel = decompose_opening(&filtration_diagram(&f)).scales().into_iter().min();
                match sel {
                    Some(i) if i <= tol => {
                        let b = &self.ses[i as usize];
                        self.current = BinaryImage::from_gray_unchecked(open(self.current.as_gray(), b));
                        (sel, Some(i as i32))
                    }
                    _ => (sel, None),
                }
            }
        };
        self.steps.push(StepRecord {
            iteration,
            half,
            selected,
            applied,
        });
        match applied {
            Some(entry) => {
                self.sequence.insert(0, entry);
                Outcome::Applied
            }
            None => Outcome::Exceeded,
        }
    }
}

fn exceeded_reason(half: HalfStep) -> StopReason {
    match half {
        HalfStep::Closing => StopReason::SizeTolExceededClosing,
        HalfStep::Opening => StopReason::SizeTolExceededOpening,
    }
}

/// Alternating closing/opening with scales read off the current image's diagrams.
pub fn denoise_binary(f: &BinaryImage, params: &DenoiseParams) -> Result<(BinaryImage, DenoiseTrace)> {
    params.validate()?;
    let mut run = Runner {
        params,
        ses: SeSequence::square(params.se_max),
        current: f.clone(),
        sequence: Vec::new(),
        steps: Vec::new(),
    };
    let order = if params.open_first {
        [HalfStep::Opening, HalfStep::Closing]
    } else {
        [HalfStep::Closing, HalfStep::Opening]
    };
    let mut stop_reason = StopReason::MaxIter;
    let mut iterations_run = 0;
    'rounds: for iteration in 0..params.max_iter {
        if run.current.is_all_black() || run.current.is_all_white() {
            stop_reason = StopReason::DegenerateImage;
            break;
        }
        iterations_run = iteration + 1;
        let mut applied_any = false;
        for half in order {
            match run.half_step(iteration, half) {
                Outcome::Applied => applied_any = true,
                Outcome::Exceeded if params.stop == StopPolicy::BothExceeded => {}
                Outcome::Exceeded => {
                    stop_reason = exceeded_reason(half);
                    break 'rounds;
                }
            }
        }
        if !applied_any {
            stop_reason = exceeded_reason(order[0]);
            break;
        }
    }
    let trace = DenoiseTrace {
        sequence: run.sequence,
        iterations_run,
        stop_reason,
        steps: run.steps,
    };
    Ok((run.current, trace))
}

/// Denoises every threshold level `τ_t(g)`, `t = 0..=255`, and sums the results.
pub fn denoise_gray(g: &GrayImage, params: &DenoiseParams) -> Result<GrayImage> {
    params.validate()?;
    let levels = (0..LEVEL_COUNT as u32)
        .into_par_iter()
        .map(|t| denoise_binary(&threshold(g, t), params).map(|(img, _)| img))
        .collect::<Result<Vec<_>>>()?;
    sum_binary_levels(&levels)
}

pub fn denoise_rgb(image: &RgbImage, params: &DenoiseParams) -> Result<RgbImage> {
    let [r, g, b] = image.channels();
    let (r, (g, b)) = rayon::join(
        || denoise_gray(r, params),
        || rayon::join(|| denoise_gray(g, params), || denoise_gray(b, params)),
    );
    RgbImage::new(r?, g?, b?)
}
