//! Fractal sequences generated by iterating the entry-exit relation.
//!
//! Each step solves for the gap `d = h_prev - h_next` rather than for
//! `h_next`, writing the residual as the diagonal integral plus a branch
//! increment over `[h_prev - d, h_prev]`. Both terms are computed to full
//! relative precision, so gaps many orders of magnitude below `h_prev` are
//! still resolved.

use crate::error::{Error, Result};
use crate::models::{orientation, Branch, Orientation, SlowFastModel};
use crate::numeric::brent::{brent_with, DEFAULT_MAX_ITER};

pub const DEFAULT_ROOT_TOL: f64 = 1e-14;
pub const DEFAULT_MIN_HEIGHT: f64 = 1e-14;
/// Solve failures up to this iteration abort the run instead of truncating it.
pub const HARD_FAILURE_ITERATIONS: usize = 10;

const BRACKET_START_EXPONENT: i32 = 3;
const BRACKET_SHRINKS: i32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceConfig {
    pub h0: f64,
    pub max_iterations: usize,
    pub root_tol: f64,
    pub min_height: f64,
}

impl SequenceConfig {
    pub fn new(h0: f64, max_iterations: usize) -> Self {
        Self {
            h0,
            max_iterations,
            root_tol: DEFAULT_ROOT_TOL,
            min_height: DEFAULT_MIN_HEIGHT,
        }
    }

    pub fn validate(&self, model: &dyn SlowFastModel) -> Result<()> {
        if self.max_iterations < 2 {
            return Err(Error::InvalidConfig(format!(
                "max_iterations = {} must be at least 2",
                self.max_iterations
            )));
        }
        if !(self.root_tol > 0.0 && self.root_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("root_tol = {} must lie in (0, 1)", self.root_tol)));
        }
        if !(self.min_height > 0.0 && self.min_height < self.h0) {
            return Err(Error::InvalidConfig(format!(
                "min_height = {} must lie in (0, h0 = {})",
                self.min_height, self.h0
            )));
        }
        model.check_height(self.h0)
    }
}

/// One solved step of the recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub height: f64,
    pub gap: f64,
    /// `|I|` at the solved pair.
    pub residual: f64,
}

/// Decreasing positive heights with the gaps between them.
///
/// Gaps are always positive. Heights are strictly decreasing as real numbers;
/// when a gap is below the spacing of doubles near the height, consecutive
/// stored heights can coincide while the gap itself stays resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalSequence {
    heights: Vec<f64>,
    gaps: Vec<f64>,
    orientation: Option<Orientation>,
    residuals: Vec<f64>,
    truncated_early: bool,
    stop_reason: Option<String>,
}

impl FractalSequence {
    /// Wraps an explicit list of heights; gaps are taken as differences.
    pub fn from_heights(heights: Vec<f64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::InvalidSequence("no heights".into()));
        }
        if let Some(k) = heights.iter().position(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidSequence(format!("height {} at index {k} is not positive", heights[k])));
        }
        let gaps: Vec<f64> = heights.windows(2).map(|w| w[0] - w[1]).collect();
        if let Some(k) = gaps.iter().position(|g| *g <= 0.0) {
            return Err(Error::InvalidSequence(format!("heights[{}] <= heights[{}]", k, k + 1)));
        }
        Ok(Self {
            heights,
            gaps,
            orientation: None,
            residuals: Vec::new(),
            truncated_early: false,
            stop_reason: None,
        })
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// `gaps()[k]` is the solved distance from `heights()[k]` to `heights()[k + 1]`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.orientation
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn truncated_early(&self) -> bool {
        self.truncated_early
    }

    pub fn stop_reason(&self) -> Option<&str> {
        self.stop_reason.as_deref()
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// Number of solved steps.
    pub fn iterations(&self) -> usize {
        self.gaps.len()
    }
}

/// Residual of the entry-exit relation as a function of the gap `d`.
fn residual(model: &dyn SlowFastModel, orientation: Orientation, h: f64, diag: f64, d: f64) -> Result<f64> {
    Ok(match orientation {
        // I(h - d, h) = I(h, h) + E_rep(h) - E_rep(h - d)
        Orientation::EntrySolved => diag + model.branch_increment(Branch::Repelling, h, d)?,
        // I(h, h - d) = I(h, h) - (E_att(h) - E_att(h - d))
        Orientation::ExitSolved => diag - model.branch_increment(Branch::Attracting, h, d)?,
    })
}

/// Solves the entry-exit relation for the height following `h_prev`.
pub fn next_height(
    model: &dyn SlowFastModel,
    h_prev: f64,
    orientation: Orientation,
    root_tol: f64,
) -> Result<Step> {
    model.check_height(h_prev)?;
    let diag = model.sdi_diagonal(h_prev)?;
    if diag == 0.0 {
        return Err(Error::DegenerateModel { height: Some(h_prev) });
    }
    let f = |d: f64| residual(model, orientation, h_prev, diag, d);
    for i in 0..BRACKET_SHRINKS {
        let lower = h_prev * 10f64.powi(-BRACKET_START_EXPONENT - i);
        let d_hi = h_prev - lower;
        let f_hi = f(d_hi)?;
        if f_hi.signum() == diag.signum() && f_hi != 0.0 {
            continue;
        }
        let root = brent_with(f, 0.0, d_hi, diag, f_hi, root_tol, DEFAULT_MAX_ITER)?;
        return Ok(Step {
            height: h_prev - root.x,
            gap: root.x,
            residual: root.fx.abs(),
        });
    }
    Err(Error::BracketFailure { height: h_prev })
}

/// Iterates [`next_height`] from `cfg.h0`.
pub fn generate_sequence(model: &dyn SlowFastModel, cfg: &SequenceConfig) -> Result<FractalSequence> {
    cfg.validate(model)?;
    let orient = orientation(model, cfg.h0)?;
    let mut heights = Vec::with_capacity(cfg.max_iterations + 1);
    let mut gaps = Vec::with_capacity(cfg.max_iterations);
    let mut residuals = Vec::with_capacity(cfg.max_iterations);
    heights.push(cfg.h0);
    let mut stop_reason = None;
    let (mut h, mut lo) = (cfg.h0, 0.0);
    for k in 0..cfg.max_iterations {
        let step = match next_height(model, h, orient, cfg.root_tol) {
            Ok(step) => step,
            Err(e) if k < HARD_FAILURE_ITERATIONS => return Err(e),
            Err(e) => {
                stop_reason = Some(format!("solve failed at iteration {}: {e}", k + 1));
                break;
            }
        };
        if step.height < cfg.min_height {
            stop_reason = Some(format!("height {:e} fell below min_height {:e}", step.height, cfg.min_height));
            break;
        }
        if !(step.gap > 0.0) {
            if k < HARD_FAILURE_ITERATIONS {
                return Err(Error::DegenerateGap { k: k + 1 });
            }
            stop_reason = Some(format!("gap vanished at iteration {}", k + 1));
            break;
        }
        // Heights are carried as h + lo so that gaps below one ulp of h still
        // accumulate; the stored height is the rounded sum.
        let tail = lo - step.gap;
        let next = h + tail;
        lo = (h - next) + tail;
        h = next;
        heights.push(h);
        gaps.push(step.gap);
        residuals.push(step.residual);
    }
    Ok(FractalSequence {
        heights,
        gaps,
        orientation: Some(orient),
        residuals,
        truncated_early: stop_reason.is_some(),
        stop_reason,
    })
}
