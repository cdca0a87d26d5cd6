//! Planar slow-fast models at the singular limit, seen from a section through
//! the contact point.
//!
//! Every model is parameterised by a *section height* `h > 0`: the distance
//! along a regular section from the contact point. A fast orbit through the
//! section point at height `h` ends on the attracting branch of the critical
//! curve (its omega-limit) and starts on the repelling branch (its
//! alpha-limit). The slow divergence integral between an entry height and an
//! exit height then splits into two branch potentials:
//!
//! ```text
//! I(h_entry, h_exit) = E_attracting(h_exit) - E_repelling(h_entry)
//! ```
//!
//! where `E_b(h)` is the divergence integral from the contact point to the
//! branch-`b` limit of height `h`. Sequence generation never evaluates `I` by
//! subtracting two large potentials. It uses the diagonal value `I(h, h)`,
//! which each model computes without cancellation, plus the increment
//! `E_b(h) - E_b(h - gap)` taken over the thin strip between two heights.

mod lienard;
mod normal_form;
mod two_stroke;

pub use lienard::ClassicalLienardModel;
pub use normal_form::NormalFormModel;
pub use two_stroke::TwoStrokeModel;

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::quad::{gauss_kronrod, KRONROD_REL_TOL};

/// Which recursion produces a decreasing sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `I(y_{k+1}, y_k) = 0`: the new height enters on the repelling branch.
    EntrySolved,
    /// `I(y_k, y_{k+1}) = 0`: the new height exits on the attracting branch.
    ExitSolved,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::EntrySolved => "entry-solved",
            Orientation::ExitSolved => "exit-solved",
        })
    }
}

/// A branch of the critical curve on either side of the contact point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Normally attracting branch, reached by omega-limits.
    Attracting,
    /// Normally repelling branch, reached by alpha-limits.
    Repelling,
}

/// Direction of the slow flow through the contact point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlowFlow {
    /// Slow flow crosses from the repelling to the attracting branch (`g_m = +1`).
    RepellingToAttracting,
    /// Slow flow crosses from the attracting to the repelling branch (`g_m = -1`).
    AttractingToRepelling,
}

impl SlowFlow {
    pub fn leading_sign(self) -> f64 {
        match self {
            SlowFlow::RepellingToAttracting => 1.0,
            SlowFlow::AttractingToRepelling => -1.0,
        }
    }
}

/// A contact point model exposing the limit maps and the slow divergence integral.
pub trait SlowFastModel: Send + Sync + fmt::Debug {
    /// Contact order `n` of the fast foliation with the critical curve.
    fn contact_order(&self) -> u32;

    /// Largest admissible section height.
    fn max_height(&self) -> f64;

    /// Whether `max_height` itself is admissible.
    fn max_height_inclusive(&self) -> bool {
        true
    }

    fn check_height(&self, h: f64) -> Result<()> {
        let max = self.max_height();
        let ok = h > 0.0
            && h.is_finite()
            && if self.max_height_inclusive() { h <= max } else { h < max };
        if ok {
            Ok(())
        } else {
            Err(Error::NonAdmissibleHeight { height: h, max })
        }
    }

    /// Critical-curve coordinate of the omega-limit of the fast orbit at height `h`.
    fn omega_limit(&self, h: f64) -> Result<f64>;

    /// Critical-curve coordinate of the alpha-limit of the fast orbit at height `h`.
    fn alpha_limit(&self, h: f64) -> Result<f64>;

    fn limit(&self, branch: Branch, h: f64) -> Result<f64> {
        match branch {
            Branch::Attracting => self.omega_limit(h),
            Branch::Repelling => self.alpha_limit(h),
        }
    }

    /// Slow divergence integral along the critical curve from the alpha-limit
    /// of `h_entry` to the omega-limit of `h_exit`, integrated directly.
    fn sdi(&self, h_entry: f64, h_exit: f64) -> Result<f64>;

    /// `I(h, h)` computed without cancellation between the two branches.
    fn sdi_diagonal(&self, h: f64) -> Result<f64>;

    /// Derivative `dE_b/dh` of the branch potential. Models that cannot
    /// provide it override [`SlowFastModel::branch_increment`] instead.
    fn branch_density(&self, branch: Branch, u: f64) -> Result<f64>;

    /// `E_b(h) - E_b(h - gap)` for `0 < gap < h`, accurate relative to its
    /// own size even when `gap` is far below the resolution of `h`.
    fn branch_increment(&self, branch: Branch, h: f64, gap: f64) -> Result<f64> {
        self.check_height(h)?;
        let mean = gauss_kronrod(
            |t| self.branch_density(branch, h - gap * t),
            0.0,
            1.0,
            0.0,
            KRONROD_REL_TOL,
        )?;
        Ok(gap * mean)
    }

    fn slow_flow(&self) -> SlowFlow;

    /// Limit points `(x, height)` for heights in `(0, top]`, repelling side
    /// first, tracing the critical curve for plotting.
    fn critical_curve(&self, top: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
        let mut left = Vec::with_capacity(samples);
        let mut right = Vec::with_capacity(samples);
        for i in 1..=samples {
            let h = top * i as f64 / samples as f64;
            left.push((self.alpha_limit(h)?, h));
            right.push((self.omega_limit(h)?, h));
        }
        left.reverse();
        Ok(left.into_iter().chain(right).collect())
    }

    /// Short human-readable description with parameters.
    fn describe(&self) -> String;
}

/// Decides which recursion produces a decreasing sequence, from the sign of
/// `I(h_probe, h_probe)` and the direction of the slow flow.
///
/// `I(h, h)` is computed without cancellation, so it may be many orders of
/// magnitude below either branch potential and still carry a reliable sign.
/// Only an exact zero is degenerate.
pub fn orientation(model: &dyn SlowFastModel, h_probe: f64) -> Result<Orientation> {
    model.check_height(h_probe)?;
    let diag = model.sdi_diagonal(h_probe)?;
    if !diag.is_finite() || diag == 0.0 {
        return Err(Error::DegenerateModel { height: Some(h_probe) });
    }
    if diag.signum() * model.slow_flow().leading_sign() > 0.0 {
        Ok(Orientation::EntrySolved)
    } else {
        Ok(Orientation::ExitSolved)
    }
}
