use std::fmt;

use crate::error::Result;
use crate::models::{ClassicalLienardModel, NormalFormModel, SlowFastModel, TwoStrokeModel};

/// Parameters of one of the three model families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Lienard { j: u32, a: f64 },
    NormalForm { n: u32, m: u32, j: u32, alpha: f64, beta: f64 },
    TwoStroke { alpha: f64, delta: f64, gamma: f64 },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Box<dyn SlowFastModel>> {
        Ok(match *self {
            ModelSpec::Lienard { j, a } => Box::new(ClassicalLienardModel::new(j, a)?),
            ModelSpec::NormalForm { n, m, j, alpha, beta } => Box::new(NormalFormModel::new(n, m, j, alpha, beta)?),
            ModelSpec::TwoStroke { alpha, delta, gamma } => Box::new(TwoStrokeModel::new(alpha, delta, gamma)?),
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::Lienard { .. } => "lienard",
            ModelSpec::NormalForm { .. } => "normalform",
            ModelSpec::TwoStroke { .. } => "twostroke",
        }
    }

    pub fn contact_order(&self) -> u32 {
        match *self {
            ModelSpec::NormalForm { n, .. } => n,
            _ => 2,
        }
    }

    /// Index `j` predicted by the model parameters. The two-stroke point is a
    /// codimension-one slow-fast Hopf point.
    pub fn j(&self) -> u32 {
        match *self {
            ModelSpec::Lienard { j, .. } | ModelSpec::NormalForm { j, .. } => j,
            ModelSpec::TwoStroke { .. } => 0,
        }
    }

    /// Section height for a starting coordinate given in the model's own
    /// units: the two-stroke section is parameterised by `y` itself.
    pub fn section_height(&self, y0: f64) -> f64 {
        match *self {
            ModelSpec::TwoStroke { delta, .. } => y0 - delta,
            _ => y0,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpec::Lienard { j, a } => write!(f, "lienard(j={j}, a={a})"),
            ModelSpec::NormalForm { n, m, j, alpha, beta } => {
                write!(f, "normalform(n={n}, m={m}, j={j}, alpha={alpha}, beta={beta})")
            }
            ModelSpec::TwoStroke { alpha, delta, gamma } => {
                write!(f, "twostroke(alpha={alpha}, delta={delta}, gamma={gamma})")
            }
        }
    }
}
