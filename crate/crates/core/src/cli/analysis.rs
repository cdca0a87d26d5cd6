use std::time::Instant;

use crate::dimension::{
    auto_method, borel_estimate, cahen_estimate, codimension_from_dimension, default_snap_threshold,
    tail_nucleus_estimate, theoretical_dimension, CodimensionReport, DimensionEstimate, JIndex, Method,
};
use crate::entryexit::{generate_sequence, FractalSequence, SequenceConfig};
use crate::error::Result;

use super::spec::ModelSpec;

/// A generated sequence with all three formula estimates.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub spec: ModelSpec,
    pub config: SequenceConfig,
    pub sequence: FractalSequence,
    pub cahen: DimensionEstimate,
    pub borel: DimensionEstimate,
    pub tail_nucleus: DimensionEstimate,
    pub seconds: f64,
}

impl Analysis {
    pub fn run(spec: ModelSpec, config: SequenceConfig) -> Result<Self> {
        let start = Instant::now();
        let model = spec.build()?;
        let sequence = generate_sequence(model.as_ref(), &config)?;
        let cahen = cahen_estimate(&sequence)?;
        let borel = borel_estimate(&sequence)?;
        let tail_nucleus = tail_nucleus_estimate(&sequence)?;
        Ok(Self {
            spec,
            config,
            sequence,
            cahen,
            borel,
            tail_nucleus,
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn estimate(&self, method: Method) -> Option<&DimensionEstimate> {
        match method {
            Method::Cahen => Some(&self.cahen),
            Method::Borel => Some(&self.borel),
            Method::TailNucleus => Some(&self.tail_nucleus),
            Method::BoxCount => None,
        }
    }

    pub fn value(&self, method: Method) -> f64 {
        self.estimate(method).map_or(f64::NAN, |e| e.final_value)
    }

    pub fn auto_method(&self) -> Method {
        auto_method(&self.tail_nucleus)
    }

    pub fn theoretical(&self) -> f64 {
        theoretical_dimension(self.spec.contact_order(), JIndex::Finite(self.spec.j()))
    }

    /// Formula estimate closest to the theoretical value.
    pub fn best(&self) -> (Method, f64) {
        let t = self.theoretical();
        Method::FORMULAS
            .iter()
            .map(|&m| (m, self.value(m)))
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .expect("three formulas")
    }

    pub fn codimension(&self, method: Method) -> CodimensionReport {
        let n = self.spec.contact_order();
        codimension_from_dimension(n, self.value(method), default_snap_threshold(n))
    }

    /// Largest pairwise difference between the three formula estimates.
    pub fn spread(&self) -> f64 {
        let v: Vec<f64> = Method::FORMULAS.iter().map(|&m| self.value(m)).collect();
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}
