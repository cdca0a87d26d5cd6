//! One-row CSV summary of a `run`, readable back without loss.

use crate::dimension::Method;
use crate::entryexit::SequenceConfig;
use crate::error::{Error, Result};

use super::analysis::Analysis;
use super::spec::ModelSpec;
use super::tables::csv_err;

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub spec: ModelSpec,
    pub config: SequenceConfig,
    pub iterations: usize,
    pub truncated: bool,
    pub orientation: String,
    pub cahen: f64,
    pub borel: f64,
    pub tail_nucleus: f64,
    pub auto_method: Method,
    pub theoretical: f64,
    pub codimension: String,
    pub snap_distance: f64,
    pub wall_seconds: f64,
}

pub const RECORD_HEADER: [&str; 24] = [
    "family",
    "j",
    "a",
    "n",
    "m",
    "alpha",
    "beta",
    "delta",
    "gamma",
    "h0",
    "max_iterations",
    "root_tol",
    "min_height",
    "iterations",
    "truncated",
    "orientation",
    "cahen",
    "borel",
    "tailnucleus",
    "auto_method",
    "theoretical",
    "codimension",
    "snap_distance",
    "wall_seconds",
];

impl RunRecord {
    pub fn from_analysis(a: &Analysis) -> Self {
        let auto = a.auto_method();
        let report = a.codimension(auto);
        Self {
            spec: a.spec,
            config: a.config,
            iterations: a.sequence.iterations(),
            truncated: a.sequence.truncated_early(),
            orientation: a.sequence.orientation().map_or_else(String::new, |o| o.to_string()),
            cahen: a.value(Method::Cahen),
            borel: a.value(Method::Borel),
            tail_nucleus: a.value(Method::TailNucleus),
            auto_method: auto,
            theoretical: a.theoretical(),
            codimension: report.codimension_label(),
            snap_distance: report.snap_distance,
            wall_seconds: a.seconds,
        }
    }

    /// Header line plus one data line. Floats use the shortest representation
    /// that parses back to the same value.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(RECORD_HEADER).map_err(csv_err)?;
        let none = String::new;
        let (j, a, n, m, alpha, beta, delta, gamma) = match self.spec {
            ModelSpec::Lienard { j, a } => (j.to_string(), a.to_string(), none(), none(), none(), none(), none(), none()),
            ModelSpec::NormalForm { n, m, j, alpha, beta } => (
                j.to_string(),
                none(),
                n.to_string(),
                m.to_string(),
                alpha.to_string(),
                beta.to_string(),
                none(),
                none(),
            ),
            ModelSpec::TwoStroke { alpha, delta, gamma } => {
                (none(), none(), none(), none(), alpha.to_string(), none(), delta.to_string(), gamma.to_string())
            }
        };
        w.write_record([
            self.spec.family().to_string(),
            j,
            a,
            n,
            m,
            alpha,
            beta,
            delta,
            gamma,
            self.config.h0.to_string(),
            self.config.max_iterations.to_string(),
            self.config.root_tol.to_string(),
            self.config.min_height.to_string(),
            self.iterations.to_string(),
            self.truncated.to_string(),
            self.orientation.clone(),
            self.cahen.to_string(),
            self.borel.to_string(),
            self.tail_nucleus.to_string(),
            self.auto_method.to_string(),
            self.theoretical.to_string(),
            self.codimension.clone(),
            self.snap_distance.to_string(),
            self.wall_seconds.to_string(),
        ])
        .map_err(csv_err)?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        if header != RECORD_HEADER {
            return Err(Error::InvalidConfig("unexpected run record header".into()));
        }
        let rec = r
            .records()
            .next()
            .ok_or_else(|| Error::InvalidConfig("run record has no data row".into()))?
            .map_err(csv_err)?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
            s.parse().map_err(|_| Error::InvalidConfig(format!("bad value '{s}' for {name}")))
        }
        let spec = match field(0) {
            "lienard" => ModelSpec::Lienard { j: num(field(1), "j")?, a: num(field(2), "a")? },
            "normalform" => ModelSpec::NormalForm {
                j: num(field(1), "j")?,
                n: num(field(3), "n")?,
                m: num(field(4), "m")?,
                alpha: num(field(5), "alpha")?,
                beta: num(field(6), "beta")?,
            },
            "twostroke" => ModelSpec::TwoStroke {
                alpha: num(field(5), "alpha")?,
                delta: num(field(7), "delta")?,
                gamma: num(field(8), "gamma")?,
            },
            other => return Err(Error::InvalidConfig(format!("unknown model family '{other}'"))),
        };
        Ok(Self {
            spec,
            config: SequenceConfig {
                h0: num(field(9), "h0")?,
                max_iterations: num(field(10), "max_iterations")?,
                root_tol: num(field(11), "root_tol")?,
                min_height: num(field(12), "min_height")?,
            },
            iterations: num(field(13), "iterations")?,
            truncated: num(field(14), "truncated")?,
            orientation: field(15).to_string(),
            cahen: num(field(16), "cahen")?,
            borel: num(field(17), "borel")?,
            tail_nucleus: num(field(18), "tailnucleus")?,
            auto_method: field(19).parse()?,
            theoretical: num(field(20), "theoretical")?,
            codimension: field(21).to_string(),
            snap_distance: num(field(22), "snap_distance")?,
            wall_seconds: num(field(23), "wall_seconds")?,
        })
    }
}
