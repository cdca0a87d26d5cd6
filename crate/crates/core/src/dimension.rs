//! Box dimension of fractal sequences and chirps, and the fractal codimension
//! it determines.
//!
//! Indices follow the usual convention for these formulas: `k = 1, 2, ...`
//! with `y_1` the starting height and `gap_k = y_k - y_(k+1)`.

use std::fmt;
use std::ops::RangeInclusive;

use crate::entryexit::FractalSequence;
use crate::error::{Error, Result};
use crate::models::SlowFastModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cahen,
    Borel,
    TailNucleus,
    BoxCount,
}

impl Method {
    pub const FORMULAS: [Method; 3] = [Method::Cahen, Method::Borel, Method::TailNucleus];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cahen => "cahen",
            Method::Borel => "borel",
            Method::TailNucleus => "tailnucleus",
            Method::BoxCount => "boxcount",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cahen" => Ok(Method::Cahen),
            "borel" => Ok(Method::Borel),
            "tailnucleus" | "tail-nucleus" | "tail_nucleus" => Ok(Method::TailNucleus),
            "boxcount" | "box" => Ok(Method::BoxCount),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// A dimension estimate with its convergence trace.
///
/// For the formula estimators `per_k` holds the estimate at each index `k`.
/// For box counting it holds `(i, N(2^-i))`, the occupied box count per scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub method: Method,
    pub per_k: Vec<(usize, f64)>,
    pub final_value: f64,
    pub k_window: RangeInclusive<usize>,
}

fn check_sequence(seq: &FractalSequence) -> Result<()> {
    if seq.len() < 3 {
        return Err(Error::InvalidSequence(format!("{} heights, need at least 3", seq.len())));
    }
    if let Some(k) = seq.gaps().iter().position(|g| !(*g > 0.0)) {
        return Err(Error::DegenerateGap { k: k + 1 });
    }
    Ok(())
}

fn formula_estimate(
    seq: &FractalSequence,
    method: Method,
    first_k: usize,
    value: impl Fn(f64, f64, f64) -> f64,
) -> Result<DimensionEstimate> {
    check_sequence(seq)?;
    let per_k: Vec<(usize, f64)> = seq
        .gaps()
        .iter()
        .zip(seq.heights())
        .enumerate()
        .map(|(i, (&gap, &y))| (i + 1, gap, y))
        .filter(|(k, _, _)| *k >= first_k)
        .map(|(k, gap, y)| (k, value(k as f64, y, gap)))
        .collect();
    let &(last_k, last) = per_k
        .last()
        .ok_or_else(|| Error::InvalidSequence("no usable index".into()))?;
    Ok(DimensionEstimate {
        method,
        per_k,
        final_value: if last.is_nan() { last } else { last.clamp(0.0, 1.0) },
        k_window: last_k..=last_k,
    })
}

/// `ln k / (-ln gap_k)`.
pub fn cahen_estimate(seq: &FractalSequence) -> Result<DimensionEstimate> {
    formula_estimate(seq, Method::Cahen, 1, |k, _, gap| k.ln() / -gap.ln())
}

/// `1 / (1 - ln y_k / ln k)`, from `k = 2`.
pub fn borel_estimate(seq: &FractalSequence) -> Result<DimensionEstimate> {
    formula_estimate(seq, Method::Borel, 2, |k, y, _| 1.0 / (1.0 - y.ln() / k.ln()))
}

/// `1 - ln(k gap_k + y_k) / ln(gap_k / 2)`.
pub fn tail_nucleus_estimate(seq: &FractalSequence) -> Result<DimensionEstimate> {
    formula_estimate(seq, Method::TailNucleus, 1, |k, y, gap| {
        1.0 - (k * gap + y).ln() / (0.5 * gap).ln()
    })
}

pub fn formula_estimate_by(seq: &FractalSequence, method: Method) -> Result<DimensionEstimate> {
    match method {
        Method::Cahen => cahen_estimate(seq),
        Method::Borel => borel_estimate(seq),
        Method::TailNucleus => tail_nucleus_estimate(seq),
        Method::BoxCount => box_count_dimension(BoxSet::Points(seq.heights()), &default_point_scales(seq.heights())?),
    }
}

/// Estimate above which the tail-nucleus formula is preferred over Cahen's.
pub const AUTO_SWITCH: f64 = 0.5;

/// Tail-nucleus when its value exceeds one half, Cahen otherwise.
pub fn auto_method(tail_nucleus: &DimensionEstimate) -> Method {
    if tail_nucleus.final_value > AUTO_SWITCH {
        Method::TailNucleus
    } else {
        Method::Cahen
    }
}

/// A horizontal segment `[x0, x1] x {y}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub x1: f64,
    pub y: f64,
}

/// Input to box counting.
#[derive(Debug, Clone, Copy)]
pub enum BoxSet<'a> {
    Points(&'a [f64]),
    Segments(&'a [Segment]),
}

impl BoxSet<'_> {
    fn len(&self) -> usize {
        match self {
            BoxSet::Points(p) => p.len(),
            BoxSet::Segments(s) => s.len(),
        }
    }
}

pub const BOX_MIN_ELEMENTS: usize = 100;
pub const BOX_MIN_DECADES: f64 = 3.0;
/// Fraction of scales, centred, kept for the slope fit.
pub const BOX_FIT_FRACTION: f64 = 0.6;

fn cell(v: f64, eps: f64) -> i64 {
    (v / eps).floor() as i64
}

fn count_points(points: &[f64], eps: f64) -> usize {
    let mut cells: Vec<i64> = points.iter().map(|&p| cell(p, eps)).collect();
    cells.sort_unstable();
    cells.dedup();
    cells.len()
}

fn count_segments(segments: &[Segment], eps: f64) -> usize {
    let mut rows: Vec<(i64, i64, i64)> = segments
        .iter()
        .map(|s| (cell(s.y, eps), cell(s.x0.min(s.x1), eps), cell(s.x0.max(s.x1), eps)))
        .collect();
    rows.sort_unstable();
    let mut total = 0usize;
    let mut current: Option<(i64, i64, i64)> = None;
    for (r, lo, hi) in rows {
        match current {
            Some((cr, clo, chi)) if cr == r && lo <= chi + 1 => current = Some((cr, clo, chi.max(hi))),
            Some((_, clo, chi)) => {
                total += (chi - clo + 1) as usize;
                current = Some((r, lo, hi));
            }
            None => current = Some((r, lo, hi)),
        }
    }
    if let Some((_, clo, chi)) = current {
        total += (chi - clo + 1) as usize;
    }
    total
}

fn dyadic_scales(extent: f64, resolution: f64) -> Result<Vec<f64>> {
    if !(extent > 0.0 && resolution > 0.0 && extent.is_finite()) {
        return Err(Error::InsufficientScales(format!(
            "extent {extent:e} and resolution {resolution:e} must be positive"
        )));
    }
    let i0 = (1.0 / extent).log2().floor() as i32;
    let i1 = (1.0 / resolution).log2().floor() as i32;
    Ok((i0..=i1).map(|i| 2f64.powi(-i)).collect())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Dyadic scales from the extent of the set down to its median spacing.
pub fn default_point_scales(points: &[f64]) -> Result<Vec<f64>> {
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let spacing: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).collect();
    if spacing.is_empty() {
        return Err(Error::InsufficientScales("fewer than two distinct points".into()));
    }
    let extent = sorted.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    dyadic_scales(extent, median(spacing))
}

/// Dyadic scales from the largest height of the chirp down to the median spacing of its heights.
pub fn default_segment_scales(segments: &[Segment]) -> Result<Vec<f64>> {
    let ys: Vec<f64> = segments.iter().map(|s| s.y).collect();
    let mut sorted = ys.clone();
    sorted.sort_by(f64::total_cmp);
    let spacing: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).collect();
    if spacing.is_empty() {
        return Err(Error::InsufficientScales("fewer than two distinct heights".into()));
    }
    // The rows carry the structure; coarser than the height span everything
    // is a handful of wide boxes.
    let extent = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    dyadic_scales(extent, median(spacing))
}

/// Least-squares slope of `ln N(eps)` against `ln(1/eps)` over the central
/// part of `scales` (given as box sizes, any order).
pub fn box_count_dimension(set: BoxSet<'_>, scales: &[f64]) -> Result<DimensionEstimate> {
    if set.len() < BOX_MIN_ELEMENTS {
        return Err(Error::InsufficientScales(format!(
            "{} elements, need at least {BOX_MIN_ELEMENTS}",
            set.len()
        )));
    }
    let mut scales: Vec<f64> = scales.iter().copied().filter(|s| *s > 0.0 && s.is_finite()).collect();
    scales.sort_by(|a, b| b.total_cmp(a));
    scales.dedup();
    if scales.len() < 3 || (scales[0] / scales[scales.len() - 1]).log10() < BOX_MIN_DECADES {
        return Err(Error::InsufficientScales(format!(
            "{} scales spanning less than {BOX_MIN_DECADES} decades",
            scales.len()
        )));
    }
    let counts: Vec<usize> = scales
        .iter()
        .map(|&eps| match set {
            BoxSet::Points(p) => count_points(p, eps),
            BoxSet::Segments(s) => count_segments(s, eps),
        })
        .collect();
    let len = scales.len();
    let cut = ((len as f64) * (1.0 - BOX_FIT_FRACTION) / 2.0).round() as usize;
    let (lo, hi) = (cut, len - cut);
    if hi - lo < 2 {
        return Err(Error::InsufficientScales("fewer than two scales in the fit window".into()));
    }
    let xs: Vec<f64> = scales[lo..hi].iter().map(|e| (1.0 / e).ln()).collect();
    let ys: Vec<f64> = counts[lo..hi].iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let index = |eps: f64| (1.0 / eps).log2().round() as usize;
    let ambient = match set {
        BoxSet::Points(_) => 1.0,
        BoxSet::Segments(_) => 2.0,
    };
    Ok(DimensionEstimate {
        method: Method::BoxCount,
        per_k: scales.iter().zip(&counts).map(|(&e, &c)| (index(e), c as f64)).collect(),
        final_value: slope.clamp(0.0, ambient),
        k_window: index(scales[lo])..=index(scales[hi - 1]),
    })
}

/// Either a finite index `j` or infinite codimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JIndex {
    Finite(u32),
    Infinite,
}

impl fmt::Display for JIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JIndex::Finite(j) => write!(f, "{j}"),
            JIndex::Infinite => f.write_str("inf"),
        }
    }
}

/// `(2j+1)/(n+2j+1)`, or 1 for infinite codimension.
pub fn theoretical_dimension(n: u32, j: JIndex) -> f64 {
    match j {
        JIndex::Finite(j) => {
            let q = 2.0 * f64::from(j) + 1.0;
            q / (f64::from(n) + q)
        }
        JIndex::Infinite => 1.0,
    }
}

/// `(n+4j+1)/(n+2j+1)`.
pub fn chirp_theoretical_dimension(n: u32, j: u32) -> f64 {
    let (n, j) = (f64::from(n), f64::from(j));
    (n + 4.0 * j + 1.0) / (n + 2.0 * j + 1.0)
}

/// Snap threshold: 0.04 for `n = 2`, halved with every doubling of `n`.
pub fn default_snap_threshold(n: u32) -> f64 {
    0.08 / f64::from(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub j: JIndex,
    pub dimension: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodimensionVerdict {
    Finite { j: u32, codimension: u32 },
    Infinite,
    /// The estimate is farther than the threshold from every admissible value.
    Unresolved { below: Option<Candidate>, above: Option<Candidate> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodimensionReport {
    pub contact_order_n: u32,
    pub estimated_dimension: f64,
    pub verdict: CodimensionVerdict,
    /// Distance from the estimate to the nearest admissible dimension.
    pub snap_distance: f64,
    pub nearest: Candidate,
}

impl CodimensionReport {
    pub fn recovered_j(&self) -> Option<JIndex> {
        match self.verdict {
            CodimensionVerdict::Finite { j, .. } => Some(JIndex::Finite(j)),
            CodimensionVerdict::Infinite => Some(JIndex::Infinite),
            CodimensionVerdict::Unresolved { .. } => None,
        }
    }

    /// `"j+1"`, `"inf"` or `"unresolved"`.
    pub fn codimension_label(&self) -> String {
        match self.verdict {
            CodimensionVerdict::Finite { codimension, .. } => codimension.to_string(),
            CodimensionVerdict::Infinite => "inf".into(),
            CodimensionVerdict::Unresolved { .. } => "unresolved".into(),
        }
    }
}

/// `((n+1) D - 1) / (2 (1 - D))`, the real-valued inverse of [`theoretical_dimension`].
pub fn j_from_dimension(n: u32, d: f64) -> f64 {
    ((f64::from(n) + 1.0) * d - 1.0) / (2.0 * (1.0 - d))
}

const J_CAP: f64 = 1e9;

pub fn codimension_from_dimension(n: u32, d: f64, snap_threshold: f64) -> CodimensionReport {
    let cand = |j: JIndex| Candidate { j, dimension: theoretical_dimension(n, j) };
    let mut below = None;
    let mut above = Some(cand(JIndex::Infinite));
    if d < 1.0 {
        let jr = j_from_dimension(n, d);
        if jr < 0.0 {
            above = Some(cand(JIndex::Finite(0)));
        } else if jr < J_CAP {
            below = Some(cand(JIndex::Finite(jr.floor() as u32)));
            above = Some(cand(JIndex::Finite(jr.floor() as u32 + 1)));
        } else {
            below = Some(cand(JIndex::Finite(J_CAP as u32)));
        }
    } else {
        below = None;
    }
    let nearest = [below, above]
        .into_iter()
        .flatten()
        .min_by(|a, b| (a.dimension - d).abs().total_cmp(&(b.dimension - d).abs()))
        .expect("at least one candidate");
    let snap_distance = (nearest.dimension - d).abs();
    let verdict = if !(snap_distance <= snap_threshold) {
        CodimensionVerdict::Unresolved { below, above }
    } else {
        match nearest.j {
            JIndex::Finite(j) => CodimensionVerdict::Finite { j, codimension: j + 1 },
            JIndex::Infinite => CodimensionVerdict::Infinite,
        }
    };
    CodimensionReport { contact_order_n: n, estimated_dimension: d, verdict, snap_distance, nearest }
}

/// Fast-orbit segments between the two limit points at each height.
pub fn chirp_segments(model: &dyn SlowFastModel, seq: &FractalSequence) -> Result<Vec<Segment>> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence("no heights".into()));
    }
    seq.heights()
        .iter()
        .map(|&y| Ok(Segment { x0: model.alpha_limit(y)?, x1: model.omega_limit(y)?, y }))
        .collect()
}
