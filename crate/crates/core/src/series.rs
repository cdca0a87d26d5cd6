//! Truncated formal power series and the Lagrange-inversion route to the
//! codimension of a slow-fast Hopf point of Liénard type.
//!
//! For `F(x) = x^2 (1 - x h1(x))` the change of variable `X = Psi(x)` with
//! `Psi(x) = x sqrt(1 - x h1(x))` turns `F` into `X^2`, and the slow
//! dynamics becomes `g(X) = -Psi^-1(X) (Psi^-1)'(X) = -X + X^2 gt(X)`.
//! The first nonzero coefficient of the even part of `gt` gives the
//! codimension.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 16;
/// Coefficients below this fraction of the largest coefficient of `gt` count as zero.
pub const ZERO_REL_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-12;

/// Power series `c_0 + c_1 x + ... + c_N x^N`, known modulo `x^(N+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates `coeffs` to order `order`.
    pub fn new(coeffs: &[f64], order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Self { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0.0; order + 1] }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        Self::new(&[c], order)
    }

    /// The series `x`.
    pub fn identity(order: usize) -> Self {
        Self::new(&[0.0, 1.0], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(&self.coeffs, order.min(self.order()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiplies by `x^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![0.0; self.coeffs.len()];
        if k < c.len() {
            let n = c.len() - k;
            c[k..].copy_from_slice(&self.coeffs[..n]);
        }
        Self { coeffs: c }
    }

    /// Divides by `x^k`; the first `k` coefficients must vanish. The order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self { coeffs: self.coeffs[k.min(self.order())..].to_vec() }
    }

    /// Termwise derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..self.coeffs.len()).map(|i| i as f64 * self.coeffs[i]).collect(),
        }
    }

    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// `1 / self`; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 == 0.0 {
            return Err(Error::NotInvertible(c0));
        }
        let n = self.coeffs.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / c0;
        for i in 1..n {
            let s: f64 = (1..=i).map(|k| self.coeffs[k] * r[i - k]).sum();
            r[i] = -s / c0;
        }
        Ok(Self { coeffs: r })
    }

    /// `(1 + u)^r` for `u` without constant term, by the binomial series.
    pub fn binomial(u: &Self, r: f64) -> Result<Self> {
        if u.coeffs[0] != 0.0 {
            return Err(Error::CompositionConstantTerm(u.coeffs[0]));
        }
        let order = u.order();
        let mut out = Self::constant(1.0, order);
        let mut term = Self::constant(1.0, order);
        let mut binom = 1.0;
        for k in 1..=order {
            binom *= (r - (k as f64 - 1.0)) / k as f64;
            term = &term * u;
            out = &out + &term.scale(binom);
        }
        Ok(out)
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != 0.0 {
            return Err(Error::CompositionConstantTerm(inner.coeffs[0]));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner: c_N, then (acc * inner + c_i).
        let mut acc = Self::constant(self.coeffs[order], order);
        for i in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[i];
        }
        Ok(acc)
    }

    /// Even part `(s(x) + s(-x)) / 2`.
    pub fn even_part(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { *c } else { 0.0 })
                .collect(),
        }
    }

    pub fn odd_part(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { *c } else { 0.0 })
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n).map(|i| (self.coeffs[i] - other.coeffs[i]).abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c.abs())?,
                1 => write!(f, "{}*x", c.abs())?,
                _ => write!(f, "{}*x^{i}", c.abs())?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let mut c = vec![0.0; n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                c[i + k] += a * b;
            }
        }
        TruncatedSeries { coeffs: c }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}

pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    a + b
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
    a * b
}

pub fn series_compose(outer: &TruncatedSeries, inner: &TruncatedSeries) -> Result<TruncatedSeries> {
    outer.compose(inner)
}

/// `Psi(x) = x sqrt(1 - x h1(x))`, to the order of `h1`.
pub fn psi_from_h1(h1: &TruncatedSeries) -> Result<TruncatedSeries> {
    if h1.order() < 2 {
        return Err(Error::InvalidConfig(format!("truncation order {} of h1 must be at least 2", h1.order())));
    }
    let u = -&h1.shift_up(1);
    let root = TruncatedSeries::binomial(&u, 0.5)?;
    Ok(root.shift_up(1))
}

/// Compositional inverse of `psi = x + O(x^2)` by the Lagrange formula
/// `[X^i] Psi^-1 = (1/i) [x^(i-1)] (x / Psi(x))^i`.
pub fn series_invert(psi: &TruncatedSeries) -> Result<TruncatedSeries> {
    if psi.coeff(0) != 0.0 {
        return Err(Error::CompositionConstantTerm(psi.coeff(0)));
    }
    if (psi.coeff(1) - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotInvertible(psi.coeff(1)));
    }
    let order = psi.order();
    let phi = psi.shift_down(1).reciprocal()?;
    let mut out = vec![0.0; order + 1];
    let mut power = TruncatedSeries::constant(1.0, phi.order());
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        power = &power * &phi;
        *slot = power.coeff(i - 1) / i as f64;
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// `g = -Psi^-1 (Psi^-1)'` for `Psi` built from `h1`.
pub fn g_from_h1(h1: &TruncatedSeries) -> Result<TruncatedSeries> {
    let inv = series_invert(&psi_from_h1(h1)?)?;
    Ok(-&(&inv * &inv.derivative()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesCodimension {
    /// First nonzero even coefficient of `gt` sits at `x^(2j)`.
    Finite { j: u32, alpha: f64, codimension: u32 },
    /// Every even coefficient of `gt` through `x^order` vanishes.
    InfiniteUpTo { order: usize },
}

/// Reads the codimension off `g = -x + x^2 gt(x)`: the first index `2j` with
/// `gt(x) + gt(-x) = alpha x^(2j) + ...`, `alpha != 0`.
pub fn codimension_from_series(g: &TruncatedSeries) -> Result<SeriesCodimension> {
    if g.order() < 2 {
        return Err(Error::WrongShape(format!("order {} is below 2", g.order())));
    }
    if g.coeff(0).abs() > UNIT_TOL || (g.coeff(1) + 1.0).abs() > UNIT_TOL {
        return Err(Error::WrongShape(format!(
            "constant term {} and linear coefficient {}, expected 0 and -1",
            g.coeff(0),
            g.coeff(1)
        )));
    }
    let gt = g.shift_down(2);
    let scale = gt.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let found = gt
        .coeffs()
        .iter()
        .enumerate()
        .step_by(2)
        .find(|(_, c)| scale > 0.0 && c.abs() > ZERO_REL_TOL * scale);
    Ok(match found {
        Some((i, c)) => {
            let j = (i / 2) as u32;
            SeriesCodimension::Finite { j, alpha: 2.0 * c, codimension: j + 1 }
        }
        None => SeriesCodimension::InfiniteUpTo { order: gt.order() },
    })
}
