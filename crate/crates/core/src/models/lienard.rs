use crate::error::{Error, Result};
use crate::numeric::brent::{brent, DEFAULT_MAX_ITER, DEFAULT_REL_TOL};
use crate::numeric::quad::{adaptive_simpson, SIMPSON_ABS_TOL, SIMPSON_REL_TOL};

use super::{Branch, SlowFastModel, SlowFlow};

/// Classical Liénard model `x' = y - F(x)`, `y' = -eps x` with
/// `F(x) = x^2 + a x^(2j+3)`.
///
/// The fast foliation is horizontal, so the limits at height `h` are the two
/// roots of `F(x) = h` around the origin: the positive one on the attracting
/// branch, the negative one on the repelling branch. The slow divergence
/// integrand in the `x` chart is `F'(x)^2 / x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalLienardModel {
    j: u32,
    a: f64,
    /// `a (2j+3)`, the coefficient of `x^(2j+1)` in `F'(x)/x - 2`.
    c: f64,
    fold: Option<f64>,
    max_height: f64,
}

/// Height cap used when `F` has no fold (only reachable through the test hook).
const NO_FOLD_MAX_HEIGHT: f64 = 0.5;

/// `sum_{i<k} x1^i x2^(k-1-i)`, the divided difference of `x^k`; expects `|x2| <= |x1|`.
fn monomial_divided_difference(x1: f64, x2: f64, k: i32) -> f64 {
    if x1 == 0.0 {
        return x2.powi(k - 1);
    }
    let r = x2 / x1;
    let mut acc = 0.0;
    for _ in 0..k {
        acc = acc * r + 1.0;
    }
    acc * x1.powi(k - 1)
}

impl ClassicalLienardModel {
    /// Builds the model. `a = 0` makes the slow divergence integral vanish
    /// identically and is rejected as degenerate.
    pub fn new(j: u32, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!("coefficient a = {a} must be finite")));
        }
        if a == 0.0 {
            return Err(Error::DegenerateModel { height: None });
        }
        Ok(Self::build(j, a))
    }

    #[cfg(test)]
    pub(crate) fn degenerate_for_tests(j: u32) -> Self {
        Self::build(j, 0.0)
    }

    fn build(j: u32, a: f64) -> Self {
        let c = a * f64::from(2 * j + 3);
        let q = f64::from(2 * j + 1);
        let (fold, max_height) = if a == 0.0 {
            (None, NO_FOLD_MAX_HEIGHT)
        } else {
            // F'(x) = x (2 + c x^(2j+1)) vanishes where x^(2j+1) = -2/c.
            let r = (2.0 / c.abs()).powf(1.0 / q);
            let xf = if c > 0.0 { -r } else { r };
            (Some(xf), xf * xf + a * xf.powi((2 * j + 3) as i32))
        };
        Self { j, a, c, fold, max_height }
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Location of the nonzero fold of `F`, if any.
    pub fn fold(&self) -> Option<f64> {
        self.fold
    }

    fn q(&self) -> i32 {
        (2 * self.j + 1) as i32
    }

    pub fn f(&self, x: f64) -> f64 {
        x * x + self.a * x.powi(self.q() + 2)
    }

    pub fn df(&self, x: f64) -> f64 {
        x * (2.0 + self.c * x.powi(self.q()))
    }

    /// Antiderivative part `P` with `int F'^2/x dx = 2 F + c P`.
    fn p_poly(&self, x: f64) -> f64 {
        let k1 = self.q() + 2;
        let k2 = 2 * self.q() + 2;
        2.0 * x.powi(k1) / f64::from(k1) + self.c * x.powi(k2) / f64::from(k2)
    }

    /// `(P(x1) - P(x2)) / (x1 - x2)`.
    fn p_divided(&self, x1: f64, x2: f64) -> f64 {
        let k1 = self.q() + 2;
        let k2 = 2 * self.q() + 2;
        2.0 * monomial_divided_difference(x1, x2, k1) / f64::from(k1)
            + self.c * monomial_divided_difference(x1, x2, k2) / f64::from(k2)
    }

    /// `(F(x1) - F(x2)) / (x1 - x2)`.
    fn f_divided(&self, x1: f64, x2: f64) -> f64 {
        (x1 + x2) + self.a * monomial_divided_difference(x1, x2, self.q() + 2)
    }

    fn root(&self, h: f64, positive: bool) -> Result<f64> {
        self.check_height(h)?;
        let s = h.sqrt();
        let far = match self.fold {
            Some(xf) if (xf > 0.0) == positive => xf,
            // F(x) >= x^2 on this side, so F(+-2 sqrt h) > h.
            _ => if positive { 2.0 * s } else { -2.0 * s },
        };
        let root = brent(|x| self.f(x) - h, 0.0, far, DEFAULT_REL_TOL, DEFAULT_MAX_ITER)?;
        Ok(root.x)
    }
}

impl SlowFastModel for ClassicalLienardModel {
    fn contact_order(&self) -> u32 {
        2
    }

    fn max_height(&self) -> f64 {
        self.max_height
    }

    fn max_height_inclusive(&self) -> bool {
        self.fold.is_none()
    }

    fn omega_limit(&self, h: f64) -> Result<f64> {
        self.root(h, true)
    }

    fn alpha_limit(&self, h: f64) -> Result<f64> {
        self.root(h, false)
    }

    fn sdi(&self, h_entry: f64, h_exit: f64) -> Result<f64> {
        let a = self.alpha_limit(h_entry)?;
        let b = self.omega_limit(h_exit)?;
        adaptive_simpson(
            |x| {
                let g = 2.0 + self.c * x.powi(self.q());
                Ok(x * g * g)
            },
            a,
            b,
            SIMPSON_ABS_TOL,
            SIMPSON_REL_TOL,
        )
    }

    fn sdi_diagonal(&self, h: f64) -> Result<f64> {
        let w = self.omega_limit(h)?;
        let a = self.alpha_limit(h)?;
        Ok(self.c * (self.p_poly(w) - self.p_poly(a)))
    }

    fn branch_density(&self, branch: Branch, u: f64) -> Result<f64> {
        let x = self.limit(branch, u)?;
        Ok(2.0 + self.c * x.powi(self.q()))
    }

    fn branch_increment(&self, branch: Branch, h: f64, gap: f64) -> Result<f64> {
        if gap == 0.0 {
            return Ok(0.0);
        }
        let x1 = self.limit(branch, h)?;
        let x2 = if gap >= h { 0.0 } else { self.limit(branch, h - gap)? };
        // E_b(h) = 2h + c P(x_b(h)); the secant of P over the secant of F
        // turns the height difference into a potential difference.
        Ok(2.0 * gap + self.c * gap * self.p_divided(x1, x2) / self.f_divided(x1, x2))
    }

    fn slow_flow(&self) -> SlowFlow {
        // x' = -x / F'(x) on the critical curve: from x > 0 (attracting) to x < 0.
        SlowFlow::AttractingToRepelling
    }

    fn describe(&self) -> String {
        format!("lienard(j={}, a={})", self.j, self.a)
    }
}
