use crate::error::{Error, Result};
use crate::numeric::quad::{adaptive_simpson, gauss_kronrod, KRONROD_REL_TOL, SIMPSON_ABS_TOL, SIMPSON_REL_TOL};

use super::{Branch, SlowFastModel, SlowFlow};

/// Largest section height accepted by the normal form, before the pole check.
pub const NORMAL_FORM_MAX_HEIGHT: f64 = 0.5;

/// Normal form with contact order `n`, singularity order `m` and
/// slow-divergence parameters `j`, `alpha`, `beta`.
///
/// At the singular limit the critical curve is `y = x^n`, the fast foliation
/// is horizontal, the limits at height `h` are `±h^(1/n)` and the slow
/// divergence integrand is `n^2 x^(2n-2-m) / (beta + alpha x^(2j+1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormModel {
    n: u32,
    m: u32,
    j: u32,
    alpha: f64,
    beta: f64,
    max_height: f64,
    pole_limited: bool,
}

impl NormalFormModel {
    pub fn new(n: u32, m: u32, j: u32, alpha: f64, beta: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("contact order n = {n} must be even and >= 2")));
        }
        if m.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("singularity order m = {m} must be odd")));
        }
        if m > 2 * (n - 1) {
            return Err(Error::InvalidParameter(format!("singularity order m = {m} exceeds 2(n-1) = {}", 2 * (n - 1))));
        }
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} must be finite and nonzero")));
        }
        if beta != 1.0 && beta != -1.0 {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be +1 or -1")));
        }
        let q = f64::from(2 * j + 1);
        // Height at which beta -/+ alpha w^q vanishes on one of the branches.
        let pole = (1.0 / alpha.abs()).powf(f64::from(n) / q);
        let (max_height, pole_limited) = if pole <= NORMAL_FORM_MAX_HEIGHT {
            (pole, true)
        } else {
            (NORMAL_FORM_MAX_HEIGHT, false)
        };
        Ok(Self { n, m, j, alpha, beta, max_height, pole_limited })
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn j(&self) -> u32 {
        self.j
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn p(&self) -> i32 {
        (2 * self.n - 2 - self.m) as i32
    }

    fn q(&self) -> i32 {
        (2 * self.j + 1) as i32
    }

    /// The slow divergence integrand on the critical curve, in the `x` chart.
    pub fn integrand(&self, x: f64) -> f64 {
        let n = f64::from(self.n);
        n * n * x.powi(self.p()) / (self.beta + self.alpha * x.powi(self.q()))
    }
}

impl SlowFastModel for NormalFormModel {
    fn contact_order(&self) -> u32 {
        self.n
    }

    fn max_height(&self) -> f64 {
        self.max_height
    }

    fn max_height_inclusive(&self) -> bool {
        !self.pole_limited
    }

    fn omega_limit(&self, h: f64) -> Result<f64> {
        self.check_height(h)?;
        Ok(h.powf(1.0 / f64::from(self.n)))
    }

    fn alpha_limit(&self, h: f64) -> Result<f64> {
        self.check_height(h)?;
        Ok(-h.powf(1.0 / f64::from(self.n)))
    }

    fn sdi(&self, h_entry: f64, h_exit: f64) -> Result<f64> {
        let a = self.alpha_limit(h_entry)?;
        let b = self.omega_limit(h_exit)?;
        let v = adaptive_simpson(|x| Ok(self.integrand(x)), a, b, SIMPSON_ABS_TOL, SIMPSON_REL_TOL)?;
        Ok(-v)
    }

    fn sdi_diagonal(&self, h: f64) -> Result<f64> {
        self.check_height(h)?;
        let w = h.powf(1.0 / f64::from(self.n));
        let n = f64::from(self.n);
        let (pq, q2) = (self.p() + self.q(), 2 * self.q());
        let a2 = self.alpha * self.alpha;
        // Odd part of the integrand folded onto [0, w]; the two branches never subtract.
        let v = gauss_kronrod(
            |x| Ok(x.powi(pq) / (1.0 - a2 * x.powi(q2))),
            0.0,
            w,
            0.0,
            KRONROD_REL_TOL,
        )?;
        Ok(2.0 * self.alpha * n * n * v)
    }

    fn branch_density(&self, branch: Branch, u: f64) -> Result<f64> {
        let n = f64::from(self.n);
        let lead = u.powf((f64::from(self.n) - 1.0 - f64::from(self.m)) / n);
        let wq = u.powf(f64::from(self.q()) / n);
        let denom = match branch {
            Branch::Attracting => self.beta + self.alpha * wq,
            Branch::Repelling => self.beta - self.alpha * wq,
        };
        Ok(-n * lead / denom)
    }

    fn slow_flow(&self) -> SlowFlow {
        if self.beta > 0.0 {
            SlowFlow::RepellingToAttracting
        } else {
            SlowFlow::AttractingToRepelling
        }
    }

    fn describe(&self) -> String {
        format!(
            "normalform(n={}, m={}, j={}, alpha={}, beta={})",
            self.n, self.m, self.j, self.alpha, self.beta
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{orientation, Orientation};

    #[test]
    fn rejects_bad_parameters() {
        assert!(NormalFormModel::new(3, 1, 0, 1.0, 1.0).is_err());
        assert!(NormalFormModel::new(2, 2, 0, 1.0, 1.0).is_err());
        assert!(NormalFormModel::new(2, 3, 0, 1.0, 1.0).is_err());
        assert!(NormalFormModel::new(2, 1, 0, 0.0, 1.0).is_err());
        assert!(NormalFormModel::new(2, 1, 0, 1.0, 0.5).is_err());
        assert!(NormalFormModel::new(4, 5, 0, 1.0, -1.0).is_ok());
    }

    #[test]
    fn limits_are_roots_of_height() {
        let m = NormalFormModel::new(2, 1, 0, 1.0, 1.0).unwrap();
        assert!((m.omega_limit(0.04).unwrap() - 0.2).abs() < 1e-15);
        assert!((m.alpha_limit(0.04).unwrap() + 0.2).abs() < 1e-15);
        assert!(m.omega_limit(0.6).is_err());
        assert!(m.omega_limit(0.0).is_err());
    }

    #[test]
    fn sdi_matches_log_antiderivative() {
        let m = NormalFormModel::new(2, 1, 0, -1.0, -1.0).unwrap();
        // integrand 4x/(-1 - x); the integral of 4x/(1+x) is 4(x - ln(1+x)).
        let exact = 4.0 * ((0.1 - 1.1f64.ln()) - (-0.1 - 0.9f64.ln()));
        assert!((exact + 2.6828e-3).abs() < 1e-7);
        let direct = m.sdi(0.01, 0.01).unwrap();
        let diag = m.sdi_diagonal(0.01).unwrap();
        assert!(((direct - exact) / exact).abs() < 1e-10, "{direct} vs {exact}");
        assert!(((diag - exact) / exact).abs() < 1e-12, "{diag} vs {exact}");
    }

    #[test]
    fn branch_potentials_split_the_integral() {
        let m = NormalFormModel::new(4, 3, 1, 2.0, 1.0).unwrap();
        let (y, yt) = (0.02, 0.013);
        let direct = m.sdi(y, yt).unwrap();
        // I(y, yt) = I(y, y) + E_w(yt) - E_w(y)
        let split = m.sdi_diagonal(y).unwrap() - m.branch_increment(Branch::Attracting, y, y - yt).unwrap();
        assert!(((direct - split) / direct).abs() < 1e-9, "{direct} vs {split}");
        let split2 = m.sdi_diagonal(yt).unwrap() - m.branch_increment(Branch::Repelling, y, y - yt).unwrap();
        assert!(((direct - split2) / direct).abs() < 1e-9, "{direct} vs {split2}");
    }

    #[test]
    fn orientation_follows_sign_and_slow_flow() {
        let plus = NormalFormModel::new(2, 1, 0, 1.0, 1.0).unwrap();
        let minus = NormalFormModel::new(2, 1, 0, 1.0, -1.0).unwrap();
        assert_eq!(orientation(&plus, 0.01).unwrap(), Orientation::EntrySolved);
        assert_eq!(orientation(&minus, 0.01).unwrap(), Orientation::ExitSolved);
        assert!(plus.sdi_diagonal(1e-3).unwrap() > 0.0);
        assert!(minus.sdi_diagonal(1e-3).unwrap() > 0.0);
    }

    #[test]
    fn pole_caps_the_admissible_range() {
        let m = NormalFormModel::new(10, 9, 5, 5.0, 1.0).unwrap();
        let pole = 5f64.powf(-10.0 / 11.0);
        assert!((m.max_height() - pole).abs() < 1e-15);
        let pole = m.max_height();
        assert!(m.check_height(pole).is_err());
        assert!(m.check_height(0.1).is_ok());
    }
}
