use crate::error::{Error, Result};
use crate::numeric::brent::{brent_with, DEFAULT_MAX_ITER};

use super::{Branch, SlowFastModel, SlowFlow};

/// Section heights above `delta` are admitted up to this fraction of `delta`.
pub const TWO_STROKE_HEIGHT_FRACTION: f64 = 0.2;

const CROSSING_REL_TOL: f64 = 1e-15;
const MAX_STEPS: usize = 10_000;
const MAX_TAYLOR_TERMS: usize = 200;

/// Two-stroke oscillator
///
/// ```text
/// x' = y (delta - y)
/// y' = (-x + alpha y)(delta - y) - eps (beta - gamma x)
/// ```
///
/// with `beta = alpha gamma delta`, which puts a slow-fast Hopf point at
/// `p = (alpha delta, delta)`. The critical curve is the line `y = delta`,
/// attracting for `x < alpha delta` and repelling for `x > alpha delta`.
/// Section heights are measured from `delta` along `x = alpha delta`.
///
/// Above the critical line the fast orbits are those of the linear system
/// `x' = y`, `y' = -x + alpha y` run backwards in time; limits are found by
/// integrating it with local Taylor series and locating the return to
/// `y = delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStrokeModel {
    alpha: f64,
    delta: f64,
    gamma: f64,
    max_height: f64,
    escape_limited: bool,
}

impl TwoStrokeModel {
    pub fn new(alpha: f64, delta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("delta", delta), ("gamma", gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        let (max_height, escape_limited) = match escape_height(alpha, delta) {
            Some(h) if h <= TWO_STROKE_HEIGHT_FRACTION * delta => (h, true),
            _ => (TWO_STROKE_HEIGHT_FRACTION * delta, false),
        };
        Ok(Self { alpha, delta, gamma, max_height, escape_limited })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    /// `alpha gamma delta`.
    pub fn beta(&self) -> f64 {
        self.alpha * self.gamma * self.delta
    }
    /// `x` coordinate of the contact point.
    pub fn contact_x(&self) -> f64 {
        self.alpha * self.delta
    }

    /// Advances `(X, Y) = (x - alpha delta, y - delta)` by reduced time `tau`.
    fn propagate(&self, z: (f64, f64), tau: f64) -> (f64, f64) {
        let (mut vx, mut vy) = (self.delta + z.1, -z.0 + self.alpha * z.1);
        let (mut sx, mut sy) = z;
        let mut coef = 1.0;
        let mut small = 0;
        for k in 1..=MAX_TAYLOR_TERMS {
            coef *= tau / k as f64;
            let (tx, ty) = (coef * vx, coef * vy);
            sx += tx;
            sy += ty;
            let size = sx.abs() + sy.abs() + f64::MIN_POSITIVE;
            if tx.abs() + ty.abs() <= 1e-18 * size {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
            let nx = vy;
            let ny = -vx + self.alpha * vy;
            vx = nx;
            vy = ny;
        }
        (sx, sy)
    }

    /// Shifted coordinate `x - alpha delta` of the limit point on `branch`.
    pub fn shifted_limit(&self, branch: Branch, h: f64) -> Result<f64> {
        self.check_height(h)?;
        // Forward fast time is backward reduced time above the critical line.
        let dir = match branch {
            Branch::Attracting => -1.0,
            Branch::Repelling => 1.0,
        };
        let tau = dir * (2.0 * h / self.delta).sqrt() / 8.0;
        let mut z = (0.0, h);
        for _ in 0..MAX_STEPS {
            let next = self.propagate(z, tau);
            if next.1 <= 0.0 {
                if next.1 == 0.0 {
                    return Ok(next.0);
                }
                let start = z;
                let root = brent_with(
                    |s| Ok(self.propagate(start, s).1),
                    0.0,
                    tau,
                    start.1,
                    next.1,
                    CROSSING_REL_TOL,
                    DEFAULT_MAX_ITER,
                )?;
                return Ok(self.propagate(start, root.x).0);
            }
            z = next;
        }
        Err(Error::NoConvergence(format!(
            "fast orbit through height {h} does not return to the critical line"
        )))
    }

    fn potential(&self, shifted: f64) -> f64 {
        shifted * shifted / (2.0 * self.gamma * self.delta)
    }
}

/// For `alpha > 2` the linear system is an unstable node and orbits through
/// heights at or above this value leave along the fast eigendirection
/// without returning to the critical line on the repelling side.
fn escape_height(alpha: f64, delta: f64) -> Option<f64> {
    if alpha <= 2.0 {
        return None;
    }
    let s = (alpha * alpha - 4.0).sqrt();
    // delta (alpha lambda_slow - 1), lambda_slow = (alpha - s) / 2
    Some(delta * (alpha - s) / (alpha + s))
}

impl SlowFastModel for TwoStrokeModel {
    fn contact_order(&self) -> u32 {
        2
    }

    fn max_height(&self) -> f64 {
        self.max_height
    }

    fn max_height_inclusive(&self) -> bool {
        !self.escape_limited
    }

    fn omega_limit(&self, h: f64) -> Result<f64> {
        Ok(self.contact_x() + self.shifted_limit(Branch::Attracting, h)?)
    }

    fn alpha_limit(&self, h: f64) -> Result<f64> {
        Ok(self.contact_x() + self.shifted_limit(Branch::Repelling, h)?)
    }

    fn limit(&self, branch: Branch, h: f64) -> Result<f64> {
        Ok(self.contact_x() + self.shifted_limit(branch, h)?)
    }

    fn sdi(&self, h_entry: f64, h_exit: f64) -> Result<f64> {
        let a = self.shifted_limit(Branch::Repelling, h_entry)?;
        let w = self.shifted_limit(Branch::Attracting, h_exit)?;
        Ok(self.potential(w) - self.potential(a))
    }

    fn sdi_diagonal(&self, h: f64) -> Result<f64> {
        let a = self.shifted_limit(Branch::Repelling, h)?;
        let w = self.shifted_limit(Branch::Attracting, h)?;
        Ok((w - a) * (w + a) / (2.0 * self.gamma * self.delta))
    }

    fn branch_density(&self, _branch: Branch, _u: f64) -> Result<f64> {
        Err(Error::InvalidParameter(
            "two-stroke potentials are differenced directly".into(),
        ))
    }

    fn branch_increment(&self, branch: Branch, h: f64, gap: f64) -> Result<f64> {
        let x1 = self.shifted_limit(branch, h)?;
        let x2 = if gap >= h { 0.0 } else { self.shifted_limit(branch, h - gap)? };
        Ok((x1 - x2) * (x1 + x2) / (2.0 * self.gamma * self.delta))
    }

    fn slow_flow(&self) -> SlowFlow {
        // dx/ds = gamma delta > 0 carries x < alpha delta into x > alpha delta.
        SlowFlow::AttractingToRepelling
    }

    fn describe(&self) -> String {
        format!(
            "twostroke(alpha={}, delta={}, gamma={}, beta={})",
            self.alpha,
            self.delta,
            self.gamma,
            self.beta()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{orientation, Orientation};

    /// Fixed-step RK4 on the reduced system in original coordinates, with
    /// linear interpolation at the crossing of `y = delta`.
    fn rk4_limit(alpha: f64, delta: f64, h: f64, dt: f64) -> f64 {
        let f = |x: f64, y: f64| (y, -x + alpha * y);
        let (mut x, mut y) = (alpha * delta, delta + h);
        loop {
            let (k1x, k1y) = f(x, y);
            let (k2x, k2y) = f(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y);
            let (k3x, k3y) = f(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y);
            let (k4x, k4y) = f(x + dt * k3x, y + dt * k3y);
            let nx = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            let ny = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            if ny <= delta {
                let s = (y - delta) / (y - ny);
                return x + s * (nx - x);
            }
            x = nx;
            y = ny;
        }
    }

    #[test]
    fn limits_match_rk4_oracle() {
        let m = TwoStrokeModel::new(1.0, 1.0, 1.0).unwrap();
        let w = m.omega_limit(0.1).unwrap();
        let a = m.alpha_limit(0.1).unwrap();
        let w_ref = rk4_limit(1.0, 1.0, 0.1, -1e-6);
        let a_ref = rk4_limit(1.0, 1.0, 0.1, 1e-6);
        assert!(w < 1.0 && a > 1.0);
        assert!((w - w_ref).abs() < 1e-9, "{w} vs {w_ref}");
        assert!((a - a_ref).abs() < 1e-9, "{a} vs {a_ref}");
    }

    #[test]
    fn limits_shrink_to_contact_point() {
        let m = TwoStrokeModel::new(2.0, 1.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for h in [1e-2, 1e-4, 1e-6] {
            let gap = (m.alpha_limit(h).unwrap() - 2.0).abs() + (m.omega_limit(h).unwrap() - 2.0).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn entry_solved_with_negative_integral() {
        let m = TwoStrokeModel::new(1.0, 1.0, 1.0).unwrap();
        let d = m.sdi_diagonal(0.05).unwrap();
        assert!(d < 0.0);
        assert!(((m.sdi(0.05, 0.05).unwrap() - d) / d).abs() < 1e-10);
        assert_eq!(orientation(&m, 0.05).unwrap(), Orientation::EntrySolved);
    }

    #[test]
    fn range_is_fraction_of_delta() {
        let m = TwoStrokeModel::new(1.0, 10.0, 1.0).unwrap();
        assert!(m.check_height(2.0).is_ok());
        assert!(m.check_height(2.01).is_err());
        assert!(TwoStrokeModel::new(1.0, 0.0, 1.0).is_err());
        assert_eq!(TwoStrokeModel::new(5.0, 10.0, 1.0).unwrap().beta(), 50.0);
    }

    #[test]
    fn node_case_stops_at_the_escape_height() {
        let m = TwoStrokeModel::new(5.0, 10.0, 1.0).unwrap();
        let s = 21f64.sqrt();
        let escape = 10.0 * (5.0 - s) / (5.0 + s);
        assert!((m.max_height() - escape).abs() < 1e-15);
        assert!(m.check_height(escape).is_err());
        for h in [0.5 * escape, 0.99 * escape] {
            assert!(m.alpha_limit(h).unwrap() > m.contact_x());
        }
        // Above the escape height the repelling orbit runs off: propagate far
        // and check the height keeps growing.
        let mut z = (0.0, 1.05 * escape);
        for _ in 0..400 {
            z = m.propagate(z, 0.05);
        }
        assert!(z.1 > 1.05 * escape);
    }
}
