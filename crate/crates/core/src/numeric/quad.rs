//! Adaptive quadrature: recursive Simpson and globally adaptive Gauss-Kronrod (7/15).
//!
//! Integrands are fallible so that callers can integrate quantities that
//! themselves require a root solve at every node.

use crate::error::{Error, Result};

/// Absolute tolerance for the Simpson rule used by the plain slow divergence integral.
pub const SIMPSON_ABS_TOL: f64 = 1e-12;
/// Relative tolerance for the Simpson rule used by the plain slow divergence integral.
pub const SIMPSON_REL_TOL: f64 = 1e-10;
/// Relative tolerance for the Gauss-Kronrod rule on well-conditioned pieces.
pub const KRONROD_REL_TOL: f64 = 1e-13;

const SIMPSON_MAX_DEPTH: u32 = 48;
const KRONROD_MAX_INTERVALS: usize = 4000;

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// The local acceptance test uses Richardson's `|S2 - S1| <= 15 eps`, where
/// `eps` is the larger of `abs_tol` and `rel_tol` times the coarse estimate of
/// the integral of `|f|`.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = (b - a).abs() / 6.0 * (fa.abs() + 4.0 * fm.abs() + fb.abs());
    let eps = abs_tol.max(rel_tol * scale);

    struct Ctx<'f, F> {
        f: &'f mut F,
        failed: Option<(f64, f64, f64)>,
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(f64) -> Result<f64>>(
        ctx: &mut Ctx<'_, F>,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> Result<f64> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (ctx.f)(lm)?;
        let frm = (ctx.f)(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * eps || depth == 0 {
            if depth == 0 && delta.abs() > 15.0 * eps && ctx.failed.is_none() {
                ctx.failed = Some((a, b, delta.abs() / 15.0));
            }
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(ctx, a, fa, lm, flm, m, fm, left, 0.5 * eps, depth - 1)?
            + recurse(ctx, m, fm, rm, frm, b, fb, right, 0.5 * eps, depth - 1)?)
    }

    let mut ctx = Ctx { f: &mut f, failed: None };
    let value = recurse(&mut ctx, a, fa, m, fm, b, fb, whole, eps, SIMPSON_MAX_DEPTH)?;
    match ctx.failed {
        Some((a, b, estimate)) => Err(Error::QuadratureFailure { a, b, estimate }),
        None => Ok(value),
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    let result = kron * h;
    let err = ((kron - gauss) * h).abs();
    Ok((result, err))
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below `max(abs_tol, rel_tol * |I|)`.
pub fn gauss_kronrod<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let (r0, e0) = kronrod15(&mut f, a, b)?;
    let mut pieces = vec![(a, b, r0, e0)];
    let mut total = r0;
    let mut err = e0;
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        // Rounding floor: once the estimate is at the level of machine noise it cannot shrink further.
        if err <= tol || err <= 64.0 * f64::EPSILON * total.abs() {
            return Ok(total);
        }
        if pieces.len() >= KRONROD_MAX_INTERVALS {
            return Err(Error::QuadratureFailure { a, b, estimate: err });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (pa, pb, pr, pe) = pieces.swap_remove(idx);
        let pm = 0.5 * (pa + pb);
        if pm <= pa.min(pb) || pm >= pa.max(pb) {
            return Err(Error::QuadratureFailure { a, b, estimate: err });
        }
        let (lr, le) = kronrod15(&mut f, pa, pm)?;
        let (rr, re) = kronrod15(&mut f, pm, pb)?;
        total += lr + rr - pr;
        err += le + re - pe;
        pieces.push((pa, pm, lr, le));
        pieces.push((pm, pb, rr, re));
        // Re-sum periodically so the running totals do not drift.
        if pieces.len() % 64 == 0 {
            total = pieces.iter().map(|p| p.2).sum();
            err = pieces.iter().map(|p| p.3).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_exact() {
        let v = adaptive_simpson(|x| Ok(x * x * x - x), 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn simpson_log_antiderivative() {
        // 4 x / (1 + x) on [-0.1, 0.1] has antiderivative 4 (x - ln(1 + x)).
        let v = adaptive_simpson(|x| Ok(4.0 * x / (1.0 + x)), -0.1, 0.1, SIMPSON_ABS_TOL, SIMPSON_REL_TOL)
            .unwrap();
        let exact = 4.0 * ((0.1 - 1.1f64.ln()) - (-0.1 - 0.9f64.ln()));
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn kronrod_smooth_and_sqrt_endpoint() {
        let v = gauss_kronrod(|x| Ok(x.exp()), 0.0, 1.0, 0.0, 1e-14).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
        let v = gauss_kronrod(|x| Ok(x.sqrt()), 0.0, 1.0, 0.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kronrod_propagates_integrand_errors() {
        let r = gauss_kronrod(
            |x| if x > 0.5 { Err(Error::NoConvergence("x".into())) } else { Ok(1.0) },
            0.0,
            1.0,
            0.0,
            1e-12,
        );
        assert!(r.is_err());
    }
}
