//! Brent's bracketing root finder.
//!
//! Combines bisection, secant and inverse quadratic interpolation. The
//! tolerance is relative to the current iterate, with an absolute floor at the
//! smallest positive normal double, so roots many orders of magnitude below
//! the bracket width are still resolved to full relative precision.

use crate::error::{Error, Result};

/// Relative tolerance used by every bracketing solve unless overridden.
pub const DEFAULT_REL_TOL: f64 = 1e-14;
/// Iteration cap for a single bracketing solve.
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Finds a root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite sign
/// (or one of them zero). `f` may fail; failures are propagated.
pub fn brent_with<F>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoConvergence(format!(
            "root not bracketed: f({a:e}) = {fa:e}, f({b:e}) = {fb:e}"
        )));
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, fx: fb, iterations: iter });
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::NoConvergence(format!("non-finite function value at {b:e}")));
        }
    }
    Err(Error::NoConvergence(format!(
        "Brent iteration cap ({max_iter}) reached near {b:e}"
    )))
}

/// Convenience form of [`brent_with`] for infallible functions.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    brent_with(|x| Ok(f(x)), a, b, fa, fb, rel_tol, max_iter)
}

/// Expands `[0, x]` geometrically (x, 2x, 4x, ...) until `f` changes sign
/// relative to `f0 = f(0)`. Returns the bracket `(lo, hi, f(lo), f(hi))`.
pub fn expand_from_zero<F>(
    mut f: F,
    f0: f64,
    start: f64,
    limit: f64,
) -> Result<(f64, f64, f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut flo = f0;
    let mut hi = start.min(limit);
    loop {
        let fhi = f(hi)?;
        if fhi.signum() != f0.signum() || fhi == 0.0 {
            return Ok((lo, hi, flo, fhi));
        }
        if hi >= limit {
            return Err(Error::NoConvergence(format!(
                "no sign change found on [0, {limit:e}]"
            )));
        }
        lo = hi;
        flo = fhi;
        hi = (2.0 * hi).min(limit);
    }
}
