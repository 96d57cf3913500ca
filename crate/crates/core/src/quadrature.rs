//! Quadrature rules shared by the operators, the norms and the oracles.

use crate::error::{FracError, Result};
use crate::grid::{GridFunction, PowerTerm, Side};
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

/// Sum in fixed-size blocks combined pairwise; the order depends only on the
/// length, so results are independent of how callers are scheduled.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if v.len() <= BLOCK {
        return v.iter().sum();
    }
    let mid = (v.len() / 2).div_ceil(BLOCK) * BLOCK;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// `sum_{k < len} term(k)` in blocks of 64, combined pairwise.
pub(crate) fn blocked_dot(len: usize, term: impl Fn(usize) -> f64) -> f64 {
    const BLOCK: usize = 64;
    if len <= BLOCK {
        return (0..len).map(&term).sum();
    }
    let blocks: Vec<f64> = (0..len.div_ceil(BLOCK))
        .map(|b| (b * BLOCK..((b + 1) * BLOCK).min(len)).map(&term).sum())
        .collect();
    pairwise_sum(&blocks)
}

/// Trapezoid rule on nodal values with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner = pairwise_sum(&values[1..n - 1]);
    h * (inner + 0.5 * (values[0] + values[n - 1]))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(10))
}

/// Ten-point Gauss-Legendre on `[lo, hi]`.
pub fn gl_panel(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (x, w) = gl10();
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    r * x
        .iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(c + r * xi))
        .sum::<f64>()
}

const TS_TMAX: f64 = 4.0;

/// Tanh-sinh quadrature on `[lo, hi]`, refined level by level until two
/// successive estimates agree to `tol` (absolute). Endpoints are never
/// evaluated, so integrable endpoint singularities are allowed.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (value, err) = tanh_sinh_estimate(&f, lo, hi, tol, 12)?;
    if err > tol {
        return Err(FracError::Quadrature(format!(
            "tanh-sinh on [{lo}, {hi}] stalled at error {err:.3e} (target {tol:.1e})"
        )));
    }
    Ok(value)
}

/// Like [`tanh_sinh`] but returns the best estimate and its error instead of
/// failing on the budget.
pub fn tanh_sinh_estimate(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    max_level: u32,
) -> Result<(f64, f64)> {
    if hi <= lo {
        return Ok((0.0, 0.0));
    }
    let half = 0.5 * (hi - lo);
    let eval = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        // distance from the nearer endpoint, computed without cancellation
        let d = half * 2.0 / (1.0 + (2.0 * u.abs()).exp());
        if d == 0.0 || w == 0.0 {
            return Ok(0.0);
        }
        let x = if t >= 0.0 { hi - d } else { lo + d };
        if x <= lo || x >= hi {
            return Ok(0.0);
        }
        let y = f(x);
        if !y.is_finite() {
            return Err(FracError::Quadrature(format!(
                "integrand not finite at {x}"
            )));
        }
        Ok(w * y)
    };
    let mut step = 1.0;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while k as f64 * step <= TS_TMAX {
        let t = k as f64 * step;
        sum += eval(t)? + eval(-t)?;
        k += 1;
    }
    let mut prev = sum * step * half;
    let mut err = f64::INFINITY;
    for _ in 1..=max_level {
        step *= 0.5;
        let mut k = 1;
        while k as f64 * step <= TS_TMAX {
            let t = k as f64 * step;
            sum += eval(t)? + eval(-t)?;
            k += 2;
        }
        let cur = sum * step * half;
        err = (cur - prev).abs();
        prev = cur;
        if err <= tol {
            break;
        }
    }
    Ok((prev, err))
}

/// Relative accuracy reachable when the integrand is evaluated at `end + d`:
/// the rounding of `d` limits how well the singular factor is resolved.
const SINGULAR_FLOOR: f64 = 1e-9;

/// Closest approach to a singular end in the substituted quadratures.
const MIN_DIST: f64 = 1e-250;

fn substituted_estimate(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    e: f64,
    at_lo: bool,
    tol: f64,
    max_level: u32,
) -> Result<(f64, f64)> {
    let q = 1.0 / (1.0 + e);
    let top = (hi - lo).powf(1.0 + e);
    let end = if at_lo { lo } else { hi };
    // With d = sigma^q, dt/dsigma = q sigma^(q - 1) = q d^(-e), which cancels
    // the singular factor. The factor uses the distance of the rounded node
    // from the end. Distances below MIN_DIST are clamped: in sigma the
    // integrand tends to a constant there, and evaluating f closer to the
    // end would overflow.
    let g = |sig: f64| {
        let d = sig.powf(q).max(MIN_DIST);
        let mut x = if at_lo { lo + d } else { hi - d };
        if x == end {
            x = if at_lo { end.next_up() } else { end.next_down() };
        }
        q * (x - end).abs().powf(-e) * f(x)
    };
    tanh_sinh_estimate(&g, 0.0, top, tol, max_level)
}

fn singular_end(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    e: f64,
    at_lo: bool,
    tol: f64,
) -> Result<f64> {
    let (v, err) = substituted_estimate(f, lo, hi, e, at_lo, tol, 12)?;
    if err > tol.max(SINGULAR_FLOOR * (1.0 + v.abs())) {
        return Err(FracError::Quadrature(format!(
            "singular quadrature on [{lo}, {hi}] stalled at error {err:.3e} (target {tol:.1e})"
        )));
    }
    Ok(v)
}

/// `int_lo^hi f`, with `f` behaving like `(t - lo)^e` near `lo`, through the
/// substitution `t = lo + sigma^(1 / (1 + e))`.
pub fn integrate_left_singular(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    e: f64,
    tol: f64,
) -> Result<f64> {
    singular_end(f, lo, hi, e, true, tol)
}

/// Mirror of [`integrate_left_singular`] for a singularity at `hi`.
pub fn integrate_right_singular(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    e: f64,
    tol: f64,
) -> Result<f64> {
    singular_end(f, lo, hi, e, false, tol)
}

/// Tanh-sinh after the substitution that cancels a `(t - end)^e` factor at
/// the chosen end (`e < 0`); plain tanh-sinh for bounded kinks.
fn substituted(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    e: f64,
    at_lo: bool,
    tol: f64,
) -> Result<f64> {
    if e >= 0.0 {
        return Ok(tanh_sinh_estimate(f, lo, hi, tol, 10)?.0);
    }
    let top = (hi - lo).powf(1.0 + e);
    Ok(substituted_estimate(f, lo, hi, e, at_lo, tol * top / (hi - lo), 10)?.0)
}

fn is_integer(e: f64) -> bool {
    e == e.round()
}

/// `int_a^b g(f_1(x), ..., f_k(x)) dx` for grid functions on a common
/// interval, using each function's full representation. Panels are cut at the
/// nodes of every grid and at every term anchor; panels touching the anchor of
/// a non-polynomial term go through tanh-sinh, the rest through Gauss-Legendre.
pub fn integrate_repr(fs: &[&GridFunction], g: impl Fn(&[f64]) -> f64 + Sync) -> Result<f64> {
    let first = fs
        .first()
        .ok_or_else(|| FracError::domain("no functions to integrate"))?;
    let interval = first.grid().interval();
    if fs.iter().any(|f| f.grid().interval() != interval) {
        return Err(FracError::GridMismatch);
    }
    let mut cuts: Vec<f64> = Vec::new();
    for f in fs {
        cuts.extend(f.grid().nodes());
        cuts.extend(f.terms().iter().map(|t| t.anchor));
    }
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * interval.length());
    let special: Vec<PowerTerm> = fs
        .iter()
        .flat_map(|f| f.terms().iter().copied())
        .filter(|t| !is_integer(t.exponent))
        .collect();
    let integrand = |x: f64| {
        let mut buf = [0.0f64; 8];
        for (k, f) in fs.iter().enumerate() {
            buf[k] = f.eval(x);
        }
        g(&buf[..fs.len()])
    };
    use rayon::prelude::*;
    let parts: Vec<f64> = cuts
        .par_windows(2)
        .map(|w| -> Result<f64> {
            let (p, q) = (w[0], w[1]);
            let worst = |side: Side, at: f64| {
                special
                    .iter()
                    .filter(|t| t.side == side && t.anchor == at)
                    .map(|t| t.exponent)
                    .fold(None, |m: Option<f64>, e| Some(m.map_or(e, |m| m.min(e))))
            };
            let left = worst(Side::LeftAPlus, p);
            let right = worst(Side::RightBMinus, q);
            let tol = 1e-14 * (q - p).max(1e-300);
            match (left, right) {
                (None, None) => Ok(gl_panel(&integrand, p, q)),
                (Some(e), None) => substituted(&integrand, p, q, e, true, tol),
                (None, Some(e)) => substituted(&integrand, p, q, e, false, tol),
                (Some(e), Some(f)) => {
                    let m = 0.5 * (p + q);
                    Ok(substituted(&integrand, p, m, e, true, tol)?
                        + substituted(&integrand, m, q, f, false, tol)?)
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let v = tanh_sinh(|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
        let v = integrate_left_singular(&|t: f64| t.powf(-0.9), 0.0, 1.0, -0.9, 1e-12).unwrap();
        assert!((v - 10.0).abs() < 1e-10);
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-12);
        assert!((trapezoid(&[1.0, 1.0, 1.0], 0.5) - 1.0).abs() < 1e-16);
    }
}
