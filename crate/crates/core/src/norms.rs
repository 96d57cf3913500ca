//! Norms, seminorms and functionals used by the embedding and inequality
//! checks.

use crate::derivative::{frac_deriv, DerivKind};
use crate::error::{FracError, Result};
use crate::grid::{GridFunction, Side};
use crate::integral::frac_int;
use crate::order::FracOrder;
use crate::quadrature::{blocked_dot, integrate_repr, pairwise_sum, trapezoid};
use crate::report::diverges;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Growth factor per refinement that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum NormKind {
    Lp { p: f64 },
    WeakLp { p: f64 },
    Gagliardo { s: f64, p: f64 },
    Holder { beta: f64 },
    Bv,
    RlSobolev { s: f64, p: f64 },
    Hardy { s: f64, p: f64 },
}

/// A finite value, or the string `"infinite"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueOrFlag {
    Value(f64),
    Flag(String),
}

impl ValueOrFlag {
    pub fn of(v: f64) -> Self {
        if v.is_finite() {
            ValueOrFlag::Value(v)
        } else {
            ValueOrFlag::Flag("infinite".into())
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            ValueOrFlag::Value(v) => *v,
            ValueOrFlag::Flag(_) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: usize,
    pub value: f64,
}

/// A norm value, optionally with the ladder that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub kind: NormKind,
    pub value_or_flag: ValueOrFlag,
    #[serde(default)]
    pub ladder: Vec<LadderPoint>,
    /// Sustained growth of at least [`DIVERGENCE_FACTOR`] over three or
    /// more levels.
    #[serde(default)]
    pub diverging: bool,
}

impl NormReport {
    pub fn single(kind: NormKind, n: usize, value: f64) -> Self {
        NormReport {
            kind,
            value_or_flag: ValueOrFlag::of(value),
            ladder: vec![LadderPoint { n, value }],
            diverging: false,
        }
    }

    /// Last value is the headline; divergence is judged on the whole ladder.
    pub fn from_ladder(kind: NormKind, points: Vec<LadderPoint>) -> Self {
        let values: Vec<f64> = points.iter().map(|p| p.value).collect();
        let last = values.last().copied().unwrap_or(0.0);
        let diverging =
            values.iter().any(|v| v.is_infinite()) || diverges(&values, DIVERGENCE_FACTOR, 3);
        NormReport {
            kind,
            value_or_flag: ValueOrFlag::of(last),
            ladder: points,
            diverging,
        }
    }

    pub fn value(&self) -> f64 {
        self.value_or_flag.value()
    }

    pub fn values(&self) -> Vec<f64> {
        self.ladder.iter().map(|p| p.value).collect()
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(FracError::domain(format!("p must be at least 1, got {p}")));
    }
    Ok(())
}

fn powp(x: f64, p: f64) -> f64 {
    let x = x.abs();
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// `||u||_p` (`p = inf` allowed). Plain data uses the trapezoid rule on
/// `|u|^p`; data with power terms is integrated through its exact
/// representation, and is infinite when a term is not `p`-integrable.
pub fn lp_norm(u: &GridFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(u.values().iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    if u.is_plain() {
        let w: Vec<f64> = u.values().iter().map(|v| powp(*v, p)).collect();
        return Ok(trapezoid(&w, u.grid().h()).powf(1.0 / p));
    }
    if u.terms().iter().any(|t| t.exponent * p <= -1.0) {
        return Ok(f64::INFINITY);
    }
    Ok(integrate_repr(&[u], |v| powp(v[0], p))?.powf(1.0 / p))
}

/// `int u v` (trapezoid for plain data, exact representation otherwise).
pub fn inner(u: &GridFunction, v: &GridFunction) -> Result<f64> {
    if u.grid() != v.grid() {
        return Err(FracError::GridMismatch);
    }
    if u.is_plain() && v.is_plain() {
        let w: Vec<f64> = u
            .values()
            .iter()
            .zip(v.values())
            .map(|(x, y)| x * y)
            .collect();
        return Ok(trapezoid(&w, u.grid().h()));
    }
    integrate_repr(&[u, v], |w| w[0] * w[1])
}

/// Geometric samples per halving of the distance to a singular anchor. The
/// interpolation error of a power profile on a geometric mesh does not shrink
/// with `h`, only with the mesh ratio. `GEOMETRIC_STEPS` reach `2^-60 h`.
const STEPS_PER_OCTAVE: f64 = 8.0;
const GEOMETRIC_STEPS: usize = 480;

/// A profile sample at `base + off`. Near a singular anchor `base` is the
/// anchor and `off` the exact offset, so lengths between such samples are
/// not quantized by roundoff.
#[derive(Clone, Copy)]
struct Sample {
    base: f64,
    off: f64,
    y: f64,
}

impl Sample {
    fn x(&self) -> f64 {
        self.base + self.off
    }

    fn dist_to(&self, next: &Sample) -> f64 {
        if self.base == next.base {
            next.off - self.off
        } else {
            (next.base - self.base) + (next.off - self.off)
        }
    }
}

/// Pieces `(y0, y1, len)` of a piecewise-linear surrogate of `|u|`: the
/// nodes, zero crossings, and geometric refinements towards the anchors of
/// singular terms, where the anchored terms are evaluated at the exact offset.
fn abs_profile(u: &GridFunction) -> Vec<(f64, f64, f64)> {
    let grid = u.grid();
    let h = grid.h();
    let reg = u.regular();
    let regular_at = |x: f64| {
        let (i, theta) = grid.locate(x);
        if i + 1 < reg.len() {
            reg[i] + theta * (reg[i + 1] - reg[i])
        } else {
            reg[i]
        }
    };
    let mut anchors: Vec<(usize, f64)> = u
        .terms()
        .iter()
        .filter(|t| t.is_singular())
        .filter_map(|t| grid.node_at(t.anchor).map(|j| (j, t.anchor)))
        .collect();
    anchors.dedup();
    // value at t + off with the terms anchored at t taken at the exact offset
    let value = |t: f64, off: f64| {
        let x = t + off;
        let terms: f64 = u
            .terms()
            .iter()
            .map(|term| {
                if term.anchor != t {
                    return term.eval(x);
                }
                let d = match term.side {
                    Side::LeftAPlus => off,
                    Side::RightBMinus => -off,
                };
                if d > 0.0 {
                    term.coef * d.powf(term.exponent)
                } else {
                    0.0
                }
            })
            .sum();
        regular_at(x) + terms
    };
    // whether the terms anchored at t blow up on the (left, right) side
    let singular_sides = |t: f64| {
        let on = |side| u.terms().iter().any(|x| x.anchor == t && x.is_singular() && x.side == side);
        (on(Side::RightBMinus), on(Side::LeftAPlus))
    };
    let mut pts: Vec<Sample> = Vec::with_capacity(grid.len() + 1000 * anchors.len());
    for j in 0..grid.len() {
        let Some(&(_, t)) = anchors.iter().find(|(k, _)| *k == j) else {
            pts.push(Sample { base: grid.node(j), off: 0.0, y: u.values()[j] });
            continue;
        };
        // approach the anchor geometrically from both sides, out to the ends:
        // the first uniform cells have ratios 2, 3/2, ... and would bias the
        // profile at every h
        let outward = (STEPS_PER_OCTAVE * (grid.interval().length() / h).log2()).ceil() as i64;
        for k in -outward..=GEOMETRIC_STEPS as i64 {
            let d = h * (-(k as f64) / STEPS_PER_OCTAVE).exp2();
            if t - d >= grid.a() {
                pts.push(Sample { base: t, off: -d, y: value(t, -d) });
            }
            if t + d <= grid.b() {
                pts.push(Sample { base: t, off: d, y: value(t, d) });
            }
        }
    }
    pts.sort_by(|p, q| p.x().total_cmp(&q.x()).then(p.off.total_cmp(&q.off)));
    let mut out = Vec::with_capacity(pts.len() + 16);
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let len = p.dist_to(&q);
        if !(len > 0.0) {
            continue;
        }
        if p.base == q.base && p.off < 0.0 && q.off > 0.0 {
            // across the anchor: a singular side stays above its last sample
            let (left, right) = singular_sides(p.base);
            let y0 = value(p.base, 0.0).abs();
            let yl = if left { p.y.abs() } else { y0 };
            let yr = if right { q.y.abs() } else { y0 };
            out.push((p.y.abs(), yl, -p.off));
            out.push((yr, q.y.abs(), q.off));
            continue;
        }
        if p.y * q.y < 0.0 {
            let theta = p.y / (p.y - q.y);
            out.push((p.y.abs(), 0.0, theta * len));
            out.push((0.0, q.y.abs(), (1.0 - theta) * len));
        } else {
            out.push((p.y.abs(), q.y.abs(), len));
        }
    }
    out
}

/// `sup_t t |{|u| >= t}|^(1/p)` for the piecewise-linear surrogate of `|u|`,
/// evaluated at every sample level. The distribution function of a
/// piecewise-linear profile is a sum of ramps in `t`; the levels are swept
/// from the top down so that the accumulated sums stay comparable to the
/// measure being computed.
pub fn weak_lp_quasinorm(u: &GridFunction, p: f64) -> Result<f64> {
    check_p(p)?;
    // pieces (lo, hi, len): measure len for t <= lo, len (hi - t) / (hi - lo)
    // for lo < t <= hi
    let pieces: Vec<(f64, f64, f64)> =
        abs_profile(u).into_iter().map(|(y0, y1, len)| (y0.min(y1), y0.max(y1), len)).collect();
    let mut by_hi: Vec<usize> = (0..pieces.len()).collect();
    by_hi.sort_by(|&i, &j| pieces[j].1.total_cmp(&pieces[i].1));
    let mut by_lo = by_hi.clone();
    by_lo.sort_by(|&i, &j| pieces[j].0.total_cmp(&pieces[i].0));
    let mut levels: Vec<f64> = pieces.iter().flat_map(|q| [q.0, q.1]).filter(|y| *y > 0.0).collect();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let (mut hi_i, mut lo_i) = (0usize, 0usize);
    // ramps with lo < t <= hi contribute sum(slope hi) - t sum(slope)
    let (mut slope_sum, mut slope_hi) = (0.0, 0.0);
    let mut full = 0.0;
    let mut best = 0.0f64;
    for &t in &levels {
        while hi_i < by_hi.len() && pieces[by_hi[hi_i]].1 >= t {
            let (lo, hi, len) = pieces[by_hi[hi_i]];
            if hi > lo {
                slope_sum += len / (hi - lo);
                slope_hi += len * hi / (hi - lo);
            }
            hi_i += 1;
        }
        while lo_i < by_lo.len() && pieces[by_lo[lo_i]].0 >= t {
            let (lo, hi, len) = pieces[by_lo[lo_i]];
            if hi > lo {
                slope_sum -= len / (hi - lo);
                slope_hi -= len * hi / (hi - lo);
            }
            full += len;
            lo_i += 1;
        }
        let m = (full + slope_hi - t * slope_sum).max(0.0);
        best = best.max(t * m.powf(1.0 / p));
    }
    Ok(best)
}

/// Gagliardo seminorm `[u]_{W^{s,p}}` of the interpolant on one grid.
///
/// Cell pairs two or more apart use the midpoint rule; the same-cell and
/// adjacent-cell blocks use the exact integral of `|slope|^p |x - y|^(p-sp-1)`,
/// the local behavior of the interpolant.
pub fn gagliardo_seminorm(u: &GridFunction, s: FracOrder, p: f64) -> Result<f64> {
    check_p(p)?;
    let sv = s.value();
    let v = u.values();
    let n = u.grid().n();
    let h = u.grid().h();
    let q = p - sv * p;
    let slope: Vec<f64> = v.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mid: Vec<f64> = v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let same = 2.0 * h.powf(q + 1.0) / (q * (q + 1.0));
    let adjacent = ((2.0 * h).powf(q + 1.0) - 2.0 * h.powf(q + 1.0)) / (q * (q + 1.0));
    let kernel: Vec<f64> = (0..n)
        .map(|m| h * h * (m as f64 * h).powf(-(sv * p + 1.0)))
        .collect();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut r = powp(slope[i], p) * same;
            if i + 1 < n {
                r += 2.0 * powp(0.5 * (slope[i] + slope[i + 1]), p) * adjacent;
            }
            if i + 2 < n {
                let far = blocked_dot(n - i - 2, |k| {
                    let m = k + 2;
                    powp(mid[i + m] - mid[i], p) * kernel[m]
                });
                r += 2.0 * far;
            }
            r
        })
        .collect();
    Ok(pairwise_sum(&rows).powf(1.0 / p))
}

/// Gagliardo seminorm on every level of a ladder, with the divergence flag.
pub fn gagliardo_ladder(levels: &[GridFunction], s: FracOrder, p: f64) -> Result<NormReport> {
    let pts = levels
        .iter()
        .map(|u| {
            Ok(LadderPoint {
                n: u.grid().n(),
                value: gagliardo_seminorm(u, s, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport::from_ladder(
        NormKind::Gagliardo { s: s.value(), p },
        pts,
    ))
}

/// `max_{i != j} |u_i - u_j| / |x_i - x_j|^beta` over node pairs.
pub fn holder_seminorm(u: &GridFunction, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(FracError::domain(format!(
            "Holder exponent must lie in (0, 1], got {beta}"
        )));
    }
    let v = u.values();
    let h = u.grid().h();
    let n = v.len();
    let w: Vec<f64> = (0..n).map(|m| (m as f64 * h).powf(-beta)).collect();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| (v[j] - v[i]).abs() * w[j - i])
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max))
}

/// `||u||_p + ||I^(1-s)[u]||_p + ||D^s[u]||_p`.
pub fn rl_sobolev_norm(u: &GridFunction, s: FracOrder, p: f64) -> Result<f64> {
    check_p(p)?;
    let i = frac_int(u, s.complement(), Side::LeftAPlus)?;
    let d = frac_deriv(u, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?;
    Ok(lp_norm(u, p)? + lp_norm(&i, p)? + lp_norm(&d, p)?)
}

/// [`rl_sobolev_norm`] on every level, with the divergence flag.
pub fn rl_sobolev_ladder(levels: &[GridFunction], s: FracOrder, p: f64) -> Result<NormReport> {
    let pts = levels
        .par_iter()
        .map(|u| {
            Ok(LadderPoint {
                n: u.grid().n(),
                value: rl_sobolev_norm(u, s, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport::from_ladder(
        NormKind::RlSobolev { s: s.value(), p },
        pts,
    ))
}

/// `int |u|^p / min(x - a, b - x)^(sp)`, with `|u|^p` interpolated linearly
/// between nodes and integrated exactly against the weight.
pub fn hardy_quotient(u: &GridFunction, s: FracOrder, p: f64) -> Result<f64> {
    check_p(p)?;
    let sig = s.value() * p;
    if sig >= 1.0 {
        return Err(FracError::domain(format!(
            "Hardy quotient needs sp < 1, got {sig}"
        )));
    }
    let g = u.grid();
    let (a, b) = (g.a(), g.b());
    let mid = 0.5 * (a + b);
    let f: Vec<f64> = u.values().iter().map(|v| powp(*v, p)).collect();
    let h = g.h();
    // int_{y0}^{y1} (c0 + c1 y) y^(-sig) dy
    let piece = |y0: f64, y1: f64, f0: f64, f1: f64| -> f64 {
        if y1 <= y0 {
            return 0.0;
        }
        let c1 = (f1 - f0) / (y1 - y0);
        let c0 = f0 - c1 * y0;
        let m0 = (y1.powf(1.0 - sig) - y0.powf(1.0 - sig)) / (1.0 - sig);
        let m1 = (y1.powf(2.0 - sig) - y0.powf(2.0 - sig)) / (2.0 - sig);
        c0 * m0 + c1 * m1
    };
    let cells: Vec<f64> = (0..g.n())
        .into_par_iter()
        .map(|i| {
            let (x0, x1) = (g.node(i), g.node(i + 1));
            let (f0, f1) = (f[i], f[i + 1]);
            let at = |x: f64| f0 + (f1 - f0) * (x - x0) / h;
            let mut acc = 0.0;
            if x0 < mid {
                let xe = x1.min(mid);
                acc += piece(x0 - a, xe - a, f0, at(xe));
            }
            if x1 > mid {
                let xs = x0.max(mid);
                acc += piece(b - x1, b - xs, f1, at(xs));
            }
            acc
        })
        .collect();
    Ok(pairwise_sum(&cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, PowerTerm};

    #[test]
    fn lp_basics() {
        let g = Grid::unit(64).unwrap();
        let c = GridFunction::constant(g, -3.0).unwrap();
        assert!((lp_norm(&c, 2.0).unwrap() - 3.0).abs() < 1e-14);
        let x = GridFunction::from_fn(g, |x| x).unwrap();
        assert!((lp_norm(&x, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lp_norm(&x, f64::INFINITY).unwrap(), 1.0);
        assert!(lp_norm(&x, 0.5).is_err());
    }

    #[test]
    fn weak_lp_of_constant_and_power() {
        let g = Grid::unit(256).unwrap();
        let c = GridFunction::constant(g, 3.0).unwrap();
        assert!((weak_lp_quasinorm(&c, 2.0).unwrap() - 3.0).abs() < 1e-14);
        let t = PowerTerm::new(0.0, 1.0, -0.5, Side::LeftAPlus);
        let u = GridFunction::from_parts(g, vec![0.0; 257], vec![t]).unwrap();
        let w = weak_lp_quasinorm(&u, 2.0).unwrap();
        assert!((w - 1.0).abs() < 1e-12, "{w}");
    }

    #[test]
    fn weak_lp_of_interior_kernel_is_exact() {
        // (x - c)_+^(-3/4) sits exactly on the weak L^(4/3) threshold
        for n in [16, 1024] {
            let g = Grid::unit(n).unwrap();
            let t = PowerTerm::atom_kernel(0.5, 2.0, -0.75);
            let u = GridFunction::from_parts(g, vec![0.0; n + 1], vec![t]).unwrap();
            let w = weak_lp_quasinorm(&u, 4.0 / 3.0).unwrap();
            assert!((w - 2.0).abs() < 1e-12, "{w}");
        }
    }

    #[test]
    fn hardy_constant() {
        let g = Grid::unit(64).unwrap();
        let c = GridFunction::constant(g, 1.0).unwrap();
        let s = FracOrder::new(0.5).unwrap();
        assert!((hardy_quotient(&c, s, 1.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(hardy_quotient(&c, s, 2.0).is_err());
    }

    #[test]
    fn gagliardo_of_constant_and_shift() {
        let g = Grid::unit(64).unwrap();
        let s = FracOrder::new(0.5).unwrap();
        assert_eq!(
            gagliardo_seminorm(&GridFunction::constant(g, 2.0).unwrap(), s, 1.0).unwrap(),
            0.0
        );
        let x = GridFunction::from_fn(g, |x| x * x).unwrap();
        let y = GridFunction::from_fn(g, |x| x * x + 5.0).unwrap();
        assert_eq!(
            gagliardo_seminorm(&x, s, 1.5).unwrap(),
            gagliardo_seminorm(&y, s, 1.5).unwrap()
        );
    }

    #[test]
    fn holder_of_line() {
        let g = Grid::unit(32).unwrap();
        let x = GridFunction::from_fn(g, |x| x).unwrap();
        assert!((holder_seminorm(&x, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(holder_seminorm(&x, 0.0).is_err());
    }
}
