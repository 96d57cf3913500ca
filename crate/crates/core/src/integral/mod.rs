//! Left and right Riemann-Liouville fractional integrals.
//!
//! The grid operator is the product-trapezoid rule: on every cell the data is
//! replaced by its linear interpolant and integrated against the kernel
//! `(x_j - t)^(s-1) / Gamma(s)` exactly. Power terms are mapped by the power
//! rule `I^g[(x - t)_+^e] = Gamma(e + 1) / Gamma(e + 1 + g) (x - t)_+^(e + g)`.

mod checks;

pub use checks::{check_duality, check_reflection, check_semigroup, sweep_s_to_0};

use crate::corpus::AnalyticFunction;
use crate::error::{FracError, Result};
use crate::grid::{Grid, GridFunction, PowerTerm, Side};
use crate::measure::RadonMeasure;
use crate::order::FracOrder;
use crate::quadrature::{
    blocked_dot, integrate_left_singular, integrate_right_singular, tanh_sinh,
};
use crate::special::{gamma_pos, recip_gamma};
use rayon::prelude::*;

/// Threshold above which the kernel weights switch to their asymptotic
/// series (the direct differences cancel catastrophically there).
const SERIES_FROM: usize = 8;

/// Tabulated product-trapezoid weights for one grid and one order `g > 0`.
///
/// Node `j` of the left integral is
/// `scale * (first[j] u_0 + sum_{k=1..j} diag[j - k] u_k)`, with
/// `scale = h^g / Gamma(g + 2)`.
#[derive(Debug, Clone)]
pub struct KernelMoments {
    order: f64,
    h: f64,
    scale: f64,
    diag: Vec<f64>,
    first: Vec<f64>,
}

/// `(m+1)^p - 2 m^p + (m-1)^p` for `m >= 1`.
fn second_difference(m: usize, p: f64) -> f64 {
    let mf = m as f64;
    if m < SERIES_FROM {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // 2 m^p sum_k binom(p, 2k) m^(-2k)
    let inv2 = 1.0 / (mf * mf);
    let mut b = p * (p - 1.0) / 2.0;
    let mut pow = inv2;
    let mut sum = 0.0;
    for k in 1..40 {
        let term = b * pow;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        let kk = 2.0 * k as f64;
        b *= (p - kk) * (p - kk - 1.0) / ((kk + 1.0) * (kk + 2.0));
        pow *= inv2;
    }
    2.0 * mf.powf(p) * sum
}

/// Weight of `u_0` at node `j`: `(j-1)^(g+1) - (j-1-g) j^g`.
fn first_weight(j: usize, g: f64) -> f64 {
    let jf = j as f64;
    if j < SERIES_FROM {
        return (jf - 1.0).powf(g + 1.0) - (jf - 1.0 - g) * jf.powf(g);
    }
    // j^g sum_{k>=2} (-1)^k binom(g+1, k) j^(1-k)
    let p = g + 1.0;
    let inv = 1.0 / jf;
    let mut c = p * (p - 1.0) / 2.0;
    let mut pow = inv;
    let mut sum = 0.0;
    for k in 2..60 {
        let term = c * pow;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        c *= -(p - k as f64) / (k as f64 + 1.0);
        pow *= inv;
    }
    jf.powf(g) * sum
}

impl KernelMoments {
    pub fn new(grid: &Grid, order: f64) -> Self {
        let n = grid.n();
        let h = grid.h();
        let p = order + 1.0;
        let mut diag = vec![1.0; n + 1];
        for (m, d) in diag.iter_mut().enumerate().skip(1) {
            *d = second_difference(m, p);
        }
        let mut first = vec![0.0; n + 1];
        for (j, f) in first.iter_mut().enumerate().skip(1) {
            *f = first_weight(j, order);
        }
        KernelMoments {
            order,
            h,
            scale: h.powf(order) * recip_gamma(order + 2.0),
            diag,
            first,
        }
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    /// Exact `(int w0, int w1)` over cell `[x_i, x_{i+1}]` of the kernel
    /// `(x_j - t)^(g-1)`, with `w0 = 1` and `w1 = (t - x_i) / h`.
    /// Zero when the cell lies right of `x_j`.
    pub fn cell_moments(&self, j: usize, i: usize) -> (f64, f64) {
        if i >= j {
            return (0.0, 0.0);
        }
        let g = self.order;
        let big = (j - i) as f64 * self.h;
        let small = (j - i - 1) as f64 * self.h;
        let m0 = (big.powf(g) - small.powf(g)) / g;
        let m1 = (big * m0 - (big.powf(g + 1.0) - small.powf(g + 1.0)) / (g + 1.0)) / self.h;
        (m0, m1)
    }

    fn node_left(&self, r: &[f64], j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let lead = self.first[j] * r[0];
        self.scale * (lead + blocked_dot(j, |k| self.diag[j - 1 - k] * r[k + 1]))
    }

    fn node_right(&self, r: &[f64], j: usize) -> f64 {
        let n = r.len() - 1;
        if j == n {
            return 0.0;
        }
        let lead = self.first[n - j] * r[n];
        self.scale * (lead + blocked_dot(n - j, |k| self.diag[k] * r[j + k]))
    }

    /// Apply to nodal data.
    pub fn apply(&self, r: &[f64], side: Side) -> Vec<f64> {
        (0..r.len())
            .into_par_iter()
            .map(|j| match side {
                Side::LeftAPlus => self.node_left(r, j),
                Side::RightBMinus => self.node_right(r, j),
            })
            .collect()
    }
}

/// Power-rule image of a term under `I^g` on its own side.
fn integrate_term(t: &PowerTerm, g: f64) -> PowerTerm {
    let e = t.exponent;
    PowerTerm {
        coef: t.coef * gamma_pos(e + 1.0) * recip_gamma(e + 1.0 + g),
        exponent: e + g,
        ..*t
    }
}

/// Fractional integral of any order `g > 0` (used internally for the
/// semigroup, the higher-order representation and `I^(1-s)`).
pub fn integrate_order(u: &GridFunction, g: f64, side: Side) -> Result<GridFunction> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(FracError::domain(format!(
            "integration order must be positive, got {g}"
        )));
    }
    let u = u.fold_terms(|t| t.side == side);
    let km = KernelMoments::new(u.grid(), g);
    let regular = km.apply(u.regular(), side);
    let terms = u.terms().iter().map(|t| integrate_term(t, g)).collect();
    GridFunction::from_parts(*u.grid(), regular, terms)
}

/// `I^s_{a+}[u]` or `I^s_{b-}[u]` at every node.
///
/// ```
/// use fraccalc::{frac_int, FracOrder, Grid, GridFunction, Side};
/// let g = Grid::unit(64).unwrap();
/// let one = GridFunction::constant(g, 1.0).unwrap();
/// let v = frac_int(&one, FracOrder::new(0.5).unwrap(), Side::LeftAPlus).unwrap();
/// let x = g.node(64);
/// let exact = 2.0 * (x / std::f64::consts::PI).sqrt();
/// assert!((v.values()[64] - exact).abs() < 1e-13);
/// ```
pub fn frac_int(u: &GridFunction, s: FracOrder, side: Side) -> Result<GridFunction> {
    integrate_order(u, s.value(), side)
}

/// Fractional integral of a Radon measure: the ac density through
/// [`frac_int`], each atom `w delta_t` as the exact kernel
/// `w (x - t)_+^(s-1) / Gamma(s)`. Atoms on nodes are skipped at that node and
/// flagged; nodes within `h/2` of an atom are flagged as near-atom.
pub fn frac_int_measure(m: &RadonMeasure, s: FracOrder) -> Result<GridFunction> {
    let base = frac_int(m.ac_density(), s, Side::LeftAPlus)?;
    let sv = s.value();
    let kernels: Vec<PowerTerm> = m
        .atoms()
        .iter()
        .map(|at| PowerTerm::atom_kernel(at.t, at.w * recip_gamma(sv), sv - 1.0))
        .collect();
    let mut terms = base.terms().to_vec();
    terms.extend(kernels);
    GridFunction::from_parts(*base.grid(), base.regular().to_vec(), terms)
}

type Sing = (f64, f64);

struct OracleInput<'a> {
    f: &'a dyn Fn(f64) -> f64,
    breaks: Vec<f64>,
    /// `f ~ (t - p)^e` just right of `p`.
    left: Vec<Sing>,
    /// `f ~ (p - t)^e` just left of `p`.
    right: Vec<Sing>,
}

fn left_oracle(inp: &OracleInput, lo: f64, x: f64, g: f64, tol: f64) -> Result<f64> {
    if x <= lo {
        return Ok(0.0);
    }
    let f = inp.f;
    let mut cuts = vec![lo];
    cuts.extend(inp.breaks.iter().copied().filter(|&t| t > lo && t < x));
    cuts.push(x);
    let pieces = cuts.len() - 1;
    let tol = (tol / (2.0 * pieces as f64)).max(1e-14);
    let kern = |t: f64| f(t) * (x - t).powf(g - 1.0);
    let find = |v: &[Sing], p: f64| v.iter().find(|s| s.0 == p).map(|s| s.1);
    let mut total = 0.0;
    for (k, w) in cuts.windows(2).enumerate() {
        let (p, q) = (w[0], w[1]);
        let m = 0.5 * (p + q);
        total += match find(&inp.left, p) {
            Some(e) => integrate_left_singular(&kern, p, m, e, tol)?,
            None => tanh_sinh(kern, p, m, tol)?,
        };
        total += if k + 1 == pieces {
            // t = x - tau^(1/g) absorbs the kernel
            let top = (x - m).powf(g);
            tanh_sinh(|tau: f64| f(x - tau.powf(1.0 / g)) / g, 0.0, top, tol)?
        } else {
            match find(&inp.right, q) {
                Some(e) => integrate_right_singular(&kern, m, q, e, tol)?,
                None => tanh_sinh(kern, m, q, tol)?,
            }
        };
    }
    Ok(total * recip_gamma(g))
}

/// Reference value of the fractional integral of a corpus member at `x`,
/// by tanh-sinh quadrature split at the breakpoints of `f`, with power
/// substitutions at the singular ends and `t = x - tau^(1/s)` at the kernel
/// end. Absolute error target `1e-9`. Fails when the budget runs out or the
/// integrand has a singularity no power substitution can absorb.
pub fn frac_int_oracle(f: &AnalyticFunction, s: FracOrder, side: Side, x: f64) -> Result<f64> {
    oracle_order(f, s.value(), side, x)
}

/// [`frac_int_oracle`] for any order `g > 0`.
pub fn oracle_order(f: &AnalyticFunction, g: f64, side: Side, x: f64) -> Result<f64> {
    let iv = f.interval();
    if !iv.contains(x) {
        return Err(FracError::domain(format!("x = {x} outside the interval")));
    }
    if matches!(f.tag(), crate::corpus::FnTag::Zero) {
        return Ok(0.0);
    }
    let log_left = matches!(f.tag(), crate::corpus::FnTag::LogKernelLeft(_));
    let sing = f.singularities();
    let tol = 1e-9;
    match side {
        Side::LeftAPlus => {
            if log_left && x > iv.a() {
                return Err(FracError::Quadrature(
                    "logarithmic endpoint singularity is not supported by the oracle".into(),
                ));
            }
            let ev = |t: f64| f.eval(t);
            let inp = OracleInput {
                f: &ev,
                breaks: f.breakpoints(),
                left: sing
                    .iter()
                    .filter(|s| s.side == Side::LeftAPlus)
                    .map(|s| (s.at, s.exponent))
                    .collect(),
                right: sing
                    .iter()
                    .filter(|s| s.side == Side::RightBMinus)
                    .map(|s| (s.at, s.exponent))
                    .collect(),
            };
            left_oracle(&inp, iv.a(), x, g, tol)
        }
        Side::RightBMinus => {
            let q = |t: f64| iv.reflect(t);
            let ev = |t: f64| f.eval(q(t));
            let mut breaks: Vec<f64> = f.breakpoints().into_iter().map(q).collect();
            breaks.sort_by(|x, y| x.total_cmp(y));
            let inp = OracleInput {
                f: &ev,
                breaks,
                left: sing
                    .iter()
                    .filter(|s| s.side == Side::RightBMinus)
                    .map(|s| (q(s.at), s.exponent))
                    .collect(),
                right: sing
                    .iter()
                    .filter(|s| s.side == Side::LeftAPlus)
                    .map(|s| (q(s.at), s.exponent))
                    .collect(),
            };
            left_oracle(&inp, iv.a(), q(x), g, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::sample;
    use crate::grid::Interval;

    #[test]
    fn weights_series_matches_direct() {
        for &g in &[0.001, 0.3, 0.5, 0.9, 1.5, 2.5] {
            let p = g + 1.0;
            for m in [8usize, 9, 12, 20] {
                let mf = m as f64;
                let direct = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
                let series = second_difference(m, p);
                assert!(
                    (direct - series).abs() <= 1e-11 * direct.abs().max(1e-3),
                    "g={g} m={m}"
                );
                let d1 = (mf - 1.0).powf(p) - (mf - 1.0 - g) * mf.powf(g);
                let s1 = first_weight(m, g);
                assert!((d1 - s1).abs() <= 1e-10 * d1.abs().max(1e-3), "g={g} m={m}");
            }
        }
    }

    #[test]
    fn weights_reassemble_moments() {
        // node weights equal the per-cell moments redistributed to nodes
        let g = Grid::unit(16).unwrap();
        let km = KernelMoments::new(&g, 0.4);
        let j = 11;
        let mut w = [0.0; 17];
        for i in 0..j {
            let (m0, m1) = km.cell_moments(j, i);
            w[i] += m0 - m1;
            w[i + 1] += m1;
        }
        let gam = recip_gamma(0.4);
        let mut e = vec![0.0; 17];
        e[0] = 1.0;
        assert!((km.node_left(&e, j) - w[0] * gam).abs() < 1e-14);
        for k in 1..=j {
            let mut e = vec![0.0; 17];
            e[k] = 1.0;
            assert!((km.node_left(&e, j) - w[k] * gam).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn oracle_power_rule() {
        let iv = Interval::unit();
        let f = AnalyticFunction::parse("power-law:1.5", iv).unwrap();
        let v = oracle_order(&f, 0.7, Side::LeftAPlus, 0.6).unwrap();
        let exact = crate::corpus::power_rule(1.5, 0.7, 0.6);
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn oracle_rejects_log_kernel() {
        let f = AnalyticFunction::parse("log-kernel-left:1.5", Interval::unit()).unwrap();
        assert!(oracle_order(&f, 0.5, Side::LeftAPlus, 0.3).is_err());
    }

    #[test]
    fn critical_power_term_is_exact() {
        let f = AnalyticFunction::parse("critical-power:0.3", Interval::unit()).unwrap();
        let u = sample(&f, &Grid::unit(32).unwrap()).unwrap();
        let v = integrate_order(&u, 0.7, Side::LeftAPlus).unwrap();
        for j in 1..=32 {
            assert!((v.values()[j] - 1.0).abs() < 1e-13);
        }
    }
}
