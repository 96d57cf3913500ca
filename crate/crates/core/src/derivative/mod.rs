//! Riemann-Liouville, Caputo and Marchaud derivatives of order `s in (0, 1)`.
//!
//! All three act on the piecewise-linear interpolant, for which the relation
//! `D^s = C D^s + u(a) (x - a)^(-s) / Gamma(1 - s)` is an identity, so the
//! discrete operators satisfy it to roundoff:
//!
//! * Caputo is the L1 scheme, `I^(1-s)` of the piecewise-constant slope.
//! * Riemann-Liouville adds the boundary power term at `a`.
//! * Marchaud evaluates the difference-quotient integral cell by cell in
//!   closed form.
//!
//! Right-sided operators are obtained by mirroring through `Q(x) = a + b - x`.

mod checks;
mod higher;

pub use checks::{
    check_caputo_duality, check_ftc, check_marchaud_equiv, check_representability, trace_frac_int,
    TraceEstimate,
};
pub use higher::higher_frac_int;

use crate::error::{FracError, Result};
use crate::grid::{GridFunction, PowerTerm, Side};
use crate::order::FracOrder;
use crate::quadrature::blocked_dot;
use crate::special::{gamma_pos, recip_gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivKind {
    RiemannLiouville,
    Caputo,
    Marchaud,
}

impl FromStr for DerivKind {
    type Err = FracError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rl" | "riemann-liouville" => Ok(DerivKind::RiemannLiouville),
            "caputo" => Ok(DerivKind::Caputo),
            "marchaud" => Ok(DerivKind::Marchaud),
            _ => Err(FracError::Parse(format!("unknown derivative kind '{s}'"))),
        }
    }
}

/// `(m+1)^q - m^q` without cancellation.
fn forward_power_difference(m: usize, q: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mf = m as f64;
    mf.powf(q) * (q * (1.0 / mf).ln_1p()).exp_m1()
}

/// Power-rule image of a term under `D^s` on its own side.
fn differentiate_term(t: &PowerTerm, s: f64) -> Result<Option<PowerTerm>> {
    let e = t.exponent;
    // e + 1 - s at a pole of Gamma up to roundoff (the critical power)
    let arg = e + 1.0 - s;
    let pole = arg.round() <= 0.0 && (arg - arg.round()).abs() <= 8.0 * f64::EPSILON * (1.0 + e.abs() + s);
    let coef = if pole { 0.0 } else { t.coef * gamma_pos(e + 1.0) * recip_gamma(arg) };
    if coef == 0.0 {
        return Ok(None);
    }
    if e - s <= -1.0 {
        return Err(FracError::domain(format!(
            "derivative of (x - {})^{e} of order {s} is not integrable",
            t.anchor
        )));
    }
    Ok(Some(PowerTerm {
        coef,
        exponent: e - s,
        ..*t
    }))
}

fn caputo_regular(r: &[f64], h: f64, s: f64) -> Vec<f64> {
    let n = r.len() - 1;
    let slope: Vec<f64> = r.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let q = 1.0 - s;
    let w: Vec<f64> = (0..n).map(|m| forward_power_difference(m, q)).collect();
    let scale = h.powf(q) * recip_gamma(2.0 - s);
    (0..=n)
        .into_par_iter()
        .map(|j| scale * blocked_dot(j, |i| slope[i] * w[j - 1 - i]))
        .collect()
}

fn marchaud_regular(r: &[f64], h: f64, a: f64, nodes: &[f64], s: f64) -> Vec<f64> {
    let n = r.len() - 1;
    let slope: Vec<f64> = r.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let g1 = recip_gamma(1.0 - s);
    let g2 = recip_gamma(2.0 - s);
    // h^-s [m^-s - (m+1)^-s] and h^(1-s) [(m+1)^(1-s) - m^(1-s)]
    let hs = h.powf(-s);
    let hq = h.powf(1.0 - s);
    let near: Vec<f64> = (0..n)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                let mf = m as f64;
                -hs * mf.powf(-s) * (-s * (1.0 / mf).ln_1p()).exp_m1()
            }
        })
        .collect();
    let far: Vec<f64> = (0..n)
        .map(|m| hq * forward_power_difference(m, 1.0 - s))
        .collect();
    (0..=n)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                return 0.0;
            }
            let head = (r[j] - r[0]) * (nodes[j] - a).powf(-s) * g1;
            let body = blocked_dot(j, |i| {
                let m = j - 1 - i;
                let c = r[j] - r[i + 1] - slope[i] * (m as f64 * h);
                c * near[m] * g1 + s * slope[i] * far[m] * g2
            });
            head + body
        })
        .collect()
}

fn deriv_left(u: &GridFunction, s: f64, kind: DerivKind) -> Result<GridFunction> {
    let u = u.fold_terms(|t| t.side == Side::LeftAPlus);
    let grid = *u.grid();
    let r = u.regular();
    let a = grid.a();
    let mut terms = Vec::new();
    for t in u.terms() {
        if kind == DerivKind::Caputo && t.exponent <= 0.0 {
            return Err(FracError::precondition(format!(
                "Caputo derivative needs absolutely continuous data; term (x - {})^{} is not",
                t.anchor, t.exponent
            )));
        }
        if let Some(d) = differentiate_term(t, s)? {
            terms.push(d);
        }
    }
    let regular = match kind {
        DerivKind::Caputo | DerivKind::RiemannLiouville => caputo_regular(r, grid.h(), s),
        DerivKind::Marchaud => marchaud_regular(r, grid.h(), a, &grid.nodes(), s),
    };
    if kind != DerivKind::Caputo && r[0] != 0.0 {
        terms.push(PowerTerm::new(
            a,
            r[0] * recip_gamma(1.0 - s),
            -s,
            Side::LeftAPlus,
        ));
    }
    GridFunction::from_parts(grid, regular, terms)
}

/// Fractional derivative of the interpolant of `u` (plus the power rule on
/// its terms).
///
/// ```
/// use fraccalc::{frac_deriv, DerivKind, FracOrder, Grid, GridFunction, Side};
/// let g = Grid::unit(32).unwrap();
/// let c = GridFunction::constant(g, 2.0).unwrap();
/// let s = FracOrder::new(0.4).unwrap();
/// let cap = frac_deriv(&c, s, DerivKind::Caputo, Side::LeftAPlus).unwrap();
/// assert!(cap.values().iter().all(|&v| v == 0.0));
/// ```
pub fn frac_deriv(
    u: &GridFunction,
    s: FracOrder,
    kind: DerivKind,
    side: Side,
) -> Result<GridFunction> {
    match side {
        Side::LeftAPlus => deriv_left(u, s.value(), kind),
        Side::RightBMinus => Ok(deriv_left(&u.reflect(), s.value(), kind)?.reflect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, NodeFlag};

    #[test]
    fn critical_power_derivative_vanishes_for_every_order() {
        for sv in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let f = crate::corpus::AnalyticFunction::parse(
                &format!("critical-power:{sv}"),
                crate::grid::Interval::unit(),
            )
            .unwrap();
            let u = crate::corpus::sample(&f, &Grid::unit(64).unwrap()).unwrap();
            let s = FracOrder::new(sv).unwrap();
            let d = frac_deriv(&u, s, DerivKind::RiemannLiouville, Side::LeftAPlus).unwrap();
            assert!(d.terms().iter().all(|t| t.coef.abs() < 1e-12), "{:?}", d.terms());
            assert!(d.values().iter().all(|v| v.abs() < 1e-11), "s = {sv}");
        }
    }

    #[test]
    fn power_differences_are_stable() {
        for m in [1usize, 5, 1000, 1_000_000] {
            let mf = m as f64;
            let direct = (mf + 1.0).powf(0.3) - mf.powf(0.3);
            assert!((forward_power_difference(m, 0.3) - direct).abs() <= 1e-9 * direct);
        }
    }

    #[test]
    fn rl_of_constant() {
        let g = Grid::unit(16).unwrap();
        let c = GridFunction::constant(g, 3.0).unwrap();
        let s = FracOrder::new(0.3).unwrap();
        let d = frac_deriv(&c, s, DerivKind::RiemannLiouville, Side::LeftAPlus).unwrap();
        for j in 1..=16 {
            let x = g.node(j);
            let exact = 3.0 * x.powf(-0.3) * recip_gamma(0.7);
            assert!((d.values()[j] - exact).abs() < 1e-13);
        }
        assert!(d.has_flag(0, NodeFlag::Singular));
        // half-cell average u0 (h/2)^{-s} / Gamma(2 - s)
        let h: f64 = 1.0 / 16.0;
        assert!((d.values()[0] - 3.0 * (h / 2.0).powf(-0.3) * recip_gamma(1.7)).abs() < 1e-12);
    }

    #[test]
    fn right_side_mirrors() {
        let g = Grid::unit(16).unwrap();
        let u = GridFunction::from_fn(g, |x| x * x).unwrap();
        let s = FracOrder::new(0.6).unwrap();
        let r = frac_deriv(&u, s, DerivKind::RiemannLiouville, Side::RightBMinus).unwrap();
        let l = frac_deriv(
            &u.reflect(),
            s,
            DerivKind::RiemannLiouville,
            Side::LeftAPlus,
        )
        .unwrap();
        for j in 0..=16 {
            assert_eq!(r.values()[j], l.values()[16 - j]);
        }
    }
}
