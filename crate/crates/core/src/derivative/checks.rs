use super::{frac_deriv, DerivKind};
use crate::error::{FracError, Result};
use crate::grid::{GridFunction, PowerTerm, Side};
use crate::integral::{frac_int, integrate_order};
use crate::ladder::Ladder;
use crate::norms::{inner, lp_norm};
use crate::order::FracOrder;
use crate::report::{diverges, ladder_verdict, Verdict, VerificationReport};
use crate::special::recip_gamma;
use rayon::prelude::*;
use serde::Serialize;

/// Estimate of `I^(1-s)[u](a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEstimate {
    /// One value per ladder level.
    pub per_level: Vec<f64>,
    /// Extrapolated limit; `inf` if `I^(1-s)[u]` is unbounded at `a`.
    pub estimate: f64,
}

fn level_trace(v: &GridFunction) -> f64 {
    let a = v.grid().a();
    let mut t = 0.0;
    for term in v
        .terms()
        .iter()
        .filter(|t| t.side == Side::LeftAPlus && t.anchor == a)
    {
        if term.exponent.abs() < 1e-12 {
            t += term.coef;
        } else if term.exponent < 0.0 {
            return f64::INFINITY.copysign(term.coef);
        }
    }
    let r = v.regular();
    t + 2.0 * r[1] - r[2]
}

/// `I^(1-s)[u](a)`: exact contribution of power terms anchored at `a` plus a
/// linear extrapolation of the regular part from the first two interior
/// nodes, accelerated across levels by Aitken's delta-squared when the last
/// three levels converge geometrically.
pub fn trace_frac_int(u: &Ladder, s: FracOrder) -> Result<TraceEstimate> {
    let per_level = u
        .levels()
        .par_iter()
        .map(|v| Ok(level_trace(&frac_int(v, s.complement(), Side::LeftAPlus)?)))
        .collect::<Result<Vec<f64>>>()?;
    let k = per_level.len();
    let mut estimate = per_level[k - 1];
    if k >= 3 && estimate.is_finite() {
        let (t0, t1, t2) = (per_level[k - 3], per_level[k - 2], per_level[k - 1]);
        let (d1, d2) = (t1 - t0, t2 - t1);
        if d1 * d2 > 0.0 && d2.abs() < d1.abs() {
            estimate = t2 - d2 * d2 / (d2 - d1);
        }
    }
    Ok(TraceEstimate {
        per_level,
        estimate,
    })
}

fn trace_vanishes(t: f64, norm: f64) -> bool {
    t.abs() <= 1e-3 * norm.max(1.0)
}

/// The fundamental theorem: (i) `D^s[I^s[u]] = u`; (ii)
/// `I^s[D^s[u]] + T (x - a)^(s-1) / Gamma(s) = u` with `T = I^(1-s)[u](a)`;
/// (iii) `I^s[D^s[u]] = u` when `T = 0`. Each residual must decrease and end
/// below `1e-2 ||u||_1`.
pub fn check_ftc(u: &Ladder, s: FracOrder) -> Result<VerificationReport> {
    if u.len() < 3 {
        return Err(FracError::precondition(
            "need a ladder of at least 3 levels",
        ));
    }
    let sv = s.value();
    let trace = trace_frac_int(u, s)?;
    let t = trace.estimate;
    let rows = u
        .levels()
        .par_iter()
        .map(|v| {
            let a = v.grid().a();
            let iu = frac_int(v, s, Side::LeftAPlus)?;
            let r1 = lp_norm(
                &frac_deriv(&iu, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?.sub(v)?,
                1.0,
            )?;
            let back = frac_int(
                &frac_deriv(v, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?,
                s,
                Side::LeftAPlus,
            )?;
            let r3 = lp_norm(&back.sub(v)?, 1.0)?;
            let r2 = if t.is_finite() {
                let bt = PowerTerm::new(a, t * recip_gamma(sv), sv - 1.0, Side::LeftAPlus);
                let boundary =
                    GridFunction::from_parts(*v.grid(), vec![0.0; v.grid().len()], vec![bt])?;
                lp_norm(&back.add(&boundary)?.sub(v)?, 1.0)?
            } else {
                f64::NAN
            };
            Ok([r1, r2, r3])
        })
        .collect::<Result<Vec<[f64; 3]>>>()?;
    let norm = lp_norm(u.finest(), 1.0)?;
    let threshold = 1e-2 * norm;
    let floor = 1e-12 * norm.max(1.0);
    let ns = u.ns();
    let names = ["ftc-i", "ftc-ii", "ftc-iii"];
    let mut report = VerificationReport::new("ftc")
        .param("s", sv)
        .param("trace", t)
        .param("trace_levels", &trace.per_level);
    let mut all_ok = true;
    for (k, name) in names.iter().enumerate() {
        let errs: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let applicable = match k {
            1 => t.is_finite(),
            2 => trace_vanishes(t, norm),
            _ => true,
        };
        let mut c = VerificationReport::new(*name).param("s", sv);
        if applicable {
            let v = ladder_verdict(&errs, threshold, floor);
            all_ok &= v == Verdict::Pass;
            c = c.ladder(&ns, &errs).verdict(v);
        } else {
            c = c
                .verdict(Verdict::NotApplicable)
                .note(format!("trace I^(1-s)[u](a) = {t} does not vanish"));
        }
        report = report.component(c);
    }
    let finals: Vec<f64> = rows.last().map(|r| r.to_vec()).unwrap_or_default();
    report.grid_sizes = ns;
    report.errors = finals;
    Ok(report.verdict(if all_ok { Verdict::Pass } else { Verdict::Fail }))
}

/// `int D^s_{a+}[u] v = int u CD^s_{b-}[v]` for `v` vanishing at both ends.
/// Pass iff the final gap is at most `1e-3 (1 + |LHS|)`.
pub fn check_caputo_duality(u: &Ladder, v: &Ladder, s: FracOrder) -> Result<VerificationReport> {
    if u.ns() != v.ns() {
        return Err(FracError::GridMismatch);
    }
    for lv in v.levels() {
        let vals = lv.values();
        let scale = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if vals[0].abs() > 1e-12 * scale || vals[vals.len() - 1].abs() > 1e-12 * scale {
            return Err(FracError::precondition(
                "test function must vanish at both endpoints",
            ));
        }
    }
    let rows = u
        .levels()
        .par_iter()
        .zip(v.levels())
        .map(|(uu, vv)| {
            let lhs = inner(
                &frac_deriv(uu, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?,
                vv,
            )?;
            let rhs = inner(
                uu,
                &frac_deriv(vv, s, DerivKind::Caputo, Side::RightBMinus)?,
            )?;
            Ok((lhs, (lhs - rhs).abs()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let gaps: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let lhs = rows.last().map(|r| r.0).unwrap_or(0.0);
    let rel = gaps.last().copied().unwrap_or(0.0) / (1.0 + lhs.abs());
    Ok(VerificationReport::new("caputo-duality")
        .param("s", s.value())
        .param("lhs", lhs)
        .ladder(&u.ns(), &gaps)
        .verdict(if rel <= 1e-3 {
            Verdict::Pass
        } else {
            Verdict::Fail
        }))
}

/// `||D^s[u] - MD^s[u]||_1` per level; pass iff every level is below `1e-8`
/// (relative to `max(1, ||u||_1)`).
pub fn check_marchaud_equiv(u: &Ladder, s: FracOrder) -> Result<VerificationReport> {
    let errors = u
        .levels()
        .par_iter()
        .map(|v| {
            let rl = frac_deriv(v, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?;
            let m = frac_deriv(v, s, DerivKind::Marchaud, Side::LeftAPlus)?;
            lp_norm(&rl.sub(&m)?, 1.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let norm = lp_norm(u.finest(), 1.0)?;
    let ok = errors.iter().all(|e| *e <= 1e-8 * norm.max(1.0));
    Ok(VerificationReport::new("marchaud")
        .param("s", s.value())
        .ladder(&u.ns(), &errors)
        .verdict(if ok { Verdict::Pass } else { Verdict::Fail }))
}

/// Classify `u` as an `I^s` image of an `L^p` function: the trace
/// `I^(1-s)[u](a)` must vanish and `||D^s[u]||_p` must stay bounded. For
/// representable data the reconstruction `u = I^s[D^s[u]]` is checked in
/// `L^1` (below `1e-2 ||u||_1`). The ladder column holds `||D^s[u]||_p`.
pub fn check_representability(u: &Ladder, s: FracOrder, p: f64) -> Result<VerificationReport> {
    if !(p >= 1.0) {
        return Err(FracError::domain(format!("p must be at least 1, got {p}")));
    }
    let trace = trace_frac_int(u, s)?;
    let norms = u
        .levels()
        .par_iter()
        .map(|v| {
            lp_norm(
                &frac_deriv(v, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?,
                p,
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    let unorm = lp_norm(u.finest(), 1.0)?;
    let bounded = norms.iter().all(|x| x.is_finite()) && !diverges(&norms, 1.2, 3);
    let vanishing = trace.estimate.is_finite() && trace_vanishes(trace.estimate, unorm);
    let representable = bounded && vanishing;
    let mut r = VerificationReport::new("representability")
        .param("s", s.value())
        .param("p", p)
        .param(
            "trace",
            if trace.estimate.is_finite() {
                trace.estimate
            } else {
                f64::MAX
            },
        )
        .param("trace_bounded", trace.estimate.is_finite())
        .param("derivative_bounded", bounded)
        .param("representable", representable)
        .ladder(&u.ns(), &norms);
    let verdict = if representable {
        let fin = u.finest();
        let d = frac_deriv(fin, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?;
        let resid = lp_norm(
            &integrate_order(&d, s.value(), Side::LeftAPlus)?.sub(fin)?,
            1.0,
        )?;
        r = r.param("reconstruction_residual", resid);
        if resid <= 1e-2 * unorm {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else {
        r = r.note("not representable as I^s of an L^p function");
        Verdict::Pass
    };
    Ok(r.verdict(verdict))
}
