use super::{frac_int, integrate_order};
use crate::error::{FracError, Result};
use crate::grid::{GridFunction, Side};
use crate::ladder::Ladder;
use crate::norms::{inner, lp_norm};
use crate::order::FracOrder;
use crate::report::{is_decreasing, ladder_verdict, Verdict, VerificationReport};
use rayon::prelude::*;

fn need_levels(l: &Ladder, k: usize) -> Result<()> {
    if l.len() < k {
        return Err(FracError::precondition(format!(
            "need a ladder of at least {k} levels"
        )));
    }
    Ok(())
}

/// `I^alpha[I^beta[u]] = I^(alpha+beta)[u]` in `L^1`, level by level.
/// Pass iff the errors decrease and end below `1e-3 ||u||_1`.
pub fn check_semigroup(
    u: &Ladder,
    alpha: FracOrder,
    beta: FracOrder,
) -> Result<VerificationReport> {
    let (a, b) = (alpha.value(), beta.value());
    if a + b > 1.0 {
        return Err(FracError::precondition(format!(
            "alpha + beta = {} > 1",
            a + b
        )));
    }
    need_levels(u, 3)?;
    let errors = u
        .levels()
        .par_iter()
        .map(|v| {
            let lhs = frac_int(&frac_int(v, beta, Side::LeftAPlus)?, alpha, Side::LeftAPlus)?;
            let rhs = integrate_order(v, a + b, Side::LeftAPlus)?;
            lp_norm(&lhs.sub(&rhs)?, 1.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let norm = lp_norm(u.finest(), 1.0)?;
    let verdict = ladder_verdict(&errors, 1e-3 * norm, 1e-12 * norm.max(1.0));
    Ok(VerificationReport::new("semigroup")
        .param("alpha", a)
        .param("beta", b)
        .ladder(&u.ns(), &errors)
        .verdict(verdict))
}

/// `I^s_{a+}[u](Q(x)) = I^s_{b-}[u o Q](x)` nodewise on one grid.
pub fn check_reflection(u: &GridFunction, s: FracOrder) -> Result<VerificationReport> {
    let n = u.grid().n();
    let left = frac_int(u, s, Side::LeftAPlus)?;
    let right = frac_int(&u.reflect(), s, Side::RightBMinus)?;
    let lv = left.values();
    let rv = right.values();
    let scale = lv.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = (0..=n)
        .map(|j| (lv[n - j] - rv[j]).abs())
        .fold(0.0, f64::max);
    let verdict = if gap <= 1e-10 * scale {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport::new("reflection")
        .param("s", s.value())
        .ladder(&[n], &[gap])
        .verdict(verdict))
}

/// `int I^s_{a+}[u] v = int u I^s_{b-}[v]`, both pairings by the trapezoid
/// rule on each level. Pass iff the gap shrinks and ends below
/// `1e-3 (1 + |LHS|)`.
pub fn check_duality(u: &Ladder, v: &Ladder, s: FracOrder) -> Result<VerificationReport> {
    need_levels(u, 3)?;
    if u.ns() != v.ns() {
        return Err(FracError::GridMismatch);
    }
    let rows = u
        .levels()
        .par_iter()
        .zip(v.levels())
        .map(|(uu, vv)| {
            let lhs = inner(&frac_int(uu, s, Side::LeftAPlus)?, vv)?;
            let rhs = inner(uu, &frac_int(vv, s, Side::RightBMinus)?)?;
            Ok((lhs, (lhs - rhs).abs()))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let gaps: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let lhs = rows.last().map(|r| r.0).unwrap_or(0.0);
    let verdict = ladder_verdict(&gaps, 1e-3 * (1.0 + lhs.abs()), 1e-13 * (1.0 + lhs.abs()));
    Ok(VerificationReport::new("duality")
        .param("s", s.value())
        .param("lhs", lhs)
        .ladder(&u.ns(), &gaps)
        .verdict(verdict))
}

/// `||I^s[u] - u||_1` along a decreasing list of orders. Pass iff the values
/// decrease and the last is below `5e-2 ||u||_1`.
pub fn sweep_s_to_0(u: &GridFunction, s_list: &[FracOrder]) -> Result<VerificationReport> {
    if s_list.is_empty() || s_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(FracError::precondition("orders must decrease strictly"));
    }
    let gaps = s_list
        .par_iter()
        .map(|&s| lp_norm(&frac_int(u, s, Side::LeftAPlus)?.sub(u)?, 1.0))
        .collect::<Result<Vec<f64>>>()?;
    let norm = lp_norm(u, 1.0)?;
    let last = *gaps.last().expect("non-empty");
    let ok = is_decreasing(&gaps, 1e-12 * norm.max(1.0)) && last <= 5e-2 * norm;
    let s_vals: Vec<f64> = s_list.iter().map(|s| s.value()).collect();
    let mut r = VerificationReport::new("s-to-0")
        .param("s_list", &s_vals)
        .param("n", u.grid().n())
        .verdict(if ok { Verdict::Pass } else { Verdict::Fail });
    r.errors = gaps;
    Ok(r)
}
