//! The critical power `(x - a)^(s-1) / Gamma(s)`: `I^(1-s)` maps it to the
//! constant 1 and `D^s` maps it to zero away from `a`.
//!
//! Run with `cargo run --example critical_power`.

use fraccalc::norms::lp_norm;
use fraccalc::{frac_deriv, frac_int, sample, AnalyticFunction, DerivKind, FracOrder, Grid, Interval, Side};

fn main() -> fraccalc::Result<()> {
    for sv in [0.25, 0.5, 0.75] {
        let s = FracOrder::new(sv)?;
        let f = AnalyticFunction::parse(&format!("critical-power:{sv}"), Interval::unit())?;
        let u = sample(&f, &Grid::unit(1024)?)?;
        let v = frac_int(&u, s.complement(), Side::LeftAPlus)?;
        let d = frac_deriv(&u, s, DerivKind::RiemannLiouville, Side::LeftAPlus)?;
        let max_dev = v.values()[1..].iter().fold(0.0f64, |m, x| m.max((x - 1.0).abs()));
        println!(
            "s = {sv}: max |I^(1-s)u - 1| = {max_dev:.2e}, ||D^s u||_1 = {:.2e}",
            lp_norm(&d, 1.0)?
        );
    }
    Ok(())
}
