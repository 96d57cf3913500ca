//! `I^(1-s)` on `W^(1,p)`: the measured ratio against the explicit constant
//! for data vanishing at `a`.
//!
//! Run with `cargo run --example sobolev_action`.

use fraccalc::inequalities::{check_sobolev_action, sobolev_action_constant};
use fraccalc::{AnalyticFunction, FracOrder, Grid, Interval, Ladder};

fn main() -> fraccalc::Result<()> {
    let iv = Interval::unit();
    let ns = [256, 1024];
    for spec in ["linear", "power-law:3", "sine"] {
        let f = AnalyticFunction::parse(spec, iv)?;
        let du = Ladder::new(
            ns.iter().map(|&n| f.sample_derivative(&Grid::new(iv, n)?)).collect::<fraccalc::Result<Vec<_>>>()?,
        )?;
        for (sv, p) in [(0.3, 1.0), (0.3, 2.0), (0.7, 1.0)] {
            let s = FracOrder::new(sv)?;
            let r = check_sobolev_action(&Ladder::sample(&f, &ns)?, &du, s, p)?;
            println!(
                "{spec:<12} s = {sv}, p = {p}: lhs {:.4} <= bound {:.4} (C = {:.4}) {:?}",
                r.final_error().unwrap_or(f64::NAN),
                r.params["bound"].as_f64().unwrap_or(f64::NAN),
                sobolev_action_constant(s, 1.0),
                r.verdict
            );
        }
    }
    Ok(())
}
