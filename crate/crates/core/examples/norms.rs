//! The norms used by the embeddings: `L^p`, weak `L^p`, Gagliardo, Hoelder,
//! the Riemann-Liouville Sobolev norm and the Hardy quotient.
//!
//! Run with `cargo run --example norms`.

use fraccalc::norms::{
    gagliardo_seminorm, hardy_quotient, holder_seminorm, lp_norm, rl_sobolev_norm, weak_lp_quasinorm,
};
use fraccalc::{sample, AnalyticFunction, FracOrder, Grid, Interval};

fn main() -> fraccalc::Result<()> {
    let g = Grid::unit(512)?;
    let s = FracOrder::new(0.5)?;
    for spec in ["linear", "cosine", "hat:0.5:0.5", "indicator:0.25:0.75"] {
        let u = sample(&AnalyticFunction::parse(spec, Interval::unit())?, &g)?;
        println!("{spec}");
        println!("  ||u||_1 = {:.5}, ||u||_2 = {:.5}, ||u||_inf = {:.5}", lp_norm(&u, 1.0)?, lp_norm(&u, 2.0)?, lp_norm(&u, f64::INFINITY)?);
        println!("  weak L^2 = {:.5}", weak_lp_quasinorm(&u, 2.0)?);
        println!("  [u]_(1/2, 1) = {:.5}, [u]_C^0.5 = {:.5}", gagliardo_seminorm(&u, s, 1.0)?, holder_seminorm(&u, 0.5)?);
        println!("  RL Sobolev (s = 1/2, p = 1) = {:.5}", rl_sobolev_norm(&u, s, 1.0)?);
        println!("  Hardy quotient (s = 0.3, p = 2) = {:.5}", hardy_quotient(&u, FracOrder::new(0.3)?, 2.0)?);
    }
    Ok(())
}
