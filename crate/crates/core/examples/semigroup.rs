//! The semigroup law `I^alpha I^beta = I^(alpha + beta)` on a refinement
//! ladder, with the fitted convergence rate.
//!
//! Run with `cargo run --example semigroup`.

use fraccalc::integral::check_semigroup;
use fraccalc::{AnalyticFunction, FracOrder, Interval, Ladder};

fn main() -> fraccalc::Result<()> {
    let f = AnalyticFunction::parse("cosine", Interval::new(0.0, 2.0)?)?;
    let u = Ladder::sample(&f, &[128, 512, 2048])?;
    let report = check_semigroup(&u, FracOrder::new(0.3)?, FracOrder::new(0.45)?)?;
    for (n, e) in report.grid_sizes.iter().zip(&report.errors) {
        println!("n = {n:5}: ||I^0.3 I^0.45 u - I^0.75 u||_1 = {e:.3e}");
    }
    println!("rate {:?}, verdict {:?}", report.rate, report.verdict);
    Ok(())
}
