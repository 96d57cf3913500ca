//! The limits `s -> 0` (`I^s u -> u` in `L^1`) and `s -> 1`
//! (`D^s u dx -> Du + u(a+) delta_a` weakly).
//!
//! Run with `cargo run --release --example s_sweeps`.

use fraccalc::campaign::sweep_panel;
use fraccalc::integral::sweep_s_to_0;
use fraccalc::measure::sweep_s_to_1;
use fraccalc::{sample, AnalyticFunction, BVFunction, FracOrder, Grid, Interval};

fn orders(v: &[f64]) -> fraccalc::Result<Vec<FracOrder>> {
    v.iter().map(|&s| FracOrder::new(s)).collect()
}

fn main() -> fraccalc::Result<()> {
    let iv = Interval::unit();
    let cos = sample(&AnalyticFunction::parse("cosine", iv)?, &Grid::unit(1024)?)?;
    let down = sweep_s_to_0(&cos, &orders(&[0.1, 0.03, 0.01, 0.001])?)?;
    for (s, e) in [0.1, 0.03, 0.01, 0.001].iter().zip(&down.errors) {
        println!("s -> 0: s = {s:<6} ||I^s cos - cos||_1 = {e:.3e}");
    }

    let jump = BVFunction::jump(Grid::unit(256)?, 0.5, 1.0)?;
    let (report, rows) = sweep_s_to_1(&jump, &sweep_panel(iv)?, &orders(&[0.5, 0.9, 0.99])?, 256)?;
    println!("s -> 1 for the unit jump at 0.5:");
    for r in rows {
        println!("  s = {:.2}, phi {}: pairing {:.4}, target {:.4}, gap {:.3e}", r.s, r.phi_index, r.pairing, r.target, r.gap);
    }
    println!("verdict {:?}", report.verdict);
    Ok(())
}
