//! Atom detection: a shifted critical power on `(c, d]` has `I^(1-s)u` with a
//! unit jump at `c` and none at `d`.
//!
//! Run with `cargo run --example atom_detection`.

use fraccalc::measure::detect_atoms;
use fraccalc::{AnalyticFunction, FracOrder, Interval, Ladder};

fn main() -> fraccalc::Result<()> {
    let f = AnalyticFunction::parse("shifted-critical-power:0.25:0.75:0.5", Interval::unit())?;
    let det = detect_atoms(&Ladder::sample(&f, &[256, 1024, 4096])?, FracOrder::new(0.5)?)?;
    for c in &det.candidates {
        println!("candidate t = {:.4}, ratios {:.3?}, accepted {}", c.t, c.ratios, c.accepted);
    }
    for a in det.measure.atoms() {
        println!("atom at {:.4} with weight {:.6}", a.t, a.w);
    }
    println!("reconstruction gap {:.2e}", det.reconstruction_gap);
    Ok(())
}
