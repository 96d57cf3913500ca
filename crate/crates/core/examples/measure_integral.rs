//! Fractional integral of a Radon measure with a density and a Dirac atom,
//! read from the JSON format the CLI accepts.
//!
//! Run with `cargo run --example measure_integral`.

use fraccalc::integral::frac_int_measure;
use fraccalc::{gamma_fn, FracOrder, Grid, RadonMeasure};

fn main() -> fraccalc::Result<()> {
    let g = Grid::unit(16)?;
    let m = RadonMeasure::from_json(r#"{"atoms": [{"t": 0.5, "w": 2.0}]}"#, g, None)?;
    let s = FracOrder::new(0.4)?;
    let v = frac_int_measure(&m, s)?;
    let gs = gamma_fn(0.4)?;
    for j in [0, 4, 8, 9, 12, 16] {
        let x = g.node(j);
        let exact = if x > 0.5 { 2.0 * (x - 0.5).powf(-0.6) / gs } else { 0.0 };
        println!("x = {x:.4}: I^s[2 delta_0.5] = {:>10.6}  exact {exact:>10.6}", v.values()[j]);
    }
    Ok(())
}
