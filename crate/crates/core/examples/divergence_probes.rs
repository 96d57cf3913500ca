//! Probes whose quantities grow without bound under refinement: they show
//! which embeddings are strict.
//!
//! Run with `cargo run --release --example divergence_probes`.

use fraccalc::probes::{run_probe, ProbeCase, ProbeConfig};

fn main() -> fraccalc::Result<()> {
    for case in ProbeCase::ALL {
        let r = run_probe(case, &ProbeConfig::new(case))?;
        let ratios: Vec<f64> = r.errors.windows(2).map(|w| w[1] / w[0]).collect();
        println!("{case:<20} {:?}", r.verdict);
        println!("  n      {:?}", r.grid_sizes);
        println!("  values {:.4?}", r.errors);
        println!("  ratios {ratios:.3?}");
    }
    Ok(())
}
