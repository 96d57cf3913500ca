//! BV data: the distributional fractional derivative as a measure, the
//! embedding bound `||u||_1 + ||D^s u||_1 <= C ||u||_BV` and the sup bound.
//!
//! Run with `cargo run --example bv_representation`.

use fraccalc::measure::{bv_corpus, check_bv_embedding, check_bv_sup, distributional_frac_deriv};
use fraccalc::{FracOrder, Grid};

fn main() -> fraccalc::Result<()> {
    let s = FracOrder::new(0.5)?;
    let ns = [729, 2187];
    for u in bv_corpus(Grid::unit(729)?)? {
        let d = distributional_frac_deriv(&u, s)?;
        let emb = check_bv_embedding(&u, s, &ns)?;
        let sup = check_bv_sup(&u, &ns)?;
        println!(
            "{:<10} ||u||_BV = {:.4}, |D^s u|(I) = {:.4}, atoms {}, embedding {:?}, sup {:?}",
            u.label(),
            u.bv_norm()?,
            d.total_variation()?,
            d.atoms().len(),
            emb.verdict,
            sup.verdict
        );
    }
    Ok(())
}
