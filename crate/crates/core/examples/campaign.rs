//! A verification campaign built from a JSON5 configuration, run in
//! parallel and written as `campaign.json` plus one CSV per instance.
//!
//! Run with `cargo run --release --example campaign`.

use fraccalc::campaign::{run_campaign, write_outputs, CampaignConfig};

fn main() -> fraccalc::Result<()> {
    let cfg = CampaignConfig::from_json(
        r#"{
            // three identities and one inequality at two orders
            checks: ["semigroup", "duality", "marchaud", "lp-bound"],
            s_values: [0.3, 0.7],
            ladder: [256, 1024, 4096],
            seed: 42,
        }"#,
    )?;
    let out = run_campaign(&cfg)?;
    for o in &out.outcomes {
        let r = o.report.as_ref();
        println!(
            "{:<10} {:<22} s = {:?}: {:?}, final error {:.2e}",
            o.instance.check,
            o.instance.datum.as_deref().unwrap_or("-"),
            o.instance.s,
            r.map(|r| r.verdict),
            r.and_then(|r| r.final_error()).unwrap_or(f64::NAN)
        );
    }
    let dir = std::env::temp_dir().join("fraccalc-campaign");
    write_outputs(&dir, &out)?;
    println!("all passed: {}; outputs in {}", out.all_passed(), dir.display());
    Ok(())
}
