//! Verification reports and the ladder statistics behind their verdicts.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    DivergesAsExpected,
    NotApplicable,
}

impl Verdict {
    /// Whether a campaign should count this verdict as a success.
    pub fn is_ok(self) -> bool {
        !matches!(self, Verdict::Fail)
    }
}

/// A named identity or inequality checked on a ladder of grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub grid_sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub rate: Option<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<VerificationReport>,
    /// Only filled in when timings are requested; excluded by default so that
    /// serialized reports are reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        VerificationReport {
            identity: identity.into(),
            params: BTreeMap::new(),
            grid_sizes: Vec::new(),
            errors: Vec::new(),
            rate: None,
            verdict: Verdict::NotApplicable,
            notes: Vec::new(),
            components: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    /// Record a ladder and fit its rate.
    pub fn ladder(mut self, ns: &[usize], errors: &[f64]) -> Self {
        self.grid_sizes = ns.to_vec();
        self.errors = errors.to_vec();
        self.rate = fit_rate(ns, errors);
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn component(mut self, r: VerificationReport) -> Self {
        self.components.push(r);
        self
    }

    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().copied()
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_ok() && self.components.iter().all(|c| c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// `n,error` rows.
    pub fn write_ladder_csv<W: Write>(&self, w: W) -> crate::Result<()> {
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wr.write_record(["n", "error"])?;
        for (n, e) in self.grid_sizes.iter().zip(&self.errors) {
            wr.write_record([n.to_string(), format!("{:.16e}", e)])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Least-squares slope of `log(error)` against `log(h)`, `h ~ 1/n`.
/// `None` when fewer than two positive errors are available.
pub fn fit_rate(ns: &[usize], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors)
        .filter(|(_, e)| **e > 0.0 && e.is_finite())
        .map(|(n, e)| (-(*n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Each value is below its predecessor, or already at or below `floor`.
pub fn is_decreasing(values: &[f64], floor: f64) -> bool {
    values.windows(2).all(|w| w[1] < w[0] || w[1] <= floor)
}

/// At least `min_levels` values and every consecutive ratio `>= factor`.
pub fn diverges(values: &[f64], factor: f64, min_levels: usize) -> bool {
    values.len() >= min_levels
        && values.iter().all(|v| *v > 0.0)
        && values.windows(2).all(|w| w[1] >= factor * w[0])
}

/// Consecutive ratios `v[k+1] / v[k]`.
pub fn ratios(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Pass iff the ladder decreases (down to `floor`) and ends at or below
/// `threshold`.
pub fn ladder_verdict(errors: &[f64], threshold: f64, floor: f64) -> Verdict {
    match errors.last() {
        Some(&last) if is_decreasing(errors, floor) && last <= threshold => Verdict::Pass,
        _ => Verdict::Fail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_exact_power() {
        let ns = [64, 128, 256, 512];
        let e: Vec<f64> = ns.iter().map(|&n| 3.0 / (n as f64).powi(2)).collect();
        assert!((fit_rate(&ns, &e).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_rate(&ns, &[0.0; 4]), None);
    }

    #[test]
    fn monotonicity_and_divergence() {
        assert!(is_decreasing(&[1.0, 0.5, 0.1], 0.0));
        assert!(!is_decreasing(&[1.0, 0.5, 0.6], 0.0));
        assert!(is_decreasing(&[1e-16, 2e-16], 1e-12));
        assert!(diverges(&[1.0, 1.3, 1.7], 1.2, 3));
        assert!(!diverges(&[1.0, 1.3], 1.2, 3));
        assert!(!diverges(&[1.0, 1.3, 1.4], 1.2, 3));
    }

    #[test]
    fn json_omits_wall_time() {
        let r = VerificationReport::new("x")
            .param("s", 0.5)
            .ladder(&[4, 8], &[1.0, 0.25]);
        let j = r.to_json();
        assert!(!j.contains("wall_time"));
        assert!(j.contains("\"identity\": \"x\""));
        let back: VerificationReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }
}
