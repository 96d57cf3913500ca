//! Fractional orders.

use crate::error::{FracError, Result};
use serde::{Deserialize, Serialize};

/// Distance kept from the endpoints 0 and 1.
pub const ORDER_EPS: f64 = 1e-6;

/// An order `s` in the open unit interval, clamped to `[1e-6, 1 - 1e-6]`.
///
/// Values outside `(0, 1)` are rejected. Values inside but closer than
/// `ORDER_EPS` to an endpoint are clamped, since `Gamma(1 - s)` and the kernel
/// exponents degenerate there.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(FracError::domain(format!(
                "order must lie in (0, 1), got {s}"
            )));
        }
        Ok(FracOrder(s.clamp(ORDER_EPS, 1.0 - ORDER_EPS)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The complementary order `1 - s`.
    pub fn complement(self) -> FracOrder {
        FracOrder((1.0 - self.0).clamp(ORDER_EPS, 1.0 - ORDER_EPS))
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = FracError;
    fn try_from(s: f64) -> Result<Self> {
        FracOrder::new(s)
    }
}

impl From<FracOrder> for f64 {
    fn from(s: FracOrder) -> f64 {
        s.0
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A higher order `s` with `k - 1 < s < k`, `k` in `{1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherOrder {
    k: u32,
    s: f64,
}

impl HigherOrder {
    pub fn new(k: u32, s: f64) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(FracError::domain(format!("k must be 1, 2 or 3, got {k}")));
        }
        let lo = (k - 1) as f64;
        if !(s > lo && s < k as f64) {
            return Err(FracError::domain(format!("order {s} not in ({lo}, {k})")));
        }
        Ok(HigherOrder { k, s })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn s(self) -> f64 {
        self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_and_rejects() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert_eq!(FracOrder::new(1e-9).unwrap().value(), ORDER_EPS);
        assert_eq!(FracOrder::new(0.3).unwrap().value(), 0.3);
        assert!((FracOrder::new(0.3).unwrap().complement().value() - 0.7).abs() < 1e-16);
    }

    #[test]
    fn higher_order_ranges() {
        assert!(HigherOrder::new(2, 1.5).is_ok());
        assert!(HigherOrder::new(2, 0.5).is_err());
        assert!(HigherOrder::new(4, 3.5).is_err());
    }
}
