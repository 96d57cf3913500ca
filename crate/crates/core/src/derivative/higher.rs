use crate::error::{FracError, Result};
use crate::grid::{GridFunction, Side};
use crate::integral::integrate_order;
use crate::order::HigherOrder;
use crate::special::{gamma_pos, recip_gamma};

/// `d_{j,k,s} = prod_{i=1..j} (2k - s - i) / prod_{l=0..k-1} (k - s + l)`.
pub fn representation_constant(j: u32, order: HigherOrder) -> f64 {
    let (k, s) = (order.k() as f64, order.s());
    let num: f64 = (1..=j).map(|i| 2.0 * k - s - i as f64).product();
    let den: f64 = (0..order.k()).map(|l| k - s + l as f64).product();
    num / den
}

/// `(I^(k-s)[u])^(j)` from the derivative stack `[u, u', ..., u^(k)]`:
/// `d_{j,k,s} Gamma(2k - s - j) / Gamma(k - s) * I^(2k-s-j)[u^(k)]`.
/// Requires `u^(i)(a) = 0` for `i < k`, which removes the boundary terms.
pub fn higher_frac_int(stack: &[GridFunction], order: HigherOrder, j: u32) -> Result<GridFunction> {
    let k = order.k();
    if stack.len() != k as usize + 1 {
        return Err(FracError::precondition(format!(
            "need the stack u, ..., u^({k}), got {} functions",
            stack.len()
        )));
    }
    if j > k {
        return Err(FracError::domain(format!(
            "derivative order {j} exceeds k = {k}"
        )));
    }
    let grid = stack[0].grid();
    if stack.iter().any(|f| f.grid() != grid) {
        return Err(FracError::GridMismatch);
    }
    for (i, f) in stack.iter().take(k as usize).enumerate() {
        let scale = f.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if f.values()[0].abs() > 1e-12 * scale {
            return Err(FracError::precondition(format!(
                "u^({i})(a) = {} must vanish",
                f.values()[0]
            )));
        }
    }
    let s = order.s();
    let g = 2.0 * k as f64 - s - j as f64;
    let c = representation_constant(j, order) * gamma_pos(g) * recip_gamma(k as f64 - s);
    Ok(integrate_order(&stack[k as usize], g, Side::LeftAPlus)?.scale(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_constant_is_one() {
        for (k, s) in [(1, 0.4), (2, 1.5), (3, 2.2)] {
            let o = HigherOrder::new(k, s).unwrap();
            assert!((representation_constant(k, o) - 1.0).abs() < 1e-15);
        }
    }
}
