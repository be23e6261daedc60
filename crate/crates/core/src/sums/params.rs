//! Automatic choice of the sieving parameters `(x, y)`.
//!
//! Möbius: `x = (log p)^4`; divisor: `x = (log p)^(2(nu^2+1))`; both use
//! `y = p^(eps/3)`. The raw values are then clamped into a usable range for
//! the given `N`: `x <- max(2, min(x, sqrt N))`, `y <- max(2x, min(y, N))`.

use serde::Serialize;

use super::Weight;
use crate::error::{ensure, Result};

pub const DEFAULT_EPSILON: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct ParameterChoice {
    pub weight: Weight,
    pub epsilon: f64,
    pub log_p: f64,
    pub n: u64,
    pub raw_x: f64,
    pub raw_y: f64,
    pub x: f64,
    pub y: f64,
    /// Set when either value was moved by the clamp.
    pub clamped: bool,
}

pub fn choose_parameters(p: u64, n: u64, epsilon: f64, weight: Weight) -> Result<ParameterChoice> {
    ensure!(p >= 3, "p must be at least 3, got {p}");
    choose_parameters_for_log_p((p as f64).ln(), n, epsilon, weight)
}

/// Same as [`choose_parameters`] but with `log p` given directly, which lets
/// the asymptotic regime be explored without an actual prime of that size.
pub fn choose_parameters_for_log_p(
    log_p: f64,
    n: u64,
    epsilon: f64,
    weight: Weight,
) -> Result<ParameterChoice> {
    ensure!(log_p.is_finite() && log_p > 1.0, "log p must exceed 1, got {log_p}");
    ensure!(
        epsilon > 0.0 && epsilon <= 1.0,
        "epsilon must lie in (0, 1], got {epsilon}"
    );
    ensure!(n >= 4, "N must be at least 4 for a valid (x, y), got {n}");
    let raw_x = match weight {
        Weight::Mobius => log_p.powi(4),
        Weight::Tau { nu } => log_p.powf(2.0 * ((nu * nu) as f64 + 1.0)),
        Weight::DigitSum { .. } => {
            return Err(crate::Error::Precondition(
                "no sieve parameters for digit-restricted sums".into(),
            ))
        }
    };
    let raw_y = (epsilon * log_p / 3.0).exp();
    let nf = n as f64;
    let x = raw_x.min(nf.sqrt()).max(2.0);
    let y = raw_y.min(nf).max(2.0 * x);
    Ok(ParameterChoice {
        weight,
        epsilon,
        log_p,
        n,
        raw_x,
        raw_y,
        x,
        y,
        clamped: x != raw_x || y != raw_y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_values() {
        let c = choose_parameters_for_log_p(100.0, 1 << 40, 0.5, Weight::Mobius).unwrap();
        assert!((c.raw_x - 1e8).abs() < 1e-3);
        assert!((c.raw_y - (50.0f64 / 3.0).exp()).abs() < 1e-6);

        let c = choose_parameters_for_log_p(10.0, 1 << 40, 0.3, Weight::Tau { nu: 2 }).unwrap();
        assert!((c.raw_x - 1e10).abs() < 1e-2);
        assert!((c.raw_y - 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn clamping_at_small_p() {
        let p = 10007u64;
        let c = choose_parameters(p, 1500, 0.5, Weight::Mobius).unwrap();
        // (log p)^4 ~ 7236 is far above sqrt(1500).
        assert!(c.clamped);
        assert!((c.x - 1500f64.sqrt()).abs() < 1e-12);
        assert!(c.y >= 2.0 * c.x && c.y <= 1500.0);
        assert!(c.x >= 2.0);

        let c = choose_parameters(p, 4, 0.5, Weight::Tau { nu: 3 }).unwrap();
        assert_eq!((c.x, c.y), (2.0, 4.0));
        assert!(choose_parameters(p, 3, 0.5, Weight::Mobius).is_err());
        assert!(choose_parameters(p, 100, 0.0, Weight::Mobius).is_err());
        assert!(choose_parameters(p, 100, 1.5, Weight::Mobius).is_err());
    }

    #[test]
    fn unclamped_regime() {
        let c = choose_parameters_for_log_p(5.0, 1 << 40, 1.0, Weight::Mobius).unwrap();
        // raw_x = 625, raw_y = e^(5/3) ~ 5.3 < 2x, so only y is lifted.
        assert_eq!(c.x, 625.0);
        assert_eq!(c.y, 1250.0);
        assert!(c.clamped);
        let c = choose_parameters_for_log_p(2.0, 1 << 40, 1.0, Weight::Mobius).unwrap();
        assert_eq!(c.x, 16.0);
    }
}
