//! Binary entropy and the threshold `rho_0` with `H(rho_0) = 1/2`.

use crate::error::{Error, Result};

/// `H(g) = (-g log g - (1-g) log(1-g)) / log 2`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!(
            "binary entropy needs 0 <= gamma <= 1, got {gamma}"
        )));
    }
    let term = |g: f64| if g == 0.0 { 0.0 } else { -g * g.log2() };
    Ok(term(gamma) + term(1.0 - gamma))
}

/// Root of `H(t) = 1/2` on `[0, 1/2]`, by bisection to `1e-12`.
pub fn rho0() -> f64 {
    let h = |t: f64| binary_entropy(t).expect("bisection stays in [0, 1/2]");
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
