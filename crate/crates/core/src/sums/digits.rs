//! Sums of a trace function over integers with a fixed binary digit sum.

use num_complex::Complex64;

use super::{SumReport, Weight};
use crate::arith::binomial;
use crate::error::{ensure, Error, Result};
use crate::trace::TraceTable;

pub const MAX_DIGITS: u32 = 30;

/// Integers in `[0, 2^r)` with exactly `s` ones, ascending (Gosper's hack).
pub fn digit_set(r: u32, s: u32) -> impl Iterator<Item = u64> {
    let limit = 1u64 << r;
    let first = if s > r { limit } else { (1u64 << s) - 1 };
    std::iter::successors(Some(first), move |&v| {
        if v == 0 {
            return None;
        }
        let c = v & v.wrapping_neg();
        let ripple = v + c;
        Some((((ripple ^ v) >> 2) / c) | ripple)
    })
    .take_while(move |&v| v < limit)
}

/// `sum K(n mod p)` over `n < 2^r` whose binary digits sum to `s`.
pub fn digit_restricted_sum(k: &TraceTable, r: u32, s: u32) -> Result<SumReport> {
    ensure!(
        s <= r && r <= MAX_DIGITS,
        "need 0 <= s <= r <= {MAX_DIGITS}, got r = {r}, s = {s}"
    );
    let p = k.p();
    let mut value = Complex64::new(0.0, 0.0);
    let mut count = 0u64;
    for n in digit_set(r, s) {
        value += k.at(n % p);
        count += 1;
    }
    let expected = binomial(r as u64, s as u64).unwrap_or(u64::MAX);
    if count != expected {
        return Err(Error::Invariant(format!(
            "enumerated {count} integers with digit sum {s} below 2^{r}, expected {expected}"
        )));
    }
    SumReport::new(
        k,
        1u64 << r,
        Weight::DigitSum { r, s },
        count,
        value,
        count as f64,
        None,
    )
}
