//! Möbius- and divisor-twisted sums of trace functions and the machinery
//! that splits them along a sieve partition.
//!
//! * [`mobius_twisted_sum`] / [`divisor_twisted_sum`]: the headline sums
//!   `sum_{n<=N} mu(n) K(n)` and `sum_{n<=N} tau_nu(n) K(n)`.
//! * [`decompose`]: the exact class-by-class decomposition with every
//!   intermediate quantity measured.
//! * [`dyadic`], [`params`]: interval partitions and parameter choices.
//! * [`digits`], [`entropy`]: binary-digit-restricted sums and the entropy
//!   threshold that governs them.

pub mod decompose;
pub mod digits;
pub mod dyadic;
pub mod entropy;
pub mod params;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::SieveTables;
use crate::error::{ensure, Error, Result};
use crate::reduce;
use crate::report::Measured;
use crate::trace::TraceTable;

pub use decompose::{decompose_divisor, decompose_mobius, DecompositionReport};
pub use digits::digit_restricted_sum;
pub use dyadic::DyadicPartition;
pub use entropy::{binary_entropy, rho0};
pub use params::{choose_parameters, ParameterChoice};

/// Slack allowed on top of the trivial bound before it counts as violated.
pub const TRIVIAL_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    Mobius,
    Tau { nu: u32 },
    DigitSum { r: u32, s: u32 },
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Mobius => write!(f, "mobius"),
            Weight::Tau { nu } => write!(f, "tau{nu}"),
            Weight::DigitSum { r, s } => write!(f, "digits(r={r},s={s})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SumReport {
    pub p: u64,
    /// Upper end of the summation range (`2^r` for digit sums).
    pub n: u64,
    pub weight: Weight,
    pub trace: String,
    pub declared_nonexceptional: bool,
    /// Number of summands.
    pub terms: u64,
    pub value: Measured,
    pub sup_bound: f64,
    /// `N` (Möbius), `sum_{n<=N} tau_nu(n)` (divisor), `C(r, s)` (digits).
    pub trivial_bound: f64,
    pub trivial_ratio: f64,
    /// `N loglog p / log p` (Möbius) or `N (loglog p)^nu / log p` (divisor).
    pub theorem_denominator: Option<f64>,
    pub theorem_ratio: Option<f64>,
}

impl SumReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        k: &TraceTable,
        n: u64,
        weight: Weight,
        terms: u64,
        value: Complex64,
        trivial_bound: f64,
        theorem_denominator: Option<f64>,
    ) -> Result<Self> {
        let magnitude = value.norm();
        if magnitude > k.sup_bound() * trivial_bound + TRIVIAL_SLACK {
            return Err(Error::Invariant(format!(
                "|sum| = {magnitude} exceeds sup bound {} times trivial bound {trivial_bound}",
                k.sup_bound()
            )));
        }
        Ok(Self {
            p: k.p(),
            n,
            weight,
            trace: k.spec().to_string(),
            declared_nonexceptional: k.spec().declared_nonexceptional,
            terms,
            value: value.into(),
            sup_bound: k.sup_bound(),
            trivial_bound,
            trivial_ratio: magnitude / trivial_bound,
            theorem_denominator,
            theorem_ratio: theorem_denominator.map(|d| magnitude / d),
        })
    }
}

/// `N loglog p / log p`.
pub fn mobius_theorem_denominator(p: u64, n: u64) -> f64 {
    let lp = (p as f64).ln();
    n as f64 * lp.ln() / lp
}

/// `N (loglog p)^nu / log p`.
pub fn divisor_theorem_denominator(p: u64, n: u64, nu: u32) -> f64 {
    let lp = (p as f64).ln();
    n as f64 * lp.ln().powi(nu as i32) / lp
}

pub(crate) fn check_range(k: &TraceTable, tables: &SieveTables, n: u64) -> Result<()> {
    ensure!(n >= 1, "N must be at least 1");
    ensure!(
        n < k.p(),
        "N = {n} must be below p = {} (larger ranges are not covered)",
        k.p()
    );
    tables.require_bound(n)
}

/// `sum_{n<=N} mu(n) K(n)` for `1 <= N < p`.
pub fn mobius_twisted_sum(k: &TraceTable, tables: &SieveTables, n: u64) -> Result<SumReport> {
    check_range(k, tables, n)?;
    let value = reduce::sum(1..n + 1, |m| k.at(m) * tables.mu(m) as f64);
    SumReport::new(
        k,
        n,
        Weight::Mobius,
        n,
        value,
        n as f64,
        Some(mobius_theorem_denominator(k.p(), n)),
    )
}

/// `sum_{n<=N} tau_nu(n) K(n)` for `1 <= N < p`; `tables` must hold `tau_nu`.
pub fn divisor_twisted_sum(
    k: &TraceTable,
    tables: &SieveTables,
    n: u64,
    nu: u32,
) -> Result<SumReport> {
    check_range(k, tables, n)?;
    tables.require_nu(nu)?;
    let value = reduce::sum(1..n + 1, |m| k.at(m) * tables.tau(m) as f64);
    let trivial = tables.tau_moment(n, 1)? as f64;
    SumReport::new(
        k,
        n,
        Weight::Tau { nu },
        n,
        value,
        trivial,
        Some(divisor_theorem_denominator(k.p(), n, nu)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::PrimeContext;
    use crate::trace::TraceSpec;

    #[test]
    fn mobius_examples() {
        let tables = SieveTables::build(30, 2).unwrap();
        let ones = TraceTable::ones(31);
        assert_eq!(mobius_twisted_sum(&ones, &tables, 10).unwrap().value.re, -1.0);
        assert_eq!(mobius_twisted_sum(&ones, &tables, 20).unwrap().value.re, -3.0);

        let ctx = PrimeContext::new(31).unwrap();
        let k = TraceTable::build(&ctx, &TraceSpec::kloosterman(2, true)).unwrap();
        let r = mobius_twisted_sum(&k, &tables, 1).unwrap();
        assert_eq!(r.value.to_complex(), k.at(1));
        assert!(mobius_twisted_sum(&k, &tables, 31).is_err());
        assert!(mobius_twisted_sum(&k, &tables, 0).is_err());
    }

    #[test]
    fn divisor_examples() {
        let tables = SieveTables::build(30, 2).unwrap();
        let ones = TraceTable::ones(31);
        let r = divisor_twisted_sum(&ones, &tables, 6, 2).unwrap();
        assert_eq!(r.value.re, 14.0);
        assert_eq!(r.trivial_bound, 14.0);
        assert!(divisor_twisted_sum(&ones, &tables, 6, 3).is_err());

        let t1 = SieveTables::build(30, 1).unwrap();
        let ctx = PrimeContext::new(31).unwrap();
        let k = TraceTable::build(&ctx, &TraceSpec::kloosterman(3, true)).unwrap();
        let r = divisor_twisted_sum(&k, &t1, 25, 1).unwrap();
        let plain: Complex64 = (1..=25).map(|n| k.at(n)).sum();
        assert!((r.value.to_complex() - plain).norm() < 1e-12);
        let r1 = divisor_twisted_sum(&k, &tables, 1, 2).unwrap();
        assert_eq!(r1.value.to_complex(), k.at(1));
    }

    #[test]
    fn report_fields() {
        let p = 10007;
        let ctx = PrimeContext::new(p).unwrap();
        let k = TraceTable::build(&ctx, &TraceSpec::kloosterman(2, true)).unwrap();
        let tables = SieveTables::build(2000, 2).unwrap();
        let r = mobius_twisted_sum(&k, &tables, 2000).unwrap();
        assert_eq!(r.trivial_bound, 2000.0);
        assert!(r.value.magnitude <= 2.0 * 2000.0);
        let d = r.theorem_denominator.unwrap();
        assert!((d - mobius_theorem_denominator(p, 2000)).abs() < 1e-9);
        assert!((r.theorem_ratio.unwrap() - r.value.magnitude / d).abs() < 1e-12);
        assert_eq!(r.trace, "kloosterman:s=2:normalized");
    }
}
