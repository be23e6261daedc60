//! Twisted sums over a grid of primes, exponents and weights.

use std::io::Write;

use serde::Serialize;
use tracelab_core::sums::{divisor_twisted_sum, mobius_twisted_sum, SumReport};
use tracelab_core::trace::TraceSpec;

use crate::args::WeightChoice;
use crate::error::{config, CliError, ErrorRecord, Result};
use crate::inputs;
use crate::output::{cell, opt, Table};

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub primes: Vec<u64>,
    pub thetas: Vec<f64>,
    pub weights: Vec<WeightChoice>,
    pub nu: u32,
    pub trace: TraceSpec,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub theta: f64,
    pub weight: WeightChoice,
    pub n: Option<u64>,
    pub report: Option<SumReport>,
    pub error: Option<ErrorRecord>,
}

pub const COLUMNS: &[&str] = &[
    "p",
    "theta",
    "n",
    "weight",
    "nu",
    "trace",
    "re",
    "im",
    "magnitude",
    "trivial_bound",
    "trivial_ratio",
    "theorem_denominator",
    "theorem_ratio",
    "error_kind",
    "error_message",
];

impl SweepPlan {
    /// Rejects plans that cannot produce a single row.
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(config("the prime list is empty"));
        }
        if self.thetas.is_empty() {
            return Err(config("the exponent list is empty"));
        }
        if self.weights.is_empty() {
            return Err(config("no weight selected"));
        }
        for &t in &self.thetas {
            inputs::check_theta(t)?;
        }
        if self.weights.contains(&WeightChoice::Tau)
            && !(1..=tracelab_core::arith::MAX_NU).contains(&self.nu)
        {
            return Err(config(format!("--nu out of range: {}", self.nu)));
        }
        Ok(())
    }
}

/// One row per (p, theta, weight), in input order. Failures for a single
/// prime or cell are recorded in the row and the sweep moves on.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let mut rows = Vec::new();
    for &p in &plan.primes {
        match sweep_prime(plan, p) {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => {
                let rec = e.record();
                for &theta in &plan.thetas {
                    for &weight in &plan.weights {
                        rows.push(SweepRow {
                            p,
                            theta,
                            weight,
                            n: None,
                            report: None,
                            error: Some(rec.clone()),
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn sweep_prime(plan: &SweepPlan, p: u64) -> Result<Vec<SweepRow>> {
    let ctx = inputs::prime_context(p)?;
    let table = inputs::trace_table(&ctx, &plan.trace)?;
    let lengths: Vec<u64> = plan
        .thetas
        .iter()
        .map(|&t| inputs::length_from_theta(p, t))
        .collect();
    let max_n = lengths.iter().copied().max().unwrap_or(1).min(p - 1).max(1);
    let nu = plan
        .weights
        .contains(&WeightChoice::Tau)
        .then_some(plan.nu);
    let (tables, _) = inputs::sieve_tables(max_n, nu, None)?;
    let mut rows = Vec::new();
    for (&theta, &n) in plan.thetas.iter().zip(&lengths) {
        for &weight in &plan.weights {
            let res = match weight {
                WeightChoice::Mobius => mobius_twisted_sum(&table, &tables, n),
                WeightChoice::Tau => divisor_twisted_sum(&table, &tables, n, plan.nu),
            };
            let (report, error) = match res {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(CliError::from(e).record())),
            };
            rows.push(SweepRow {
                p,
                theta,
                weight,
                n: Some(n),
                report,
                error,
            });
        }
    }
    Ok(rows)
}

pub fn table(rows: &[SweepRow], plan: &SweepPlan) -> Table {
    let mut t = Table::new(COLUMNS);
    for row in rows {
        let rep = row.report.as_ref();
        let weight = match row.weight {
            WeightChoice::Mobius => "mobius",
            WeightChoice::Tau => "tau",
        };
        let nu = (row.weight == WeightChoice::Tau).then_some(plan.nu);
        t.push(vec![
            cell(row.p),
            cell(row.theta),
            opt(row.n),
            weight.to_string(),
            opt(nu),
            plan.trace.to_string(),
            opt(rep.map(|r| r.value.re)),
            opt(rep.map(|r| r.value.im)),
            opt(rep.map(|r| r.value.magnitude)),
            opt(rep.map(|r| r.trivial_bound)),
            opt(rep.map(|r| r.trivial_ratio)),
            opt(rep.and_then(|r| r.theorem_denominator)),
            opt(rep.and_then(|r| r.theorem_ratio)),
            opt(row.error.as_ref().map(|e| e.kind.clone())),
            opt(row.error.as_ref().map(|e| e.message.clone())),
        ]);
    }
    t
}

pub fn write_csv<W: Write>(rows: &[SweepRow], plan: &SweepPlan, w: W) -> Result<()> {
    table(rows, plan).write(w)
}
