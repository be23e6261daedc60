//! Class-by-class decomposition of the twisted sums along the sieve
//! partition `A_r(N; x, y)`, with every step of the argument measured.
//!
//! For each `r` the report holds
//!
//! * `U_r = sum_{n in A_r} w(n) K(n)`;
//! * `V_r = sum_{x<l<=y} sum_{m in A_{r-1}(N/l), l∤m} w(lm) K(lm)`, so that
//!   `r U_r = V_r` for Möbius weights and `U_r - V_r/r = E_r` comes only from
//!   `n` with `l^2 | n` for divisor weights;
//! * per dyadic piece `I_k`: `V_{k,r}` (coprimality kept, `sum_k V_{k,r} =
//!   V_r`), `V'_{k,r}` (coprimality dropped), the slack between them and its
//!   majorant, `W_{k,r} = sum_m w_W(m) |sum_{l in I_k, l<=N/m} K(lm)|` and
//!   the right-hand side of the Cauchy step.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::dyadic::DyadicPartition;
use super::params::ParameterChoice;
use super::{divisor_twisted_sum, mobius_twisted_sum, SumReport, Weight};
use crate::arith::{binomial, shapes, SieveTables, SievePartition};
use crate::error::{ensure, Error, Result};
use crate::reduce;
use crate::report::Measured;
use crate::trace::TraceTable;

/// Relative slack used when checking measured values against majorants.
const CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct DyadicRow {
    pub k: u32,
    /// `x_k`.
    pub scale: u64,
    pub empty: bool,
    /// `#A_{r-1}(N / x_k)`.
    pub m_count: u64,
    /// `V_{k,r}`, coprimality kept.
    pub v: Measured,
    /// `V'_{k,r}`, coprimality dropped.
    pub v_without_coprimality: Measured,
    /// `|V_{k,r} - V'_{k,r}|`.
    pub coprimality_slack: f64,
    /// `|c| (r-1) sup|K| sum_m |w(m)|` with `c = -1` (Möbius) or `nu`.
    pub coprimality_majorant: f64,
    /// `W_{k,r}`.
    pub w: f64,
    /// `(sum_m w_W(m)^2) (sum_m |inner|^2)`, which dominates `W_{k,r}^2`.
    pub cauchy_rhs: f64,
    /// `N x^-1/2 2^-k/2 + N^1/2 p^1/4 x^1/2 2^k/2 (log p)^1/2`, times
    /// `(log N)^((nu^2-1)/2)` for divisor weights.
    pub w_bound_shape: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub r: u32,
    /// `#A_r`.
    pub count: u64,
    pub u: Measured,
    /// `V_r`, absent for `r = 0`.
    pub v: Option<Measured>,
    /// `|r U_r - V_r|`.
    pub representation_residual: Option<f64>,
    /// `E_r = U_r - V_r / r`.
    pub e: Option<Measured>,
    /// `|sum_k V_{k,r} - V_r|`.
    pub refinement_residual: Option<f64>,
    /// `N x^-1/2 + N^1/2 p^1/4 y^1/2 (log p)^1/2 + r N / x`, times
    /// `(log N)^(nu^2)` for divisor weights.
    pub v_bound_shape: Option<f64>,
    pub pieces: Vec<DyadicRow>,
}

/// Extra measurements for divisor weights.
#[derive(Debug, Clone, Serialize)]
pub struct DivisorSplit {
    pub nu: u32,
    /// Part of `U_0` over `x`-smooth `n`.
    pub u0_smooth: Measured,
    /// Part of `U_0` over `n = uv` with `u` smooth and `v > 1` rough.
    pub u0_mixed: Measured,
    /// `2 sum_{u in Psi(N,x)} tau_nu(u)`.
    pub u01: u128,
    /// `sum tau_nu(uv)` over `u in Psi(N,x)`, `v in Phi*(N,y)`, `uv <= N`.
    pub u02: u128,
    /// `sup|K| (U01 + U02)`, which dominates `|U_0|`.
    pub u0_majorant: f64,
    pub u01_shape: f64,
    pub u02_shape: f64,
    /// `prod_{l<=x} (1 - 1/l)^-nu`.
    pub mertens_product: f64,
    /// `sum_{x<l<=y} sum_{m<=N/l^2} tau_nu(l^2 m)`.
    pub square_sum: u128,
    /// `sup|K|` times [`Self::square_sum`]; dominates every `|E_r|`.
    pub e_majorant: f64,
    /// `N x^-1 (log N)^(nu-1)`.
    pub e_shape: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub p: u64,
    pub n: u64,
    pub x: f64,
    pub y: f64,
    pub weight: Weight,
    pub trace: String,
    pub sup_bound: f64,
    pub parameters: Option<ParameterChoice>,
    /// The twisted sum computed directly.
    pub headline: SumReport,
    /// `sum_r U_r`.
    pub sum_of_classes: Measured,
    pub decomposition_residual: f64,
    /// `R`, the largest `r` with `A_r` non-empty.
    pub max_class: u32,
    /// `floor(log2 N)`.
    pub max_class_bound: u32,
    /// `N log x / log y`.
    pub sifted_shape: f64,
    pub dyadic: DyadicPartition,
    pub rows: Vec<ClassRow>,
    pub divisor: Option<DivisorSplit>,
}

impl DecompositionReport {
    pub fn with_parameters(mut self, choice: ParameterChoice) -> Self {
        self.parameters = Some(choice);
        self
    }

    pub fn max_representation_residual(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.representation_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_refinement_residual(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.refinement_residual)
            .fold(0.0, f64::max)
    }

    /// Largest `|E_r|`; zero for Möbius weights.
    pub fn max_e(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.e.map(|e| e.magnitude))
            .fold(0.0, f64::max)
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&ClassRow, &DyadicRow)> {
        self.rows
            .iter()
            .flat_map(|row| row.pieces.iter().map(move |piece| (row, piece)))
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Mobius,
    Divisor(u32),
}

struct Engine<'a> {
    k: &'a TraceTable,
    tables: &'a SieveTables,
    part: SievePartition,
    n: u64,
    kind: Kind,
}

#[derive(Clone, Default)]
struct PieceAcc {
    m_count: u64,
    v: Complex64,
    v_all: Complex64,
    w: f64,
    sq: f64,
    w2: f64,
    wabs: f64,
}

impl Engine<'_> {
    #[inline]
    fn weight(&self, n: u64) -> f64 {
        match self.kind {
            Kind::Mobius => self.tables.mu(n) as f64,
            Kind::Divisor(_) => self.tables.tau(n) as f64,
        }
    }

    /// `w(lm) = factor * w(m)` whenever `l ∤ m`.
    fn factor(&self) -> f64 {
        match self.kind {
            Kind::Mobius => -1.0,
            Kind::Divisor(nu) => nu as f64,
        }
    }

    #[inline]
    fn w_weight(&self, m: u64) -> f64 {
        match self.kind {
            Kind::Mobius => 1.0,
            Kind::Divisor(_) => self.tables.tau(m) as f64,
        }
    }

    fn classes(&self) -> usize {
        self.part.max_class() as usize + 1
    }

    fn u_values(&self) -> Vec<Complex64> {
        let len = self.classes();
        reduce::chunked_fold(
            1..self.n + 1,
            || vec![Complex64::new(0.0, 0.0); len],
            |acc, m| acc[self.part.class_of(m) as usize] += self.k.at(m) * self.weight(m),
            add_into,
        )
    }

    fn v_values(&self, primes: &[u64]) -> Vec<Complex64> {
        let len = self.classes();
        let per_prime: Vec<Vec<Complex64>> = primes
            .par_iter()
            .map(|&l| {
                let mut acc = vec![Complex64::new(0.0, 0.0); len];
                for m in 1..=self.n / l {
                    if m % l == 0 {
                        continue;
                    }
                    let r = self.part.class_of(m) as usize + 1;
                    acc[r] += self.k.at(l * m) * self.weight(l * m);
                }
                acc
            })
            .collect();
        let mut total = vec![Complex64::new(0.0, 0.0); len];
        for acc in per_prime {
            add_into(&mut total, acc);
        }
        total
    }

    fn piece(&self, primes: &[u64], scale: u64) -> Vec<PieceAcc> {
        let mut acc = vec![PieceAcc::default(); self.classes()];
        if primes.is_empty() {
            return acc;
        }
        let factor = self.factor();
        for m in 1..=self.n / scale {
            let r = self.part.class_of(m) as usize + 1;
            if r >= acc.len() {
                // Then lm would carry more than R interval primes.
                continue;
            }
            let cap = self.n / m;
            let mut all = Complex64::new(0.0, 0.0);
            let mut coprime = Complex64::new(0.0, 0.0);
            for &l in primes.iter().take_while(|&&l| l <= cap) {
                let z = self.k.at(l * m);
                all += z;
                if m % l != 0 {
                    coprime += z;
                }
            }
            let wm = self.weight(m);
            let ww = self.w_weight(m);
            let a = &mut acc[r];
            a.m_count += 1;
            a.v += coprime * (factor * wm);
            a.v_all += all * (factor * wm);
            a.w += ww * all.norm();
            a.sq += all.norm_sqr();
            a.w2 += ww * ww;
            a.wabs += wm.abs();
        }
        acc
    }
}

fn add_into(total: &mut Vec<Complex64>, part: Vec<Complex64>) {
    for (t, v) in total.iter_mut().zip(part) {
        *t += v;
    }
}

fn check_inputs(k: &TraceTable, tables: &SieveTables, n: u64, x: f64, y: f64) -> Result<()> {
    ensure!(
        x.is_finite() && y.is_finite() && x >= 2.0 && y >= x && n as f64 >= y,
        "need N >= y >= x >= 2, got N = {n}, x = {x}, y = {y}"
    );
    super::check_range(k, tables, n)
}

pub fn decompose_mobius(
    k: &TraceTable,
    tables: &SieveTables,
    n: u64,
    x: f64,
    y: f64,
) -> Result<DecompositionReport> {
    check_inputs(k, tables, n, x, y)?;
    let headline = mobius_twisted_sum(k, tables, n)?;
    run(k, tables, n, x, y, Kind::Mobius, headline)
}

pub fn decompose_divisor(
    k: &TraceTable,
    tables: &SieveTables,
    n: u64,
    x: f64,
    y: f64,
    nu: u32,
) -> Result<DecompositionReport> {
    check_inputs(k, tables, n, x, y)?;
    let headline = divisor_twisted_sum(k, tables, n, nu)?;
    run(k, tables, n, x, y, Kind::Divisor(nu), headline)
}

fn run(
    k: &TraceTable,
    tables: &SieveTables,
    n: u64,
    x: f64,
    y: f64,
    kind: Kind,
    headline: SumReport,
) -> Result<DecompositionReport> {
    let part = tables.partition(n, x, y)?;
    let max_class = part.max_class();
    let max_class_bound = 63 - n.leading_zeros();
    if max_class > max_class_bound {
        return Err(Error::Invariant(format!(
            "R = {max_class} exceeds floor(log2 N) = {max_class_bound}"
        )));
    }
    let engine = Engine {
        k,
        tables,
        part,
        n,
        kind,
    };
    let dyadic = DyadicPartition::new(x, y)?;
    let primes = tables.primes_in(x, y);

    let u = engine.u_values();
    let v = engine.v_values(&primes);
    let pieces: Vec<Vec<PieceAcc>> = dyadic
        .intervals
        .par_iter()
        .map(|iv| {
            let ps: Vec<u64> = primes.iter().copied().filter(|&l| iv.contains(l)).collect();
            engine.piece(&ps, iv.scale)
        })
        .collect();

    let sup = k.sup_bound();
    let p = k.p() as f64;
    let nf = n as f64;
    let log_p = p.ln();
    let log_n = nf.ln();
    let (w_log, v_log) = match kind {
        Kind::Mobius => (1.0, 1.0),
        Kind::Divisor(nu) => {
            let nu2 = (nu * nu) as f64;
            (log_n.powf((nu2 - 1.0) / 2.0), log_n.powf(nu2))
        }
    };
    let factor = engine.factor().abs();

    let mut rows = Vec::with_capacity(engine.classes());
    for r in 0..engine.classes() {
        let count = engine.part.count(r as u32);
        if r == 0 {
            rows.push(ClassRow {
                r: 0,
                count,
                u: u[0].into(),
                v: None,
                representation_residual: None,
                e: None,
                refinement_residual: None,
                v_bound_shape: None,
                pieces: Vec::new(),
            });
            continue;
        }
        let rf = r as f64;
        let mut refined = Complex64::new(0.0, 0.0);
        let mut piece_rows = Vec::with_capacity(pieces.len());
        for (iv, acc) in dyadic.intervals.iter().zip(&pieces) {
            let a = &acc[r];
            refined += a.v;
            let two_k = 2f64.powi(iv.k as i32);
            piece_rows.push(DyadicRow {
                k: iv.k,
                scale: iv.scale,
                empty: iv.empty,
                m_count: a.m_count,
                v: a.v.into(),
                v_without_coprimality: a.v_all.into(),
                coprimality_slack: (a.v - a.v_all).norm(),
                coprimality_majorant: factor * (rf - 1.0) * sup * a.wabs,
                w: a.w,
                cauchy_rhs: a.w2 * a.sq,
                w_bound_shape: w_log
                    * (nf / (x * two_k).sqrt()
                        + (nf * x * two_k * log_p).sqrt() * p.powf(0.25)),
            });
        }
        let (representation_residual, e) = match kind {
            Kind::Mobius => (Some((u[r] * rf - v[r]).norm()), None),
            Kind::Divisor(_) => (None, Some((u[r] - v[r] / rf).into())),
        };
        rows.push(ClassRow {
            r: r as u32,
            count,
            u: u[r].into(),
            v: Some(v[r].into()),
            representation_residual,
            e,
            refinement_residual: Some((refined - v[r]).norm()),
            v_bound_shape: Some(
                v_log
                    * (nf / x.sqrt() + (nf * y * log_p).sqrt() * p.powf(0.25) + rf * nf / x),
            ),
            pieces: piece_rows,
        });
    }

    let total: Complex64 = u.iter().sum();
    let divisor = match kind {
        Kind::Mobius => None,
        Kind::Divisor(nu) => Some(divisor_split(&engine, x, y, nu, &primes, u[0])?),
    };
    if let Some(split) = &divisor {
        for row in &rows {
            if let Some(e) = row.e {
                if e.magnitude > split.e_majorant * (1.0 + CHECK_SLACK) + CHECK_SLACK {
                    return Err(Error::Invariant(format!(
                        "|E_{}| = {} exceeds its majorant {}",
                        row.r, e.magnitude, split.e_majorant
                    )));
                }
            }
        }
    }

    Ok(DecompositionReport {
        p: k.p(),
        n,
        x,
        y,
        weight: headline.weight,
        trace: headline.trace.clone(),
        sup_bound: sup,
        parameters: None,
        decomposition_residual: (total - headline.value.to_complex()).norm(),
        headline,
        sum_of_classes: total.into(),
        max_class,
        max_class_bound,
        sifted_shape: shapes::sifted_count(n, x, y),
        dyadic,
        rows,
        divisor,
    })
}

fn divisor_split(
    engine: &Engine<'_>,
    x: f64,
    y: f64,
    nu: u32,
    primes: &[u64],
    u0: Complex64,
) -> Result<DivisorSplit> {
    let tables = engine.tables;
    let n = engine.n;
    let smooth: Vec<bool> = (0..=n)
        .map(|m| m >= 1 && tables.largest_prime_factor(m) as f64 <= x)
        .collect();

    let u0_smooth = reduce::sum(1..n + 1, |m| {
        if engine.part.class_of(m) == 0 && smooth[m as usize] {
            engine.k.at(m) * engine.weight(m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u0_mixed = reduce::sum(1..n + 1, |m| {
        if engine.part.class_of(m) == 0 && !smooth[m as usize] {
            engine.k.at(m) * engine.weight(m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    debug_assert!((u0_smooth + u0_mixed - u0).norm() <= 1e-6 * n as f64);

    let u01: u128 = 2 * (1..=n)
        .filter(|&m| smooth[m as usize])
        .map(|m| tables.tau(m) as u128)
        .sum::<u128>();
    let rough: Vec<u64> = tables
        .enumerate_rough(n, y)?
        .into_iter()
        .filter(|&v| v > 1)
        .collect();
    let u02: u128 = rough
        .par_iter()
        .map(|&v| {
            (1..=n / v)
                .filter(|&u| smooth[u as usize])
                .map(|u| tables.tau(u * v) as u128)
                .sum::<u128>()
        })
        .sum();

    let square_sum: u128 = primes
        .iter()
        .map(|&l| {
            let l2 = l * l;
            (1..=n / l2).map(|m| tables.tau(l2 * m) as u128).sum::<u128>()
        })
        .sum();

    let mertens_product: f64 = tables
        .primes_in(1.0, x)
        .iter()
        .map(|&l| (1.0 - 1.0 / l as f64).powi(-(nu as i32)))
        .product();

    let sup = engine.k.sup_bound();
    let nf = n as f64;
    let log_n = nf.ln();
    let nu_i = nu as i32;
    Ok(DivisorSplit {
        nu,
        u0_smooth: u0_smooth.into(),
        u0_mixed: u0_mixed.into(),
        u01,
        u02,
        u0_majorant: sup * (u01 + u02) as f64,
        u01_shape: nf
            * (-log_n / (4.0 * x.ln())).exp()
            * log_n.powf(((nu * nu) as f64 - 1.0) / 2.0),
        u02_shape: nf * log_n.powi(nu_i - 1) * x.ln().powi(nu_i) / y.ln().powi(nu_i),
        mertens_product,
        square_sum,
        e_majorant: sup * square_sum as f64,
        e_shape: nf / x * log_n.powi(nu_i - 1),
    })
}

/// `sum_{j>=0} C(j+nu-1, j) l^-j`, summed until the terms stop mattering.
pub fn local_factor_series(l: u64, nu: u32) -> Result<f64> {
    ensure!(l >= 2 && nu >= 1, "need l >= 2 and nu >= 1");
    let lf = l as f64;
    let mut total = 0.0;
    for j in 0..400u64 {
        let c = binomial(j + nu as u64 - 1, j).ok_or(Error::Capacity {
            what: "binomial coefficient",
            needed: j,
            limit: u64::MAX,
        })?;
        let term = c as f64 * lf.powi(-(j as i32));
        total += term;
        if term < 1e-18 * total {
            break;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::PrimeContext;
    use crate::trace::TraceSpec;

    fn kloosterman(p: u64) -> TraceTable {
        let ctx = PrimeContext::new(p).unwrap();
        TraceTable::build(&ctx, &TraceSpec::kloosterman(2, true)).unwrap()
    }

    #[test]
    fn mobius_ones_example() {
        let tables = SieveTables::build(30, 2).unwrap();
        let ones = TraceTable::ones(31);
        let rep = decompose_mobius(&ones, &tables, 20, 2.0, 5.0).unwrap();
        let u: Vec<f64> = rep.rows.iter().map(|r| r.u.re).collect();
        assert_eq!(u, vec![-4.0, 0.0, 1.0]);
        assert_eq!(rep.sum_of_classes.re, -3.0);
        assert_eq!(rep.decomposition_residual, 0.0);
        assert_eq!(rep.max_class, 2);
        assert!(rep.max_representation_residual() < 1e-12);
    }

    #[test]
    fn divisor_ones_example() {
        let tables = SieveTables::build(30, 2).unwrap();
        let ones = TraceTable::ones(31);
        let rep = decompose_divisor(&ones, &tables, 20, 2.0, 5.0, 2).unwrap();
        assert_eq!(rep.sum_of_classes.re, 66.0);
        assert_eq!(rep.headline.value.re, 66.0);
        let split = rep.divisor.as_ref().unwrap();
        for row in &rep.rows[1..] {
            assert!(row.e.unwrap().magnitude <= split.e_majorant);
        }
        // U_0 = U_0(smooth) + U_0(mixed), both bounded by the exact majorant.
        let u0 = split.u0_smooth.to_complex() + split.u0_mixed.to_complex();
        assert!((u0 - rep.rows[0].u.to_complex()).norm() < 1e-12);
        assert!(rep.rows[0].u.magnitude <= split.u0_majorant);
    }

    #[test]
    fn divisor_nu_one_matches_mobius_partition() {
        let tables = SieveTables::build(200, 1).unwrap();
        let k = kloosterman(211);
        let mob = decompose_mobius(&k, &tables, 200, 3.0, 20.0).unwrap();
        let div = decompose_divisor(&k, &tables, 200, 3.0, 20.0, 1).unwrap();
        assert_eq!(mob.rows.len(), div.rows.len());
        for (a, b) in mob.rows.iter().zip(&div.rows) {
            assert_eq!(a.count, b.count);
        }
        let part = tables.partition(200, 3.0, 20.0).unwrap();
        for row in &div.rows {
            let direct: Complex64 = part.members(row.r).map(|n| k.at(n)).sum();
            assert!((direct - row.u.to_complex()).norm() < 1e-9);
        }
    }

    #[test]
    fn kloosterman_identities_mobius() {
        let p = 10007;
        let k = kloosterman(p);
        let tables = SieveTables::build(1500, 2).unwrap();
        let rep = decompose_mobius(&k, &tables, 1500, 4.0, 40.0).unwrap();
        let tol = 1e-9 * 1500.0;
        assert!(rep.decomposition_residual <= tol);
        assert!(rep.max_representation_residual() <= tol);
        assert!(rep.max_refinement_residual() <= tol);
        assert!(rep.max_class <= rep.max_class_bound);
        for (row, piece) in rep.pieces() {
            assert!(piece.coprimality_slack <= piece.coprimality_majorant + 1e-9);
            assert!(piece.w * piece.w <= piece.cauchy_rhs * (1.0 + 1e-12) + 1e-9);
            // |V'_{k,r}| <= W_{k,r} for Möbius weights.
            assert!(piece.v_without_coprimality.magnitude <= piece.w + 1e-9);
            if row.r == 1 {
                assert_eq!(piece.coprimality_slack, 0.0);
            }
        }
    }

    #[test]
    fn kloosterman_identities_divisor() {
        let p = 10007;
        let k = kloosterman(p);
        let tables = SieveTables::build(1500, 2).unwrap();
        let rep = decompose_divisor(&k, &tables, 1500, 4.0, 40.0, 2).unwrap();
        let tol = 1e-9 * 1500.0;
        assert!(rep.decomposition_residual <= tol);
        assert!(rep.max_refinement_residual() <= tol);
        let split = rep.divisor.as_ref().unwrap();
        assert!(rep.max_e() <= split.e_majorant);
        assert!(rep.rows[0].u.magnitude <= split.u0_majorant);
        for (_, piece) in rep.pieces() {
            assert!(piece.coprimality_slack <= piece.coprimality_majorant + 1e-9);
            assert!(piece.v_without_coprimality.magnitude <= 2.0 * piece.w + 1e-9);
        }
    }

    #[test]
    fn e_vanishes_without_square_divisors() {
        // E_r only sees n with l^2 | n; here every l^2 exceeds N.
        let tables = SieveTables::build(400, 3).unwrap();
        let k = kloosterman(401);
        let rep = decompose_divisor(&k, &tables, 400, 21.0, 40.0, 3).unwrap();
        assert_eq!(rep.divisor.as_ref().unwrap().square_sum, 0);
        assert!(rep.max_e() < 1e-9);
    }

    #[test]
    fn preconditions() {
        let tables = SieveTables::build(100, 2).unwrap();
        let k = kloosterman(101);
        assert!(decompose_mobius(&k, &tables, 100, 1.0, 5.0).is_err());
        assert!(decompose_mobius(&k, &tables, 100, 6.0, 5.0).is_err());
        assert!(decompose_mobius(&k, &tables, 50, 2.0, 60.0).is_err());
        assert!(decompose_mobius(&kloosterman(97), &tables, 100, 2.0, 5.0).is_err());
        assert!(decompose_divisor(&k, &tables, 100, 2.0, 5.0, 3).is_err());
    }

    #[test]
    fn local_factor_series_matches_closed_form() {
        for l in [2u64, 3, 5, 7] {
            for nu in 1..=4u32 {
                let s = local_factor_series(l, nu).unwrap();
                let closed = (1.0 - 1.0 / l as f64).powi(-(nu as i32));
                assert!((s - closed).abs() <= 1e-10, "l = {l}, nu = {nu}");
            }
        }
    }

    #[test]
    fn mertens_product_small() {
        let tables = SieveTables::build(100, 2).unwrap();
        let ones = TraceTable::ones(101);
        let rep = decompose_divisor(&ones, &tables, 100, 5.0, 10.0, 2).unwrap();
        let expected = (2.0f64 * 1.5 * 1.25).powi(2);
        assert!((rep.divisor.unwrap().mertens_product - expected).abs() < 1e-12);
    }
}
