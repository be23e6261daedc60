//! Sieved arithmetic-function tables and sieve-counting sets.
//!
//! [`SieveTables`] holds smallest prime factors, the Möbius function and
//! optionally one generalised divisor function `tau_nu`. Counting helpers
//! return exact integers; the matching asymptotic shapes live in
//! [`shapes`] so reports can print `count / shape` without asserting any
//! constant.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{ensure, Error, Result};

pub const MAX_SIEVE_BOUND: u64 = 100_000_000;
pub const MAX_NU: u32 = 8;
/// Default memory budget for sieve tables: 2 GB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

const CACHE_MAGIC: &[u8; 4] = b"TRCL";
const CACHE_VERSION: u32 = 1;

/// `true` when the prime (or integer) `l` lies in the half-open `(x, y]`.
#[inline]
pub fn in_interval(l: u64, x: f64, y: f64) -> bool {
    let l = l as f64;
    l > x && l <= y
}

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

#[derive(Debug, Clone)]
struct TauTable {
    nu: u32,
    values: Vec<u64>,
}

/// Smallest-prime-factor, Möbius and `tau_nu` tables for `1..=n`.
#[derive(Debug, Clone)]
pub struct SieveTables {
    n: u64,
    spf: Vec<u32>,
    mu: Vec<i8>,
    tau: Option<TauTable>,
}

impl SieveTables {
    /// Tables up to `n` with `tau_nu` for the requested `nu`.
    pub fn build(n: u64, nu: u32) -> Result<Self> {
        Self::build_with_budget(n, Some(nu), DEFAULT_MEMORY_BUDGET)
    }

    /// Tables up to `n` without a divisor-function table.
    pub fn build_mobius(n: u64) -> Result<Self> {
        Self::build_with_budget(n, None, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(n: u64, nu: Option<u32>, budget: u64) -> Result<Self> {
        ensure!(n >= 1, "sieve bound must be at least 1, got {n}");
        if n > MAX_SIEVE_BOUND {
            return Err(Error::Capacity {
                what: "sieve bound",
                needed: n,
                limit: MAX_SIEVE_BOUND,
            });
        }
        if let Some(nu) = nu {
            ensure!((1..=MAX_NU).contains(&nu), "nu must lie in 1..={MAX_NU}, got {nu}");
        }
        let needed = Self::memory_estimate(n, nu.is_some());
        if needed > budget {
            return Err(Error::Capacity {
                what: "sieve memory (bytes)",
                needed,
                limit: budget,
            });
        }

        let len = n as usize + 1;
        let mut spf = vec![0u32; len];
        let mut mu = vec![0i8; len];
        let mut primes: Vec<u32> = Vec::new();
        spf[1] = 1;
        mu[1] = 1;
        // Linear sieve: each composite is crossed out once, by its
        // smallest prime factor.
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &q in &primes {
                let j = i * q as usize;
                if q > si || j >= len {
                    break;
                }
                spf[j] = q;
                mu[j] = if q == si { 0 } else { -mu[i] };
            }
        }

        let mut tables = Self {
            n,
            spf,
            mu,
            tau: None,
        };
        if let Some(nu) = nu {
            tables.tau = Some(tables.compute_tau(nu)?);
        }
        Ok(tables)
    }

    fn memory_estimate(n: u64, with_tau: bool) -> u64 {
        let per = 4 + 1 + if with_tau { 8 } else { 0 };
        (n + 1).saturating_mul(per)
    }

    fn compute_tau(&self, nu: u32) -> Result<TauTable> {
        // tau_nu(p^a) = C(a + nu - 1, nu - 1); exponents stay below 27.
        let local: Vec<u64> = (0..64u64)
            .map(|a| binomial(a + nu as u64 - 1, nu as u64 - 1).unwrap_or(u64::MAX))
            .collect();
        let len = self.n as usize + 1;
        let mut values = vec![0u64; len];
        values[1] = 1;
        for i in 2..len {
            let q = self.spf[i] as usize;
            let mut rest = i / q;
            let mut a = 1;
            while rest % q == 0 {
                rest /= q;
                a += 1;
            }
            values[i] = values[rest].checked_mul(local[a]).ok_or(Error::Capacity {
                what: "tau value",
                needed: i as u64,
                limit: u64::MAX,
            })?;
        }
        Ok(TauTable { nu, values })
    }

    pub fn bound(&self) -> u64 {
        self.n
    }

    /// The `nu` of the stored divisor table, if any.
    pub fn nu(&self) -> Option<u32> {
        self.tau.as_ref().map(|t| t.nu)
    }

    /// Errors unless a `tau_nu` table for exactly this `nu` is present.
    pub fn require_nu(&self, nu: u32) -> Result<()> {
        match self.nu() {
            Some(have) if have == nu => Ok(()),
            Some(have) => Err(Error::Precondition(format!(
                "tables hold tau_{have}, tau_{nu} requested"
            ))),
            None => Err(Error::Precondition(format!(
                "tables were built without tau (tau_{nu} requested)"
            ))),
        }
    }

    pub fn require_bound(&self, n: u64) -> Result<()> {
        ensure!(
            n <= self.n,
            "range {n} exceeds sieve bound {}",
            self.n
        );
        Ok(())
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// `tau_nu(n)`.
    ///
    /// # Panics
    /// If the tables were built without a divisor table.
    #[inline]
    pub fn tau(&self, n: u64) -> u64 {
        self.tau.as_ref().expect("tau table not built").values[n as usize]
    }

    pub fn tau_table(&self) -> Option<&[u64]> {
        self.tau.as_ref().map(|t| t.values.as_slice())
    }

    pub fn mu_table(&self) -> &[i8] {
        &self.mu
    }

    /// Prime factorisation `[(prime, exponent)]`, ascending.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let q = self.spf(n);
            n /= q;
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
        out
    }

    pub fn largest_prime_factor(&self, mut n: u64) -> u64 {
        let mut last = 1;
        while n > 1 {
            last = self.spf(n);
            n /= last;
        }
        last
    }

    /// Number of prime divisors of `n` in `(x, y]`, with multiplicity.
    pub fn omega_in_interval(&self, mut n: u64, x: f64, y: f64) -> u32 {
        let mut r = 0;
        while n > 1 {
            let q = self.spf(n);
            if in_interval(q, x, y) {
                r += 1;
            }
            n /= q;
        }
        r
    }

    pub fn primes_in(&self, x: f64, y: f64) -> Vec<u64> {
        let lo = if x < 0.0 { 0 } else { x.floor() as u64 + 1 };
        let hi = (y.floor() as u64).min(self.n);
        (lo.max(2)..=hi)
            .filter(|&l| self.is_prime(l) && in_interval(l, x, y))
            .collect()
    }

    /// Partition of `1..=n` by the number of prime divisors in `(x, y]`.
    pub fn partition(&self, n: u64, x: f64, y: f64) -> Result<SievePartition> {
        self.require_bound(n)?;
        ensure!(x >= 2.0 && y >= x, "need y >= x >= 2, got x = {x}, y = {y}");
        ensure!(n as f64 >= y, "need N >= y, got N = {n}, y = {y}");
        let mut classes = vec![0u8; n as usize + 1];
        let mut counts: Vec<u64> = vec![0];
        for m in 1..=n {
            let r = self.omega_in_interval(m, x, y) as usize;
            classes[m as usize] = r as u8;
            if r >= counts.len() {
                counts.resize(r + 1, 0);
            }
            counts[r] += 1;
        }
        Ok(SievePartition {
            n,
            x,
            y,
            classes,
            counts,
        })
    }

    /// `#{m <= n : every prime divisor of m is <= y}`, counting `m = 1`.
    pub fn count_smooth(&self, n: u64, y: f64) -> Result<u64> {
        self.require_bound(n)?;
        ensure!(y >= 2.0 && n as f64 >= y, "need N >= y >= 2, got N = {n}, y = {y}");
        Ok((1..=n)
            .filter(|&m| self.largest_prime_factor(m) as f64 <= y)
            .count() as u64)
    }

    /// `{1} ∪ {m <= n : every prime divisor of m is >= y}`, ascending.
    pub fn enumerate_rough(&self, n: u64, y: f64) -> Result<Vec<u64>> {
        self.require_bound(n)?;
        ensure!(y >= 2.0 && n as f64 >= y, "need N >= y >= 2, got N = {n}, y = {y}");
        Ok((1..=n)
            .filter(|&m| m == 1 || self.spf(m) as f64 >= y)
            .collect())
    }

    /// Sum of `tau_nu` over the rough set of [`Self::enumerate_rough`].
    pub fn s_nu(&self, n: u64, y: f64, nu: u32) -> Result<u64> {
        self.require_nu(nu)?;
        let rough = self.enumerate_rough(n, y)?;
        rough
            .iter()
            .try_fold(0u64, |acc, &m| acc.checked_add(self.tau(m)))
            .ok_or(Error::Capacity {
                what: "rough divisor sum",
                needed: n,
                limit: u64::MAX,
            })
    }

    /// `sum_{m <= n} tau_nu(m)^power` for `power` in `{1, 2}`.
    pub fn tau_moment(&self, n: u64, power: u32) -> Result<u128> {
        ensure!(power == 1 || power == 2, "power must be 1 or 2, got {power}");
        self.require_bound(n)?;
        let tau = self
            .tau_table()
            .ok_or_else(|| Error::Precondition("tables were built without tau".into()))?;
        Ok(tau[1..=n as usize]
            .iter()
            .map(|&t| (t as u128).pow(power))
            .sum())
    }

    /// Mertens function `sum_{m <= n} mu(m)`.
    pub fn mertens(&self, n: u64) -> Result<i64> {
        self.require_bound(n)?;
        Ok(self.mu[1..=n as usize].iter().map(|&m| m as i64).sum())
    }

    /// Writes the tables in the little-endian `TRCL` cache format:
    ///
    /// ```text
    /// magic "TRCL" | version u32 | N u64 | nu u32 (0 = no tau)
    /// spf  (N+1) x u32
    /// mu   (N+1) x i8
    /// tau  (N+1) x u64   (only when nu > 0)
    /// ```
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.n.to_le_bytes())?;
        w.write_all(&self.nu().unwrap_or(0).to_le_bytes())?;
        for &v in &self.spf {
            w.write_all(&v.to_le_bytes())?;
        }
        let mu_bytes: Vec<u8> = self.mu.iter().map(|&m| m as u8).collect();
        w.write_all(&mu_bytes)?;
        if let Some(t) = &self.tau {
            for &v in &t.values {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != CACHE_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = read_u64(&mut r)?;
        let nu = read_u32(&mut r)?;
        if n == 0 || n > MAX_SIEVE_BOUND || nu > MAX_NU {
            return Err(Error::Format(format!("bad header: N = {n}, nu = {nu}")));
        }
        let len = n as usize + 1;
        let mut buf = vec![0u8; len * 4];
        r.read_exact(&mut buf)?;
        let spf = buf
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut mu_bytes = vec![0u8; len];
        r.read_exact(&mut mu_bytes)?;
        let mu = mu_bytes.into_iter().map(|b| b as i8).collect();
        let tau = if nu > 0 {
            let mut buf = vec![0u8; len * 8];
            r.read_exact(&mut buf)?;
            Some(TauTable {
                nu,
                values: buf
                    .chunks_exact(8)
                    .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            })
        } else {
            None
        };
        let mut rest = Vec::new();
        r.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(Error::Format(format!("{} trailing bytes", rest.len())));
        }
        Ok(Self { n, spf, mu, tau })
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// `1..=n` split by the number `r` of prime divisors (with multiplicity)
/// in `(x, y]`.
#[derive(Debug, Clone)]
pub struct SievePartition {
    pub n: u64,
    pub x: f64,
    pub y: f64,
    classes: Vec<u8>,
    counts: Vec<u64>,
}

impl SievePartition {
    #[inline]
    pub fn class_of(&self, m: u64) -> u32 {
        self.classes[m as usize] as u32
    }

    /// `#A_r` for `r = 0..=R`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, r: u32) -> u64 {
        self.counts.get(r as usize).copied().unwrap_or(0)
    }

    /// Largest attained `r`.
    pub fn max_class(&self) -> u32 {
        (self.counts.len() - 1) as u32
    }

    /// Members of `A_r`, ascending.
    pub fn members(&self, r: u32) -> impl Iterator<Item = u64> + '_ {
        (1..=self.n).filter(move |&m| self.class_of(m) == r)
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            n: self.n,
            x: self.x,
            y: self.y,
            counts: self.counts.clone(),
            max_class: self.max_class(),
            sifted_shape: shapes::sifted_count(self.n, self.x, self.y),
            sifted_ratio: self.count(0) as f64 / shapes::sifted_count(self.n, self.x, self.y),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub n: u64,
    pub x: f64,
    pub y: f64,
    pub counts: Vec<u64>,
    pub max_class: u32,
    pub sifted_shape: f64,
    pub sifted_ratio: f64,
}

/// Asymptotic shapes of the counting functions (no constants).
pub mod shapes {
    /// `N log x / log y`, the shape of `#A_0(N; x, y)`.
    pub fn sifted_count(n: u64, x: f64, y: f64) -> f64 {
        n as f64 * x.ln() / y.ln()
    }

    /// `N exp(-log N / (2 log y))`, the shape of `Psi(N, y)`.
    pub fn smooth_count(n: u64, y: f64) -> f64 {
        let n = n as f64;
        n * (-n.ln() / (2.0 * y.ln())).exp()
    }

    /// `N (log N)^(nu-1) / (log y)^nu`, the shape of `S_nu(N; y)`.
    pub fn rough_divisor_sum(n: u64, y: f64, nu: u32) -> f64 {
        let n = n as f64;
        n * n.ln().powi(nu as i32 - 1) / y.ln().powi(nu as i32)
    }

    /// `N (log N)^(nu-1)` (first moment) or `N (log N)^(nu^2-1)` (second).
    pub fn tau_moment(n: u64, nu: u32, power: u32) -> f64 {
        let n = n as f64;
        let exp = if power == 1 { nu - 1 } else { nu * nu - 1 };
        n * n.ln().powi(exp as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_factor(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                out.push(d);
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn mobius_values() {
        let t = SieveTables::build_mobius(100).unwrap();
        assert_eq!(t.mu(1), 1);
        assert_eq!(t.mu(6), 1);
        assert_eq!(t.mu(4), 0);
        assert_eq!(t.mu(30), -1);
        assert_eq!(t.mertens(10).unwrap(), -1);
        assert_eq!(t.mertens(20).unwrap(), -3);
    }

    #[test]
    fn tau_values() {
        let t2 = SieveTables::build(100, 2).unwrap();
        assert_eq!(t2.tau(12), 6);
        let t3 = SieveTables::build(100, 3).unwrap();
        // ordered triples with product 4: (4,1,1)x3 and (2,2,1)x3
        let brute = (1..=4u64)
            .flat_map(|a| (1..=4u64).flat_map(move |b| (1..=4u64).map(move |c| (a, b, c))))
            .filter(|(a, b, c)| a * b * c == 4)
            .count() as u64;
        assert_eq!(brute, 6);
        assert_eq!(t3.tau(4), brute);
    }

    #[test]
    fn spf_is_smallest_prime_divisor() {
        let t = SieveTables::build_mobius(10_000).unwrap();
        assert_eq!(t.spf(1), 1);
        for n in 2..=10_000 {
            assert_eq!(t.spf(n), trial_factor(n)[0]);
        }
    }

    #[test]
    fn mobius_inversion_identity() {
        let t = SieveTables::build_mobius(10_000).unwrap();
        let mut acc = vec![0i64; 10_001];
        for d in 1..=10_000usize {
            let m = t.mu(d as u64) as i64;
            if m != 0 {
                for k in (d..=10_000).step_by(d) {
                    acc[k] += m;
                }
            }
        }
        assert_eq!(acc[1], 1);
        assert!(acc[2..].iter().all(|&v| v == 0));
    }

    #[test]
    fn tau_dirichlet_recursion() {
        let n = 10_000usize;
        let mut prev = SieveTables::build(n as u64, 1).unwrap();
        for nu in 2..=4 {
            let cur = SieveTables::build(n as u64, nu).unwrap();
            let mut acc = vec![0u64; n + 1];
            for d in 1..=n {
                for k in (d..=n).step_by(d) {
                    acc[k] += prev.tau(d as u64);
                }
            }
            for m in 1..=n {
                assert_eq!(cur.tau(m as u64), acc[m], "nu = {nu}, n = {m}");
            }
            prev = cur;
        }
    }

    #[test]
    fn omega_examples_and_oracle() {
        let t = SieveTables::build_mobius(10_000).unwrap();
        assert_eq!(t.omega_in_interval(84, 2.0, 10.0), 2);
        assert_eq!(t.omega_in_interval(1, 2.0, 7.5), 0);
        assert_eq!(t.omega_in_interval(9, 2.0, 5.0), 2);
        for (x, y) in [(2.0, 5.0), (2.5, 30.0), (3.0, 3.0), (7.2, 200.9)] {
            for n in 1..=10_000 {
                let oracle = trial_factor(n)
                    .into_iter()
                    .filter(|&q| (q as f64) > x && (q as f64) <= y)
                    .count() as u32;
                assert_eq!(t.omega_in_interval(n, x, y), oracle);
            }
        }
    }

    #[test]
    fn partition_example() {
        let t = SieveTables::build_mobius(20).unwrap();
        let part = t.partition(20, 2.0, 5.0).unwrap();
        assert_eq!(part.counts(), &[11, 6, 3]);
        assert_eq!(part.max_class(), 2);
        let a0: Vec<u64> = part.members(0).collect();
        assert_eq!(a0, vec![1, 2, 4, 7, 8, 11, 13, 14, 16, 17, 19]);
        let degenerate = t.partition(20, 3.0, 3.0).unwrap();
        assert_eq!(degenerate.counts(), &[20]);
        let s = part.summary();
        assert!((s.sifted_shape - 20.0 * 2f64.ln() / 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn partition_invariants() {
        let t = SieveTables::build_mobius(5000).unwrap();
        for (x, y) in [(2.0, 100.0), (2.0, 5000.0), (10.5, 70.0), (2.0, 2.0)] {
            let part = t.partition(5000, x, y).unwrap();
            assert_eq!(part.counts().iter().sum::<u64>(), 5000);
            assert!(part.max_class() <= (5000f64).log2().floor() as u32);
        }
        assert!(t.partition(5000, 1.5, 3.0).is_err());
        assert!(t.partition(10, 2.0, 11.0).is_err());
    }

    #[test]
    fn smooth_and_rough() {
        let t = SieveTables::build(20, 2).unwrap();
        assert_eq!(t.count_smooth(20, 3.0).unwrap(), 10);
        assert_eq!(t.count_smooth(20, 20.0).unwrap(), 20);
        assert_eq!(
            t.enumerate_rough(20, 5.0).unwrap(),
            vec![1, 5, 7, 11, 13, 17, 19]
        );
        assert_eq!(t.enumerate_rough(20, 2.0).unwrap(), (1..=20).collect::<Vec<_>>());
        assert_eq!(t.s_nu(20, 5.0, 2).unwrap(), 13);
        assert!(t.s_nu(20, 5.0, 3).is_err());
        assert!(t.s_nu(4, 5.0, 2).is_err());
        let t1 = SieveTables::build(500, 1).unwrap();
        for y in [2.0, 3.5, 10.0, 31.0] {
            assert_eq!(
                t1.s_nu(500, y, 1).unwrap(),
                t1.enumerate_rough(500, y).unwrap().len() as u64
            );
        }
    }

    #[test]
    fn smooth_complement() {
        let t = SieveTables::build_mobius(3000).unwrap();
        for y in [2.0, 7.0, 50.5] {
            let big = (1..=3000u64)
                .filter(|&m| trial_factor(m).iter().any(|&q| q as f64 > y))
                .count() as u64;
            assert_eq!(t.count_smooth(3000, y).unwrap() + big, 3000);
        }
    }

    #[test]
    fn tau_moments() {
        let t = SieveTables::build(10, 2).unwrap();
        assert_eq!(t.tau_moment(6, 1).unwrap(), 14);
        assert_eq!(t.tau_moment(4, 2).unwrap(), 18);
        let t1 = SieveTables::build(10, 1).unwrap();
        assert_eq!(t1.tau_moment(10, 1).unwrap(), 10);
        assert_eq!(t1.tau_moment(10, 2).unwrap(), 10);
        assert!(t.tau_moment(6, 3).is_err());
        let brute: u64 = (1..=10).map(|n| divisors(n).len() as u64).sum();
        assert_eq!(t.tau_moment(10, 1).unwrap(), brute as u128);
    }

    #[test]
    fn capacity_and_preconditions() {
        assert!(matches!(
            SieveTables::build(MAX_SIEVE_BOUND + 1, 2),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            SieveTables::build_with_budget(1_000_000, Some(2), 1000),
            Err(Error::Capacity { .. })
        ));
        assert!(SieveTables::build(100, 0).is_err());
        assert!(SieveTables::build(100, 9).is_err());
        assert!(SieveTables::build(0, 2).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("trcl-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        for nu in [None, Some(3)] {
            let path = dir.join(format!("tables-{nu:?}.bin"));
            let t = SieveTables::build_with_budget(1234, nu, DEFAULT_MEMORY_BUDGET).unwrap();
            t.save(&path).unwrap();
            let bytes = std::fs::read(&path).unwrap();
            assert_eq!(&bytes[..4], b"TRCL");
            assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1234);
            let back = SieveTables::load(&path).unwrap();
            assert_eq!(back.spf, t.spf);
            assert_eq!(back.mu, t.mu);
            assert_eq!(back.tau_table(), t.tau_table());
        }
        let bad = dir.join("bad.bin");
        std::fs::write(&bad, b"XXXX\x01\x00\x00\x00").unwrap();
        assert!(matches!(SieveTables::load(&bad), Err(Error::Format(_))));
        std::fs::remove_dir_all(&dir).ok();
    }
}
