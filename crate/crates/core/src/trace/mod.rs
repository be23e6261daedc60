//! Trace-function tables modulo a prime.
//!
//! A [`TraceTable`] stores `K(n)` for every residue `n = 0..p` together with
//! the [`TraceSpec`] that produced it and a pointwise bound `sup_bound`.
//!
//! Conventions at `n ≡ 0`: Kloosterman sums are 0 (no product of units
//! vanishes), rational phases are 0 at poles, multiplicative characters
//! are 0 at 0.

pub mod grammar;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::fft;
use crate::modular::{inverse_table, PrimeContext};

/// Largest modulus for transform-based Kloosterman tables.
pub const MAX_FFT_MODULUS: u64 = 1 << 23;

/// Slack allowed on top of `sup_bound` by the pointwise check.
pub const POINTWISE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceKind {
    /// `s`-dimensional Kloosterman sum, optionally scaled by `p^{-(s-1)/2}`.
    Kloosterman { s: u32, normalized: bool },
    /// `e(P(n)/Q(n) / p)`; coefficients lowest degree first.
    RationalPhase {
        numerator: Vec<i64>,
        denominator: Vec<i64>,
    },
    /// `chi_c(n)` times `base(n)` (or `chi_c` alone).
    CharacterTwist { c: u64, base: Option<Box<TraceSpec>> },
    Product(Vec<TraceSpec>),
    Custom { label: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSpec {
    pub kind: TraceKind,
    /// User declaration that the function is not proportional to
    /// `e(an/p) chi(n)`. Never verified.
    pub declared_nonexceptional: bool,
}

impl From<TraceKind> for TraceSpec {
    fn from(kind: TraceKind) -> Self {
        Self {
            kind,
            declared_nonexceptional: false,
        }
    }
}

impl TraceSpec {
    pub fn kloosterman(s: u32, normalized: bool) -> Self {
        TraceKind::Kloosterman { s, normalized }.into()
    }

    pub fn ones() -> Self {
        TraceKind::Custom {
            label: "ones".into(),
        }
        .into()
    }

    pub fn nonexceptional(mut self) -> Self {
        self.declared_nonexceptional = true;
        self
    }
}

/// `exp(2 pi i k / m)` with `k` reduced to a symmetric residue mod `m`.
pub(crate) fn root_of_unity(k: u64, m: u64) -> Complex64 {
    let mut r = (k % m) as i64;
    if 2 * r > m as i64 {
        r -= m as i64;
    }
    let (s, c) = (TAU * r as f64 / m as f64).sin_cos();
    Complex64::new(c, s)
}

#[derive(Debug, Clone)]
pub struct TraceTable {
    p: u64,
    values: Vec<Complex64>,
    spec: TraceSpec,
    sup_bound: f64,
}

impl TraceTable {
    /// Builds the table described by `spec`.
    pub fn build(ctx: &PrimeContext, spec: &TraceSpec) -> Result<Self> {
        let mut table = match &spec.kind {
            TraceKind::Kloosterman { s, normalized } => {
                let t = kloosterman_all(ctx, *s)?;
                if *normalized {
                    t.normalize()?
                } else {
                    t
                }
            }
            TraceKind::RationalPhase {
                numerator,
                denominator,
            } => rational_phase(ctx, numerator, denominator)?,
            TraceKind::CharacterTwist { c, base } => {
                let base = base.as_ref().map(|b| Self::build(ctx, b)).transpose()?;
                character_twist(ctx, *c, base.as_ref())?
            }
            TraceKind::Product(factors) => {
                ensure!(!factors.is_empty(), "product needs at least one factor");
                let tables = factors
                    .iter()
                    .map(|f| Self::build(ctx, f))
                    .collect::<Result<Vec<_>>>()?;
                Self::product(&tables)?
            }
            TraceKind::Custom { label } if label == "ones" => Self::ones(ctx.p()),
            TraceKind::Custom { label } => {
                return Err(Error::Precondition(format!(
                    "custom table `{label}` must be supplied as values"
                )))
            }
        };
        table.spec = spec.clone();
        Ok(table)
    }

    /// A user-supplied table; `sup_bound` is its maximum modulus.
    pub fn custom(p: u64, values: Vec<Complex64>, label: &str) -> Result<Self> {
        ensure!(
            values.len() as u64 == p,
            "custom table has {} entries, expected {p}",
            values.len()
        );
        let sup_bound = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            p,
            values,
            spec: TraceKind::Custom {
                label: label.into(),
            }
            .into(),
            sup_bound,
        })
    }

    pub fn ones(p: u64) -> Self {
        Self {
            p,
            values: vec![Complex64::new(1.0, 0.0); p as usize],
            spec: TraceSpec::ones(),
            sup_bound: 1.0,
        }
    }

    /// Pointwise product; `sup_bound` multiplies.
    pub fn product(tables: &[TraceTable]) -> Result<Self> {
        let first = tables
            .first()
            .ok_or_else(|| Error::Precondition("empty product".into()))?;
        ensure!(
            tables.iter().all(|t| t.p == first.p),
            "product factors use different moduli"
        );
        let mut values = first.values.clone();
        for t in &tables[1..] {
            for (v, w) in values.iter_mut().zip(&t.values) {
                *v *= w;
            }
        }
        Ok(Self {
            p: first.p,
            values,
            spec: TraceKind::Product(tables.iter().map(|t| t.spec.clone()).collect()).into(),
            sup_bound: tables.iter().map(|t| t.sup_bound).product(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `K(n mod p)`.
    #[inline]
    pub fn at(&self, n: u64) -> Complex64 {
        self.values[(n % self.p) as usize]
    }

    pub fn spec(&self) -> &TraceSpec {
        &self.spec
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// Pointwise complex conjugate (same bound, spec kept).
    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.conj()).collect(),
            ..self.clone()
        }
    }

    /// First residue violating `|K(n)| <= sup_bound + slack`, if any.
    pub fn check_pointwise_bound(&self) -> Result<()> {
        match self
            .values
            .iter()
            .position(|v| v.norm() > self.sup_bound + POINTWISE_SLACK)
        {
            None => Ok(()),
            Some(n) => Err(Error::Invariant(format!(
                "|K({n})| = {} exceeds sup bound {}",
                self.values[n].norm(),
                self.sup_bound
            ))),
        }
    }

    /// `(s, normalized)` for Kloosterman tables.
    pub fn kloosterman_params(&self) -> Option<(u32, bool)> {
        match self.spec.kind {
            TraceKind::Kloosterman { s, normalized } => Some((s, normalized)),
            _ => None,
        }
    }

    /// Scales an unnormalised Kloosterman table by `p^{-(s-1)/2}`.
    pub fn normalize(&self) -> Result<Self> {
        let (s, normalized) = self
            .kloosterman_params()
            .ok_or_else(|| Error::Precondition("normalize needs a Kloosterman table".into()))?;
        ensure!(!normalized, "table is already normalized");
        let scale = (self.p as f64).powf(-((s - 1) as f64) / 2.0);
        Ok(Self {
            p: self.p,
            values: self.values.iter().map(|v| v * scale).collect(),
            spec: TraceSpec {
                kind: TraceKind::Kloosterman {
                    s,
                    normalized: true,
                },
                declared_nonexceptional: self.spec.declared_nonexceptional,
            },
            sup_bound: s as f64,
        })
    }
}

/// One Kloosterman value from the defining sum, by the recursion
/// `K_s(n) = sum_x e(x/p) K_{s-1}(n / x)`; `O(p^{s-1})` work.
pub fn kloosterman_direct(ctx: &PrimeContext, s: u32, n: u64) -> Result<Complex64> {
    ensure!(s >= 1, "dimension s must be at least 1");
    let p = ctx.p();
    let n = n % p;
    if n == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if s == 1 {
        return Ok(ctx.e(n as i64));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 1..p {
        let rest = n * ctx.inverse(x)? % p;
        acc += ctx.e(x as i64) * kloosterman_direct(ctx, s - 1, rest)?;
    }
    Ok(acc)
}

/// Full Kloosterman table from the recursion, one dimension at a time;
/// `O(s p^2)` work and independent of any transform.
pub fn kloosterman_direct_table(ctx: &PrimeContext, s: u32) -> Result<Vec<Complex64>> {
    ensure!(s >= 1, "dimension s must be at least 1");
    let p = ctx.p();
    let chars = ctx.additive_characters();
    let inv = inverse_table(p);
    let mut cur: Vec<Complex64> = chars.clone();
    cur[0] = Complex64::new(0.0, 0.0);
    for _ in 1..s {
        let mut next = vec![Complex64::new(0.0, 0.0); p as usize];
        for (n, slot) in next.iter_mut().enumerate().skip(1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 1..p as usize {
                acc += chars[x] * cur[(n as u64 * inv[x] % p) as usize];
            }
            *slot = acc;
        }
        cur = next;
    }
    Ok(cur)
}

/// Unnormalised `K_{s,p}` for every residue.
///
/// Writing `x_i = g^{u_i}`, the defining sum is the `s`-fold cyclic
/// convolution of `b[u] = e(g^u / p)` over `Z/(p-1)`, evaluated as one
/// forward transform, a pointwise `s`-th power and one inverse transform.
pub fn kloosterman_all(ctx: &PrimeContext, s: u32) -> Result<TraceTable> {
    ensure!(s >= 1, "dimension s must be at least 1");
    let p = ctx.p();
    if p > MAX_FFT_MODULUS {
        return Err(Error::Capacity {
            what: "transform modulus",
            needed: p,
            limit: MAX_FFT_MODULUS,
        });
    }
    let b: Vec<Complex64> = ctx.powers().iter().map(|&x| ctx.e(x as i64)).collect();
    let conv = fft::cyclic_convolution_power(&b, s);
    let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
    for (v, &gv) in ctx.powers().iter().enumerate() {
        values[gv as usize] = conv[v];
    }
    Ok(TraceTable {
        p,
        values,
        spec: TraceSpec::kloosterman(s, false),
        sup_bound: s as f64 * (p as f64).powf((s - 1) as f64 / 2.0),
    })
}

fn eval_poly_mod(coeffs: &[i64], n: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| {
        (acc * n + c.rem_euclid(p as i64) as u64) % p
    })
}

/// `e(P(n) Q(n)^{-1} / p)`, with value 0 where `Q(n) ≡ 0`.
pub fn rational_phase(
    ctx: &PrimeContext,
    numerator: &[i64],
    denominator: &[i64],
) -> Result<TraceTable> {
    let p = ctx.p();
    let den: Vec<u64> = (0..p).map(|n| eval_poly_mod(denominator, n, p)).collect();
    if den.iter().all(|&d| d == 0) {
        return Err(Error::Precondition(
            "denominator vanishes identically modulo p".into(),
        ));
    }
    let inv = inverse_table(p);
    let values = (0..p)
        .map(|n| match den[n as usize] {
            0 => Complex64::new(0.0, 0.0),
            d => {
                let num = eval_poly_mod(numerator, n, p);
                ctx.e((num * inv[d as usize] % p) as i64)
            }
        })
        .collect();
    Ok(TraceTable {
        p,
        values,
        spec: TraceKind::RationalPhase {
            numerator: numerator.to_vec(),
            denominator: denominator.to_vec(),
        }
        .into(),
        sup_bound: 1.0,
    })
}

/// `chi_c(n) = e(c dlog(n) / (p-1))`, 0 at `n = 0`.
pub fn character_value(ctx: &PrimeContext, c: u64, n: u64) -> Complex64 {
    match ctx.dlog(n) {
        None => Complex64::new(0.0, 0.0),
        Some(u) => {
            let m = ctx.p() - 1;
            root_of_unity(((c % m) as u128 * u as u128 % m as u128) as u64, m)
        }
    }
}

/// Multiplies `base` (or the unit table) pointwise by `chi_c`.
pub fn character_twist(
    ctx: &PrimeContext,
    c: u64,
    base: Option<&TraceTable>,
) -> Result<TraceTable> {
    let p = ctx.p();
    if c % (p - 1) == 0 {
        return Err(Error::Precondition(format!(
            "character index {c} is trivial modulo p - 1 = {}",
            p - 1
        )));
    }
    if let Some(b) = base {
        ensure!(b.p == p, "base table modulus {} differs from {p}", b.p);
    }
    let values = (0..p)
        .map(|n| {
            let chi = character_value(ctx, c, n);
            match base {
                Some(b) => chi * b.values[n as usize],
                None => chi,
            }
        })
        .collect();
    Ok(TraceTable {
        p,
        values,
        spec: TraceKind::CharacterTwist {
            c,
            base: base.map(|b| Box::new(b.spec.clone())),
        }
        .into(),
        sup_bound: base.map_or(1.0, |b| b.sup_bound),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilReport {
    pub p: u64,
    pub s: u32,
    pub normalized: bool,
    /// `s p^{(s-1)/2}`, or `s` for normalised tables.
    pub bound: f64,
    pub max_abs: f64,
    pub argmax: u64,
    pub max_ratio: f64,
    pub violations: Vec<u64>,
}

impl WeilReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|K_{s,p}(n)| <= s p^{(s-1)/2}` at every residue.
///
/// A violation signals an implementation error; offending residues are
/// listed in the report.
pub fn verify_weil(table: &TraceTable) -> Result<WeilReport> {
    let (s, normalized) = table
        .kloosterman_params()
        .ok_or_else(|| Error::Precondition("Weil check needs a Kloosterman table".into()))?;
    let scale = if normalized {
        1.0
    } else {
        (table.p as f64).powf((s - 1) as f64 / 2.0)
    };
    let bound = s as f64 * scale;
    let tolerance = 1e-6 * scale;
    let mut max_abs = 0.0;
    let mut argmax = 0;
    let mut violations = Vec::new();
    for (n, v) in table.values.iter().enumerate() {
        let a = v.norm();
        if a > max_abs {
            max_abs = a;
            argmax = n as u64;
        }
        if a > bound + tolerance {
            violations.push(n as u64);
        }
    }
    Ok(WeilReport {
        p: table.p,
        s,
        normalized,
        bound,
        max_abs,
        argmax,
        max_ratio: max_abs / bound,
        violations,
    })
}
