//! Prime-field substrate: primality, primitive roots, discrete logarithms
//! and the additive character `e(k/p)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeContext`]; keeps `p * p` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Deterministic Miller–Rabin witnesses, sufficient for every `n < 2^64`.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_modulus(p: u64) -> Result<()> {
    if !(3..=MAX_MODULUS).contains(&p) {
        return Err(Error::ModulusOutOfRange(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Smallest `g >= 2` of multiplicative order `p - 1`.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    check_modulus(p)?;
    let factors = distinct_prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// Walks `g^0, g^1, ...` and records the exponent of each residue.
///
/// `dlog[0]` holds the sentinel `p`, which is never a valid logarithm.
pub fn build_dlog(p: u64, g: u64) -> Result<Vec<u32>> {
    check_modulus(p)?;
    let sentinel = p as u32;
    let mut dlog = vec![sentinel; p as usize];
    let mut x = 1u64;
    for u in 0..p - 1 {
        if u > 0 && x == 1 {
            return Err(Error::NotPrimitive { g, p, order: u });
        }
        dlog[x as usize] = u as u32;
        x = x * g % p;
    }
    if x != 1 {
        return Err(Error::NotPrimitive { g, p, order: 0 });
    }
    Ok(dlog)
}

/// `e(k/p) = exp(2 pi i k / p)`, with `k` reduced to a symmetric residue
/// first so the trigonometric argument stays in `[-pi, pi]`.
pub fn e_p(k: i64, p: u64) -> Complex64 {
    let p = p as i64;
    let mut r = k.rem_euclid(p);
    if 2 * r > p {
        r -= p;
    }
    let (sin, cos) = (TAU * r as f64 / p as f64).sin_cos();
    Complex64::new(cos, sin)
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::NotInvertible(a, p));
    }
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible(a, p));
    }
    Ok(t0.rem_euclid(p as i64) as u64)
}

/// All inverses `1..p` in one linear pass; entry 0 is 0.
pub fn inverse_table(p: u64) -> Vec<u64> {
    let mut inv = vec![0u64; p as usize];
    if p > 1 {
        inv[1] = 1;
    }
    for i in 2..p as usize {
        let q = p / i as u64;
        let r = p as usize % i;
        inv[i] = (p - q) * inv[r] % p;
    }
    inv
}

/// A prime modulus with a primitive root and its dense discrete-log table.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    powers: Vec<u32>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        let g = find_primitive_root(p)?;
        Self::with_generator(p, g)
    }

    pub fn with_generator(p: u64, g: u64) -> Result<Self> {
        let dlog = build_dlog(p, g)?;
        let mut powers = vec![0u32; (p - 1) as usize];
        let mut x = 1u64;
        for slot in powers.iter_mut() {
            *slot = x as u32;
            x = x * g % p;
        }
        Ok(Self { p, g, dlog, powers })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Order of the multiplicative group, `p - 1`.
    pub fn group_order(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Discrete logarithm of `n mod p`, `None` for `n ≡ 0`.
    pub fn dlog(&self, n: u64) -> Option<u32> {
        let v = self.dlog[(n % self.p) as usize];
        ((v as u64) < self.p - 1).then_some(v)
    }

    pub fn dlog_table(&self) -> &[u32] {
        &self.dlog
    }

    /// `g^u mod p` for `u` taken modulo `p - 1`.
    pub fn pow_g(&self, u: u64) -> u64 {
        self.powers[(u % (self.p - 1)) as usize] as u64
    }

    pub fn powers(&self) -> &[u32] {
        &self.powers
    }

    pub fn e(&self, k: i64) -> Complex64 {
        e_p(k, self.p)
    }

    pub fn inverse(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        match self.dlog(a) {
            Some(u) => Ok(self.pow_g((self.p - 1 - u as u64) % (self.p - 1))),
            None => Err(Error::NotInvertible(a, self.p)),
        }
    }

    /// Table `e(k/p)` for `k = 0..p`.
    pub fn additive_characters(&self) -> Vec<Complex64> {
        (0..self.p as i64).map(|k| self.e(k)).collect()
    }
}
