//! Correlation sums of a trace function against its dilations.
//!
//! * complete: `sum_{n mod p} K(n) conj(K(an)) e(hn/p)`
//! * incomplete: `sum_{n=1}^{N} K(an) conj(K(bn))`
//!
//! The all-dilations scan substitutes `n = g^u`, under which `K(an)` is a
//! cyclic shift of `u -> K(g^u)` by `dlog(a)`. One cross-correlation of
//! length `p - 1` then yields every `a` at once.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::fft::Dft;
use crate::reduce;
use crate::report::Measured;
use crate::trace::{TraceTable, MAX_FFT_MODULUS};

/// Default threshold `C` for exceptional dilations, in units of `sqrt(p)`.
pub const DEFAULT_THRESHOLD: f64 = 5.0;
/// Largest modulus for the quadratic per-dilation scan.
pub const MAX_NAIVE_SCAN_MODULUS: u64 = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationResult {
    pub p: u64,
    pub a: u64,
    pub b: Option<u64>,
    pub h: i64,
    /// Length `N` of an incomplete sum; `None` for complete sums.
    pub length: Option<u64>,
    pub value: Measured,
    /// `sqrt(p)` (complete) or `sqrt(p) log p` (incomplete).
    pub reference_scale: f64,
    pub ratio: f64,
}

fn complete_scale(p: u64) -> f64 {
    (p as f64).sqrt()
}

fn incomplete_scale(p: u64) -> f64 {
    (p as f64).sqrt() * (p as f64).ln()
}

fn check_unit(a: u64, p: u64, name: &str) -> Result<()> {
    ensure!(
        (1..p).contains(&a),
        "{name} = {a} must lie in 1..={}",
        p - 1
    );
    Ok(())
}

/// `sum_{n=0}^{p-1} K(n) conj(K(an)) e(hn/p)`.
pub fn complete_correlation(k: &TraceTable, a: u64, h: i64) -> Result<CorrelationResult> {
    let p = k.p();
    check_unit(a, p, "a")?;
    let value = reduce::sum(0..p, |n| {
        k.at(n) * k.at(a * n % p).conj() * crate::modular::e_p(h * (n as i64), p)
    });
    let scale = complete_scale(p);
    Ok(CorrelationResult {
        p,
        a,
        b: None,
        h,
        length: None,
        value: value.into(),
        reference_scale: scale,
        ratio: value.norm() / scale,
    })
}

/// `sum_{n=1}^{N} K(an) conj(K(bn))` for `1 <= N <= p`.
pub fn incomplete_correlation(
    k: &TraceTable,
    a: u64,
    b: u64,
    n: u64,
) -> Result<CorrelationResult> {
    let p = k.p();
    check_unit(a, p, "a")?;
    check_unit(b, p, "b")?;
    ensure!((1..=p).contains(&n), "N = {n} must lie in 1..={p}");
    let value = incomplete_sum(k, a, b, n);
    let scale = incomplete_scale(p);
    Ok(CorrelationResult {
        p,
        a,
        b: Some(b),
        h: 0,
        length: Some(n),
        value: value.into(),
        reference_scale: scale,
        ratio: value.norm() / scale,
    })
}

fn incomplete_sum(k: &TraceTable, a: u64, b: u64, n: u64) -> Complex64 {
    let p = k.p();
    reduce::sum(1..n + 1, |m| {
        let m = m % p;
        k.at(a * m % p) * k.at(b * m % p).conj()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletionCheck {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub length: u64,
    pub direct: Measured,
    pub reconstructed: Measured,
    pub residual: f64,
}

/// Compares the incomplete sum of `F(n) = K(an) conj(K(bn))` with its
/// completion `sum_h c_N(h) S(h)`, where `S(h) = sum_{n mod p} F(n) e(hn/p)`
/// and `c_N(h) = (1/p) sum_{n=1}^{N} e(-hn/p)` in closed form.
pub fn completion_identity_check(
    k: &TraceTable,
    a: u64,
    b: u64,
    n: u64,
) -> Result<CompletionCheck> {
    let p = k.p();
    check_unit(a, p, "a")?;
    check_unit(b, p, "b")?;
    ensure!((1..=p).contains(&n), "N = {n} must lie in 1..={p}");
    if p > MAX_FFT_MODULUS {
        return Err(Error::Capacity {
            what: "transform modulus",
            needed: p,
            limit: MAX_FFT_MODULUS,
        });
    }
    let direct = incomplete_sum(k, a, b, n);

    // S(h) = sum_n F(n) e(+hn/p) is the inverse-direction transform.
    let mut s: Vec<Complex64> = (0..p)
        .map(|m| k.at(a * m % p) * k.at(b * m % p).conj())
        .collect();
    let dft = Dft::new(p as usize);
    dft.inverse(&mut s);
    let pf = p as f64;
    s.iter_mut().for_each(|v| *v *= pf);

    let coeff = |h: u64| -> Complex64 {
        if h == 0 {
            return Complex64::new(n as f64 / pf, 0.0);
        }
        // (1/p) sum_{m=1}^{N} w^m with w = e(-h/p)
        let w = crate::modular::e_p(-(h as i64), p);
        let wn = crate::modular::e_p(-((h * (n % p)) as i64), p);
        w * (Complex64::new(1.0, 0.0) - wn) / (Complex64::new(1.0, 0.0) - w) / pf
    };
    let reconstructed = reduce::sum(0..p, |h| coeff(h) * s[h as usize]);
    Ok(CompletionCheck {
        p,
        a,
        b,
        length: n,
        direct: direct.into(),
        reconstructed: reconstructed.into(),
        residual: (direct - reconstructed).norm(),
    })
}

/// Complete correlations for every dilation `a = 1..p-1` at fixed `h`,
/// one cross-correlation over the multiplicative group. Index `a` of the
/// returned vector holds the value for `a`; index 0 is unused (zero).
pub fn correlation_profile(
    k: &TraceTable,
    ctx: &crate::modular::PrimeContext,
    h: i64,
) -> Result<Vec<Complex64>> {
    let p = k.p();
    ensure!(ctx.p() == p, "context modulus {} differs from table modulus {p}", ctx.p());
    if p > MAX_FFT_MODULUS {
        return Err(Error::Capacity {
            what: "transform modulus",
            needed: p,
            limit: MAX_FFT_MODULUS,
        });
    }
    let powers = ctx.powers();
    // f[u] = K(g^u) e(h g^u / p), k[u] = K(g^u);
    // c[t] = sum_u f[u] conj(k[u + t]) = conj(IDFT(DFT(k) conj(DFT(f))))[t].
    let mut f: Vec<Complex64> = powers
        .iter()
        .map(|&x| k.at(x as u64) * crate::modular::e_p(h * x as i64, p))
        .collect();
    let mut kk: Vec<Complex64> = powers.iter().map(|&x| k.at(x as u64)).collect();
    let dft = Dft::new(powers.len());
    dft.forward(&mut f);
    dft.forward(&mut kk);
    let mut c: Vec<Complex64> = kk.iter().zip(&f).map(|(x, y)| x * y.conj()).collect();
    dft.inverse(&mut c);

    let zero_term = k.at(0) * k.at(0).conj();
    let mut out = vec![Complex64::new(0.0, 0.0); p as usize];
    for (t, v) in c.iter().enumerate() {
        out[powers[t] as usize] = v.conj() + zero_term;
    }
    Ok(out)
}

/// Same as [`correlation_profile`] by direct summation per dilation;
/// `O(p^2)`, capped at [`MAX_NAIVE_SCAN_MODULUS`].
pub fn correlation_profile_naive(k: &TraceTable, h: i64) -> Result<Vec<Complex64>> {
    let p = k.p();
    if p > MAX_NAIVE_SCAN_MODULUS {
        return Err(Error::Capacity {
            what: "naive scan modulus",
            needed: p,
            limit: MAX_NAIVE_SCAN_MODULUS,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); p as usize];
    for a in 1..p {
        out[a as usize] = complete_correlation(k, a, h)?.value.to_complex();
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalScan {
    pub p: u64,
    pub h: i64,
    pub threshold: f64,
    /// `threshold * sqrt(p)`.
    pub cutoff: f64,
    pub flagged: Vec<u64>,
    /// Ten largest `(a, |correlation|)`, descending.
    pub largest: Vec<(u64, f64)>,
    /// Largest `|correlation| / sqrt(p)` among unflagged dilations.
    pub max_unflagged_ratio: f64,
}

/// Dilations whose complete correlation exceeds `threshold * sqrt(p)`.
pub fn scan_exceptional(
    k: &TraceTable,
    ctx: &crate::modular::PrimeContext,
    h: i64,
    threshold: f64,
) -> Result<ExceptionalScan> {
    ensure!(threshold > 0.0, "threshold must be positive, got {threshold}");
    let p = k.p();
    let profile = correlation_profile(k, ctx, h)?;
    let sqrt_p = (p as f64).sqrt();
    let cutoff = threshold * sqrt_p;
    let mut flagged = Vec::new();
    let mut max_unflagged = 0.0f64;
    let mut mags: Vec<(u64, f64)> = Vec::with_capacity(p as usize - 1);
    for a in 1..p {
        let m = profile[a as usize].norm();
        if m > cutoff {
            flagged.push(a);
        } else {
            max_unflagged = max_unflagged.max(m / sqrt_p);
        }
        mags.push((a, m));
    }
    mags.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    mags.truncate(10);
    Ok(ExceptionalScan {
        p,
        h,
        threshold,
        cutoff,
        flagged,
        largest: mags,
        max_unflagged_ratio: max_unflagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::PrimeContext;
    use crate::trace::{kloosterman_all, TraceSpec};

    fn normalized_k2(p: u64) -> (PrimeContext, TraceTable) {
        let ctx = PrimeContext::new(p).unwrap();
        let t = TraceTable::build(&ctx, &TraceSpec::kloosterman(2, true)).unwrap();
        (ctx, t)
    }

    #[test]
    fn second_moment_as_correlation() {
        let ctx = PrimeContext::new(5).unwrap();
        let k = kloosterman_all(&ctx, 2).unwrap();
        let r = complete_correlation(&k, 1, 0).unwrap();
        assert!((r.value.re - 19.0).abs() < 1e-10 && r.value.im.abs() < 1e-10);
        let ctx3 = PrimeContext::new(3).unwrap();
        let k3 = kloosterman_all(&ctx3, 2).unwrap();
        assert!((complete_correlation(&k3, 1, 0).unwrap().value.re - 5.0).abs() < 1e-12);
    }

    #[test]
    fn normalized_autocorrelation() {
        let (_, k) = normalized_k2(4999);
        let p = 4999.0;
        let r = complete_correlation(&k, 1, 0).unwrap();
        assert!((r.value.re - (p - 1.0 - 1.0 / p)).abs() < 1e-8);
    }

    #[test]
    fn ones_table() {
        let k = TraceTable::ones(7);
        for a in 1..7 {
            let r = complete_correlation(&k, a, 0).unwrap();
            assert_eq!(r.value.re, 7.0);
            assert_eq!(r.value.im, 0.0);
            for h in [1, 3, -2] {
                assert!(complete_correlation(&k, a, h).unwrap().value.magnitude < 1e-12);
            }
        }
    }

    #[test]
    fn incomplete_examples() {
        let (_, k) = normalized_k2(101);
        let one = incomplete_correlation(&k, 3, 5, 1).unwrap();
        let want = k.at(3) * k.at(5).conj();
        assert!((one.value.to_complex() - want).norm() < 1e-15);

        // N = p, b = 1 is the complete sum with h = 0 after n -> a n.
        for a in [2u64, 7, 50] {
            let inc = incomplete_correlation(&k, a, 1, 101).unwrap();
            let ainv = crate::modular::mod_inverse(a, 101).unwrap();
            let comp = complete_correlation(&k, ainv, 0).unwrap();
            assert!((inc.value.to_complex() - comp.value.to_complex()).norm() < 1e-9);
        }
        assert!(incomplete_correlation(&k, 0, 1, 5).is_err());
        assert!(incomplete_correlation(&k, 1, 1, 0).is_err());
        assert!(incomplete_correlation(&k, 1, 1, 102).is_err());
    }

    #[test]
    fn change_of_variables() {
        // Reindexing n -> a^{-1} n:
        //   C(K, a^{-1}, -h a^{-1}) = conj C(K, a, h)
        //   C(conj K, a^{-1}, h a^{-1}) = C(K, a, h)
        let ctx = PrimeContext::new(211).unwrap();
        let spec: TraceSpec = "char:c=5:kloosterman:s=3:normalized".parse().unwrap();
        let k = TraceTable::build(&ctx, &spec).unwrap();
        let kc = k.conj();
        for (a, h) in [(2u64, 0i64), (17, 5), (100, -33)] {
            let ainv = ctx.inverse(a).unwrap();
            let orig = complete_correlation(&k, a, h).unwrap().value.to_complex();
            let minus = (-(h as i128) * ainv as i128).rem_euclid(211) as i64;
            let plus = ((h as i128) * ainv as i128).rem_euclid(211) as i64;
            let swapped = complete_correlation(&k, ainv, minus).unwrap().value.to_complex();
            assert!((orig.conj() - swapped).norm() < 1e-9, "a={a} h={h}");
            let conjugated = complete_correlation(&kc, ainv, plus).unwrap().value.to_complex();
            assert!((orig - conjugated).norm() < 1e-9, "a={a} h={h}");
        }
    }

    #[test]
    fn profile_matches_naive() {
        for p in [101u64, 211, 499] {
            let ctx = PrimeContext::new(p).unwrap();
            for src in ["kloosterman:s=2:normalized", "phase:num=0,0,1:den=1", "ones"] {
                let k = TraceTable::build(&ctx, &src.parse().unwrap()).unwrap();
                for h in [0i64, 3] {
                    let fast = correlation_profile(&k, &ctx, h).unwrap();
                    let slow = correlation_profile_naive(&k, h).unwrap();
                    for a in 1..p as usize {
                        assert!(
                            (fast[a] - slow[a]).norm() <= 1e-7 * p as f64,
                            "p={p} {src} h={h} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn completion_identity_small() {
        let k = TraceTable::ones(7);
        let c = completion_identity_check(&k, 1, 1, 3).unwrap();
        assert!(c.residual <= 1e-9);
        assert!((c.direct.re - 3.0).abs() < 1e-15);
        let (_, k) = normalized_k2(101);
        let c = completion_identity_check(&k, 1, 1, 101).unwrap();
        assert!(c.residual <= 1e-9);
        let ctx = PrimeContext::new(101).unwrap();
        let raw = kloosterman_all(&ctx, 2).unwrap();
        let c = completion_identity_check(&raw, 3, 7, 50).unwrap();
        assert!(c.residual <= 1e-6, "residual {}", c.residual);
    }

    #[test]
    fn exceptional_scan_small() {
        let (ctx, k) = normalized_k2(101);
        let scan = scan_exceptional(&k, &ctx, 0, 5.0).unwrap();
        assert_eq!(scan.flagged, vec![1]);
        assert_eq!(scan.largest[0].0, 1);
        assert!(scan.max_unflagged_ratio <= 5.0);

        let ones = TraceTable::ones(101);
        let scan = scan_exceptional(&ones, &ctx, 0, 9.0).unwrap();
        assert_eq!(scan.flagged.len(), 100);
        assert!(scan_exceptional(&ones, &ctx, 0, 0.0).is_err());
    }
}
