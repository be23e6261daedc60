//! Validation and loading of command inputs.

use std::fs;
use std::path::Path;

use serde::Serialize;
use tracelab_core::arith::SieveTables;
use tracelab_core::modular::PrimeContext;
use tracelab_core::trace::{TraceSpec, TraceTable};

use crate::args::{LengthArgs, PrimeListArgs, WeightArgs, WeightChoice};
use crate::error::{config, CliError, Result};

pub fn parse_trace(src: &str) -> Result<TraceSpec> {
    src.parse::<TraceSpec>()
        .map_err(|e| CliError::Core(tracelab_core::Error::Parse(e)))
}

pub fn prime_context(p: u64) -> Result<PrimeContext> {
    Ok(PrimeContext::new(p)?)
}

pub fn trace_table(ctx: &PrimeContext, spec: &TraceSpec) -> Result<TraceTable> {
    Ok(TraceTable::build(ctx, spec)?)
}

pub fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(config(format!("theta must lie in (0, 1), got {theta}")));
    }
    Ok(())
}

/// `ceil(p^theta)`.
pub fn length_from_theta(p: u64, theta: f64) -> u64 {
    (p as f64).powf(theta).ceil() as u64
}

/// Resolves `N` from exactly one of `--n` and `--theta`.
pub fn resolve_length(p: u64, args: &LengthArgs) -> Result<u64> {
    match (args.n, args.theta) {
        (Some(n), None) => Ok(n),
        (None, Some(theta)) => {
            check_theta(theta)?;
            Ok(length_from_theta(p, theta))
        }
        _ => Err(config("exactly one of --n and --theta is required")),
    }
}

pub fn check_weight(args: &WeightArgs) -> Result<()> {
    if args.weight == WeightChoice::Tau
        && !(1..=tracelab_core::arith::MAX_NU).contains(&args.nu)
    {
        return Err(config(format!(
            "--nu must lie in 1..={}, got {}",
            tracelab_core::arith::MAX_NU,
            args.nu
        )));
    }
    Ok(())
}

pub fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(config(format!("--epsilon must lie in (0, 1], got {eps}")));
    }
    Ok(())
}

/// Primes from `--primes` followed by those in `--primes-file`.
pub fn prime_list(args: &PrimeListArgs) -> Result<Vec<u64>> {
    let mut out = args.primes.clone();
    if let Some(path) = &args.primes_file {
        out.extend(read_prime_file(path)?);
    }
    Ok(out)
}

fn read_prime_file(path: &Path) -> Result<Vec<u64>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v = tok.parse::<u64>().map_err(|_| {
                config(format!(
                    "{}:{}: expected an integer, got {tok:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    NotUsed,
    Loaded,
    Created,
    Rebuilt,
}

/// Sieve tables up to `n` (with `tau_nu` when `nu` is set), going through
/// the cache file when one is given.
pub fn sieve_tables(
    n: u64,
    nu: Option<u32>,
    cache: Option<&Path>,
) -> Result<(SieveTables, CacheStatus)> {
    let build = || -> Result<SieveTables> {
        Ok(match nu {
            Some(nu) => SieveTables::build(n, nu)?,
            None => SieveTables::build_mobius(n)?,
        })
    };
    let Some(path) = cache else {
        return Ok((build()?, CacheStatus::NotUsed));
    };
    let status = if path.exists() {
        let cached = SieveTables::load(path)?;
        let nu_ok = nu.is_none_or(|nu| cached.nu() == Some(nu));
        if cached.bound() >= n && nu_ok {
            return Ok((cached, CacheStatus::Loaded));
        }
        CacheStatus::Rebuilt
    } else {
        CacheStatus::Created
    };
    let tables = build()?;
    tables.save(path)?;
    Ok((tables, status))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_lengths() {
        assert_eq!(length_from_theta(10007, 0.6), 252);
        assert_eq!(length_from_theta(100003, 0.6), 1001);
        assert!(check_theta(0.0).is_err());
        assert!(check_theta(1.0).is_err());
        assert!(check_theta(f64::NAN).is_err());
        let both = LengthArgs {
            n: Some(5),
            theta: Some(0.5),
        };
        assert!(resolve_length(101, &both).is_err());
        let neither = LengthArgs { n: None, theta: None };
        assert!(resolve_length(101, &neither).is_err());
    }

    #[test]
    fn prime_file_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.txt");
        fs::write(&path, "# header\n101, 103\n107 # tail\n\n109").unwrap();
        let args = PrimeListArgs {
            primes: vec![3],
            primes_file: Some(path.clone()),
        };
        assert_eq!(prime_list(&args).unwrap(), vec![3, 101, 103, 107, 109]);
        fs::write(&path, "101 x").unwrap();
        assert!(prime_list(&args).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sieve.bin");
        let (_, s) = sieve_tables(100, Some(2), Some(&path)).unwrap();
        assert_eq!(s, CacheStatus::Created);
        let (t, s) = sieve_tables(80, Some(2), Some(&path)).unwrap();
        assert_eq!(s, CacheStatus::Loaded);
        assert_eq!(t.bound(), 100);
        let (_, s) = sieve_tables(80, None, Some(&path)).unwrap();
        assert_eq!(s, CacheStatus::Loaded);
        let (t, s) = sieve_tables(200, Some(3), Some(&path)).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(t.nu(), Some(3));
    }
}
