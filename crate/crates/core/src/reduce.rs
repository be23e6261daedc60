//! Order-fixed parallel reductions.
//!
//! Every long sum is split into consecutive chunks of [`CHUNK`] indices.
//! Chunks are reduced sequentially (possibly on different threads) and the
//! partial results are combined in chunk order, so the floating-point
//! result is bit-identical for any thread count.

use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;

pub const CHUNK: usize = 4096;

/// Folds `range` chunk by chunk; `init` makes a fresh accumulator,
/// `step` folds one index into it and `merge` combines chunk results
/// left to right.
pub fn chunked_fold<A, I, S, M>(range: Range<u64>, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let start = range.start;
    let len = range.end.saturating_sub(range.start);
    let chunks = len.div_ceil(CHUNK as u64);
    let partials: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * CHUNK as u64;
            let hi = (lo + CHUNK as u64).min(range.end);
            let mut acc = init();
            for i in lo..hi {
                step(&mut acc, i);
            }
            acc
        })
        .collect();
    let mut total = init();
    for part in partials {
        merge(&mut total, part);
    }
    total
}

/// Deterministic complex sum of `f(i)` over `range`.
pub fn sum<F>(range: Range<u64>, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    chunked_fold(
        range,
        || Complex64::new(0.0, 0.0),
        |acc, i| *acc += f(i),
        |acc, part| *acc += part,
    )
}

/// Deterministic real sum of `f(i)` over `range`.
pub fn sum_real<F>(range: Range<u64>, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    chunked_fold(range, || 0.0, |acc, i| *acc += f(i), |acc, part| *acc += part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(i: u64) -> Complex64 {
        Complex64::new((i as f64).sqrt().sin(), 1.0 / (1.0 + i as f64))
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sum(3..100_003, term))
        };
        let one = run(1);
        for t in [2, 3, 8] {
            let other = run(t);
            assert_eq!(one.re.to_bits(), other.re.to_bits());
            assert_eq!(one.im.to_bits(), other.im.to_bits());
        }
    }

    #[test]
    fn empty_and_small_ranges() {
        assert_eq!(sum(5..5, term), Complex64::new(0.0, 0.0));
        assert_eq!(sum_real(0..4, |i| i as f64), 6.0);
    }
}
