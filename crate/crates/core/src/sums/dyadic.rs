//! Dyadic cover of the sieving interval `(x, y]`.
//!
//! `K` is the integer with `x 2^K <= floor(y) + 1 < x 2^(K+1)` and the
//! pieces are `(x_k, y_k]` with `x_k = 2^k ceil(x)`, `y_k = min(2 x_k,
//! floor(y))`. The first piece starts at `x` itself rather than at
//! `ceil(x)`, so that `ceil(x)` is covered when `x` is not an integer.

use serde::Serialize;

use crate::error::{ensure, Result};

#[derive(Debug, Clone, Serialize)]
pub struct DyadicInterval {
    pub k: u32,
    /// `x_k = 2^k ceil(x)`.
    pub scale: u64,
    /// Open lower end: `x` for `k = 0`, `x_k` otherwise.
    pub lower: f64,
    /// Closed upper end `y_k`.
    pub upper: u64,
    /// No integer lies in `(lower, upper]`.
    pub empty: bool,
}

impl DyadicInterval {
    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        (n as f64) > self.lower && n <= self.upper
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicPartition {
    pub x: f64,
    pub y: f64,
    /// The integer `K`.
    pub k_max: u32,
    pub intervals: Vec<DyadicInterval>,
}

impl DyadicPartition {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        ensure!(
            x.is_finite() && y.is_finite() && x >= 2.0 && y >= x,
            "need y >= x >= 2, got x = {x}, y = {y}"
        );
        let top = y.floor() + 1.0;
        let mut k_max = 0u32;
        // x * 2^k is exact in floating point.
        while x * 2f64.powi(k_max as i32 + 1) <= top {
            k_max += 1;
        }
        let base = x.ceil() as u64;
        let fy = y.floor() as u64;
        let intervals = (0..=k_max)
            .map(|k| {
                let scale = base << k;
                let lower = if k == 0 { x } else { scale as f64 };
                let upper = (2 * scale).min(fy);
                DyadicInterval {
                    k,
                    scale,
                    lower,
                    upper,
                    empty: lower.floor() as u64 >= upper,
                }
            })
            .collect();
        Ok(Self {
            x,
            y,
            k_max,
            intervals,
        })
    }

    /// Index of the interval holding the integer `n`, if any.
    pub fn locate(&self, n: u64) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.contains(n))
    }

    /// `x 2^K <= floor(y) + 1 < x 2^(K+1)`.
    pub fn defining_inequality_holds(&self) -> bool {
        let top = self.y.floor() + 1.0;
        let k = self.k_max as i32;
        self.x * 2f64.powi(k) <= top && top < self.x * 2f64.powi(k + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example_two_to_sixteen() {
        let d = DyadicPartition::new(2.0, 16.0).unwrap();
        assert_eq!(d.k_max, 3);
        let ends: Vec<(f64, u64, bool)> = d
            .intervals
            .iter()
            .map(|iv| (iv.lower, iv.upper, iv.empty))
            .collect();
        assert_eq!(
            ends,
            vec![
                (2.0, 4, false),
                (4.0, 8, false),
                (8.0, 16, false),
                (16.0, 16, true)
            ]
        );
        assert!(d.defining_inequality_holds());
    }

    #[test]
    fn degenerate_equal_ends() {
        let d = DyadicPartition::new(5.0, 5.0).unwrap();
        assert_eq!(d.k_max, 0);
        assert!(d.defining_inequality_holds());
        assert!(d.intervals[0].empty);
        let d = DyadicPartition::new(5.5, 5.5).unwrap();
        assert!(d.intervals.iter().all(|iv| iv.empty));
        assert!(DyadicPartition::new(1.0, 5.0).is_err());
        assert!(DyadicPartition::new(6.0, 5.0).is_err());
    }

    #[test]
    fn non_integer_lower_end_is_covered() {
        let d = DyadicPartition::new(2.5, 40.0).unwrap();
        assert_eq!(d.locate(3), Some(0));
        assert_eq!(d.locate(2), None);
        // ceil(x) = 3: (2.5,6], (6,12], (12,24], (24,40] and an empty (48,40].
        assert_eq!(d.k_max, 4);
        assert!(d.intervals[4].empty);
        assert_eq!(d.locate(6), Some(0));
        assert_eq!(d.locate(7), Some(1));
        assert_eq!(d.locate(40), Some(3));
        assert!(d.locate(41).is_none());
    }

    proptest! {
        #[test]
        fn cover_is_exact(x in 2.0f64..2000.0, span in 0.0f64..8000.0) {
            let y = x + span;
            let d = DyadicPartition::new(x, y).unwrap();
            prop_assert!(d.defining_inequality_holds());
            prop_assert!(((d.k_max + 1) as f64) <= y.log2() + 2.0);
            let lo = x.floor() as u64;
            let hi = y.floor() as u64;
            for n in lo.saturating_sub(2)..=hi + 2 {
                let hits = d.intervals.iter().filter(|iv| iv.contains(n)).count();
                let inside = (n as f64) > x && (n as f64) <= y;
                prop_assert_eq!(hits, inside as usize, "n = {}", n);
            }
        }
    }
}
