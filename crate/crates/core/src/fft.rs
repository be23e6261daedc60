//! Discrete Fourier transforms of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 transform. Every other
//! length goes through Bluestein's chirp reformulation, which rewrites the
//! DFT as a cyclic convolution of power-of-two length `M >= 2n - 1`.
//!
//! Convention: `forward` computes `X[j] = sum_u x[u] exp(-2 pi i u j / n)`,
//! `inverse` computes `x[u] = (1/n) sum_j X[j] exp(2 pi i u j / n)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        // Each twiddle is evaluated directly; no recurrence drift.
        let twiddles = (0..len / 2)
            .map(|k| {
                let (s, c) = (-TAU * k as f64 / len as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { len, twiddles }
    }

    fn forward(&self, data: &mut [Complex64]) {
        let n = self.len;
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }

    fn inverse_unscaled(&self, data: &mut [Complex64]) {
        data.iter_mut().for_each(|z| *z = z.conj());
        self.forward(data);
        data.iter_mut().for_each(|z| *z = z.conj());
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    inner: Radix2,
    chirp: Vec<Complex64>,
    kernel: Vec<Complex64>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let m = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(m);
        // chirp[k] = exp(-pi i k^2 / n); k^2 is reduced mod 2n to keep the
        // angle small.
        let two_n = 2 * len as u128;
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                let sq = (k as u128 * k as u128 % two_n) as f64;
                let (s, c) = (-PI * sq / len as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        inner.forward(&mut kernel);
        Self {
            inner,
            chirp,
            kernel,
        }
    }

    fn forward(&self, data: &mut [Complex64]) {
        let m = self.inner.len;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for ((b, x), c) in buf.iter_mut().zip(data.iter()).zip(&self.chirp) {
            *b = x * c;
        }
        self.inner.forward(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel) {
            *b *= k;
        }
        self.inner.inverse_unscaled(&mut buf);
        let scale = 1.0 / m as f64;
        for ((x, b), c) in data.iter_mut().zip(&buf).zip(&self.chirp) {
            *x = b * c * scale;
        }
    }
}

#[derive(Debug, Clone)]
enum Plan {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// A precomputed DFT of fixed length.
#[derive(Debug, Clone)]
pub struct Dft {
    len: usize,
    plan: Plan,
}

impl Dft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "DFT length must be positive");
        let plan = if len.is_power_of_two() {
            Plan::Radix2(Radix2::new(len))
        } else {
            Plan::Bluestein(Bluestein::new(len))
        };
        Self { len, plan }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len);
        match &self.plan {
            Plan::Radix2(r) => r.forward(data),
            Plan::Bluestein(b) => b.forward(data),
        }
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        data.iter_mut().for_each(|z| *z = z.conj());
        self.forward(data);
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|z| *z = z.conj() * scale);
    }
}

/// Cyclic convolution power `x * x * ... * x` (`power` factors).
pub fn cyclic_convolution_power(x: &[Complex64], power: u32) -> Vec<Complex64> {
    let dft = Dft::new(x.len());
    let mut buf = x.to_vec();
    dft.forward(&mut buf);
    buf.iter_mut().for_each(|z| *z = z.powu(power));
    dft.inverse(&mut buf);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|j| {
                x.iter()
                    .enumerate()
                    .map(|(u, &v)| {
                        let ang = -TAU * ((u * j) % n) as f64 / n as f64;
                        v * Complex64::new(ang.cos(), ang.sin())
                    })
                    .sum()
            })
            .collect()
    }

    fn signal(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos() - 0.2))
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 3, 4, 5, 7, 8, 12, 16, 30, 64, 100, 101, 255, 1008] {
            let x = signal(n);
            let mut y = x.clone();
            Dft::new(n).forward(&mut y);
            let want = naive_dft(&x);
            let err = y
                .iter()
                .zip(&want)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-9 * n as f64, "n = {n}, err = {err}");
        }
    }

    #[test]
    fn round_trip() {
        for n in [6usize, 32, 97, 4998] {
            let x = signal(n);
            let mut y = x.clone();
            let dft = Dft::new(n);
            dft.forward(&mut y);
            dft.inverse(&mut y);
            let err = y
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "n = {n}, err = {err}");
        }
    }

    #[test]
    fn convolution_square_matches_direct() {
        let x = signal(10);
        let got = cyclic_convolution_power(&x, 2);
        for v in 0..10 {
            let want: Complex64 = (0..10).map(|u| x[u] * x[(v + 10 - u) % 10]).sum();
            assert!((got[v] - want).norm() < 1e-12);
        }
    }
}
