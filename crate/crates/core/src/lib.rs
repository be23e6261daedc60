//! Numerical laboratory for algebraic trace functions modulo a prime.
//!
//! The crate is organised bottom-up:
//!
//! * [`modular`]: prime-field substrate (primality, primitive roots,
//!   discrete logarithms, additive characters).
//! * [`fft`]: radix-2 and Bluestein transforms for arbitrary lengths.
//! * [`arith`]: sieved arithmetic functions and sieve-counting sets.
//! * [`trace`]: trace-function tables (Kloosterman sums, rational phases,
//!   multiplicative twists, products) and their string grammar.
//! * [`correlation`]: complete and incomplete correlation sums, the
//!   completion identity and exceptional-dilation scans.
//! * [`sums`]: Möbius- and divisor-twisted sums, their sieve
//!   decompositions, dyadic partitions, parameter choices and digit sums.
//!
//! All reductions over long index ranges go through [`reduce`], which
//! fixes the summation order so results do not depend on thread count.

pub mod arith;
pub mod correlation;
pub mod error;
pub mod fft;
pub mod modular;
pub mod reduce;
pub mod report;
pub mod sums;
pub mod trace;

pub use error::{Error, Result};
pub use num_complex::Complex64;
