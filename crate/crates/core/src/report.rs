//! Serializable measurement records shared by the report types.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex measurement with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

impl Measured {
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for Measured {
    fn from(z: Complex64) -> Self {
        Self {
            re: z.re,
            im: z.im,
            magnitude: z.norm(),
        }
    }
}
