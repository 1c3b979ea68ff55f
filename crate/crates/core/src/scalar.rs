use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// Entry type of a [`Sequence`](crate::Sequence): real or complex.
pub trait Scalar:
    Copy
    + Default
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + 'static
{
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
    /// Real scalars drop the imaginary part.
    fn from_complex(c: Complex64) -> Self;

    fn zero() -> Self {
        Self::default()
    }

    fn is_finite(self) -> bool {
        let c = self.to_complex();
        c.re.is_finite() && c.im.is_finite()
    }
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn from_complex(c: Complex64) -> Self {
        c.re
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }

    fn to_complex(self) -> Complex64 {
        self
    }

    fn from_complex(c: Complex64) -> Self {
        c
    }
}
