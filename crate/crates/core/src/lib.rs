//! Variable-exponent sequence spaces `l^{p_n}(Z)`, the discrete Hilbert
//! transform, discrete Fourier multipliers, and numerical checks of the
//! inequalities that connect them.

pub mod cli;
pub mod embed;
pub mod error;
pub mod exponent;
pub mod hilbert;
pub mod multiplier;
pub mod scalar;
pub mod space;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use exponent::{conjugate, ExponentFunction, ExponentSequence};
pub use scalar::Scalar;
pub use space::{ComplexSequence, NormResult, Sequence, StepFunction};
pub use window::Window;
