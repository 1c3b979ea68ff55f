use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::space::StepFunction;

/// `(1/pi) p.v. integral f(t) / (x - t) dt` for a step function, in closed form:
/// each piece `v * 1_[a, b)` contributes `(v / pi) log|(x - a) / (x - b)|`.
///
/// Inside a piece the principal value cancels symmetrically and the same
/// formula holds. At an endpoint where `f` actually jumps the value is
/// infinite and an error is returned.
pub fn continuous_hilbert_step(f: &StepFunction, x: f64) -> Result<f64> {
    let mut total = 0.0;
    for (a, b, v) in f.canonical_pieces() {
        if x == a || x == b {
            return Err(Error::SingularPoint(x));
        }
        total += v * log_ratio(x, a, b);
    }
    Ok(total / PI)
}

/// `log|(x - a) / (x - b)|`, written as `ln_1p((b - a) / (x - b))` so that
/// distant pieces do not lose digits to cancellation.
#[inline]
pub(crate) fn log_ratio(x: f64, a: f64, b: f64) -> f64 {
    let r = (b - a) / (x - b);
    if r > -1.0 {
        r.ln_1p()
    } else {
        ((x - a) / (x - b)).abs().ln()
    }
}
