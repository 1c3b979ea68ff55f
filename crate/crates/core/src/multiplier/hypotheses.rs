use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentFunction;

/// The exponent-side hypotheses of the multiplier theorems for a
/// piecewise-constant `p(.)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierHypotheses {
    pub p_minus: f64,
    pub p_plus: f64,
    /// `1/p_- + 1/q = 3/2`.
    pub q: f64,
    /// `1 < p_- <= p_+ <= 2`.
    pub in_range: bool,
    /// Measure of `D = {x : p(x) > p_-}`; `None` when infinite.
    pub d_measure: Option<f64>,
    /// The intervals making up `D`, outer ends possibly infinite.
    pub d_intervals: Vec<(f64, f64)>,
    pub r_description: String,
    /// `1 in L^{r(.)}(D)`.
    pub satisfied: bool,
}

/// Computes `p_-`, `q` and decides `1 in L^{r(.)}(D)`.
///
/// On `D` the exponent `r` with `1/p_- = 1/p(x) + 1/r(x)` is finite, so the
/// modular of the constant 1 on `D` is just `|D|`; the condition holds iff `D`
/// has finite measure. With `require_range`, exponents outside
/// `1 < p_- <= p_+ <= 2` are rejected.
pub fn check_hypotheses(p: &ExponentFunction, require_range: bool) -> Result<MultiplierHypotheses> {
    let p_minus = p.p_minus();
    let p_plus = p.p_plus();
    let in_range = p_minus > 1.0 && p_plus <= 2.0;
    if require_range && !in_range {
        return Err(Error::HypothesisRange(format!(
            "need 1 < p_- <= p_+ <= 2, got p_- = {p_minus}, p_+ = {p_plus}"
        )));
    }
    let q = 1.0 / (1.5 - 1.0 / p_minus);

    let mut d_intervals: Vec<(f64, f64)> = Vec::new();
    for (lo, hi, v) in p.pieces() {
        if v > p_minus {
            match d_intervals.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => d_intervals.push((lo, hi)),
            }
        }
    }
    let measure: f64 = d_intervals.iter().map(|(a, b)| b - a).sum();
    let d_measure = measure.is_finite().then_some(measure);

    Ok(MultiplierHypotheses {
        p_minus,
        p_plus,
        q,
        in_range,
        satisfied: d_measure.is_some(),
        d_measure,
        d_intervals,
        r_description: "1/r(x) = 1/p_- - 1/p(x) on D; r is finite on D, so rho_r(1_D) = |D|".into(),
    })
}
