//! Exponent sequences `(p_n)` on ℤ, piecewise-constant exponent functions on ℝ,
//! and the two log-Hölder regularity conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::Window;

fn validate_exponent(value: f64) -> Result<f64> {
    if value.is_nan() {
        return Err(Error::InvalidExponent { value, reason: "not a number" });
    }
    if value.is_infinite() {
        return Err(Error::InvalidExponent { value, reason: "infinite exponents are not supported" });
    }
    if value < 1.0 {
        return Err(Error::InvalidExponent { value, reason: "exponent must be at least 1" });
    }
    Ok(value)
}

/// Exponents `p_n` for `n` in a window, with a single `tail` value used at
/// every index outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExponentSequenceRepr")]
pub struct ExponentSequence {
    window_start: i64,
    values: Vec<f64>,
    tail: f64,
}

#[derive(Deserialize)]
struct ExponentSequenceRepr {
    window_start: i64,
    values: Vec<f64>,
    tail: f64,
}

impl TryFrom<ExponentSequenceRepr> for ExponentSequence {
    type Error = Error;

    fn try_from(r: ExponentSequenceRepr) -> Result<Self> {
        ExponentSequence::new(r.window_start, r.values, r.tail)
    }
}

impl ExponentSequence {
    /// Values must be finite and at least 1. Operations that need `p > 1`
    /// (conjugates, the pointwise Hilbert bound, multiplier hypotheses) check
    /// that separately.
    pub fn new(window_start: i64, values: Vec<f64>, tail: f64) -> Result<Self> {
        for &v in &values {
            validate_exponent(v)?;
        }
        validate_exponent(tail)?;
        Ok(ExponentSequence { window_start, values, tail })
    }

    pub fn constant(q: f64) -> Result<Self> {
        ExponentSequence::new(0, Vec::new(), q)
    }

    /// Builds `p_n = f(n)` on `window`, with the given tail.
    pub fn from_fn(window: Window, tail: f64, f: impl Fn(i64) -> f64) -> Result<Self> {
        ExponentSequence::new(window.start, window.indices().map(f).collect(), tail)
    }

    pub fn window(&self) -> Window {
        Window::new(self.window_start, self.values.len())
    }

    pub fn window_start(&self) -> i64 {
        self.window_start
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    #[inline]
    pub fn get(&self, n: i64) -> f64 {
        let offset = n - self.window_start;
        if offset >= 0 && (offset as usize) < self.values.len() {
            self.values[offset as usize]
        } else {
            self.tail
        }
    }

    /// `sup_n p_n`.
    pub fn p_bar(&self) -> f64 {
        self.values.iter().copied().fold(self.tail, f64::max)
    }

    /// `inf_n p_n`.
    pub fn p_lower(&self) -> f64 {
        self.values.iter().copied().fold(self.tail, f64::min)
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| v == self.tail)
    }

    /// Fails unless `inf_n p_n > 1`.
    pub fn require_reflexive(&self) -> Result<()> {
        let lower = self.p_lower();
        if lower > 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidExponent { value: lower, reason: "operation requires inf p_n > 1" })
        }
    }
}

/// The Hölder conjugate `p / (p - 1)`.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { value: p, reason: "conjugate needs 1 < p < inf" });
    }
    Ok(p / (p - 1.0))
}

/// A piecewise-constant exponent on ℝ.
///
/// With breakpoints `x_0 < ... < x_{k-1}`, `values[0]` holds on `(-inf, x_0)`,
/// `values[i]` on `[x_{i-1}, x_i)` and `values[k]` on `[x_{k-1}, inf)`.
/// The last value is the tail `p_inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    description: String,
}

impl ExponentFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPieces);
        }
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::MalformedPieces(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPieces("breakpoints must be finite and strictly increasing".into()));
        }
        for &v in &values {
            validate_exponent(v)?;
        }
        Ok(ExponentFunction { breakpoints, values, description: description.into() })
    }

    pub fn constant(q: f64) -> Result<Self> {
        ExponentFunction::new(Vec::new(), vec![q], format!("constant {q}"))
    }

    /// The half-integer extension of a sequence: `p(x) = p_k` on `[k - 1/2, k + 1/2)`.
    pub fn from_sequence(p: &ExponentSequence) -> Self {
        let w = p.window();
        let breakpoints = (w.start..=w.end()).map(|k| k as f64 - 0.5).collect::<Vec<_>>();
        let mut values = Vec::with_capacity(breakpoints.len() + 1);
        values.push(p.tail());
        values.extend_from_slice(p.values());
        values.push(p.tail());
        if w.is_empty() {
            return ExponentFunction {
                breakpoints: Vec::new(),
                values: vec![p.tail()],
                description: "constant exponent from sequence tail".into(),
            };
        }
        ExponentFunction {
            breakpoints,
            values,
            description: "p_k on [k - 1/2, k + 1/2), tail outside the window".into(),
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        self.values[i]
    }

    pub fn tail(&self) -> f64 {
        *self.values.last().expect("nonempty by construction")
    }

    /// Essential infimum; every piece has positive length.
    pub fn p_minus(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn p_plus(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(lo, hi, value)` per piece, with infinite outer ends.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let k = self.breakpoints.len();
        (0..=k).map(move |i| {
            let lo = if i == 0 { f64::NEG_INFINITY } else { self.breakpoints[i - 1] };
            let hi = if i == k { f64::INFINITY } else { self.breakpoints[i] };
            (lo, hi, self.values[i])
        })
    }

    /// Breakpoints where the two adjacent values differ, with the jump size.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| {
                let d = self.values[i + 1] - self.values[i];
                (d != 0.0).then_some((b, d))
            })
    }
}

/// Uniform sample points `lo, lo + step, ...` up to `hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl SampleGrid {
    /// Covers every breakpoint of `p` plus `margin` on each side.
    pub fn around(p: &ExponentFunction, margin: f64, step: f64) -> Self {
        let lo = p.breakpoints().first().copied().unwrap_or(0.0) - margin;
        let hi = p.breakpoints().last().copied().unwrap_or(0.0) + margin;
        SampleGrid { lo, hi, step }
    }

    fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !self.lo.is_finite() || !self.hi.is_finite() || self.hi < self.lo {
            return Err(Error::InvalidArgument(format!("bad sample grid {self:?}")));
        }
        let count = ((self.hi - self.lo) / self.step).floor() as usize + 1;
        Ok((0..count).map(|i| self.lo + i as f64 * self.step).collect())
    }
}

/// Outcome of [`check_log_holder`]. A `None` constant means no finite
/// constant exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogHolderReport {
    pub c0: Option<f64>,
    pub c_inf: Option<f64>,
    pub p_inf: f64,
    pub passed_local: bool,
    pub passed_infinity: bool,
    /// Pair `(x, y)` realizing the worst local ratio.
    pub local_witness: Option<(f64, f64)>,
    /// Point realizing the worst ratio at infinity.
    pub infinity_witness: Option<f64>,
}

/// Checks local log-Hölder continuity and log-Hölder decay to `p_inf`.
///
/// Failure of the local condition is decided from the piece list: any jump
/// makes `|p(x) - p(y)| * (-log|x - y|)` unbounded as `x, y` close in on the
/// breakpoint. Otherwise the constants are the maxima over the sample grid.
pub fn check_log_holder(p: &ExponentFunction, grid: &SampleGrid) -> Result<LogHolderReport> {
    let xs = grid.points()?;
    let p_inf = p.tail();
    let values: Vec<f64> = xs.iter().map(|&x| p.eval(x)).collect();

    let (c0, local_witness) = match p.jumps().next() {
        Some((b, _)) => {
            let below = b - b.abs().max(1.0) * f64::EPSILON;
            (None, Some((below, b)))
        }
        None => {
            let mut best = 0.0;
            let mut witness = None;
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    let d = xs[j] - xs[i];
                    if d >= 0.5 {
                        break;
                    }
                    let ratio = (values[i] - values[j]).abs() * -d.ln();
                    if ratio > best {
                        best = ratio;
                        witness = Some((xs[i], xs[j]));
                    }
                }
            }
            (Some(best), witness)
        }
    };

    let (c_inf, infinity_witness) = if p.values()[0] != p_inf {
        // Constant offset on a half-line against a divergent log weight.
        (None, Some(xs[0].min(p.breakpoints().first().copied().unwrap_or(0.0))))
    } else {
        let mut best = 0.0;
        let mut witness = None;
        for (&x, &v) in xs.iter().zip(&values) {
            let ratio = (v - p_inf).abs() * (std::f64::consts::E + x.abs()).ln();
            if ratio > best {
                best = ratio;
                witness = Some(x);
            }
        }
        (Some(best), witness)
    };

    Ok(LogHolderReport {
        passed_local: c0.is_some(),
        passed_infinity: c_inf.is_some(),
        c0,
        c_inf,
        p_inf,
        local_witness,
        infinity_witness,
    })
}
