use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A compactly supported piecewise-constant function whose breakpoints lie on
/// the quarter-integer grid.
///
/// Breakpoints are stored in quarter units, so `quarters[i] = k` stands for
/// `x = k/4`. `values[i]` holds on `[quarters[i]/4, quarters[i+1]/4)`; the
/// function is zero outside the outermost breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    quarters: Vec<i64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(quarters: Vec<i64>, values: Vec<f64>) -> Result<Self> {
        let expected = quarters.len().saturating_sub(1);
        if values.len() != expected {
            return Err(Error::MalformedPieces(format!(
                "{} breakpoints need {expected} values, got {}",
                quarters.len(),
                values.len()
            )));
        }
        if quarters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPieces("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedPieces("piece values must be finite".into()));
        }
        Ok(StepFunction { quarters, values })
    }

    pub fn zero() -> Self {
        StepFunction { quarters: Vec::new(), values: Vec::new() }
    }

    /// `value` on `[lo/4, hi/4)`.
    pub fn indicator(lo_quarters: i64, hi_quarters: i64, value: f64) -> Result<Self> {
        StepFunction::new(vec![lo_quarters, hi_quarters], vec![value])
    }

    pub fn quarters(&self) -> &[i64] {
        &self.quarters
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.quarters.iter().map(|&q| q as f64 / 4.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(lo, hi, value)` per piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.quarters
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0] as f64 / 4.0, w[1] as f64 / 4.0, v))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.quarters.partition_point(|&q| (q as f64 / 4.0) <= x);
        if i == 0 || i >= self.quarters.len() {
            0.0
        } else {
            self.values[i - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        StepFunction { quarters: self.quarters.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Adjacent pieces with equal values merged and zero pieces dropped.
    pub(crate) fn canonical_pieces(&self) -> Vec<(f64, f64, f64)> {
        let mut out: Vec<(f64, f64, f64)> = Vec::new();
        for (lo, hi, v) in self.pieces() {
            if v == 0.0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.1 == lo && last.2 == v => last.1 = hi,
                _ => out.push((lo, hi, v)),
            }
        }
        out
    }
}

fn parse_quarter(s: &str) -> Result<i64> {
    let bad = || Error::Parse(format!("breakpoint `{s}` is not a quarter-integer like \"k/4\""));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    match den {
        1 | 2 | 4 => Ok(num * (4 / den)),
        _ => Err(bad()),
    }
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    breakpoints: Vec<String>,
    values: Vec<f64>,
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StepRepr {
            breakpoints: self.quarters.iter().map(|q| format!("{q}/4")).collect(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = StepRepr::deserialize(d)?;
        let quarters = repr
            .breakpoints
            .iter()
            .map(|s| parse_quarter(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        StepFunction::new(quarters, repr.values).map_err(D::Error::custom)
    }
}
