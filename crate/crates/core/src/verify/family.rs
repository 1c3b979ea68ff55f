use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentSequence;
use crate::window::Window;

/// A named recipe for exponent sequences, written as
/// `constant:q`, `alternating:even:odd[:tail]`, `log_decay:tail` or
/// `uniform:lo:hi[:tail]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ExponentFamily {
    Constant(f64),
    /// `even` on even indices and `odd` on odd ones.
    Alternating { even: f64, odd: f64, tail: f64 },
    /// `tail + 1 / ln(e + |k|)`.
    LogDecay { tail: f64 },
    /// Independent uniform draws on `[lo, hi)`.
    Uniform { lo: f64, hi: f64, tail: f64 },
}

impl ExponentFamily {
    /// The family on `window`; draws for `Uniform` come from `seed`, one
    /// stream per index, so nested windows see the same values.
    pub fn realize(&self, window: Window, seed: u64) -> Result<ExponentSequence> {
        match *self {
            ExponentFamily::Constant(q) => ExponentSequence::constant(q),
            ExponentFamily::Alternating { even, odd, tail } => {
                ExponentSequence::from_fn(window, tail, |n| if n.rem_euclid(2) == 0 { even } else { odd })
            }
            ExponentFamily::LogDecay { tail } => {
                ExponentSequence::from_fn(window, tail, |n| tail + 1.0 / (E + n.unsigned_abs() as f64).ln())
            }
            ExponentFamily::Uniform { lo, hi, tail } => {
                let values = window
                    .indices()
                    .map(|n| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(n as u64);
                        rng.gen_range(lo..hi)
                    })
                    .collect();
                ExponentSequence::new(window.start, values, tail)
            }
        }
    }
}

impl fmt::Display for ExponentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentFamily::Constant(q) => write!(f, "constant:{q}"),
            ExponentFamily::Alternating { even, odd, tail } => write!(f, "alternating:{even}:{odd}:{tail}"),
            ExponentFamily::LogDecay { tail } => write!(f, "log_decay:{tail}"),
            ExponentFamily::Uniform { lo, hi, tail } => write!(f, "uniform:{lo}:{hi}:{tail}"),
        }
    }
}

impl FromStr for ExponentFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let nums = parts
            .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{x}` in family `{s}`"))))
            .collect::<Result<Vec<f64>>>()?;
        let family = match (kind, nums.as_slice()) {
            ("constant", &[q]) => ExponentFamily::Constant(q),
            ("alternating", &[even, odd]) => ExponentFamily::Alternating { even, odd, tail: even.max(odd) },
            ("alternating", &[even, odd, tail]) => ExponentFamily::Alternating { even, odd, tail },
            ("log_decay", &[tail]) => ExponentFamily::LogDecay { tail },
            ("uniform", &[lo, hi]) if lo < hi => ExponentFamily::Uniform { lo, hi, tail: hi },
            ("uniform", &[lo, hi, tail]) if lo < hi => ExponentFamily::Uniform { lo, hi, tail },
            _ => return Err(Error::Parse(format!("unknown exponent family `{s}`"))),
        };
        // reject values that could never form a valid exponent
        family.realize(Window::new(0, 2), 0)?;
        Ok(family)
    }
}

impl TryFrom<String> for ExponentFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ExponentFamily> for String {
    fn from(f: ExponentFamily) -> String {
        f.to_string()
    }
}
