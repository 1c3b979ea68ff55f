//! Transfer between sequences and functions on ℝ.
//!
//! A sequence `b` becomes the step function `f = 2 pi b_k` on
//! `[k - 1/4, k + 1/4)`, and an exponent sequence becomes `p(x) = p_k` on
//! `[k - 1/2, k + 1/2)`. On the cell around `n` the continuous transform of
//! `f` splits as `Hf(x) = Hb_n + G1(x) + G2(x)`, where `G2` is the
//! contribution of the bump at `n` itself and `G1` collects the error of
//! replacing every other bump by a point mass.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::exponent::{ExponentFunction, ExponentSequence};
use crate::hilbert::continuous::log_ratio;
use crate::hilbert::{continuous_hilbert_step, discrete_hilbert, HilbertOptions};
use crate::space::{Sequence, StepFunction};
use crate::window::Window;

#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub b: Sequence,
    pub p: ExponentSequence,
    pub f: StepFunction,
    pub pfun: ExponentFunction,
}

pub fn embed(b: &Sequence, p: &ExponentSequence) -> Embedding {
    Embedding { b: b.clone(), p: p.clone(), f: step_embedding(b), pfun: ExponentFunction::from_sequence(p) }
}

/// `2 pi b_k` on `[k - 1/4, k + 1/4)`, zero in between.
pub fn step_embedding(b: &Sequence) -> StepFunction {
    let w = b.window();
    if w.is_empty() {
        return StepFunction::zero();
    }
    let mut quarters = Vec::with_capacity(2 * w.len);
    let mut values = Vec::with_capacity(2 * w.len - 1);
    for (i, (k, v)) in b.iter().enumerate() {
        if i > 0 {
            values.push(0.0);
        }
        quarters.push(4 * k - 1);
        quarters.push(4 * k + 1);
        values.push(2.0 * PI * v);
    }
    StepFunction::new(quarters, values).expect("cells are disjoint and ordered")
}

/// `(1/2) sum_n |2 pi b_n|^{p_n}`, the closed form of the modular of the
/// embedded step function.
pub fn embedded_modular(b: &Sequence, p: &ExponentSequence) -> f64 {
    b.iter()
        .map(|(n, v)| {
            let a = (2.0 * PI * v).abs();
            if a == 0.0 {
                0.0
            } else {
                0.5 * a.powf(p.get(n))
            }
        })
        .sum()
}

/// The decomposition of `Hf` on the cell `|x - n| <= 1/2`.
#[derive(Clone, Debug)]
pub struct GDecomposition<'a> {
    embedding: &'a Embedding,
    pub n: i64,
    /// `F` on the cell, i.e. `Hb_n`.
    pub f_value: f64,
    pub b_n: f64,
    /// `sum_{m != n} 3 |b_m| / |n - m|^2`.
    pub g1_bound: f64,
}

pub fn g_decompose(e: &Embedding, n: i64) -> Result<GDecomposition<'_>> {
    let f_value = discrete_hilbert(&e.b, Window::new(n, 1), &HilbertOptions::direct())?.values()[0];
    let g1_bound = e
        .b
        .iter()
        .filter(|&(m, _)| m != n)
        .map(|(m, v)| {
            let d = (n - m) as f64;
            3.0 * v.abs() / (d * d)
        })
        .sum();
    Ok(GDecomposition { embedding: e, n, f_value, b_n: e.b.get(n), g1_bound })
}

impl GDecomposition<'_> {
    pub fn cell(&self) -> (f64, f64) {
        (self.n as f64 - 0.5, self.n as f64 + 0.5)
    }

    pub fn hf_at(&self, x: f64) -> Result<f64> {
        continuous_hilbert_step(&self.embedding.f, x)
    }

    /// `2 b_n log|(x - n + 1/4) / (x - n - 1/4)|`.
    pub fn g2_at(&self, x: f64) -> Result<f64> {
        if self.b_n == 0.0 {
            return Ok(0.0);
        }
        let u = x - self.n as f64;
        if u == 0.25 || u == -0.25 {
            return Err(Error::SingularPoint(x));
        }
        Ok(2.0 * self.b_n * ((u + 0.25) / (u - 0.25)).abs().ln())
    }

    /// `Hf(x) - G2(x) - Hb_n`, summed cell by cell as
    /// `sum_{m != n} b_m (2 log|(x - m + 1/4) / (x - m - 1/4)| - 1 / (n - m))`
    /// so that no cancellation against the own-cell term occurs.
    pub fn g1_at(&self, x: f64) -> Result<f64> {
        let mut total = 0.0;
        for (m, v) in self.embedding.b.iter() {
            if m == self.n || v == 0.0 {
                continue;
            }
            let (a, b) = (m as f64 - 0.25, m as f64 + 0.25);
            if x == a || x == b {
                return Err(Error::SingularPoint(x));
            }
            total += v * (2.0 * log_ratio(x, a, b) - 1.0 / (self.n - m) as f64);
        }
        Ok(total)
    }

    /// `2 |b_n| log 2`, which bounds `|G2|` only on `|x - n| <= 1/12`.
    pub fn g2_bound(&self) -> f64 {
        2.0 * self.b_n.abs() * LN_2
    }
}

/// Half-width of the region `|x - n| <= G2_BOUND_RADIUS` on which
/// `|G2(x)| <= 2 |b_n| log 2` holds: `|(u + 1/4)/(u - 1/4)| <= 2` iff `|u| <= 1/12`.
pub const G2_BOUND_RADIUS: f64 = 1.0 / 12.0;
