//! Lower bounds for the norm of `H` on `l^{p_n}`.
//!
//! Everything here works on the square finite section of `H` over one
//! window: the input is supported in the window and the output is read on the
//! same window. Truncating the output only lowers `||Hb||`, so every ratio
//! found is a lower bound for the full operator norm, and a witness from a
//! smaller window, padded with zeros, stays admissible on a larger one.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exponent::ExponentSequence;
use crate::hilbert::{discrete_hilbert, HilbertOptions};
use crate::space::{luxemburg_norm_seq, normalize, Sequence, DEFAULT_TOL};
use crate::window::Window;

/// Which stage produced the reported witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMethod {
    /// A supplied starting sequence that no later stage improved.
    Warm,
    Basis,
    Random,
    /// Fixed-point iteration of the norm's duality map.
    Power,
    Ascent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimateConfig {
    /// Random draws from the unit sphere, on top of the basis columns.
    pub trials: usize,
    pub basis: bool,
    pub power_iterations: usize,
    pub ascent_passes: usize,
    /// Coordinates tried per ascent pass; all of them when the window is smaller.
    pub ascent_coordinates: usize,
    pub seed: u64,
    #[serde(skip)]
    pub warm_start: Option<Sequence>,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            trials: 64,
            basis: true,
            power_iterations: 200,
            ascent_passes: 100,
            ascent_coordinates: 32,
            seed: 0,
            warm_start: None,
        }
    }
}

impl EstimateConfig {
    /// Basis columns only, no refinement.
    pub fn basis_only() -> Self {
        EstimateConfig { trials: 0, power_iterations: 0, ascent_passes: 0, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageBound {
    pub method: EstimateMethod,
    pub lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// `||Hb|| / ||b||` for the witness, both norms taken on `window`.
    pub lower_bound: f64,
    /// Normalized to `||witness|| = 1`.
    pub witness: Sequence,
    /// Sequences evaluated before refinement.
    pub trials: usize,
    pub window: Window,
    pub method: EstimateMethod,
    /// Best ratio after each stage that ran, in order.
    pub stages: Vec<StageBound>,
}

/// [`estimate_operator_norm_with`] using the default refinement settings.
pub fn estimate_operator_norm(p: &ExponentSequence, window: Window, trials: usize, seed: u64) -> Result<NormEstimate> {
    estimate_operator_norm_with(p, window, &EstimateConfig { trials, seed, ..Default::default() })
}

pub fn estimate_operator_norm_with(p: &ExponentSequence, window: Window, cfg: &EstimateConfig) -> Result<NormEstimate> {
    let window = window.require_nonempty()?;
    let len = window.len;
    let exps: Vec<f64> = window.indices().map(|n| p.get(n)).collect();
    let section = Section::new(len);

    // sampling: lowest key wins ties, so the result does not depend on scheduling
    let warm = cfg.warm_start.as_ref().map(|w| window.indices().map(|n| w.get(n)).collect::<Vec<f64>>());
    let warm = warm.filter(|w| w.iter().any(|&v| v != 0.0));
    let basis_count = if cfg.basis { len } else { 0 };
    let total = warm.is_some() as usize + basis_count + cfg.trials;
    if total == 0 {
        return Err(crate::Error::InvalidArgument("estimate needs at least one trial".into()));
    }
    let offset = warm.is_some() as usize;
    let candidate = |key: usize| -> Vec<f64> {
        if key < offset {
            warm.clone().unwrap()
        } else if key < offset + basis_count {
            let mut v = vec![0.0; len];
            v[key - offset] = 1.0;
            v
        } else {
            random_draw(len, cfg.seed, (key - offset - basis_count) as u64)
        }
    };
    let score = |key: usize| -> (f64, usize) {
        let b = candidate(key);
        let hb = if offset <= key && key < offset + basis_count {
            column(len, key - offset)
        } else {
            section.apply(&b)
        };
        (fast_norm(&hb, &exps) / fast_norm(&b, &exps), key)
    };
    let best_of = |range: std::ops::Range<usize>| {
        range.into_par_iter().map(score).reduce(|| (f64::NEG_INFINITY, usize::MAX), better)
    };
    let (ratio, key) = best_of(0..total);
    let method = if key < offset {
        EstimateMethod::Warm
    } else if key < offset + basis_count {
        EstimateMethod::Basis
    } else {
        EstimateMethod::Random
    };
    let mut best = Candidate { b: candidate(key), ratio, method };
    let mut stages = vec![StageBound { method, lower_bound: ratio }];

    if cfg.power_iterations > 0 && p.p_lower() > 1.0 {
        let mut starts = vec![best.b.clone()];
        if cfg.trials > 0 && method != EstimateMethod::Random {
            let (_, key) = best_of(offset + basis_count..total);
            starts.push(candidate(key));
        }
        for start in starts {
            let c = power_iteration(&section, &exps, start, cfg.power_iterations);
            if c.ratio > best.ratio {
                best = c;
            }
        }
        stages.push(StageBound { method: EstimateMethod::Power, lower_bound: best.ratio });
    }

    if cfg.ascent_passes > 0 {
        let c = coordinate_ascent(&section, &exps, best.clone(), cfg);
        if c.ratio > best.ratio {
            best = c;
        }
        stages.push(StageBound { method: EstimateMethod::Ascent, lower_bound: best.ratio });
    }

    let witness = normalize(&Sequence::new(window.start, best.b), p)?;
    let lower_bound = replay_ratio(&witness, p)?;
    Ok(NormEstimate { lower_bound, witness, trials: total, window, method: best.method, stages })
}

/// `||Hb|| / ||b||` with the output read on `b`'s own window, through the
/// library's transform and norm.
pub fn replay_ratio(b: &Sequence, p: &ExponentSequence) -> Result<f64> {
    let hb = discrete_hilbert(b, b.window(), &HilbertOptions::fft())?;
    let den = luxemburg_norm_seq(b, p, DEFAULT_TOL)?.value;
    Ok(luxemburg_norm_seq(&hb, p, DEFAULT_TOL)?.value / den)
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    b: Vec<f64>,
    ratio: f64,
    method: EstimateMethod,
}

fn random_draw(len: usize, seed: u64, stream: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[inline]
fn kernel(k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        1.0 / k as f64
    }
}

/// `H e_j` restricted to the window, in local coordinates.
fn column(len: usize, j: usize) -> Vec<f64> {
    (0..len).map(|i| kernel(i as i64 - j as i64)).collect()
}

/// The square finite section with a cached kernel spectrum.
struct Section {
    len: usize,
    size: usize,
    taps: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Section {
    fn new(len: usize) -> Self {
        let size = (2 * len).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut taps = vec![Complex64::new(0.0, 0.0); size];
        for (t, slot) in taps.iter_mut().take(2 * len - 1).enumerate() {
            *slot = Complex64::new(kernel(t as i64 - (len as i64 - 1)), 0.0);
        }
        forward.process(&mut taps);
        Section { len, size, taps, forward, inverse }
    }

    fn apply(&self, b: &[f64]) -> Vec<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        for (slot, &v) in buf.iter_mut().zip(b) {
            slot.re = v;
        }
        self.forward.process(&mut buf);
        for (s, t) in buf.iter_mut().zip(&self.taps) {
            *s *= *t;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        buf[self.len - 1..2 * self.len - 1].iter().map(|c| c.re * scale).collect()
    }
}

/// Luxemburg norm by Newton's method on `s -> ln rho(values / (max e^s))`,
/// which is convex and decreasing with slope in `[-max p, -min p]`. Starting
/// at `s = 0`, where the modular is at least 1, the iterates increase
/// monotonically to the root.
fn fast_norm(values: &[f64], exps: &[f64]) -> f64 {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    let terms: Vec<(f64, f64)> = values
        .iter()
        .zip(exps)
        .filter(|(v, _)| **v != 0.0)
        .map(|(v, &p)| ((v.abs() / max).ln(), p))
        .collect();
    let mut s = 0.0f64;
    for _ in 0..100 {
        let (mut sum, mut slope) = (0.0, 0.0);
        for &(la, p) in &terms {
            let w = (p * (la - s)).exp();
            sum += w;
            slope += p * w;
        }
        let step = sum.ln() * sum / slope;
        s += step;
        if step.abs() <= 4.0 * f64::EPSILON * s.max(1.0) {
            break;
        }
    }
    max * s.exp()
}

/// The unit-modular sequence maximizing `<z, b>`:
/// `b_n = sgn(z_n) (c |z_n| / p_n)^{1 / (p_n - 1)}` with `c` chosen so that
/// `rho(b) = 1`. Solved by Newton's method in `ln c`, from the right.
fn dual_direction(z: &[f64], exps: &[f64]) -> Option<Vec<f64>> {
    let logs: Vec<Option<f64>> = z.iter().zip(exps).map(|(&v, &p)| (v != 0.0).then(|| (v.abs() / p).ln())).collect();
    let top = logs.iter().flatten().fold(f64::NEG_INFINITY, |m, &l| m.max(l));
    if !top.is_finite() {
        return None;
    }
    let mut s = -top;
    for _ in 0..200 {
        let (mut sum, mut slope) = (0.0, 0.0);
        for (l, &p) in logs.iter().zip(exps) {
            if let Some(l) = l {
                let e = p / (p - 1.0);
                let w = (e * (l + s)).exp();
                sum += w;
                slope += e * w;
            }
        }
        let step = sum.ln() * sum / slope;
        s -= step;
        if step.abs() <= 4.0 * f64::EPSILON * s.abs().max(1.0) {
            break;
        }
    }
    Some(
        logs.iter()
            .zip(z)
            .zip(exps)
            .map(|((l, &v), &p)| match l {
                Some(l) => v.signum() * ((l + s) / (p - 1.0)).exp(),
                None => 0.0,
            })
            .collect(),
    )
}

/// `b <- argmax_{rho(b) = 1} <H^T grad ||.||(Hb), b>`, kept only while the
/// ratio increases. For constant exponent 2 this is the power method on
/// `H^T H`.
fn power_iteration(section: &Section, exps: &[f64], start: Vec<f64>, iterations: usize) -> Candidate {
    let mut b = start;
    let mut y = section.apply(&b);
    let mut ratio = fast_norm(&y, exps) / fast_norm(&b, exps);
    for _ in 0..iterations {
        let lambda = fast_norm(&y, exps);
        if lambda == 0.0 {
            break;
        }
        let grad: Vec<f64> = y
            .iter()
            .zip(exps)
            .map(|(&v, &p)| if v == 0.0 { 0.0 } else { p * (v.abs() / lambda).powf(p - 1.0) * v.signum() })
            .collect();
        // H^T = -H on a square section
        let z: Vec<f64> = section.apply(&grad).into_iter().map(|v| -v).collect();
        let Some(next) = dual_direction(&z, exps) else { break };
        let next_y = section.apply(&next);
        let next_ratio = fast_norm(&next_y, exps) / fast_norm(&next, exps);
        if !(next_ratio > ratio * (1.0 + 1e-13)) {
            break;
        }
        b = next;
        y = next_y;
        ratio = next_ratio;
    }
    Candidate { b, ratio, method: EstimateMethod::Power }
}

/// Perturb one coordinate at a time and keep strict improvements. The step
/// halves after a pass without progress; the search stops after the
/// configured number of passes or once the step is negligible.
fn coordinate_ascent(section: &Section, exps: &[f64], start: Candidate, cfg: &EstimateConfig) -> Candidate {
    let len = exps.len();
    let mut b = start.b;
    let mut y = section.apply(&b);
    let mut ratio = fast_norm(&y, exps) / fast_norm(&b, exps);
    let mut improved_any = false;
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut step = 0.5 * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::MAX);

    for _ in 0..cfg.ascent_passes {
        let coords: Vec<usize> = if len <= cfg.ascent_coordinates {
            (0..len).collect()
        } else {
            index::sample(&mut rng, len, cfg.ascent_coordinates).into_vec()
        };
        let mut improved = false;
        for j in coords {
            for dir in [1.0, -1.0] {
                let d = dir * step;
                b[j] += d;
                for (i, v) in y.iter_mut().enumerate() {
                    *v += d * kernel(i as i64 - j as i64);
                }
                let r = fast_norm(&y, exps) / fast_norm(&b, exps);
                if r > ratio * (1.0 + 1e-14) {
                    ratio = r;
                    improved = true;
                    break;
                }
                b[j] -= d;
                for (i, v) in y.iter_mut().enumerate() {
                    *v -= d * kernel(i as i64 - j as i64);
                }
            }
        }
        y = section.apply(&b);
        ratio = fast_norm(&y, exps) / fast_norm(&b, exps);
        if improved {
            improved_any = true;
        } else {
            step *= 0.5;
            if step < 1e-6 * scale {
                break;
            }
        }
    }
    let method = if improved_any { EstimateMethod::Ascent } else { start.method };
    Candidate { b, ratio, method }
}
