use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Sequence, StepFunction};
use crate::error::{Error, Result};
use crate::exponent::{ExponentFunction, ExponentSequence};
use crate::scalar::Scalar;
use crate::window::Window;

/// Default acceptance threshold on `|rho(b / value) - 1|`.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 200;

/// A Luxemburg norm value with its convergence diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    /// The modular at `b / value`; 1 up to rounding for nonzero input.
    pub modular_at_value: f64,
    pub iterations: usize,
    pub tolerance_met: bool,
}

impl NormResult {
    fn zero() -> Self {
        NormResult { value: 0.0, modular_at_value: 0.0, iterations: 0, tolerance_met: true }
    }
}

/// `sum_n |b_n|^{p_n}`.
pub fn modular_seq<T: Scalar>(b: &Sequence<T>, p: &ExponentSequence) -> f64 {
    scaled_modular_seq(b, p, 1.0)
}

#[inline]
fn scaled_modular_seq<T: Scalar>(b: &Sequence<T>, p: &ExponentSequence, lambda: f64) -> f64 {
    let inv = 1.0 / lambda;
    b.iter()
        .map(|(n, v)| {
            let a = v.modulus() * inv;
            if a == 0.0 {
                0.0
            } else {
                a.powf(p.get(n))
            }
        })
        .sum()
}

/// `inf { lambda > 0 : rho(b / lambda) <= 1 }`, by bisection on a guaranteed bracket.
pub fn luxemburg_norm_seq<T: Scalar>(b: &Sequence<T>, p: &ExponentSequence, tol: f64) -> Result<NormResult> {
    check_tol(tol)?;
    let max = b.max_modulus();
    if max == 0.0 {
        return Ok(NormResult::zero());
    }
    // With N nonzero entries and q = inf p_n:
    //   rho(b / max) >= 1 and rho(b / (max * N^{1/q})) <= 1.
    let count = b.support_size() as f64;
    let q = p.p_lower();
    let lo = max;
    let hi = max * count.powf(1.0 / q);
    Ok(solve_unit_level(|lambda| scaled_modular_seq(b, p, lambda), lo, hi, tol))
}

/// `integral |g(x)|^{p(x)} dx`, summed exactly over the common refinement of
/// the two piece lists.
pub fn modular_step(g: &StepFunction, p: &ExponentFunction) -> f64 {
    scaled_modular_step(g, p, 1.0)
}

fn scaled_modular_step(g: &StepFunction, p: &ExponentFunction, lambda: f64) -> f64 {
    let bps = p.breakpoints();
    let vals = p.values();
    let mut total = 0.0;
    for (lo, hi, v) in g.pieces() {
        let a = v.abs() / lambda;
        if a == 0.0 {
            continue;
        }
        // p pieces meeting [lo, hi)
        let mut i = bps.partition_point(|&b| b <= lo);
        let mut left = lo;
        loop {
            let right = if i < bps.len() { bps[i].min(hi) } else { hi };
            if right > left {
                total += a.powf(vals[i]) * (right - left);
            }
            if right >= hi {
                break;
            }
            left = right;
            i += 1;
        }
    }
    total
}

pub fn luxemburg_norm_step(g: &StepFunction, p: &ExponentFunction, tol: f64) -> Result<NormResult> {
    check_tol(tol)?;
    let max = g.max_abs();
    if max == 0.0 {
        return Ok(NormResult::zero());
    }
    Ok(solve_unit_level(|lambda| scaled_modular_step(g, p, lambda), max, 2.0 * max, tol))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Finds the level `lambda` with `rho(lambda) = 1` for a continuous, strictly
/// decreasing `rho`. The initial bracket is widened by doubling / halving
/// if needed, then bisected down to adjacent floats.
fn solve_unit_level(rho: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> NormResult {
    let mut iterations = 0;
    while rho(hi) > 1.0 && iterations < MAX_ITERATIONS {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
    }
    while rho(lo) < 1.0 && iterations < MAX_ITERATIONS {
        hi = lo;
        lo *= 0.5;
        iterations += 1;
    }
    while iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let r = rho(mid);
        if r > 1.0 {
            lo = mid;
        } else if r < 1.0 {
            hi = mid;
        } else {
            hi = mid;
            break;
        }
    }
    let modular_at_value = rho(hi);
    NormResult {
        value: hi,
        modular_at_value,
        iterations,
        tolerance_met: (modular_at_value - 1.0).abs() <= tol,
    }
}

/// Deterministic samples from the unit sphere of `l^{p_n}` on `window`.
///
/// The first `min(count, |window|)` samples are the basis vectors in index
/// order; the rest are uniform draws on `[-1, 1]^window` rescaled to norm 1.
/// Sample `i` draws from its own stream of a generator seeded with `seed`, so
/// the output depends only on the arguments.
pub fn sample_unit_ball(p: &ExponentSequence, window: Window, seed: u64, count: usize) -> Result<Vec<Sequence>> {
    let window = window.require_nonempty()?;
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let mut out: Vec<Sequence> = window.indices().take(count).map(Sequence::basis).collect();
    for i in out.len()..count {
        out.push(random_unit_sequence(p, window, seed, i as u64)?);
    }
    Ok(out)
}

/// One rescaled uniform draw, from stream `stream` of the seeded generator.
pub fn random_unit_sequence(p: &ExponentSequence, window: Window, seed: u64, stream: u64) -> Result<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let raw = Sequence::from_fn(window, |_| rng.gen_range(-1.0..=1.0));
    normalize(&raw, p)
}

/// `b / ||b||`, rescaled once more if rounding left the norm off by more than 1e-12.
pub fn normalize(b: &Sequence, p: &ExponentSequence) -> Result<Sequence> {
    let norm = luxemburg_norm_seq(b, p, DEFAULT_TOL)?.value;
    if norm == 0.0 {
        return Err(Error::InvalidArgument("cannot normalize the zero sequence".into()));
    }
    let mut out = b.scaled(1.0 / norm);
    let again = luxemburg_norm_seq(&out, p, DEFAULT_TOL)?.value;
    if (again - 1.0).abs() > 1e-12 {
        out = out.scaled(1.0 / again);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn seq(start: i64, v: &[f64]) -> Sequence {
        Sequence::new(start, v.to_vec())
    }

    #[test]
    fn modular_examples() {
        let p2 = ExponentSequence::constant(2.0).unwrap();
        assert_eq!(modular_seq(&Sequence::basis(0), &p2), 1.0);
        let p12 = ExponentSequence::new(0, vec![1.0, 2.0], 2.0).unwrap();
        assert_eq!(modular_seq(&seq(0, &[0.5, 0.5]), &p12), 0.75);
        let p3 = ExponentSequence::new(0, vec![3.0], 2.0).unwrap();
        assert!((modular_seq(&seq(0, &[2.0]), &p3) - 8.0).abs() < 1e-12);
        assert_eq!(modular_seq(&Sequence::<f64>::zeros(Window::new(0, 4)), &p3), 0.0);
    }

    #[test]
    fn windows_need_not_align() {
        let p = ExponentSequence::new(5, vec![3.0], 2.0).unwrap();
        let b = seq(4, &[2.0, 2.0]);
        assert!((modular_seq(&b, &p) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn luxemburg_examples() {
        let p2 = ExponentSequence::constant(2.0).unwrap();
        let r = luxemburg_norm_seq(&seq(0, &[3.0, 4.0]), &p2, DEFAULT_TOL).unwrap();
        assert!((r.value - 5.0).abs() < 1e-12);
        assert!(r.tolerance_met);

        // 1/lambda + 1/lambda^2 = 1
        let p12 = ExponentSequence::new(0, vec![1.0, 2.0], 2.0).unwrap();
        let r = luxemburg_norm_seq(&seq(0, &[1.0, 1.0]), &p12, DEFAULT_TOL).unwrap();
        assert!((r.value - 1.618_033_988_749_895).abs() < 1e-12, "{}", r.value);

        let r = luxemburg_norm_seq(&Sequence::<f64>::zeros(Window::new(0, 3)), &p12, DEFAULT_TOL).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let p2 = ExponentSequence::constant(2.0).unwrap();
        assert!(luxemburg_norm_seq(&Sequence::basis(0), &p2, 0.0).is_err());
        assert!(luxemburg_norm_seq(&Sequence::basis(0), &p2, -1.0).is_err());
    }

    #[test]
    fn complex_entries_use_modulus() {
        use num_complex::Complex64;
        let p2 = ExponentSequence::constant(2.0).unwrap();
        let b = Sequence::new(0, vec![Complex64::new(3.0, 4.0)]);
        assert!((luxemburg_norm_seq(&b, &p2, DEFAULT_TOL).unwrap().value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn modular_step_examples() {
        let p2 = ExponentFunction::constant(2.0).unwrap();
        let g = StepFunction::indicator(-1, 1, 2.0 * PI).unwrap();
        assert!((modular_step(&g, &p2) - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(modular_step(&StepFunction::zero(), &p2), 0.0);

        let p5 = ExponentFunction::new(vec![0.0, 3.0], vec![2.0, 5.0, 2.0], "").unwrap();
        let g = StepFunction::indicator(0, 12, 1.0).unwrap();
        assert_eq!(modular_step(&g, &p5), 3.0);
    }

    #[test]
    fn modular_step_splits_at_exponent_breakpoints() {
        // g = 2 on [0, 1), p = 1 on [0, 1/2), 3 on [1/2, inf)
        let p = ExponentFunction::new(vec![0.0, 0.5], vec![2.0, 1.0, 3.0], "").unwrap();
        let g = StepFunction::indicator(0, 4, 2.0).unwrap();
        assert!((modular_step(&g, &p) - (2.0 * 0.5 + 8.0 * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn modular_step_matches_rectangle_rule() {
        // oracle: midpoint sums at step 1e-4
        let p = ExponentFunction::new(vec![-0.5, 0.5, 1.5], vec![2.0, 1.5, 3.0, 2.0], "").unwrap();
        let g = StepFunction::new(vec![-3, -1, 1, 3, 5], vec![0.7, 2.0, -1.3, 0.4]).unwrap();
        let h = 1e-4;
        let mut x = -1.0 + h / 2.0;
        let mut sum = 0.0;
        while x < 1.5 {
            sum += g.eval(x).abs().powf(p.eval(x)) * h;
            x += h;
        }
        assert!((modular_step(&g, &p) - sum).abs() < 1e-8);
    }

    #[test]
    fn step_norm_of_indicator() {
        let p2 = ExponentFunction::constant(2.0).unwrap();
        let g = StepFunction::indicator(0, 2, 2.0).unwrap();
        let r = luxemburg_norm_step(&g, &p2, DEFAULT_TOL).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(luxemburg_norm_step(&StepFunction::zero(), &p2, DEFAULT_TOL).unwrap().value, 0.0);
    }

    #[test]
    fn unit_ball_samples() {
        let p = ExponentSequence::new(-2, vec![1.5, 3.0, 2.0, 4.0, 1.2], 2.0).unwrap();
        let w = Window::symmetric(2);
        let single = sample_unit_ball(&p, Window::new(0, 1), 3, 1).unwrap();
        assert_eq!(single, vec![Sequence::basis(0)]);

        let a = sample_unit_ball(&p, w, 11, 20).unwrap();
        let b = sample_unit_ball(&p, w, 11, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(&a[..5], &w.indices().map(Sequence::basis).collect::<Vec<_>>()[..]);
        for s in &a {
            let n = luxemburg_norm_seq(s, &p, DEFAULT_TOL).unwrap().value;
            assert!((n - 1.0).abs() <= 1e-9, "{n}");
        }
        assert_ne!(a, sample_unit_ball(&p, w, 12, 20).unwrap());
        assert!(sample_unit_ball(&p, Window::new(0, 0), 1, 1).is_err());
    }
}
