//! Independent reference computations. Nothing here calls into the
//! library's numerical routines.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// `sum_{m != n} b_m / (n - m)` by plain summation; `b[i]` sits at `start + i`.
pub fn hilbert_sum(start: i64, b: &[f64], n: i64) -> f64 {
    b.iter()
        .enumerate()
        .map(|(i, v)| {
            let m = start + i as i64;
            if m == n {
                0.0
            } else {
                v / (n - m) as f64
            }
        })
        .sum()
}

/// `inf { lambda : rho(lambda) <= 1 }` for a modular that is decreasing in
/// `lambda`, by bisection until the bracket is relatively below 1e-15.
pub fn bisect_norm(rho: impl Fn(f64) -> f64) -> f64 {
    let mut hi = 1.0f64;
    while rho(hi) > 1.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while rho(lo) <= 1.0 {
        lo /= 2.0;
    }
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if rho(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// The classical `l^q` norm.
pub fn lq_norm(b: &[f64], q: f64) -> f64 {
    let max = b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    max * b.iter().map(|v| (v.abs() / max).powf(q)).sum::<f64>().powf(1.0 / q)
}

pub fn l2(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `(1/pi) p.v. int f(t) / (x - t) dt` for `f` constant equal to `v` on each
/// `(lo, hi, v)`. Inside a piece the interval symmetric about `x` is dropped,
/// which is exact for the principal value of a constant; the rest is
/// integrated by adaptive Simpson.
pub fn pv_hilbert_pieces(pieces: &[(f64, f64, f64)], x: f64, tol: f64) -> f64 {
    let kernel = |t: f64| 1.0 / (x - t);
    let mut total = 0.0;
    for &(lo, hi, v) in pieces {
        if v == 0.0 {
            continue;
        }
        if x > lo && x < hi {
            let d = (x - lo).min(hi - x);
            total += v * simpson(&kernel, lo, x - d, tol);
            total += v * simpson(&kernel, x + d, hi, tol);
        } else {
            total += v * simpson(&kernel, lo, hi, tol);
        }
    }
    total / PI
}

/// Midpoint rule with step `h` on `[a, b]`.
pub fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, h: f64) -> f64 {
    let n = ((b - a) / h).round() as usize;
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Fourier coefficient `int_{-1/2}^{1/2} -i sgn(xi) e^{2 pi i n xi} d xi`, which is real.
pub fn sgn_coefficient(n: i64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (1.0 - (-1f64).powi((n % 2) as i32)) / (PI * n as f64)
    }
}
