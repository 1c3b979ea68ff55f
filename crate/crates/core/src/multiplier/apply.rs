use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::symbol::Symbol;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{ComplexSequence, Sequence};
use crate::window::Window;

/// Cell-centre frequencies `xi_k = (k + 1/2)/G - 1/2`, `k = 0..G`.
/// For even `G` none of them is 0.
pub fn frequency_grid(grid_size: usize) -> impl Iterator<Item = f64> {
    let g = grid_size as f64;
    (0..grid_size).map(move |k| (k as f64 + 0.5) / g - 0.5)
}

/// Smallest admissible grid for an input window of length `len`.
pub fn min_grid_size(len: usize) -> usize {
    (2 * len).max(2).next_power_of_two()
}

/// The output window for an input window and grid size: the input window
/// widened by `(G - len) / 2` on each side, never longer than one period.
pub fn output_window(input: Window, grid_size: usize) -> Window {
    input.pad((grid_size - input.len) / 2)
}

/// `T_m b`: the inverse transform of `m * b^`, with `b^(xi) = sum_n b_n e^{-2 pi i n xi}`.
///
/// Trigonometric-polynomial symbols are applied as exact finite
/// convolutions. All others are sampled at the cell centres of a uniform
/// grid of `grid_size` frequencies and applied through an FFT, which
/// replaces the coefficients of `m` by their `G`-periodic aliases.
pub fn apply_multiplier<T: Scalar>(m: &Symbol, b: &Sequence<T>, grid_size: usize) -> Result<ComplexSequence> {
    let input = b.window();
    let required = min_grid_size(input.len);
    if grid_size < required || !grid_size.is_power_of_two() {
        return Err(Error::GridTooSmall { grid: grid_size, required });
    }
    let out = output_window(input, grid_size);
    let b = b.to_complex();

    if let Some(coeffs) = m.trig_coefficients() {
        return Ok(Sequence::from_fn(out, |n| {
            coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &(k, c)| acc + c * b.get(n - k))
        }));
    }

    let samples: Vec<Complex64> = frequency_grid(grid_size)
        .map(|xi| {
            let v = m.eval(xi);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::UnboundedSymbol { xi })
            }
        })
        .collect::<Result<_>>()?;

    let g = grid_size as i64;
    // e^{-2 pi i n xi_k} = e^{-2 pi i n k / G} * phase(n), phase(n) = (-1)^n e^{-i pi n / G}
    let phase = |n: i64| {
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign, -PI * n as f64 / grid_size as f64)
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
    for (n, v) in b.iter() {
        buf[n.rem_euclid(g) as usize] += v * phase(n);
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(grid_size).process(&mut buf);
    for (x, s) in buf.iter_mut().zip(&samples) {
        *x *= *s;
    }
    planner.plan_fft_inverse(grid_size).process(&mut buf);
    let scale = 1.0 / grid_size as f64;
    Ok(Sequence::from_fn(out, |n| buf[n.rem_euclid(g) as usize] * phase(n).conj() * scale))
}

/// `max_k |m(xi_k)|` over the frequency grid.
pub fn sup_on_grid(m: &Symbol, grid_size: usize) -> f64 {
    frequency_grid(grid_size).map(|xi| m.eval(xi).norm()).fold(0.0, f64::max)
}
