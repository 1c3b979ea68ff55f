use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::discrete::{discrete_hilbert, HilbertOptions};
use crate::error::Result;
use crate::space::Sequence;
use crate::window::Window;

/// The finite section of `H`: rows indexed by `out`, columns by `input`,
/// entry `1/(n - m)` off the diagonal and 0 on it.
pub fn operator_matrix(input: Window, out: Window) -> DMatrix<f64> {
    DMatrix::from_fn(out.len, input.len, |i, j| {
        let d = (out.start + i as i64) - (input.start + j as i64);
        if d == 0 {
            0.0
        } else {
            1.0 / d as f64
        }
    })
}

/// Largest singular value by dense SVD.
pub fn largest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Largest singular value of the square finite section on `window`, by
/// Lanczos iteration on `A^T A = -A^2` with full reorthogonalization.
/// Matrix-vector products go through the FFT transform, so memory stays
/// linear in the window size.
///
/// Ritz values never exceed the true extreme eigenvalue, so the result is a
/// lower bound that is accurate once `steps` is large enough (a few hundred
/// suffices for windows of a few thousand indices).
pub fn finite_section_norm(window: Window, steps: usize) -> Result<f64> {
    let window = window.require_nonempty()?;
    let dim = window.len;
    let steps = steps.clamp(1, dim);
    let opts = HilbertOptions::fft();
    let apply = |v: &[f64]| -> Result<Vec<f64>> {
        let av = discrete_hilbert(&Sequence::new(window.start, v.to_vec()), window, &opts)?;
        let aav = discrete_hilbert(&av, window, &opts)?;
        Ok(aav.values().iter().map(|x| -x).collect())
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x4c41_4e43);
    let mut q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let q_norm = norm(&q);
    scale(&mut q, 1.0 / q_norm);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    for k in 0..steps {
        let mut w = apply(&q)?;
        let a = dot(&w, &q);
        alpha.push(a);
        axpy(&mut w, -a, &q);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(&mut w, -b, prev);
        }
        basis.push(q);
        // two passes of classical Gram-Schmidt against every previous vector
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                axpy(&mut w, -c, v);
            }
        }
        let b = norm(&w);
        if k + 1 == steps || b <= 1e-12 * alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())) {
            break;
        }
        beta.push(b);
        scale(&mut w, 1.0 / b);
        q = w;
    }

    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let top = SymmetricEigen::new(t).eigenvalues.max();
    Ok(top.max(0.0).sqrt())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: &mut [f64], c: f64) {
    a.iter_mut().for_each(|x| *x *= c);
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += a * x);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_by_two() {
        let m = operator_matrix(Window::new(0, 2), Window::new(0, 2));
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
    }

    #[test]
    fn antisymmetric_on_symmetric_windows() {
        let w = Window::symmetric(6);
        let m = operator_matrix(w, w);
        assert_eq!(m.transpose(), -&m);
    }

    #[test]
    fn matvec_matches_transform() {
        let input = Window::new(-3, 7);
        let out = Window::new(-10, 25);
        let b = Sequence::new(-3, vec![1.0, -0.5, 0.0, 2.0, 0.3, -1.2, 0.7]);
        let y = operator_matrix(input, out) * nalgebra::DVector::from_column_slice(b.values());
        let h = discrete_hilbert(&b, out, &HilbertOptions::direct()).unwrap();
        for (a, c) in y.iter().zip(h.values()) {
            assert!((a - c).abs() < 1e-14);
        }
    }

    #[test]
    fn lanczos_agrees_with_dense_svd() {
        for half in [1, 2, 5, 16, 40] {
            let w = Window::symmetric(half);
            let dense = largest_singular_value(&operator_matrix(w, w));
            let lanczos = finite_section_norm(w, 300).unwrap();
            assert!((dense - lanczos).abs() < 1e-10, "N = {half}: {dense} vs {lanczos}");
            assert!(dense <= PI);
        }
    }

    #[test]
    fn small_sections_match_reference() {
        // reference values from an independent LAPACK SVD
        let w = Window::symmetric(8);
        assert!((largest_singular_value(&operator_matrix(w, w)) - 2.718_550_123_424_644_7).abs() < 1e-10);
        let w = Window::symmetric(16);
        assert!((finite_section_norm(w, 200).unwrap() - 2.902_335_427_632_206).abs() < 1e-10);
    }
}
