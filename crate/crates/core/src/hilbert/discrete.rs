use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::Sequence;
use crate::window::Window;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HilbertMethod {
    /// Exact O(|out| * |b|) summation.
    Direct,
    /// Zero-padded FFT convolution.
    #[default]
    Fft,
}

impl FromStr for HilbertMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(HilbertMethod::Direct),
            "fft" => Ok(HilbertMethod::Fft),
            other => Err(Error::Parse(format!("unknown method `{other}`, expected direct or fft"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertOptions {
    pub method: HilbertMethod,
    /// How far beyond the input window the output is materialized when no
    /// explicit output window is given.
    pub fft_padding: usize,
}

impl HilbertOptions {
    pub fn direct() -> Self {
        HilbertOptions { method: HilbertMethod::Direct, fft_padding: 0 }
    }

    pub fn fft() -> Self {
        HilbertOptions { method: HilbertMethod::Fft, fft_padding: 0 }
    }

    /// The input window widened by `fft_padding`.
    pub fn default_window(&self, b_window: Window) -> Window {
        b_window.pad(self.fft_padding)
    }
}

#[inline]
fn kernel(k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        1.0 / k as f64
    }
}

/// `(Hb)_n` for every `n` in `out`.
pub fn discrete_hilbert<T: Scalar>(b: &Sequence<T>, out: Window, opts: &HilbertOptions) -> Result<Sequence<T>> {
    let out = out.require_nonempty()?;
    if b.window().is_empty() {
        return Ok(Sequence::zeros(out));
    }
    Ok(match opts.method {
        HilbertMethod::Direct => direct(b, out),
        HilbertMethod::Fft => via_fft(b, out),
    })
}

fn direct<T: Scalar>(b: &Sequence<T>, out: Window) -> Sequence<T> {
    let row = |n: i64| {
        let mut acc = T::zero();
        for (m, v) in b.iter() {
            if m != n {
                acc += v * (1.0 / (n - m) as f64);
            }
        }
        acc
    };
    let values: Vec<T> = if out.len * b.window().len > 1 << 16 {
        out.indices().into_par_iter().map(row).collect()
    } else {
        out.indices().map(row).collect()
    };
    Sequence::new(out.start, values)
}

fn via_fft<T: Scalar>(b: &Sequence<T>, out: Window) -> Sequence<T> {
    let l = b.window().len;
    let k = out.len;
    // Kernel samples g_t = h(d0 - (l - 1) + t) for t < k + l - 1, so that
    // (Hb)_{out.start + i} = (b * g)_{i + l - 1}. A circular length of at
    // least k + l - 1 keeps every needed output free of wrap-around.
    let d0 = out.start - b.window_start();
    let size = (k + l).next_power_of_two();
    let mut signal = vec![Complex64::new(0.0, 0.0); size];
    for (slot, &v) in signal.iter_mut().zip(b.values()) {
        *slot = v.to_complex();
    }
    let mut taps = vec![Complex64::new(0.0, 0.0); size];
    for (t, slot) in taps.iter_mut().take(k + l - 1).enumerate() {
        *slot = Complex64::new(kernel(d0 - (l as i64 - 1) + t as i64), 0.0);
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);
    forward.process(&mut signal);
    forward.process(&mut taps);
    for (s, t) in signal.iter_mut().zip(&taps) {
        *s *= *t;
    }
    inverse.process(&mut signal);
    let scale = 1.0 / size as f64;
    let values = (0..k).map(|i| T::from_complex(signal[i + l - 1] * scale)).collect();
    Sequence::new(out.start, values)
}

/// The Fourier symbol of `H` on `(-1/2, 1/2)`: `-i pi (sgn(xi) - 2 xi)`, with
/// the convention `b^(xi) = sum_n b_n e^{-2 pi i n xi}`.
pub fn hilbert_symbol(xi: f64) -> Complex64 {
    let s = if xi > 0.0 {
        1.0
    } else if xi < 0.0 {
        -1.0
    } else {
        0.0
    };
    Complex64::new(0.0, -PI * (s - 2.0 * xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vector_gives_reciprocals() {
        let out = Window::symmetric(4);
        for opts in [HilbertOptions::direct(), HilbertOptions::fft()] {
            let h = discrete_hilbert(&Sequence::basis(0), out, &opts).unwrap();
            let expected = [-0.25, -1.0 / 3.0, -0.5, -1.0, 0.0, 1.0, 0.5, 1.0 / 3.0, 0.25];
            for (got, want) in h.values().iter().zip(expected) {
                assert!((got - want).abs() < 1e-14, "{opts:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn two_point_sums() {
        let b = Sequence::new(-1, vec![1.0, 0.0, 1.0]);
        let h = discrete_hilbert(&b, Window::symmetric(1), &HilbertOptions::direct()).unwrap();
        assert_eq!(h.values(), &[-0.5, 0.0, 0.5]);
    }

    #[test]
    fn empty_cases() {
        let b: Sequence = Sequence::new(0, vec![]);
        let h = discrete_hilbert(&b, Window::new(0, 3), &HilbertOptions::fft()).unwrap();
        assert_eq!(h.values(), &[0.0; 3]);
        assert!(matches!(
            discrete_hilbert(&Sequence::basis(0), Window::new(0, 0), &HilbertOptions::direct()),
            Err(Error::EmptyWindow)
        ));
    }

    #[test]
    fn fft_matches_direct_on_offset_windows() {
        let b = Sequence::new(7, (0..37).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect());
        for out in [Window::new(-50, 20), Window::new(0, 100), Window::new(40, 3), Window::new(10, 1)] {
            let d = discrete_hilbert(&b, out, &HilbertOptions::direct()).unwrap();
            let f = discrete_hilbert(&b, out, &HilbertOptions::fft()).unwrap();
            for (x, y) in d.values().iter().zip(f.values()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_equivariance() {
        let b = Sequence::new(-3, vec![0.5, -1.0, 2.0, 0.25]);
        let out = Window::symmetric(10);
        let h = discrete_hilbert(&b, out, &HilbertOptions::direct()).unwrap();
        let hs = discrete_hilbert(&b.shifted(5), Window::new(out.start + 5, out.len), &HilbertOptions::direct()).unwrap();
        assert_eq!(h.values(), hs.values());
    }

    #[test]
    fn complex_input() {
        let b = Sequence::new(0, vec![Complex64::new(0.0, 1.0)]);
        let h = discrete_hilbert(&b, Window::new(1, 1), &HilbertOptions::fft()).unwrap();
        assert!((h.values()[0] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn symbol_values() {
        assert!((hilbert_symbol(0.25) - Complex64::new(0.0, -PI / 2.0)).norm() < 1e-15);
        assert!((hilbert_symbol(-0.25) - Complex64::new(0.0, PI / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("fft".parse::<HilbertMethod>().unwrap(), HilbertMethod::Fft);
        assert!("fast".parse::<HilbertMethod>().is_err());
    }
}
