use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;
use crate::window::Window;

/// A finitely supported two-sided sequence: `values[i]` sits at index
/// `window_start + i`, every other entry is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence<T: Scalar = f64> {
    window_start: i64,
    values: Vec<T>,
}

pub type ComplexSequence = Sequence<Complex64>;

impl<T: Scalar> Sequence<T> {
    pub fn new(window_start: i64, values: Vec<T>) -> Self {
        Sequence { window_start, values }
    }

    pub fn zeros(window: Window) -> Self {
        Sequence { window_start: window.start, values: vec![T::zero(); window.len] }
    }

    pub fn from_fn(window: Window, f: impl FnMut(i64) -> T) -> Self {
        Sequence { window_start: window.start, values: window.indices().map(f).collect() }
    }

    pub fn window(&self) -> Window {
        Window::new(self.window_start, self.values.len())
    }

    pub fn window_start(&self) -> i64 {
        self.window_start
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, n: i64) -> T {
        let offset = n - self.window_start;
        if offset >= 0 && (offset as usize) < self.values.len() {
            self.values[offset as usize]
        } else {
            T::zero()
        }
    }

    /// `(index, value)` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.window_start + i as i64, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == T::zero())
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != T::zero()).count()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// `(S^k b)_n = b_{n-k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Sequence { window_start: self.window_start + k, values: self.values.clone() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Sequence { window_start: self.window_start, values: self.values.iter().map(|&v| v * c).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Sequence<U> {
        Sequence { window_start: self.window_start, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Values on `window`, zero-filled where nothing is stored.
    pub fn restrict(&self, window: Window) -> Self {
        Sequence::from_fn(window, |n| self.get(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let w = self.window().hull(&other.window());
        Sequence::from_fn(w, |n| self.get(n) + other.get(n))
    }

    pub fn to_complex(&self) -> ComplexSequence {
        self.map(Scalar::to_complex)
    }
}

impl Sequence<f64> {
    pub fn basis(n: i64) -> Self {
        Sequence { window_start: n, values: vec![1.0] }
    }

    /// `sum_n b_n c_n`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.iter().map(|(n, v)| v * other.get(n)).sum()
    }

    /// The classical `l^q` norm.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

impl Sequence<Complex64> {
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real parts, provided every imaginary part is within `tol` of zero.
    pub fn to_real(&self, tol: f64) -> Option<Sequence<f64>> {
        self.values.iter().all(|v| v.im.abs() <= tol).then(|| self.map(|v| v.re))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    window_start: i64,
    values: Vec<EntryRepr>,
}

impl Serialize for Sequence<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SequenceRepr {
            window_start: self.window_start,
            values: self.values.iter().map(|&v| EntryRepr::Real(v)).collect(),
        }
        .serialize(s)
    }
}

impl Serialize for Sequence<Complex64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SequenceRepr {
            window_start: self.window_start,
            values: self.values.iter().map(|v| EntryRepr::Complex([v.re, v.im])).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sequence<Complex64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SequenceRepr::deserialize(d)?;
        let values = repr
            .values
            .into_iter()
            .map(|e| match e {
                EntryRepr::Real(re) => Complex64::new(re, 0.0),
                EntryRepr::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        Ok(Sequence { window_start: repr.window_start, values })
    }
}

impl<'de> Deserialize<'de> for Sequence<f64> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SequenceRepr::deserialize(d)?;
        let values = repr
            .values
            .into_iter()
            .enumerate()
            .map(|(i, e)| match e {
                EntryRepr::Real(re) => Ok(re),
                EntryRepr::Complex([re, 0.0]) => Ok(re),
                EntryRepr::Complex(_) => Err(D::Error::custom(format!("values[{i}] has a nonzero imaginary part"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sequence { window_start: repr.window_start, values })
    }
}
