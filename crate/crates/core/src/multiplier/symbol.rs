use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::hilbert_symbol;

/// A multiplier `m(xi)` on the frequency circle `[-1/2, 1/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    kind: SymbolKind,
    /// A known constant in the Mikhlin condition, if any.
    pub bound_b: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolKind {
    /// `m = 1`.
    One,
    /// `m = e^{-2 pi i k xi}`, which delays a sequence by `k`.
    Shift(i64),
    /// `m = -i sgn(xi)`.
    Sgn,
    /// `m = |xi|^{i tau}`.
    RieszTau(f64),
    /// `m = xi`.
    Linear,
    /// `m = -i pi (sgn(xi) - 2 xi)`, the symbol of the discrete Hilbert transform.
    Hilbert,
    /// Pointwise product.
    Product(Vec<Symbol>),
    Grid(GridSymbol),
}

/// What is known about the Mikhlin condition for the symbol viewed as a
/// function on all of ℝ rather than on the sampled circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealLineVerdict {
    Mikhlin,
    NotMikhlin,
    Unknown,
}

impl Symbol {
    pub fn new(kind: SymbolKind) -> Self {
        let bound_b = match &kind {
            SymbolKind::One | SymbolKind::Sgn => Some(1.0),
            SymbolKind::RieszTau(tau) => Some(riesz_constant(*tau)),
            _ => None,
        };
        Symbol { kind, bound_b }
    }

    pub fn one() -> Self {
        Symbol::new(SymbolKind::One)
    }

    pub fn shift(k: i64) -> Self {
        Symbol::new(SymbolKind::Shift(k))
    }

    pub fn sgn() -> Self {
        Symbol::new(SymbolKind::Sgn)
    }

    pub fn riesz(tau: f64) -> Self {
        Symbol::new(SymbolKind::RieszTau(tau))
    }

    pub fn linear() -> Self {
        Symbol::new(SymbolKind::Linear)
    }

    pub fn hilbert() -> Self {
        Symbol::new(SymbolKind::Hilbert)
    }

    pub fn product(factors: Vec<Symbol>) -> Self {
        Symbol::new(SymbolKind::Product(factors))
    }

    /// Parses a registry name: `one`, `shift`, `shift:<k>`, `sgn`,
    /// `riesz_tau:<tau>`, `linear`, `hilbert` or `grid:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let bad_arg = || Error::UnknownSymbol(spec.to_string());
        match (head, arg) {
            ("one", None) => Ok(Symbol::one()),
            ("shift", None) => Ok(Symbol::shift(1)),
            ("shift", Some(k)) => Ok(Symbol::shift(k.parse().map_err(|_| bad_arg())?)),
            ("sgn", None) => Ok(Symbol::sgn()),
            ("riesz_tau", Some(t)) => {
                let tau: f64 = t.parse().map_err(|_| bad_arg())?;
                if !tau.is_finite() {
                    return Err(bad_arg());
                }
                Ok(Symbol::riesz(tau))
            }
            ("linear", None) => Ok(Symbol::linear()),
            ("hilbert", None) => Ok(Symbol::hilbert()),
            ("grid", Some(path)) => Ok(Symbol::new(SymbolKind::Grid(GridSymbol::from_file(path)?))),
            _ => Err(bad_arg()),
        }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SymbolKind::One => "one".into(),
            SymbolKind::Shift(1) => "shift".into(),
            SymbolKind::Shift(k) => format!("shift:{k}"),
            SymbolKind::Sgn => "sgn".into(),
            SymbolKind::RieszTau(t) => format!("riesz_tau:{t}"),
            SymbolKind::Linear => "linear".into(),
            SymbolKind::Hilbert => "hilbert".into(),
            SymbolKind::Product(f) => f.iter().map(Symbol::name).collect::<Vec<_>>().join("*"),
            SymbolKind::Grid(g) => format!("grid[{} samples]", g.len()),
        }
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        match &self.kind {
            SymbolKind::One => Complex64::new(1.0, 0.0),
            SymbolKind::Shift(k) => Complex64::from_polar(1.0, -2.0 * PI * *k as f64 * xi),
            SymbolKind::Sgn => Complex64::new(0.0, -signum(xi)),
            SymbolKind::RieszTau(tau) => {
                if xi == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, tau * xi.abs().ln())
                }
            }
            SymbolKind::Linear => Complex64::new(xi, 0.0),
            SymbolKind::Hilbert => hilbert_symbol(xi),
            SymbolKind::Product(f) => f.iter().map(|s| s.eval(xi)).product(),
            SymbolKind::Grid(g) => g.eval(xi),
        }
    }

    /// `d^order m / d xi^order` at `xi != 0`, when known in closed form.
    pub fn derivative(&self, xi: f64, order: u32) -> Option<Complex64> {
        if order == 0 {
            return Some(self.eval(xi));
        }
        let zero = Complex64::new(0.0, 0.0);
        match &self.kind {
            SymbolKind::One | SymbolKind::Sgn => Some(zero),
            SymbolKind::Shift(k) => {
                let c = Complex64::new(0.0, -2.0 * PI * *k as f64);
                Some(c.powu(order) * self.eval(xi))
            }
            SymbolKind::RieszTau(tau) => {
                // d^j/dxi^j |xi|^{i tau} = (i tau)(i tau - 1)...(i tau - j + 1) xi^{-j} |xi|^{i tau}
                let it = Complex64::new(0.0, *tau);
                let falling: Complex64 = (0..order).map(|j| it - j as f64).product();
                Some(falling * xi.powi(-(order as i32)) * self.eval(xi))
            }
            SymbolKind::Linear => Some(if order == 1 { Complex64::new(1.0, 0.0) } else { zero }),
            SymbolKind::Hilbert => Some(if order == 1 { Complex64::new(0.0, 2.0 * PI) } else { zero }),
            SymbolKind::Product(_) | SymbolKind::Grid(_) => None,
        }
    }

    /// Coefficients `c_k` with `m(xi) = sum_k c_k e^{-2 pi i k xi}` when the
    /// symbol is a trigonometric polynomial; then `(T_m b)_n = sum_k c_k b_{n-k}`.
    pub fn trig_coefficients(&self) -> Option<Vec<(i64, Complex64)>> {
        match &self.kind {
            SymbolKind::One => Some(vec![(0, Complex64::new(1.0, 0.0))]),
            SymbolKind::Shift(k) => Some(vec![(*k, Complex64::new(1.0, 0.0))]),
            SymbolKind::Product(factors) => {
                let mut acc = vec![(0i64, Complex64::new(1.0, 0.0))];
                for f in factors {
                    let c = f.trig_coefficients()?;
                    let mut next: Vec<(i64, Complex64)> = Vec::new();
                    for &(i, a) in &acc {
                        for &(j, b) in &c {
                            match next.iter_mut().find(|(k, _)| *k == i + j) {
                                Some(slot) => slot.1 += a * b,
                                None => next.push((i + j, a * b)),
                            }
                        }
                    }
                    next.sort_by_key(|&(k, _)| k);
                    acc = next;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    pub fn real_line_verdict(&self) -> RealLineVerdict {
        match &self.kind {
            SymbolKind::One | SymbolKind::Sgn | SymbolKind::RieszTau(_) | SymbolKind::Shift(0) => {
                RealLineVerdict::Mikhlin
            }
            // unbounded, or with derivatives growing like |xi|^j
            SymbolKind::Linear | SymbolKind::Shift(_) | SymbolKind::Hilbert => RealLineVerdict::NotMikhlin,
            SymbolKind::Product(f) => {
                if f.iter().all(|s| s.real_line_verdict() == RealLineVerdict::Mikhlin) {
                    RealLineVerdict::Mikhlin
                } else {
                    RealLineVerdict::Unknown
                }
            }
            SymbolKind::Grid(_) => RealLineVerdict::Unknown,
        }
    }
}

fn signum(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `max_{j <= 3} |(i tau)(i tau - 1)...(i tau - j + 1)|`.
fn riesz_constant(tau: f64) -> f64 {
    let it = Complex64::new(0.0, tau);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut best = 1.0f64;
    for j in 0..3 {
        acc *= it - j as f64;
        best = best.max(acc.norm());
    }
    best
}

/// A symbol given by samples `(xi, m(xi))`, interpolated by a natural cubic
/// spline on each side of the origin separately (symbols may jump at 0).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSymbol {
    negative: Spline,
    positive: Spline,
}

impl GridSymbol {
    /// Needs at least two samples on each side of 0; samples at 0 are ignored.
    pub fn new(mut samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.iter().any(|(x, v)| !x.is_finite() || !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Parse("grid symbol samples must be finite".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("grid symbol has repeated frequencies".into()));
        }
        let neg: Vec<_> = samples.iter().copied().filter(|s| s.0 < 0.0).collect();
        let pos: Vec<_> = samples.iter().copied().filter(|s| s.0 > 0.0).collect();
        if neg.len() < 2 || pos.len() < 2 {
            return Err(Error::Parse("grid symbol needs at least two samples on each side of 0".into()));
        }
        Ok(GridSymbol { negative: Spline::new(&neg), positive: Spline::new(&pos) })
    }

    /// Reads a JSON array of `[xi, re, im]` triples.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let triples: Vec<[f64; 3]> = serde_json::from_str(&text)?;
        GridSymbol::new(triples.into_iter().map(|[x, re, im]| (x, Complex64::new(re, im))).collect())
    }

    pub fn len(&self) -> usize {
        self.negative.xs.len() + self.positive.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        if xi < 0.0 {
            self.negative.eval(xi)
        } else if xi > 0.0 {
            self.positive.eval(xi)
        } else {
            0.5 * (self.negative.eval(xi) + self.positive.eval(xi))
        }
    }
}

/// Natural cubic spline through complex samples, clamped outside the sample range.
#[derive(Clone, Debug, PartialEq)]
struct Spline {
    xs: Vec<f64>,
    ys: Vec<Complex64>,
    /// Second derivatives at the knots.
    m: Vec<Complex64>,
}

impl Spline {
    fn new(samples: &[(f64, Complex64)]) -> Self {
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
        let n = xs.len();
        let mut m = vec![Complex64::new(0.0, 0.0); n];
        if n > 2 {
            // Thomas algorithm for the interior second derivatives.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![Complex64::new(0.0, 0.0); k];
            let mut upper = vec![0.0; k];
            for i in 0..k {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            for i in 1..k {
                let lower = xs[i + 1] - xs[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                let prev = rhs[i - 1];
                rhs[i] -= prev * w;
            }
            let mut sol = vec![Complex64::new(0.0, 0.0); k];
            sol[k - 1] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                sol[i] = (rhs[i] - sol[i + 1] * upper[i]) / diag[i];
            }
            m[1..n - 1].copy_from_slice(&sol);
        }
        Spline { xs, ys, m }
    }

    fn eval(&self, x: f64) -> Complex64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.xs.partition_point(|&k| k <= x) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        self.ys[i] * a
            + self.ys[i + 1] * b
            + (self.m[i] * (a * a * a - a) + self.m[i + 1] * (b * b * b - b)) * (h * h / 6.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        for name in ["one", "shift", "sgn", "riesz_tau:1", "linear", "hilbert", "shift:-3"] {
            assert_eq!(Symbol::parse(name).unwrap().name(), name);
        }
        assert!(matches!(Symbol::parse("bogus"), Err(Error::UnknownSymbol(_))));
        assert!(Symbol::parse("riesz_tau:x").is_err());
        assert!(Symbol::parse("riesz_tau").is_err());
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let h = 1e-5;
        for s in [Symbol::shift(1), Symbol::riesz(1.0), Symbol::riesz(-2.5), Symbol::linear(), Symbol::hilbert()] {
            for &xi in &[-0.37, -0.1, 0.05, 0.3] {
                for order in 1..=3u32 {
                    let fd = match order {
                        1 => (s.eval(xi + h) - s.eval(xi - h)) / (2.0 * h),
                        2 => (s.derivative(xi + h, 1).unwrap() - s.derivative(xi - h, 1).unwrap()) / (2.0 * h),
                        _ => (s.derivative(xi + h, 2).unwrap() - s.derivative(xi - h, 2).unwrap()) / (2.0 * h),
                    };
                    let exact = s.derivative(xi, order).unwrap();
                    assert!((fd - exact).norm() < 1e-4 * (1.0 + exact.norm()), "{} order {order} at {xi}", s.name());
                }
            }
        }
    }

    #[test]
    fn product_of_trig_polynomials() {
        let p = Symbol::product(vec![Symbol::shift(2), Symbol::shift(-1), Symbol::one()]);
        assert_eq!(p.trig_coefficients().unwrap(), vec![(1, Complex64::new(1.0, 0.0))]);
        assert!(Symbol::product(vec![Symbol::shift(1), Symbol::sgn()]).trig_coefficients().is_none());
        let xi = 0.123;
        assert!((p.eval(xi) - Symbol::shift(1).eval(xi)).norm() < 1e-15);
    }

    #[test]
    fn spline_reproduces_cubics() {
        // natural splines are exact for linear data
        let samples: Vec<_> = (1..=20)
            .flat_map(|i| {
                let x = i as f64 / 40.0;
                [(x, Complex64::new(2.0 * x + 1.0, -x)), (-x, Complex64::new(-3.0 * x, 0.5))]
            })
            .collect();
        let g = GridSymbol::new(samples).unwrap();
        for &x in &[0.031, 0.2, 0.4444] {
            assert!((g.eval(x) - Complex64::new(2.0 * x + 1.0, -x)).norm() < 1e-12);
            assert!((g.eval(-x) - Complex64::new(-3.0 * x, 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_needs_both_sides() {
        let one_sided = vec![(0.1, Complex64::new(1.0, 0.0)), (0.2, Complex64::new(1.0, 0.0))];
        assert!(GridSymbol::new(one_sided).is_err());
    }
}
