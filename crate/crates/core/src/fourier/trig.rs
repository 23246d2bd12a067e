use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// `Σ ĉ(n) e^{2πinx}` over the window `n_min ..= n_min + len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    n_min: i64,
    coeffs: Vec<Complex64>,
    real: bool,
}

/// `e^{2πi n x}` with the phase reduced modulo one before scaling.
pub(crate) fn unit(n: i64, x: f64) -> Complex64 {
    let t = (n as f64 * x).rem_euclid(1.0);
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

impl TrigPolynomial {
    pub fn new(n_min: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite coefficient"));
        }
        let mut p = Self {
            n_min,
            coeffs,
            real: false,
        };
        p.real = p.detect_real();
        Ok(p)
    }

    /// Real-valued polynomial from its coefficients at `n = 0..=N`; the
    /// negative half is filled by conjugation.
    pub fn from_nonnegative_half(half: &[Complex64]) -> Result<Self> {
        if half.is_empty() {
            return Ok(Self::zero());
        }
        let n = half.len() as i64 - 1;
        let mut coeffs: Vec<Complex64> = half[1..].iter().rev().map(|c| c.conj()).collect();
        coeffs.push(Complex64::new(half[0].re, 0.0));
        coeffs.extend_from_slice(&half[1..]);
        let mut p = Self::new(-n, coeffs)?;
        p.real = true;
        Ok(p)
    }

    pub fn zero() -> Self {
        Self {
            n_min: 0,
            coeffs: Vec::new(),
            real: true,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            n_min: 0,
            coeffs: vec![c],
            real: c.im == 0.0,
        }
    }

    fn detect_real(&self) -> bool {
        let n_max = self.n_max();
        if self.coeffs.is_empty() {
            return true;
        }
        if n_max != -self.n_min {
            return false;
        }
        (0..=n_max).all(|n| self.coeff(n) == self.coeff(-n).conj())
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Set when `ĉ(-n) = conj ĉ(n)` holds exactly.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < self.n_min || n > self.n_max() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n - self.n_min) as usize]
    }

    /// `(min |n|, max |n|)` over the nonzero coefficients.
    pub fn support_extent(&self) -> Option<(u64, u64)> {
        let mut out: Option<(u64, u64)> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != Complex64::new(0.0, 0.0) {
                let a = (self.n_min + i as i64).unsigned_abs();
                out = Some(match out {
                    None => (a, a),
                    Some((lo, hi)) => (lo.min(a), hi.max(a)),
                });
            }
        }
        out
    }

    /// `S_n` evaluated at `x`: the sum over `|m| <= n`.
    pub fn partial_sum(&self, n: u64, x: f64) -> Complex64 {
        let n = n.min(i64::MAX as u64) as i64;
        let lo = self.n_min.max(-n);
        let hi = self.n_max().min(n);
        if lo > hi {
            return Complex64::new(0.0, 0.0);
        }
        if self.real && lo == -hi {
            let mut acc = self.coeff(0).re;
            for m in 1..=hi {
                acc += 2.0 * (self.coeff(m) * unit(m, x)).re;
            }
            return Complex64::new(acc, 0.0);
        }
        (lo..=hi).map(|m| self.coeff(m) * unit(m, x)).sum()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.partial_sum(u64::MAX, x)
    }

    /// Values at `l / len` for `l = 0..len`; `len` must exceed the spectral
    /// width so no two frequencies alias.
    pub fn dense_values(&self, len: usize) -> Result<Vec<Complex64>> {
        let width = self.n_max().unsigned_abs().max(self.n_min.unsigned_abs());
        if (len as u64) <= 2 * width {
            return Err(Error::domain(format!(
                "grid of {len} points aliases frequencies up to {width}"
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let n = self.n_min + i as i64;
            buf[n.rem_euclid(len as i64) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
        Ok(buf)
    }

    /// The coefficients with `|n| <= n`.
    pub fn truncated(&self, n: u64) -> Self {
        let n = n.min(i64::MAX as u64) as i64;
        let lo = self.n_min.max(-n);
        let hi = self.n_max().min(n);
        if lo > hi {
            return Self::zero();
        }
        Self {
            n_min: lo,
            coeffs: (lo..=hi).map(|m| self.coeff(m)).collect(),
            real: self.real,
        }
    }

    /// `Σ |ĉ(n)|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n_min: self.n_min,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
            real: self.real,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        let coeffs = (lo..=hi).map(|n| self.coeff(n) + other.coeff(n)).collect();
        Self {
            n_min: lo,
            coeffs,
            real: self.real && other.real && self.n_min == other.n_min && lo == -hi,
        }
    }
}

/// `L^p` norm from values on a uniform grid.
pub fn grid_lp_norm(values: &[Complex64], p: f64) -> f64 {
    let n = values.len() as f64;
    (values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}
