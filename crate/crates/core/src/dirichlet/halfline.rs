use crate::error::{Error, Result};
use num_complex::Complex64;

/// Piece layout of a [`HalfLineFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// Piece `i` is `[i, i + 1)`.
    Unit,
    /// Piece `i` is `[log(i + 1), log(i + 2))`.
    Log,
    /// Explicit increasing breakpoints, one more than the number of pieces.
    Breakpoints(Vec<f64>),
}

/// Piecewise-constant complex function on a union of consecutive intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineFunction {
    layout: Layout,
    values: Vec<Complex64>,
}

/// `∫_a^{a+len} e^{itu} du` without cancellation for small `t·len`.
pub fn segment_integral(a: f64, len: f64, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(len, 0.0);
    }
    let theta = t * len;
    // (e^{iθ} - 1)/(iθ) = sin θ/θ + i·2 sin²(θ/2)/θ
    let half = (0.5 * theta).sin();
    let shape = if theta.abs() < 1e-8 {
        Complex64::new(1.0 - theta * theta / 6.0, 0.5 * theta)
    } else {
        Complex64::new(theta.sin() / theta, 2.0 * half * half / theta)
    };
    Complex64::from_polar(len, t * a) * shape
}

impl HalfLineFunction {
    pub fn unit_grid(values: Vec<Complex64>) -> Result<Self> {
        Self::checked(Layout::Unit, values)
    }

    pub fn log_grid(values: Vec<Complex64>) -> Result<Self> {
        Self::checked(Layout::Log, values)
    }

    pub fn new(breakpoints: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::domain(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::domain("breakpoints must be finite and increasing"));
        }
        Self::checked(Layout::Breakpoints(breakpoints), values)
    }

    fn checked(layout: Layout, values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite piece value"));
        }
        Ok(Self { layout, values })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    /// Left end of piece `i`; `breakpoint(pieces())` closes the support.
    pub fn breakpoint(&self, i: usize) -> f64 {
        match &self.layout {
            Layout::Unit => i as f64,
            Layout::Log => ((i + 1) as f64).ln(),
            Layout::Breakpoints(b) => b[i],
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        (0..=self.pieces()).map(|i| self.breakpoint(i)).collect()
    }

    /// Length of piece `i`, computed without subtracting breakpoints for the
    /// log grid.
    pub fn piece_length(&self, i: usize) -> f64 {
        match &self.layout {
            Layout::Unit => 1.0,
            Layout::Log => (1.0 / (i + 1) as f64).ln_1p(),
            Layout::Breakpoints(b) => b[i + 1] - b[i],
        }
    }

    pub fn support_start(&self) -> f64 {
        self.breakpoint(0)
    }

    pub fn support_end(&self) -> f64 {
        self.breakpoint(self.pieces())
    }

    pub fn norm_l2(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm_sqr() * self.piece_length(i))
            .sum::<f64>()
            .sqrt()
    }

    /// Zero outside the support.
    pub fn value_at(&self, u: f64) -> Complex64 {
        let n = self.pieces();
        if n == 0 || !(u >= self.support_start() && u < self.support_end()) {
            return Complex64::new(0.0, 0.0);
        }
        let i = match &self.layout {
            Layout::Unit => u.floor() as usize,
            Layout::Log => (u.exp().floor() as usize).saturating_sub(1),
            Layout::Breakpoints(b) => b.partition_point(|&x| x <= u) - 1,
        };
        // exp/floor may land one piece off near a log breakpoint
        let mut i = i.min(n - 1);
        while i > 0 && u < self.breakpoint(i) {
            i -= 1;
        }
        while i + 1 < n && u >= self.breakpoint(i + 1) {
            i += 1;
        }
        self.values[i]
    }

    /// `∫_lo^hi G(u) e^{itu} du` in closed form, piece by piece.
    fn integral_over(&self, lo: f64, hi: f64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, v) in self.values.iter().enumerate() {
            let a = self.breakpoint(i);
            if a >= hi {
                break;
            }
            if *v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let b = self.breakpoint(i + 1);
            if b <= lo {
                continue;
            }
            let (s, len) = if a >= lo && b <= hi {
                (a, self.piece_length(i))
            } else {
                let (s, e) = (a.max(lo), b.min(hi));
                (s, e - s)
            };
            acc += v * segment_integral(s, len, t);
        }
        acc
    }

    /// `∫_0^R F(u) e^{itu} du`.
    pub fn partial_integral(&self, r: f64, t: f64) -> Result<Complex64> {
        let end = self.support_end();
        if !(r >= 0.0 && r <= end * (1.0 + 1e-15)) {
            return Err(Error::domain(format!("R = {r} outside [0, {end}]")));
        }
        Ok(self.integral_over(0.0, r, t))
    }

    /// `Ĝ_R(ξ) = ∫_{-R}^{R} G(u) e^{iξu} du`.
    pub fn truncated_transform(&self, r: f64, xi: f64) -> Complex64 {
        self.integral_over(-r, r, xi)
    }
}

/// `fi_partial_integral` in free-function form.
pub fn fi_partial_integral(f: &HalfLineFunction, r: f64, t: f64) -> Result<Complex64> {
    f.partial_integral(r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn indicator_integrals() {
        let f = HalfLineFunction::unit_grid(vec![one()]).unwrap();
        assert_eq!(f.partial_integral(1.0, 0.0).unwrap(), one());
        assert!(f.partial_integral(1.0, TAU).unwrap().norm() < 1e-15);
        let r = 0.7;
        let t = 2.3;
        let expected = (Complex64::new(0.0, t * r).exp() - 1.0) / Complex64::new(0.0, t);
        assert!((f.partial_integral(r, t).unwrap() - expected).norm() < 1e-15);
        assert!(f.partial_integral(1.5, 0.0).is_err());
        assert!(f.partial_integral(-0.1, 0.0).is_err());
    }

    #[test]
    fn log_grid_lengths() {
        let g = HalfLineFunction::log_grid(vec![one(); 3]).unwrap();
        assert!((g.support_end() - 4f64.ln()).abs() < 1e-15);
        assert!((g.norm_l2().powi(2) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(g.value_at(2f64.ln()), one());
        assert_eq!(g.value_at(4f64.ln()), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn value_lookup_matches_breakpoints() {
        let b = HalfLineFunction::new(vec![-1.0, 0.0, 2.5], vec![one(), 2.0 * one()]).unwrap();
        assert_eq!(b.value_at(-1.0), one());
        assert_eq!(b.value_at(0.0), 2.0 * one());
        assert_eq!(b.value_at(2.5), Complex64::new(0.0, 0.0));
        assert!(HalfLineFunction::new(vec![0.0, 0.0], vec![one()]).is_err());
        assert!(HalfLineFunction::new(vec![0.0], vec![one()]).is_err());
    }

    #[test]
    fn small_phase_is_accurate() {
        let v = segment_integral(0.3, 1e-10, 1.0);
        let exact = Complex64::from_polar(1e-10, 0.3);
        assert!((v - exact).norm() < 1e-19);
    }
}
