use crate::error::{Error, Result};
use num_complex::Complex64;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// `g(s) = Σ_{k=1}^{N} a_k k^{-s}`; `coeffs[k - 1] = a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries {
    coeffs: Vec<Complex64>,
}

/// `k^{-1/2 + it}`.
pub fn critical_term(k: usize, t: f64) -> Complex64 {
    let kf = k as f64;
    Complex64::from_polar(1.0 / kf.sqrt(), t * kf.ln())
}

impl DirichletSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite Dirichlet coefficient"));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n_max: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); n_max],
        }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_k`, zero outside `1..=N`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 || k > self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k - 1]
        }
    }

    /// `(Σ |a_k|²)^{1/2}`.
    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Cauchy–Schwarz bound `(Σ_{k<=n} 1/k)^{1/2} ‖g‖` on `|S_n|`.
    pub fn cs_ceiling(&self, n: usize) -> f64 {
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        h.sqrt() * self.h2_norm()
    }

    /// `Σ_{k=1}^{n} a_k k^{-1/2+it}`, summed in ascending `k` with
    /// compensation.
    pub fn partial_sum(&self, n: usize, t: f64) -> Result<Complex64> {
        if n == 0 || n > self.coeffs.len() {
            return Err(Error::domain(format!(
                "n = {n} outside 1..={}",
                self.coeffs.len()
            )));
        }
        let mut acc = CompensatedSum::default();
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if *a != Complex64::new(0.0, 0.0) {
                acc.add(a * critical_term(i + 1, t));
            }
        }
        Ok(acc.value())
    }

    /// Partial sums at every `n` of an increasing schedule in one pass.
    pub fn partial_sums(&self, schedule: &[usize], t: f64) -> Result<Vec<Complex64>> {
        if schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("schedule must be strictly increasing"));
        }
        if let Some(&n) = schedule.iter().find(|&&n| n == 0 || n > self.coeffs.len()) {
            return Err(Error::domain(format!(
                "n = {n} outside 1..={}",
                self.coeffs.len()
            )));
        }
        let mut out = Vec::with_capacity(schedule.len());
        let mut acc = CompensatedSum::default();
        let mut k = 0;
        for &n in schedule {
            while k < n {
                let a = self.coeffs[k];
                if a != Complex64::new(0.0, 0.0) {
                    acc.add(a * critical_term(k + 1, t));
                }
                k += 1;
            }
            out.push(acc.value());
        }
        Ok(out)
    }
}

/// `ds_partial_sum` in free-function form.
pub fn ds_partial_sum(g: &DirichletSeries, n: usize, t: f64) -> Result<Complex64> {
    g.partial_sum(n, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(k: usize, n: usize) -> DirichletSeries {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[k - 1] = Complex64::new(1.0, 0.0);
        DirichletSeries::new(c).unwrap()
    }

    #[test]
    fn first_coefficient_is_constant() {
        let g = unit(1, 5);
        for n in 1..=5 {
            for &t in &[0.0, 1.0, -7.5] {
                assert_eq!(g.partial_sum(n, t).unwrap(), Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn second_coefficient_at_zero() {
        let g = unit(2, 3);
        let v = g.partial_sum(3, 0.0).unwrap();
        assert!((v.re - 0.5f64.sqrt()).abs() < 1e-15 && v.im == 0.0);
        assert_eq!(g.partial_sum(1, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn range_is_checked() {
        let g = unit(1, 3);
        assert!(g.partial_sum(0, 0.0).is_err());
        assert!(g.partial_sum(4, 0.0).is_err());
        assert!(g.partial_sums(&[2, 1], 0.0).is_err());
    }

    #[test]
    fn batched_sums_match_single() {
        let c: Vec<Complex64> = (1..=200)
            .map(|k| Complex64::new(1.0 / k as f64, (k as f64).sin()))
            .collect();
        let g = DirichletSeries::new(c).unwrap();
        let sched = [1, 7, 50, 200];
        let batch = g.partial_sums(&sched, 2.5).unwrap();
        for (n, v) in sched.iter().zip(batch) {
            assert_eq!(v, g.partial_sum(*n, 2.5).unwrap());
        }
    }

    #[test]
    fn ceiling_holds_for_first_coefficient() {
        let g = unit(1, 1);
        assert!(g.partial_sum(1, 0.0).unwrap().norm() <= g.cs_ceiling(1));
        // the log(n + 1) form is smaller than the sum here
        assert!(2f64.ln().sqrt() < 1.0);
    }
}
