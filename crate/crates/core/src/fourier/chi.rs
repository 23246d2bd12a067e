use super::trig::TrigPolynomial;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Closed dyadic intervals of length `2^{-level}` with a cardinality cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub level: usize,
    /// Sorted, distinct interval indices.
    pub intervals: Vec<u64>,
    pub cap: usize,
    /// Box-dimension parameter the cap was derived from.
    pub s: f64,
}

impl CoverSpec {
    pub fn new(level: usize, mut intervals: Vec<u64>, cap: usize, s: f64) -> Result<Self> {
        if level > 40 {
            return Err(Error::domain(format!("cover level {level} exceeds 40")));
        }
        intervals.sort_unstable();
        intervals.dedup();
        if let Some(&i) = intervals.iter().find(|&&i| i >> level != 0) {
            return Err(Error::domain(format!("interval {i} is outside level {level}")));
        }
        if intervals.len() > cap {
            return Err(Error::domain(format!(
                "cover has {} intervals, cap is {cap}",
                intervals.len()
            )));
        }
        Ok(Self {
            level,
            intervals,
            cap,
            s,
        })
    }

    /// `⌈c_g 2^{level s}⌉`.
    pub fn cap_for(level: usize, s: f64, c_g: f64) -> usize {
        (c_g * (level as f64 * s).exp2() - 1e-9).ceil().max(1.0) as usize
    }

    /// Keeps the most populated intervals containing `points`, ties broken
    /// by index, up to the cap.
    pub fn from_points(points: &[f64], level: usize, s: f64, c_g: f64) -> Result<Self> {
        let cap = Self::cap_for(level, s, c_g);
        let scale = (level as f64).exp2();
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &x in points {
            if !(0.0..1.0).contains(&x) {
                return Err(Error::domain(format!("point {x} is outside [0, 1)")));
            }
            *counts.entry((x * scale) as u64).or_default() += 1;
        }
        let mut ranked: Vec<(u64, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(cap);
        Self::new(level, ranked.into_iter().map(|(i, _)| i).collect(), cap, s)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    fn holds(&self, i: i64) -> bool {
        let n = 1i64 << self.level;
        self.intervals
            .binary_search(&(i.rem_euclid(n) as u64))
            .is_ok()
    }

    /// Whether `x` lies in the union of the closed intervals.
    pub fn covers(&self, x: f64) -> bool {
        let t = x.rem_euclid(1.0) * (self.level as f64).exp2();
        let i = t.floor() as i64;
        self.holds(i) || (t == t.floor() && self.holds(i - 1))
    }
}

/// `χ(x) = max(0, 1 - 2^{level} dist(x, J))`, `J` the union of a cover,
/// distances taken on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Chi {
    cover: CoverSpec,
}

pub fn build_chi(cover: &CoverSpec) -> Result<Chi> {
    if cover.is_empty() {
        return Err(Error::domain("cannot build a bump on an empty cover"));
    }
    Ok(Chi {
        cover: cover.clone(),
    })
}

impl Chi {
    pub fn cover(&self) -> &CoverSpec {
        &self.cover
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x.rem_euclid(1.0) * (self.cover.level as f64).exp2();
        let i = t.floor() as i64;
        if self.cover.holds(i) {
            return 1.0;
        }
        let u = t - i as f64;
        let left = if self.cover.holds(i - 1) { 1.0 - u } else { 0.0 };
        let right = if self.cover.holds(i + 1) { u } else { 0.0 };
        left.max(right)
    }

    /// Values at `l / len`.
    pub fn sample(&self, len: usize) -> Vec<f64> {
        (0..len).map(|l| self.eval(l as f64 / len as f64)).collect()
    }

    /// `‖χ‖_p^p`, integrated piece by piece.
    pub fn norm_pp(&self, p: f64) -> f64 {
        let h = (-(self.cover.level as f64)).exp2();
        let one_sided = 1.0 / (p + 1.0);
        let two_sided = 2.0 / (p + 1.0) * (1.0 - (-(p + 1.0)).exp2());
        let mut neighbours: BTreeMap<i64, (bool, bool)> = BTreeMap::new();
        for &i in &self.cover.intervals {
            let i = i as i64;
            for (j, from_left) in [(i + 1, true), (i - 1, false)] {
                if !self.cover.holds(j) {
                    let n = 1i64 << self.cover.level;
                    let e = neighbours.entry(j.rem_euclid(n)).or_default();
                    if from_left {
                        e.0 = true;
                    } else {
                        e.1 = true;
                    }
                }
            }
        }
        let ramps: f64 = neighbours
            .values()
            .map(|&(l, r)| if l && r { two_sided } else { one_sided })
            .sum();
        h * (self.cover.len() as f64 + ramps)
    }
}

/// Fejér mean of order `n` of samples `g(l / L)`, `L` a power of two at
/// least `4n`: coefficients `ĝ(k)(1 - |k| / (n + 1))` with `ĝ` the discrete
/// transform.
pub fn fejer_approx(samples: &[f64], n: usize) -> Result<TrigPolynomial> {
    let len = samples.len();
    if !len.is_power_of_two() || len < 4 * n.max(1) {
        return Err(Error::domain(format!(
            "grid of {len} samples is not a power of two >= {}",
            4 * n.max(1)
        )));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let half: Vec<Complex64> = (0..=n)
        .map(|k| buf[k] / len as f64 * (1.0 - k as f64 / (n as f64 + 1.0)))
        .collect();
    TrigPolynomial::from_nonnegative_half(&half)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> CoverSpec {
        CoverSpec::new(3, vec![0], 1, 0.0).unwrap()
    }

    #[test]
    fn ramp_midpoint_is_half() {
        let chi = build_chi(&single()).unwrap();
        assert_eq!(chi.eval(0.125 + 0.0625), 0.5);
        assert_eq!(chi.eval(0.0), 1.0);
        assert_eq!(chi.eval(0.1), 1.0);
        assert_eq!(chi.eval(0.125), 1.0);
        assert_eq!(chi.eval(0.5), 0.0);
        assert!((chi.eval(1.0 - 0.0625) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn l1_norm_of_single_interval() {
        let chi = build_chi(&single()).unwrap();
        assert!((chi.norm_pp(1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empty_cover_is_rejected() {
        assert!(build_chi(&CoverSpec::new(3, vec![], 1, 0.0).unwrap()).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(CoverSpec::new(3, vec![0, 1, 2], 2, 0.3).is_err());
        let c = CoverSpec::from_points(&[0.1, 0.12, 0.6, 0.9, 0.91, 0.92], 3, 0.0, 1.0).unwrap();
        assert_eq!(c.intervals, vec![7]);
    }

    #[test]
    fn covers_closed_intervals() {
        let c = CoverSpec::new(2, vec![1], 1, 0.0).unwrap();
        assert!(c.covers(0.25) && c.covers(0.4) && c.covers(0.5));
        assert!(!c.covers(0.2) && !c.covers(0.51));
    }

    #[test]
    fn fejer_of_constant_and_mode() {
        let p = fejer_approx(&[1.0; 64], 8).unwrap();
        assert!((p.eval(0.3).re - 1.0).abs() < 1e-14);
        let s: Vec<f64> = (0..64)
            .map(|l| (std::f64::consts::TAU * l as f64 / 64.0).cos())
            .collect();
        let p = fejer_approx(&s, 8).unwrap();
        assert!((p.coeff(1).re - 0.5 * (1.0 - 1.0 / 9.0)).abs() < 1e-14);
        assert!(fejer_approx(&[1.0; 60], 8).is_err());
        assert!(fejer_approx(&[1.0; 16], 8).is_err());
    }
}
