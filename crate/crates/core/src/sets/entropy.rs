use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Binary entropy `-δ log2 δ - (1-δ) log2(1-δ)` on `(0, 1/2]`.
pub fn alpha_of_delta(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::domain(format!("delta = {delta} must lie in (0, 1/2]")));
    }
    Ok(entropy(delta))
}

fn entropy(delta: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    -delta * delta.log2() - (1.0 - delta) * (1.0 - delta).log2()
}

/// Inverse of [`alpha_of_delta`] by bisection to an absolute width of 1e-12.
pub fn delta_of_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    if alpha == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Default exponent in the mass bound `2^{-u α + u^θ}`.
pub const DEFAULT_THETA: f64 = 0.75;

/// Digit-frequency parameter `δ` with its entropy `α` and mass-bound exponent `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesicovitchParams {
    pub delta: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl BesicovitchParams {
    pub fn from_delta(delta: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { delta, alpha: alpha_of_delta(delta)?, theta })
    }

    pub fn from_alpha(alpha: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { delta: delta_of_alpha(alpha)?, alpha, theta })
    }

    /// `log2` of the mass bound `2^{-u α + u^θ}`.
    pub fn log2_mass_bound(&self, u: usize) -> f64 {
        let u = u as f64;
        -u * self.alpha + u.powf(self.theta)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.5 && theta < 1.0) {
        return Err(Error::domain(format!("theta = {theta} must lie in (1/2, 1)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(alpha_of_delta(0.5).unwrap(), 1.0);
        assert!(alpha_of_delta(1e-8).unwrap() < 1e-6);
        assert!((alpha_of_delta(0.25).unwrap() - 0.811278).abs() < 1e-6);
        assert!(alpha_of_delta(0.0).is_err());
        assert!(alpha_of_delta(0.6).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(delta_of_alpha(1.0).unwrap(), 0.5);
        assert!((delta_of_alpha(0.811278).unwrap() - 0.25).abs() < 1e-5);
        let d = delta_of_alpha(0.5).unwrap();
        assert!((alpha_of_delta(d).unwrap() - 0.5).abs() < 1e-10);
        assert!(delta_of_alpha(0.0).is_err());
        assert!(delta_of_alpha(1.5).is_err());
    }

    #[test]
    fn params_validate_theta() {
        assert!(BesicovitchParams::from_alpha(0.5, 0.5).is_err());
        let p = BesicovitchParams::from_alpha(0.5, DEFAULT_THETA).unwrap();
        assert!((p.log2_mass_bound(16) - (-8.0 + 8.0)).abs() < 1e-12);
    }
}
