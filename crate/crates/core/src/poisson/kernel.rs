use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Poisson kernel of the unit disk against normalized arc length:
/// `P(r, t) = (1 - r²) / (1 - 2r cos 2πt + r²)`, `t` in turns.
pub fn poisson_kernel(r: f64, t: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * r * (2.0 * PI * t).cos() + r * r)
}

/// Antiderivative of the kernel in `t`, continuous on the real line with
/// `G(t + 1) = G(t) + 1` and `G(0) = 1/2`.
pub fn kernel_cdf(r: f64, t: f64) -> f64 {
    let n = t.round();
    let u = t - n;
    let a = (1.0 + r) / (1.0 - r);
    n + 0.5 + (a * (PI * u).tan()).atan() / PI
}

/// `∫_a^b P(r, θ - ξ) dξ`.
pub fn kernel_arc_mass(r: f64, theta: f64, a: f64, b: f64) -> f64 {
    kernel_cdf(r, theta - a) - kernel_cdf(r, theta - b)
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius {r} must lie in [0, 1)")));
    }
    Ok(())
}

/// Midpoint-rule mass of the kernel over the circle at `resolution` nodes.
pub fn kernel_mass_midpoint(r: f64, theta: f64, resolution: usize) -> f64 {
    let h = 1.0 / resolution as f64;
    (0..resolution)
        .map(|i| poisson_kernel(r, theta - (i as f64 + 0.5) * h))
        .sum::<f64>()
        * h
}

/// Smallest power of two that is at least `2^{J+4}` and at least
/// `32 / (1 - r)` (the kernel's width is about `1 - r`).
pub fn quadrature_resolution(depth: usize, r: f64) -> usize {
    let by_width = (32.0 / (1.0 - r)).ceil() as usize;
    (1usize << (depth + 4)).max(by_width.next_power_of_two())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_differentiates_to_kernel() {
        for &r in &[0.0, 0.3, 0.9, 0.999] {
            for i in 0..40 {
                let t = -1.3 + 0.071 * i as f64;
                let h = 1e-6;
                let d = (kernel_cdf(r, t + h) - kernel_cdf(r, t - h)) / (2.0 * h);
                let p = poisson_kernel(r, t);
                assert!((d - p).abs() <= 1e-5 * p.max(1.0), "r={r} t={t}: {d} vs {p}");
            }
        }
    }

    #[test]
    fn cdf_is_periodic_and_monotone() {
        let r = 0.8;
        assert!((kernel_cdf(r, 0.0) - 0.5).abs() < 1e-15);
        assert!((kernel_cdf(r, 0.5) - 1.0).abs() < 1e-12);
        assert!((kernel_cdf(r, 1.7) - kernel_cdf(r, 0.7) - 1.0).abs() < 1e-12);
        let mut prev = kernel_cdf(r, -2.0);
        for i in 1..400 {
            let next = kernel_cdf(r, -2.0 + 0.01 * i as f64);
            assert!(next >= prev - 1e-15);
            prev = next;
        }
    }

    #[test]
    fn unit_mass() {
        for &r in &[0.0, 0.5, 0.99, 1.0 - (-12f64).exp2()] {
            assert!((kernel_arc_mass(r, 0.3, 0.0, 1.0) - 1.0).abs() < 1e-12);
            let m = kernel_mass_midpoint(r, 0.3, quadrature_resolution(12, r));
            assert!((m - 1.0).abs() < 1e-8, "r = {r}: {m}");
        }
        assert!(check_radius(1.0).is_err());
    }
}
