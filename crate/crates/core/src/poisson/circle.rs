use super::kernel::{check_radius, kernel_cdf, poisson_kernel};
use crate::error::{Error, Result};
use crate::haar::GridFunction;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum CircleRepr {
    Grid(GridFunction),
    /// `coeffs[n + N]` is the coefficient of `e^{2πinθ}`, `|n| <= N`.
    Modes { n_max: usize, coeffs: Vec<Complex64> },
}

/// Boundary data on the circle `θ ∈ [0, 1)` with normalized arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    repr: CircleRepr,
    nonneg: bool,
}

impl CircleFunction {
    pub fn from_grid(g: GridFunction) -> Self {
        let nonneg = g.is_nonnegative();
        Self {
            repr: CircleRepr::Grid(g),
            nonneg,
        }
    }

    /// Real-valued band-limited data; `coeffs` has length `2N + 1`.
    /// `nonneg` is the caller's claim of membership in the cone.
    pub fn from_modes(coeffs: Vec<Complex64>, nonneg: bool) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::domain("mode vector must have odd length 2N + 1"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite Fourier coefficient"));
        }
        let n_max = coeffs.len() / 2;
        Ok(Self {
            repr: CircleRepr::Modes { n_max, coeffs },
            nonneg,
        })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            repr: CircleRepr::Modes {
                n_max: 0,
                coeffs: vec![Complex64::new(c, 0.0)],
            },
            nonneg: c >= 0.0,
        }
    }

    pub fn repr(&self) -> &CircleRepr {
        &self.repr
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonneg
    }

    pub fn mode(&self, n: i64) -> Option<Complex64> {
        match &self.repr {
            CircleRepr::Modes { n_max, coeffs } if n.unsigned_abs() as usize <= *n_max => {
                Some(coeffs[(n + *n_max as i64) as usize])
            }
            _ => None,
        }
    }

    /// Pointwise value of the boundary data.
    pub fn value_at(&self, theta: f64) -> f64 {
        match &self.repr {
            CircleRepr::Grid(g) => g.value_at(theta.rem_euclid(1.0)).unwrap_or(0.0),
            CircleRepr::Modes { .. } => self.mode_sum(1.0, theta),
        }
    }

    fn mode_sum(&self, r: f64, theta: f64) -> f64 {
        let CircleRepr::Modes { n_max, coeffs } = &self.repr else {
            unreachable!()
        };
        let n_max = *n_max as i64;
        let mut acc = 0.0;
        let mut rn = 1.0;
        for n in 0..=n_max {
            let phase = Complex64::from_polar(1.0, 2.0 * PI * n as f64 * theta);
            let mut term = coeffs[(n + n_max) as usize] * phase;
            if n > 0 {
                term += coeffs[(n_max - n) as usize] * phase.conj();
            }
            acc += rn * term.re;
            rn *= r;
        }
        acc
    }

    /// `‖f‖₁`: exact on grids, by dense sampling for mode data.
    pub fn norm_l1(&self) -> f64 {
        match &self.repr {
            CircleRepr::Grid(g) => g.norm_l1(),
            CircleRepr::Modes { n_max, .. } => {
                let m = (16 * (*n_max + 1)).max(4096);
                (0..m)
                    .map(|i| self.mode_sum(1.0, (i as f64 + 0.5) / m as f64).abs())
                    .sum::<f64>()
                    / m as f64
            }
        }
    }

    /// `|f|` as a grid; mode data is sampled at the cell midpoints of
    /// `depth`.
    pub fn abs(&self, depth: usize) -> Result<Self> {
        let g = match &self.repr {
            CircleRepr::Grid(g) => {
                GridFunction::new(g.depth(), g.values().iter().map(|v| v.abs()).collect())?
            }
            CircleRepr::Modes { .. } => {
                let h = (-(depth as f64)).exp2();
                GridFunction::new(
                    depth,
                    (0..1usize << depth)
                        .map(|i| self.mode_sum(1.0, (i as f64 + 0.5) * h).abs())
                        .collect(),
                )?
            }
        };
        Ok(Self::from_grid(g))
    }
}

/// `P[f](r, θ)`. Mode data is multiplied by `r^{|n|}`; grid data is
/// integrated cell by cell against the closed-form kernel antiderivative.
pub fn poisson_extend(f: &CircleFunction, r: f64, theta: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(match &f.repr {
        CircleRepr::Modes { .. } => f.mode_sum(r, theta),
        CircleRepr::Grid(g) => grid_extend(g, r, theta),
    })
}

fn grid_extend(g: &GridFunction, r: f64, theta: f64) -> f64 {
    let n = g.values().len();
    let h = 1.0 / n as f64;
    let mut prev = kernel_cdf(r, theta);
    let mut acc = 0.0;
    for (i, v) in g.values().iter().enumerate() {
        let next = kernel_cdf(r, theta - (i + 1) as f64 * h);
        acc += v * (prev - next).max(0.0);
        prev = next;
    }
    acc
}

/// `P[f](r, θ)` by the midpoint rule at `resolution` nodes, reading the
/// boundary data at each node.
pub fn poisson_extend_midpoint(
    f: &CircleFunction,
    r: f64,
    theta: f64,
    resolution: usize,
) -> Result<f64> {
    check_radius(r)?;
    let h = 1.0 / resolution as f64;
    Ok((0..resolution)
        .map(|i| {
            let xi = (i as f64 + 0.5) * h;
            poisson_kernel(r, theta - xi) * f.value_at(xi)
        })
        .sum::<f64>()
        * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::quadrature_resolution;

    fn cosine() -> CircleFunction {
        let c = Complex64::new(0.5, 0.0);
        CircleFunction::from_modes(vec![c, Complex64::new(0.0, 0.0), c], false).unwrap()
    }

    #[test]
    fn constant_is_fixed() {
        let one = CircleFunction::constant(1.0);
        let grid = CircleFunction::from_grid(GridFunction::constant(5, 1.0).unwrap());
        for &(r, t) in &[(0.0, 0.1), (0.7, 0.33), (0.999, 0.9)] {
            assert!((poisson_extend(&one, r, t).unwrap() - 1.0).abs() < 1e-15);
            assert!((poisson_extend(&grid, r, t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn first_mode_scales_by_radius() {
        let f = cosine();
        for i in 0..10 {
            let t = 0.1 * i as f64;
            let v = poisson_extend(&f, 0.5, t).unwrap();
            assert!((v - 0.5 * (2.0 * PI * t).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn radius_one_is_rejected() {
        assert!(poisson_extend(&CircleFunction::constant(1.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn midpoint_agrees_on_smooth_data() {
        let f = cosine();
        let r = 0.9;
        let m = quadrature_resolution(8, r);
        let a = poisson_extend_midpoint(&f, r, 0.2, m).unwrap();
        let b = poisson_extend(&f, r, 0.2).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn abs_and_norm() {
        let f = cosine();
        assert!((f.norm_l1() - 2.0 / PI).abs() < 1e-6);
        let g = f.abs(10).unwrap();
        assert!(g.is_nonnegative());
        assert!((g.norm_l1() - 2.0 / PI).abs() < 1e-5);
    }
}
