use super::circle::{poisson_extend, CircleFunction, CircleRepr};
use super::kernel::{kernel_cdf, quadrature_resolution};
use crate::dyadic::{estimate_exponents, CoefficientField, ExponentEstimate};
use crate::error::{Error, Result};
use crate::haar::GridFunction;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Radius attached to level `j`.
pub fn level_radius(j: usize) -> f64 {
    1.0 - (-(j as f64)).exp2()
}

/// `e_λ(f) = ∫_λ P[f]((1 - 2^{-j}) ξ) dσ(ξ)` for every level `j <= J`.
#[derive(Debug, Clone)]
pub struct PoissonField {
    pub field: CoefficientField,
    /// Number of quadrature nodes on the circle.
    pub resolution: usize,
    /// Set when the source was not flagged nonnegative and absolute values
    /// of the averages were stored.
    pub signed_source: bool,
}

struct Plans {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Plans {
    fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }
}

fn resolution_for(f: &CircleFunction, depth: usize) -> usize {
    let base = quadrature_resolution(depth, level_radius(depth));
    match f.repr() {
        CircleRepr::Grid(g) => base.max(1 << g.depth()),
        CircleRepr::Modes { n_max, .. } => base.max((2 * n_max + 2).next_power_of_two()),
    }
}

/// Spectrum of the grid data refined to `m` equal cells.
fn grid_spectrum(g: &GridFunction, plans: &Plans) -> Vec<Complex64> {
    let shift = plans.m.trailing_zeros() - g.depth() as u32;
    let mut buf: Vec<Complex64> = (0..plans.m)
        .map(|c| Complex64::new(g.values()[c >> shift], 0.0))
        .collect();
    plans.forward.process(&mut buf);
    buf
}

/// `P[f](r, ξ_m)` at the midpoints `ξ_m = (m + 1/2) / M`.
fn node_values(
    f: &CircleFunction,
    spectrum: Option<&[Complex64]>,
    r: f64,
    plans: &Plans,
) -> Vec<f64> {
    let m = plans.m;
    let mf = m as f64;
    let mut buf = match f.repr() {
        CircleRepr::Grid(_) => {
            // Exact mass of the kernel over each fine cell, by offset.
            let mut w: Vec<Complex64> = (0..m)
                .map(|d| {
                    let d = if d < m / 2 { d as f64 } else { d as f64 - mf };
                    let mass = kernel_cdf(r, (d + 0.5) / mf) - kernel_cdf(r, (d - 0.5) / mf);
                    Complex64::new(mass.max(0.0), 0.0)
                })
                .collect();
            plans.forward.process(&mut w);
            let spec = spectrum.expect("grid spectrum");
            w.iter().zip(spec).map(|(a, b)| a * b / mf).collect::<Vec<_>>()
        }
        CircleRepr::Modes { n_max, coeffs } => {
            let n_max = *n_max as i64;
            let mut x = vec![Complex64::new(0.0, 0.0); m];
            for n in -n_max..=n_max {
                let c = coeffs[(n + n_max) as usize] * r.powi(n.unsigned_abs() as i32);
                x[n.rem_euclid(m as i64) as usize] +=
                    c * Complex64::from_polar(1.0, PI * n as f64 / mf);
            }
            x
        }
    };
    plans.inverse.process(&mut buf);
    buf.iter().map(|z| z.re).collect()
}

fn level_from_nodes(nodes: &[f64], j: usize) -> Vec<f64> {
    let per = nodes.len() >> j;
    let mf = nodes.len() as f64;
    nodes.chunks(per).map(|c| c.iter().sum::<f64>() / mf).collect()
}

/// Signed averages `e_λ(f)` at a single level.
pub fn poisson_level(f: &CircleFunction, j: usize) -> Result<Vec<f64>> {
    let plans = Plans::new(resolution_for(f, j));
    let spectrum = match f.repr() {
        CircleRepr::Grid(g) => Some(grid_spectrum(g, &plans)),
        CircleRepr::Modes { .. } => None,
    };
    let nodes = node_values(f, spectrum.as_deref(), level_radius(j), &plans);
    Ok(level_from_nodes(&nodes, j))
}

pub fn poisson_field(f: &CircleFunction, depth: usize) -> Result<PoissonField> {
    if depth > 20 {
        return Err(Error::domain(format!("poisson depth {depth} exceeds 20")));
    }
    let resolution = resolution_for(f, depth);
    let plans = Plans::new(resolution);
    let spectrum = match f.repr() {
        CircleRepr::Grid(g) => Some(grid_spectrum(g, &plans)),
        CircleRepr::Modes { .. } => None,
    };
    let levels: Vec<Vec<f64>> = (0..=depth)
        .into_par_iter()
        .map(|j| {
            let nodes = node_values(f, spectrum.as_deref(), level_radius(j), &plans);
            level_from_nodes(&nodes, j)
        })
        .collect();
    let signed_source = !f.is_nonnegative();
    let field = CoefficientField::new(levels)?
        .set_meta("generator", "poisson_field")
        .set_meta("resolution", resolution)
        .set_meta("signed_source", signed_source);
    Ok(PoissonField {
        field,
        resolution,
        signed_source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnackReport {
    pub level: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

impl HarnackReport {
    /// Smallest `C` with every ratio in `[1/C, C]`.
    pub fn constant(&self) -> f64 {
        self.max_ratio.max(1.0 / self.min_ratio)
    }
}

/// Ratios `P[f](r, x) / (2^j e_{I_j(x)}(f))` over `samples` points with
/// `r ∈ [1 - 2^{-j}, 1 - 2^{-(j+1)}]`. Points and radii follow a fixed
/// low-discrepancy sequence.
pub fn harnack_check(f: &CircleFunction, j: usize, samples: usize) -> Result<HarnackReport> {
    if !f.is_nonnegative() {
        return Err(Error::domain("harnack check needs nonnegative data"));
    }
    let level = poisson_level(f, j)?;
    let scale = (j as f64).exp2();
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let plastic = 0.754_877_666_246_692_7;
    let ratios: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = ((i as f64 + 0.5) * golden).fract();
            let t = ((i as f64 + 0.5) * plastic).fract();
            let r = 1.0 - (-(j as f64)).exp2() * (1.0 - 0.5 * t);
            let e = level[(x * level.len() as f64) as usize];
            if e <= 0.0 {
                return None;
            }
            poisson_extend(f, r, x).ok().map(|p| p / (scale * e))
        })
        .collect();
    let evaluated: Vec<f64> = ratios.iter().flatten().copied().collect();
    if evaluated.is_empty() {
        return Err(Error::InsufficientData(format!(
            "every harnack sample at level {j} had a zero denominator"
        )));
    }
    Ok(HarnackReport {
        level: j,
        min_ratio: evaluated.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: evaluated.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        evaluated: evaluated.len(),
        skipped: samples - evaluated.len(),
    })
}

/// Lower GF2 constant at level `j`: `e_{λ₀}(2^j 1_{λ₀})` for `λ₀ = [0, 2^{-j})`.
pub fn gf2_poisson_constant(j: usize) -> Result<f64> {
    let mut values = vec![0.0; 1 << j];
    values[0] = (j as f64).exp2();
    let f = CircleFunction::from_grid(GridFunction::new(j, values)?);
    Ok(poisson_level(&f, j)?[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialIndex {
    pub beta_minus: f64,
    pub beta_plus: f64,
    pub estimate: ExponentEstimate,
}

/// Radial divergence surrogates at `x`. `β⁻` tracks the limsup of the growth
/// rate and equals `1 - lower`; `β⁺` tracks the liminf and equals
/// `1 - upper`. Both are clamped to `[0, 1]`.
pub fn radial_divergence_index(f: &CircleFunction, x: f64, depth: usize) -> Result<RadialIndex> {
    let pf = poisson_field(f, depth)?;
    radial_index_from_field(&pf.field, x)
}

pub fn radial_index_from_field(field: &CoefficientField, x: f64) -> Result<RadialIndex> {
    let estimate = estimate_exponents(field, x, (1, field.max_depth()))?;
    Ok(RadialIndex {
        beta_minus: (1.0 - estimate.lower).clamp(0.0, 1.0),
        beta_plus: (1.0 - estimate.upper).clamp(0.0, 1.0),
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gives_cell_measure() {
        let f = CircleFunction::from_grid(GridFunction::constant(6, 1.0).unwrap());
        let pf = poisson_field(&f, 8).unwrap();
        for j in 0..=8 {
            for &e in pf.field.level(j) {
                assert!((e - (-(j as f64)).exp2()).abs() < 1e-14);
            }
        }
        let modes = poisson_field(&CircleFunction::constant(1.0), 8).unwrap();
        for j in 0..=8 {
            for &e in modes.field.level(j) {
                assert!((e - (-(j as f64)).exp2()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_gives_zeros() {
        let f = CircleFunction::from_grid(GridFunction::zeros(4).unwrap());
        let pf = poisson_field(&f, 6).unwrap();
        assert!(pf.field.levels().iter().flatten().all(|&e| e == 0.0));
    }

    #[test]
    fn harnack_of_constant_is_one() {
        let f = CircleFunction::from_grid(GridFunction::constant(3, 2.0).unwrap());
        let h = harnack_check(&f, 5, 50).unwrap();
        assert!((h.min_ratio - 1.0).abs() < 1e-12 && (h.max_ratio - 1.0).abs() < 1e-12);
        assert_eq!(h.skipped, 0);
    }

    #[test]
    fn harnack_rejects_zero() {
        let f = CircleFunction::from_grid(GridFunction::zeros(3).unwrap());
        assert!(harnack_check(&f, 3, 10).is_err());
    }

    #[test]
    fn gf2_constant_is_order_one() {
        let c = gf2_poisson_constant(6).unwrap();
        assert!(c > 0.1 && c < 1.0, "{c}");
    }

    #[test]
    fn constant_has_zero_radial_index() {
        let f = CircleFunction::constant(1.0);
        let ri = radial_divergence_index(&f, 0.3, 10).unwrap();
        assert!(ri.beta_minus.abs() < 1e-12 && ri.beta_plus.abs() < 1e-12);
    }
}
