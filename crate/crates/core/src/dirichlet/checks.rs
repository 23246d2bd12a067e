use super::halfline::HalfLineFunction;
use super::series::{critical_term, CompensatedSum, DirichletSeries};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Minimal spacing of consecutive `log log n` values in a schedule.
pub const LOGLOG_SPACING: f64 = 0.1;

/// Default number of quadrature nodes on the localization interval.
pub const LOCALIZATION_RESOLUTION: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DsDivergence {
    pub beta_minus: f64,
    pub beta_plus: f64,
    /// `(n, log|S_n| / log log n)` per schedule point.
    pub ratios: Vec<(f64, f64)>,
}

/// `n = 2^{2^i}`, `i = 1..=5`, kept while `n <= n_max`.
pub fn loglog_schedule(n_max: usize) -> Vec<usize> {
    (1..=5u32)
        .map(|i| 1u64 << (1u32 << i))
        .take_while(|&n| n <= n_max as u64)
        .map(|n| n as usize)
        .collect()
}

/// Estimator on given moduli `|S_n|`; `ns` may exceed `usize` for ladders.
pub fn ds_divergence_from_moduli(ns: &[f64], moduli: &[f64]) -> Result<DsDivergence> {
    if ns.len() != moduli.len() {
        return Err(Error::domain("schedule and moduli differ in length"));
    }
    if ns.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} schedule points, need at least 4",
            ns.len()
        )));
    }
    if let Some(n) = ns.iter().find(|&&n| !(n >= 3.0)) {
        return Err(Error::domain(format!("n = {n}: log log n must be positive")));
    }
    let ll: Vec<f64> = ns.iter().map(|n| n.ln().ln()).collect();
    if ll.windows(2).any(|w| w[1] - w[0] < LOGLOG_SPACING - 1e-12) {
        return Err(Error::InsufficientData(format!(
            "log log n spacing below {LOGLOG_SPACING}"
        )));
    }
    let ratios: Vec<(f64, f64)> = ns
        .iter()
        .zip(moduli)
        .zip(&ll)
        .map(|((&n, &m), &l)| (n, m.ln() / l))
        .collect();
    let tail = &ratios[ratios.len() - ratios.len().div_ceil(2)..];
    let beta_minus = tail.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let beta_plus = tail.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok(DsDivergence {
        beta_minus,
        beta_plus,
        ratios,
    })
}

/// `(β⁻, β⁺)` surrogate of `log|S_n g(t)| / log log n` over the tail half
/// of the schedule.
pub fn ds_divergence_index(g: &DirichletSeries, t: f64, schedule: &[usize]) -> Result<DsDivergence> {
    let sums = g.partial_sums(schedule, t)?;
    let ns: Vec<f64> = schedule.iter().map(|&n| n as f64).collect();
    let moduli: Vec<f64> = sums.iter().map(|s| s.norm()).collect();
    ds_divergence_from_moduli(&ns, &moduli)
}

/// `∫_0^1 |g(½ - it)|² dt / ‖g‖²` by the midpoint rule with `resolution`
/// nodes.
pub fn embedding_check(g: &DirichletSeries, resolution: usize) -> Result<f64> {
    if resolution == 0 {
        return Err(Error::domain("quadrature needs at least one node"));
    }
    let norm2 = g.h2_norm().powi(2);
    if norm2 == 0.0 {
        return Err(Error::InsufficientData("zero series".into()));
    }
    let h = 1.0 / resolution as f64;
    let integral: f64 = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            let mut acc = CompensatedSum::default();
            for (k, a) in g.coeffs().iter().enumerate() {
                acc.add(a * critical_term(k + 1, t));
            }
            acc.value().norm_sqr()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum::<f64>()
        * h;
    Ok(integral / norm2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiLocalizationReport {
    pub r: f64,
    pub norm_l2: f64,
    /// `(t, ratio)` for every qualifying sample.
    pub scored: Vec<(f64, f64)>,
    pub delta: Option<f64>,
}

/// Scores `‖Ĝ_R‖_{L²(I)} R^{1/2} log R / |Ĝ_R(t)|` at each `t` with
/// `|Ĝ_R(t)| >= ‖G‖₂`, where `I` has length `1/R` and centre `t`. The
/// transform is evaluated in closed form at `resolution` midpoints of `I`.
pub fn fi_localization_check(
    big_g: &HalfLineFunction,
    r: f64,
    ts: &[f64],
    resolution: usize,
) -> Result<FiLocalizationReport> {
    if !(r >= 2.0) || !r.is_finite() {
        return Err(Error::domain(format!("R = {r} must be at least 2")));
    }
    if resolution == 0 {
        return Err(Error::domain("quadrature needs at least one node"));
    }
    let norm_l2 = big_g.norm_l2();
    let scored: Vec<(f64, f64)> = ts
        .par_iter()
        .filter_map(|&t| {
            let centre = big_g.truncated_transform(r, t).norm();
            if centre == 0.0 || centre < norm_l2 {
                return None;
            }
            let width = 1.0 / r;
            let h = width / resolution as f64;
            let start = t - 0.5 * width;
            let local: f64 = (0..resolution)
                .map(|i| {
                    big_g
                        .truncated_transform(r, start + (i as f64 + 0.5) * h)
                        .norm_sqr()
                })
                .sum::<f64>()
                * h;
            Some((t, local.sqrt() * r.sqrt() * r.ln() / centre))
        })
        .collect();
    let delta = scored.iter().map(|s| s.1).reduce(f64::min);
    Ok(FiLocalizationReport {
        r,
        norm_l2,
        scored,
        delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn schedule_respects_ceiling() {
        assert_eq!(loglog_schedule(98_304), vec![4, 16, 256, 65_536]);
        assert_eq!(loglog_schedule(100), vec![4, 16]);
    }

    #[test]
    fn constant_series_has_zero_index() {
        let g = DirichletSeries::new(vec![Complex64::new(1.0, 0.0); 1]).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); 70_000];
        c[0] = g.coeff(1);
        let g = DirichletSeries::new(c).unwrap();
        let d = ds_divergence_index(&g, 1.7, &loglog_schedule(70_000)).unwrap();
        assert_eq!((d.beta_minus, d.beta_plus), (0.0, 0.0));
    }

    #[test]
    fn short_schedules_are_rejected() {
        let ns = [16.0, 256.0, 65536.0];
        assert!(ds_divergence_from_moduli(&ns, &[1.0; 3]).is_err());
        let close = [16.0, 17.0, 256.0, 65536.0];
        assert!(ds_divergence_from_moduli(&close, &[1.0; 4]).is_err());
    }

    #[test]
    fn embedding_of_single_terms() {
        let one = DirichletSeries::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!((embedding_check(&one, 64).unwrap() - 1.0).abs() < 1e-15);
        let two = DirichletSeries::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
            .unwrap();
        assert!((embedding_check(&two, 64).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_function_never_qualifies() {
        let z = HalfLineFunction::unit_grid(vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        let r = fi_localization_check(&z, 4.0, &[0.0, 1.0], 128).unwrap();
        assert!(r.delta.is_none());
        assert!(fi_localization_check(&z, 1.5, &[0.0], 128).is_err());
    }
}
