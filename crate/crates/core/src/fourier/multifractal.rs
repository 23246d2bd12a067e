use super::block::{build_block_function, BlockConfig, BlockFunction, BuildReport};
use super::chi::CoverSpec;
use crate::error::{Error, Result};
use crate::sets::{sample_point, SampleRule, SparseSchedule, K_PHASE};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Digits drawn per sample; enough to fill an `f64` mantissa.
pub const SAMPLE_DEPTH: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultifractalConfig {
    /// Targets `α` in `(0, 1)`; the constant block for `α = 1` comes first.
    pub alphas: Vec<f64>,
    pub k_max: usize,
    pub samples_per_alpha: usize,
    pub seed: u64,
    pub p: f64,
    /// Covers are capped at `⌈c_g 2^{(m_k - 1)(α + margin)}⌉`.
    pub alpha_margin: f64,
    pub c_g: f64,
    pub phase: f64,
}

impl Default for MultifractalConfig {
    fn default() -> Self {
        Self {
            alphas: (1..=9).map(|i| i as f64 / 10.0).collect(),
            k_max: 3,
            samples_per_alpha: 1000,
            seed: 0,
            p: 2.0,
            alpha_margin: 0.05,
            c_g: 1.0,
            phase: K_PHASE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub alpha: f64,
    pub weight: f64,
    /// Samples of `F_α ∩ K` the covers were built from.
    pub points: Vec<f64>,
    pub covers: Vec<(usize, CoverSpec)>,
    pub function: BlockFunction,
    pub report: BuildReport,
}

impl Component {
    /// Points lying in every cover of the component.
    pub fn fully_covered(&self) -> Vec<f64> {
        self.points
            .iter()
            .copied()
            .filter(|&x| self.covers.iter().all(|(_, c)| c.covers(x)))
            .collect()
    }
}

/// `f = (1+i)/√2 + Σ_{k>=2} k^{-2} f_{α_k}` truncated to `k_max` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct MultifractalFourier {
    pub function: BlockFunction,
    pub components: Vec<Component>,
}

/// Seed of sample `i` for the `a`-th target.
pub fn sample_seed(seed: u64, a: usize, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(((a as u64) << 32) | i as u64)
}

/// Samples of `F_α ∩ K` as floating-point positions.
pub fn sample_f_alpha(
    alpha: f64,
    schedule: &SparseSchedule,
    count: usize,
    seed: u64,
    a: usize,
) -> Result<Vec<f64>> {
    let rule = SampleRule::Intersection {
        alpha,
        schedule: schedule.clone(),
    };
    (0..count)
        .into_par_iter()
        .map(|i| Ok(sample_point(&rule, SAMPLE_DEPTH, sample_seed(seed, a, i))?.value_f64()))
        .collect()
}

pub fn build_component(
    alpha: f64,
    weight: f64,
    index: usize,
    schedule: &SparseSchedule,
    config: &MultifractalConfig,
) -> Result<Component> {
    let points = sample_f_alpha(alpha, schedule, config.samples_per_alpha, config.seed, index)?;
    let s = (alpha + config.alpha_margin).min(1.0);
    let covers: Vec<(usize, CoverSpec)> = (1..=config.k_max)
        .map(|k| {
            let m = schedule
                .m(k)
                .ok_or_else(|| Error::domain(format!("schedule has no term {k}")))?;
            Ok((k, CoverSpec::from_points(&points, m - 1, s, config.c_g)?))
        })
        .collect::<Result<_>>()?;
    let block_config = BlockConfig {
        s,
        p: config.p,
        phase: config.phase,
    };
    let (function, report) = build_block_function(&covers, schedule, &block_config, &points)?;
    Ok(Component {
        alpha,
        weight,
        points,
        covers,
        function,
        report,
    })
}

pub fn multifractal_fourier(config: &MultifractalConfig) -> Result<MultifractalFourier> {
    if config.k_max == 0 || config.k_max > 4 {
        return Err(Error::domain(format!("k_max = {} outside 1..=4", config.k_max)));
    }
    if let Some(a) = config.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::domain(format!("alpha = {a} outside (0, 1)")));
    }
    let schedule = SparseSchedule::squares();
    let components: Vec<Component> = config
        .alphas
        .iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let k = (i + 2) as f64;
            build_component(alpha, 1.0 / (k * k), i, &schedule, config)
        })
        .collect::<Result<_>>()?;
    let mut function = BlockFunction::empty(schedule);
    function.constant = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    for c in &components {
        function = function.add_scaled(c.weight, &c.function)?;
    }
    function.check_spectra()?;
    Ok(MultifractalFourier {
        function,
        components,
    })
}
