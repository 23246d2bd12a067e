use super::field::CoefficientField;
use crate::error::{Error, Result};
use crate::sum::compensated_sum;
use serde::Serialize;

/// Ratio assigned to a zero coefficient (its exponent is +∞).
pub const DEFAULT_CAP: f64 = 10.0;

/// Finite-depth surrogate for the lower and upper pointwise indexes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub lower: f64,
    pub upper: f64,
    pub window: (usize, usize),
    /// Levels `[start, end]` over which min and max were taken.
    pub tail: (usize, usize),
    /// `(j, log2(e_j) / -j)` for every level of the window.
    pub ratios: Vec<(usize, f64)>,
    /// Set when every coefficient of the tail vanished.
    pub all_zero_tail: bool,
}

/// `log2(e) / -j`, with zero coefficients mapped to `cap`.
pub fn level_ratio(e: f64, j: usize, cap: f64) -> f64 {
    if e > 0.0 {
        e.log2() / -(j as f64)
    } else {
        cap
    }
}

/// First level of the tail sub-window: the last `ceil(n / 2)` levels of
/// `[j_min, j_max]`, `n = j_max - j_min + 1`.
pub fn tail_start(j_min: usize, j_max: usize) -> usize {
    let n = j_max - j_min + 1;
    j_max + 1 - n.div_ceil(2)
}

fn check_window(window: (usize, usize), depth: usize) -> Result<()> {
    let (j_min, j_max) = window;
    if j_min < 1 || j_min > j_max || j_max > depth {
        return Err(Error::domain(format!(
            "window ({j_min}, {j_max}) must satisfy 1 <= j_min <= j_max <= {depth}"
        )));
    }
    Ok(())
}

/// Estimates from a chain `e_0, e_1, ..., e_J` indexed by level.
pub fn estimate_from_chain(
    chain: &[f64],
    window: (usize, usize),
    cap: f64,
) -> Result<ExponentEstimate> {
    if chain.is_empty() {
        return Err(Error::domain("empty chain"));
    }
    check_window(window, chain.len() - 1)?;
    let (j_min, j_max) = window;
    let ratios: Vec<(usize, f64)> = (j_min..=j_max)
        .map(|j| (j, level_ratio(chain[j].abs(), j, cap)))
        .collect();
    let start = tail_start(j_min, j_max);
    let tail = &ratios[start - j_min..];
    let all_zero_tail = (start..=j_max).all(|j| chain[j] == 0.0);
    let (lower, upper) = if all_zero_tail {
        (cap, cap)
    } else {
        tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, r)| {
            (lo.min(r), hi.max(r))
        })
    };
    Ok(ExponentEstimate {
        lower,
        upper,
        window,
        tail: (start, j_max),
        ratios,
        all_zero_tail,
    })
}

pub fn estimate_exponents(
    field: &CoefficientField,
    x: f64,
    window: (usize, usize),
) -> Result<ExponentEstimate> {
    estimate_exponents_with_cap(field, x, window, DEFAULT_CAP)
}

pub fn estimate_exponents_with_cap(
    field: &CoefficientField,
    x: f64,
    window: (usize, usize),
    cap: f64,
) -> Result<ExponentEstimate> {
    check_window(window, field.max_depth())?;
    estimate_from_chain(&field.chain(x)?, window, cap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelNorm {
    pub level: usize,
    pub norm: f64,
    pub pass: bool,
}

/// Per-level `l^p` norms checked against a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gf1Report {
    pub p: f64,
    pub bound: f64,
    pub levels: Vec<LevelNorm>,
}

impl Gf1Report {
    pub fn all_pass(&self) -> bool {
        self.levels.iter().all(|l| l.pass)
    }

    pub fn max_norm(&self) -> f64 {
        self.levels.iter().map(|l| l.norm).fold(0.0, f64::max)
    }
}

pub fn level_lp_norm(values: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        compensated_sum(values.iter().map(|v| v.abs()))
    } else if p == 2.0 {
        compensated_sum(values.iter().map(|v| v * v)).sqrt()
    } else {
        compensated_sum(values.iter().map(|v| v.abs().powf(p))).powf(1.0 / p)
    }
}

pub fn gf1_check(field: &CoefficientField, p: f64, bound: f64) -> Result<Gf1Report> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("p = {p} must be >= 1")));
    }
    let levels = field
        .levels()
        .iter()
        .enumerate()
        .map(|(level, values)| {
            let norm = level_lp_norm(values, p);
            LevelNorm { level, norm, pass: norm <= bound }
        })
        .collect();
    Ok(Gf1Report { p, bound, levels })
}
