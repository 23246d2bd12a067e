use super::estimate::{level_ratio, DEFAULT_CAP};
use super::field::CoefficientField;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Which exponent criterion selects a cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelSetMode {
    /// Own ratio within `[α - ε, α + ε]`.
    Limit,
    /// Smallest ancestor ratio over the window is at most `α + ε`.
    Lower,
    /// Largest ancestor ratio over the window is at most `α + ε`.
    Upper,
}

impl FromStr for LevelSetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limit" => Ok(Self::Limit),
            "lower" => Ok(Self::Lower),
            "upper" => Ok(Self::Upper),
            other => Err(Error::domain(format!("unknown level-set mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for LevelSetMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Limit => "limit",
            Self::Lower => "lower",
            Self::Upper => "upper",
        })
    }
}

/// Selected cube indices per level `0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetGrid {
    pub target: f64,
    pub tolerance: f64,
    levels: Vec<Vec<u64>>,
}

impl LevelSetGrid {
    /// Sorts and deduplicates each level; indices must fit their level.
    pub fn new(target: f64, tolerance: f64, mut levels: Vec<Vec<u64>>) -> Result<Self> {
        for (j, level) in levels.iter_mut().enumerate() {
            level.sort_unstable();
            level.dedup();
            if j < 64 && level.last().is_some_and(|&k| k >= 1u64 << j) {
                return Err(Error::domain(format!("cube index out of range at level {j}")));
            }
        }
        Ok(Self { target, tolerance, levels })
    }

    /// Grid made of explicit per-level cube sets (no exponent criterion).
    pub fn from_cubes(levels: Vec<Vec<u64>>) -> Result<Self> {
        Self::new(f64::NAN, f64::NAN, levels)
    }

    pub fn levels(&self) -> &[Vec<u64>] {
        &self.levels
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let depth = self.levels.len().max(other.levels.len());
        let levels = (0..depth)
            .map(|j| {
                let mut v = self.levels.get(j).cloned().unwrap_or_default();
                v.extend(other.levels.get(j).into_iter().flatten());
                v
            })
            .collect();
        Self::new(self.target, self.tolerance, levels)
    }
}

/// Per-level ratios and their ancestor minima/maxima, computed once per field
/// and reused across abscissae.
#[derive(Debug, Clone)]
pub struct RatioTable {
    own: Vec<Vec<f64>>,
    anc_min: Vec<Vec<f64>>,
    anc_max: Vec<Vec<f64>>,
}

/// First ancestor level consulted at level `j`: the tail half of the chain `1..=j`.
pub fn ancestor_window_start(j: usize) -> usize {
    j + 1 - j.div_ceil(2)
}

impl RatioTable {
    pub fn new(field: &CoefficientField) -> Self {
        Self::with_cap(field, DEFAULT_CAP)
    }

    pub fn with_cap(field: &CoefficientField, cap: f64) -> Self {
        let depth = field.max_depth();
        let own: Vec<Vec<f64>> = (0..=depth)
            .map(|j| {
                if j == 0 {
                    vec![f64::NAN]
                } else {
                    field.level(j).iter().map(|&e| level_ratio(e, j, cap)).collect()
                }
            })
            .collect();
        let mut anc_min = vec![vec![f64::NAN]];
        let mut anc_max = vec![vec![f64::NAN]];
        for j in 1..=depth {
            let start = ancestor_window_start(j);
            let (mins, maxs): (Vec<f64>, Vec<f64>) = (0..1usize << j)
                .into_par_iter()
                .map(|k| {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for i in start..=j {
                        let r = own[i][k >> (j - i)];
                        lo = lo.min(r);
                        hi = hi.max(r);
                    }
                    (lo, hi)
                })
                .unzip();
            anc_min.push(mins);
            anc_max.push(maxs);
        }
        Self { own, anc_min, anc_max }
    }

    pub fn max_depth(&self) -> usize {
        self.own.len() - 1
    }

    pub fn extract(&self, alpha: f64, eps: f64, mode: LevelSetMode) -> LevelSetGrid {
        let mut levels = vec![Vec::new()];
        for j in 1..=self.max_depth() {
            let source = match mode {
                LevelSetMode::Limit => &self.own[j],
                LevelSetMode::Lower => &self.anc_min[j],
                LevelSetMode::Upper => &self.anc_max[j],
            };
            let selected = source
                .iter()
                .enumerate()
                .filter(|(_, &r)| match mode {
                    LevelSetMode::Limit => r >= alpha - eps && r <= alpha + eps,
                    _ => r <= alpha + eps,
                })
                .map(|(k, _)| k as u64)
                .collect();
            levels.push(selected);
        }
        LevelSetGrid { target: alpha, tolerance: eps, levels }
    }
}

pub fn extract_level_set(
    field: &CoefficientField,
    alpha: f64,
    eps: f64,
    mode: LevelSetMode,
) -> Result<LevelSetGrid> {
    check_tolerance(eps)?;
    Ok(RatioTable::new(field).extract(alpha, eps, mode))
}

fn check_tolerance(eps: f64) -> Result<()> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::domain(format!("tolerance {eps} must be > 0")));
    }
    Ok(())
}

/// Least-squares line through points, returning `(slope, r2)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

/// Box-counting dimension: slope of `log2(count_j)` against `j` over the
/// nonempty levels, with the fit's `r²`.
pub fn box_dimension(grid: &LevelSetGrid) -> Result<(f64, f64)> {
    box_dimension_of_counts(&grid.counts())
}

pub fn box_dimension_of_counts(counts: &[usize]) -> Result<(f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| (j as f64, (c as f64).log2()))
        .unzip();
    if xs.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} nonempty levels, at least 4 required",
            xs.len()
        )));
    }
    Ok(linear_fit(&xs, &ys))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowFlag {
    Ok,
    Empty,
    Insufficient,
}

impl std::fmt::Display for RowFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Ok => "ok",
            Self::Empty => "empty",
            Self::Insufficient => "insufficient",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub abscissa: f64,
    pub dim_estimate: Option<f64>,
    pub r2: Option<f64>,
    pub counts: Vec<usize>,
    pub flag: RowFlag,
}

impl SpectrumRow {
    pub fn levels_used(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub mode: LevelSetMode,
    pub tolerance: f64,
    pub rows: Vec<SpectrumRow>,
    /// Theoretical prediction at each abscissa, when one is attached.
    pub model_line: Vec<Option<f64>>,
}

impl SpectrumReport {
    pub fn with_model(mut self, model: impl Fn(f64) -> Option<f64>) -> Self {
        self.model_line = self.rows.iter().map(|r| model(r.abscissa)).collect();
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("abscissa,dim_estimate,r2,levels_used,flag\n");
        for row in &self.rows {
            let fmt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
            out.push_str(&format!(
                "{:.6},{},{},{},{}\n",
                row.abscissa,
                fmt(row.dim_estimate),
                fmt(row.r2),
                row.levels_used(),
                row.flag
            ));
        }
        out
    }
}

pub fn coarse_spectrum(
    field: &CoefficientField,
    abscissae: &[f64],
    eps: f64,
    mode: LevelSetMode,
) -> Result<SpectrumReport> {
    coarse_spectrum_with_cap(field, abscissae, eps, mode, DEFAULT_CAP)
}

pub fn coarse_spectrum_with_cap(
    field: &CoefficientField,
    abscissae: &[f64],
    eps: f64,
    mode: LevelSetMode,
    cap: f64,
) -> Result<SpectrumReport> {
    check_tolerance(eps)?;
    if abscissae.is_empty() {
        return Err(Error::domain("no abscissae given"));
    }
    if let Some(a) = abscissae.iter().find(|a| !(0.0..=cap).contains(*a)) {
        return Err(Error::domain(format!("abscissa {a} outside [0, {cap}]")));
    }
    let table = RatioTable::with_cap(field, cap);
    let rows = abscissae
        .par_iter()
        .map(|&a| {
            let counts = table.extract(a, eps, mode).counts();
            match box_dimension_of_counts(&counts) {
                Ok((d, r2)) => SpectrumRow {
                    abscissa: a,
                    dim_estimate: Some(d),
                    r2: Some(r2),
                    counts,
                    flag: RowFlag::Ok,
                },
                Err(_) => {
                    let flag = if counts.iter().all(|&c| c == 0) {
                        RowFlag::Empty
                    } else {
                        RowFlag::Insufficient
                    };
                    SpectrumRow { abscissa: a, dim_estimate: None, r2: None, counts, flag }
                }
            }
        })
        .collect::<Vec<_>>();
    let model_line = vec![None; rows.len()];
    Ok(SpectrumReport { mode, tolerance: eps, rows, model_line })
}
