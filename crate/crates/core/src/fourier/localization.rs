use super::trig::{grid_lp_norm, TrigPolynomial};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub j: usize,
    pub p: f64,
    /// `‖S_{2^j} f‖_p` over the circle.
    pub norm_p: f64,
    /// `(x, ratio)` for every qualifying sample.
    pub scored: Vec<(f64, f64)>,
    /// Minimal ratio; `None` when no sample qualified.
    pub delta: Option<f64>,
}

/// Scores `‖S_{2^j} f‖_{L^p(3 I_j(x))} j^{3/p} 2^{j/p} / |S_{2^j} f(x)|` at
/// each `x` with `|S_{2^j} f(x)| >= ‖S_{2^j} f‖_p`. Norms use a grid of
/// `2^{j+6}` points.
pub fn localization_check(
    f: &TrigPolynomial,
    j: usize,
    p: f64,
    xs: &[f64],
) -> Result<LocalizationReport> {
    if j == 0 || j > 24 {
        return Err(Error::domain(format!("level {j} outside 1..=24")));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let s = f.truncated(1 << j);
    let per_cell = 64usize;
    let len = per_cell << j;
    let values = s.dense_values(len)?;
    let pow: Vec<f64> = values.iter().map(|v| v.norm().powf(p)).collect();
    let norm_p = grid_lp_norm(&values, p);
    let cells = 1i64 << j;
    let jf = j as f64;
    let scale = jf.powf(3.0 / p) * jf.exp2().powf(1.0 / p);
    let mut scored = Vec::new();
    for &x in xs {
        let sx = s.eval(x).norm();
        if !(sx >= norm_p) || sx == 0.0 {
            continue;
        }
        let cell = (x.rem_euclid(1.0) * cells as f64).floor() as i64;
        let local: f64 = (cell - 1..=cell + 1)
            .flat_map(|c| {
                let start = c.rem_euclid(cells) as usize * per_cell;
                pow[start..start + per_cell].iter()
            })
            .sum::<f64>()
            / len as f64;
        scored.push((x, local.powf(1.0 / p) * scale / sx));
    }
    let delta = scored.iter().map(|r| r.1).reduce(f64::min);
    Ok(LocalizationReport {
        j,
        p,
        norm_p,
        scored,
        delta,
    })
}
