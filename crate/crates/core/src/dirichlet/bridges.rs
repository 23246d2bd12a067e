use super::halfline::{HalfLineFunction, Layout};
use super::series::DirichletSeries;
use crate::error::{Error, Result};
use crate::fourier::BlockFunction;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Largest `N_max` ever materialised from a half-line function.
pub const DS_HARD_CAP: usize = 1_000_000;

const BESSEL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselReport {
    /// `Σ |b_k|²`.
    pub coefficient_energy: f64,
    /// `‖G‖₂²`.
    pub function_energy: f64,
}

impl BesselReport {
    pub fn holds(&self) -> bool {
        self.coefficient_energy <= self.function_energy * (1.0 + BESSEL_SLACK)
    }
}

/// `F = a_k` on `[k, k + 1)`.
pub fn fs_to_fi(coeffs: &[Complex64]) -> Result<HalfLineFunction> {
    HalfLineFunction::unit_grid(coeffs.to_vec())
}

/// `G = b_k / (log(k+1) - log k)^{1/2}` on `[log k, log(k+1))`.
pub fn ds_to_fi(g: &DirichletSeries) -> Result<HalfLineFunction> {
    let values = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, b)| b / (1.0 / (i + 1) as f64).ln_1p().sqrt())
        .collect();
    HalfLineFunction::log_grid(values)
}

/// Largest `k` with `log(k + 1)` inside the support, before any cap.
fn natural_n_max(f: &HalfLineFunction, cap: usize) -> usize {
    if let Layout::Log = f.layout() {
        return f.pieces().min(cap);
    }
    let end = f.support_end();
    if end < 2f64.ln() {
        return 0;
    }
    if end > ((cap + 2) as f64).ln() {
        return cap;
    }
    let mut n = (end.exp().floor() as usize).saturating_sub(1).max(1);
    while n > 0 && ((n + 1) as f64).ln() > end {
        n -= 1;
    }
    while n < cap && ((n + 2) as f64).ln() <= end {
        n += 1;
    }
    n.min(cap)
}

/// `b_k = ∫_{log k}^{log(k+1)} G(u) e^{u/2} du` for `k <= N_max`, with
/// `N_max` the largest `k` such that `log(k+1)` lies in the support, capped
/// at `n_cap` (default [`DS_HARD_CAP`]). Fails if the Bessel bound is
/// violated beyond rounding.
pub fn fi_to_ds(
    f: &HalfLineFunction,
    n_cap: Option<usize>,
) -> Result<(DirichletSeries, BesselReport)> {
    let cap = n_cap.unwrap_or(DS_HARD_CAP).min(DS_HARD_CAP);
    let n_max = natural_n_max(f, cap);
    let pieces = f.pieces();
    let values = f.values();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max];
    let mut p = 0;
    while p < pieces && f.breakpoint(p + 1) <= 0.0 {
        p += 1;
    }
    for (i, out) in coeffs.iter_mut().enumerate() {
        let k = i + 1;
        let (lo, hi) = ((k as f64).ln(), ((k + 1) as f64).ln());
        let (sk, sk1) = ((k as f64).sqrt(), ((k + 1) as f64).sqrt());
        while p < pieces && f.breakpoint(p + 1) <= lo {
            p += 1;
        }
        let mut q = p;
        let mut acc = Complex64::new(0.0, 0.0);
        while q < pieces {
            let (a, b) = (f.breakpoint(q), f.breakpoint(q + 1));
            if a >= hi {
                break;
            }
            let w = match (a <= lo, b >= hi) {
                (true, true) => 2.0 / (sk1 + sk),
                (true, false) => 2.0 * ((0.5 * b).exp() - sk),
                (false, true) => 2.0 * (sk1 - (0.5 * a).exp()),
                (false, false) => 2.0 * ((0.5 * b).exp() - (0.5 * a).exp()),
            };
            acc += values[q] * w;
            if b >= hi {
                break;
            }
            q += 1;
        }
        *out = acc;
        p = q;
    }
    let series = DirichletSeries::new(coeffs)?;
    let report = BesselReport {
        coefficient_energy: series.h2_norm().powi(2),
        function_energy: f.norm_l2().powi(2),
    };
    if !report.holds() {
        return Err(Error::Spectrum(format!(
            "Bessel bound violated: {} > {}",
            report.coefficient_energy, report.function_energy
        )));
    }
    Ok((series, report))
}

/// `fi_to_ds(fs_to_fi(a))` where `a_k`, `k >= 0`, are the nonnegative
/// frequencies of `f`; `N_max` is the frequency ceiling of `f` (at least 1).
pub fn compose_multifractal_ds(f: &BlockFunction) -> Result<(DirichletSeries, BesselReport)> {
    let trig = f.to_trig();
    let ceiling = trig.n_max().max(0) as usize;
    let coeffs: Vec<Complex64> = (0..=ceiling as i64).map(|k| trig.coeff(k)).collect();
    let big_f = fs_to_fi(&coeffs)?;
    fi_to_ds(&big_f, Some(ceiling.max(1)))
}

/// Largest value of `|∫_0^R G e^{itu}du - Σ_{k<=n} b_k k^{-1/2+it}| /
/// ((1+|t|) norm)` over a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeReport {
    pub constant: f64,
    /// `(n, R, t)` where the constant is attained.
    pub worst: (usize, f64, f64),
    pub evaluated: usize,
}

/// Scans `R ∈ {log n, log n + ½ log(1 + 1/n)}` for each `n` and `t`.
pub fn bridge_scan(
    series: &DirichletSeries,
    fun: &HalfLineFunction,
    norm: f64,
    ns: &[usize],
    ts: &[f64],
) -> Result<BridgeReport> {
    if !(norm > 0.0) {
        return Err(Error::domain("bridge scan needs a nonzero norm"));
    }
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&n) = sorted.iter().find(|&&n| ((n + 1) as f64).ln() > fun.support_end() * (1.0 + 1e-15)) {
        return Err(Error::domain(format!("n = {n} beyond the half-line support")));
    }
    let rows: Vec<Vec<(f64, (usize, f64, f64))>> = ts
        .par_iter()
        .map(|&t| {
            let sums = series.partial_sums(&sorted, t)?;
            let mut row = Vec::new();
            for (&n, s) in sorted.iter().zip(sums) {
                let log_n = (n as f64).ln();
                for r in [log_n, log_n + 0.5 * (1.0 / n as f64).ln_1p()] {
                    let gap = (fun.partial_integral(r, t)? - s).norm();
                    row.push((gap / ((1.0 + t.abs()) * norm), (n, r, t)));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut report = BridgeReport {
        constant: 0.0,
        worst: (0, 0.0, 0.0),
        evaluated: 0,
    };
    for (c, at) in rows.into_iter().flatten() {
        report.evaluated += 1;
        if c > report.constant {
            report.constant = c;
            report.worst = at;
        }
    }
    Ok(report)
}

/// Bridge from a Dirichlet series: `G = ds_to_fi(g)`, norm `‖g‖`.
pub fn dstofi_scan(g: &DirichletSeries, ns: &[usize], ts: &[f64]) -> Result<BridgeReport> {
    let big_g = ds_to_fi(g)?;
    bridge_scan(g, &big_g, g.h2_norm(), ns, ts)
}

/// Bridge from a half-line function: `b = fi_to_ds(G)`, norm `‖G‖₂`.
pub fn fitods_scan(big_g: &HalfLineFunction, ns: &[usize], ts: &[f64]) -> Result<BridgeReport> {
    let (b, _) = fi_to_ds(big_g, None)?;
    if let Some(&n) = ns.iter().find(|&&n| n > b.n_max()) {
        return Err(Error::domain(format!("n = {n} beyond N_max = {}", b.n_max())));
    }
    bridge_scan(&b, big_g, big_g.norm_l2(), ns, ts)
}
