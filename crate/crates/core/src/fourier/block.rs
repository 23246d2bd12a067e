use super::chi::{build_chi, fejer_approx, CoverSpec};
use super::trig::TrigPolynomial;
use crate::error::{Error, Result};
use crate::sets::SparseSchedule;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// `Q(x) = sin(2π 2^m x + φ) P(x)`, computed on coefficients:
/// `Q̂(n) = (e^{iφ} P̂(n - 2^m) - e^{-iφ} P̂(n + 2^m)) / 2i`.
pub fn build_q(p: &TrigPolynomial, m: usize, phase: f64) -> Result<TrigPolynomial> {
    if !(1..=40).contains(&m) {
        return Err(Error::domain(format!("modulation exponent {m} outside 1..=40")));
    }
    let half_band = 1u64 << (m - 1);
    if let Some((_, hi)) = p.support_extent() {
        if hi > half_band {
            return Err(Error::Spectrum(format!(
                "spectrum reaches {hi}, beyond 2^{} = {half_band}",
                m - 1
            )));
        }
    }
    let shift = 1i64 << m;
    let n = shift + half_band as i64;
    let plus = Complex64::from_polar(1.0, phase);
    let minus = plus.conj();
    let two_i = Complex64::new(0.0, 2.0);
    let q = |k: i64| (plus * p.coeff(k - shift) - minus * p.coeff(k + shift)) / two_i;
    if p.is_real() {
        let half: Vec<Complex64> = (0..=n).map(q).collect();
        TrigPolynomial::from_nonnegative_half(&half)
    } else {
        TrigPolynomial::new(-n, (-n..=n).map(q).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Real,
    Imaginary,
}

impl Channel {
    pub fn of_block(k: usize) -> Self {
        if k % 2 == 0 {
            Channel::Real
        } else {
            Channel::Imaginary
        }
    }

    fn unit(self) -> Complex64 {
        match self {
            Channel::Real => Complex64::new(1.0, 0.0),
            Channel::Imaginary => Complex64::new(0.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub k: usize,
    pub m: usize,
    pub weight: f64,
    pub channel: Channel,
    pub phase: f64,
    /// The nonnegative polynomial before modulation.
    pub p: TrigPolynomial,
    pub q: TrigPolynomial,
}

impl Block {
    /// `M_k = 2^{m-1}`.
    pub fn band_low(&self) -> u64 {
        1 << (self.m - 1)
    }

    /// `N_k = 3 · 2^{m-1}`.
    pub fn band_high(&self) -> u64 {
        3 << (self.m - 1)
    }

    /// `Q(x)` through the product form.
    pub fn q_value(&self, x: f64) -> f64 {
        let t = ((1u64 << self.m) as f64 * x).rem_euclid(1.0);
        (TAU * t + self.phase).sin() * self.p.eval(x).re
    }

    fn contribution(&self, n: u64, x: f64) -> Complex64 {
        let v = if n >= self.band_high() {
            self.q_value(x)
        } else if n < self.band_low() {
            0.0
        } else {
            self.q.partial_sum(n, x).re
        };
        self.channel.unit() * (self.weight * v)
    }
}

/// `f = c + Σ_k w_k Q_k`, real blocks at even `k`, imaginary at odd `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFunction {
    pub schedule: SparseSchedule,
    pub constant: Complex64,
    pub blocks: Vec<Block>,
}

impl BlockFunction {
    pub fn empty(schedule: SparseSchedule) -> Self {
        Self {
            schedule,
            constant: Complex64::new(0.0, 0.0),
            blocks: Vec::new(),
        }
    }

    /// `S_n f(x)`: whole blocks below `n`, the straddling block truncated.
    pub fn partial_sum(&self, n: u64, x: f64) -> Complex64 {
        self.constant
            + self
                .blocks
                .iter()
                .map(|b| b.contribution(n, x))
                .sum::<Complex64>()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.partial_sum(u64::MAX, x)
    }

    /// `{N_k}` in block order.
    pub fn band_schedule(&self) -> Vec<u64> {
        self.blocks.iter().map(Block::band_high).collect()
    }

    /// Exact integer check that the bands `[M_k, N_k]` are pairwise
    /// disjoint and every block's coefficients sit inside its band.
    pub fn check_spectra(&self) -> Result<()> {
        for b in &self.blocks {
            if let Some((lo, hi)) = b.q.support_extent() {
                if lo < b.band_low() || hi > b.band_high() {
                    return Err(Error::Spectrum(format!(
                        "block {} has support [{lo}, {hi}] outside [{}, {}]",
                        b.k,
                        b.band_low(),
                        b.band_high()
                    )));
                }
            }
        }
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                if a.band_low() <= b.band_high() && b.band_low() <= a.band_high() {
                    return Err(Error::Spectrum(format!(
                        "bands of blocks {} and {} overlap",
                        a.k, b.k
                    )));
                }
            }
        }
        Ok(())
    }

    /// `‖f‖₂` by Parseval over disjoint bands.
    pub fn norm_l2(&self) -> f64 {
        (self.constant.norm_sqr()
            + self
                .blocks
                .iter()
                .map(|b| b.weight * b.weight * b.q.energy())
                .sum::<f64>())
        .sqrt()
    }

    /// Dense-coefficient form of the whole function.
    pub fn to_trig(&self) -> TrigPolynomial {
        self.blocks.iter().fold(
            TrigPolynomial::constant(self.constant),
            |acc, b| {
                let scaled = TrigPolynomial::new(
                    b.q.n_min(),
                    b.q.coeffs()
                        .iter()
                        .map(|c| c * b.channel.unit() * b.weight)
                        .collect(),
                )
                .expect("finite coefficients");
                acc.add(&scaled)
            },
        )
    }

    /// `self + c · other`, requiring identical block layouts.
    pub fn add_scaled(&self, c: f64, other: &Self) -> Result<Self> {
        let blocks = if other.blocks.is_empty() {
            self.blocks.clone()
        } else if self.blocks.is_empty() {
            other
                .blocks
                .iter()
                .map(|b| Block {
                    weight: 1.0,
                    p: b.p.scaled(c * b.weight),
                    q: b.q.scaled(c * b.weight),
                    ..b.clone()
                })
                .collect()
        } else {
            if self.blocks.len() != other.blocks.len() {
                return Err(Error::domain("block layouts differ"));
            }
            self.blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| {
                    if a.k != b.k || a.m != b.m || a.phase != b.phase || a.channel != b.channel {
                        return Err(Error::domain(format!("block {} layouts differ", a.k)));
                    }
                    Ok(Block {
                        weight: 1.0,
                        p: a.p.scaled(a.weight).add(&b.p.scaled(c * b.weight)),
                        q: a.q.scaled(a.weight).add(&b.q.scaled(c * b.weight)),
                        ..a.clone()
                    })
                })
                .collect::<Result<_>>()?
        };
        Ok(Self {
            schedule: self.schedule.clone(),
            constant: self.constant + other.constant * c,
            blocks,
        })
    }
}

/// Construction knobs for [`build_block_function`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockConfig {
    pub s: f64,
    pub p: f64,
    /// Phase `φ` of the modulating sine.
    pub phase: f64,
}

/// Per-block measurements taken during construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStats {
    pub k: usize,
    pub m: usize,
    pub cover_size: usize,
    pub cap: usize,
    pub chi_norm_pp: f64,
    /// `2^{(m-1)(1-s)/p}`.
    pub amplitude: f64,
    /// Minimum of `P` over the dense grid, divided by the amplitude.
    pub fejer_min: f64,
    /// Minimum of `P(x) / amplitude` over covered points.
    pub lower_constant: Option<f64>,
    pub covered_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildReport {
    pub blocks: Vec<BlockStats>,
    pub norm_l2: f64,
}

/// `max(⌊k/2⌋, 1)^{-2}`.
pub fn block_weight(k: usize) -> f64 {
    let j = (k / 2).max(1) as f64;
    1.0 / (j * j)
}

fn stage(stage: &'static str, k: usize, message: impl Into<String>) -> Error {
    Error::Stage {
        stage,
        k,
        message: message.into(),
    }
}

fn build_block(
    k: usize,
    cover: &CoverSpec,
    schedule: &SparseSchedule,
    config: &BlockConfig,
    points: &[f64],
) -> Result<(Block, BlockStats)> {
    let m = schedule
        .m(k)
        .ok_or_else(|| stage("schedule", k, "no schedule term"))?;
    if cover.level + 1 != m {
        return Err(stage(
            "cover",
            k,
            format!("cover level {} differs from m - 1 = {}", cover.level, m - 1),
        ));
    }
    let chi = build_chi(cover).map_err(|e| stage("chi", k, e.to_string()))?;
    let h = (-(cover.level as f64)).exp2();
    let chi_norm_pp = chi.norm_pp(config.p);
    if chi_norm_pp > 3.0 * cover.len() as f64 * h * (1.0 + 1e-12) {
        return Err(stage("chi", k, format!("norm {chi_norm_pp} above 3 card h")));
    }
    let order = 1usize << (m - 1);
    let len = 1usize << (m + 2);
    let samples = chi.sample(len);
    if samples.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(stage("chi", k, "bump leaves [0, 1]"));
    }
    let amplitude = ((m - 1) as f64 * (1.0 - config.s) / config.p).exp2();
    let fejer = fejer_approx(&samples, order).map_err(|e| stage("fejer", k, e.to_string()))?;
    let fejer_min = fejer
        .dense_values(len)?
        .iter()
        .map(|v| v.re)
        .fold(f64::INFINITY, f64::min);
    if fejer_min < -1e-9 {
        return Err(stage("fejer", k, format!("minimum {fejer_min} below -1e-9")));
    }
    let p = fejer.scaled(amplitude);
    let q = build_q(&p, m, config.phase).map_err(|e| stage("modulation", k, e.to_string()))?;
    let block = Block {
        k,
        m,
        weight: block_weight(k),
        channel: Channel::of_block(k),
        phase: config.phase,
        p,
        q,
    };
    if let Some((lo, hi)) = block.q.support_extent() {
        if lo < block.band_low() || hi > block.band_high() {
            return Err(stage("spectrum", k, format!("support [{lo}, {hi}] leaves the band")));
        }
    }
    let covered: Vec<f64> = points.iter().copied().filter(|&x| cover.covers(x)).collect();
    let lower_constant = covered
        .par_iter()
        .map(|&x| fejer.eval(x).re)
        .reduce_with(f64::min);
    let stats = BlockStats {
        k,
        m,
        cover_size: cover.len(),
        cap: cover.cap,
        chi_norm_pp,
        amplitude,
        fejer_min,
        lower_constant,
        covered_points: covered.len(),
    };
    Ok((block, stats))
}

/// Builds one block per `(k, cover)` pair; `points` are the points of `G`
/// at which the lower constant of `P_k` is measured.
pub fn build_block_function(
    covers: &[(usize, CoverSpec)],
    schedule: &SparseSchedule,
    config: &BlockConfig,
    points: &[f64],
) -> Result<(BlockFunction, BuildReport)> {
    if !(config.p >= 1.0) || !(config.s > 0.0 && config.s <= 1.0) {
        return Err(Error::domain(format!(
            "need p >= 1 and s in (0, 1], got p = {}, s = {}",
            config.p, config.s
        )));
    }
    let built: Vec<(Block, BlockStats)> = covers
        .par_iter()
        .map(|(k, cover)| build_block(*k, cover, schedule, config, points))
        .collect::<Result<_>>()?;
    let (blocks, stats): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    let f = BlockFunction {
        schedule: schedule.clone(),
        constant: Complex64::new(0.0, 0.0),
        blocks,
    };
    f.check_spectra()?;
    let norm_l2 = f.norm_l2();
    Ok((
        f,
        BuildReport {
            blocks: stats,
            norm_l2,
        },
    ))
}

/// Growth surrogates of `|S_n f(x)|` along a schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceIndex {
    /// Max over the tail of `log|S_{n_q} f(x)| / log n_q`.
    pub beta_minus: f64,
    /// Min over the tail.
    pub beta_plus: f64,
    /// `(n_q, log|S_{n_q} f(x)| / log n_q)` for every schedule point.
    pub ratios: Vec<(u64, f64)>,
}

/// Tail statistics of `log|s_q| / log n_q`; the tail is the last `⌈Q/2⌉`
/// schedule points.
pub fn divergence_from_values(values: &[(u64, f64)]) -> Result<DivergenceIndex> {
    if values.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} schedule points, need at least 3",
            values.len()
        )));
    }
    if let Some(&(n, _)) = values.iter().find(|(n, _)| *n < 2) {
        return Err(Error::domain(format!("schedule point {n} must be at least 2")));
    }
    let ratios: Vec<(u64, f64)> = values
        .iter()
        .map(|&(n, v)| (n, v.abs().ln() / (n as f64).ln()))
        .collect();
    let tail = &ratios[ratios.len() - ratios.len().div_ceil(2)..];
    Ok(DivergenceIndex {
        beta_minus: tail.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max),
        beta_plus: tail.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
        ratios,
    })
}

pub fn fs_divergence_index(f: &BlockFunction, x: f64, schedule: &[u64]) -> Result<DivergenceIndex> {
    let values: Vec<(u64, f64)> = schedule
        .iter()
        .map(|&n| (n, f.partial_sum(n, x).norm()))
        .collect();
    divergence_from_values(&values)
}

/// `S_n` of a plain polynomial, for symmetry with [`BlockFunction::partial_sum`].
pub fn partial_sum(f: &TrigPolynomial, n: u64, x: f64) -> Complex64 {
    f.partial_sum(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_modulates_to_sine() {
        let one = TrigPolynomial::constant(Complex64::new(1.0, 0.0));
        let q = build_q(&one, 4, 0.0).unwrap();
        assert_eq!(q.support_extent(), Some((16, 16)));
        assert!((q.coeff(16).norm() - 0.5).abs() < 1e-15);
        // frac(16 x) = 1/4
        let x = 0.25 / 16.0 + 3.0 / 16.0;
        assert!((q.eval(x).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wide_spectrum_is_rejected() {
        let p = TrigPolynomial::new(0, vec![Complex64::new(0.0, 0.0); 10]).unwrap();
        assert!(build_q(&p, 4, 0.0).is_ok());
        let p = TrigPolynomial::new(9, vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(build_q(&p, 4, 0.0), Err(Error::Spectrum(_))));
    }

    #[test]
    fn weights_follow_pairs() {
        assert_eq!(block_weight(1), 1.0);
        assert_eq!(block_weight(3), 1.0);
        assert_eq!(block_weight(4), 0.25);
        assert_eq!(block_weight(7), 1.0 / 9.0);
    }

    #[test]
    fn empty_block_function_is_zero() {
        let f = BlockFunction::empty(SparseSchedule::squares());
        assert_eq!(f.eval(0.3), Complex64::new(0.0, 0.0));
        assert!(f.check_spectra().is_ok());
    }

    #[test]
    fn monofractal_ladder() {
        let v: Vec<(u64, f64)> = [16u64, 256, 4096, 65536]
            .iter()
            .map(|&n| (n, (n as f64).powf(0.25)))
            .collect();
        let d = divergence_from_values(&v).unwrap();
        assert!((d.beta_minus - 0.25).abs() < 1e-15 && (d.beta_plus - 0.25).abs() < 1e-15);
        assert!(divergence_from_values(&v[..2]).is_err());
    }
}
