use super::digits::DigitString;
use super::measure::k_admissible;
use super::schedule::SparseSchedule;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use serde::Serialize;
use std::f64::consts::PI;

/// Phase that centres the modulation `sin(2π 2^{m_k} x + φ)` on the
/// interval `[1/2, 3/4]` where `frac(2^{m_k} x)` lives for points of `K`.
pub const K_PHASE: f64 = -0.75 * PI;

/// Exact location of a point of `K` relative to one forcing block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SineReport {
    pub k: usize,
    pub m: usize,
    /// `frac(2^{m-1} x)`; lies in `[1/4, 3/8]` on `K`.
    pub frac: f64,
    /// Exact membership of `frac` in `[1/4, 3/8]`.
    pub in_interval: bool,
    /// `sin(2π 2^{m-1} x)`.
    pub sine: f64,
    /// `frac(2^m x)`; lies in `[1/2, 3/4]` on `K`.
    pub frac_m: f64,
    /// `sin(2π 2^m x)` as literally written for the block frequency.
    pub sine_m: f64,
    /// `sin(2π 2^m x + K_PHASE)`, the modulation used by the Fourier blocks.
    pub modulation: f64,
}

fn ratio_f64(num: &BigUint, pow2: usize) -> f64 {
    // Keep the top 64 bits; the rest is below double precision.
    let bits = num.bits() as usize;
    let shift = bits.saturating_sub(64);
    let top: BigUint = num >> shift;
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    top * ((shift as f64) - pow2 as f64).exp2()
}

/// Reports, for every `k` with `m_k <= n`, where `2^{m_k-1} x` and `2^{m_k} x`
/// fall modulo 1. The word is padded along the forcing rule when a block
/// straddles its end.
pub fn sine_check(word: &DigitString, schedule: &SparseSchedule) -> Result<Vec<SineReport>> {
    if !k_admissible(word, schedule) {
        return Err(Error::domain("word is not admissible"));
    }
    let n = word.len();
    let terms = schedule.terms_up_to(n);
    let padded = word.padded(terms.last().map_or(n, |&m| (m + 2).max(n)), schedule);
    Ok(terms
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let (num, pow2) = padded.frac_shifted(m - 1);
            let one: BigUint = BigUint::from(1u32) << pow2;
            let four = &num * 4u32;
            let eight = &num * 8u32;
            let in_interval = four >= one && eight <= &one * 3u32;
            let frac = ratio_f64(&num, pow2);
            let (num_m, pow2_m) = padded.frac_shifted(m);
            let frac_m = ratio_f64(&num_m, pow2_m);
            SineReport {
                k: i + 1,
                m,
                frac,
                in_interval,
                sine: (2.0 * PI * frac).sin(),
                frac_m,
                sine_m: (2.0 * PI * frac_m).sin(),
                modulation: (2.0 * PI * frac_m + K_PHASE).sin(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frequencies {
    /// `(1/n) Σ_{j<=n} ε_j`.
    pub full: f64,
    /// `(1/u_n) Σ_{j∈Ω_n} ε_j` (0 when `Ω_n` is empty).
    pub restricted: f64,
}

pub fn empirical_frequency(word: &DigitString, schedule: &SparseSchedule) -> Frequencies {
    running_frequency(word, schedule).last().copied().unwrap_or(Frequencies {
        full: 0.0,
        restricted: 0.0,
    })
}

/// Frequencies of every prefix `ε_1 ... ε_n`, `n = 1..=len`.
pub fn running_frequency(word: &DigitString, schedule: &SparseSchedule) -> Vec<Frequencies> {
    let (mut ones, mut free, mut free_ones) = (0usize, 0usize, 0usize);
    word.digits()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let j = i + 1;
            ones += d as usize;
            if schedule.is_free(j) {
                free += 1;
                free_ones += d as usize;
            }
            Frequencies {
                full: ones as f64 / j as f64,
                restricted: if free == 0 { 0.0 } else { free_ones as f64 / free as f64 },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(d: &[u8]) -> DigitString {
        DigitString::new(d.to_vec()).unwrap()
    }

    #[test]
    fn sine_check_first_block() {
        let s = SparseSchedule::squares();
        let r = sine_check(&word(&[0, 0, 0, 0, 1, 0]), &s).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].frac, 0.25);
        assert!(r[0].in_interval);
        assert!((r[0].sine - 1.0).abs() < 1e-15);
        assert_eq!(r[0].frac_m, 0.5);
        assert!(r[0].modulation >= 0.5f64.sqrt() - 1e-12);
    }

    #[test]
    fn sine_check_upper_extreme() {
        let s = SparseSchedule::squares();
        // All free digits after the first block set to 1.
        let w = word(&[0, 0, 0, 0, 1, 0, 1, 1]);
        let r = sine_check(&w, &s).unwrap();
        assert!(r[0].in_interval && r[0].frac < 0.375);
        assert!(r[0].sine >= 0.5f64.sqrt());
        assert!(sine_check(&word(&[0, 0, 0, 1]), &s).is_err());
    }

    #[test]
    fn straddling_block_is_padded() {
        let s = SparseSchedule::squares();
        let r = sine_check(&word(&[1, 1, 1, 0]), &s).unwrap();
        assert_eq!(r[0].frac, 0.25);
    }

    #[test]
    fn frequency_examples() {
        let s = SparseSchedule::squares();
        let f = empirical_frequency(&word(&[1; 8]), &s);
        assert_eq!((f.full, f.restricted), (1.0, 1.0));
        let f = empirical_frequency(&word(&[0; 8]), &s);
        assert_eq!((f.full, f.restricted), (0.0, 0.0));
        let forced = word(&[0; 0]).padded(16, &s);
        let f = empirical_frequency(&forced, &s);
        assert_eq!(f.full, 0.125);
        assert_eq!(f.restricted, 0.0);
    }
}
