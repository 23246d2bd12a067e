use super::digits::DigitString;
use super::entropy::delta_of_alpha;
use super::measure::{k_admissible, KMeasureRule};
use super::schedule::SparseSchedule;
use super::checks::empirical_frequency;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Digit distribution used by [`sample_point`].
#[derive(Debug, Clone, PartialEq)]
pub enum SampleRule {
    /// Bernoulli(δ) on free positions, forced digits elsewhere.
    KMeasure(KMeasureRule),
    /// Bernoulli(δ) at every position.
    Plain { delta: f64 },
    /// Points of `E_δ ∩ K` with `δ = δ(α)`: the K-measure at that δ.
    Intersection { alpha: f64, schedule: SparseSchedule },
}

impl SampleRule {
    fn resolve(&self) -> Result<(Option<SparseSchedule>, f64)> {
        match self {
            SampleRule::KMeasure(rule) => Ok((Some(rule.schedule.clone()), rule.delta)),
            SampleRule::Plain { delta } => {
                if !(0.0..=1.0).contains(delta) {
                    return Err(Error::domain(format!("delta = {delta} must lie in [0, 1]")));
                }
                Ok((None, *delta))
            }
            SampleRule::Intersection { alpha, schedule } => {
                Ok((Some(schedule.clone()), delta_of_alpha(*alpha)?))
            }
        }
    }
}

/// Deterministic random word of length `depth`.
pub fn sample_point(rule: &SampleRule, depth: usize, seed: u64) -> Result<DigitString> {
    if depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    let (schedule, delta) = rule.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digits = (1..=depth)
        .map(|j| {
            let forced = schedule.as_ref().and_then(|s| s.role(j).forced_digit());
            // Draw on every position so the stream does not depend on the rule.
            let draw = (rng.gen::<f64>() < delta) as u8;
            forced.unwrap_or(draw)
        })
        .collect();
    DigitString::new(digits)
}

/// One row of a sample batch.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub seed: u64,
    pub word: DigitString,
    pub admissible: bool,
    pub freq_full: f64,
    pub freq_restricted: f64,
}

pub const SAMPLE_CSV_HEADER: &str =
    "seed,depth,value_numerator,value_denominator_pow2,admissible,freq_full,freq_restricted";

impl SampleRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.12},{:.12}",
            self.seed,
            self.word.len(),
            self.word.numerator(),
            self.word.len(),
            self.admissible,
            self.freq_full,
            self.freq_restricted
        )
    }
}

/// Samples seeds `first_seed .. first_seed + count`.
pub fn sample_batch(
    rule: &SampleRule,
    depth: usize,
    first_seed: u64,
    count: usize,
    schedule: &SparseSchedule,
) -> Result<Vec<SampleRecord>> {
    (0..count as u64)
        .map(|i| {
            let seed = first_seed + i;
            let word = sample_point(rule, depth, seed)?;
            let freq = empirical_frequency(&word, schedule);
            Ok(SampleRecord {
                seed,
                admissible: k_admissible(&word, schedule),
                freq_full: freq.full,
                freq_restricted: freq.restricted,
                word,
            })
        })
        .collect()
}

pub fn batch_to_csv(records: &[SampleRecord]) -> String {
    let mut out = String::from(SAMPLE_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_mode_is_admissible_and_deterministic() {
        let rule = SampleRule::KMeasure(KMeasureRule::new(SparseSchedule::squares(), 0.4).unwrap());
        for seed in 0..50 {
            let w = sample_point(&rule, 64, seed).unwrap();
            assert!(k_admissible(&w, &SparseSchedule::squares()));
            assert_eq!(w, sample_point(&rule, 64, seed).unwrap());
        }
        assert_ne!(sample_point(&rule, 64, 1).unwrap(), sample_point(&rule, 64, 2).unwrap());
    }

    #[test]
    fn degenerate_delta_gives_forced_ones_only() {
        let s = SparseSchedule::squares();
        let rule = SampleRule::KMeasure(KMeasureRule::new(s.clone(), 0.0).unwrap());
        let w = sample_point(&rule, 20, 9).unwrap();
        for j in 1..=20 {
            let expected = (j == 5 || j == 10 || j == 17) as u8;
            assert_eq!(w.digit(j), Some(expected), "position {j}");
        }
    }

    #[test]
    fn csv_rows() {
        let s = SparseSchedule::squares();
        let rule = SampleRule::Plain { delta: 0.3 };
        let batch = sample_batch(&rule, 16, 5, 3, &s).unwrap();
        let csv = batch_to_csv(&batch);
        assert!(csv.starts_with(SAMPLE_CSV_HEADER));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("5,16,"));
    }
}
