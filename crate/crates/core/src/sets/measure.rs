use super::digits::DigitString;
use super::schedule::{PositionRole, SparseSchedule};
use crate::dyadic::DyadicCube;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The measure carried by `K`: Bernoulli(δ) digits on free positions, forced
/// digits elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeasureRule {
    pub schedule: SparseSchedule,
    pub delta: f64,
}

impl KMeasureRule {
    pub fn new(schedule: SparseSchedule, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!("delta = {delta} must lie in [0, 1]")));
        }
        Ok(Self { schedule, delta })
    }

    /// Probability of digit `d` at position `j`.
    pub fn digit_probability(&self, j: usize, d: u8) -> f64 {
        match self.schedule.role(j).forced_digit() {
            Some(f) => (f == d) as u8 as f64,
            None if d == 1 => self.delta,
            None => 1.0 - self.delta,
        }
    }

    /// `log2 m(I_n)` of the cube spelled by `word` (`-∞` when inadmissible).
    pub fn log2_mass(&self, word: &DigitString) -> f64 {
        word.digits()
            .iter()
            .enumerate()
            .map(|(i, &d)| self.digit_probability(i + 1, d).log2())
            .sum()
    }
}

/// True when every forced position present in the word holds its forced digit.
pub fn k_admissible(word: &DigitString, schedule: &SparseSchedule) -> bool {
    word.digits().iter().enumerate().all(|(i, &d)| {
        schedule.role(i + 1).forced_digit().is_none_or(|f| f == d)
    })
}

/// Binary digits `ε_1 ... ε_j` of a cube at level `j`.
pub fn cube_word(cube: &DyadicCube) -> DigitString {
    let j = cube.level() as usize;
    let digits = (1..=j).map(|i| ((cube.index() >> (j - i)) & 1) as u8).collect();
    DigitString::new(digits).expect("bits are binary")
}

/// `m(λ) = Π_{j∈Ω_n} δ^{ε_j}(1-δ)^{1-ε_j}`, or 0 when `λ` is not admissible.
pub fn measure_mass(rule: &KMeasureRule, cube: &DyadicCube) -> f64 {
    let word = cube_word(cube);
    word.digits()
        .iter()
        .enumerate()
        .map(|(i, &d)| rule.digit_probability(i + 1, d))
        .product()
}

/// Mass of the plain Bernoulli(δ) measure, ignoring the forcing rule.
pub fn bernoulli_mass(delta: f64, cube: &DyadicCube) -> f64 {
    let ones = cube.index().count_ones() as i32;
    let zeros = cube.level() as i32 - ones;
    delta.powi(ones) * (1.0 - delta).powi(zeros)
}

/// Indices of the admissible cubes at every level `0..=depth`.
pub fn admissible_grid(schedule: &SparseSchedule, depth: usize) -> Vec<Vec<u64>> {
    let mut levels = vec![vec![0u64]];
    for j in 1..=depth {
        let prev = &levels[j - 1];
        let next: Vec<u64> = match schedule.role(j) {
            PositionRole::Free => prev.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect(),
            role => {
                let d = role.forced_digit().unwrap() as u64;
                prev.iter().map(|&k| 2 * k + d).collect()
            }
        };
        levels.push(next);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(d: &[u8]) -> DigitString {
        DigitString::new(d.to_vec()).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let s = SparseSchedule::squares();
        assert!(k_admissible(&word(&[1, 1, 1, 0, 1, 0]), &s));
        assert!(!k_admissible(&word(&[1, 1, 1, 1]), &s));
        assert!(k_admissible(&word(&[0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0]), &s));
        assert!(k_admissible(&word(&[0, 1, 1, 0, 1]), &s));
        assert!(!k_admissible(&word(&[0, 1, 1, 0, 0]), &s));
    }

    #[test]
    fn mass_examples() {
        let s = SparseSchedule::squares();
        let rule = KMeasureRule::new(s.clone(), 0.3).unwrap();
        assert_eq!(measure_mass(&rule, &DyadicCube::root()), 1.0);
        let c = DyadicCube::new(6, 0b100010).unwrap();
        assert!((measure_mass(&rule, &c) - 0.147).abs() < 1e-15);
        let half = KMeasureRule::new(s.clone(), 0.5).unwrap();
        let c = DyadicCube::new(11, 0b01101000010).unwrap();
        assert!(k_admissible(&cube_word(&c), &s));
        assert_eq!(measure_mass(&half, &c), (-(s.u(11) as f64)).exp2());
        let bad = DyadicCube::new(4, 0b0001).unwrap();
        assert_eq!(measure_mass(&rule, &bad), 0.0);
    }

    #[test]
    fn admissible_grid_counts() {
        let s = SparseSchedule::squares();
        let g = admissible_grid(&s, 12);
        for (j, level) in g.iter().enumerate() {
            assert_eq!(level.len(), 1 << s.u(j));
            for &k in level {
                assert!(k_admissible(&cube_word(&DyadicCube::new(j as u32, k).unwrap()), &s));
            }
        }
    }
}
