use super::schedule::SparseSchedule;
use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Finite binary word `ε_1 ... ε_n`, read as the dyadic rational
/// `Σ ε_j 2^-j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    digits: Vec<u8>,
}

impl DigitString {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = digits.iter().position(|&d| d > 1) {
            return Err(Error::domain(format!("digit at position {} is not binary", pos + 1)));
        }
        Ok(Self { digits })
    }

    /// Word of length `n` whose value is `numerator / 2^n`.
    pub fn from_value(numerator: &BigUint, n: usize) -> Result<Self> {
        if numerator.bits() as usize > n {
            return Err(Error::domain(format!("numerator does not fit in {n} digits")));
        }
        let digits = (1..=n).map(|j| numerator.bit((n - j) as u64) as u8).collect();
        Ok(Self { digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// The 1-indexed digit `ε_j`.
    pub fn digit(&self, j: usize) -> Option<u8> {
        j.checked_sub(1).and_then(|i| self.digits.get(i)).copied()
    }

    /// Exact numerator over `2^n`.
    pub fn numerator(&self) -> BigUint {
        let mut bytes = vec![0u8; self.digits.len().div_ceil(8)];
        for (i, &d) in self.digits.iter().rev().enumerate() {
            bytes[i / 8] |= d << (i % 8);
        }
        BigUint::from_bytes_le(&bytes)
    }

    /// Value rounded to the nearest double (exact for `n <= 53`).
    pub fn value_f64(&self) -> f64 {
        // Summing from the least significant digit keeps the rounding to a
        // single step at the top bits.
        self.digits
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &d)| acc + d as f64 * (-(i as f64 + 1.0)).exp2())
    }

    /// Fractional part of `2^e · x` as the exact pair
    /// `(numerator, denominator exponent)`.
    pub fn frac_shifted(&self, e: usize) -> (BigUint, usize) {
        let tail: Vec<u8> = self.digits.iter().skip(e).copied().collect();
        let n = tail.len();
        (DigitString { digits: tail }.numerator(), n)
    }

    /// Prefix of length `n` (or the whole word when shorter).
    pub fn prefix(&self, n: usize) -> Self {
        Self { digits: self.digits[..n.min(self.digits.len())].to_vec() }
    }

    /// Extends the word to length `n` following the forcing rule, with zeros
    /// on free positions.
    pub fn padded(&self, n: usize, schedule: &SparseSchedule) -> Self {
        let mut digits = self.digits.clone();
        for j in digits.len() + 1..=n {
            digits.push(schedule.role(j).forced_digit().unwrap_or(0));
        }
        Self { digits }
    }

    /// Index of the dyadic cube `I_{ε_1...ε_n}` at level `n`.
    pub fn cube_index(&self) -> Option<u64> {
        (self.digits.len() <= 62).then(|| {
            self.digits.iter().fold(0u64, |acc, &d| (acc << 1) | d as u64)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_roundtrip() {
        let w = DigitString::new(vec![1, 0, 1, 1]).unwrap();
        assert_eq!(w.numerator(), BigUint::from(11u32));
        assert_eq!(w.value_f64(), 11.0 / 16.0);
        assert_eq!(DigitString::from_value(&BigUint::from(11u32), 4).unwrap(), w);
        assert_eq!(w.cube_index(), Some(11));
        assert!(DigitString::from_value(&BigUint::from(16u32), 4).is_err());
        assert!(DigitString::new(vec![0, 2]).is_err());
    }

    #[test]
    fn long_words_are_exact() {
        let digits: Vec<u8> = (0..300).map(|i| (i % 3 == 0) as u8).collect();
        let w = DigitString::new(digits).unwrap();
        let back = DigitString::from_value(&w.numerator(), 300).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn shifted_fraction() {
        let w = DigitString::new(vec![0, 0, 0, 0, 1, 0]).unwrap();
        let (num, n) = w.frac_shifted(3);
        assert_eq!((num, n), (BigUint::from(2u32), 3));
    }
}
