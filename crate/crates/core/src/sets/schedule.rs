use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Role of a digit position with respect to the sparse forcing rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionRole {
    Free,
    /// Position `m_k` or `m_k + 2`: digit forced to 0.
    ForcedZero,
    /// Position `m_k + 1`: digit forced to 1.
    ForcedOne,
}

impl PositionRole {
    pub fn forced_digit(self) -> Option<u8> {
        match self {
            PositionRole::Free => None,
            PositionRole::ForcedZero => Some(0),
            PositionRole::ForcedOne => Some(1),
        }
    }
}

/// The sparse sequence `(m_k)_{k>=1}` whose positions `m_k, m_k+1, m_k+2`
/// are forced to the digits `0, 1, 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum SparseSchedule {
    /// `m_k = (k + 1)^2`.
    Squares,
    /// Finite explicit list; no forcing beyond its last entry.
    Explicit { terms: Vec<usize> },
}

impl Default for SparseSchedule {
    fn default() -> Self {
        SparseSchedule::Squares
    }
}

impl SparseSchedule {
    pub fn squares() -> Self {
        SparseSchedule::Squares
    }

    /// Validates `m_1 >= 1` and gaps `m_{k+1} - m_k >= 3`.
    pub fn explicit(terms: Vec<usize>) -> Result<Self> {
        if terms.first().is_some_and(|&m| m == 0) {
            return Err(Error::domain("schedule positions start at 1"));
        }
        if let Some(w) = terms.windows(2).find(|w| w[1] < w[0] + 3) {
            return Err(Error::domain(format!(
                "schedule gap {} -> {} is smaller than 3",
                w[0], w[1]
            )));
        }
        Ok(SparseSchedule::Explicit { terms })
    }

    /// `m_k` for `k >= 1`.
    pub fn m(&self, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        match self {
            SparseSchedule::Squares => Some((k + 1) * (k + 1)),
            SparseSchedule::Explicit { terms } => terms.get(k - 1).copied(),
        }
    }

    /// All `m_k <= n`, in increasing order.
    pub fn terms_up_to(&self, n: usize) -> Vec<usize> {
        (1..).map_while(|k| self.m(k).filter(|&m| m <= n)).collect()
    }

    /// `card{k : m_k <= n}`.
    pub fn count_up_to(&self, n: usize) -> usize {
        self.terms_up_to(n).len()
    }

    /// Largest `m_k <= j`, if any.
    fn last_term_at_most(&self, j: usize) -> Option<usize> {
        match self {
            SparseSchedule::Squares => {
                let r = j.isqrt();
                (r >= 2).then_some(r * r)
            }
            SparseSchedule::Explicit { terms } => {
                let idx = terms.partition_point(|&m| m <= j);
                idx.checked_sub(1).map(|i| terms[i])
            }
        }
    }

    /// Role of the 1-indexed digit position `j`.
    pub fn role(&self, j: usize) -> PositionRole {
        match self.last_term_at_most(j).map(|m| j - m) {
            Some(0) | Some(2) => PositionRole::ForcedZero,
            Some(1) => PositionRole::ForcedOne,
            _ => PositionRole::Free,
        }
    }

    /// Membership of `j` in `Ω_n` for any `n >= j`.
    pub fn is_free(&self, j: usize) -> bool {
        j >= 1 && self.role(j) == PositionRole::Free
    }

    /// `u_n = card(Ω_n)`.
    pub fn u(&self, n: usize) -> usize {
        let forced: usize = self.terms_up_to(n).iter().map(|&m| (n - m + 1).min(3)).sum();
        n - forced
    }

    /// Free positions `Ω_n` in increasing order.
    pub fn free_positions(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&j| self.is_free(j)).collect()
    }
}
