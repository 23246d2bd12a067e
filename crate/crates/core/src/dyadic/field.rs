use super::cube::DyadicCube;
use crate::error::{Error, Result};
use serde_json::{Map, Value};

/// Deepest coefficient field we allocate (2^28 entries at the finest level).
pub const MAX_FIELD_DEPTH: usize = 28;

/// Per-level arrays of nonnegative coefficients `e_λ`, levels `0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    levels: Vec<Vec<f64>>,
    meta: Map<String, Value>,
}

impl CoefficientField {
    /// Builds a field, taking absolute values. Non-finite entries and
    /// wrongly sized levels are rejected.
    pub fn new(levels: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_meta(levels, Map::new())
    }

    pub fn with_meta(mut levels: Vec<Vec<f64>>, meta: Map<String, Value>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("a coefficient field needs at least level 0"));
        }
        if levels.len() - 1 > MAX_FIELD_DEPTH {
            return Err(Error::domain(format!(
                "depth {} exceeds the maximum {MAX_FIELD_DEPTH}",
                levels.len() - 1
            )));
        }
        for (j, level) in levels.iter_mut().enumerate() {
            if level.len() != 1usize << j {
                return Err(Error::domain(format!(
                    "level {j} has {} entries, expected {}",
                    level.len(),
                    1usize << j
                )));
            }
            for (k, v) in level.iter_mut().enumerate() {
                if !v.is_finite() {
                    return Err(Error::domain(format!("non-finite coefficient at ({j}, {k})")));
                }
                *v = v.abs();
            }
        }
        Ok(Self { levels, meta })
    }

    /// Field whose level-`j` entries are all `value(j)`.
    pub fn from_level_fn(max_depth: usize, value: impl Fn(usize) -> f64) -> Result<Self> {
        let levels = (0..=max_depth).map(|j| vec![value(j); 1 << j]).collect();
        Self::new(levels)
    }

    /// Field built entry by entry from `value(j, k)`.
    pub fn from_fn(max_depth: usize, value: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let levels = (0..=max_depth)
            .map(|j| (0..1usize << j).map(|k| value(j, k)).collect())
            .collect();
        Self::new(levels)
    }

    pub fn zeros(max_depth: usize) -> Result<Self> {
        Self::from_level_fn(max_depth, |_| 0.0)
    }

    pub fn max_depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.levels[j]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn get(&self, cube: &DyadicCube) -> Option<f64> {
        self.levels
            .get(cube.level() as usize)
            .and_then(|l| l.get(cube.index() as usize))
            .copied()
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut Map<String, Value> {
        &mut self.meta
    }

    pub fn set_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    /// `e_j(x)` for `j = 0..=J`, the coefficients along the chain `I_j(x)`.
    pub fn chain(&self, x: f64) -> Result<Vec<f64>> {
        let deepest = DyadicCube::of_point(x, self.max_depth() as u32)?;
        Ok(self.chain_of_leaf(deepest.index() as usize))
    }

    /// Chain of coefficients above the finest-level cube `leaf`.
    pub fn chain_of_leaf(&self, leaf: usize) -> Vec<f64> {
        let depth = self.max_depth();
        (0..=depth).map(|j| self.levels[j][leaf >> (depth - j)]).collect()
    }

    /// Multiplies every entry by `c >= 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let levels = self
            .levels
            .iter()
            .map(|l| l.iter().map(|v| v * c).collect())
            .collect();
        Self::with_meta(levels, self.meta.clone())
    }
}
