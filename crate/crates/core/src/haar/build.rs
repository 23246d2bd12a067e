use super::grid::GridFunction;
use crate::dyadic::MAX_FIELD_DEPTH;
use crate::error::{Error, Result};
use crate::sets::delta_of_alpha;
use serde::{Deserialize, Serialize};

/// `f = Σ_λ 2^{j/2} |a_λ| 1_λ` over the cubes of one level `j`, sampled at
/// grid depth `depth >= j`. Then `T_j f = f` and `e_λ(f) = |a_λ|`.
pub fn gf2_build_haar(a: &[f64], depth: usize) -> Result<GridFunction> {
    if !a.len().is_power_of_two() {
        return Err(Error::domain(format!("{} values do not fill a dyadic level", a.len())));
    }
    let j = a.len().trailing_zeros() as usize;
    if j > depth {
        return Err(Error::domain(format!("level {j} is deeper than grid depth {depth}")));
    }
    let w = (j as f64 / 2.0).exp2();
    let rep = 1usize << (depth - j);
    let values = a.iter().flat_map(|v| std::iter::repeat_n(w * v.abs(), rep)).collect();
    GridFunction::new(depth, values)
}

/// Cube indices `Γ_j` selected at each level `0..=J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicCover {
    levels: Vec<Vec<u64>>,
}

impl DyadicCover {
    pub fn new(mut levels: Vec<Vec<u64>>) -> Result<Self> {
        if levels.len() > MAX_FIELD_DEPTH + 1 {
            return Err(Error::domain("cover deeper than the maximum field depth"));
        }
        for (j, l) in levels.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            if l.last().is_some_and(|&k| k >= 1u64 << j) {
                return Err(Error::domain(format!("cube index out of range at level {j}")));
            }
        }
        Ok(Self { levels })
    }

    pub fn empty(depth: usize) -> Self {
        Self { levels: vec![Vec::new(); depth + 1] }
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn levels(&self) -> &[Vec<u64>] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> &[u64] {
        self.levels.get(j).map_or(&[], Vec::as_slice)
    }

    /// True when every selected cube's parent is selected too.
    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| {
            w[1].iter().all(|k| w[0].binary_search(&(k >> 1)).is_ok())
        })
    }

    /// `Σ_{λ∈Γ_j} 2^{-2jα}` at level `j`.
    pub fn budget(&self, j: usize, alpha: f64) -> f64 {
        self.level(j).len() as f64 * (-2.0 * j as f64 * alpha).exp2()
    }
}

/// Largest cube count allowed by the `l^2` budget at level `j`:
/// `floor(2^{2jα})`.
pub fn budget_cap(j: usize, alpha: f64) -> usize {
    let x = (2.0 * j as f64 * alpha).exp2();
    // Absorb rounding in exp2 when 2jα is an integer.
    (x * (1.0 + 1e-12)).floor() as usize
}

/// Nested cover of the high-mass cubes of the Bernoulli(δ(2α)) measure:
/// each level keeps the `budget_cap(j, α)` children of the previous level
/// with the largest mass (fewest ones), ties broken by position.
pub fn besicovitch_cover(alpha: f64, depth: usize) -> Result<DyadicCover> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1/2]")));
    }
    if depth > MAX_FIELD_DEPTH {
        return Err(Error::domain(format!("depth {depth} exceeds {MAX_FIELD_DEPTH}")));
    }
    // δ(2α) < 1/2 ranks cubes by popcount alone; at α = 1/2 all masses tie.
    let delta = delta_of_alpha(2.0 * alpha)?;
    let mut levels = vec![vec![0u64]];
    for j in 1..=depth {
        let mut children: Vec<u64> =
            levels[j - 1].iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let cap = budget_cap(j, alpha);
        if children.len() > cap {
            if delta < 0.5 {
                children.sort_by_key(|&k| (k.count_ones(), k));
            }
            children.truncate(cap);
            children.sort_unstable();
        }
        levels.push(children);
    }
    DyadicCover::new(levels)
}

/// Weight `w_j` of the level-`j` layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerWeights {
    /// `w_j = j^{-2}` (`w_0 = 1`).
    InverseSquare,
    Uniform,
}

impl LayerWeights {
    pub fn weight(self, j: usize) -> f64 {
        match self {
            LayerWeights::InverseSquare if j > 0 => 1.0 / (j * j) as f64,
            _ => 1.0,
        }
    }
}

/// `f = Σ_j w_j Σ_{λ∈Γ_j} 2^{j/2} 2^{-jα} 1_λ`, truncated at `depth`.
/// Rejects covers breaking `Σ_{λ∈Γ_j} 2^{-2jα} <= 1`.
pub fn build_from_cover(
    cover: &DyadicCover,
    alpha: f64,
    weights: LayerWeights,
    depth: usize,
) -> Result<GridFunction> {
    if cover.depth() > depth {
        return Err(Error::domain(format!(
            "cover depth {} exceeds grid depth {depth}",
            cover.depth()
        )));
    }
    for j in 0..=cover.depth() {
        let total = cover.budget(j, alpha);
        if total > 1.0 + 1e-12 {
            return Err(Error::Budget { level: j, total });
        }
    }
    let mut values = vec![0.0; 1 << depth];
    for (j, level) in cover.levels().iter().enumerate() {
        let a = weights.weight(j) * (j as f64 * (0.5 - alpha)).exp2();
        let rep = 1usize << (depth - j);
        for &k in level {
            let start = k as usize * rep;
            values[start..start + rep].iter_mut().for_each(|v| *v += a);
        }
    }
    GridFunction::new(depth, values)
}

/// How each family member is scaled before summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyNormalization {
    /// `f_k / ‖f_k‖_2`.
    L2,
    /// Scale so that, on covered cubes, `e_λ(f_k) ≈ amplitude · 2^{-jα_k}`
    /// for nested covers with uniform layers: divides by the geometric
    /// sum `Σ_t 2^{-t(1/2-α)}`, or by the number of layers at `α = 1/2`.
    Geometric { amplitude: f64 },
}

/// Weight `c_k` of the `k`-th family member (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyWeights {
    /// `c_k = k^{-2}`.
    InverseSquare,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturatingConfig {
    pub layer_weights: LayerWeights,
    pub family_weights: FamilyWeights,
    pub normalization: FamilyNormalization,
}

impl SaturatingConfig {
    /// Literal infinite-depth recipe: `j^{-2}` layers, `k^{-2}` families, unit
    /// `L^2` norm per family.
    pub fn literal() -> Self {
        Self {
            layer_weights: LayerWeights::InverseSquare,
            family_weights: FamilyWeights::InverseSquare,
            normalization: FamilyNormalization::L2,
        }
    }

    /// Finite-depth recipe used for spectrum estimation: uniform layers and
    /// families, geometric normalization at amplitude 1/2.
    pub fn finite_depth() -> Self {
        Self {
            layer_weights: LayerWeights::Uniform,
            family_weights: FamilyWeights::Uniform,
            normalization: FamilyNormalization::Geometric { amplitude: 0.5 },
        }
    }
}

impl Default for SaturatingConfig {
    fn default() -> Self {
        Self::finite_depth()
    }
}

/// One member of a saturating family: an exponent and its cover.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub alpha: f64,
    pub cover: DyadicCover,
}

/// `f = Σ_k c_k f_k / n_k` with `f_k` built from the member's cover.
pub fn build_saturating(
    family: &[FamilyMember],
    depth: usize,
    config: &SaturatingConfig,
) -> Result<GridFunction> {
    let mut values = vec![0.0; 1 << depth];
    for (i, member) in family.iter().enumerate() {
        if !(member.alpha > 0.0 && member.alpha <= 0.5) {
            return Err(Error::domain(format!(
                "family exponent {} must lie in (0, 1/2]",
                member.alpha
            )));
        }
        let f = build_from_cover(&member.cover, member.alpha, config.layer_weights, depth)?;
        let norm = match config.normalization {
            FamilyNormalization::L2 => {
                let n = f.norm_l2();
                if n > 0.0 { 1.0 / n } else { 0.0 }
            }
            FamilyNormalization::Geometric { amplitude } => {
                let gap = 0.5 - member.alpha;
                if gap > 1e-12 {
                    amplitude * (1.0 - (-gap).exp2())
                } else {
                    let layers = member.cover.levels().iter().filter(|l| !l.is_empty()).count();
                    amplitude / layers.max(1) as f64
                }
            }
        };
        let c = match config.family_weights {
            FamilyWeights::InverseSquare => 1.0 / ((i + 1) * (i + 1)) as f64,
            FamilyWeights::Uniform => 1.0,
        };
        for (v, x) in values.iter_mut().zip(f.values()) {
            *v += c * norm * x;
        }
    }
    GridFunction::new(depth, values)
}

/// Saturating function over `alphas` with [`besicovitch_cover`] covers.
pub fn saturating_haar(
    alphas: &[f64],
    depth: usize,
    config: &SaturatingConfig,
) -> Result<GridFunction> {
    let family = alphas
        .iter()
        .map(|&alpha| Ok(FamilyMember { alpha, cover: besicovitch_cover(alpha, depth)? }))
        .collect::<Result<Vec<_>>>()?;
    build_saturating(&family, depth, config)
}
