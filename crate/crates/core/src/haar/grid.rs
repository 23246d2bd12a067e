use crate::dyadic::{CoefficientField, MAX_FIELD_DEPTH};
use crate::error::{Error, Result};
use crate::sum::compensated_sum;

/// A function on `[0, 1)` that is constant on each of the `2^J` cells
/// `[i 2^-J, (i+1) 2^-J)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    depth: usize,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(depth: usize, values: Vec<f64>) -> Result<Self> {
        if depth > MAX_FIELD_DEPTH {
            return Err(Error::domain(format!("depth {depth} exceeds {MAX_FIELD_DEPTH}")));
        }
        if values.len() != 1usize << depth {
            return Err(Error::domain(format!(
                "expected {} values at depth {depth}, got {}",
                1usize << depth,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite value in cell {i}")));
        }
        Ok(Self { depth, values })
    }

    pub fn constant(depth: usize, c: f64) -> Result<Self> {
        Self::new(depth, vec![c; 1 << depth])
    }

    pub fn zeros(depth: usize) -> Result<Self> {
        Self::constant(depth, 0.0)
    }

    /// Samples `f` at the left endpoint of every cell.
    pub fn from_fn(depth: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (-(depth as f64)).exp2();
        Self::new(depth, (0..1usize << depth).map(|i| f(i as f64 * h)).collect())
    }

    /// Indicator of `[a, b)`; the endpoints must be multiples of `2^-J`.
    pub fn indicator(depth: usize, a: f64, b: f64) -> Result<Self> {
        let n = (1usize << depth) as f64;
        let (lo, hi) = (a * n, b * n);
        if lo.fract() != 0.0 || hi.fract() != 0.0 || !(0.0 <= lo && lo <= hi && hi <= n) {
            return Err(Error::domain(format!("[{a}, {b}) is not a union of depth-{depth} cells")));
        }
        Self::from_fn(depth, |x| ((a..b).contains(&x)) as u8 as f64)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn cell_width(&self) -> f64 {
        (-(self.depth as f64)).exp2()
    }

    pub fn value_at(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::domain(format!("point {x} is outside [0, 1)")));
        }
        let i = ((x * self.values.len() as f64) as usize).min(self.values.len() - 1);
        Ok(self.values[i])
    }

    pub fn norm_l2(&self) -> f64 {
        (compensated_sum(self.values.iter().map(|v| v * v)) * self.cell_width()).sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v.abs())) * self.cell_width()
    }

    pub fn norm_lp(&self, p: f64) -> f64 {
        (compensated_sum(self.values.iter().map(|v| v.abs().powf(p))) * self.cell_width()).powf(1.0 / p)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.depth, self.values.iter().map(|v| v * c).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.depth != other.depth {
            return Err(Error::domain(format!(
                "depth mismatch: {} vs {}",
                self.depth, other.depth
            )));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Self::new(self.depth, values)
    }

    /// Block sums for every level `0..=J` by pairwise summation, so that sums
    /// of equal values are exact.
    pub fn block_sums(&self) -> Vec<Vec<f64>> {
        let mut sums = vec![self.values.clone()];
        for _ in 0..self.depth {
            let prev = sums.last().unwrap();
            let next = prev.chunks_exact(2).map(|c| c[0] + c[1]).collect();
            sums.push(next);
        }
        sums.reverse();
        sums
    }

    /// Means over the cubes of every level `0..=J`.
    pub fn block_means(&self) -> Vec<Vec<f64>> {
        let depth = self.depth;
        self.block_sums()
            .into_iter()
            .enumerate()
            .map(|(j, s)| {
                let w = (-((depth - j) as f64)).exp2();
                s.into_iter().map(|v| v * w).collect()
            })
            .collect()
    }
}

/// `T_j f`: the mean of `f` over each cube of generation `j`.
pub fn haar_partial_sum(f: &GridFunction, j: usize) -> Result<GridFunction> {
    if j > f.depth() {
        return Err(Error::domain(format!("level {j} exceeds depth {}", f.depth())));
    }
    let means = &f.block_means()[j];
    let rep = 1usize << (f.depth() - j);
    let values = means.iter().flat_map(|&m| std::iter::repeat_n(m, rep)).collect();
    GridFunction::new(f.depth(), values)
}

/// `e_λ = |2^{-j/2} T_j f|` on each cube `λ` of every level.
pub fn haar_field(f: &GridFunction) -> CoefficientField {
    let levels = f
        .block_means()
        .into_iter()
        .enumerate()
        .map(|(j, m)| {
            let w = (-(j as f64) / 2.0).exp2();
            m.into_iter().map(|v| (w * v).abs()).collect()
        })
        .collect();
    CoefficientField::new(levels)
        .expect("block means of a finite grid are finite")
        .set_meta("generator", "haar_field")
        .set_meta("depth", f.depth())
}
