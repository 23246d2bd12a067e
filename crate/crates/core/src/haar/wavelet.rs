use super::grid::GridFunction;
use crate::dyadic::CoefficientField;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Haar expansion with `L^∞`-normalized wavelets `ψ_{j,k} = 1` on the left
/// half of `λ_{j,k}` and `-1` on the right half.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients {
    /// `⟨f, 1⟩`.
    pub mean: f64,
    /// `detail[j][k] = ⟨f, ψ_{j,k}⟩` for `j < J`.
    pub detail: Vec<Vec<f64>>,
}

impl HaarCoefficients {
    pub fn depth(&self) -> usize {
        self.detail.len()
    }

    /// `mean² + Σ 2^j detail²`, equal to `‖f‖₂²`.
    pub fn energy(&self) -> f64 {
        self.mean * self.mean
            + self
                .detail
                .iter()
                .enumerate()
                .map(|(j, d)| (j as f64).exp2() * d.iter().map(|c| c * c).sum::<f64>())
                .sum::<f64>()
    }
}

pub fn haar_transform(f: &GridFunction) -> HaarCoefficients {
    let means = f.block_means();
    let detail = (0..f.depth())
        .map(|j| {
            let w = (-((j + 1) as f64)).exp2();
            means[j + 1].chunks_exact(2).map(|c| w * (c[0] - c[1])).collect()
        })
        .collect();
    HaarCoefficients { mean: means[0][0], detail }
}

pub fn inverse_haar(c: &HaarCoefficients) -> Result<GridFunction> {
    let mut values = vec![c.mean];
    for (j, d) in c.detail.iter().enumerate() {
        if d.len() != 1 << j {
            return Err(Error::domain(format!("detail level {j} has {} entries", d.len())));
        }
        // mean_left - mean_right = 2^{j+1} detail
        let w = ((j + 1) as f64).exp2() / 2.0;
        values = values
            .iter()
            .zip(d)
            .flat_map(|(&m, &dk)| [m + w * dk, m - w * dk])
            .collect();
    }
    GridFunction::new(c.depth(), values)
}

/// Besov smoothness triple for the Haar specialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovParams {
    /// Requires `0 < s < 1`, `p, q >= 1` and `s - 1/p > 0`.
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain(format!("s = {s} must lie in (0, 1) for Haar wavelets")));
        }
        if !(p >= 1.0 && q >= 1.0) {
            return Err(Error::domain(format!("p = {p} and q = {q} must be >= 1")));
        }
        if s - 1.0 / p <= 0.0 {
            return Err(Error::domain(format!("s - 1/p = {} must be positive", s - 1.0 / p)));
        }
        Ok(Self { s, p, q })
    }
}

/// `d_λ = max |detail_μ|` over the cubes `μ ⊂ 3λ` of generation `>= j`, for
/// `j = 0..J-1`.
pub fn leaders_raw(c: &HaarCoefficients) -> Vec<Vec<f64>> {
    let depth = c.depth();
    // Subtree maxima, finest level first.
    let mut sub: Vec<Vec<f64>> = vec![Vec::new(); depth];
    for j in (0..depth).rev() {
        sub[j] = c.detail[j]
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let own = d.abs();
                if j + 1 < depth {
                    own.max(sub[j + 1][2 * k]).max(sub[j + 1][2 * k + 1])
                } else {
                    own
                }
            })
            .collect();
    }
    sub.iter()
        .map(|level| {
            let n = level.len();
            (0..n)
                .map(|k| {
                    let lo = k.saturating_sub(1);
                    let hi = (k + 2).min(n);
                    level[lo..hi].iter().copied().fold(0.0, f64::max)
                })
                .collect()
        })
        .collect()
}

/// Leader field `2^{(s - 1/p) j} d_λ`.
pub fn wavelet_leaders(c: &HaarCoefficients, params: &BesovParams) -> Result<CoefficientField> {
    if c.depth() == 0 {
        return Err(Error::domain("leaders need at least one detail level"));
    }
    let exponent = params.s - 1.0 / params.p;
    let levels = leaders_raw(c)
        .into_iter()
        .enumerate()
        .map(|(j, d)| {
            let w = (exponent * j as f64).exp2();
            d.into_iter().map(|v| w * v).collect()
        })
        .collect();
    Ok(CoefficientField::new(levels)?.set_meta("generator", "wavelet_leaders"))
}

/// `(Σ_j (2^{(sp-1)j} Σ_k |c_{j,k}|^p)^{q/p})^{1/q}` over the details.
pub fn besov_norm(c: &HaarCoefficients, params: &BesovParams) -> f64 {
    let BesovParams { s, p, q } = *params;
    c.detail
        .iter()
        .enumerate()
        .map(|(j, d)| {
            let inner: f64 = d.iter().map(|v| v.abs().powf(p)).sum();
            ((s * p - 1.0) * j as f64).exp2() * inner
        })
        .map(|level| level.powf(q / p))
        .sum::<f64>()
        .powf(1.0 / q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_detail(depth: usize, j: usize, k: usize) -> HaarCoefficients {
        let mut detail: Vec<Vec<f64>> = (0..depth).map(|l| vec![0.0; 1 << l]).collect();
        detail[j][k] = 1.0;
        HaarCoefficients { mean: 0.0, detail }
    }

    #[test]
    fn transform_roundtrip_and_energy() {
        let f = GridFunction::new(3, vec![1.0, -2.0, 0.5, 4.0, 3.0, 3.0, -1.0, 0.0]).unwrap();
        let c = haar_transform(&f);
        assert!((c.energy() - f.norm_l2().powi(2)).abs() < 1e-12);
        let back = inverse_haar(&c).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let half = haar_transform(&GridFunction::indicator(2, 0.0, 0.5).unwrap());
        assert_eq!(half.mean, 0.5);
        assert_eq!(half.detail[0], vec![0.5]);
    }

    #[test]
    fn leaders_example() {
        let c = single_detail(4, 2, 0);
        let d = leaders_raw(&c);
        assert_eq!(d[2], vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(d[0], vec![1.0]);
        assert_eq!(d[3][0..4], [0.0, 0.0, 0.0, 0.0]);
        let z = leaders_raw(&HaarCoefficients {
            mean: 1.0,
            detail: (0..4).map(|l| vec![0.0; 1 << l]).collect(),
        });
        assert!(z.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn besov_examples() {
        let p = BesovParams::new(0.6, 2.0, 2.0).unwrap();
        let c = single_detail(5, 3, 2);
        assert!((besov_norm(&c, &p) - 0.3f64.exp2()).abs() < 1e-12);
        let zero = HaarCoefficients { mean: 0.0, detail: (0..4).map(|l| vec![0.0; 1 << l]).collect() };
        assert_eq!(besov_norm(&zero, &p), 0.0);
        // Each level's inner sum normalized to give contribution exactly 1.
        let levels = 6;
        let detail = (0..levels)
            .map(|j| {
                let n = (1usize << j) as f64;
                let target = (-(0.6 * 2.0 - 1.0) * j as f64).exp2();
                vec![(target / n).sqrt(); 1 << j]
            })
            .collect();
        let c = HaarCoefficients { mean: 0.0, detail };
        assert!((besov_norm(&c, &p) - (levels as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(BesovParams::new(1.0, 2.0, 2.0).is_err());
        assert!(BesovParams::new(0.4, 2.0, 2.0).is_err());
        assert!(BesovParams::new(0.6, 0.5, 2.0).is_err());
    }
}
