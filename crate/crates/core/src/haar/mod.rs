//! Haar expansions: partial sums `T_j`, the coefficient field
//! `e_λ = 2^{-j/2} T_j f`, saturating constructions and wavelet leaders.

mod build;
mod grid;
mod wavelet;

pub use build::{
    besicovitch_cover, budget_cap, build_from_cover, build_saturating, gf2_build_haar,
    saturating_haar, DyadicCover, FamilyMember, FamilyNormalization, FamilyWeights, LayerWeights,
    SaturatingConfig,
};
pub use grid::{haar_field, haar_partial_sum, GridFunction};
pub use wavelet::{
    besov_norm, haar_transform, inverse_haar, leaders_raw, wavelet_leaders, BesovParams,
    HaarCoefficients,
};
