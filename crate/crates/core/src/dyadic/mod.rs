//! Dyadic cubes, coefficient fields and the estimators built on them.

mod cube;
mod estimate;
mod field;
mod levelset;

pub use cube::{DyadicCube, MAX_CUBE_LEVEL};
pub use estimate::{
    estimate_exponents, estimate_exponents_with_cap, estimate_from_chain, gf1_check,
    level_lp_norm, level_ratio, tail_start, ExponentEstimate, Gf1Report, LevelNorm, DEFAULT_CAP,
};
pub use field::{CoefficientField, MAX_FIELD_DEPTH};
pub use levelset::{
    ancestor_window_start, box_dimension, box_dimension_of_counts, coarse_spectrum,
    coarse_spectrum_with_cap, extract_level_set, linear_fit, LevelSetGrid, LevelSetMode,
    RatioTable, RowFlag, SpectrumReport, SpectrumRow,
};
