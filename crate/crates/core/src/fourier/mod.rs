//! Fourier-series construction: bumps on covers, Fejér polynomials,
//! spectral translation into disjoint bands, partial sums and indexes.

mod block;
mod chi;
mod localization;
mod multifractal;
mod trig;

pub use block::{
    block_weight, build_block_function, build_q, divergence_from_values, fs_divergence_index,
    partial_sum, Block, BlockConfig, BlockFunction, BlockStats, BuildReport, Channel,
    DivergenceIndex,
};
pub use chi::{build_chi, fejer_approx, Chi, CoverSpec};
pub use localization::{localization_check, LocalizationReport};
pub use multifractal::{
    build_component, multifractal_fourier, sample_f_alpha, sample_seed, Component,
    MultifractalConfig, MultifractalFourier, SAMPLE_DEPTH,
};
pub use trig::{grid_lp_norm, TrigPolynomial};
