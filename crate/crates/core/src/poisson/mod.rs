//! Harmonic extension to the unit disk and the averages
//! `e_λ(f) = ∫_λ P[f]((1 - 2^{-j}) ξ) dσ(ξ)`.

mod circle;
mod field;
mod kernel;

pub use circle::{poisson_extend, poisson_extend_midpoint, CircleFunction, CircleRepr};
pub use field::{
    gf2_poisson_constant, harnack_check, level_radius, poisson_field, poisson_level,
    radial_divergence_index, radial_index_from_field, HarnackReport, PoissonField, RadialIndex,
};
pub use kernel::{
    kernel_arc_mass, kernel_cdf, kernel_mass_midpoint, poisson_kernel, quadrature_resolution,
};
