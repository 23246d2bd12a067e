//! Dirichlet series on the critical line, the bridges between sequences and
//! piecewise-constant functions on the half line, and the localization
//! estimate for truncated Fourier integrals.

mod bridges;
mod checks;
mod halfline;
mod series;

pub use bridges::*;
pub use checks::*;
pub use halfline::*;
pub use series::*;
