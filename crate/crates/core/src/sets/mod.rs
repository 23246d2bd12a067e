//! Sparse-digit compact `K`, Besicovitch digit-frequency sets and the
//! measures used to sample them.

mod checks;
mod digits;
mod entropy;
mod measure;
mod sample;
mod schedule;

pub use checks::{empirical_frequency, running_frequency, sine_check, Frequencies, SineReport, K_PHASE};
pub use digits::DigitString;
pub use entropy::{alpha_of_delta, delta_of_alpha, BesicovitchParams, DEFAULT_THETA};
pub use measure::{
    admissible_grid, bernoulli_mass, cube_word, k_admissible, measure_mass, KMeasureRule,
};
pub use sample::{
    batch_to_csv, sample_batch, sample_point, SampleRecord, SampleRule, SAMPLE_CSV_HEADER,
};
pub use schedule::{PositionRole, SparseSchedule};
