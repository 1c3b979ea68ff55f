//! Modulars and Luxemburg norms on `l^{p_n}(Z)` and on step functions in `L^{p(.)}(R)`.

mod norm;
mod sequence;
mod step;

pub use norm::{
    luxemburg_norm_seq, luxemburg_norm_step, modular_seq, modular_step, normalize, random_unit_sequence,
    sample_unit_ball, NormResult, DEFAULT_TOL,
};
pub use sequence::{ComplexSequence, Sequence};
pub use step::StepFunction;
