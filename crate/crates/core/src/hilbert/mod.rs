//! The discrete Hilbert transform `(Hb)_n = sum_{m != n} b_m / (n - m)` and
//! related objects.

mod bound;
pub(crate) mod continuous;
mod discrete;
mod section;

pub use bound::{pointwise_bound, PointwiseBound};
pub use continuous::continuous_hilbert_step;
pub use discrete::{discrete_hilbert, hilbert_symbol, HilbertMethod, HilbertOptions};
pub use section::{finite_section_norm, largest_singular_value, operator_matrix};
