//! Discrete Fourier multipliers on ℤ, the Mikhlin derivative condition, and
//! the exponent hypotheses of the multiplier theorems.

mod apply;
mod hypotheses;
mod mikhlin;
mod symbol;

pub use apply::{apply_multiplier, frequency_grid, min_grid_size, output_window, sup_on_grid};
pub use hypotheses::{check_hypotheses, MultiplierHypotheses};
pub use mikhlin::{mikhlin_check, MikhlinReport, MAX_ORDER};
pub use symbol::{GridSymbol, RealLineVerdict, Symbol, SymbolKind};
