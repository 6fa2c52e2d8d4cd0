//! Q_s-representations of real numbers and the fractal geometry of their
//! digit statistics.
//!
//! * [`qs_system`]: numeral systems with arbitrary positive digit weights,
//!   encoding, decoding and cylinder intervals.
//! * [`digit_stats`]: digit counts, running frequencies and running means.
//! * [`fractal_dim`]: Besicovitch–Eggleston and Moran dimensions.
//! * [`dim_opt`]: constrained maximization of the dimension, including the
//!   Cardano route for the base-3 `r = ν₀` problem.
//! * [`special_numbers`]: oscillating, A_k, Champernowne and
//!   Copeland–Erdős digit sequences.
//! * [`monte_carlo`]: seeded frequency experiments.

pub mod digit_stats;
pub mod dim_opt;
pub mod error;
pub mod fractal_dim;
pub mod monte_carlo;
pub mod qs_system;
pub mod scalar;
pub mod special_numbers;

pub use error::{QsError, Result};
pub use fractal_dim::{DimensionResult, FrequencyVector};
pub use qs_system::{Digit, DigitStream, DigitWord, PeriodicDigits, QsSystem};
pub use scalar::{Backend, Rational, Scalar};
