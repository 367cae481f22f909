//! Decides whether two context-free grammars (probably) generate the same
//! formal power series — the same language with the same ambiguity counts —
//! by compiling each grammar into a system of nonlinear matrix equations,
//! solving the systems by fixed-point iteration under shared random matrix
//! substitutions, and cross-checking against an exact truncated-series
//! oracle.
//!
//! The pipeline lives in [`engine::compare`]; the pieces are usable on their
//! own:
//!
//! - [`grammar`]: text format, validation, structural analysis, scalar probe
//! - [`eqsystem`]: equation compilation and the normalizing transforms
//! - [`linalg`]: dense matrices and seeded random substitutions
//! - [`solver`]: the fixed-point iteration
//! - [`oracle`]: exact truncated series and shortest distinguishing words
//! - [`distinguish`]: exact machinery for finite word sets
//! - [`engine`]: the verdict pipeline

pub mod distinguish;
pub mod engine;
pub mod eqsystem;
pub mod grammar;
pub mod linalg;
pub mod oracle;
pub mod solver;

pub use engine::{compare, replay, CompareConfig, Outcome, Verdict};
pub use grammar::{parse_grammar, Grammar};
pub use oracle::{min_distinguishing_word, series_slice, SeriesSlice, WitnessReport};
