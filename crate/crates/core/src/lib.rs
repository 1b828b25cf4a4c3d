//! Primal and dual moments of discrete risks, and risk premia under expected
//! utility, the dual theory and rank-dependent utility.
//!
//! The maxiance `E[max(X1, X2)] - E[X]` plays the role for probability
//! weighting that the variance plays for utility curvature: the approximate
//! RDU premium of a small spread is
//! `m2 / (2 Pr) * (-U''/U') + m2bar / (2 Pr) * (-h''/h')`.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod comparative;
pub mod error;
pub mod evaluation;
pub mod grid;
pub mod oracle;
pub mod portfolio;
pub mod preference;
pub mod risk;
mod solve;

pub use error::{Error, Result};
pub use evaluation::{PremiumQuery, PremiumResult};
pub use preference::{Evaluation, UtilityFunction, WeightingFunction};
pub use risk::{Atom, Lottery, MomentSet, Risk, SpreadRisk};
