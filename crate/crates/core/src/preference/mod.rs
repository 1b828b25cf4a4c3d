//! Utility and probability weighting families with analytic derivatives and
//! their local risk-aversion indices.

mod utility;
mod weighting;

use serde::{Deserialize, Serialize};

pub use utility::{UtilityFamily, UtilityFunction};
pub use weighting::{WeightingFamily, WeightingFunction, CLAMP, TK_MIN_BETA};

use crate::error::Result;

/// Value, first and second derivative, and `-f''/f'` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub local_index: f64,
}

/// An increasing real function that comparative checks can be run on.
pub trait Preference {
    fn value_at(&self, x: f64) -> Result<f64>;
    fn local_index_at(&self, x: f64) -> Result<f64>;
}

impl Preference for UtilityFunction {
    fn value_at(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.value(x))
    }

    fn local_index_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.local_index)
    }
}

impl Preference for WeightingFunction {
    fn value_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.value)
    }

    fn local_index_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.local_index)
    }
}

/// Splits `name[:param]`.
fn split_spec(s: &str) -> (&str, Option<&str>) {
    match s.trim().split_once(':') {
        Some((name, param)) => (name.trim(), Some(param)),
        None => (s.trim(), None),
    }
}
