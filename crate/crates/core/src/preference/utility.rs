use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::preference::Evaluation;

/// Parametric utility families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFamily {
    /// `U(w) = w`.
    Linear,
    /// `U(w) = w^gamma` on `w > 0`, `0 < gamma <= 1`.
    Power { gamma: f64 },
    /// `U(w) = -exp(-a w) / a`, constant absolute risk aversion `a > 0`.
    Exponential { a: f64 },
    /// `U(w) = w - b w^2` on its increasing region `w < 1 / (2b)`, `b > 0`.
    Quadratic { b: f64 },
}

/// An increasing, twice differentiable utility of wealth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityFunction {
    family: UtilityFamily,
}

impl UtilityFunction {
    pub fn linear() -> Self {
        UtilityFunction {
            family: UtilityFamily::Linear,
        }
    }

    pub fn power(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::param("gamma", gamma, "0 < gamma <= 1"));
        }
        Ok(UtilityFunction {
            family: UtilityFamily::Power { gamma },
        })
    }

    pub fn exponential(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::param("a", a, "a > 0"));
        }
        Ok(UtilityFunction {
            family: UtilityFamily::Exponential { a },
        })
    }

    pub fn quadratic(b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::param("b", b, "b > 0"));
        }
        Ok(UtilityFunction {
            family: UtilityFamily::Quadratic { b },
        })
    }

    pub fn family(&self) -> UtilityFamily {
        self.family
    }

    /// Open interval `(lo, hi)` of admissible wealth levels.
    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            UtilityFamily::Linear | UtilityFamily::Exponential { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            UtilityFamily::Power { .. } => (0.0, f64::INFINITY),
            UtilityFamily::Quadratic { b } => (f64::NEG_INFINITY, 1.0 / (2.0 * b)),
        }
    }

    pub fn in_domain(&self, w: f64) -> bool {
        let (lo, hi) = self.domain();
        w.is_finite() && w > lo && w < hi
    }

    pub fn check_domain(&self, w: f64) -> Result<()> {
        if self.in_domain(w) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                function: self.to_string(),
                at: w,
            })
        }
    }

    /// `U(w)`; callers are responsible for staying inside the domain.
    pub fn value(&self, w: f64) -> f64 {
        match self.family {
            UtilityFamily::Linear => w,
            UtilityFamily::Power { gamma } => w.powf(gamma),
            UtilityFamily::Exponential { a } => -(-a * w).exp() / a,
            UtilityFamily::Quadratic { b } => w - b * w * w,
        }
    }

    pub fn d1(&self, w: f64) -> f64 {
        match self.family {
            UtilityFamily::Linear => 1.0,
            UtilityFamily::Power { gamma } => gamma * w.powf(gamma - 1.0),
            UtilityFamily::Exponential { a } => (-a * w).exp(),
            UtilityFamily::Quadratic { b } => 1.0 - 2.0 * b * w,
        }
    }

    pub fn d2(&self, w: f64) -> f64 {
        match self.family {
            UtilityFamily::Linear => 0.0,
            UtilityFamily::Power { gamma } => gamma * (gamma - 1.0) * w.powf(gamma - 2.0),
            UtilityFamily::Exponential { a } => -a * (-a * w).exp(),
            UtilityFamily::Quadratic { b } => -2.0 * b,
        }
    }

    /// Local index of absolute risk aversion `-U''(w) / U'(w)`.
    pub fn local_index(&self, w: f64) -> f64 {
        match self.family {
            UtilityFamily::Linear => 0.0,
            UtilityFamily::Power { gamma } => (1.0 - gamma) / w,
            UtilityFamily::Exponential { a } => a,
            UtilityFamily::Quadratic { b } => 2.0 * b / (1.0 - 2.0 * b * w),
        }
    }

    /// Value, first and second derivative and local index at `w`.
    pub fn eval(&self, w: f64) -> Result<Evaluation> {
        self.check_domain(w)?;
        Ok(Evaluation {
            value: self.value(w),
            d1: self.d1(w),
            d2: self.d2(w),
            local_index: self.local_index(w),
        })
    }

    /// Wealth `w` with `U(w) = v`, in closed form for every family.
    pub fn invert(&self, v: f64) -> Result<f64> {
        let out_of_range = || Error::RangeViolation {
            function: self.to_string(),
            value: v,
        };
        if !v.is_finite() {
            return Err(out_of_range());
        }
        match self.family {
            UtilityFamily::Linear => Ok(v),
            UtilityFamily::Power { gamma } => {
                if v > 0.0 {
                    Ok(v.powf(1.0 / gamma))
                } else {
                    Err(out_of_range())
                }
            }
            UtilityFamily::Exponential { a } => {
                if v < 0.0 {
                    Ok(-(-a * v).ln() / a)
                } else {
                    Err(out_of_range())
                }
            }
            UtilityFamily::Quadratic { b } => {
                let disc = 1.0 - 4.0 * b * v;
                if disc > 0.0 {
                    // Rationalized root of b w^2 - w + v = 0, stable for small b.
                    Ok(2.0 * v / (1.0 + disc.sqrt()))
                } else {
                    Err(out_of_range())
                }
            }
        }
    }

    /// `true` when `U'' < 0` everywhere on the domain.
    pub fn is_strictly_concave(&self) -> bool {
        match self.family {
            UtilityFamily::Linear => false,
            UtilityFamily::Power { gamma } => gamma < 1.0,
            UtilityFamily::Exponential { .. } | UtilityFamily::Quadratic { .. } => true,
        }
    }
}

impl fmt::Display for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            UtilityFamily::Linear => write!(f, "linear"),
            UtilityFamily::Power { gamma } => write!(f, "power:{gamma}"),
            UtilityFamily::Exponential { a } => write!(f, "exp:{a}"),
            UtilityFamily::Quadratic { b } => write!(f, "quad:{b}"),
        }
    }
}

impl FromStr for UtilityFunction {
    type Err = Error;

    /// Parses `linear`, `power:G`, `exp:A` or `quad:B`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadSpec {
            kind: "utility",
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (name, param) = super::split_spec(s);
        let param = param
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("parameter is not a number"))
            })
            .transpose()?;
        let need = |p: Option<f64>| p.ok_or_else(|| bad("missing parameter"));
        match name {
            "linear" if param.is_none() => Ok(UtilityFunction::linear()),
            "power" | "pow" => UtilityFunction::power(need(param)?),
            "exp" | "exponential" => UtilityFunction::exponential(need(param)?),
            "quad" | "quadratic" => UtilityFunction::quadratic(need(param)?),
            _ => Err(bad("expected linear, power:G, exp:A or quad:B")),
        }
    }
}
