use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::preference::Evaluation;
use crate::solve;

/// Derivatives of families that are singular at 0 or 1 are evaluated at the
/// argument clamped to `[CLAMP, 1 - CLAMP]`.
pub const CLAMP: f64 = 1e-9;

/// Smallest admissible Tversky–Kahneman curvature parameter; below roughly
/// 0.279 the function stops being monotone.
pub const TK_MIN_BETA: f64 = 0.28;

/// Parametric weighting families, all in the cumulative convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightingFamily {
    /// `h(p) = p`.
    Identity,
    /// `h(p) = p^k`, `k > 0`.
    Power { k: f64 },
    /// `h(p) = p + c p (1 - p)`, `|c| <= 1`; concave for `c > 0`.
    Quadratic { c: f64 },
    /// `h(p) = 1 - exp(-(-ln(1 - p))^alpha)`, `0 < alpha < 1`.
    Prelec { alpha: f64 },
    /// `h(p) = 1 - (1-p)^beta / ((1-p)^beta + p^beta)^(1/beta)`.
    TverskyKahneman { beta: f64 },
}

/// An increasing distortion of cumulative probabilities with `h(0) = 0` and
/// `h(1) = 1`.
///
/// `decumulative` marks the transformed function `p -> 1 - h(1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingFunction {
    family: WeightingFamily,
    decumulative: bool,
}

impl WeightingFunction {
    pub fn identity() -> Self {
        WeightingFunction {
            family: WeightingFamily::Identity,
            decumulative: false,
        }
    }

    pub fn power(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::param("k", k, "k > 0"));
        }
        Self::checked(WeightingFamily::Power { k })
    }

    pub fn quadratic(c: f64) -> Result<Self> {
        if !(c.abs() <= 1.0) {
            return Err(Error::param("c", c, "|c| <= 1"));
        }
        Self::checked(WeightingFamily::Quadratic { c })
    }

    pub fn prelec(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", alpha, "0 < alpha < 1"));
        }
        Self::checked(WeightingFamily::Prelec { alpha })
    }

    /// `beta = 1` is accepted and coincides with the identity.
    pub fn tversky_kahneman(beta: f64) -> Result<Self> {
        if !(TK_MIN_BETA..=1.0).contains(&beta) {
            return Err(Error::param("beta", beta, "0.28 <= beta <= 1"));
        }
        Self::checked(WeightingFamily::TverskyKahneman { beta })
    }

    fn checked(family: WeightingFamily) -> Result<Self> {
        let h = WeightingFunction {
            family,
            decumulative: false,
        };
        for i in 0..1000 {
            let p = (i as f64 + 0.5) / 1000.0;
            let d1 = h.d1(p);
            if !(d1 > 0.0) {
                return Err(Error::DomainViolation {
                    function: format!("{h} (not increasing)"),
                    at: p,
                });
            }
        }
        Ok(h)
    }

    pub fn family(&self) -> WeightingFamily {
        self.family
    }

    pub fn is_decumulative(&self) -> bool {
        self.decumulative
    }

    /// `p -> 1 - h(1 - p)`. Applying it twice gives back `self`.
    pub fn decumulative_transform(&self) -> Self {
        WeightingFunction {
            family: self.family,
            decumulative: !self.decumulative,
        }
    }

    /// `h(p)` for `p` in `[0, 1]`; arguments are clamped into that interval.
    pub fn value(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        if self.decumulative {
            1.0 - self.base_value(1.0 - p)
        } else {
            self.base_value(p)
        }
    }

    pub fn d1(&self, p: f64) -> f64 {
        if self.decumulative {
            self.base_d1(1.0 - p)
        } else {
            self.base_d1(p)
        }
    }

    pub fn d2(&self, p: f64) -> f64 {
        if self.decumulative {
            -self.base_d2(1.0 - p)
        } else {
            self.base_d2(p)
        }
    }

    /// Local index `-h''(p) / h'(p)`.
    pub fn local_index(&self, p: f64) -> f64 {
        match (self.family, self.decumulative) {
            (WeightingFamily::Identity, _) => 0.0,
            (WeightingFamily::Prelec { alpha }, false) => prelec_index(alpha, self.clamped(p)),
            _ => -self.d2(p) / self.d1(p),
        }
    }

    /// Value, derivatives and local index at `p`.
    pub fn eval(&self, p: f64) -> Result<Evaluation> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainViolation {
                function: self.to_string(),
                at: p,
            });
        }
        Ok(Evaluation {
            value: self.value(p),
            d1: self.d1(p),
            d2: self.d2(p),
            local_index: self.local_index(p),
        })
    }

    /// Probability `p` with `h(p) = u`.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::RangeViolation {
                function: self.to_string(),
                value: u,
            });
        }
        match (self.family, self.decumulative) {
            (WeightingFamily::Identity, _) => Ok(u),
            (WeightingFamily::Power { k }, false) => Ok(u.powf(1.0 / k)),
            _ => {
                let root = solve::bisect(|p| self.value(p) - u, 0.0, 1.0, 0.0, 200)?;
                Ok(root.x)
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.family, WeightingFamily::Identity)
    }

    fn singular(&self) -> bool {
        matches!(
            self.family,
            WeightingFamily::Power { .. }
                | WeightingFamily::Prelec { .. }
                | WeightingFamily::TverskyKahneman { .. }
        )
    }

    fn clamped(&self, p: f64) -> f64 {
        if self.singular() {
            p.clamp(CLAMP, 1.0 - CLAMP)
        } else {
            p
        }
    }

    fn base_value(&self, p: f64) -> f64 {
        match self.family {
            WeightingFamily::Identity => p,
            WeightingFamily::Power { k } => p.powf(k),
            WeightingFamily::Quadratic { c } => p + c * p * (1.0 - p),
            WeightingFamily::Prelec { alpha } => {
                let l = -(-p).ln_1p();
                -(-l.powf(alpha)).exp_m1()
            }
            WeightingFamily::TverskyKahneman { beta } => {
                let q = 1.0 - p;
                if q == 0.0 {
                    return 1.0;
                }
                let qb = q.powf(beta);
                1.0 - qb / (qb + p.powf(beta)).powf(1.0 / beta)
            }
        }
    }

    fn base_d1(&self, p: f64) -> f64 {
        let p = self.clamped(p);
        match self.family {
            WeightingFamily::Identity => 1.0,
            WeightingFamily::Power { k } => k * p.powf(k - 1.0),
            WeightingFamily::Quadratic { c } => 1.0 + c * (1.0 - 2.0 * p),
            WeightingFamily::Prelec { alpha } => {
                let q = 1.0 - p;
                let l = -(-p).ln_1p();
                (-l.powf(alpha)).exp() * alpha * l.powf(alpha - 1.0) / q
            }
            WeightingFamily::TverskyKahneman { beta } => {
                let tk = TkTerms::new(beta, p);
                tk.w * tk.phi
            }
        }
    }

    fn base_d2(&self, p: f64) -> f64 {
        let p = self.clamped(p);
        match self.family {
            WeightingFamily::Identity => 0.0,
            WeightingFamily::Power { k } => k * (k - 1.0) * p.powf(k - 2.0),
            WeightingFamily::Quadratic { c } => -2.0 * c,
            WeightingFamily::Prelec { alpha } => -self.base_d1(p) * prelec_index(alpha, p),
            WeightingFamily::TverskyKahneman { beta } => {
                let tk = TkTerms::new(beta, p);
                -tk.w * (tk.phi * tk.phi + tk.dphi)
            }
        }
    }
}

/// Closed-form Prelec index `(1 - a + a L^a - L) / ((1 - p) L)`, `L = -ln(1 - p)`.
fn prelec_index(alpha: f64, p: f64) -> f64 {
    let l = -(-p).ln_1p();
    (1.0 - alpha + alpha * l.powf(alpha) - l) / ((1.0 - p) * l)
}

/// Pieces of the Tversky–Kahneman weight `w(q) = q^b / (q^b + (1-q)^b)^(1/b)`
/// at `q = 1 - p`, with `h(p) = 1 - w(q)`, `w' = w phi`, `w'' = w (phi^2 + phi')`.
struct TkTerms {
    w: f64,
    phi: f64,
    dphi: f64,
}

impl TkTerms {
    fn new(beta: f64, p: f64) -> Self {
        let q = 1.0 - p;
        let d = q.powf(beta) + p.powf(beta);
        let e = q.powf(beta - 1.0) - p.powf(beta - 1.0);
        let de = (beta - 1.0) * (q.powf(beta - 2.0) + p.powf(beta - 2.0));
        let w = q.powf(beta) / d.powf(1.0 / beta);
        let phi = beta / q - e / d;
        let dphi = -beta / (q * q) - de / d + beta * e * e / (d * d);
        TkTerms { w, phi, dphi }
    }
}

impl fmt::Display for WeightingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.family {
            WeightingFamily::Identity => "identity".to_string(),
            WeightingFamily::Power { k } => format!("pow:{k}"),
            WeightingFamily::Quadratic { c } => format!("quad:{c}"),
            WeightingFamily::Prelec { alpha } => format!("prelec:{alpha}"),
            WeightingFamily::TverskyKahneman { beta } => format!("tk:{beta}"),
        };
        if self.decumulative {
            write!(f, "decumulative({base})")
        } else {
            f.write_str(&base)
        }
    }
}

impl FromStr for WeightingFunction {
    type Err = Error;

    /// Parses `identity`, `pow:K`, `quad:C`, `prelec:A` or `tk:B`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadSpec {
            kind: "weighting",
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
            "identity" if param.is_none() => Ok(WeightingFunction::identity()),
            "pow" | "power" => WeightingFunction::power(need(param)?),
            "quad" | "quadratic" => WeightingFunction::quadratic(need(param)?),
            "prelec" => WeightingFunction::prelec(need(param)?),
            "tk" => WeightingFunction::tversky_kahneman(need(param)?),
            _ => Err(bad("expected identity, pow:K, quad:C, prelec:A or tk:B")),
        }
    }
}
