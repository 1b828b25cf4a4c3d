//! Two-asset portfolio under RDU: a riskless asset and a binary risky asset
//! returning `-R0` with probability `p0` and `R1` otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preference::{UtilityFamily, UtilityFunction, WeightingFunction};
use crate::risk::{moments, SpreadRisk};
use crate::solve;

/// Relative size of a first-order condition at zero treated as vanishing.
pub const SHARE_TOL: f64 = 1e-12;
/// Distance kept from the edge of the utility domain.
pub const DOMAIN_MARGIN: f64 = 1e-9;
pub const ZERO_PARTICIPATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioProblem {
    pub w0: f64,
    pub p0: f64,
    pub r0: f64,
    pub r1: f64,
    pub utility: UtilityFunction,
    pub weighting: WeightingFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShareKind {
    /// Interior root of the first-order condition.
    Interior,
    /// The first-order condition is non-positive at zero.
    Corner,
    /// The first-order condition stays positive up to the largest share.
    Boundary,
    /// Linear utility with a positive first-order condition: no interior
    /// optimum, the largest share is returned.
    NonConcave,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShareSolution {
    pub share: f64,
    pub kind: ShareKind,
    pub foc_residual: f64,
    pub max_share: f64,
}

impl PortfolioProblem {
    pub fn new(
        utility: UtilityFunction,
        weighting: WeightingFunction,
        w0: f64,
        p0: f64,
        r0: f64,
        r1: f64,
    ) -> Result<Self> {
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(Error::param("p0", p0, "0 < p0 < 1"));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::param("r0", r0, "r0 > 0"));
        }
        if !(r1 > 0.0 && r1.is_finite()) {
            return Err(Error::param("r1", r1, "r1 > 0"));
        }
        utility.check_domain(w0)?;
        Ok(PortfolioProblem {
            w0,
            p0,
            r0,
            r1,
            utility,
            weighting,
        })
    }

    /// `R1 / (R0 + R1) > p0`, i.e. the risky asset has a positive expected
    /// return. Violations are allowed but worth reporting.
    pub fn has_positive_expected_return(&self) -> bool {
        self.r1 / (self.r0 + self.r1) > self.p0
    }

    /// Largest share keeping both terminal wealths inside the utility domain.
    pub fn max_share(&self) -> f64 {
        let mut cap = self.w0 / self.r0 - DOMAIN_MARGIN;
        if let UtilityFamily::Quadratic { b } = self.utility.family() {
            cap = cap.min((1.0 / (2.0 * b) - self.w0) / self.r1 - DOMAIN_MARGIN);
        }
        cap
    }

    /// `-R0 h(p0) U'(w0 - a R0) + R1 (1 - h(p0)) U'(w0 + a R1)`.
    pub fn foc(&self, share: f64) -> Result<f64> {
        let lo = self.w0 - share * self.r0;
        let hi = self.w0 + share * self.r1;
        self.utility.check_domain(lo)?;
        self.utility.check_domain(hi)?;
        let hp = self.weighting.value(self.p0);
        Ok(-self.r0 * hp * self.utility.d1(lo) + self.r1 * (1.0 - hp) * self.utility.d1(hi))
    }

    fn check_zero_participation(&self, eps1: f64) -> Result<()> {
        let target = self.r1 / (self.r0 + self.r1);
        let weight = self.weighting.value(self.p0);
        if (weight - target).abs() > ZERO_PARTICIPATION_TOL {
            return Err(Error::NotAtZeroParticipation { weight, target });
        }
        let limit = self.p0.min(1.0 - self.p0);
        if !(eps1 > 0.0 && eps1 <= limit + 1e-12) {
            return Err(Error::param("eps1", eps1, "0 < eps1 <= min(p0, 1 - p0)"));
        }
        Ok(())
    }
}

/// Maximizes `h(p0) U(w0 - a R0) + (1 - h(p0)) U(w0 + a R1)` over
/// `a in [0, max_share]`.
pub fn optimal_share(prob: &PortfolioProblem) -> Result<ShareSolution> {
    let max_share = prob.max_share();
    if !(max_share > 0.0) {
        return Err(Error::DomainViolation {
            function: format!("{} (no room for a positive share)", prob.utility),
            at: prob.w0,
        });
    }
    let at_zero = prob.foc(0.0)?;
    let done = |share: f64, kind, foc_residual| ShareSolution {
        share,
        kind,
        foc_residual,
        max_share,
    };
    let scale = (prob.r0 + prob.r1) * prob.utility.d1(prob.w0).abs();
    if at_zero <= SHARE_TOL * scale {
        return Ok(done(0.0, ShareKind::Corner, at_zero));
    }
    if !prob.utility.is_strictly_concave() {
        return Ok(done(max_share, ShareKind::NonConcave, at_zero));
    }
    let at_max = prob.foc(max_share)?;
    if at_max >= 0.0 {
        return Ok(done(max_share, ShareKind::Boundary, at_max));
    }
    let root = solve::bisect(
        |a| prob.foc(a).unwrap_or(f64::NAN),
        0.0,
        max_share,
        0.0,
        200,
    )?;
    Ok(done(root.x, ShareKind::Interior, root.residual))
}

/// `R1 / (R0 + R1)`: the decision weight on the loss at which the optimal
/// share is zero, whatever the utility.
pub fn zero_participation_weight(r0: f64, r1: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::param("r0", r0, "0 < r0 < r1"));
    }
    if !(r1 > r0 && r1.is_finite()) {
        return Err(Error::param("r1", r1, "0 < r0 < r1"));
    }
    Ok(r1 / (r0 + r1))
}

/// The loss probability `p0` with `h(p0) = R1 / (R0 + R1)`.
///
/// Fails with `RangeViolation` when no representable `p0` gets `h(p0)` within
/// [`ZERO_PARTICIPATION_TOL`] of the target, as happens for Prelec functions
/// with very small `alpha`.
pub fn zero_participation_probability(h: &WeightingFunction, r0: f64, r1: f64) -> Result<f64> {
    let target = zero_participation_weight(r0, r1)?;
    let p0 = h.inverse(target)?;
    if (h.value(p0) - target).abs() > ZERO_PARTICIPATION_TOL {
        return Err(Error::RangeViolation {
            function: h.to_string(),
            value: target,
        });
    }
    Ok(p0)
}

/// Reduction of the intermediate return that keeps the optimal share at zero
/// after contracting the asset to `-R0` w.p. `p0 - eps1`, `(R1 - R0)/2 - s`
/// w.p. `2 eps1`, and `R1` w.p. `1 - p0 - eps1`.
pub fn contraction_reduction_exact(prob: &PortfolioProblem, eps1: f64) -> Result<f64> {
    prob.check_zero_participation(eps1)?;
    let h = &prob.weighting;
    let lo = h.value(prob.p0 - eps1);
    let hi = h.value(prob.p0 + eps1);
    let mid = hi - lo;
    Ok((-prob.r0 * lo + 0.5 * (prob.r1 - prob.r0) * mid + prob.r1 * (1.0 - hi)) / mid)
}

/// `m2bar / (2 Pr) * (-h''(p0) / h'(p0))` for the spread `+-(R0 + R1)/2`
/// with probability `eps1` each.
pub fn contraction_reduction_approx(prob: &PortfolioProblem, eps1: f64) -> Result<f64> {
    prob.check_zero_participation(eps1)?;
    let spread = SpreadRisk::binary(eps1, 0.5 * (prob.r0 + prob.r1))?;
    let m = moments(&spread);
    Ok(m.maxiance / (2.0 * m.total_mass) * prob.weighting.local_index(prob.p0))
}
