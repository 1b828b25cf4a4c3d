//! Lottery evaluation under EU, the dual theory (DT) and rank-dependent
//! utility (RDU), with exact risk premia from the indifference equations and
//! their local approximations in terms of variance and maxiance.
//!
//! The premium setting: a binary lottery `C` paying `w0 - eps2` with
//! probability `p0` and `w0 + eps2` otherwise is compared with `D`, which moves
//! mass `eps1` from each branch to an intermediate outcome `w0 - lambda`.
//! DT is the special case of linear utility with `eps2 = 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preference::{UtilityFunction, WeightingFunction};
use crate::risk::{cumulative, Lottery, MomentSet, Risk, SpreadRisk, IDENTITY_TOL, INPUT_TOL};
use crate::solve;

/// Tolerance accepted by [`premium_sensitivity`] on the indifference residual.
pub const LAMBDA_CONSISTENCY_TOL: f64 = 1e-9;

/// `sum x_i (h(F_i) - h(F_{i-1}))`.
pub fn dt_value(h: &WeightingFunction, lottery: &Lottery) -> f64 {
    cumulative(lottery.atoms())
        .map(|(x, prev, cdf)| x * (h.value(cdf) - h.value(prev)))
        .sum()
}

/// DT value computed in the decumulative convention,
/// `sum x_i (g(S_{i-1}) - g(S_i))` with `S` the survival function.
///
/// `dt_value_decumulative(&h.decumulative_transform(), l) == dt_value(&h, l)`.
pub fn dt_value_decumulative(g: &WeightingFunction, lottery: &Lottery) -> f64 {
    cumulative(lottery.atoms())
        .map(|(x, prev, cdf)| x * (g.value(1.0 - prev) - g.value(1.0 - cdf)))
        .sum()
}

/// `sum U(x_i) (h(F_i) - h(F_{i-1}))`.
pub fn rdu_value(u: &UtilityFunction, h: &WeightingFunction, lottery: &Lottery) -> Result<f64> {
    let mut total = 0.0;
    for (x, prev, cdf) in cumulative(lottery.atoms()) {
        u.check_domain(x)?;
        total += u.value(x) * (h.value(cdf) - h.value(prev));
    }
    Ok(total)
}

/// Exact premium together with its local approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PremiumResult {
    pub exact: f64,
    pub approx: f64,
    pub variance_term: f64,
    pub maxiance_term: f64,
    pub moments: MomentSet,
    pub solver_iterations: u32,
}

/// A solved premium and the number of bisection steps spent on it (zero when
/// the utility was inverted in closed form).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solved {
    pub premium: f64,
    pub iterations: u32,
}

fn require_zero_mean(risk: &Lottery) -> Result<()> {
    let mean = risk.mean();
    if mean.abs() > INPUT_TOL {
        return Err(Error::NotZeroMean { mean });
    }
    Ok(())
}

/// Pratt–Arrow premium `pi` solving `U(w0 - pi) = E[U(w0 + X)]`.
pub fn eu_premium_exact(u: &UtilityFunction, w0: f64, risk: &Lottery) -> Result<f64> {
    require_zero_mean(risk)?;
    let mut target = 0.0;
    for a in risk.atoms() {
        u.check_domain(w0 + a.outcome)?;
        target += a.probability * u.value(w0 + a.outcome);
    }
    Ok(w0 - u.invert(target)?)
}

/// `(m2 / 2) (-U''(w0) / U'(w0))`.
pub fn eu_premium_approx(u: &UtilityFunction, w0: f64, risk: &Lottery) -> Result<f64> {
    require_zero_mean(risk)?;
    for a in risk.atoms() {
        u.check_domain(w0 + a.outcome)?;
    }
    Ok(0.5 * risk.moments().variance * u.local_index(w0))
}

/// Both EU premia packaged as a [`PremiumResult`].
pub fn eu_premium(u: &UtilityFunction, w0: f64, risk: &Lottery) -> Result<PremiumResult> {
    let exact = eu_premium_exact(u, w0, risk)?;
    let approx = eu_premium_approx(u, w0, risk)?;
    Ok(PremiumResult {
        exact,
        approx,
        variance_term: approx,
        maxiance_term: 0.0,
        moments: risk.moments(),
        solver_iterations: 0,
    })
}

/// Parameters of the `C` versus `D` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PremiumQuery {
    pub w0: f64,
    pub p0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub utility: UtilityFunction,
    pub weighting: WeightingFunction,
}

fn check_probabilities(p0: f64, eps1: f64) -> Result<()> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::param("p0", p0, "0 < p0 < 1"));
    }
    if !(eps1 > 0.0 && eps1 <= p0.min(1.0 - p0) + IDENTITY_TOL) {
        return Err(Error::param("eps1", eps1, "0 < eps1 <= min(p0, 1 - p0)"));
    }
    Ok(())
}

impl PremiumQuery {
    pub fn new(
        utility: UtilityFunction,
        weighting: WeightingFunction,
        w0: f64,
        p0: f64,
        eps1: f64,
        eps2: f64,
    ) -> Result<Self> {
        check_probabilities(p0, eps1)?;
        if !(eps2 > 0.0) || !eps2.is_finite() {
            return Err(Error::param("eps2", eps2, "eps2 > 0"));
        }
        utility.check_domain(w0 - eps2)?;
        utility.check_domain(w0 + eps2)?;
        Ok(PremiumQuery {
            w0,
            p0,
            eps1,
            eps2,
            utility,
            weighting,
        })
    }

    /// DT query: linear utility, unit payoffs around zero wealth.
    pub fn dual(weighting: WeightingFunction, p0: f64, eps1: f64) -> Result<Self> {
        PremiumQuery::new(UtilityFunction::linear(), weighting, 0.0, p0, eps1, 1.0)
    }

    /// Same query with a different payoff size.
    pub fn with_eps2(&self, eps2: f64) -> Result<Self> {
        PremiumQuery::new(
            self.utility,
            self.weighting,
            self.w0,
            self.p0,
            self.eps1,
            eps2,
        )
    }

    /// `(h(p0) - h(p0 - eps1), h(p0 + eps1) - h(p0))`.
    fn increments(&self) -> (f64, f64) {
        let h = &self.weighting;
        let mid = h.value(self.p0);
        (
            mid - h.value(self.p0 - self.eps1),
            h.value(self.p0 + self.eps1) - mid,
        )
    }

    /// Lottery `C`: `w0 -/+ eps2` with probabilities `p0`, `1 - p0`.
    pub fn lottery_c(&self) -> Result<Lottery> {
        Lottery::new([
            (self.w0 - self.eps2, self.p0),
            (self.w0 + self.eps2, 1.0 - self.p0),
        ])
    }

    /// Lottery `D` with intermediate outcome `w0 + y`.
    pub fn lottery_d(&self, y: f64) -> Result<Lottery> {
        let pairs = [
            (self.w0 - self.eps2, self.p0 - self.eps1),
            (self.w0 + y, 2.0 * self.eps1),
            (self.w0 + self.eps2, 1.0 - self.p0 - self.eps1),
        ];
        Lottery::new(pairs.into_iter().filter(|&(_, p)| p > 0.0))
    }

    /// Weighted utility the certainty level `w0 - lambda` must match.
    fn indifference_target(&self) -> f64 {
        let (lo, hi) = self.increments();
        let u = &self.utility;
        (lo * u.value(self.w0 - self.eps2) + hi * u.value(self.w0 + self.eps2)) / (lo + hi)
    }
}

/// Closed-form DT premium
/// `rho = [(h(p0) - h(p0-e1)) - (h(p0+e1) - h(p0))] / (h(p0+e1) - h(p0-e1))`.
pub fn dt_premium_exact(q: &PremiumQuery) -> f64 {
    let (lo, hi) = q.increments();
    (lo - hi) / (lo + hi)
}

/// Probability increments `h(p0 - e1 + F_i) - h(p0 - e1 + F_{i-1})` for the
/// atoms of `risk` attached to the middle branch, with `e1 = Pr / 2`.
fn spread_increments(h: &WeightingFunction, p0: f64, risk: &SpreadRisk) -> Result<Vec<(f64, f64)>> {
    let eps1 = 0.5 * risk.total_mass();
    check_probabilities(p0, eps1)?;
    let base = p0 - eps1;
    Ok(cumulative(risk.atoms())
        .map(|(x, prev, cdf)| (x, h.value(base + cdf) - h.value(base + prev)))
        .collect())
}

/// DT premium for an arbitrary zero-mean spread with outcomes in `[-1, 1]`
/// attached to the middle branch.
pub fn dt_premium_general(h: &WeightingFunction, p0: f64, risk: &SpreadRisk) -> Result<f64> {
    if risk.atoms().iter().any(|a| a.outcome.abs() > 1.0) {
        return Err(Error::OrderingViolated(
            "spread outcomes must lie in [-1, 1]".into(),
        ));
    }
    let incs = spread_increments(h, p0, risk)?;
    let total: f64 = incs.iter().map(|&(_, dh)| dh).sum();
    Ok(-incs.iter().map(|&(x, dh)| dh * x).sum::<f64>() / total)
}

/// `m2bar / (2 Pr) * (-h''(p0) / h'(p0))`, with the exact DT premium attached.
pub fn dt_premium_approx(
    h: &WeightingFunction,
    p0: f64,
    risk: &SpreadRisk,
) -> Result<PremiumResult> {
    let exact = dt_premium_general(h, p0, risk)?;
    let m = risk.moments();
    let maxiance_term = m.maxiance / (2.0 * m.total_mass) * h.local_index(p0);
    Ok(PremiumResult {
        exact,
        approx: maxiance_term,
        variance_term: 0.0,
        maxiance_term,
        moments: m,
        solver_iterations: 0,
    })
}

/// `lambda` with `U(w0 - lambda) = target`, inverting `U` in closed form and
/// falling back to bisection on `(-bound, bound)`.
fn solve_lambda(u: &UtilityFunction, w0: f64, target: f64, bound: f64) -> Result<Solved> {
    if let Ok(w) = u.invert(target) {
        if w.is_finite() {
            return Ok(Solved {
                premium: w0 - w,
                iterations: 0,
            });
        }
    }
    let (lo, hi) = (-bound + 1e-15, bound - 1e-15);
    let root = solve::bisect(|l| u.value(w0 - l) - target, lo, hi, 1e-12, 200)?;
    Ok(Solved {
        premium: root.x,
        iterations: root.iterations,
    })
}

/// RDU premium solving
/// `(h(p0+e1) - h(p0-e1)) U(w0 - l) = (h(p0) - h(p0-e1)) U(w0-e2) + (h(p0+e1) - h(p0)) U(w0+e2)`.
pub fn rdu_premium_exact(q: &PremiumQuery) -> Result<Solved> {
    solve_lambda(&q.utility, q.w0, q.indifference_target(), q.eps2)
}

/// RDU premium for an arbitrary zero-mean spread attached to the middle branch.
pub fn rdu_premium_general(
    u: &UtilityFunction,
    h: &WeightingFunction,
    w0: f64,
    p0: f64,
    risk: &SpreadRisk,
) -> Result<Solved> {
    for a in risk.atoms() {
        u.check_domain(w0 + a.outcome)?;
    }
    let incs = spread_increments(h, p0, risk)?;
    let total: f64 = incs.iter().map(|&(_, dh)| dh).sum();
    let target = incs
        .iter()
        .map(|&(x, dh)| dh * u.value(w0 + x))
        .sum::<f64>()
        / total;
    let bound = risk
        .atoms()
        .iter()
        .map(|a| a.outcome.abs())
        .fold(0.0, f64::max);
    solve_lambda(u, w0, target, bound)
}

/// Variance and maxiance terms of the RDU approximation, with the exact
/// premium attached.
pub fn rdu_premium_approx(
    u: &UtilityFunction,
    h: &WeightingFunction,
    w0: f64,
    p0: f64,
    risk: &SpreadRisk,
) -> Result<PremiumResult> {
    let exact = rdu_premium_general(u, h, w0, p0, risk)?;
    let m = risk.moments();
    let variance_term = m.variance / (2.0 * m.total_mass) * u.local_index(w0);
    let maxiance_term = m.maxiance / (2.0 * m.total_mass) * h.local_index(p0);
    Ok(PremiumResult {
        exact: exact.premium,
        approx: variance_term + maxiance_term,
        variance_term,
        maxiance_term,
        moments: m,
        solver_iterations: exact.iterations,
    })
}

/// Derivative of the RDU premium with respect to the payoff size `eps2`,
/// obtained from the total differential of the indifference equation.
pub fn premium_sensitivity(q: &PremiumQuery, lambda: f64) -> Result<f64> {
    let u = &q.utility;
    u.check_domain(q.w0 - lambda)?;
    let residual = u.value(q.w0 - lambda) - q.indifference_target();
    if !(residual.abs() < LAMBDA_CONSISTENCY_TOL) {
        return Err(Error::InconsistentLambda { lambda, residual });
    }
    let (lo, hi) = q.increments();
    let total = lo + hi;
    let anchor = u.d1(q.w0 - lambda);
    Ok(lo / total * u.d1(q.w0 - q.eps2) / anchor - hi / total * u.d1(q.w0 + q.eps2) / anchor)
}

/// One cell of the approximate-premium surface over wealth and probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub w0: f64,
    pub p0: f64,
    pub variance_term: f64,
    pub maxiance_term: f64,
    pub lambda_approx: f64,
}

/// Approximate RDU premium for a risk with normalized moments
/// `m2 / (2 Pr)` and `m2bar / (2 Pr)`, over the grid `wealth x probability`.
/// Rows are ordered by wealth, then probability.
pub fn premium_surface(
    u: &UtilityFunction,
    h: &WeightingFunction,
    wealth: &[f64],
    probability: &[f64],
    variance_over_2pr: f64,
    maxiance_over_2pr: f64,
) -> Result<Vec<SurfacePoint>> {
    for &w in wealth {
        u.check_domain(w)?;
    }
    for &p in probability {
        h.eval(p)?;
    }
    let rows: Vec<Vec<SurfacePoint>> = wealth
        .par_iter()
        .map(|&w0| {
            let variance_term = variance_over_2pr * u.local_index(w0);
            probability
                .iter()
                .map(|&p0| {
                    let maxiance_term = maxiance_over_2pr * h.local_index(p0);
                    SurfacePoint {
                        w0,
                        p0,
                        variance_term,
                        maxiance_term,
                        lambda_approx: variance_term + maxiance_term,
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
