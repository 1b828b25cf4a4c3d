//! Numerical checks of "agent 2 is more risk averse than agent 1" for RDU
//! agents, through four equivalent characterizations:
//!
//! * (i) both local indices of agent 2 dominate those of agent 1;
//! * (ii) agent 2's premium is at least agent 1's for every query;
//! * (iv) `U2 ∘ U1⁻¹` and `h2 ∘ h1⁻¹` are concave;
//! * (v) the increment cross-ratios of agent 2 are bounded by agent 1's.
//!
//! Universal quantifiers are replaced by finite grids and sampled queries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{rdu_premium_exact, PremiumQuery};
use crate::grid::Grid;
use crate::preference::{Preference, UtilityFunction, WeightingFunction};

/// Slack allowed on every dominance inequality.
pub const DOMINANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub utility: UtilityFunction,
    pub weighting: WeightingFunction,
    pub label: String,
}

impl Agent {
    pub fn new(utility: UtilityFunction, weighting: WeightingFunction) -> Self {
        let label = format!("{utility} / {weighting}");
        Agent {
            utility,
            weighting,
            label,
        }
    }
}

/// Outcome of one inequality family: holds iff `worst_gap >= -DOMINANCE_TOL`,
/// where a gap is "dominating side minus dominated side".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub holds: bool,
    pub worst_gap: f64,
}

impl Dominance {
    fn from_gaps<I: IntoIterator<Item = f64>>(gaps: I) -> Self {
        let worst_gap = gaps.into_iter().fold(f64::INFINITY, f64::min);
        let worst_gap = if worst_gap.is_infinite() {
            0.0
        } else {
            worst_gap
        };
        Dominance {
            holds: worst_gap >= -DOMINANCE_TOL,
            worst_gap,
        }
    }

    fn and(self, other: Dominance) -> Dominance {
        Dominance {
            holds: self.holds && other.holds,
            worst_gap: self.worst_gap.min(other.worst_gap),
        }
    }

    /// `max(0, -worst_gap)`.
    pub fn violation(&self) -> f64 {
        (-self.worst_gap).max(0.0)
    }
}

/// Condition (i): `-U2''/U2' >= -U1''/U1'` on `wealth` and
/// `-h2''/h2' >= -h1''/h1'` on `probability`.
pub fn index_dominance(
    a1: &Agent,
    a2: &Agent,
    wealth: &[f64],
    probability: &[f64],
) -> Result<Dominance> {
    let mut gaps = Vec::with_capacity(wealth.len() + probability.len());
    for &w in wealth {
        gaps.push(a2.utility.local_index_at(w)? - a1.utility.local_index_at(w)?);
    }
    for &p in probability {
        gaps.push(a2.weighting.local_index_at(p)? - a1.weighting.local_index_at(p)?);
    }
    Ok(Dominance::from_gaps(gaps))
}

/// Condition (iv) for one pair: `f2 ∘ f1⁻¹` is concave on the image of `grid`.
///
/// The composition is sampled at `(f1(x_k), f2(x_k))`, so no inverse is
/// needed. Concavity means successive chord slopes do not increase; each
/// slope increase is measured relative to the larger of the two slopes (and
/// one).
pub fn concave_transform_check<F: Preference>(f1: &F, f2: &F, grid: &[f64]) -> Result<Dominance> {
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let t = f1.value_at(x)?;
        if let Some(&(prev, _)) = points.last() {
            if !(t > prev) {
                return Err(Error::RangeViolation {
                    function: "f1 (not strictly increasing on the grid)".into(),
                    value: t,
                });
            }
        }
        points.push((t, f2.value_at(x)?));
    }
    let slopes: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    Ok(Dominance::from_gaps(slopes.windows(2).map(|s| {
        let scale = s[0].abs().max(s[1].abs()).max(1.0);
        (s[0] - s[1]) / scale
    })))
}

/// Condition (v) for one pair on ordered quadruples `v < w <= x < y`:
/// `(f2(y) - f2(x)) / (f2(w) - f2(v)) <= (f1(y) - f1(x)) / (f1(w) - f1(v))`,
/// compared relative to the larger ratio (and one).
pub fn cross_ratio_check<F: Preference>(
    f1: &F,
    f2: &F,
    quadruples: &[[f64; 4]],
) -> Result<Dominance> {
    let mut gaps = Vec::with_capacity(quadruples.len());
    for &[v, w, x, y] in quadruples {
        if !(v < w && w <= x && x < y) {
            return Err(Error::BadQuadruple(v, w, x, y));
        }
        let ratio = |f: &F| -> Result<f64> {
            Ok((f.value_at(y)? - f.value_at(x)?) / (f.value_at(w)? - f.value_at(v)?))
        };
        let (r1, r2) = (ratio(f1)?, ratio(f2)?);
        gaps.push((r1 - r2) / r1.abs().max(r2.abs()).max(1.0));
    }
    Ok(Dominance::from_gaps(gaps))
}

/// Ordered quadruples drawn from a grid: every consecutive triple
/// `(g[k-1], g[k], g[k], g[k+1])`, plus disjoint quadruples at strides
/// 1, 2, 5, 10 and 25.
pub fn grid_quadruples(grid: &[f64]) -> Vec<[f64; 4]> {
    let mut out: Vec<[f64; 4]> = grid.windows(3).map(|t| [t[0], t[1], t[1], t[2]]).collect();
    for stride in [1usize, 2, 5, 10, 25] {
        for i in 0..grid.len().saturating_sub(3 * stride) {
            out.push([
                grid[i],
                grid[i + stride],
                grid[i + 2 * stride],
                grid[i + 3 * stride],
            ]);
        }
    }
    out
}

/// Parameters of one premium comparison, shared by both agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryPoint {
    pub w0: f64,
    pub p0: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl QueryPoint {
    /// `eps1` sits on its upper limit `min(p0, 1 - p0)`.
    pub fn is_boundary(&self) -> bool {
        self.eps1 >= self.p0.min(1.0 - self.p0)
    }

    fn for_agent(&self, a: &Agent) -> Result<PremiumQuery> {
        PremiumQuery::new(
            a.utility,
            a.weighting,
            self.w0,
            self.p0,
            self.eps1,
            self.eps2,
        )
    }
}

/// Draws `n` feasible queries whose payoffs stay inside `wealth` and whose
/// probabilities stay inside `probability`. Every tenth query puts `eps1` on
/// its boundary `min(p0, 1 - p0)`, which leaves the probability range.
pub fn sample_queries(
    wealth: (f64, f64),
    probability: (f64, f64),
    n: usize,
    seed: u64,
) -> Vec<QueryPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w_lo, w_hi) = wealth;
    let (p_lo, p_hi) = probability;
    (0..n)
        .map(|i| {
            let eps2 = (w_hi - w_lo) / 4.0 * (1.0 - rng.random::<f64>());
            let w0 = w_lo + eps2 + (w_hi - w_lo - 2.0 * eps2) * rng.random::<f64>();
            let p0 = p_lo + (p_hi - p_lo) * (1.0 - rng.random::<f64>()).min(1.0 - 1e-9);
            let eps1 = if i % 10 == 9 {
                p0.min(1.0 - p0)
            } else {
                let room = (p0 - p_lo).min(p_hi - p0);
                room * (1.0 - rng.random::<f64>())
            };
            QueryPoint { w0, p0, eps1, eps2 }
        })
        .filter(|q| q.eps1 > 0.0)
        .collect()
}

/// Condition (ii) over a query set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremiumDominance {
    pub holds: bool,
    /// Smallest `lambda2 - lambda1` over interior queries.
    pub worst_gap: f64,
    /// Smallest `lambda2 - lambda1` over boundary queries, if any were given.
    pub boundary_worst_gap: Option<f64>,
    pub queries: usize,
    pub boundary_queries: usize,
    /// Query attaining the overall worst gap when dominance fails.
    pub counterexample: Option<QueryPoint>,
}

/// Condition (ii): `lambda2 >= lambda1 - DOMINANCE_TOL` for every query.
pub fn premium_dominance(
    a1: &Agent,
    a2: &Agent,
    queries: &[QueryPoint],
) -> Result<PremiumDominance> {
    let gaps: Vec<f64> = queries
        .par_iter()
        .map(|q| {
            let l1 = rdu_premium_exact(&q.for_agent(a1)?)?.premium;
            let l2 = rdu_premium_exact(&q.for_agent(a2)?)?.premium;
            Ok(l2 - l1)
        })
        .collect::<Result<_>>()?;

    let mut interior = f64::INFINITY;
    let mut boundary: Option<f64> = None;
    let mut worst: Option<(f64, usize)> = None;
    for (i, (&gap, q)) in gaps.iter().zip(queries).enumerate() {
        if q.is_boundary() {
            boundary = Some(boundary.map_or(gap, |b| b.min(gap)));
        } else {
            interior = interior.min(gap);
        }
        if worst.is_none_or(|(g, _)| gap < g) {
            worst = Some((gap, i));
        }
    }
    let overall = worst.map_or(0.0, |(g, _)| g);
    let holds = overall >= -DOMINANCE_TOL;
    let n_boundary = queries.iter().filter(|q| q.is_boundary()).count();
    Ok(PremiumDominance {
        holds,
        worst_gap: if interior.is_infinite() {
            0.0
        } else {
            interior
        },
        boundary_worst_gap: boundary,
        queries: queries.len(),
        boundary_queries: n_boundary,
        counterexample: if holds {
            None
        } else {
            worst.map(|(_, i)| queries[i])
        },
    })
}

/// One condition in a [`DominanceReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub holds: bool,
    pub worst_violation: f64,
}

impl From<Dominance> for ConditionOutcome {
    fn from(d: Dominance) -> Self {
        ConditionOutcome {
            holds: d.holds,
            worst_violation: d.violation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub agent1: String,
    pub agent2: String,
    pub condition_i: ConditionOutcome,
    pub condition_ii: PremiumDominance,
    pub condition_iv: ConditionOutcome,
    pub condition_v: ConditionOutcome,
    /// All four conditions returned the same verdict.
    pub agreement: bool,
    pub wealth_grid: Grid,
    pub probability_grid: Grid,
}

/// Conditions (i) and (iv) and (v) on the two grids, and (ii) on `queries`.
pub fn proposition1_report(
    a1: &Agent,
    a2: &Agent,
    wealth_grid: Grid,
    probability_grid: Grid,
    queries: &[QueryPoint],
) -> Result<DominanceReport> {
    let w = wealth_grid.points();
    let p = probability_grid.points();
    let cond_i = index_dominance(a1, a2, &w, &p)?;
    let cond_ii = premium_dominance(a1, a2, queries)?;
    let cond_iv = concave_transform_check(&a1.utility, &a2.utility, &w)?
        .and(concave_transform_check(&a1.weighting, &a2.weighting, &p)?);
    let cond_v = cross_ratio_check(&a1.utility, &a2.utility, &grid_quadruples(&w))?.and(
        cross_ratio_check(&a1.weighting, &a2.weighting, &grid_quadruples(&p))?,
    );
    let verdicts = [cond_i.holds, cond_ii.holds, cond_iv.holds, cond_v.holds];
    Ok(DominanceReport {
        agent1: a1.label.clone(),
        agent2: a2.label.clone(),
        condition_i: cond_i.into(),
        condition_ii: cond_ii,
        condition_iv: cond_iv.into(),
        condition_v: cond_v.into(),
        agreement: verdicts.iter().all(|&v| v == verdicts[0]),
        wealth_grid,
        probability_grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agent(u: &str, h: &str) -> Agent {
        Agent::new(u.parse().unwrap(), h.parse().unwrap())
    }

    fn wealth() -> Vec<f64> {
        Grid::new(1.0, 20.0, 101).unwrap().points()
    }

    fn probs() -> Vec<f64> {
        Grid::probabilities().points()
    }

    #[test]
    fn index_ordering_of_power_utilities() {
        let a1 = agent("power:0.5", "prelec:0.65");
        let a2 = agent("power:0.2", "prelec:0.65");
        assert!(
            index_dominance(&a1, &a2, &wealth(), &probs())
                .unwrap()
                .holds
        );
        assert!(
            !index_dominance(&a2, &a1, &wealth(), &probs())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn identical_agents_have_zero_gap() {
        let a = agent("exp:0.3", "tk:0.61");
        let d = index_dominance(&a, &a, &wealth(), &probs()).unwrap();
        assert!(d.holds);
        assert_eq!(d.worst_gap, 0.0);
    }

    #[test]
    fn convex_weighting_is_less_averse() {
        let a1 = agent("linear", "identity");
        let a2 = agent("linear", "pow:2");
        assert!(
            !index_dominance(&a1, &a2, &wealth(), &probs())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn concave_transforms() {
        let lin = UtilityFunction::linear();
        let sqrt = UtilityFunction::power(0.5).unwrap();
        assert!(
            concave_transform_check(&lin, &sqrt, &wealth())
                .unwrap()
                .holds
        );
        assert!(
            !concave_transform_check(&sqrt, &lin, &wealth())
                .unwrap()
                .holds
        );
        let id = WeightingFunction::identity();
        let sq = WeightingFunction::power(2.0).unwrap();
        assert!(!concave_transform_check(&id, &sq, &probs()).unwrap().holds);
        let p65 = WeightingFunction::prelec(0.65).unwrap();
        let p30 = WeightingFunction::prelec(0.3).unwrap();
        assert!(!concave_transform_check(&p65, &p30, &probs()).unwrap().holds);
        assert!(!concave_transform_check(&p30, &p65, &probs()).unwrap().holds);
        assert!(matches!(
            concave_transform_check(&sqrt, &lin, &[-1.0, 1.0, 2.0]),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn cross_ratios() {
        let lin = UtilityFunction::linear();
        let sqrt = UtilityFunction::power(0.5).unwrap();
        let quads = grid_quadruples(&wealth());
        let same = cross_ratio_check(&sqrt, &sqrt, &quads).unwrap();
        assert!(same.holds);
        assert_eq!(same.worst_gap, 0.0);
        assert!(cross_ratio_check(&lin, &sqrt, &quads).unwrap().holds);
        assert!(!cross_ratio_check(&sqrt, &lin, &quads).unwrap().holds);
        assert!(matches!(
            cross_ratio_check(&lin, &sqrt, &[[1.0, 3.0, 2.0, 4.0]]),
            Err(Error::BadQuadruple(..))
        ));
    }

    #[test]
    fn premium_ordering() {
        let a1 = agent("linear", "identity");
        let a2 = agent("power:0.5", "quad:0.5");
        let queries = sample_queries((1.0, 20.0), (0.01, 0.99), 300, 5);
        assert!(queries.iter().any(QueryPoint::is_boundary));
        let fwd = premium_dominance(&a1, &a2, &queries).unwrap();
        assert!(fwd.holds);
        assert!(fwd.counterexample.is_none());
        let back = premium_dominance(&a2, &a1, &queries).unwrap();
        assert!(!back.holds);
        assert!(back.worst_gap < 0.0);
        assert!(back.counterexample.is_some());
        let same = premium_dominance(&a2, &a2, &queries).unwrap();
        assert!(same.holds);
        assert_eq!(same.worst_gap, 0.0);
    }

    #[test]
    fn sampled_queries_are_feasible() {
        for q in sample_queries((0.5, 10.0), (0.01, 0.99), 500, 9) {
            assert!(q.w0 - q.eps2 >= 0.5 && q.w0 + q.eps2 <= 10.0);
            assert!(q.eps1 > 0.0 && q.eps1 <= q.p0.min(1.0 - q.p0));
            if !q.is_boundary() {
                assert!(q.p0 - q.eps1 >= 0.01 && q.p0 + q.eps1 <= 0.99);
            }
        }
    }

    #[test]
    fn report_cases() {
        let wg = Grid::new(1.0, 20.0, 101).unwrap();
        let pg = Grid::probabilities();
        let queries = sample_queries((1.0, 20.0), (0.01, 0.99), 400, 1);

        let ordered = proposition1_report(
            &agent("linear", "identity"),
            &agent("power:0.5", "quad:0.5"),
            wg,
            pg,
            &queries,
        )
        .unwrap();
        assert!(ordered.agreement && ordered.condition_i.holds);

        let a = agent("power:0.5", "prelec:0.5");
        let same = proposition1_report(&a, &a, wg, pg, &queries).unwrap();
        assert!(same.agreement && same.condition_ii.holds);

        let crossing = proposition1_report(
            &agent("power:0.5", "prelec:0.3"),
            &agent("power:0.5", "prelec:0.65"),
            wg,
            pg,
            &queries,
        )
        .unwrap();
        assert!(crossing.agreement);
        assert!(!crossing.condition_i.holds && !crossing.condition_ii.holds);
        assert!(crossing.condition_i.worst_violation > 0.0);
    }
}
