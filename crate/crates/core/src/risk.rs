//! Discrete lotteries, zero-mean sub-probability spread risks and their
//! primal and dual moments.
//!
//! A [`Lottery`] carries total probability mass one. A [`SpreadRisk`] carries
//! mass `Pr <= 1` and describes a mean-preserving spread that only fires on
//! one branch of some lottery; its moments are Stieltjes sums against the
//! sub-distribution function, so `F(+inf) = Pr` rather than one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on user-supplied probability totals and means.
pub const INPUT_TOL: f64 = 1e-9;

/// Tolerance for mass bookkeeping on already-validated risks.
pub const IDENTITY_TOL: f64 = 1e-12;

/// One outcome with its (unconditional) probability.
///
/// Serialized as a two-element array `[outcome, probability]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Atom {
    pub outcome: f64,
    pub probability: f64,
}

impl From<(f64, f64)> for Atom {
    fn from((outcome, probability): (f64, f64)) -> Self {
        Atom {
            outcome,
            probability,
        }
    }
}

impl From<Atom> for (f64, f64) {
    fn from(a: Atom) -> Self {
        (a.outcome, a.probability)
    }
}

/// Wire form shared by lotteries and spread risks: `{"atoms": [[x, p], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomList {
    pub atoms: Vec<Atom>,
}

/// Primal and dual moments of a risk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub variance: f64,
    pub maxiance: f64,
    pub miniance: f64,
    pub total_mass: f64,
}

/// Common view over full-mass and sub-probability risks.
pub trait Risk {
    /// Atoms with strictly increasing outcomes.
    fn atoms(&self) -> &[Atom];

    fn total_mass(&self) -> f64;

    /// Point the central moments are taken about: the mean of a lottery,
    /// zero for a spread risk.
    fn centre(&self) -> f64;

    fn mean(&self) -> f64 {
        self.atoms().iter().map(|a| a.probability * a.outcome).sum()
    }

    fn moments(&self) -> MomentSet {
        moments(self)
    }
}

/// `(outcome, F before the atom, F after the atom)` for each atom in rank order.
pub fn cumulative(atoms: &[Atom]) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    atoms.iter().scan(0.0, |cdf, a| {
        let prev = *cdf;
        *cdf += a.probability;
        Some((a.outcome, prev, *cdf))
    })
}

/// Sorts by outcome and merges exact ties, summing their probabilities.
fn sort_and_merge<I>(pairs: I) -> Result<Vec<Atom>>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut atoms: Vec<Atom> = Vec::new();
    for (outcome, probability) in pairs {
        if !outcome.is_finite() {
            return Err(Error::param("outcome", outcome, "a finite real"));
        }
        if !(probability > 0.0) || !probability.is_finite() {
            return Err(Error::NonPositiveProbability {
                outcome,
                probability,
            });
        }
        atoms.push(Atom {
            outcome,
            probability,
        });
    }
    if atoms.is_empty() {
        return Err(Error::EmptyLottery);
    }
    atoms.sort_by(|a, b| a.outcome.total_cmp(&b.outcome));
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if last.outcome == a.outcome => last.probability += a.probability,
            _ => merged.push(a),
        }
    }
    Ok(merged)
}

/// A finite discrete probability distribution over monetary outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomList", into = "AtomList")]
pub struct Lottery {
    atoms: Vec<Atom>,
}

impl Lottery {
    /// Builds a lottery from `(outcome, probability)` pairs.
    ///
    /// Ties are merged, outcomes sorted, and the probabilities renormalized so
    /// they sum to one. The normalization is idempotent, so serializing and
    /// re-reading a lottery reproduces it bit for bit.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut atoms = sort_and_merge(pairs)?;
        let total: f64 = atoms.iter().map(|a| a.probability).sum();
        if (total - 1.0).abs() > INPUT_TOL {
            return Err(Error::MassNotOne { total });
        }
        if (total - 1.0).abs() > 4.0 * f64::EPSILON {
            for a in &mut atoms {
                a.probability /= total;
            }
        }
        // Close the remaining rounding gap on the last atom.
        let n = atoms.len();
        let head: f64 = atoms[..n - 1].iter().map(|a| a.probability).sum();
        let tail = 1.0 - head;
        if tail > 0.0 {
            atoms[n - 1].probability = tail;
        }
        Ok(Lottery { atoms })
    }

    /// The sure outcome `c`.
    pub fn degenerate(c: f64) -> Result<Self> {
        Lottery::new([(c, 1.0)])
    }

    /// Attaches `risk` to the atom at `branch_outcome`: mass `Pr` leaves that
    /// atom and reappears at `branch_outcome + x_i` with probability `p_i`.
    ///
    /// The result is a mean-preserving spread of `self`. The shifted outcomes
    /// may coincide with, but not jump over, the neighbouring outcomes.
    pub fn with_spread(&self, branch_outcome: f64, risk: &SpreadRisk) -> Result<Lottery> {
        let idx = self
            .atoms
            .iter()
            .position(|a| a.outcome == branch_outcome)
            .ok_or(Error::InsufficientBranchMass {
                outcome: branch_outcome,
                available: 0.0,
                required: risk.total_mass(),
            })?;
        let available = self.atoms[idx].probability;
        if available < risk.total_mass() - IDENTITY_TOL {
            return Err(Error::InsufficientBranchMass {
                outcome: branch_outcome,
                available,
                required: risk.total_mass(),
            });
        }
        let lowest = branch_outcome + risk.atoms[0].outcome;
        let highest = branch_outcome + risk.atoms[risk.atoms.len() - 1].outcome;
        if idx > 0 && lowest < self.atoms[idx - 1].outcome {
            return Err(Error::OrderingViolated(format!(
                "spread reaches {lowest}, below the neighbouring outcome {}",
                self.atoms[idx - 1].outcome
            )));
        }
        if idx + 1 < self.atoms.len() && highest > self.atoms[idx + 1].outcome {
            return Err(Error::OrderingViolated(format!(
                "spread reaches {highest}, above the neighbouring outcome {}",
                self.atoms[idx + 1].outcome
            )));
        }

        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(self.atoms.len() + risk.atoms.len());
        for (i, a) in self.atoms.iter().enumerate() {
            if i == idx {
                let remaining = a.probability - risk.total_mass();
                if remaining > IDENTITY_TOL {
                    pairs.push((a.outcome, remaining));
                }
            } else {
                pairs.push((a.outcome, a.probability));
            }
        }
        pairs.extend(
            risk.atoms
                .iter()
                .map(|s| (branch_outcome + s.outcome, s.probability)),
        );
        Lottery::new(pairs)
    }

    /// `E[max of n independent copies] - mean`; `n = 2` is the maxiance.
    pub fn dual_moment(&self, n: u32) -> Result<f64> {
        if n < 1 {
            return Err(Error::BadOrder(n));
        }
        if n == 1 {
            return Ok(0.0);
        }
        let m = self.mean();
        let exponent = n as i32;
        Ok(cumulative(&self.atoms)
            .map(|(x, prev, cdf)| (x - m) * (cdf.min(1.0).powi(exponent) - prev.powi(exponent)))
            .sum())
    }

    /// Maxiance over mean, which equals `E|A1 - A2| / (2 E[A])`.
    pub fn gini(&self) -> Result<f64> {
        let m = self.moments();
        if m.mean.abs() <= IDENTITY_TOL {
            return Err(Error::ZeroMeanGini { mean: m.mean });
        }
        Ok(m.maxiance / m.mean)
    }

    /// Atoms of the lottery as wire data.
    pub fn to_atom_list(&self) -> AtomList {
        AtomList {
            atoms: self.atoms.clone(),
        }
    }
}

impl Risk for Lottery {
    fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn total_mass(&self) -> f64 {
        1.0
    }

    fn centre(&self) -> f64 {
        self.mean()
    }
}

impl TryFrom<AtomList> for Lottery {
    type Error = Error;

    fn try_from(raw: AtomList) -> Result<Self> {
        Lottery::new(raw.atoms.into_iter().map(Into::into))
    }
}

impl From<Lottery> for AtomList {
    fn from(l: Lottery) -> Self {
        AtomList { atoms: l.atoms }
    }
}

/// A zero-mean risk of total mass `Pr <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomList", into = "AtomList")]
pub struct SpreadRisk {
    atoms: Vec<Atom>,
    total_mass: f64,
}

impl SpreadRisk {
    /// Builds a spread risk from unconditional `(outcome, probability)` pairs.
    ///
    /// The unconditional mean must already be zero; it is never re-centred.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let atoms = sort_and_merge(pairs)?;
        let total: f64 = atoms.iter().map(|a| a.probability).sum();
        if total > 1.0 + IDENTITY_TOL {
            return Err(Error::MassExceedsOne { total });
        }
        let mean: f64 = atoms.iter().map(|a| a.probability * a.outcome).sum();
        if mean.abs() > INPUT_TOL {
            return Err(Error::NotZeroMean { mean });
        }
        Ok(SpreadRisk {
            atoms,
            total_mass: total,
        })
    }

    /// `±eps2`, each with unconditional probability `eps1`.
    pub fn binary(eps1: f64, eps2: f64) -> Result<Self> {
        if !(eps1 > 0.0 && eps1 <= 0.5) {
            return Err(Error::param("eps1", eps1, "0 < eps1 <= 1/2"));
        }
        if !(eps2 > 0.0) || !eps2.is_finite() {
            return Err(Error::param("eps2", eps2, "eps2 > 0"));
        }
        SpreadRisk::new([(-eps2, eps1), (eps2, eps1)])
    }

    /// `n` equally likely states, each with unconditional probability
    /// `2 eps1 / n`. Adjacent outcomes may coincide.
    pub fn n_state(eps1: f64, outcomes: &[f64]) -> Result<Self> {
        if outcomes.len() < 2 {
            return Err(Error::param(
                "n",
                outcomes.len() as f64,
                "at least two states",
            ));
        }
        if !(eps1 > 0.0 && eps1 <= 0.5) {
            return Err(Error::param("eps1", eps1, "0 < eps1 <= 1/2"));
        }
        if outcomes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::OrderingViolated(
                "state outcomes must be listed in ascending order".into(),
            ));
        }
        let sum: f64 = outcomes.iter().sum();
        if sum.abs() > INPUT_TOL {
            return Err(Error::NotZeroMean {
                mean: sum / outcomes.len() as f64,
            });
        }
        let p = 2.0 * eps1 / outcomes.len() as f64;
        SpreadRisk::new(outcomes.iter().map(|&x| (x, p)))
    }

    pub fn to_atom_list(&self) -> AtomList {
        AtomList {
            atoms: self.atoms.clone(),
        }
    }
}

impl Risk for SpreadRisk {
    fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    fn total_mass(&self) -> f64 {
        self.total_mass
    }

    fn centre(&self) -> f64 {
        0.0
    }
}

impl TryFrom<AtomList> for SpreadRisk {
    type Error = Error;

    fn try_from(raw: AtomList) -> Result<Self> {
        SpreadRisk::new(raw.atoms.into_iter().map(Into::into))
    }
}

impl From<SpreadRisk> for AtomList {
    fn from(s: SpreadRisk) -> Self {
        AtomList { atoms: s.atoms }
    }
}

/// Mean, variance, maxiance and miniance of `risk`.
///
/// With `c` the centre and `F` the (sub-)distribution function,
/// maxiance is `sum (x_i - c)(F_i^2 - F_{i-1}^2)` and miniance is
/// `sum (x_i - c)((Pr - F_{i-1})^2 - (Pr - F_i)^2)`.
pub fn moments<R: Risk + ?Sized>(risk: &R) -> MomentSet {
    let atoms = risk.atoms();
    let mass = risk.total_mass();
    let centre = risk.centre();
    let mean = risk.mean();
    let mut variance = 0.0;
    let mut maxiance = 0.0;
    let mut miniance = 0.0;
    for (a, (_, prev, cdf)) in atoms.iter().zip(cumulative(atoms)) {
        let d = a.outcome - centre;
        let p = a.probability;
        variance += p * d * d;
        maxiance += d * p * (cdf + prev);
        miniance += d * p * ((mass - prev) + (mass - cdf));
    }
    MomentSet {
        mean,
        variance,
        maxiance: maxiance.max(0.0),
        miniance,
        total_mass: mass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lottery_sorts_outcomes() {
        let l = Lottery::new([(1.0, 0.5), (-1.0, 0.5)]).unwrap();
        assert_eq!(
            l.atoms(),
            &[
                Atom {
                    outcome: -1.0,
                    probability: 0.5
                },
                Atom {
                    outcome: 1.0,
                    probability: 0.5
                }
            ]
        );
    }

    #[test]
    fn lottery_merges_duplicates() {
        let l = Lottery::new([(0.0, 0.3), (0.0, 0.7)]).unwrap();
        assert_eq!(
            l.atoms(),
            &[Atom {
                outcome: 0.0,
                probability: 1.0
            }]
        );
    }

    #[test]
    fn lottery_rejects_bad_mass() {
        assert!(matches!(
            Lottery::new([(1.0, 0.5), (2.0, 0.6)]),
            Err(Error::MassNotOne { .. })
        ));
        assert_eq!(Lottery::new([]), Err(Error::EmptyLottery));
        assert!(matches!(
            Lottery::new([(1.0, 1.0), (2.0, 0.0)]),
            Err(Error::NonPositiveProbability { .. })
        ));
        assert!(matches!(
            Lottery::new([(1.0, 1.2), (2.0, -0.2)]),
            Err(Error::NonPositiveProbability { .. })
        ));
    }

    #[test]
    fn lottery_renormalizes_within_tolerance() {
        let l = Lottery::new([(0.0, 0.5 + 4e-10), (1.0, 0.5)]).unwrap();
        let total: f64 = l.atoms().iter().map(|a| a.probability).sum();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn spread_risk_construction() {
        let s = SpreadRisk::new([(-1.0, 0.1), (1.0, 0.1)]).unwrap();
        assert!(close(s.total_mass(), 0.2, 1e-15));
        let s = SpreadRisk::new([(-2.0, 0.1), (1.0, 0.2)]).unwrap();
        assert!(close(s.total_mass(), 0.3, 1e-15));
        assert!(close(s.mean(), 0.0, 1e-15));
        assert!(matches!(
            SpreadRisk::new([(1.0, 0.1), (1.0, 0.1)]),
            Err(Error::NotZeroMean { .. })
        ));
        assert!(matches!(
            SpreadRisk::new([(-1.0, 0.6), (1.0, 0.6)]),
            Err(Error::MassExceedsOne { .. })
        ));
    }

    #[test]
    fn binary_spread_cases() {
        let s = SpreadRisk::binary(0.1, 1.0).unwrap();
        assert_eq!(s, SpreadRisk::new([(-1.0, 0.1), (1.0, 0.1)]).unwrap());
        let s = SpreadRisk::binary(0.5, 2.0).unwrap();
        assert_eq!(s.total_mass(), 1.0);
        assert!(matches!(
            SpreadRisk::binary(0.6, 1.0),
            Err(Error::ParamOutOfRange { name: "eps1", .. })
        ));
        assert!(SpreadRisk::binary(0.1, 0.0).is_err());
    }

    #[test]
    fn n_state_spread_cases() {
        assert_eq!(
            SpreadRisk::n_state(0.1, &[-1.0, 1.0]).unwrap(),
            SpreadRisk::binary(0.1, 1.0).unwrap()
        );
        let s = SpreadRisk::n_state(0.1, &[-1.0, 0.0, 1.0]).unwrap();
        for a in s.atoms() {
            assert!(close(a.probability, 1.0 / 15.0, 1e-15));
        }
        assert!(close(s.total_mass(), 0.2, 1e-15));
        assert!(matches!(
            SpreadRisk::n_state(0.1, &[-1.0, 1.0, 1.0]),
            Err(Error::NotZeroMean { .. })
        ));
        assert!(matches!(
            SpreadRisk::n_state(0.1, &[1.0, -1.0]),
            Err(Error::OrderingViolated(_))
        ));
        assert!(SpreadRisk::n_state(0.1, &[0.0]).is_err());
        // Equal adjacent states merge into one atom of double weight.
        let s = SpreadRisk::n_state(0.1, &[-2.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.atoms().len(), 2);
        assert!(close(s.atoms()[1].probability, 0.4 / 3.0, 1e-15));
    }

    #[test]
    fn spread_on_middle_branch_recovers_lottery_a() {
        let (p0, eps1) = (0.5, 0.1);
        let b =
            Lottery::new([(-1.0, p0 - eps1), (0.0, 2.0 * eps1), (1.0, 1.0 - p0 - eps1)]).unwrap();
        let a = b
            .with_spread(0.0, &SpreadRisk::binary(eps1, 1.0).unwrap())
            .unwrap();
        assert_eq!(a.atoms().len(), 2);
        assert_eq!(a.atoms()[0].outcome, -1.0);
        assert_eq!(a.atoms()[1].outcome, 1.0);
        assert!(close(a.atoms()[0].probability, p0, 1e-12));
        assert!(close(a.atoms()[1].probability, 1.0 - p0, 1e-12));
    }

    #[test]
    fn degenerate_spread_leaves_base_unchanged() {
        let base = Lottery::new([(-1.0, 0.3), (0.0, 0.4), (2.0, 0.3)]).unwrap();
        let zero = SpreadRisk::new([(0.0, 0.4)]).unwrap();
        let out = base.with_spread(0.0, &zero).unwrap();
        for (x, y) in out.atoms().iter().zip(base.atoms()) {
            assert_eq!(x.outcome, y.outcome);
            assert!(close(x.probability, y.probability, 1e-15));
        }
    }

    #[test]
    fn spread_errors() {
        let base = Lottery::new([(-1.0, 0.45), (0.0, 0.1), (1.0, 0.45)]).unwrap();
        let s = SpreadRisk::binary(0.1, 0.5).unwrap();
        assert!(matches!(
            base.with_spread(0.0, &s),
            Err(Error::InsufficientBranchMass { .. })
        ));
        assert!(matches!(
            base.with_spread(3.0, &s),
            Err(Error::InsufficientBranchMass { .. })
        ));
        let wide = SpreadRisk::binary(0.05, 2.0).unwrap();
        assert!(matches!(
            base.with_spread(0.0, &wide),
            Err(Error::OrderingViolated(_))
        ));
    }

    #[test]
    fn coin_moments() {
        let coin = Lottery::new([(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let m = coin.moments();
        assert_eq!(m.variance, 1.0);
        assert_eq!(m.maxiance, 0.5);
        assert_eq!(m.miniance, -0.5);
        assert_eq!(m.total_mass, 1.0);
    }

    #[test]
    fn binary_spread_moments() {
        let m = SpreadRisk::binary(0.1, 1.0).unwrap().moments();
        assert!(close(m.maxiance, 0.02, 1e-12));
        assert!(close(m.total_mass, 0.2, 1e-12));
        let m = SpreadRisk::binary(0.1, 2.0).unwrap().moments();
        assert!(close(m.variance, 0.8, 1e-12));
        assert!(close(m.maxiance, 0.04, 1e-12));
        assert!(close(m.miniance, -0.04, 1e-12));
    }

    #[test]
    fn degenerate_moments() {
        let m = Lottery::degenerate(3.7).unwrap().moments();
        assert_eq!(m.variance, 0.0);
        assert_eq!(m.maxiance, 0.0);
    }

    #[test]
    fn dual_moment_orders() {
        let coin = Lottery::new([(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(coin.dual_moment(1).unwrap(), 0.0);
        assert!(close(coin.dual_moment(2).unwrap(), 0.5, 1e-15));
        assert!(close(coin.dual_moment(3).unwrap(), 0.75, 1e-15));
        assert_eq!(coin.dual_moment(0), Err(Error::BadOrder(0)));
    }

    #[test]
    fn gini_cases() {
        let u = Lottery::new([(1.0, 1.0 / 3.0), (2.0, 1.0 / 3.0), (3.0, 1.0 / 3.0)]).unwrap();
        assert!(close(u.gini().unwrap(), 2.0 / 9.0, 1e-15));
        assert_eq!(Lottery::degenerate(5.0).unwrap().gini().unwrap(), 0.0);
        let coin = Lottery::new([(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(matches!(coin.gini(), Err(Error::ZeroMeanGini { .. })));
    }

    #[test]
    fn json_shape() {
        let l = Lottery::new([(1.0, 0.25), (-1.0, 0.75)]).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"atoms":[[-1.0,0.75],[1.0,0.25]]}"#);
        let back: Lottery = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let bad: std::result::Result<Lottery, _> =
            serde_json::from_str(r#"{"atoms":[[1.0,0.5],[2.0,0.6]]}"#);
        assert!(bad.is_err());
        let s: SpreadRisk = serde_json::from_str(r#"{"atoms":[[1,0.1],[-1,0.1]]}"#).unwrap();
        assert!(close(s.total_mass(), 0.2, 1e-15));
    }
}
