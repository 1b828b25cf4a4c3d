//! Brute-force and Monte Carlo cross-checks for the analytic routines.
//!
//! Nothing here calls into the moment or premium code it is meant to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::Solved;
use crate::preference::UtilityFunction;
use crate::risk::{Lottery, Risk};
use crate::solve;

/// Samples per substream in [`maxiance_mc`].
pub const MC_CHUNK: usize = 1 << 16;

pub const MIN_SAMPLES: usize = 100;

/// `sum_i sum_j p_i p_j max(x_i - c, x_j - c)` by explicit double loop.
pub fn maxiance_pairs<R: Risk + ?Sized>(risk: &R) -> f64 {
    let atoms = risk.atoms();
    let c = risk.centre();
    let mut total = 0.0;
    for a in atoms {
        for b in atoms {
            total += a.probability * b.probability * (a.outcome - c).max(b.outcome - c);
        }
    }
    total
}

/// `E|X1 - X2|` by explicit double loop.
pub fn mean_abs_difference(lottery: &Lottery) -> f64 {
    let atoms = lottery.atoms();
    let mut total = 0.0;
    for a in atoms {
        for b in atoms {
            total += a.probability * b.probability * (a.outcome - b.outcome).abs();
        }
    }
    total
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Estimates the maxiance from `n_samples` pairs of independent draws.
///
/// Samples are split into chunks of [`MC_CHUNK`]; chunk `k` draws from the
/// ChaCha stream `k` of `seed`, and chunk sums are combined in chunk order.
/// The result is therefore bit-identical for any thread count.
pub fn maxiance_mc(lottery: &Lottery, n_samples: usize, seed: u64) -> Result<McEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::BadSampleCount(n_samples));
    }
    let atoms = lottery.atoms();
    let mean: f64 = atoms.iter().map(|a| a.probability * a.outcome).sum();
    let mut cdf: Vec<f64> = atoms
        .iter()
        .scan(0.0, |acc, a| {
            *acc += a.probability;
            Some(*acc)
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }
    let draw = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        atoms[cdf.partition_point(|&f| f <= u)].outcome
    };

    let chunks = n_samples.div_ceil(MC_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let len = MC_CHUNK.min(n_samples - k * MC_CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                let d = draw(&mut rng).max(draw(&mut rng)) - mean;
                s += d;
                s2 += d * d;
            }
            (s, s2)
        })
        .collect();
    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |(a, b), &(s, s2)| (a + s, b + s2));

    let n = n_samples as f64;
    let estimate = sum / n;
    let variance = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate,
        stderr: (variance / n).sqrt(),
        n_samples,
        seed,
    })
}

/// Step used by [`fd_derivative`] for the given order.
pub fn fd_step(x: f64, order: u8) -> f64 {
    let scale = x.abs().max(1.0);
    match order {
        1 => 1e-6 * scale,
        2 => 1e-4 * scale,
        _ => 1e-4 * scale,
    }
}

/// Central finite-difference estimate of the first, second or third
/// derivative of `f` at `x`.
pub fn fd_derivative<F>(f: F, x: f64, order: u8) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = fd_step(x, order);
    match order {
        1 => Ok((f(x + h)? - f(x - h)?) / (2.0 * h)),
        2 => Ok((f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h)),
        3 => Ok(
            (f(x + 2.0 * h)? - 2.0 * f(x + h)? + 2.0 * f(x - h)? - f(x - 2.0 * h)?)
                / (2.0 * h * h * h),
        ),
        _ => Err(Error::param("order", order as f64, "1, 2 or 3")),
    }
}

/// Solves `lhs_weight * U(w0 - lambda) = rhs_value` for `lambda` in
/// `bracket` by bisection alone.
pub fn indifference_bisect(
    lhs_weight: f64,
    rhs_value: f64,
    u: &UtilityFunction,
    w0: f64,
    bracket: (f64, f64),
) -> Result<Solved> {
    if !(lhs_weight > 0.0) {
        return Err(Error::param("lhs_weight", lhs_weight, "lhs_weight > 0"));
    }
    let (lo, hi) = bracket;
    u.check_domain(w0 - lo)?;
    u.check_domain(w0 - hi)?;
    let root = solve::bisect(
        |l| lhs_weight * u.value(w0 - l) - rhs_value,
        lo,
        hi,
        0.0,
        200,
    )?;
    Ok(Solved {
        premium: root.x,
        iterations: root.iterations,
    })
}
