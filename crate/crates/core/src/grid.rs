use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `count` evenly spaced points from `start` to `stop`, both included.
/// Written `start:stop:count` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::param(
                "count",
                count as f64,
                "at least 2 grid points",
            ));
        }
        if !start.is_finite() || !stop.is_finite() || !(start < stop) {
            return Err(Error::param("stop", stop, "finite and above start"));
        }
        Ok(Grid { start, stop, count })
    }

    /// Default probability grid `0.01, 0.02, ..., 0.99`.
    pub fn probabilities() -> Self {
        Grid {
            start: 0.01,
            stop: 0.99,
            count: 99,
        }
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadSpec {
            kind: "grid",
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, count] = parts[..] else {
            return Err(bad("expected start:stop:count"));
        };
        let start: f64 = start.parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = stop.parse().map_err(|_| bad("stop is not a number"))?;
        let count: usize = count
            .parse()
            .map_err(|_| bad("count is not a whole number"))?;
        Grid::new(start, stop, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probability_grid() {
        let pts = Grid::probabilities().points();
        assert_eq!(pts.len(), 99);
        assert_eq!(pts[0], 0.01);
        assert_eq!(pts[98], 0.99);
        assert!((pts[49] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parsing() {
        let g: Grid = "0.5:10:40".parse().unwrap();
        assert_eq!(g, Grid::new(0.5, 10.0, 40).unwrap());
        assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
        assert!("1:2".parse::<Grid>().is_err());
        assert!("1:2:1".parse::<Grid>().is_err());
        assert!("2:1:5".parse::<Grid>().is_err());
        assert!("a:1:5".parse::<Grid>().is_err());
    }
}
