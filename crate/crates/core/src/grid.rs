//! Inclusive `start:step:end` grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Slack allowed when deciding whether `end` is on the grid.
const END_SLACK: f64 = 1e-12;

/// Hard cap on grid length; protects scans from absurd specs.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub end: f64,
}

impl Grid {
    pub fn new(start: f64, step: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && end.is_finite()) {
            return Err(Error::invalid("grid bounds and step must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::invalid(format!("grid step must be positive, got {step}")));
        }
        if end < start {
            return Err(Error::invalid(format!("grid end {end} is below start {start}")));
        }
        let grid = Grid { start, step, end };
        if grid.count_unchecked() > MAX_POINTS as f64 {
            return Err(Error::invalid(format!("grid has more than {MAX_POINTS} points")));
        }
        Ok(grid)
    }

    /// A single-point grid.
    pub fn point(x: f64) -> Result<Self> {
        Grid::new(x, 1.0, x)
    }

    fn count_unchecked(&self) -> f64 {
        ((self.end - self.start) / self.step + END_SLACK).floor() + 1.0
    }

    pub fn len(&self) -> usize {
        self.count_unchecked() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points are computed as `start + i*step` (no accumulation), so the same
    /// spec always yields bit-identical points.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad number {t:?} in grid {s:?}")))
        };
        match parts.as_slice() {
            [x] => Grid::point(num(x)?),
            [start, step, end] => Grid::new(num(start)?, num(step)?, num(end)?),
            _ => Err(Error::invalid(format!(
                "grid must look like start:step:end, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.step, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_fig1_grid_has_41_points() {
        let g: Grid = "-1:0.05:1".parse().unwrap();
        assert_eq!(g.len(), 41);
        let pts = g.points();
        assert_eq!(pts[0], -1.0);
        assert!((pts[40] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn end_included_within_slack() {
        let g: Grid = "0:0.1:0.3".parse().unwrap();
        assert_eq!(g.len(), 4);
        let g: Grid = "0.01:0.01:2".parse().unwrap();
        assert_eq!(g.len(), 200);
    }

    #[test]
    fn single_value_is_a_point() {
        let g: Grid = "0.25".parse().unwrap();
        assert_eq!(g.points(), vec![0.25]);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "1:2", "0:0:1", "0:-1:1", "1:0.1:0", "a:b:c", "0:1e-9:1e9", "nan:1:2"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad:?} accepted");
        }
    }
}
