//! Midpoint-rule quadrature on uniform grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative boundary density above which a domain is flagged as too small.
pub const BOUNDARY_THRESHOLD: f64 = 1e-8;

/// Midpoint rule over `[lo, hi]` with `n` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSettings {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl QuadratureSettings {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let q = QuadratureSettings { lo, hi, n };
        q.validate()?;
        Ok(q)
    }

    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Domain(format!(
                "quadrature interval [{}, {}] is empty or not finite",
                self.lo, self.hi
            )));
        }
        if self.n == 0 {
            return Err(Error::Domain("quadrature needs at least one cell".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.n).map(move |i| self.lo + (i as f64 + 0.5) * h)
    }
}

/// Result of integrating a nonnegative density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    /// The integrand at either end of the domain exceeded
    /// [`BOUNDARY_THRESHOLD`] times its peak.
    pub boundary_warning: bool,
}

/// Integrates a nonnegative function with the midpoint rule and checks the
/// boundary values against the peak.
pub fn integrate_density(q: &QuadratureSettings, f: impl Fn(f64) -> f64) -> Integral {
    let samples: Vec<f64> = q.midpoints().map(f).collect();
    let peak = samples.iter().cloned().fold(0.0, f64::max);
    let edge = samples[0].max(samples[samples.len() - 1]);
    Integral {
        value: pairwise_sum(&samples) * q.step(),
        boundary_warning: peak > 0.0 && edge > BOUNDARY_THRESHOLD * peak,
    }
}

/// Fixed-order pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}
