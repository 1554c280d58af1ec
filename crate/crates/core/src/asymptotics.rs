//! The limiting law of the normalized nearest-design distance for i.i.d.
//! uniform designs, `F_d(t) = 1 - exp(-t^d)` with `t = (n V_d)^(1/d) r`.
//!
//! Everything is evaluated in log space: `t^d` and `V_d` leave the range of
//! `f64` quickly as `d` grows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{param, Result};

/// `ln V_d` where `V_d = pi^(d/2) / Gamma(d/2 + 1)`.
pub fn ln_unit_ball_volume(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    half * PI.ln() - ln_gamma(half + 1.0)
}

/// Volume of the unit Euclidean ball in `R^d`.
pub fn unit_ball_volume(dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(param("d", "must be at least 1"));
    }
    Ok(ln_unit_ball_volume(dim).exp())
}

/// `1 - exp(-t^d)`.
pub fn limit_cdf(t: f64, dim: usize) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(param("t", format!("must be nonnegative, got {t}")));
    }
    if dim == 0 {
        return Err(param("d", "must be at least 1"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(cdf_from_ln_power(dim as f64 * t.ln()))
}

/// `1 - exp(-exp(ln_power))`, accurate in both tails.
fn cdf_from_ln_power(ln_power: f64) -> f64 {
    -(-ln_power.exp()).exp_m1()
}

/// Parameters of the asymptotic approximation for an `n`-point design in `d`
/// dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub dim: usize,
    pub n: usize,
}

impl AsymptoticModel {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(param("d", "must be at least 1"));
        }
        if n == 0 {
            return Err(param("n", "must be at least 1"));
        }
        Ok(Self { dim, n })
    }

    /// `ln(n V_d)`: the log of `t^d / r^d`.
    fn ln_scale(&self) -> f64 {
        (self.n as f64).ln() + ln_unit_ball_volume(self.dim)
    }

    /// The radius whose predicted coverage is `target`.
    pub fn radius(&self, target: f64) -> Result<f64> {
        if !(target > 0.0 && target < 1.0) {
            return Err(param("target", format!("must lie in (0, 1), got {target}")));
        }
        // t^d = -ln(1 - target)
        let ln_td = (-(-target).ln_1p()).ln();
        Ok(((ln_td - self.ln_scale()) / self.dim as f64).exp())
    }

    /// Predicted coverage `F_d((n V_d)^(1/d) r)`.
    pub fn coverage(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(param("r", format!("must be nonnegative, got {r}")));
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        Ok(cdf_from_ln_power(self.ln_scale() + self.dim as f64 * r.ln()))
    }
}

/// Radius at which the asymptotic law predicts coverage `target`.
pub fn asymptotic_radius(n: usize, dim: usize, target: f64) -> Result<f64> {
    AsymptoticModel::new(dim, n)?.radius(target)
}

/// Asymptotic approximation of `F(r, X_n)`.
pub fn approx_coverage(r: f64, n: usize, dim: usize) -> Result<f64> {
    AsymptoticModel::new(dim, n)?.coverage(r)
}
