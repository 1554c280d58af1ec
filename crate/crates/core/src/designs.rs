//! Generators for the design families under study.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::geometry::{sample_uniform, Design, Hyperbox};
use crate::rng::SeededStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// i.i.d. uniform on `[-delta, delta]^d`, inside the domain `[-1, 1]^d`.
    UniformDelta,
    /// Even-parity half of `{-1/2, +1/2}^d`.
    FactorialHalf,
    /// `(2j - 1) / (2n)` on `[0, 1]`.
    GridMidpoint1d,
    /// `(2j - 1) / (2n - 1)` on `[0, 1]`.
    Paper1d,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::UniformDelta => "uniform_delta",
            Family::FactorialHalf => "factorial_half",
            Family::GridMidpoint1d => "grid_midpoint_1d",
            Family::Paper1d => "paper_1d",
        }
    }

    /// The domain a family's designs are meant to cover.
    pub fn domain(self, dim: usize) -> Result<Hyperbox> {
        match self {
            Family::UniformDelta | Family::FactorialHalf => Hyperbox::cube(dim, -1.0, 1.0),
            Family::GridMidpoint1d | Family::Paper1d => Ok(Hyperbox::unit(1)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform_delta" | "uniform" => Ok(Family::UniformDelta),
            "factorial_half" | "factorial" => Ok(Family::FactorialHalf),
            "grid_midpoint_1d" | "midpoint_1d" | "midpoint" => Ok(Family::GridMidpoint1d),
            "paper_1d" => Ok(Family::Paper1d),
            other => Err(param("family", format!("unknown family `{other}`"))),
        }
    }
}

/// A fully parameterized request for a design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub family: Family,
    pub dim: usize,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
}

impl DesignSpec {
    pub fn build(&self) -> Result<Design> {
        let need_n = || self.n.ok_or_else(|| param("n", "required for this family"));
        let need_1d = || {
            if self.dim == 1 {
                Ok(())
            } else {
                Err(param("d", "one-dimensional family requires d = 1"))
            }
        };
        match self.family {
            Family::UniformDelta => {
                let seed = self.seed.ok_or_else(|| param("seed", "required for random designs"))?;
                uniform_delta_design(
                    self.dim,
                    need_n()?,
                    self.delta.unwrap_or(1.0),
                    SeededStream::new(seed, crate::rng::DESIGN_STREAM_BASE),
                )
            }
            Family::FactorialHalf => {
                if let Some(n) = self.n {
                    let fixed = 1usize.checked_shl(self.dim as u32 - 1).unwrap_or(0);
                    if self.dim >= 2 && n != fixed {
                        return Err(param("n", format!("factorial_half fixes n = 2^(d-1) = {fixed}")));
                    }
                }
                factorial_half_design(self.dim)
            }
            Family::GridMidpoint1d => {
                need_1d()?;
                midpoint_design_1d(need_n()?)
            }
            Family::Paper1d => {
                need_1d()?;
                paper_1d_design(need_n()?)
            }
        }
    }
}

/// `n` i.i.d. points uniform on `[-delta, delta]^d`.
pub fn uniform_delta_design(dim: usize, n: usize, delta: f64, stream: SeededStream) -> Result<Design> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(param("delta", format!("must lie in (0, 1], got {delta}")));
    }
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    sample_uniform(&Hyperbox::cube(dim, -delta, delta)?, n, stream)
}

/// The largest design this crate will materialize for the half-fraction.
pub const FACTORIAL_MAX_DIM: usize = 24;

/// Even-parity vertices of `{-1/2, +1/2}^d`, in ascending lexicographic order.
pub fn factorial_half_design(dim: usize) -> Result<Design> {
    if dim < 2 {
        return Err(param("d", format!("factorial_half requires d >= 2, got {dim}")));
    }
    if dim > FACTORIAL_MAX_DIM {
        return Err(param(
            "d",
            format!("2^(d-1) points is too many to list for d > {FACTORIAL_MAX_DIM}"),
        ));
    }
    // Bit k (from the most significant of `dim`) set means coordinate k is
    // positive. Ascending integers are ascending lexicographic order, and
    // each pair (2m, 2m+1) contributes exactly one even-parity vertex.
    let mut coords = Vec::with_capacity(dim << (dim - 1));
    for bits in 0u64..(1u64 << dim) {
        let negatives = dim as u32 - bits.count_ones();
        if !negatives.is_multiple_of(2) {
            continue;
        }
        for k in 0..dim {
            let positive = (bits >> (dim - 1 - k)) & 1 == 1;
            coords.push(if positive { 0.5 } else { -0.5 });
        }
    }
    Design::from_flat(dim, coords)
}

/// Midpoints of `n` equal cells of `[0, 1]`.
pub fn midpoint_design_1d(n: usize) -> Result<Design> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let denom = (2 * n) as f64;
    Design::from_flat(1, (1..=n).map(|j| (2 * j - 1) as f64 / denom).collect())
}

/// Points `(2j - 1) / (2n - 1)`, `j = 1..n`, on `[0, 1]`.
pub fn paper_1d_design(n: usize) -> Result<Design> {
    if n == 0 {
        return Err(param("n", "must be at least 1"));
    }
    let denom = (2 * n - 1) as f64;
    Design::from_flat(1, (1..=n).map(|j| (2 * j - 1) as f64 / denom).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance;
    use std::collections::BTreeSet;

    #[test]
    fn factorial_d3_even_parity() {
        let d = factorial_half_design(3).unwrap();
        let got: BTreeSet<Vec<i8>> = d
            .points()
            .map(|p| p.iter().map(|v| (v * 2.0) as i8).collect())
            .collect();
        let want: BTreeSet<Vec<i8>> = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
            .iter()
            .map(|v| v.to_vec())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn factorial_counts_and_order() {
        assert_eq!(factorial_half_design(10).unwrap().len(), 512);
        for dim in 2..=12 {
            let d = factorial_half_design(dim).unwrap();
            assert_eq!(d.len(), 1 << (dim - 1));
            assert!(d.points().all(|p| p.iter().all(|v| v.abs() == 0.5)));
            let rows: Vec<&[f64]> = d.points().collect();
            assert!(rows.windows(2).all(|w| w[0] < w[1]), "not strictly ascending");
        }
        assert!(factorial_half_design(1).is_err());
        assert!(factorial_half_design(FACTORIAL_MAX_DIM + 1).is_err());
    }

    #[test]
    fn factorial_pairs_differ_in_even_count_and_min_distance_is_sqrt2() {
        for dim in 3..=12 {
            let d = factorial_half_design(dim).unwrap();
            let rows: Vec<&[f64]> = d.points().collect();
            let mut min = f64::INFINITY;
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    let diff = rows[i].iter().zip(rows[j]).filter(|(a, b)| a != b).count();
                    assert!(diff >= 2 && diff % 2 == 0);
                    min = min.min(distance(rows[i], rows[j]));
                }
            }
            // two flips of size 1 each
            assert_eq!(min, 2f64.sqrt(), "d = {dim}");
        }
    }

    #[test]
    fn one_dimensional_families() {
        assert_eq!(midpoint_design_1d(1).unwrap().as_flat(), &[0.5]);
        assert_eq!(midpoint_design_1d(2).unwrap().as_flat(), &[0.25, 0.75]);
        assert_eq!(paper_1d_design(1).unwrap().as_flat(), &[1.0]);
        let p = paper_1d_design(2).unwrap();
        assert!((p.as_flat()[0] - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(p.as_flat()[1], 1.0);
        assert!(midpoint_design_1d(0).is_err());
        assert!(paper_1d_design(0).is_err());
    }

    #[test]
    fn uniform_delta_support_and_degenerate_delta() {
        let s = SeededStream::new(3, 0);
        let d = uniform_delta_design(7, 500, 0.3, s).unwrap();
        assert!(d.points().all(|p| p.iter().all(|v| v.abs() <= 0.3)));
        let full = uniform_delta_design(7, 500, 1.0, s).unwrap();
        assert_eq!(full, sample_uniform(&Hyperbox::symmetric(7), 500, s).unwrap());
        assert!(uniform_delta_design(7, 5, 0.0, s).is_err());
        assert!(uniform_delta_design(7, 5, 1.5, s).is_err());
        assert!(uniform_delta_design(7, 5, f64::NAN, s).is_err());
    }

    #[test]
    fn uniform_delta_variance() {
        // Var of U[-delta, delta] is delta^2/3; SE of a sample variance over
        // m values is sqrt((mu4 - sigma^4)/m) with mu4 = delta^4/5.
        let (dim, n, delta) = (50, 1000, 0.5);
        let design = uniform_delta_design(dim, n, delta, SeededStream::new(99, 0)).unwrap();
        let target = delta * delta / 3.0;
        let mu4 = delta.powi(4) / 5.0;
        let se = |m: usize| ((mu4 - target * target) / m as f64).sqrt();

        let m = dim * n;
        let pooled = design.as_flat().iter().map(|x| x * x).sum::<f64>() / m as f64;
        assert!((pooled - target).abs() < 3.0 * se(m), "pooled {pooled}");

        for k in 0..dim {
            let xs: Vec<f64> = design.points().map(|p| p[k]).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            // 50 separate axes: 4 SE keeps the family-wise miss rate near 0.3%.
            assert!((var - target).abs() < 4.0 * se(n), "axis {k}: {var}");
        }
    }

    #[test]
    fn spec_builds() {
        let spec = DesignSpec {
            family: "factorial".parse().unwrap(),
            dim: 10,
            n: None,
            delta: None,
            seed: None,
        };
        assert_eq!(spec.build().unwrap().len(), 512);
        let bad_n = DesignSpec { n: Some(100), ..spec.clone() };
        assert!(bad_n.build().is_err());
        let one_d = DesignSpec {
            family: Family::Paper1d,
            dim: 2,
            n: Some(3),
            delta: None,
            seed: None,
        };
        assert!(one_d.build().is_err());
        let random = DesignSpec {
            family: Family::UniformDelta,
            dim: 4,
            n: Some(10),
            delta: Some(0.5),
            seed: None,
        };
        assert!(random.build().is_err(), "seed is required");
        assert!("nope".parse::<Family>().is_err());
    }
}
