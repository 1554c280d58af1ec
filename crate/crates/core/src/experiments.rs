//! Drivers for the covering experiments: asymptotic-vs-finite coverage across
//! dimensions, the full cdf against its asymptotic approximation, the
//! delta-effect for uniform designs in shrunken cubes, and the weak-covering
//! profile of the half-fraction factorial design.
//!
//! Each sweep is a list of jobs; job `j` draws from seed
//! `derive_seed(seed, j)`, so rows are reproducible from `(parameters, seed)`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{asymptotic_radius, AsymptoticModel};
use crate::coverage::{
    coverage_at, coverage_from_hits, covering_radius_factorial_exact, distance_sample,
    distance_sample_with, quantile, raw_distances, CoverageEstimate, DistanceSample,
};
use crate::designs::{uniform_delta_design, Family};
use crate::error::{param, Error, Result};
use crate::geometry::{sample_uniform, Hyperbox};
use crate::nearest::{BlockedDesign, FactorialHalf};
use crate::rng::{derive_seed, SeededStream, DESIGN_STREAM_BASE};
use crate::stats::CONFIDENCE;
use crate::table::CsvRow;

/// Provenance attached to every sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub experiment: String,
    pub family: String,
    /// Design size (points per design).
    pub n: u64,
    /// Monte Carlo points per estimate.
    #[serde(rename = "N")]
    pub samples: usize,
    pub seed: u64,
    pub replicates: usize,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<R> {
    pub meta: SweepMeta,
    pub rows: Vec<R>,
}

/// Coverage at the asymptotic radius for one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub d: usize,
    pub r: f64,
    /// Mean coverage over replicate designs.
    pub coverage: f64,
    /// Clopper-Pearson bounds on the pooled hit fraction.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Standard deviation of coverage across replicates.
    pub sd: f64,
}

impl CsvRow for GapRow {
    const HEADER: &'static [&'static str] = &["d", "r", "coverage", "ci_low", "ci_high", "sd"];

    fn values(&self) -> Vec<f64> {
        vec![self.d as f64, self.r, self.coverage, self.ci_low, self.ci_high, self.sd]
    }
}

/// Estimated and asymptotic coverage at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub r: f64,
    pub coverage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub approx: f64,
}

impl CsvRow for CdfRow {
    const HEADER: &'static [&'static str] = &["r", "coverage", "ci_low", "ci_high", "approx"];

    fn values(&self) -> Vec<f64> {
        vec![self.r, self.coverage, self.ci_low, self.ci_high, self.approx]
    }
}

/// Empirical cdf point without an asymptotic column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcdfRow {
    pub r: f64,
    #[serde(rename = "F_hat")]
    pub f_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CsvRow for EcdfRow {
    const HEADER: &'static [&'static str] = &["r", "F_hat", "ci_low", "ci_high"];

    fn values(&self) -> Vec<f64> {
        vec![self.r, self.f_hat, self.ci_low, self.ci_high]
    }
}

impl From<CoverageEstimate> for EcdfRow {
    fn from(c: CoverageEstimate) -> Self {
        Self {
            r: c.r,
            f_hat: c.fraction,
            ci_low: c.ci_low,
            ci_high: c.ci_high,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub delta: f64,
    pub r: f64,
    pub coverage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl CsvRow for DeltaRow {
    const HEADER: &'static [&'static str] = &["delta", "r", "coverage", "ci_low", "ci_high"];

    fn values(&self) -> Vec<f64> {
        vec![self.delta, self.r, self.coverage, self.ci_low, self.ci_high]
    }
}

/// Evenly spaced grid `lo, ..., hi` with `steps` points (`steps >= 2`).
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(param("steps", "need at least 2 grid points"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(param("grid", format!("need finite lo <= hi, got [{lo}, {hi}]")));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + i as f64 * h })
        .collect())
}

fn sorted_radii(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(param("r", "radius grid is empty"));
    }
    if grid.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(param("r", "radii must be finite and nonnegative"));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    Ok(g)
}

fn meta(experiment: &str, family: &str, n: u64, samples: usize, seed: u64, replicates: usize) -> SweepMeta {
    SweepMeta {
        experiment: experiment.into(),
        family: family.into(),
        n,
        samples,
        seed,
        replicates,
        confidence: CONFIDENCE,
    }
}

/// For each dimension, the true coverage of i.i.d. uniform designs in
/// `[0, 1]^d` at the radius where the asymptotic law predicts `target`.
pub fn asymptotic_gap_sweep(
    dims: &[usize],
    n: usize,
    target: f64,
    samples: usize,
    seed: u64,
    replicates: usize,
) -> Result<SweepResult<GapRow>> {
    if replicates == 0 {
        return Err(param("replicates", "must be at least 1"));
    }
    if n == 0 || samples == 0 {
        return Err(param("n", "design size and sample size must be positive"));
    }
    let mut dims = dims.to_vec();
    dims.sort_unstable();
    let mut rows = Vec::with_capacity(dims.len());
    for (i, &d) in dims.iter().enumerate() {
        let r = asymptotic_radius(n, d, target)?;
        let domain = Hyperbox::unit(d);
        let mut fractions = Vec::with_capacity(replicates);
        let mut hits_total = 0usize;
        for rep in 0..replicates {
            let job_seed = derive_seed(seed, (i * replicates + rep) as u64);
            let design = sample_uniform(&domain, n, SeededStream::new(job_seed, DESIGN_STREAM_BASE))?;
            let dist = raw_distances(&domain, &BlockedDesign::new(&design), samples, job_seed)?;
            let hits = dist.iter().filter(|&&x| x <= r).count();
            hits_total += hits;
            fractions.push(hits as f64 / samples as f64);
        }
        let mean = fractions.iter().sum::<f64>() / replicates as f64;
        let sd = if replicates > 1 {
            (fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (replicates - 1) as f64).sqrt()
        } else {
            0.0
        };
        let pooled = coverage_from_hits(r, hits_total, samples * replicates);
        rows.push(GapRow {
            d,
            r,
            coverage: mean,
            ci_low: pooled.ci_low.min(mean),
            ci_high: pooled.ci_high.max(mean),
            sd,
        });
    }
    Ok(SweepResult {
        meta: meta("asymptotic_gap", "uniform", n as u64, samples, seed, replicates),
        rows,
    })
}

/// Estimated `F(r, X_n)` for one i.i.d. uniform design in `[0, 1]^d` next to
/// its asymptotic approximation.
pub fn cdf_comparison(
    dim: usize,
    n: usize,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<SweepResult<CdfRow>> {
    let grid = sorted_radii(r_grid)?;
    let model = AsymptoticModel::new(dim, n)?;
    let domain = Hyperbox::unit(dim);
    let job_seed = derive_seed(seed, 0);
    let design = sample_uniform(&domain, n, SeededStream::new(job_seed, DESIGN_STREAM_BASE))?;
    let sample = distance_sample(&domain, &design, samples, job_seed)?;
    let rows = grid
        .iter()
        .map(|&r| {
            let c = coverage_at(&sample, r)?;
            Ok(CdfRow {
                r,
                coverage: c.fraction,
                ci_low: c.ci_low,
                ci_high: c.ci_high,
                approx: model.coverage(r)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        meta: meta("cdf_comparison", "uniform", n as u64, samples, seed, 1),
        rows,
    })
}

/// Distance samples for uniform designs in `[-delta, delta]^d`, one per grid
/// value, scored against `[-1, 1]^d`.
///
/// All grid values share one job seed: the designs are the same draws scaled
/// by `delta`, and every delta is scored on the same uniform points, so the
/// comparison across delta is paired.
#[derive(Debug, Clone)]
pub struct DeltaStudy {
    dim: usize,
    n: usize,
    seed: u64,
    deltas: Vec<f64>,
    samples: Vec<DistanceSample>,
}

impl DeltaStudy {
    pub fn new(dim: usize, n: usize, delta_grid: &[f64], samples: usize, seed: u64) -> Result<Self> {
        if delta_grid.is_empty() {
            return Err(param("delta", "grid is empty"));
        }
        let mut deltas = delta_grid.to_vec();
        deltas.sort_by(f64::total_cmp);
        let domain = Hyperbox::symmetric(dim);
        let job_seed = derive_seed(seed, 0);
        let sampled = deltas
            .iter()
            .map(|&delta| {
                let design = uniform_delta_design(dim, n, delta, SeededStream::new(job_seed, DESIGN_STREAM_BASE))?;
                distance_sample(&domain, &design, samples, job_seed)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim,
            n,
            seed,
            deltas,
            samples: sampled,
        })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coverage at radius `r` for every delta.
    pub fn sweep(&self, r: f64) -> Result<SweepResult<DeltaRow>> {
        if !(r > 0.0) {
            return Err(param("r", format!("must be positive, got {r}")));
        }
        let rows = self
            .deltas
            .iter()
            .zip(&self.samples)
            .map(|(&delta, s)| {
                let c = coverage_at(s, r)?;
                Ok(DeltaRow {
                    delta,
                    r,
                    coverage: c.fraction,
                    ci_low: c.ci_low,
                    ci_high: c.ci_high,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SweepResult {
            meta: meta(
                "delta_sweep",
                Family::UniformDelta.name(),
                self.n as u64,
                self.samples[0].len(),
                self.seed,
                1,
            ),
            rows,
        })
    }

    /// Largest coverage over the grid at radius `r`, and the delta attaining
    /// it (smallest such delta on ties).
    pub fn best(&self, r: f64) -> (f64, f64) {
        let mut best = (self.deltas[0], -1.0);
        for (&delta, s) in self.deltas.iter().zip(&self.samples) {
            let c = s.ecdf(r);
            if c > best.1 {
                best = (delta, c);
            }
        }
        best
    }

    /// Bisection on `r` until the best coverage over the grid is within
    /// `tolerance` of `target`. The bracket defaults to `[0, largest sampled
    /// distance]`, where best coverage runs from 0 to 1.
    pub fn calibrate(&self, target: f64, tolerance: f64, bracket: Option<(f64, f64)>) -> Result<Calibration> {
        if !(target > 0.0 && target < 1.0) {
            return Err(param("target", format!("must lie in (0, 1), got {target}")));
        }
        let top = self.samples.iter().map(|s| s.max()).fold(0.0, f64::max);
        let (mut lo, mut hi) = bracket.unwrap_or((0.0, top));
        if !(lo >= 0.0 && lo < hi) {
            return Err(Error::Calibration(format!("invalid bracket [{lo}, {hi}]")));
        }
        let f_lo = self.best(lo).1;
        let f_hi = self.best(hi).1;
        if f_lo > target + tolerance || f_hi < target - tolerance {
            return Err(Error::Calibration(format!(
                "coverage over [{lo}, {hi}] spans [{f_lo}, {f_hi}], which misses target {target}"
            )));
        }
        for iterations in 1..=200 {
            let mid = 0.5 * (lo + hi);
            let (delta, c) = self.best(mid);
            if (c - target).abs() <= tolerance {
                return Ok(Calibration {
                    r: mid,
                    best_delta: delta,
                    coverage: c,
                    iterations,
                });
            }
            if c < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        Err(Error::Calibration(format!(
            "no radius brings coverage within {tolerance} of {target}; increase N"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub r: f64,
    pub best_delta: f64,
    pub coverage: f64,
    pub iterations: usize,
}

/// Default stopping tolerance for radius calibration.
pub const CALIBRATION_TOLERANCE: f64 = 0.005;

/// Coverage of `[-1, 1]^d` by uniform designs in `[-delta, delta]^d` at a
/// fixed radius.
pub fn delta_sweep(
    dim: usize,
    n: usize,
    r: f64,
    delta_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<SweepResult<DeltaRow>> {
    DeltaStudy::new(dim, n, delta_grid, samples, seed)?.sweep(r)
}

/// The radius at which the best delta on the grid reaches `target` coverage.
pub fn calibrate_radius_for_target(
    dim: usize,
    n: usize,
    delta_grid: &[f64],
    target: f64,
    samples: usize,
    seed: u64,
) -> Result<Calibration> {
    DeltaStudy::new(dim, n, delta_grid, samples, seed)?.calibrate(target, CALIBRATION_TOLERANCE, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorialQuantile {
    pub gamma: f64,
    pub r_quantile: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `r_{1-gamma} / r_1`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialSummary {
    pub d: usize,
    /// `2^(d-1)`; absent when it does not fit in 64 bits.
    pub n_points: Option<u64>,
    pub r1_exact: f64,
    pub quantiles: Vec<FactorialQuantile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialStudy {
    pub cdf: SweepResult<EcdfRow>,
    pub summary: FactorialSummary,
}

/// Weak covering of `[-1, 1]^d` by the half-fraction factorial design:
/// empirical cdf on `r_grid` (default: 101 points on `[0, r_1]`), quantiles
/// `r_{1-gamma}` and their ratios to the exact covering radius `r_1`.
pub fn factorial_study(
    dim: usize,
    gammas: &[f64],
    samples: usize,
    seed: u64,
    r_grid: Option<&[f64]>,
) -> Result<FactorialStudy> {
    let r1 = covering_radius_factorial_exact(dim)?;
    let kernel = FactorialHalf::new(dim)?;
    let domain = Hyperbox::symmetric(dim);
    let sample = distance_sample_with(&domain, &kernel, samples, derive_seed(seed, 0))?;
    let grid = match r_grid {
        Some(g) => sorted_radii(g)?,
        None => linear_grid(0.0, r1, 101)?,
    };
    let rows = grid
        .iter()
        .map(|&r| coverage_at(&sample, r).map(EcdfRow::from))
        .collect::<Result<_>>()?;
    let quantiles = gammas
        .iter()
        .map(|&g| {
            let q = quantile(&sample, g)?;
            Ok(FactorialQuantile {
                gamma: g,
                r_quantile: q.r_quantile,
                ci_low: q.ci_low,
                ci_high: q.ci_high,
                ratio: q.r_quantile / r1,
            })
        })
        .collect::<Result<_>>()?;
    let n_points = 1u64.checked_shl(dim as u32 - 1).filter(|_| dim <= 64);
    Ok(FactorialStudy {
        cdf: SweepResult {
            meta: meta(
                "factorial_study",
                Family::FactorialHalf.name(),
                n_points.unwrap_or(0),
                samples,
                seed,
                1,
            ),
            rows,
        },
        summary: FactorialSummary {
            d: dim,
            n_points,
            r1_exact: r1,
            quantiles,
        },
    })
}
