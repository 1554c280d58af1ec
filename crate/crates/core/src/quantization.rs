//! Quantization error `theta_p = E rho(U, X_n)^p` and Lloyd iterations.

use serde::{Deserialize, Serialize};

use crate::coverage::{DistanceSample, CHUNK_POINTS};
use crate::error::{param, Error, Result};
use crate::geometry::{sample_uniform, Design, Hyperbox};
use crate::nearest::BlockedDesign;
use crate::par;
use crate::rng::SeededStream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub orders: Vec<f64>,
    pub theta_p: Vec<f64>,
    /// `theta_p^(1/p)`.
    pub theta_root: Vec<f64>,
    /// Plug-in Monte Carlo standard error of `theta_p`.
    pub mc_se: Vec<f64>,
    /// Delta-method standard error of `theta_p^(1/p)`.
    pub root_se: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
}

/// Moments of the sampled distances for each order `p > 0`.
///
/// Distances are scaled by the sample maximum before raising to `p`, so very
/// large orders stay finite and `theta_p^(1/p)` never exceeds the maximum.
pub fn quantization_error(sample: &DistanceSample, orders: &[f64]) -> Result<QuantizationReport> {
    if orders.is_empty() {
        return Err(param("p", "at least one order is required"));
    }
    if let Some(p) = orders.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(param("p", format!("orders must be positive, got {p}")));
    }
    let d = sample.distances();
    let n = d.len() as f64;
    let max = sample.max();
    let mut report = QuantizationReport {
        orders: orders.to_vec(),
        theta_p: Vec::with_capacity(orders.len()),
        theta_root: Vec::with_capacity(orders.len()),
        mc_se: Vec::with_capacity(orders.len()),
        root_se: Vec::with_capacity(orders.len()),
        n: d.len(),
        seed: sample.seed(),
    };
    for &p in orders {
        if max == 0.0 {
            report.theta_p.push(0.0);
            report.theta_root.push(0.0);
            report.mc_se.push(0.0);
            report.root_se.push(0.0);
            continue;
        }
        // mean and variance of (d / max)^p
        let (mut s1, mut s2) = (0.0, 0.0);
        for &x in d {
            let v = (x / max).powf(p);
            s1 += v;
            s2 += v * v;
        }
        let mean = s1 / n;
        let var = if d.len() > 1 {
            ((s2 - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let scale = max.powf(p);
        let root = max * mean.powf(1.0 / p);
        let se = scale * (var / n).sqrt();
        report.theta_p.push(scale * mean);
        report.theta_root.push(root.min(max));
        report.mc_se.push(se);
        // d(theta^(1/p)) = (1/p) theta^(1/p - 1) d(theta)
        report
            .root_se
            .push(max * mean.powf(1.0 / p - 1.0) * (var / n).sqrt() / p);
    }
    Ok(report)
}

/// Mean squared distance from `points` to their nearest design point.
pub fn mean_squared_error(points: &Design, design: &Design) -> Result<f64> {
    check_dims(points, design)?;
    let kernel = BlockedDesign::new(design);
    let partial = chunked(points, |rows| rows.chunks_exact(points.dim()).map(|x| kernel.nearest(x).1).sum::<f64>());
    Ok(partial.iter().sum::<f64>() / points.len() as f64)
}

fn check_dims(points: &Design, design: &Design) -> Result<()> {
    if points.dim() != design.dim() {
        return Err(Error::DimensionMismatch {
            expected: design.dim(),
            found: points.dim(),
        });
    }
    Ok(())
}

/// Run `f` over consecutive row chunks of `points`, results in chunk order.
fn chunked<T: Send, F: Fn(&[f64]) -> T + Sync + Send>(points: &Design, f: F) -> Vec<T> {
    let flat = points.as_flat();
    let stride = CHUNK_POINTS * points.dim();
    let chunks = flat.len().div_ceil(stride);
    par::map_indexed(chunks, |c| f(&flat[c * stride..((c + 1) * stride).min(flat.len())]))
}

/// One Lloyd iteration: assign every point to its nearest design point
/// (lowest index on ties) and move each design point to the centroid of its
/// cell. Cells that receive no points keep their previous location.
pub fn lloyd_step(points: &Design, design: &Design) -> Result<Design> {
    check_dims(points, design)?;
    let dim = design.dim();
    let k = design.len();
    let kernel = BlockedDesign::new(design);
    let partials = chunked(points, |rows| {
        let mut sums = vec![0.0; k * dim];
        let mut counts = vec![0usize; k];
        for x in rows.chunks_exact(dim) {
            let j = kernel.nearest(x).0;
            counts[j] += 1;
            for (s, v) in sums[j * dim..(j + 1) * dim].iter_mut().zip(x) {
                *s += v;
            }
        }
        (sums, counts)
    });
    let mut sums = vec![0.0; k * dim];
    let mut counts = vec![0usize; k];
    for (s, c) in partials {
        for (a, b) in sums.iter_mut().zip(s) {
            *a += b;
        }
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
    }
    let mut coords = design.as_flat().to_vec();
    for j in 0..k {
        if counts[j] > 0 {
            let c = counts[j] as f64;
            for t in 0..dim {
                coords[j * dim + t] = sums[j * dim + t] / c;
            }
        }
    }
    Design::from_flat(dim, coords)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LloydRun {
    pub design: Design,
    /// Fixed-sample mean squared objective: entry 0 for the starting design,
    /// entry `i` after iteration `i`.
    pub objective: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
}

/// Iterate [`lloyd_step`] `iterations` times on one fixed sample of `n`
/// uniform points. Stops early once the design stops moving.
pub fn lloyd_run(domain: &Hyperbox, design: &Design, n: usize, seed: u64, iterations: usize) -> Result<LloydRun> {
    if iterations == 0 {
        return Err(param("iterations", "must be at least 1"));
    }
    design.check_within(domain)?;
    let points = training_sample(domain, n, seed)?;
    let mut current = design.clone();
    let mut objective = vec![mean_squared_error(&points, &current)?];
    for _ in 0..iterations {
        let mut next = lloyd_step(&points, &current)?.into_flat();
        for x in next.chunks_exact_mut(domain.dim()) {
            domain.clamp(x);
        }
        let next = Design::from_flat(domain.dim(), next)?;
        objective.push(mean_squared_error(&points, &next)?);
        let settled = next == current;
        current = next;
        if settled {
            break;
        }
    }
    Ok(LloydRun {
        design: current,
        objective,
        n,
        seed,
    })
}

/// The uniform sample Lloyd iterations are fitted on; chunk `c` uses stream
/// `(seed, c)` like every other Monte Carlo sample in the crate.
pub fn training_sample(domain: &Hyperbox, n: usize, seed: u64) -> Result<Design> {
    if n == 0 {
        return Err(param("N", "must be at least 1"));
    }
    let dim = domain.dim();
    let mut coords = vec![0.0; n * dim];
    par::for_each_chunk_mut(&mut coords, CHUNK_POINTS * dim, |c, out| {
        domain.fill_uniform(&mut SeededStream::new(seed, c as u64).rng(), out);
    });
    Design::from_flat(dim, coords)
}

/// Convenience for scoring a design on a fresh uniform sample.
pub fn evaluation_sample(domain: &Hyperbox, n: usize, seed: u64) -> Result<Design> {
    sample_uniform(domain, n, SeededStream::new(seed, crate::rng::EVAL_STREAM_BASE))
}
