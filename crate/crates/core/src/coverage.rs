//! Monte Carlo estimation of the covered-volume cdf `F(r, X_n)`, weak-covering
//! quantiles, and covering radii.
//!
//! A [`DistanceSample`] holds `rho(U_i, X_n)` for `N` uniform points `U_i`.
//! The points are generated in fixed-size chunks; chunk `c` draws from stream
//! `(seed, c)`, so the sample is a pure function of `(domain, design, N, seed)`
//! no matter how many workers process the chunks.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::geometry::{Design, Hyperbox};
use crate::nearest::{BlockedDesign, NearestPoint};
use crate::par;
use crate::rng::{SeededStream, PROBE_STREAM_BASE};
use crate::stats::{clopper_pearson, order_statistic_ranks, CONFIDENCE};

/// Uniform points drawn per chunk (and per RNG stream).
pub const CHUNK_POINTS: usize = 8192;

/// Sorted nearest-design distances of `N` i.i.d. uniform points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSample {
    distances: Vec<f64>,
    seed: u64,
    chunk_points: usize,
}

impl DistanceSample {
    /// Wrap an arbitrary list of distances; sorts them.
    pub fn from_distances(mut distances: Vec<f64>, seed: u64) -> Result<Self> {
        if distances.is_empty() {
            return Err(param("N", "sample must not be empty"));
        }
        if distances.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return Err(param("distances", "must be finite and nonnegative"));
        }
        par::sort_f64(&mut distances);
        Ok(Self {
            distances,
            seed,
            chunk_points: CHUNK_POINTS,
        })
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn chunk_points(&self) -> usize {
        self.chunk_points
    }

    pub fn min(&self) -> f64 {
        self.distances[0]
    }

    pub fn max(&self) -> f64 {
        *self.distances.last().unwrap()
    }

    /// Number of sampled distances `<= r`.
    pub fn count_within(&self, r: f64) -> usize {
        self.distances.partition_point(|&d| d <= r)
    }

    /// Empirical cdf at `r`.
    pub fn ecdf(&self, r: f64) -> f64 {
        self.count_within(r) as f64 / self.len() as f64
    }
}

/// Nearest-design distances of `n` uniform points in `domain`, sorted.
pub fn distance_sample(domain: &Hyperbox, design: &Design, n: usize, seed: u64) -> Result<DistanceSample> {
    design.check_within(domain)?;
    distance_sample_with(domain, &BlockedDesign::new(design), n, seed)
}

/// [`distance_sample`] against any nearest-point kernel.
pub fn distance_sample_with<K: NearestPoint>(
    domain: &Hyperbox,
    kernel: &K,
    n: usize,
    seed: u64,
) -> Result<DistanceSample> {
    let mut distances = raw_distances(domain, kernel, n, seed)?;
    par::sort_f64(&mut distances);
    Ok(DistanceSample {
        distances,
        seed,
        chunk_points: CHUNK_POINTS,
    })
}

/// Unsorted distances, in sample order.
pub(crate) fn raw_distances<K: NearestPoint>(
    domain: &Hyperbox,
    kernel: &K,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(param("N", "must be at least 1"));
    }
    if kernel.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: kernel.dim(),
        });
    }
    let dim = domain.dim();
    let mut distances = vec![0.0; n];
    par::for_each_chunk_mut(&mut distances, CHUNK_POINTS, |chunk, out| {
        let mut rng = SeededStream::new(seed, chunk as u64).rng();
        let mut points = vec![0.0; out.len() * dim];
        domain.fill_uniform(&mut rng, &mut points);
        kernel.distances_into(&points, out);
    });
    Ok(distances)
}

/// Estimated `F(r, X_n)` with its exact binomial interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageEstimate {
    pub r: f64,
    pub fraction: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl CoverageEstimate {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

pub fn coverage_at(sample: &DistanceSample, r: f64) -> Result<CoverageEstimate> {
    if !(r >= 0.0) {
        return Err(param("r", format!("must be nonnegative, got {r}")));
    }
    Ok(coverage_from_hits(r, sample.count_within(r), sample.len()))
}

pub(crate) fn coverage_from_hits(r: f64, hits: usize, trials: usize) -> CoverageEstimate {
    let (ci_low, ci_high) = clopper_pearson(hits, trials, CONFIDENCE);
    let fraction = hits as f64 / trials as f64;
    CoverageEstimate {
        r,
        fraction,
        ci_low: ci_low.min(fraction),
        ci_high: ci_high.max(fraction),
        n: trials,
    }
}

/// Estimated weak-covering radius `r_{1-gamma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileEstimate {
    pub gamma: f64,
    pub r_quantile: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Fewer than 10 sample points are expected beyond the quantile.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub sparse_tail: bool,
}

/// Rank `ceil((1 - gamma) n)`, treating products within a few ulps of an
/// integer as that integer.
pub(crate) fn quantile_rank(n: usize, gamma: f64) -> usize {
    let x = (1.0 - gamma) * n as f64;
    let rounded = x.round();
    let rank = if (x - rounded).abs() <= 8.0 * f64::EPSILON * x.max(1.0) {
        rounded
    } else {
        x.ceil()
    };
    (rank as usize).clamp(1, n)
}

pub fn quantile(sample: &DistanceSample, gamma: f64) -> Result<QuantileEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(param("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    let n = sample.len();
    let rank = quantile_rank(n, gamma);
    let (lo, hi) = order_statistic_ranks(n, 1.0 - gamma, CONFIDENCE);
    let d = sample.distances();
    Ok(QuantileEstimate {
        gamma,
        r_quantile: d[rank - 1],
        ci_low: d[lo.min(rank) - 1],
        ci_high: d[hi.max(rank) - 1],
        sparse_tail: (n as f64) * gamma < 10.0,
    })
}

/// Exact covering radius of a one-dimensional design on an interval.
pub fn covering_radius_1d_exact(design: &Design, domain: &Hyperbox) -> Result<f64> {
    if design.dim() != 1 || domain.dim() != 1 {
        return Err(param("d", "exact covering radius is available for d = 1 only"));
    }
    design.check_within(domain)?;
    let mut xs = design.as_flat().to_vec();
    xs.sort_by(f64::total_cmp);
    let (lo, hi) = (domain.lower()[0], domain.upper()[0]);
    let ends = (xs[0] - lo).max(hi - xs[xs.len() - 1]);
    let gap = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(ends.max(gap / 2.0))
}

/// Exact covered length `|B(X_n, r) ∩ [lo, hi]|` of a one-dimensional design.
pub fn covered_length_1d(design: &Design, domain: &Hyperbox, r: f64) -> Result<f64> {
    if design.dim() != 1 || domain.dim() != 1 {
        return Err(param("d", "covered length is defined for d = 1 only"));
    }
    let mut xs = design.as_flat().to_vec();
    xs.sort_by(f64::total_cmp);
    let (lo, hi) = (domain.lower()[0], domain.upper()[0]);
    let mut total = 0.0;
    let mut reach = lo;
    for x in xs {
        let a = (x - r).max(reach).max(lo);
        let b = (x + r).min(hi);
        if b > a {
            total += b - a;
        }
        reach = reach.max(b);
    }
    Ok(total)
}

/// Covering radius of the even-parity half of `{-1/2, +1/2}^d` in
/// `[-1, 1]^d`: `sqrt(d + 8) / 2`, valid for `d > 2`.
pub fn covering_radius_factorial_exact(dim: usize) -> Result<f64> {
    if dim <= 2 {
        return Err(param("d", format!("closed form holds for d > 2, got {dim}")));
    }
    Ok(((dim + 8) as f64).sqrt() / 2.0)
}

/// A certified lower bound on the covering radius together with how it was
/// obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringRadiusBound {
    /// `max(sample_max, vertex_max)`; never exceeds the true covering radius.
    pub lower_bound: f64,
    pub sample_max: f64,
    pub vertex_max: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub probe_vertices: u64,
    pub seed: u64,
    pub method: String,
}

/// Lower bound on `CR(X_n)`: the largest nearest-design distance among `n`
/// uniform points and `probe_vertices` box vertices (all vertices when that
/// many or more are requested, otherwise distinct random ones).
pub fn covering_radius_lower_bound(
    domain: &Hyperbox,
    design: &Design,
    n: usize,
    seed: u64,
    probe_vertices: u64,
) -> Result<CoveringRadiusBound> {
    design.check_within(domain)?;
    let kernel = BlockedDesign::new(design);
    covering_radius_lower_bound_with(domain, &kernel, n, seed, probe_vertices)
}

pub fn covering_radius_lower_bound_with<K: NearestPoint>(
    domain: &Hyperbox,
    kernel: &K,
    n: usize,
    seed: u64,
    probe_vertices: u64,
) -> Result<CoveringRadiusBound> {
    let raw = raw_distances(domain, kernel, n, seed)?;
    let sample_max = raw.iter().copied().fold(0.0, f64::max);
    let vertices = vertex_codes(domain.dim(), probe_vertices, seed);
    let vertex_max = (!vertices.is_empty()).then(|| {
        let mut v = vec![0.0; domain.dim()];
        vertices
            .iter()
            .map(|&bits| {
                domain.vertex_into(bits, &mut v);
                kernel.nearest_squared(&v).sqrt()
            })
            .fold(0.0, f64::max)
    });
    let lower_bound = sample_max.max(vertex_max.unwrap_or(0.0));
    Ok(CoveringRadiusBound {
        lower_bound,
        sample_max,
        vertex_max,
        n,
        probe_vertices: vertices.len() as u64,
        seed,
        method: format!(
            "lower bound: max nearest-design distance over {n} uniform points and {} box vertices",
            vertices.len()
        ),
    })
}

/// Vertex bit codes to probe. Axes past 63 always take the lower bound when
/// sampling at random.
fn vertex_codes(dim: usize, count: u64, seed: u64) -> Vec<u64> {
    use rand::Rng;
    if count == 0 {
        return Vec::new();
    }
    if dim < 64 && count >= (1u64 << dim) {
        return (0..(1u64 << dim)).collect();
    }
    let mask = if dim >= 64 { u64::MAX } else { (1u64 << dim) - 1 };
    let mut rng = SeededStream::new(seed, PROBE_STREAM_BASE).rng();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let code = rng.random::<u64>() & mask;
        if seen.insert(code) {
            out.push(code);
        }
    }
    out
}
