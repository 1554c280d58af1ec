//! Nearest-design-point kernels.
//!
//! [`BlockedDesign`] is an exact brute-force scan over a design stored in
//! lane-interleaved blocks, so the inner loop runs over independent lanes and
//! vectorizes. Squared distances accumulate coordinate by coordinate in the
//! same order as the naive scalar loop, so results match it bit for bit.
//!
//! [`FactorialHalf`] decodes the even-parity half of the vertex set
//! `{-1/2, +1/2}^d` in `O(d)` without materializing its `2^(d-1)` points.

use crate::error::{Error, Result};
use crate::geometry::Design;

/// Exact nearest-point queries against a fixed point set.
pub trait NearestPoint: Sync {
    fn dim(&self) -> usize;

    /// Squared Euclidean distance from `x` to the nearest point.
    fn nearest_squared(&self, x: &[f64]) -> f64;

    /// Fill `out[i]` with the distance from the `i`-th row of `queries`.
    fn distances_into(&self, queries: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for (q, o) in queries.chunks_exact(d).zip(out.iter_mut()) {
            *o = self.nearest_squared(q).sqrt();
        }
    }
}

const LANES: usize = 8;

/// Queries processed against one design tile before moving on.
const QUERY_TILE: usize = 64;
/// Target size in bytes of the design tile kept hot while a query tile runs.
const DESIGN_TILE_BYTES: usize = 32 * 1024;

/// A design laid out for blocked brute-force search.
#[derive(Debug, Clone)]
pub struct BlockedDesign {
    dim: usize,
    len: usize,
    /// `blocks[b * dim + k][j]` is coordinate `k` of point `b * LANES + j`;
    /// padding lanes hold infinity and never win.
    blocks: Vec<[f64; LANES]>,
}

impl BlockedDesign {
    pub fn new(design: &Design) -> Self {
        let dim = design.dim();
        let len = design.len();
        let nblocks = len.div_ceil(LANES);
        let mut blocks = vec![[f64::INFINITY; LANES]; nblocks * dim];
        for (j, p) in design.points().enumerate() {
            let (b, lane) = (j / LANES, j % LANES);
            for (k, &v) in p.iter().enumerate() {
                blocks[b * dim + k][lane] = v;
            }
        }
        Self { dim, len, blocks }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index of the nearest point (lowest index on ties) and its squared
    /// distance.
    pub fn nearest(&self, x: &[f64]) -> (usize, f64) {
        let mut best = f64::INFINITY;
        let mut best_idx = 0;
        for (b, block) in self.blocks.chunks_exact(self.dim).enumerate() {
            let acc = block_distances(block, x);
            for (j, &v) in acc.iter().enumerate() {
                if v < best {
                    best = v;
                    best_idx = b * LANES + j;
                }
            }
        }
        (best_idx, best)
    }

    /// Checked variant of [`BlockedDesign::nearest`] returning the distance.
    pub fn nearest_distance(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.nearest(x).1.sqrt())
    }

    fn blocks_per_tile(&self) -> usize {
        (DESIGN_TILE_BYTES / (self.dim * LANES * 8)).max(1)
    }
}

#[inline(always)]
fn block_distances(block: &[[f64; LANES]], x: &[f64]) -> [f64; LANES] {
    let mut acc = [0.0; LANES];
    for (lane, &xk) in block.iter().zip(x) {
        for j in 0..LANES {
            let t = xk - lane[j];
            acc[j] += t * t;
        }
    }
    acc
}

impl NearestPoint for BlockedDesign {
    fn dim(&self) -> usize {
        self.dim
    }

    fn nearest_squared(&self, x: &[f64]) -> f64 {
        self.nearest(x).1
    }

    fn distances_into(&self, queries: &[f64], out: &mut [f64]) {
        let d = self.dim;
        let tile = self.blocks_per_tile() * d;
        for (qs, os) in queries
            .chunks(QUERY_TILE * d)
            .zip(out.chunks_mut(QUERY_TILE))
        {
            let mut best = [f64::INFINITY; QUERY_TILE];
            for design_tile in self.blocks.chunks(tile) {
                for (q, b) in qs.chunks_exact(d).zip(best.iter_mut()) {
                    for block in design_tile.chunks_exact(d) {
                        let acc = block_distances(block, q);
                        for v in acc {
                            if v < *b {
                                *b = v;
                            }
                        }
                    }
                }
            }
            for (o, b) in os.iter_mut().zip(best) {
                *o = b.sqrt();
            }
        }
    }
}

/// The `2^(d-1)` points of `{-1/2, +1/2}^d` with an even number of negative
/// coordinates.
///
/// The nearest full-cube vertex to `x` takes the sign of each coordinate. If
/// that vertex has odd parity, the nearest even one flips the coordinate with
/// the smallest magnitude, which costs `2 |x_i|` in squared distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorialHalf {
    dim: usize,
}

impl FactorialHalf {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(crate::error::param("d", "half-fraction needs d >= 2"));
        }
        Ok(Self { dim })
    }
}

impl NearestPoint for FactorialHalf {
    fn dim(&self) -> usize {
        self.dim
    }

    fn nearest_squared(&self, x: &[f64]) -> f64 {
        let mut sum = 0.0;
        let mut odd = false;
        let mut min_abs = f64::INFINITY;
        for &v in x {
            let a = v.abs();
            let t = a - 0.5;
            sum += t * t;
            odd ^= v < 0.0;
            min_abs = min_abs.min(a);
        }
        if odd {
            sum += 2.0 * min_abs;
        }
        sum
    }
}

/// Distance from `x` to the nearest point of `design`.
pub fn nearest_distance(x: &[f64], design: &Design) -> Result<f64> {
    if x.len() != design.dim() {
        return Err(Error::DimensionMismatch {
            expected: design.dim(),
            found: x.len(),
        });
    }
    Ok(design
        .points()
        .map(|p| crate::geometry::squared_distance(x, p))
        .fold(f64::INFINITY, f64::min)
        .sqrt())
}
