//! Box domains, point designs and uniform sampling.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng::SeededStream;

/// Axis-aligned hyperrectangle `[lower_1, upper_1] x ... x [lower_d, upper_d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperbox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Hyperbox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(param("box", "dimension must be at least 1"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(param(
                    "box",
                    format!("axis {i}: need finite lower < upper, got [{lo}, {hi}]"),
                ));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    /// `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Self {
        Self::cube(dim, 0.0, 1.0).expect("unit cube is valid")
    }

    /// `[-1, 1]^dim`.
    pub fn symmetric(dim: usize) -> Self {
        Self::cube(dim, -1.0, 1.0).expect("symmetric cube is valid")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .product()
    }

    /// Length of the main diagonal; no two points of the box are further apart.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Writes the vertex selected by `bits` into `out`: bit `i` of `bits`
    /// (counting from the least significant) picks `upper[i]` over `lower[i]`.
    /// Axes beyond bit 63 take the lower bound.
    pub fn vertex_into(&self, bits: u64, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let up = i < 64 && (bits >> i) & 1 == 1;
            *o = if up { self.upper[i] } else { self.lower[i] };
        }
    }

    /// Clamp `x` into the box, coordinate-wise.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Fill `out` (length a multiple of `dim`) with i.i.d. uniform points.
    pub(crate) fn fill_uniform<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let d = self.dim();
        for point in out.chunks_exact_mut(d) {
            for (k, v) in point.iter_mut().enumerate() {
                let u: f64 = rng.random();
                *v = self.lower[k] + (self.upper[k] - self.lower[k]) * u;
            }
        }
    }

    /// Parse a per-axis box file: one `lower,upper` pair per line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields = parse_row(line, lineno + 1)?;
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: format!("expected `lower,upper`, found {} fields", fields.len()),
                });
            }
            lower.push(fields[0]);
            upper.push(fields[1]);
        }
        Self::new(lower, upper)
    }
}

/// An ordered set of `n >= 1` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design {
    dim: usize,
    coords: Vec<f64>,
}

impl Design {
    /// Build from a row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(param("dim", "must be at least 1"));
        }
        if coords.is_empty() {
            return Err(param("design", "must contain at least one point"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(param(
                "design",
                format!("{} coordinates do not split into rows of {dim}", coords.len()),
            ));
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(param("design", format!("point {} has a non-finite coordinate", pos / dim)));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| param("design", "must contain at least one point"))?;
        let mut coords = Vec::with_capacity(dim * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false; designs hold at least one point.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn into_flat(self) -> Vec<f64> {
        self.coords
    }

    /// A copy with one extra point appended.
    pub fn with_point(&self, x: &[f64]) -> Result<Self> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(x);
        Self::from_flat(self.dim, coords)
    }

    /// Check that the design lives in `domain`.
    pub fn check_within(&self, domain: &Hyperbox) -> Result<()> {
        if domain.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: self.dim,
            });
        }
        match self.points().position(|p| !domain.contains(p)) {
            Some(index) => Err(Error::OutsideDomain { index }),
            None => Ok(()),
        }
    }

    /// One point per line, comma separated, shortest round-trip decimals.
    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::with_capacity(self.coords.len() * 12);
        if header {
            let names: Vec<String> = (1..=self.dim).map(|k| format!("x{k}")).collect();
            out.push_str(&names.join(","));
            out.push('\n');
        }
        for p in self.points() {
            for (k, v) in p.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Design::to_csv`]. A first line with no numeric fields is
    /// taken as a header and skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut coords = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if dim.is_none() && coords.is_empty() && is_header(line) {
                continue;
            }
            let row = parse_row(line, lineno + 1)?;
            match dim {
                None => dim = Some(row.len()),
                Some(d) if d != row.len() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        reason: format!("expected {d} columns, found {}", row.len()),
                    })
                }
                _ => {}
            }
            coords.extend(row);
        }
        let dim = dim.ok_or(Error::Parse {
            line: 0,
            reason: "no data rows".into(),
        })?;
        Self::from_flat(dim, coords)
    }
}

fn is_header(line: &str) -> bool {
    line.split(',')
        .all(|f| f.trim().trim_matches('"').parse::<f64>().is_err())
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|f| {
            let f = f.trim().trim_matches('"');
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    reason: format!("`{f}` is not a finite number"),
                })
        })
        .collect()
}

/// `count` i.i.d. points uniform on `domain`; a pure function of `stream`.
pub fn sample_uniform(domain: &Hyperbox, count: usize, stream: SeededStream) -> Result<Design> {
    if count == 0 {
        return Err(param("count", "must be at least 1"));
    }
    let mut coords = vec![0.0; count * domain.dim()];
    domain.fill_uniform(&mut stream.rng(), &mut coords);
    Design::from_flat(domain.dim(), coords)
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
