//! Point designs in high-dimensional boxes and Monte Carlo measures of how
//! well they cover the box.
//!
//! For a design `X_n` in a box `X`, the central object is the covered-volume
//! cdf `F(r, X_n)`: the fraction of `X` within distance `r` of the design.
//! Its quantiles are weak-covering radii, its upper end is the covering
//! radius, and its moments are quantization errors. Everything here estimates
//! these from seeded uniform samples, with exact closed forms where they
//! exist (one-dimensional designs, the half-fraction factorial design, and
//! the asymptotic law for i.i.d. uniform designs).
//!
//! Monte Carlo work is split into fixed chunks that each own a random stream,
//! so results are bit-identical for any number of worker threads. The
//! `parallel` feature (on by default) runs chunks on rayon; without it they
//! run sequentially.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod coverage;
pub mod designs;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod nearest;
pub mod par;
pub mod quantization;
pub mod rng;
pub mod stats;
pub mod table;

pub use crate::asymptotics::{approx_coverage, asymptotic_radius, limit_cdf, unit_ball_volume, AsymptoticModel};
pub use crate::coverage::{
    coverage_at, covering_radius_1d_exact, covering_radius_factorial_exact, covering_radius_lower_bound,
    distance_sample, distance_sample_with, quantile, CoverageEstimate, CoveringRadiusBound, DistanceSample,
    QuantileEstimate,
};
pub use crate::designs::{
    factorial_half_design, midpoint_design_1d, paper_1d_design, uniform_delta_design, DesignSpec, Family,
};
pub use crate::error::{Error, Result};
pub use crate::geometry::{sample_uniform, Design, Hyperbox};
pub use crate::nearest::{nearest_distance, BlockedDesign, FactorialHalf, NearestPoint};
pub use crate::quantization::{lloyd_run, lloyd_step, quantization_error, LloydRun, QuantizationReport};
pub use crate::rng::SeededStream;
