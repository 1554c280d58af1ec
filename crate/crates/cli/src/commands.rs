// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hypercover::experiments::{
    asymptotic_gap_sweep, cdf_comparison, factorial_study, linear_grid, DeltaStudy, EcdfRow, SweepResult,
    CALIBRATION_TOLERANCE,
};
use hypercover::quantization::{lloyd_run, quantization_error};
use hypercover::table::{to_csv, CsvRow};
use hypercover::{
    asymptotic_radius, coverage_at, distance_sample, quantile, unit_ball_volume, Design, DesignSpec, Family,
    Hyperbox,
};
use serde::Serialize;

use crate::args::*;

/// A problem with the user's input; reported with exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(what: impl fmt::Display, err: impl fmt::Display) -> anyhow::Error {
    InputError(format!("{what}: {err}")).into()
}

/// Where a file's bytes go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    Stderr,
    File(PathBuf),
}

/// Files produced by a command, written by the caller.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<(Sink, Vec<u8>)>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub design_hash: Option<String>,
    /// Path the manifest is placed beside.
    pub primary: Option<PathBuf>,
}

impl Outputs {
    fn new(out: &OutputArgs) -> Self {
        Self {
            primary: out.output.clone(),
            ..Self::default()
        }
    }

    fn primary(&mut self, bytes: Vec<u8>) {
        let sink = self.primary.clone().map_or(Sink::Stdout, Sink::File);
        self.files.push((sink, bytes));
    }

    fn push(&mut self, sink: Sink, bytes: Vec<u8>) {
        self.files.push((sink, bytes));
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

fn rows_bytes<R: CsvRow + Serialize>(rows: &[R], as_json: bool) -> Vec<u8> {
    if as_json {
        json(rows)
    } else {
        to_csv(rows).into_bytes()
    }
}

fn load_design(path: &Path) -> Result<Design> {
    let text = fs::read_to_string(path).map_err(|e| input_err(path.display(), e))?;
    Design::from_csv(&text).map_err(|e| input_err(path.display(), e))
}

fn parse_box(spec: &str, dim: usize) -> Result<Hyperbox> {
    let as_pair: Option<Vec<f64>> = spec.split(',').map(|f| f.trim().parse().ok()).collect();
    let domain = match as_pair {
        Some(v) if v.len() == 2 => Hyperbox::cube(dim, v[0], v[1]),
        _ if Path::new(spec).is_file() => {
            let text = fs::read_to_string(spec).map_err(|e| input_err(spec, e))?;
            Hyperbox::from_csv(&text)
        }
        _ => return Err(input_err("--box", format!("`{spec}` is neither \"lo,hi\" nor a readable file"))),
    }
    .map_err(|e| input_err("--box", e))?;
    if domain.dim() != dim {
        return Err(input_err(
            "--box",
            format!("box has {} axes but the design has dimension {dim}", domain.dim()),
        ));
    }
    Ok(domain)
}

struct Loaded {
    design: Design,
    domain: Hyperbox,
}

fn load_sample_inputs(args: &SampleArgs, outputs: &mut Outputs) -> Result<Loaded> {
    let design = load_design(&args.design)?;
    let domain = parse_box(&args.domain, design.dim())?;
    design
        .check_within(&domain)
        .map_err(|e| input_err(args.design.display(), e))?;
    outputs.seed = Some(args.seed);
    outputs.samples = Some(args.samples);
    outputs.design_hash = Some(crate::manifest::sha256_hex(design.to_csv(false).as_bytes()));
    Ok(Loaded { design, domain })
}

/// Library errors caused by flag values are input errors.
fn lib<T>(flag: &str, r: hypercover::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        hypercover::Error::Calibration(msg) => anyhow::anyhow!("calibration failed: {msg}"),
        other => input_err(flag, other),
    })
}

pub fn execute(command: &Command) -> Result<Outputs> {
    match command {
        Command::Design(a) => design(a),
        Command::Coverage(a) => coverage(a),
        Command::Cdf(a) => cdf(a),
        Command::Quantile(a) => quantile_cmd(a),
        Command::Quantize(a) => quantize(a),
        Command::Lloyd(a) => lloyd(a),
        Command::Asy(a) => asy(a),
        Command::Fig1(a) => fig1(a),
        Command::Fig2(a) => fig2(a),
        Command::Fig3(a) => fig3(a),
        Command::Fig4(a) => fig4(a),
    }
}

fn design(a: &DesignArgs) -> Result<Outputs> {
    let family: Family = lib("--family", a.family.parse())?;
    if family == Family::UniformDelta && a.seed.is_none() {
        return Err(input_err("--seed", "required for random designs"));
    }
    let spec = DesignSpec {
        family,
        dim: a.d,
        n: a.n,
        delta: a.delta,
        seed: a.seed,
    };
    let design = lib("design", spec.build())?;
    let mut out = Outputs::new(&a.out);
    out.seed = a.seed;
    out.primary(design.to_csv(a.header).into_bytes());
    Ok(out)
}

#[derive(Serialize)]
struct CoverageJson {
    r: f64,
    fraction: f64,
    ci_low: f64,
    ci_high: f64,
    #[serde(rename = "N")]
    n: usize,
    seed: u64,
}

fn coverage(a: &CoverageArgs) -> Result<Outputs> {
    let mut out = Outputs::new(&a.out);
    let l = load_sample_inputs(&a.sample, &mut out)?;
    let sample = lib("--N", distance_sample(&l.domain, &l.design, a.sample.samples, a.sample.seed))?;
    let c = lib("--r", coverage_at(&sample, a.r))?;
    out.primary(json(&CoverageJson {
        r: c.r,
        fraction: c.fraction,
        ci_low: c.ci_low,
        ci_high: c.ci_high,
        n: c.n,
        seed: a.sample.seed,
    }));
    Ok(out)
}

fn cdf(a: &CdfArgs) -> Result<Outputs> {
    let mut out = Outputs::new(&a.out);
    let l = load_sample_inputs(&a.sample, &mut out)?;
    let rmax = a.rmax.unwrap_or_else(|| l.domain.diameter());
    let grid = lib("--steps", linear_grid(a.rmin, rmax, a.steps))?;
    let sample = lib("--N", distance_sample(&l.domain, &l.design, a.sample.samples, a.sample.seed))?;
    let rows = grid
        .iter()
        .map(|&r| lib("--rmin", coverage_at(&sample, r)).map(EcdfRow::from))
        .collect::<Result<Vec<_>>>()?;
    out.primary(to_csv(&rows).into_bytes());
    Ok(out)
}

#[derive(Serialize)]
struct QuantileJson {
    gamma: f64,
    r_quantile: f64,
    ci_low: f64,
    ci_high: f64,
    #[serde(rename = "N")]
    n: usize,
    seed: u64,
}

fn quantile_cmd(a: &QuantileArgs) -> Result<Outputs> {
    let mut out = Outputs::new(&a.out);
    let l = load_sample_inputs(&a.sample, &mut out)?;
    if !(a.gamma > 0.0 && a.gamma < 1.0) {
        return Err(input_err("--gamma", format!("must lie in (0, 1), got {}", a.gamma)));
    }
    let sample = lib("--N", distance_sample(&l.domain, &l.design, a.sample.samples, a.sample.seed))?;
    let q = lib("--gamma", quantile(&sample, a.gamma))?;
    if q.sparse_tail {
        eprintln!(
            "warning: N * gamma = {} < 10; the tail quantile rests on few sample points",
            a.sample.samples as f64 * a.gamma
        );
    }
    out.primary(json(&QuantileJson {
        gamma: q.gamma,
        r_quantile: q.r_quantile,
        ci_low: q.ci_low,
        ci_high: q.ci_high,
        n: sample.len(),
        seed: a.sample.seed,
    }));
    Ok(out)
}

fn quantize(a: &QuantizeArgs) -> Result<Outputs> {
    let mut out = Outputs::new(&a.out);
    let l = load_sample_inputs(&a.sample, &mut out)?;
    if a.orders.iter().any(|p| !(*p > 0.0)) {
        return Err(input_err("--p", "orders must be positive"));
    }
    let sample = lib("--N", distance_sample(&l.domain, &l.design, a.sample.samples, a.sample.seed))?;
    let report = lib("--p", quantization_error(&sample, &a.orders))?;
    out.primary(json(&report));
    Ok(out)
}

fn lloyd(a: &LloydArgs) -> Result<Outputs> {
    let mut out = Outputs::new(&a.out);
    let l = load_sample_inputs(&a.sample, &mut out)?;
    let run = lib("--iters", lloyd_run(&l.domain, &l.design, a.sample.samples, a.sample.seed, a.iters))?;
    out.primary(run.design.to_csv(false).into_bytes());
    let trace_path = a.trace.clone().or_else(|| {
        a.out.output.as_ref().map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".trace.csv");
            PathBuf::from(s)
        })
    });
    if let Some(path) = trace_path {
        let mut csv = String::from("iteration,objective\n");
        for (iteration, objective) in run.objective.iter().enumerate() {
            csv.push_str(&format!("{iteration},{objective}\n"));
        }
        out.push(Sink::File(path), csv.into_bytes());
    }
    Ok(out)
}

#[derive(Serialize)]
struct AsyJson {
    r_asy: f64,
    #[serde(rename = "V_d")]
    v_d: f64,
    n: usize,
    d: usize,
    target: f64,
}

fn asy(a: &AsyArgs) -> Result<Outputs> {
    let r_asy = lib("--target", asymptotic_radius(a.n, a.d, a.target))?;
    let v_d = lib("--d", unit_ball_volume(a.d))?;
    let mut out = Outputs::new(&a.out);
    out.primary(json(&AsyJson {
        r_asy,
        v_d,
        n: a.n,
        d: a.d,
        target: a.target,
    }));
    Ok(out)
}

fn fig_common<R: CsvRow + Serialize>(fig: &FigOutput, sweep: &SweepResult<R>) -> Outputs {
    let mut out = Outputs::new(&fig.out);
    out.seed = Some(sweep.meta.seed);
    out.samples = Some(sweep.meta.samples);
    out.primary(rows_bytes(&sweep.rows, fig.json));
    out
}

fn fig1(a: &Fig1Args) -> Result<Outputs> {
    let sweep = lib(
        "fig1",
        asymptotic_gap_sweep(&a.dims, a.n, a.target, a.samples, a.seed, a.replicates),
    )?;
    Ok(fig_common(&a.fig, &sweep))
}

fn fig2(a: &Fig2Args) -> Result<Outputs> {
    let grid = lib("--steps", linear_grid(a.rmin, a.rmax, a.steps))?;
    let sweep = lib("fig2", cdf_comparison(a.d, a.n, &grid, a.samples, a.seed))?;
    Ok(fig_common(&a.fig, &sweep))
}

#[derive(Serialize)]
struct Fig3Summary {
    d: usize,
    n: usize,
    r: f64,
    calibrated: bool,
    target: Option<f64>,
    best_delta: f64,
    best_coverage: f64,
}

fn summary_sinks(out: &mut Outputs, path: &Option<PathBuf>, bytes: Vec<u8>) {
    if let Some(p) = path {
        out.push(Sink::File(p.clone()), bytes);
    } else {
        out.push(Sink::Stderr, bytes);
    }
}

fn fig3(a: &Fig3Args) -> Result<Outputs> {
    let deltas = match &a.deltas {
        Some(d) => d.clone(),
        None => (2..=20).map(|i| i as f64 * 0.05).collect(),
    };
    let study = lib("--deltas", DeltaStudy::new(a.d, a.n, &deltas, a.samples, a.seed))?;
    let (r, target) = match a.r {
        Some(r) => (r, None),
        None => {
            let cal = lib("--target", study.calibrate(a.target, CALIBRATION_TOLERANCE, None))?;
            (cal.r, Some(a.target))
        }
    };
    let sweep = lib("--r", study.sweep(r))?;
    let (best_delta, best_coverage) = study.best(r);
    let mut out = fig_common(&a.fig, &sweep);
    let summary = json(&Fig3Summary {
        d: a.d,
        n: a.n,
        r,
        calibrated: target.is_some(),
        target,
        best_delta,
        best_coverage,
    });
    summary_sinks(&mut out, &a.summary, summary);
    Ok(out)
}

fn fig4(a: &Fig4Args) -> Result<Outputs> {
    let r1 = lib("--d", hypercover::covering_radius_factorial_exact(a.d))?;
    let grid = lib("--steps", linear_grid(a.rmin, a.rmax.unwrap_or(r1), a.steps))?;
    let study = lib("fig4", factorial_study(a.d, &a.gammas, a.samples, a.seed, Some(&grid)))?;
    let mut out = fig_common(&a.fig, &study.cdf);
    summary_sinks(&mut out, &a.summary, json(&study.summary));
    Ok(out)
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<InputError>().is_some() {
        2
    } else {
        1
    }
}

pub fn write_outputs(outputs: &Outputs) -> Result<()> {
    use std::io::Write;
    for (sink, bytes) in &outputs.files {
        match sink {
            Sink::Stdout => std::io::stdout().write_all(bytes)?,
            Sink::Stderr => std::io::stderr().write_all(bytes)?,
            Sink::File(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        }
    }
    Ok(())
}
