use hypercover::coverage::covered_length_1d;
use hypercover::experiments::asymptotic_gap_sweep;
use hypercover::{
    approx_coverage, asymptotic_radius, coverage_at, covering_radius_1d_exact, covering_radius_factorial_exact,
    distance_sample, distance_sample_with, factorial_half_design, midpoint_design_1d, paper_1d_design, quantile,
    sample_uniform, Design, FactorialHalf, Hyperbox, SeededStream,
};

#[test]
fn one_dimensional_covering_radii() {
    let unit = Hyperbox::unit(1);
    for n in 1..=20 {
        let m = covering_radius_1d_exact(&midpoint_design_1d(n).unwrap(), &unit).unwrap();
        let p = covering_radius_1d_exact(&paper_1d_design(n).unwrap(), &unit).unwrap();
        assert!((m - 1.0 / (2 * n) as f64).abs() < 1e-15, "n = {n}");
        assert!((p - 1.0 / (2 * n - 1) as f64).abs() < 1e-15, "n = {n}");
    }
}

#[test]
fn monte_carlo_coverage_agrees_with_interval_union_in_1d() {
    let unit = Hyperbox::unit(1);
    let mut covered = 0;
    for k in 0..20u64 {
        let design = sample_uniform(&unit, 1 + k as usize % 7, SeededStream::new(k, 0)).unwrap();
        let sample = distance_sample(&unit, &design, 100_000, 1000 + k).unwrap();
        let r = 0.02 + 0.01 * k as f64;
        let est = coverage_at(&sample, r).unwrap();
        let exact = covered_length_1d(&design, &unit, r).unwrap();
        if est.ci_low <= exact && exact <= est.ci_high {
            covered += 1;
        }
    }
    assert!(covered >= 19, "{covered}/20 intervals covered the exact length");
}

#[test]
fn factorial_sample_never_exceeds_exact_radius() {
    for d in [3, 6, 11] {
        let r1 = covering_radius_factorial_exact(d).unwrap();
        let sample =
            distance_sample_with(&Hyperbox::symmetric(d), &FactorialHalf::new(d).unwrap(), 50_000, 7).unwrap();
        assert!(sample.max() <= r1 + 1e-12);
        // the structured kernel and the explicit design agree
        let design = factorial_half_design(d).unwrap();
        let explicit = distance_sample(&Hyperbox::symmetric(d), &design, 50_000, 7).unwrap();
        for (a, b) in sample.distances().iter().zip(explicit.distances()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn factorial_quantile_at_d10() {
    let sample =
        distance_sample_with(&Hyperbox::symmetric(10), &FactorialHalf::new(10).unwrap(), 1_000_000, 11).unwrap();
    let q = quantile(&sample, 0.001).unwrap();
    assert!((q.r_quantile - 1.3465).abs() < 0.015, "{q:?}");
}

#[test]
fn asymptotic_law_is_accurate_in_one_dimension_only() {
    let sweep = asymptotic_gap_sweep(&[1, 20], 1000, 0.9, 200_000, 17, 1).unwrap();
    assert!((sweep.rows[0].coverage - 0.9).abs() < 0.03);
    assert!(sweep.rows[1].coverage < 0.5);
    let r = asymptotic_radius(1000, 20, 0.9).unwrap();
    assert!((approx_coverage(r, 1000, 20).unwrap() - 0.9).abs() < 1e-12);
}

#[test]
fn design_csv_round_trip_through_files() {
    let design = sample_uniform(&Hyperbox::unit(5), 17, SeededStream::new(3, 0)).unwrap();
    let dir = std::env::temp_dir().join(format!("hypercover-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.csv");
    std::fs::write(&path, design.to_csv(true)).unwrap();
    let back = Design::from_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, design);
    std::fs::remove_dir_all(&dir).unwrap();
}
