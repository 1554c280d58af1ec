//! Results must not depend on how many worker threads run the chunks.

use hypercover::experiments::{factorial_study, DeltaStudy};
use hypercover::quantization::lloyd_run;
use hypercover::{distance_sample, sample_uniform, Hyperbox, SeededStream};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn distance_samples_are_bit_identical_across_pool_sizes() {
    let domain = Hyperbox::symmetric(7);
    let design = sample_uniform(&domain, 300, SeededStream::new(5, 0)).unwrap();
    // several chunks, the last one partial
    let n = 3 * 8192 + 517;
    let one = in_pool(1, || distance_sample(&domain, &design, n, 99).unwrap());
    let four = in_pool(4, || distance_sample(&domain, &design, n, 99).unwrap());
    let a: Vec<u64> = one.distances().iter().map(|x| x.to_bits()).collect();
    let b: Vec<u64> = four.distances().iter().map(|x| x.to_bits()).collect();
    assert_eq!(a, b);
}

#[test]
fn sweeps_are_bit_identical_across_pool_sizes() {
    let run = || {
        let study = DeltaStudy::new(6, 40, &[0.4, 0.7, 1.0], 20_000, 3).unwrap();
        let sweep = study.sweep(1.0).unwrap();
        let fact = factorial_study(8, &[0.1, 0.01], 50_000, 3, None).unwrap();
        (sweep, fact)
    };
    assert_eq!(in_pool(1, run), in_pool(3, run));
}

#[test]
fn lloyd_is_bit_identical_across_pool_sizes() {
    let domain = Hyperbox::unit(4);
    let design = sample_uniform(&domain, 12, SeededStream::new(8, 0)).unwrap();
    let run = || lloyd_run(&domain, &design, 20_000, 4, 15).unwrap();
    let (a, b) = (in_pool(1, run), in_pool(4, run));
    assert_eq!(a.design, b.design);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.objective), bits(&b.objective));
}

#[test]
fn different_seeds_give_different_samples() {
    let domain = Hyperbox::unit(3);
    let design = sample_uniform(&domain, 10, SeededStream::new(1, 0)).unwrap();
    let a = distance_sample(&domain, &design, 1000, 1).unwrap();
    let b = distance_sample(&domain, &design, 1000, 2).unwrap();
    assert_ne!(a.distances(), b.distances());
}
