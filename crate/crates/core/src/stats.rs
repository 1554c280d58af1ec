//! Exact binomial intervals used by every Monte Carlo estimate.

use statrs::distribution::{Binomial, DiscreteCDF};
use statrs::function::beta::beta_reg;

/// Two-sided confidence level used throughout.
pub const CONFIDENCE: f64 = 0.99;

/// Clopper-Pearson interval for a binomial proportion with `hits` successes
/// out of `trials`.
pub fn clopper_pearson(hits: usize, trials: usize, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials);
    let tail = (1.0 - confidence) / 2.0;
    let (k, n) = (hits as f64, trials as f64);
    let low = if hits == 0 {
        0.0
    } else {
        beta_quantile(k, n - k + 1.0, tail)
    };
    let high = if hits == trials {
        1.0
    } else {
        beta_quantile(k + 1.0, n - k, 1.0 - tail)
    };
    (low.clamp(0.0, 1.0), high.clamp(0.0, 1.0))
}

/// Quantile of Beta(a, b) by bisection on the regularized incomplete beta.
/// The library inverse stalls for shape parameters near 10^7, which are
/// routine here; bisection costs about a hundred cdf evaluations.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// 1-based ranks `(lo, hi)` such that the order statistics `X_(lo) <= X_(hi)`
/// of `n` continuous draws bracket the `q`-quantile with probability at least
/// `confidence` (up to clamping at the sample extremes).
///
/// With `B ~ Binomial(n, q)` counting draws at or below the quantile,
/// `P(X_(lo) > xi) = P(B < lo)` and `P(X_(hi) < xi) = P(B >= hi)`; each tail
/// is held to `(1 - confidence) / 2`.
pub fn order_statistic_ranks(n: usize, q: f64, confidence: f64) -> (usize, usize) {
    let tail = (1.0 - confidence) / 2.0;
    if q <= 0.0 {
        return (1, 1);
    }
    if q >= 1.0 {
        return (n, n);
    }
    let b = Binomial::new(q, n as u64).unwrap();
    // smallest k with P(B <= k) >= tail; then P(B <= k - 1) < tail.
    let lo = b.inverse_cdf(tail) as usize;
    // smallest k with P(B <= k) >= 1 - tail; then P(B >= k + 1) <= tail.
    let hi = b.inverse_cdf(1.0 - tail) as usize + 1;
    (lo.clamp(1, n), hi.clamp(1, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Binomial pmf by log-space summation, independent of the beta routines.
    fn pmf(n: usize, p: f64) -> Vec<f64> {
        let mut ln_fact = vec![0.0f64; n + 1];
        for i in 1..=n {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        (0..=n)
            .map(|k| {
                (ln_fact[n] - ln_fact[k] - ln_fact[n - k]
                    + k as f64 * p.ln()
                    + (n - k) as f64 * (1.0 - p).ln())
                .exp()
            })
            .collect()
    }

    #[test]
    fn clopper_pearson_bounds_hit_tail_mass() {
        for &(k, n) in &[(3usize, 20usize), (50, 100), (199, 200), (1, 400)] {
            let (lo, hi) = clopper_pearson(k, n, CONFIDENCE);
            let p = k as f64 / n as f64;
            assert!(lo < p && p < hi);
            // P(Bin(n, lo) >= k) = 0.005 and P(Bin(n, hi) <= k) = 0.005
            let upper_tail: f64 = pmf(n, lo)[k..].iter().sum();
            let lower_tail: f64 = pmf(n, hi)[..=k].iter().sum();
            assert!((upper_tail - 0.005).abs() < 1e-9, "{k}/{n}: {upper_tail}");
            assert!((lower_tail - 0.005).abs() < 1e-9, "{k}/{n}: {lower_tail}");
        }
    }

    #[test]
    fn clopper_pearson_extremes_at_ten_million_trials() {
        // Beta(1, n) and Beta(n, 1) have closed-form quantiles
        let n = 10_000_000;
        let tail: f64 = 0.005;
        let (_, hi) = clopper_pearson(0, n, CONFIDENCE);
        let (lo, _) = clopper_pearson(n, n, CONFIDENCE);
        let expect = -(tail.ln() / n as f64).exp_m1();
        // the incomplete beta is good to about 1e-9 relative at this size
        assert!((hi - expect).abs() < 1e-8 * expect);
        assert!((lo - (1.0 - expect)).abs() < 1e-12);
        let (lo, hi) = clopper_pearson(n / 2, n, CONFIDENCE);
        assert!(lo < 0.5 && 0.5 < hi && hi - lo < 1e-3);
    }

    #[test]
    fn clopper_pearson_edges() {
        assert_eq!(clopper_pearson(0, 10, CONFIDENCE).0, 0.0);
        assert_eq!(clopper_pearson(10, 10, CONFIDENCE).1, 1.0);
        let (lo, hi) = clopper_pearson(500_000, 1_000_000, CONFIDENCE);
        // normal approximation: 2.5758 * 0.0005
        assert!(((hi - lo) / 2.0 - 0.0012879).abs() < 2e-6);
    }

    #[test]
    fn order_statistic_coverage_by_enumeration() {
        for &(n, q) in &[(50usize, 0.5), (200, 0.9), (1000, 0.99), (400, 0.1)] {
            let (lo, hi) = order_statistic_ranks(n, q, CONFIDENCE);
            let probs = pmf(n, q);
            // interval [X_(lo), X_(hi)] covers iff lo <= B < hi
            let cover: f64 = probs[lo..hi].iter().sum();
            assert!(cover >= 0.99 - 1e-12, "n={n} q={q}: {cover}");
            // and it is tight: shrinking either end loses the guarantee
            let below: f64 = probs[..lo].iter().sum();
            let above: f64 = probs[hi..].iter().sum();
            assert!(below <= 0.005 + 1e-12 && above <= 0.005 + 1e-12);
            assert!(below + probs[lo] > 0.005 || lo == n);
        }
    }
}
