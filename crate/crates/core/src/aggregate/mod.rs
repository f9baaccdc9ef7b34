//! Sums of `A_2(p)` and `A_3(p)` over primes, growth-ratio diagnostics,
//! the binary asymptotic constant, and empirical divisor-sum diagnostics.

mod checkpoint;
mod series;

pub use checkpoint::{RunCheckpoint, CHECKPOINT_FORMAT};
pub use series::{
    compute_series, format_sig, Method, PrimeCounts, RunOutcome, SeriesConfig, SeriesDriver, SeriesRow, SumSeries,
    BRUTEFORCE_MAX_X,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, SieveTables};
use crate::error::{Error, Result};

/// Default cap on `A B C D` for [`tau_bilinear_diagnostic`].
pub const BILINEAR_MAX_TERMS: u64 = 100_000_000;

/// `zeta(3)` from the first `terms` terms plus the Euler-Maclaurin tail
/// `1/(2N^2) - 1/(2N^3) + 1/(4N^4)`, accurate to `O(N^-6)`.
pub fn zeta3(terms: u64) -> f64 {
    assert!(terms >= 1);
    // smallest terms first
    let head: f64 = (1..=terms).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
    let n = terms as f64;
    head + 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n * n * n) + 1.0 / (4.0 * n.powi(4))
}

/// Rigorous enclosure of `zeta(3)` from `terms` terms:
/// `1/(2(N+1)^2) < sum_{k>N} k^-3 < 1/(2N^2)`.
pub fn zeta3_bounds(terms: u64) -> (f64, f64) {
    let head: f64 = (1..=terms).rev().map(|k| 1.0 / (k as f64).powi(3)).sum();
    let n = terms as f64;
    (head + 1.0 / (2.0 * (n + 1.0) * (n + 1.0)), head + 1.0 / (2.0 * n * n))
}

/// `315 zeta(3) / (2 pi^4)`, the mean value of `A_2(p)` per unit of `x`.
pub fn binary_constant() -> f64 {
    315.0 * zeta3(1_000_000) / (2.0 * std::f64::consts::PI.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub x: u64,
    /// `S3 / (x (ln x)^3)`
    pub r3: Option<f64>,
    /// `S3 / (x (ln x)^5)`
    pub r5: Option<f64>,
    /// `S2 / (C x)` with `C` the binary constant
    pub r2: f64,
}

pub fn ratio_row(row: &SeriesRow, constant: f64) -> RatioRow {
    let x = row.x as f64;
    let ln = x.ln();
    let r3 = row.s3.map(|s| s as f64 / (x * ln.powi(3)));
    RatioRow {
        x: row.x,
        r3,
        r5: r3.map(|r| r / (ln * ln)),
        r2: row.s2 as f64 / (constant * x),
    }
}

/// Report-only ratios for every row; no thresholds are applied here.
pub fn ratio_report(series: &SumSeries) -> Vec<RatioRow> {
    let c = binary_constant();
    series.rows.iter().map(|r| ratio_row(r, c)).collect()
}

/// `(sum_{a <= t} tau(n - a)) / (t ln t)`.
pub fn tau_shift_diagnostic(n: u64, t: u64, tables: &SieveTables) -> Result<f64> {
    if t < 2 {
        return Err(Error::usage(format!("t must be at least 2 (ln t > 0), got {t}")));
    }
    if t >= n {
        return Err(Error::usage(format!("t = {t} must be below n = {n}")));
    }
    let total: u64 = (1..=t).map(|a| tables.factorize(n - a).tau()).sum();
    Ok(total as f64 / (t as f64 * (t as f64).ln()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub samples: usize,
    pub max: f64,
    pub argmax: u64,
    pub mean: f64,
}

/// Samples `n` uniformly from `[4, n_max]` and evaluates the shift
/// diagnostic at `t = n/2`.
pub fn tau_shift_sweep(samples: usize, n_max: u64, seed: u64, tables: &SieveTables) -> Result<SweepSummary> {
    if samples == 0 || n_max < 4 {
        return Err(Error::usage("sweep needs at least one sample and n_max >= 4"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::MIN, 0);
    let mut sum = 0.0;
    for _ in 0..samples {
        let n = rng.random_range(4..=n_max);
        let v = tau_shift_diagnostic(n, n / 2, tables)?;
        sum += v;
        if v > best.0 {
            best = (v, n);
        }
    }
    Ok(SweepSummary {
        samples,
        max: best.0,
        argmax: best.1,
        mean: sum / samples as f64,
    })
}

/// `(sum tau(ab + cd) over a<=A, b<=B, c<=C, d<=D, gcd(ab, cd) = 1)
///  / (A B C D ln(A + B + C + D))`.
pub fn tau_bilinear_diagnostic(dims: [u64; 4], max_terms: u64, tables: &SieveTables) -> Result<f64> {
    if dims.contains(&0) {
        return Err(Error::usage("all ranges must be at least 1"));
    }
    let terms = dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
    if terms.map_or(true, |t| t > max_terms) {
        return Err(Error::CostGuard {
            what: "bilinear diagnostic",
            detail: format!("A B C D exceeds {max_terms}"),
        });
    }
    let [ra, rb, rc, rd] = dims;
    let products = |x: u64, y: u64| -> Vec<u64> { (1..=x).flat_map(|i| (1..=y).map(move |j| i * j)).collect() };
    let left = products(ra, rb);
    let right = products(rc, rd);
    let mut total = 0u64;
    for &l in &left {
        for &r in &right {
            if gcd(l, r) == 1 {
                total += tables.factorize(l + r).tau();
            }
        }
    }
    let denom = (ra * rb * rc * rd) as f64 * ((ra + rb + rc + rd) as f64).ln();
    Ok(total as f64 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_sieve;

    // high-precision reference value of 315 zeta(3) / (2 pi^4)
    const BINARY_CONSTANT_REF: f64 = 1.943_596_436_820_759_2;

    #[test]
    fn binary_constant_value() {
        let c = binary_constant();
        assert!(c > 0.0);
        assert!((c - BINARY_CONSTANT_REF).abs() < 1e-12, "{c}");
        assert!((c - 1.943596).abs() < 1e-6);
    }

    #[test]
    fn zeta3_truncations_agree() {
        let a = zeta3(100_000);
        let b = zeta3(1_000_000);
        assert!((a - b).abs() < 1e-12 * b, "{a} vs {b}");
        let (lo, hi) = zeta3_bounds(1_000_000);
        assert!(lo <= b && b <= hi);
        assert!(hi - lo < 5e-13);
    }

    #[test]
    fn synthetic_ratio_rows() {
        let x = 1000u64;
        let ln = (x as f64).ln();
        let row = SeriesRow {
            x,
            pi_x: 168,
            s2: 0,
            s3: Some((x as f64 * ln.powi(3)).round() as u64),
            s3_star: None,
        };
        let r = ratio_row(&row, 1.0);
        assert!((r.r3.unwrap() - 1.0).abs() < 1e-6);
        assert!((r.r5.unwrap() - r.r3.unwrap() / (ln * ln)).abs() < 1e-15);
    }

    #[test]
    fn shift_diagnostic_example() {
        let t = build_sieve(1_000).unwrap();
        // tau(99), ..., tau(90) = 6, 6, 2, 12, 4, 4, 4, 6, 4, 12
        let v = tau_shift_diagnostic(100, 10, &t).unwrap();
        assert!((v - 60.0 / (10.0 * 10f64.ln())).abs() < 1e-12);
        assert!((v - 2.6058).abs() < 1e-4);
        assert!(matches!(tau_shift_diagnostic(100, 1, &t), Err(Error::Usage(_))));
        assert!(matches!(tau_shift_diagnostic(10, 10, &t), Err(Error::Usage(_))));
    }

    #[test]
    fn shift_sweep_is_seeded() {
        let t = build_sieve(20_000).unwrap();
        let a = tau_shift_sweep(50, 20_000, 7, &t).unwrap();
        let b = tau_shift_sweep(50, 20_000, 7, &t).unwrap();
        assert_eq!(a, b);
        assert!(a.max >= a.mean && a.mean > 0.0);
    }

    #[test]
    fn bilinear_diagnostic() {
        let t = build_sieve(1_000).unwrap();
        let one = tau_bilinear_diagnostic([1; 4], BILINEAR_MAX_TERMS, &t).unwrap();
        assert!((one - 2.0 / 4f64.ln()).abs() < 1e-12);

        // direct quadruple loop with its own gcd and divisor count
        let mut total = 0u64;
        for a in 1..=5u64 {
            for b in 1..=5 {
                for c in 1..=5 {
                    for d in 1..=5 {
                        if gcd(a * b, c * d) == 1 {
                            let n = a * b + c * d;
                            total += (1..=n).filter(|k| n % k == 0).count() as u64;
                        }
                    }
                }
            }
        }
        let five = tau_bilinear_diagnostic([5; 4], BILINEAR_MAX_TERMS, &t).unwrap();
        assert!((five - total as f64 / (625.0 * 20f64.ln())).abs() < 1e-12);

        assert!(matches!(
            tau_bilinear_diagnostic([100; 4], 1_000, &t),
            Err(Error::CostGuard { .. })
        ));
    }

    #[test]
    fn bilinear_ratio_spread_is_bounded() {
        let t = build_sieve(1_000).unwrap();
        let sizes = [5u64, 10, 20];
        let mut values = Vec::new();
        for &a in &sizes {
            for &b in &sizes {
                for &c in &sizes {
                    for &d in &sizes {
                        values.push(tau_bilinear_diagnostic([a, b, c, d], BILINEAR_MAX_TERMS, &t).unwrap());
                    }
                }
            }
        }
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 4.0, "spread {min}..{max}");
    }
}
