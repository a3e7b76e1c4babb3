//! Binomial proportion intervals.

use serde::{Deserialize, Serialize};

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;
/// z for a two-sided 99% interval.
pub const Z99: f64 = 2.575_829_303_548_901;

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Interval95 {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval for `successes` out of `n` at critical value `z`.
pub fn wilson(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if phat == 0.0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if phat == 1.0 { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

pub fn wilson95(successes: u64, n: u64) -> Interval95 {
    let (lo, hi) = wilson(successes, n, Z95);
    Interval95 { lo, hi }
}

/// Standard error of a sample proportion.
pub fn proportion_se(successes: u64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let p = successes as f64 / n as f64;
    (p * (1.0 - p) / n as f64).sqrt()
}
