//! Small numeric helpers shared by the entropy code.

use crate::error::{Error, Result};

/// Absolute tolerance, in bits, for every floating comparison in the crate.
pub const TOLERANCE_BITS: f64 = 1e-9;

/// Exact binomial coefficient with checked 128-bit arithmetic.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(u128::from(n - i)).ok_or(Error::Overflow)? / u128::from(i + 1);
    }
    Ok(acc)
}

pub fn checked_pow(base: u64, exp: u32) -> Result<u128> {
    u128::from(base).checked_pow(exp).ok_or(Error::Overflow)
}

/// `a * log2(a)` with the convention `0 log 0 = 0`.
pub fn xlog2x(a: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else {
        a * a.log2()
    }
}

pub fn xlog2x_count(a: u128) -> f64 {
    if a <= 1 {
        0.0
    } else {
        xlog2x(a as f64)
    }
}

/// Pairwise (cascade) summation; error grows with log(len) instead of len.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Entropy `log2(total) - W / total` of a distribution given by integer
/// weights whose log-sum `W = sum w log2 w` is already known.
pub(crate) fn entropy_from_log_sum(total: u128, log_sum: f64) -> f64 {
    let t = total as f64;
    (t.log2() - log_sum / t).max(0.0)
}

/// Shannon entropy in bits of a probability vector (zeros skipped).
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    let terms: Vec<f64> = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .collect();
    pairwise_sum(&terms).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(3, 4).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
        assert!(binomial(200, 100).is_err());
    }

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn xlogx_conventions() {
        assert_eq!(xlog2x(0.0), 0.0);
        assert_eq!(xlog2x(1.0), 0.0);
        assert_eq!(xlog2x(4.0), 8.0);
        assert_eq!(xlog2x_count(0), 0.0);
    }
}
