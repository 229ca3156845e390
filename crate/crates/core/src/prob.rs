//! Exact binomial arithmetic and the closed-form coverage probability.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, k)` as an exact big integer; 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sum_{j=0}^{k} C(n, j)`.
pub fn binomial_prefix_sum(n: u64, k: u64) -> BigUint {
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    total += &term;
    for j in 1..=k.min(n) {
        term = term * BigUint::from(n - j + 1) / BigUint::from(j);
        total += &term;
    }
    total
}

fn check_coverage_args(n: usize, k: usize, d: usize) -> Result<()> {
    if d > n {
        return Err(Error::validation(format!("d={} exceeds n={}", d, n)));
    }
    if k == 0 || k > n {
        return Err(Error::validation(format!(
            "k={} must satisfy 1 <= k <= n={}",
            k, n
        )));
    }
    Ok(())
}

/// Probability that a fixed right node of degree `d` is covered by a uniform
/// size-`k` subset of `n` left nodes: `1 - C(n-d, k) / C(n, k)`.
///
/// Computed as a running product of `(n-d-i)/(n-i)`, which yields exactly 0
/// or 1 at the boundary cases and never overflows.
pub fn coverage_probability_exact(n: usize, k: usize, d: usize) -> Result<f64> {
    check_coverage_args(n, k, d)?;
    if n - d < k {
        // C(n-d, k) = 0: every size-k subset hits a neighbor.
        return Ok(1.0);
    }
    let mut ratio = 1.0f64;
    for i in 0..k {
        ratio *= (n - d - i) as f64 / (n - i) as f64;
    }
    Ok(1.0 - ratio)
}

/// Exact-rational form of [`coverage_probability_exact`].
pub fn coverage_probability_rational(n: usize, k: usize, d: usize) -> Result<BigRational> {
    check_coverage_args(n, k, d)?;
    let miss = BigRational::new(
        BigInt::from(binomial((n - d) as u64, k as u64)),
        BigInt::from(binomial(n as u64, k as u64)),
    );
    Ok(BigRational::one() - miss)
}
