//! Declarative sample distributions over subsets of the left node set.
//!
//! Six families are supported: the uniform distributions over subsets of
//! exact size `k`, of size at most `k` (including the empty set), and of
//! exact size `r`; and the three structured families used by the hardness
//! ensembles (a deterministic prefix plus one uniform node, a uniform choice
//! among fixed consecutive blocks, and uniform size-`k` subsets of the second
//! half of the ground set).
//!
//! All families are uniform over their support, so exact inclusion
//! probabilities, support enumeration, and the negative-correlation and
//! conditional-probability checkers can all be evaluated in closed form or
//! by exhaustive enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::graph::{NodeSet, Side};
use crate::prob::{binomial, binomial_prefix_sum};

/// Default cap on the support size for exhaustive enumeration.
pub const DEFAULT_SUPPORT_CAP: u64 = 1_000_000;

/// Default ground-set size limit for the exhaustive correlation checkers
/// (all `3^n` disjoint pair assignments must be enumerable).
pub const DEFAULT_CHECK_LIMIT_N: usize = 10;

/// Float-mode tolerance: violations within this margin count as equality.
pub const FLOAT_VIOLATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributionSpec {
    /// Uniform over all subsets of size exactly `k`.
    UniformExactK { n: usize, k: usize },
    /// Uniform over all subsets of size at most `k`, including the empty set.
    UniformAtMostK { n: usize, k: usize },
    /// Uniform over all subsets of size exactly `r` (used with `r > k`).
    UniformExactR { n: usize, r: usize },
    /// The first `k-1` nodes always, plus one node uniform from the rest.
    HalfHardness { n: usize, k: usize },
    /// Uniform over the `n/k` fixed consecutive blocks of size `k`.
    BlockPartition { n: usize, k: usize },
    /// Uniform over size-`k` subsets of the second half `[n/2, n)`.
    SubsetOfL2ExactK { n: usize, k: usize },
}

impl DistributionSpec {
    pub fn n(&self) -> usize {
        match *self {
            DistributionSpec::UniformExactK { n, .. }
            | DistributionSpec::UniformAtMostK { n, .. }
            | DistributionSpec::UniformExactR { n, .. }
            | DistributionSpec::HalfHardness { n, .. }
            | DistributionSpec::BlockPartition { n, .. }
            | DistributionSpec::SubsetOfL2ExactK { n, .. } => n,
        }
    }

    /// Maximum possible sample size: the bound checked against the constraint.
    pub fn feasible_bound(&self) -> usize {
        match *self {
            DistributionSpec::UniformExactK { k, .. }
            | DistributionSpec::UniformAtMostK { k, .. }
            | DistributionSpec::HalfHardness { k, .. }
            | DistributionSpec::BlockPartition { k, .. }
            | DistributionSpec::SubsetOfL2ExactK { k, .. } => k,
            DistributionSpec::UniformExactR { r, .. } => r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        match *self {
            DistributionSpec::UniformExactK { n, k }
            | DistributionSpec::UniformAtMostK { n, k } => {
                if n == 0 || k == 0 || k > n {
                    return fail(format!("require 1 <= k <= n, got n={} k={}", n, k));
                }
            }
            DistributionSpec::UniformExactR { n, r } => {
                if n == 0 || r == 0 || r > n {
                    return fail(format!("require 1 <= r <= n, got n={} r={}", n, r));
                }
            }
            DistributionSpec::HalfHardness { n, k } => {
                if n == 0 || k == 0 || k > n {
                    return fail(format!("require 1 <= k <= n, got n={} k={}", n, k));
                }
            }
            DistributionSpec::BlockPartition { n, k } => {
                if n == 0 || k == 0 || n % k != 0 {
                    return fail(format!("require k >= 1 and k | n, got n={} k={}", n, k));
                }
            }
            DistributionSpec::SubsetOfL2ExactK { n, k } => {
                if n == 0 || n % 2 != 0 || k == 0 || k > n / 2 {
                    return fail(format!(
                        "require n even and 1 <= k <= n/2, got n={} k={}",
                        n, k
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of points in the support. Every family is uniform over it.
    pub fn support_size(&self) -> Result<BigUint> {
        self.validate()?;
        Ok(match *self {
            DistributionSpec::UniformExactK { n, k } => binomial(n as u64, k as u64),
            DistributionSpec::UniformAtMostK { n, k } => binomial_prefix_sum(n as u64, k as u64),
            DistributionSpec::UniformExactR { n, r } => binomial(n as u64, r as u64),
            DistributionSpec::HalfHardness { n, k } => BigUint::from((n - k + 1) as u64),
            DistributionSpec::BlockPartition { n, k } => BigUint::from((n / k) as u64),
            DistributionSpec::SubsetOfL2ExactK { n, k } => binomial((n / 2) as u64, k as u64),
        })
    }

    /// Draw one exact sample. Identical generator states produce identical
    /// samples, so callers own the reproducibility story.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<NodeSet> {
        self.validate()?;
        let n = self.n();
        let members: Vec<usize> = match *self {
            DistributionSpec::UniformExactK { n, k } => {
                rand::seq::index::sample(rng, n, k).into_vec()
            }
            DistributionSpec::UniformAtMostK { n, k } => {
                let j = draw_stratified_size(n, k, rng);
                rand::seq::index::sample(rng, n, j).into_vec()
            }
            DistributionSpec::UniformExactR { n, r } => {
                rand::seq::index::sample(rng, n, r).into_vec()
            }
            DistributionSpec::HalfHardness { n, k } => {
                let mut v: Vec<usize> = (0..k - 1).collect();
                v.push(k - 1 + rng.random_range(0..n - k + 1));
                v
            }
            DistributionSpec::BlockPartition { n, k } => {
                let b = rng.random_range(0..n / k);
                (b * k..(b + 1) * k).collect()
            }
            DistributionSpec::SubsetOfL2ExactK { n, k } => rand::seq::index::sample(rng, n / 2, k)
                .into_iter()
                .map(|i| i + n / 2)
                .collect(),
        };
        NodeSet::from_indices(Side::Left, n, &members)
    }

    /// Exact `Pr[u in S]`.
    pub fn inclusion_probability(&self, u: usize) -> Result<f64> {
        self.validate()?;
        if u >= self.n() {
            return Err(Error::validation(format!(
                "left index {} out of range (n {})",
                u,
                self.n()
            )));
        }
        Ok(match *self {
            DistributionSpec::UniformExactK { n, k } => k as f64 / n as f64,
            DistributionSpec::UniformAtMostK { n, k } => {
                let num = binomial_prefix_sum((n - 1) as u64, (k - 1) as u64);
                let den = binomial_prefix_sum(n as u64, k as u64);
                big_ratio_f64(&num, &den)
            }
            DistributionSpec::UniformExactR { n, r } => r as f64 / n as f64,
            DistributionSpec::HalfHardness { n, k } => {
                if u < k - 1 {
                    1.0
                } else {
                    1.0 / (n - k + 1) as f64
                }
            }
            DistributionSpec::BlockPartition { n, k } => k as f64 / n as f64,
            DistributionSpec::SubsetOfL2ExactK { n, k } => {
                if u < n / 2 {
                    0.0
                } else {
                    k as f64 / (n / 2) as f64
                }
            }
        })
    }

    /// Smallest inclusion probability over all ground-set nodes.
    pub fn min_inclusion_probability(&self) -> Result<f64> {
        let mut best = f64::INFINITY;
        for u in 0..self.n() {
            best = best.min(self.inclusion_probability(u)?);
        }
        Ok(best)
    }

    /// Exhaustive support with uniform probabilities, capped at
    /// [`DEFAULT_SUPPORT_CAP`] points.
    pub fn enumerate_support(&self) -> Result<Vec<(NodeSet, f64)>> {
        self.enumerate_support_capped(DEFAULT_SUPPORT_CAP)
    }

    pub fn enumerate_support_capped(&self, cap: u64) -> Result<Vec<(NodeSet, f64)>> {
        let size = self.support_size()?;
        if size > BigUint::from(cap) {
            return Err(Error::capacity(format!(
                "support size {} exceeds enumeration cap {}",
                size, cap
            )));
        }
        let count = size.to_u64().expect("support size fits u64 under cap") as usize;
        let p = 1.0 / count as f64;
        let n = self.n();
        let mut out: Vec<(NodeSet, f64)> = Vec::with_capacity(count);
        let push = |members: &[usize], out: &mut Vec<(NodeSet, f64)>| -> Result<()> {
            out.push((NodeSet::from_indices(Side::Left, n, members)?, p));
            Ok(())
        };
        match *self {
            DistributionSpec::UniformExactK { n, k } => {
                for c in combinations(0, n, k) {
                    push(&c, &mut out)?;
                }
            }
            DistributionSpec::UniformAtMostK { n, k } => {
                for j in 0..=k {
                    for c in combinations(0, n, j) {
                        push(&c, &mut out)?;
                    }
                }
            }
            DistributionSpec::UniformExactR { n, r } => {
                for c in combinations(0, n, r) {
                    push(&c, &mut out)?;
                }
            }
            DistributionSpec::HalfHardness { n, k } => {
                for w in k - 1..n {
                    let mut v: Vec<usize> = (0..k - 1).collect();
                    v.push(w);
                    push(&v, &mut out)?;
                }
            }
            DistributionSpec::BlockPartition { n, k } => {
                for b in 0..n / k {
                    let v: Vec<usize> = (b * k..(b + 1) * k).collect();
                    push(&v, &mut out)?;
                }
            }
            DistributionSpec::SubsetOfL2ExactK { n, k } => {
                for c in combinations(n / 2, n, k) {
                    push(&c, &mut out)?;
                }
            }
        }
        debug_assert_eq!(out.len(), count);
        Ok(out)
    }
}

fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// All size-`k` subsets of `[lo, hi)` in lexicographic order.
fn combinations(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, hi: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        for i in start..=hi.saturating_sub(needed) {
            cur.push(i);
            rec(i + 1, hi, k, cur, out);
            cur.pop();
        }
    }
    rec(lo, hi, k, &mut cur, &mut out);
    out
}

/// Size-stratified draw for the at-most-`k` family: size `j` is chosen with
/// probability `C(n,j) / sum_{i<=k} C(n,i)`, then a uniform `j`-subset follows.
fn draw_stratified_size<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> usize {
    // Weights can be enormous; normalize incrementally in f64 with rescaling.
    let mut weights = Vec::with_capacity(k + 1);
    let mut w = 1.0f64;
    weights.push(w);
    for j in 1..=k {
        w *= (n - j + 1) as f64 / j as f64;
        if !w.is_finite() {
            // Rescale everything accumulated so far.
            let scale = 1e-300;
            for x in weights.iter_mut() {
                *x *= scale;
            }
            w = weights.last().unwrap() * (n - j + 1) as f64 / j as f64;
        }
        weights.push(w);
    }
    let total: f64 = weights.iter().sum();
    let x = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (j, w) in weights.iter().enumerate() {
        acc += w;
        if x < acc {
            return j;
        }
    }
    k
}

/// Result of an exhaustive correlation or conditional-probability check.
///
/// `worst_violation` is the maximum signed slack over all tested pairs, so
/// `worst_violation <= 0` exactly when the property holds everywhere. In
/// float mode, slacks within [`FLOAT_VIOLATION_TOLERANCE`] of zero are
/// snapped to zero (the inequalities can hold with equality).
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub holds_everywhere: bool,
    pub worst_violation: f64,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub pairs_tested: u64,
}

/// Scalar abstraction so the checkers run in fast f64 mode and in the exact
/// rational reference mode with the same enumeration logic.
trait Prob: Clone + PartialOrd {
    fn zero() -> Self;
    fn from_ratio(num: u64, den: u64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn to_f64_lossy(&self) -> f64;
}

impl Prob for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Prob for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// `avoid[mask] = Pr[S and mask are disjoint]`, for every `mask`, built with
/// a subset-sum transform over the support point masses.
fn avoid_table<P: Prob>(n: usize, support: &[(u32, P)]) -> Vec<P> {
    let full = 1usize << n;
    // h[m] = Pr[S is a subset of m]
    let mut h = vec![P::zero(); full];
    for (mask, p) in support {
        let m = *mask as usize;
        h[m] = h[m].add(p);
    }
    for bit in 0..n {
        for m in 0..full {
            if m & (1 << bit) != 0 {
                h[m] = h[m].add(&h[m ^ (1 << bit)]);
            }
        }
    }
    // avoid[mask] = Pr[S subset of complement(mask)]
    (0..full).map(|m| h[(full - 1) ^ m].clone()).collect()
}

fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

fn support_masks<P: Prob>(spec: &DistributionSpec) -> Result<Vec<(u32, P)>> {
    let support = spec.enumerate_support()?;
    let size = support.len() as u64;
    Ok(support
        .iter()
        .map(|(set, _)| {
            let mut mask = 0u32;
            for i in set.iter() {
                mask |= 1 << i;
            }
            (mask, P::from_ratio(1, size))
        })
        .collect())
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::capacity(format!(
            "exhaustive check enumerates 3^n pairs; n={} exceeds limit {}",
            n, limit
        )));
    }
    Ok(())
}

fn negative_correlation_core<P: Prob>(
    n: usize,
    support: &[(u32, P)],
    snap_tolerance: Option<f64>,
) -> CorrelationReport {
    let avoid = avoid_table(n, support);
    let mut worst: Option<P> = None;
    let mut witness = None;
    let mut pairs = 0u64;
    let full = (1usize << n) - 1;
    for m in 1..=full {
        // Enumerate unordered splits of m into disjoint nonempty (I, J).
        let mut i = (m - 1) & m;
        while i > 0 {
            let j = m ^ i;
            if i < j {
                pairs += 1;
                let violation = avoid[m].sub(&avoid[i].mul(&avoid[j]));
                if worst.as_ref().map_or(true, |w| violation > *w) {
                    witness = Some((mask_to_indices(i as u32), mask_to_indices(j as u32)));
                    worst = Some(violation);
                }
            }
            i = (i - 1) & m;
        }
    }
    finish_report(worst, witness, pairs, snap_tolerance)
}

fn conditional_lemma_core<P: Prob>(
    n: usize,
    support: &[(u32, P)],
    snap_tolerance: Option<f64>,
) -> CorrelationReport {
    let avoid = avoid_table(n, support);
    let zero = P::zero();
    let mut worst: Option<P> = None;
    let mut witness = None;
    let mut pairs = 0u64;
    let full = (1usize << n) - 1;
    for j in 0..n {
        let jm = 1usize << j;
        let p_j = avoid[0].sub(&avoid[jm]); // avoid[0] is total mass (= 1)
        if !(p_j > zero) {
            continue;
        }
        // Iterate every I disjoint from {j}, including the empty set.
        let rest = full ^ jm;
        let mut i = rest;
        loop {
            pairs += 1;
            // Pr[hit(I) | X_j = 1] = (p_j - avoid[I] + avoid[I + {j}]) / p_j
            let conditional = p_j.sub(&avoid[i]).add(&avoid[i | jm]).div(&p_j);
            let unconditional = avoid[0].sub(&avoid[i]);
            let slack = conditional.sub(&unconditional);
            if worst.as_ref().map_or(true, |w| slack > *w) {
                witness = Some((mask_to_indices(i as u32), vec![j]));
                worst = Some(slack);
            }
            if i == 0 {
                break;
            }
            i = (i - 1) & rest;
        }
    }
    finish_report(worst, witness, pairs, snap_tolerance)
}

fn finish_report<P: Prob>(
    worst: Option<P>,
    witness: Option<(Vec<usize>, Vec<usize>)>,
    pairs: u64,
    snap_tolerance: Option<f64>,
) -> CorrelationReport {
    let mut worst_violation = worst.as_ref().map_or(0.0, |w| w.to_f64_lossy());
    if let Some(tol) = snap_tolerance {
        if worst_violation.abs() <= tol {
            worst_violation = 0.0;
        }
    }
    let holds = worst_violation <= 0.0;
    CorrelationReport {
        holds_everywhere: holds,
        worst_violation,
        witness: if holds { None } else { witness },
        pairs_tested: pairs,
    }
}

/// Exhaustively test the all-absent product inequality for every disjoint
/// nonempty pair `(I, J)`, in f64 with violation tolerance
/// [`FLOAT_VIOLATION_TOLERANCE`].
pub fn check_negative_correlation(spec: &DistributionSpec) -> Result<CorrelationReport> {
    check_negative_correlation_with_limit(spec, DEFAULT_CHECK_LIMIT_N)
}

pub fn check_negative_correlation_with_limit(
    spec: &DistributionSpec,
    limit: usize,
) -> Result<CorrelationReport> {
    check_limit(spec.n(), limit)?;
    let support: Vec<(u32, f64)> = support_masks(spec)?;
    Ok(negative_correlation_core(
        spec.n(),
        &support,
        Some(FLOAT_VIOLATION_TOLERANCE),
    ))
}

/// Exact-rational reference mode of [`check_negative_correlation`].
pub fn check_negative_correlation_exact(spec: &DistributionSpec) -> Result<CorrelationReport> {
    check_limit(spec.n(), DEFAULT_CHECK_LIMIT_N)?;
    let support: Vec<(u32, BigRational)> = support_masks(spec)?;
    Ok(negative_correlation_core(spec.n(), &support, None))
}

/// Same check against an explicit support (members, probability) table, for
/// distributions outside the declarative families.
pub fn check_negative_correlation_of_support(
    n: usize,
    support: &[(Vec<usize>, f64)],
) -> Result<CorrelationReport> {
    check_limit(n, DEFAULT_CHECK_LIMIT_N)?;
    let masked = explicit_support_masks(n, support)?;
    Ok(negative_correlation_core(
        n,
        &masked,
        Some(FLOAT_VIOLATION_TOLERANCE),
    ))
}

/// Exhaustively verify `Pr[any of I present | X_j = 1] <= Pr[any of I
/// present]` for every `I` and `j` outside `I` with positive marginal.
pub fn check_conditional_lemma(spec: &DistributionSpec) -> Result<CorrelationReport> {
    check_limit(spec.n(), DEFAULT_CHECK_LIMIT_N)?;
    let support: Vec<(u32, f64)> = support_masks(spec)?;
    Ok(conditional_lemma_core(
        spec.n(),
        &support,
        Some(FLOAT_VIOLATION_TOLERANCE),
    ))
}

/// Exact-rational reference mode of [`check_conditional_lemma`].
pub fn check_conditional_lemma_exact(spec: &DistributionSpec) -> Result<CorrelationReport> {
    check_limit(spec.n(), DEFAULT_CHECK_LIMIT_N)?;
    let support: Vec<(u32, BigRational)> = support_masks(spec)?;
    Ok(conditional_lemma_core(spec.n(), &support, None))
}

fn explicit_support_masks(n: usize, support: &[(Vec<usize>, f64)]) -> Result<Vec<(u32, f64)>> {
    let total: f64 = support.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "support probabilities sum to {}, expected 1",
            total
        )));
    }
    support
        .iter()
        .map(|(members, p)| {
            let mut mask = 0u32;
            for &i in members {
                if i >= n {
                    return Err(Error::validation(format!(
                        "support member {} out of range (n {})",
                        i, n
                    )));
                }
                mask |= 1 << i;
            }
            Ok((mask, *p))
        })
        .collect()
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::UniformExactK { n, k } => {
                write!(f, "uniform-exact-k n={} k={}", n, k)
            }
            DistributionSpec::UniformAtMostK { n, k } => {
                write!(f, "uniform-at-most-k n={} k={}", n, k)
            }
            DistributionSpec::UniformExactR { n, r } => {
                write!(f, "uniform-exact-r n={} r={}", n, r)
            }
            DistributionSpec::HalfHardness { n, k } => write!(f, "half-hardness n={} k={}", n, k),
            DistributionSpec::BlockPartition { n, k } => {
                write!(f, "block-partition n={} k={}", n, k)
            }
            DistributionSpec::SubsetOfL2ExactK { n, k } => {
                write!(f, "subset-of-l2-exact-k n={} k={}", n, k)
            }
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let mut tokens = lower.split_whitespace();
        let tag = tokens
            .next()
            .ok_or_else(|| Error::format("empty distribution spec"))?;
        let mut n: Option<usize> = None;
        let mut k: Option<usize> = None;
        let mut r: Option<usize> = None;
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::format(format!("expected key=value, got '{}'", tok)))?;
            let parsed: usize = value
                .parse()
                .map_err(|_| Error::format(format!("bad value in '{}'", tok)))?;
            match key {
                "n" => n = Some(parsed),
                "k" => k = Some(parsed),
                "r" => r = Some(parsed),
                other => {
                    return Err(Error::format(format!(
                        "unknown distribution parameter '{}'",
                        other
                    )))
                }
            }
        }
        let need_n = n.ok_or_else(|| Error::format("distribution spec missing n=<count>"))?;
        let need_k = || k.ok_or_else(|| Error::format("distribution spec missing k=<count>"));
        let spec = match tag {
            "uniform-exact-k" => DistributionSpec::UniformExactK {
                n: need_n,
                k: need_k()?,
            },
            "uniform-at-most-k" => DistributionSpec::UniformAtMostK {
                n: need_n,
                k: need_k()?,
            },
            "uniform-exact-r" => DistributionSpec::UniformExactR {
                n: need_n,
                r: r.ok_or_else(|| Error::format("uniform-exact-r requires r=<count>"))?,
            },
            "half-hardness" => DistributionSpec::HalfHardness {
                n: need_n,
                k: need_k()?,
            },
            "block-partition" => DistributionSpec::BlockPartition {
                n: need_n,
                k: need_k()?,
            },
            "subset-of-l2-exact-k" => DistributionSpec::SubsetOfL2ExactK {
                n: need_n,
                k: need_k()?,
            },
            other => {
                return Err(Error::format(format!(
                    "unknown distribution family '{}'",
                    other
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn draw_exact_k_full_set() {
        let spec = DistributionSpec::UniformExactK { n: 6, k: 6 };
        let s = spec.draw(&mut rng(0)).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn draw_half_hardness_shape() {
        let spec = DistributionSpec::HalfHardness { n: 5, k: 3 };
        let mut r = rng(7);
        for _ in 0..200 {
            let s = spec.draw(&mut r).unwrap();
            let v = s.to_vec();
            assert_eq!(v.len(), 3);
            assert_eq!(&v[..2], &[0, 1]);
            assert!(v[2] >= 2 && v[2] < 5);
        }
    }

    #[test]
    fn draw_block_partition_frequencies() {
        let spec = DistributionSpec::BlockPartition { n: 6, k: 2 };
        let mut r = rng(11);
        let mut counts = [0usize; 3];
        let trials = 10_000;
        for _ in 0..trials {
            let s = spec.draw(&mut r).unwrap();
            let v = s.to_vec();
            assert_eq!(v.len(), 2);
            assert_eq!(v[0] % 2, 0);
            assert_eq!(v[1], v[0] + 1);
            counts[v[0] / 2] += 1;
        }
        // each block has probability 1/3; allow 3 standard errors
        let se = (1.0 / 3.0 * 2.0 / 3.0 / trials as f64).sqrt();
        for &c in &counts {
            let freq = c as f64 / trials as f64;
            assert!((freq - 1.0 / 3.0).abs() < 3.0 * se, "freq {}", freq);
        }
    }

    #[test]
    fn draw_determinism() {
        let spec = DistributionSpec::UniformAtMostK { n: 12, k: 4 };
        let a: Vec<Vec<usize>> = {
            let mut r = rng(42);
            (0..50).map(|_| spec.draw(&mut r).unwrap().to_vec()).collect()
        };
        let b: Vec<Vec<usize>> = {
            let mut r = rng(42);
            (0..50).map(|_| spec.draw(&mut r).unwrap().to_vec()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn draw_sizes_respect_feasible_bound() {
        let cases = [
            DistributionSpec::UniformExactK { n: 9, k: 4 },
            DistributionSpec::UniformAtMostK { n: 9, k: 4 },
            DistributionSpec::UniformExactR { n: 9, r: 7 },
            DistributionSpec::HalfHardness { n: 9, k: 4 },
            DistributionSpec::BlockPartition { n: 9, k: 3 },
            DistributionSpec::SubsetOfL2ExactK { n: 10, k: 4 },
        ];
        let mut r = rng(3);
        for spec in &cases {
            for _ in 0..100 {
                let s = spec.draw(&mut r).unwrap();
                assert!(s.len() <= spec.feasible_bound(), "{}", spec);
                match spec {
                    DistributionSpec::UniformExactK { k, .. } => assert_eq!(s.len(), *k),
                    DistributionSpec::UniformExactR { r, .. } => assert_eq!(s.len(), *r),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn inclusion_probabilities() {
        let spec = DistributionSpec::UniformExactK { n: 10, k: 3 };
        assert_eq!(spec.inclusion_probability(4).unwrap(), 0.3);

        let spec = DistributionSpec::SubsetOfL2ExactK { n: 10, k: 3 };
        assert_eq!(spec.inclusion_probability(2).unwrap(), 0.0);
        assert_eq!(spec.inclusion_probability(7).unwrap(), 0.6);

        let spec = DistributionSpec::UniformAtMostK { n: 3, k: 1 };
        assert_eq!(spec.inclusion_probability(0).unwrap(), 0.25);

        let spec = DistributionSpec::HalfHardness { n: 5, k: 3 };
        assert_eq!(spec.inclusion_probability(1).unwrap(), 1.0);
        assert_eq!(spec.inclusion_probability(4).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn inclusion_matches_support_enumeration() {
        let cases = [
            DistributionSpec::UniformExactK { n: 7, k: 3 },
            DistributionSpec::UniformAtMostK { n: 7, k: 3 },
            DistributionSpec::UniformExactR { n: 6, r: 4 },
            DistributionSpec::HalfHardness { n: 7, k: 3 },
            DistributionSpec::BlockPartition { n: 8, k: 2 },
            DistributionSpec::SubsetOfL2ExactK { n: 8, k: 2 },
        ];
        for spec in &cases {
            let support = spec.enumerate_support().unwrap();
            for u in 0..spec.n() {
                let exact: f64 = support
                    .iter()
                    .filter(|(s, _)| s.contains(u))
                    .map(|(_, p)| p)
                    .sum();
                let got = spec.inclusion_probability(u).unwrap();
                assert!(
                    (exact - got).abs() < 1e-12,
                    "{} u={}: {} vs {}",
                    spec,
                    u,
                    got,
                    exact
                );
            }
        }
    }

    #[test]
    fn support_examples() {
        let spec = DistributionSpec::BlockPartition { n: 4, k: 2 };
        let sup = spec.enumerate_support().unwrap();
        assert_eq!(sup.len(), 2);
        assert_eq!(sup[0].0.to_vec(), vec![0, 1]);
        assert_eq!(sup[0].1, 0.5);
        assert_eq!(sup[1].0.to_vec(), vec![2, 3]);

        let spec = DistributionSpec::UniformExactK { n: 3, k: 1 };
        let sup = spec.enumerate_support().unwrap();
        assert_eq!(sup.len(), 3);
        for (i, (s, p)) in sup.iter().enumerate() {
            assert_eq!(s.to_vec(), vec![i]);
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }

        let spec = DistributionSpec::UniformAtMostK { n: 2, k: 1 };
        let sup = spec.enumerate_support().unwrap();
        let sets: Vec<Vec<usize>> = sup.iter().map(|(s, _)| s.to_vec()).collect();
        assert_eq!(sets, vec![vec![], vec![0], vec![1]]);
        for (_, p) in &sup {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn support_probabilities_sum_to_one() {
        let cases = [
            DistributionSpec::UniformExactK { n: 9, k: 4 },
            DistributionSpec::UniformAtMostK { n: 9, k: 4 },
            DistributionSpec::HalfHardness { n: 9, k: 4 },
            DistributionSpec::SubsetOfL2ExactK { n: 10, k: 4 },
        ];
        for spec in &cases {
            let total: f64 = spec.enumerate_support().unwrap().iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12, "{}", spec);
        }
    }

    #[test]
    fn support_cap_enforced() {
        let spec = DistributionSpec::UniformExactK { n: 40, k: 20 };
        let err = spec.enumerate_support().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("1000000"), "{}", msg);
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn nc_two_point_example() {
        // D_1 on two nodes: lhs Pr[S disjoint from {0,1}] = 0 <= 0.25 = rhs.
        let spec = DistributionSpec::UniformExactK { n: 2, k: 1 };
        let report = check_negative_correlation(&spec).unwrap();
        assert!(report.holds_everywhere);
        assert_eq!(report.pairs_tested, 1);
        assert!(report.worst_violation <= 0.0);
    }

    #[test]
    fn nc_block_partition_violation() {
        let spec = DistributionSpec::BlockPartition { n: 4, k: 2 };
        let report = check_negative_correlation(&spec).unwrap();
        assert!(!report.holds_everywhere);
        assert!((report.worst_violation - 0.25).abs() < 1e-12);
        let (i, j) = report.witness.unwrap();
        // worst pairs are singletons inside one block
        assert_eq!(i.len(), 1);
        assert_eq!(j.len(), 1);
        let exact = check_negative_correlation_exact(&spec).unwrap();
        assert!(!exact.holds_everywhere);
        assert!((exact.worst_violation - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nc_independent_product_is_equality() {
        // Independent fair-coin inclusion over 3 nodes: every pair holds with
        // equality, so the worst violation is exactly zero.
        let mut support = Vec::new();
        for mask in 0u32..8 {
            support.push((mask_to_indices(mask), 1.0 / 8.0));
        }
        let report = check_negative_correlation_of_support(3, &support).unwrap();
        assert!(report.holds_everywhere);
        assert_eq!(report.worst_violation, 0.0);
    }

    #[test]
    fn conditional_lemma_examples() {
        // D_1 on 3 nodes, I={0}, j=1: conditional 0 <= unconditional 1/3.
        let spec = DistributionSpec::UniformExactK { n: 3, k: 1 };
        let report = check_conditional_lemma(&spec).unwrap();
        assert!(report.holds_everywhere);

        // D_2 on 3 nodes, I={0}, j=1: conditional 1/2 <= unconditional 2/3.
        let spec = DistributionSpec::UniformExactK { n: 3, k: 2 };
        let support: Vec<(u32, f64)> = support_masks(&spec).unwrap();
        let avoid = avoid_table(3, &support);
        let p_j = avoid[0] - avoid[2]; // j = 1
        let conditional = (p_j - avoid[1] + avoid[1 | 2]) / p_j;
        let unconditional = avoid[0] - avoid[1];
        assert!((conditional - 0.5).abs() < 1e-12);
        assert!((unconditional - 2.0 / 3.0).abs() < 1e-12);
        assert!(check_conditional_lemma(&spec).unwrap().holds_everywhere);
    }

    #[test]
    fn uniform_families_negatively_correlated_small() {
        for n in 1..=10usize {
            for k in 1..=n {
                for spec in [
                    DistributionSpec::UniformExactK { n, k },
                    DistributionSpec::UniformAtMostK { n, k },
                ] {
                    let rep = check_negative_correlation(&spec).unwrap();
                    assert!(rep.holds_everywhere, "{} violates: {:?}", spec, rep.witness);
                    let lem = check_conditional_lemma(&spec).unwrap();
                    assert!(lem.holds_everywhere, "{} lemma fails", spec);
                }
            }
        }
    }

    #[test]
    fn check_capacity_limit() {
        let spec = DistributionSpec::UniformExactK { n: 11, k: 2 };
        assert_eq!(
            check_negative_correlation(&spec).unwrap_err().exit_code(),
            3
        );
    }

    #[test]
    fn spec_string_round_trip() {
        let cases = [
            "uniform-exact-k n=20 k=5",
            "uniform-at-most-k n=20 k=5",
            "uniform-exact-r n=20 r=9",
            "half-hardness n=50 k=11",
            "block-partition n=6 k=2",
            "subset-of-l2-exact-k n=20 k=3",
        ];
        for s in cases {
            let spec: DistributionSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        // parsing is case-insensitive and order-insensitive
        let spec: DistributionSpec = "Half-Hardness k=11 N=50".parse().unwrap();
        assert_eq!(spec.to_string(), "half-hardness n=50 k=11");
        assert!("uniform-exact-k n=3 k=9".parse::<DistributionSpec>().is_err());
        assert!("no-such-family n=3".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn monte_carlo_inclusion_frequencies() {
        let cases = [
            DistributionSpec::UniformExactK { n: 12, k: 4 },
            DistributionSpec::UniformAtMostK { n: 12, k: 4 },
            DistributionSpec::UniformExactR { n: 12, r: 9 },
            DistributionSpec::HalfHardness { n: 12, k: 4 },
            DistributionSpec::BlockPartition { n: 12, k: 3 },
            DistributionSpec::SubsetOfL2ExactK { n: 12, k: 3 },
        ];
        let trials = 100_000usize;
        for spec in &cases {
            let mut counts = vec![0usize; spec.n()];
            let mut r = rng(99);
            for _ in 0..trials {
                let s = spec.draw(&mut r).unwrap();
                for u in s.iter() {
                    counts[u] += 1;
                }
            }
            for u in 0..spec.n() {
                let p = spec.inclusion_probability(u).unwrap();
                let freq = counts[u] as f64 / trials as f64;
                let se = (p * (1.0 - p) / trials as f64).sqrt().max(1e-9);
                assert!(
                    (freq - p).abs() <= 4.0 * se + 1e-9,
                    "{} u={}: freq {} vs p {} (se {})",
                    spec,
                    u,
                    freq,
                    p,
                    se
                );
            }
        }
    }
}
