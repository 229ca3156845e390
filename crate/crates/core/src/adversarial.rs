//! Generators for the four hardness ensembles: graph families paired with
//! the sampling distribution that makes their hidden structure invisible.
//!
//! Each generator returns the matched distribution alongside the realized
//! graph, so experiments cannot pair a family with the wrong distribution.
//! Right-node layout is canonical: shared or hidden coverage blocks occupy
//! the lowest indices, private blocks follow in left-node order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngExt};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Deterministic prefix distribution; one prefix node secretly carries
    /// the shared coverage block.
    HalfHardness,
    /// Oversized uniform samples over a good/bad block partition.
    Infeasible,
    /// Samples confined to the uncovered half of the ground set.
    Assumption2,
    /// Block-partition sampling with one hidden covering node per block.
    Assumption3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::HalfHardness => "half-hardness",
            Family::Infeasible => "infeasible",
            Family::Assumption2 => "assumption2",
            Family::Assumption3 => "assumption3",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "half-hardness" => Ok(Family::HalfHardness),
            "infeasible" => Ok(Family::Infeasible),
            "assumption2" => Ok(Family::Assumption2),
            "assumption3" => Ok(Family::Assumption3),
            other => Err(Error::format(format!("unknown family '{}'", other))),
        }
    }
}

/// The secret the sampler cannot see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hidden {
    /// A single hidden index (covering node, or good block).
    Index(usize),
    /// One hidden covering node per block.
    PerBlock(Vec<usize>),
}

/// A realized hidden graph, its matched distribution, the secret, and the
/// closed-form optimum under the size constraint.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub graph: BipartiteGraph,
    pub dist: DistributionSpec,
    pub hidden: Hidden,
    pub opt_value: usize,
    pub family: Family,
}

/// One covering node hidden among the always-sampled prefix.
///
/// Left nodes `[0, k-1)` form the prefix; node `hidden_i` covers a shared
/// block of `(k-1)*r` right nodes and the other prefix nodes cover nothing.
/// Each remaining node covers `r` private right nodes, identically across
/// all choices of `hidden_i`, so samples carry no information about it.
/// The optimum takes the hidden node plus `k-1` private blocks: `2(k-1)*r`.
pub fn gen_half_hardness(
    n: usize,
    k: usize,
    r: usize,
    hidden_i: usize,
) -> Result<HardnessInstance> {
    if k < 2 || k > n || r == 0 {
        return Err(Error::validation(format!(
            "require 2 <= k <= n and r >= 1, got n={} k={} r={}",
            n, k, r
        )));
    }
    if n < 2 * k - 2 {
        return Err(Error::validation(format!(
            "require n >= 2k-2 so the optimum can take k-1 private blocks, got n={} k={}",
            n, k
        )));
    }
    if hidden_i >= k - 1 {
        return Err(Error::validation(format!(
            "hidden index {} must lie in the prefix [0, {})",
            hidden_i,
            k - 1
        )));
    }
    let shared = (k - 1) * r;
    let m = shared + (n - k + 1) * r;
    let mut adjacency = vec![Vec::new(); n];
    adjacency[hidden_i] = (0..shared).collect();
    for (slot, u) in (k - 1..n).enumerate() {
        let start = shared + slot * r;
        adjacency[u] = (start..start + r).collect();
    }
    Ok(HardnessInstance {
        graph: BipartiteGraph::from_adjacency(n, m, adjacency)?,
        dist: DistributionSpec::HalfHardness { n, k },
        hidden: Hidden::Index(hidden_i),
        opt_value: 2 * (k - 1) * r,
        family: Family::HalfHardness,
    })
}

/// Oversized samples (size `r`, constraint `k << r`) over `p` equal blocks;
/// every node of the good block covers all of `R`, the rest cover nothing.
/// Samples almost always touch the good block, so they report the full right
/// set and reveal nothing. `m` defaults to `n`.
///
/// The separation regime wants `r` far above `k ln^2 n`; desk-scale runs use
/// smaller values, which the CLI reports next to the intended regime.
pub fn gen_infeasible_family(
    n: usize,
    k: usize,
    r: usize,
    p: usize,
    good_block: usize,
    m: Option<usize>,
) -> Result<HardnessInstance> {
    if p == 0 || n == 0 || n % p != 0 {
        return Err(Error::validation(format!(
            "require p >= 1 and p | n, got n={} p={}",
            n, p
        )));
    }
    if good_block >= p {
        return Err(Error::validation(format!(
            "good block {} must lie in [0, {})",
            good_block, p
        )));
    }
    if k == 0 || k > n || r == 0 || r > n {
        return Err(Error::validation(format!(
            "require 1 <= k <= n and 1 <= r <= n, got k={} r={}",
            k, r
        )));
    }
    let m = m.unwrap_or(n);
    if m == 0 {
        return Err(Error::validation("m must be at least 1"));
    }
    let q = n / p;
    let full: Vec<usize> = (0..m).collect();
    let mut adjacency = vec![Vec::new(); n];
    for u in good_block * q..(good_block + 1) * q {
        adjacency[u] = full.clone();
    }
    Ok(HardnessInstance {
        graph: BipartiteGraph::from_adjacency(n, m, adjacency)?,
        dist: DistributionSpec::UniformExactR { n, r },
        hidden: Hidden::Index(good_block),
        opt_value: m,
        family: Family::Infeasible,
    })
}

/// Samples never touch the first half of the ground set, where a single
/// hidden node covers all of `R`; every sample reports an empty covered set.
pub fn gen_assumption2_family(
    n: usize,
    m: usize,
    k: usize,
    hidden_u: usize,
) -> Result<HardnessInstance> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::validation(format!("require n even, got n={}", n)));
    }
    if hidden_u >= n / 2 {
        return Err(Error::validation(format!(
            "hidden node {} must lie in the first half [0, {})",
            hidden_u,
            n / 2
        )));
    }
    if m == 0 || k == 0 || k > n / 2 {
        return Err(Error::validation(format!(
            "require m >= 1 and 1 <= k <= n/2, got m={} k={}",
            m, k
        )));
    }
    let mut adjacency = vec![Vec::new(); n];
    adjacency[hidden_u] = (0..m).collect();
    Ok(HardnessInstance {
        graph: BipartiteGraph::from_adjacency(n, m, adjacency)?,
        dist: DistributionSpec::SubsetOfL2ExactK { n, k },
        hidden: Hidden::Index(hidden_u),
        opt_value: m,
        family: Family::Assumption2,
    })
}

/// Block-partition sampling over `n/k` consecutive blocks; in each block one
/// uniformly random node covers `r` private right nodes and the rest cover
/// nothing. Block coverage sets are pairwise disjoint, `m = (n/k)*r`, and the
/// optimum picks one hidden node from each of `k` blocks: `k*r`.
pub fn gen_assumption3_instance<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    r: usize,
    rng: &mut R,
) -> Result<HardnessInstance> {
    if k == 0 || n == 0 || n % k != 0 || r == 0 {
        return Err(Error::validation(format!(
            "require k >= 1, k | n, r >= 1, got n={} k={} r={}",
            n, k, r
        )));
    }
    let blocks = n / k;
    if blocks < k {
        return Err(Error::validation(format!(
            "require n/k >= k blocks so the optimum can fill its budget, got n={} k={}",
            n, k
        )));
    }
    let m = blocks * r;
    let mut adjacency = vec![Vec::new(); n];
    let mut hidden = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let u = b * k + rng.random_range(0..k);
        adjacency[u] = (b * r..(b + 1) * r).collect();
        hidden.push(u);
    }
    Ok(HardnessInstance {
        graph: BipartiteGraph::from_adjacency(n, m, adjacency)?,
        dist: DistributionSpec::BlockPartition { n, k },
        hidden: Hidden::PerBlock(hidden),
        opt_value: k * r,
        family: Family::Assumption3,
    })
}
