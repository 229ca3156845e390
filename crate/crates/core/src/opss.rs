//! Surrogate-graph reconstruction from structured samples and the three
//! sample-based maximization algorithms.
//!
//! The surrogate estimates each left node's coverage as the intersection of
//! the covered sets of every sample containing it. The true neighbor set is
//! always a subset of this estimate, so the surrogate is an edge-superset of
//! the hidden graph. A node absent from every sample keeps the full right
//! set, which preserves that superset property.

use fixedbitset::FixedBitSet;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeSet, Side};
use crate::sample::SampleLog;
use crate::solver::MaxCoverSolver;

/// Reconstructed graph plus per-node appearance counts.
#[derive(Debug, Clone)]
pub struct Surrogate {
    pub graph: BipartiteGraph,
    /// `t_u`: number of samples containing each left node.
    pub appearance_counts: Vec<usize>,
}

/// Which of the two candidate solutions the fair coin selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    T1,
    T2,
}

/// Output of one algorithm run: both candidates, the returned set, and the
/// coin branch where one was drawn.
#[derive(Debug, Clone)]
pub struct OpssOutcome {
    pub t1: NodeSet,
    pub t2: NodeSet,
    pub returned: NodeSet,
    pub coin: Option<Branch>,
    pub surrogate_value_of_t2: usize,
}

/// Per-node intersection of covered sets, in a single pass over the log.
pub fn build_surrogate(log: &SampleLog) -> Result<Surrogate> {
    log.validate()?;
    let n = log.n_left;
    let m = log.n_right;
    let mut acc: Vec<Option<FixedBitSet>> = vec![None; n];
    let mut counts = vec![0usize; n];
    for sample in &log.samples {
        for u in sample.set.iter() {
            counts[u] += 1;
            match &mut acc[u] {
                Some(bits) => bits.intersect_with(sample.covered.bits()),
                slot => *slot = Some(sample.covered.bits().clone()),
            }
        }
    }
    let unsampled = counts.iter().filter(|&&c| c == 0).count();
    if unsampled > 0 {
        log::warn!(
            "{} left node(s) appear in no sample; assigning the full right set",
            unsampled
        );
    }
    let bits: Vec<FixedBitSet> = acc
        .into_iter()
        .map(|slot| {
            slot.unwrap_or_else(|| {
                let mut full = FixedBitSet::with_capacity(m);
                full.insert_range(..);
                full
            })
        })
        .collect();
    Ok(Surrogate {
        graph: BipartiteGraph::from_neighbor_bits(n, m, bits)?,
        appearance_counts: counts,
    })
}

fn warn_on_infeasible_samples(log: &SampleLog, k: usize) {
    let oversized = log.samples.iter().filter(|s| s.set.len() > k).count();
    if oversized > 0 {
        log::warn!(
            "{} of {} samples exceed the constraint k={}; the guarantee assumes feasible samples",
            oversized,
            log.len(),
            k
        );
    }
}

/// General algorithm: return the first sample or the solver's solution on
/// the surrogate, by a fair coin. The coin is drawn after both candidates
/// are computed, so the candidates are seed-stable regardless of the branch.
pub fn algorithm_general<S, R>(
    log: &SampleLog,
    k: usize,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    let surrogate = build_surrogate(log)?;
    algorithm_general_on(log, &surrogate, k, solver, rng)
}

/// [`algorithm_general`] against a prebuilt surrogate.
pub fn algorithm_general_on<S, R>(
    log: &SampleLog,
    surrogate: &Surrogate,
    k: usize,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    log.validate()?;
    warn_on_infeasible_samples(log, k);
    let t1 = log.samples[0].set.clone();
    let solved = solver.solve(&surrogate.graph, k)?;
    let t2 = solved.chosen;
    let coin = if rng.random_bool(0.5) {
        Branch::T1
    } else {
        Branch::T2
    };
    let returned = match coin {
        Branch::T1 => t1.clone(),
        Branch::T2 => t2.clone(),
    };
    Ok(OpssOutcome {
        t1,
        t2,
        returned,
        coin: Some(coin),
        surrogate_value_of_t2: solved.value,
    })
}

/// Exact-size-`k` algorithm: a fresh uniform set of size `floor(eps*k/2)`
/// unioned with the solver's solution at budget `floor((1 - eps/2)*k)`.
pub fn algorithm_uniform_k<S, R>(
    log: &SampleLog,
    k: usize,
    eps: f64,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    let surrogate = build_surrogate(log)?;
    algorithm_uniform_k_on(log, &surrogate, k, eps, solver, rng)
}

pub fn algorithm_uniform_k_on<S, R>(
    log: &SampleLog,
    surrogate: &Surrogate,
    k: usize,
    eps: f64,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    log.validate()?;
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(Error::validation(format!(
            "eps must lie in (0, 1), got {}",
            eps
        )));
    }
    if !matches!(log.dist, crate::dist::DistributionSpec::UniformExactK { .. }) {
        log::warn!(
            "log was generated under '{}', not a uniform exact-size distribution",
            log.dist
        );
    }
    // Theorem hypotheses, not runtime requirements: warn when outside them.
    let n = log.n_left;
    let ln_n = (n as f64).ln();
    if (k as f64) < ln_n * ln_n || 2 * k > n {
        log::warn!(
            "guarantee assumes ln^2(n) <= k <= n/2; here n={} k={}",
            n,
            k
        );
    }
    let m_bound = eps / 2.0 * (n as f64).powf(eps * ln_n / 8.0);
    if (log.n_right as f64) > m_bound {
        log::warn!(
            "guarantee assumes m <= (eps/2) * n^(eps*ln(n)/8) = {:.3e}; here m={}",
            m_bound,
            log.n_right
        );
    }
    let t1_size = (eps * k as f64 / 2.0).floor() as usize;
    if t1_size == 0 {
        return Err(Error::validation(format!(
            "floor(eps*k/2) = 0 for eps={} k={}; increase eps or k",
            eps, k
        )));
    }
    let budget = ((1.0 - eps / 2.0) * k as f64).floor() as usize;
    // The fresh draw is independent of the sample log by construction: the
    // caller supplies a generator the log generation never touched.
    let t1_indices = rand::seq::index::sample(rng, n, t1_size).into_vec();
    let t1 = NodeSet::from_indices(Side::Left, n, &t1_indices)?;
    let (t2, surrogate_value) = if budget == 0 {
        (NodeSet::empty(Side::Left, n), 0)
    } else {
        let solved = solver.solve(&surrogate.graph, budget)?;
        (solved.chosen, solved.value)
    };
    let returned = t1.union(&t2)?;
    debug_assert!(returned.len() <= k);
    Ok(OpssOutcome {
        t1,
        t2,
        returned,
        coin: None,
        surrogate_value_of_t2: surrogate_value,
    })
}

/// Large-sample variant for fixed-size-`r` samples with `r >= k`: run the
/// general algorithm's two candidates, take the fair-coin choice, and if it
/// exceeds `k`, downsample it to exactly `k` uniformly without replacement.
pub fn algorithm_large_sample<S, R>(
    log: &SampleLog,
    k: usize,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    let surrogate = build_surrogate(log)?;
    algorithm_large_sample_on(log, &surrogate, k, solver, rng)
}

pub fn algorithm_large_sample_on<S, R>(
    log: &SampleLog,
    surrogate: &Surrogate,
    k: usize,
    solver: &S,
    rng: &mut R,
) -> Result<OpssOutcome>
where
    S: MaxCoverSolver + ?Sized,
    R: Rng + ?Sized,
{
    log.validate()?;
    let first_size = log.samples[0].set.len();
    if log.samples.iter().any(|s| s.set.len() != first_size) {
        log::warn!("samples do not share a fixed size; expected draws from a fixed-size family");
    }
    if first_size < k {
        log::warn!(
            "sample size {} is below the constraint k={}; downsampling never triggers",
            first_size,
            k
        );
    }
    let t1 = log.samples[0].set.clone();
    let solved = solver.solve(&surrogate.graph, k)?;
    let t2 = solved.chosen;
    let coin = if rng.random_bool(0.5) {
        Branch::T1
    } else {
        Branch::T2
    };
    let picked = match coin {
        Branch::T1 => &t1,
        Branch::T2 => &t2,
    };
    let returned = if picked.len() > k {
        let members = picked.to_vec();
        let keep = rand::seq::index::sample(rng, members.len(), k);
        let kept: Vec<usize> = keep.into_iter().map(|i| members[i]).collect();
        NodeSet::from_indices(Side::Left, log.n_left, &kept)?
    } else {
        picked.clone()
    };
    debug_assert!(returned.len() <= k);
    Ok(OpssOutcome {
        t1,
        t2,
        returned,
        coin: Some(coin),
        surrogate_value_of_t2: solved.value,
    })
}

/// `union over u of (surrogate neighbors of u minus true neighbors of u)`:
/// the set of right nodes any surrogate adjacency overestimates. Requires
/// ground truth, so this is a test and diagnostic operation.
pub fn surrogate_error_set(g_true: &BipartiteGraph, s: &Surrogate) -> Result<NodeSet> {
    if g_true.n_left() != s.graph.n_left() || g_true.n_right() != s.graph.n_right() {
        return Err(Error::validation(format!(
            "surrogate dimensions {}x{} do not match graph {}x{}",
            s.graph.n_left(),
            s.graph.n_right(),
            g_true.n_left(),
            g_true.n_right()
        )));
    }
    let mut err = FixedBitSet::with_capacity(g_true.n_right());
    let mut scratch = FixedBitSet::with_capacity(g_true.n_right());
    for u in 0..g_true.n_left() {
        scratch.clone_from(s.graph.neighbor_bits(u));
        scratch.difference_with(g_true.neighbor_bits(u));
        err.union_with(&scratch);
    }
    Ok(NodeSet::from_bits(Side::Right, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistributionSpec;
    use crate::sample::Sample;
    use crate::solver::SolverKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g0() -> BipartiteGraph {
        BipartiteGraph::from_adjacency(3, 4, vec![vec![0, 1], vec![1, 2], vec![3]]).unwrap()
    }

    fn left(n: usize, members: &[usize]) -> NodeSet {
        NodeSet::from_indices(Side::Left, n, members).unwrap()
    }

    /// The worked three-sample log on g0.
    fn three_sample_log() -> SampleLog {
        let g = g0();
        let sets = [vec![0, 1], vec![0], vec![1, 2]];
        let samples: Vec<Sample> = sets
            .iter()
            .map(|s| {
                let set = left(3, s);
                let covered = g.neighbors(&set).unwrap();
                Sample { set, covered }
            })
            .collect();
        SampleLog {
            n_left: 3,
            n_right: 4,
            k: 2,
            dist: DistributionSpec::UniformAtMostK { n: 3, k: 2 },
            seed: 0,
            samples,
        }
    }

    #[test]
    fn surrogate_intersections() {
        let sur = build_surrogate(&three_sample_log()).unwrap();
        assert_eq!(sur.graph.adjacency(0).unwrap(), &[0, 1]);
        assert_eq!(sur.graph.adjacency(1).unwrap(), &[1, 2]);
        // node 2 only appears with node 1, so its estimate overshoots {3}
        assert_eq!(sur.graph.adjacency(2).unwrap(), &[1, 2, 3]);
        assert_eq!(sur.appearance_counts, vec![2, 2, 1]);
    }

    #[test]
    fn unsampled_node_gets_full_right_set() {
        let g = g0();
        let set = left(3, &[0]);
        let covered = g.neighbors(&set).unwrap();
        let log = SampleLog {
            n_left: 3,
            n_right: 4,
            k: 2,
            dist: DistributionSpec::UniformAtMostK { n: 3, k: 2 },
            seed: 0,
            samples: vec![Sample { set, covered }],
        };
        let sur = build_surrogate(&log).unwrap();
        assert_eq!(sur.graph.adjacency(1).unwrap(), &[0, 1, 2, 3]);
        assert_eq!(sur.graph.adjacency(2).unwrap(), &[0, 1, 2, 3]);
        assert_eq!(sur.appearance_counts, vec![1, 0, 0]);
    }

    #[test]
    fn singleton_sample_pins_the_estimate() {
        let g = g0();
        let mut log = three_sample_log();
        let set = left(3, &[2]);
        let covered = g.neighbors(&set).unwrap();
        log.samples.push(Sample { set, covered });
        let sur = build_surrogate(&log).unwrap();
        assert_eq!(sur.graph.adjacency(2).unwrap(), &[3]);
    }

    #[test]
    fn error_set_of_worked_example() {
        let g = g0();
        let sur = build_surrogate(&three_sample_log()).unwrap();
        let err = surrogate_error_set(&g, &sur).unwrap();
        assert_eq!(err.to_vec(), vec![1, 2]);
        // containment: the error set lies inside the first sample's coverage
        let n_s1 = g.neighbors(&left(3, &[0, 1])).unwrap();
        assert!(err.is_subset(&n_s1));
    }

    #[test]
    fn perfect_surrogate_has_empty_error_set() {
        let g = g0();
        let samples: Vec<Sample> = (0..3)
            .map(|u| {
                let set = left(3, &[u]);
                let covered = g.neighbors(&set).unwrap();
                Sample { set, covered }
            })
            .collect();
        let log = SampleLog {
            n_left: 3,
            n_right: 4,
            k: 2,
            dist: DistributionSpec::UniformAtMostK { n: 3, k: 2 },
            seed: 0,
            samples,
        };
        let sur = build_surrogate(&log).unwrap();
        assert_eq!(sur.graph, g);
        assert!(surrogate_error_set(&g, &sur).unwrap().is_empty());
    }

    #[test]
    fn general_algorithm_candidates() {
        let log = three_sample_log();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = algorithm_general(&log, 2, &SolverKind::Exact, &mut rng).unwrap();
        assert_eq!(out.t1.to_vec(), vec![0, 1]);
        // exact solver on the surrogate: {0,2} covers all four right nodes
        assert_eq!(out.t2.to_vec(), vec![0, 2]);
        assert_eq!(out.surrogate_value_of_t2, 4);
        let g = g0();
        let sur = build_surrogate(&log).unwrap();
        let err = surrogate_error_set(&g, &sur).unwrap();
        assert!(err.is_subset(&g.neighbors(&out.t1).unwrap()));
        // candidates are coin-independent
        for seed in 0..8 {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let o = algorithm_general(&log, 2, &SolverKind::Exact, &mut r).unwrap();
            assert_eq!(o.t1, out.t1);
            assert_eq!(o.t2, out.t2);
            let expect = match o.coin.unwrap() {
                Branch::T1 => &o.t1,
                Branch::T2 => &o.t2,
            };
            assert_eq!(&o.returned, expect);
        }
    }

    #[test]
    fn coin_expectation_matches_monte_carlo() {
        let g = g0();
        let log = three_sample_log();
        let sur = build_surrogate(&log).unwrap();
        let f1 = g.coverage_value(&left(3, &[0, 1])).unwrap() as f64;
        let solved = SolverKind::Exact.solve(&sur.graph, 2).unwrap();
        let f2 = g.coverage_value(&solved.chosen).unwrap() as f64;
        let exact = (f1 + f2) / 2.0;
        let trials = 20_000;
        let mut total = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..trials {
            let out = algorithm_general_on(&log, &sur, 2, &SolverKind::Exact, &mut rng).unwrap();
            total += g.coverage_value(&out.returned).unwrap() as f64;
        }
        let mc = total / trials as f64;
        // spread of the two branch values, three standard errors
        let spread = (f1 - f2).abs() / 2.0;
        let se = spread / (trials as f64).sqrt();
        assert!((mc - exact).abs() <= 3.0 * se + 1e-9, "{} vs {}", mc, exact);
    }

    #[test]
    fn uniform_k_budgets_and_feasibility() {
        let g = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            BipartiteGraph::random(20, 10, 0.3, &mut rng).unwrap()
        };
        let dist = DistributionSpec::UniformExactK { n: 20, k: 6 };
        let log = SampleLog::generate(&g, &dist, 6, 200, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = algorithm_uniform_k(&log, 6, 0.5, &SolverKind::Greedy, &mut rng).unwrap();
        // floor(0.5*6/2) = 1 fresh node, budget floor(0.75*6) = 4
        assert_eq!(out.t1.len(), 1);
        assert!(out.t2.len() <= 4);
        assert!(out.returned.len() <= 6);
        assert!(out.coin.is_none());

        // degenerate eps
        let err = algorithm_uniform_k(&log, 6, 0.1, &SolverKind::Greedy, &mut rng).unwrap_err();
        assert!(err.to_string().contains("floor"));
        assert!(algorithm_uniform_k(&log, 6, 0.0, &SolverKind::Greedy, &mut rng).is_err());
        assert!(algorithm_uniform_k(&log, 6, 1.0, &SolverKind::Greedy, &mut rng).is_err());
    }

    #[test]
    fn uniform_k_with_perfect_surrogate_keeps_solver_value() {
        let g = g0();
        let mut samples: Vec<Sample> = (0..3)
            .map(|u| {
                let set = left(3, &[u]);
                let covered = g.neighbors(&set).unwrap();
                Sample { set, covered }
            })
            .collect();
        samples.push(samples[0].clone());
        let log = SampleLog {
            n_left: 3,
            n_right: 4,
            k: 3,
            dist: DistributionSpec::UniformExactK { n: 3, k: 1 },
            seed: 0,
            samples,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let out = algorithm_uniform_k(&log, 3, 0.9, &SolverKind::Exact, &mut rng).unwrap();
        assert!(out.returned.len() <= 3);
        assert!(out.t2.is_subset(&out.returned));
        let budget = ((1.0 - 0.45) * 3.0f64).floor() as usize;
        let direct = SolverKind::Exact.solve(&g, budget).unwrap();
        assert!(g.coverage_value(&out.returned).unwrap() >= direct.value);
    }

    #[test]
    fn large_sample_identity_when_r_equals_k() {
        let g = {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            BipartiteGraph::random(12, 8, 0.3, &mut rng).unwrap()
        };
        let dist = DistributionSpec::UniformExactR { n: 12, r: 4 };
        let log = SampleLog::generate(&g, &dist, 4, 60, 2).unwrap();
        for seed in 0..10 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            let a = algorithm_large_sample(&log, 4, &SolverKind::Greedy, &mut r1).unwrap();
            let b = algorithm_general(&log, 4, &SolverKind::Greedy, &mut r2).unwrap();
            assert_eq!(a.returned, b.returned);
            assert_eq!(a.coin, b.coin);
        }
    }

    #[test]
    fn large_sample_downsamples_oversized_branch() {
        let g = {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            BipartiteGraph::random(12, 8, 0.3, &mut rng).unwrap()
        };
        let dist = DistributionSpec::UniformExactR { n: 12, r: 7 };
        let log = SampleLog::generate(&g, &dist, 3, 60, 2).unwrap();
        let mut seen_t1_branch = false;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = algorithm_large_sample(&log, 3, &SolverKind::Greedy, &mut rng).unwrap();
            assert!(out.returned.len() <= 3);
            if out.coin == Some(Branch::T1) {
                seen_t1_branch = true;
                assert_eq!(out.returned.len(), 3);
                assert!(out.returned.is_subset(&out.t1));
            } else {
                assert_eq!(out.returned, out.t2);
            }
        }
        assert!(seen_t1_branch);
    }

    #[test]
    fn downsampling_average_beats_proportional_bound() {
        // Exhaustive average of coverage over all k-subsets of a fixed set is
        // at least (k/r) times the full set's coverage, exactly in integers.
        let g = BipartiteGraph::from_adjacency(
            6,
            9,
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![3],
                vec![3, 4, 5],
                vec![6],
                vec![7, 8],
            ],
        )
        .unwrap();
        let t1: Vec<usize> = (0..6).collect();
        let full = g.coverage_value(&left(6, &t1)).unwrap();
        let k = 3usize;
        let subsets = all_k_subsets(&t1, k);
        assert_eq!(subsets.len(), 20);
        let total: usize = subsets
            .iter()
            .map(|s| g.coverage_value(&left(6, s)).unwrap())
            .sum();
        // avg >= (k/r) * full  <=>  r * total >= k * count * full
        assert!(t1.len() * total >= k * subsets.len() * full);
    }

    pub(crate) fn all_k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            items: &[usize],
            start: usize,
            k: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..items.len() {
                cur.push(items[i]);
                rec(items, i + 1, k, cur, out);
                cur.pop();
            }
        }
        rec(items, 0, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn superset_invariant_and_antitone_append() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let g = BipartiteGraph::random(8, 8, 0.35, &mut rng).unwrap();
            let dist = DistributionSpec::UniformAtMostK { n: 8, k: 3 };
            let log = SampleLog::generate_with(&g, &dist, 3, 40, 0, &mut rng).unwrap();
            let mut prefix = log.clone();
            prefix.samples.truncate(10);
            let sur_small = build_surrogate(&prefix).unwrap();
            let sur_full = build_surrogate(&log).unwrap();
            for u in 0..8 {
                // true neighbors are always inside the estimate
                assert!(g
                    .neighbor_bits(u)
                    .is_subset(sur_full.graph.neighbor_bits(u)));
                // appending samples only shrinks the estimate
                assert!(sur_full
                    .graph
                    .neighbor_bits(u)
                    .is_subset(sur_small.graph.neighbor_bits(u)));
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = g0();
        let other = BipartiteGraph::from_adjacency(3, 5, vec![vec![0], vec![], vec![]]).unwrap();
        let log = three_sample_log();
        let sur = build_surrogate(&log).unwrap();
        assert!(surrogate_error_set(&other, &sur).is_err());
        assert!(surrogate_error_set(&g, &sur).is_ok());
    }
}
