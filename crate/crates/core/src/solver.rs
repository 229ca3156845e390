//! Max-coverage solvers: eager greedy, lazy (CELF-style) greedy, and an
//! exhaustive optimal oracle for small instances.
//!
//! All three are deterministic. Ties break toward the lowest left index
//! everywhere, and greedy stops early once the best marginal gain is zero,
//! so experiment logs are reproducible bit for bit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeSet, Side};
use crate::prob::binomial_prefix_sum;

/// Default cap on the number of subsets the exhaustive oracle will visit.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub chosen: NodeSet,
    pub value: usize,
    /// Number of marginal-gain (or subset) evaluations performed.
    pub evaluations: usize,
}

/// A max-coverage solver `(graph, budget) -> SolverResult`. The surrogate
/// optimization step accepts any implementor.
pub trait MaxCoverSolver {
    fn solve(&self, g: &BipartiteGraph, budget: usize) -> Result<SolverResult>;
}

impl<F> MaxCoverSolver for F
where
    F: Fn(&BipartiteGraph, usize) -> Result<SolverResult>,
{
    fn solve(&self, g: &BipartiteGraph, budget: usize) -> Result<SolverResult> {
        self(g, budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Greedy,
    Lazy,
    Exact,
}

impl MaxCoverSolver for SolverKind {
    fn solve(&self, g: &BipartiteGraph, budget: usize) -> Result<SolverResult> {
        match self {
            SolverKind::Greedy => greedy_max_coverage(g, budget),
            SolverKind::Lazy => lazy_greedy_max_coverage(g, budget),
            SolverKind::Exact => exhaustive_max_coverage(g, budget),
        }
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(SolverKind::Greedy),
            "lazy" => Ok(SolverKind::Lazy),
            "exact" => Ok(SolverKind::Exact),
            other => Err(Error::format(format!("unknown solver '{}'", other))),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Greedy => "greedy",
            SolverKind::Lazy => "lazy",
            SolverKind::Exact => "exact",
        })
    }
}

fn check_budget(g: &BipartiteGraph, budget: usize) -> Result<()> {
    if budget == 0 || budget > g.n_left() {
        return Err(Error::validation(format!(
            "budget {} out of range [1, {}]",
            budget,
            g.n_left()
        )));
    }
    Ok(())
}

/// Standard greedy: add the left node of maximal marginal gain, lowest index
/// on ties, stopping early when the best gain is zero.
pub fn greedy_max_coverage(g: &BipartiteGraph, budget: usize) -> Result<SolverResult> {
    check_budget(g, budget)?;
    let mut chosen = NodeSet::empty(Side::Left, g.n_left());
    let mut covered = NodeSet::empty(Side::Right, g.n_right());
    let mut value = 0usize;
    let mut evaluations = 0usize;
    for _ in 0..budget {
        let mut best: Option<(usize, usize)> = None; // (gain, node)
        for u in 0..g.n_left() {
            if chosen.contains(u) {
                continue;
            }
            evaluations += 1;
            let gain = g.marginal_gain(&covered, u)?;
            if best.map_or(true, |(bg, _)| gain > bg) {
                best = Some((gain, u));
            }
        }
        match best {
            Some((gain, u)) if gain > 0 => {
                chosen.insert(u)?;
                covered.bits_mut().union_with(g.neighbor_bits(u));
                value += gain;
            }
            _ => break,
        }
    }
    debug_assert_eq!(value, g.coverage_value(&chosen)?);
    Ok(SolverResult {
        chosen,
        value,
        evaluations,
    })
}

#[derive(PartialEq, Eq)]
struct HeapEntry {
    gain: usize,
    node: Reverse<usize>,
    round: usize,
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.gain, self.node).cmp(&(other.gain, other.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lazy greedy with stale-upper-bound re-evaluation. Submodularity makes a
/// cached gain an upper bound on the current gain, so the heap top is only
/// selected once its gain was recomputed in the current round. The output is
/// identical to [`greedy_max_coverage`], including tie-breaking.
pub fn lazy_greedy_max_coverage(g: &BipartiteGraph, budget: usize) -> Result<SolverResult> {
    check_budget(g, budget)?;
    let mut chosen = NodeSet::empty(Side::Left, g.n_left());
    let mut covered = NodeSet::empty(Side::Right, g.n_right());
    let mut value = 0usize;
    let mut evaluations = 0usize;

    let mut heap = BinaryHeap::with_capacity(g.n_left());
    let mut round = 0usize;
    for u in 0..g.n_left() {
        evaluations += 1;
        heap.push(HeapEntry {
            gain: g.marginal_gain(&covered, u)?,
            node: Reverse(u),
            round,
        });
    }

    while chosen.len() < budget {
        let top = match heap.pop() {
            Some(t) => t,
            None => break,
        };
        // A cached zero never grows again: stop without recomputing.
        if top.gain == 0 {
            break;
        }
        if top.round == round {
            let u = top.node.0;
            chosen.insert(u)?;
            covered.bits_mut().union_with(g.neighbor_bits(u));
            value += top.gain;
            round += 1;
        } else {
            evaluations += 1;
            heap.push(HeapEntry {
                gain: g.marginal_gain(&covered, top.node.0)?,
                node: top.node,
                round,
            });
        }
    }
    debug_assert_eq!(value, g.coverage_value(&chosen)?);
    Ok(SolverResult {
        chosen,
        value,
        evaluations,
    })
}

/// Exact optimum over all subsets of size at most `budget`, visiting subsets
/// in lexicographic order so the first maximum found is the lexicographically
/// smallest optimal set.
pub fn exhaustive_max_coverage(g: &BipartiteGraph, budget: usize) -> Result<SolverResult> {
    exhaustive_max_coverage_capped(g, budget, DEFAULT_EXHAUSTIVE_CAP)
}

pub fn exhaustive_max_coverage_capped(
    g: &BipartiteGraph,
    budget: usize,
    cap: u64,
) -> Result<SolverResult> {
    check_budget(g, budget)?;
    let total = binomial_prefix_sum(g.n_left() as u64, budget as u64);
    if total > BigUint::from(cap) {
        return Err(Error::capacity(format!(
            "exhaustive search would visit {} subsets, exceeding cap {}",
            total, cap
        )));
    }

    struct Search<'a> {
        g: &'a BipartiteGraph,
        budget: usize,
        best_value: usize,
        best: Vec<usize>,
        current: Vec<usize>,
        evaluations: usize,
    }

    impl Search<'_> {
        fn recurse(&mut self, start: usize, covered: &NodeSet, count: usize) {
            self.evaluations += 1;
            if count > self.best_value {
                self.best_value = count;
                self.best = self.current.clone();
            }
            if self.current.len() == self.budget {
                return;
            }
            for u in start..self.g.n_left() {
                let mut next = covered.clone();
                next.bits_mut().union_with(self.g.neighbor_bits(u));
                let next_count = next.len();
                self.current.push(u);
                self.recurse(u + 1, &next, next_count);
                self.current.pop();
            }
        }
    }

    let mut search = Search {
        g,
        budget,
        best_value: 0,
        best: Vec::new(),
        current: Vec::new(),
        evaluations: 0,
    };
    let empty = NodeSet::empty(Side::Right, g.n_right());
    search.recurse(0, &empty, 0);

    let chosen = NodeSet::from_indices(Side::Left, g.n_left(), &search.best)?;
    Ok(SolverResult {
        value: search.best_value,
        chosen,
        evaluations: search.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g0() -> BipartiteGraph {
        BipartiteGraph::from_adjacency(3, 4, vec![vec![0, 1], vec![1, 2], vec![3]]).unwrap()
    }

    #[test]
    fn greedy_trace_on_g0() {
        let r = greedy_max_coverage(&g0(), 2).unwrap();
        assert_eq!(r.chosen.to_vec(), vec![0, 1]);
        assert_eq!(r.value, 3);
    }

    #[test]
    fn greedy_full_budget_covers_reachable_set() {
        let g = g0();
        let r = greedy_max_coverage(&g, 3).unwrap();
        assert_eq!(r.value, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = BipartiteGraph::random(6, 8, 0.4, &mut rng).unwrap();
            let full = crate::graph::NodeSet::full(Side::Left, 6);
            let r = greedy_max_coverage(&g, 6).unwrap();
            assert_eq!(r.value, g.coverage_value(&full).unwrap());
        }
    }

    #[test]
    fn greedy_zero_gain_early_stop() {
        let g = BipartiteGraph::from_adjacency(4, 3, vec![vec![], vec![], vec![], vec![]]).unwrap();
        let r = greedy_max_coverage(&g, 3).unwrap();
        assert!(r.chosen.is_empty());
        assert_eq!(r.value, 0);
    }

    #[test]
    fn budget_validation() {
        let g = g0();
        assert!(greedy_max_coverage(&g, 0).is_err());
        assert!(greedy_max_coverage(&g, 4).is_err());
        assert!(exhaustive_max_coverage(&g, 0).is_err());
    }

    #[test]
    fn exhaustive_on_g0() {
        let r = exhaustive_max_coverage(&g0(), 2).unwrap();
        assert_eq!(r.value, 3);
        // first optimum in lexicographic order
        assert_eq!(r.chosen.to_vec(), vec![0, 1]);
        let r3 = exhaustive_max_coverage(&g0(), 3).unwrap();
        assert_eq!(r3.value, 4);
    }

    #[test]
    fn exhaustive_empty_graph_returns_empty_set() {
        let g = BipartiteGraph::from_adjacency(2, 2, vec![vec![], vec![]]).unwrap();
        let r = exhaustive_max_coverage(&g, 1).unwrap();
        assert_eq!(r.value, 0);
        assert!(r.chosen.is_empty());
    }

    #[test]
    fn exhaustive_capacity_error_names_cap() {
        let g = {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            BipartiteGraph::random(40, 5, 0.5, &mut rng).unwrap()
        };
        let err = exhaustive_max_coverage_capped(&g, 20, 1000).unwrap_err();
        assert!(err.to_string().contains("1000"));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn lazy_matches_greedy_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let n_left = rng.random_range(1..=30);
            let n_right = rng.random_range(1..=20);
            let density = rng.random_range(0.05..0.8);
            let g = BipartiteGraph::random(n_left, n_right, density, &mut rng).unwrap();
            let budget = rng.random_range(1..=n_left);
            let eager = greedy_max_coverage(&g, budget).unwrap();
            let lazy = lazy_greedy_max_coverage(&g, budget).unwrap();
            assert_eq!(eager.chosen, lazy.chosen, "trial {}", trial);
            assert_eq!(eager.value, lazy.value);
            assert!(
                lazy.evaluations <= eager.evaluations,
                "trial {}: lazy {} > eager {}",
                trial,
                lazy.evaluations,
                eager.evaluations
            );
        }
    }

    #[test]
    fn greedy_respects_approximation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bound = 1.0 - (-1.0f64).exp();
        for _ in 0..50 {
            let n_left = rng.random_range(2..=10);
            let n_right = rng.random_range(2..=12);
            let g = BipartiteGraph::random(n_left, n_right, 0.3, &mut rng).unwrap();
            let budget = rng.random_range(1..=n_left.min(4));
            let greedy = greedy_max_coverage(&g, budget).unwrap();
            let opt = exhaustive_max_coverage(&g, budget).unwrap();
            assert!(greedy.value as f64 >= bound * opt.value as f64 - 1e-9);
        }
    }

    #[test]
    fn greedy_choice_invariant_under_right_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let g = BipartiteGraph::random(8, 10, 0.35, &mut rng).unwrap();
            let mut perm: Vec<usize> = (0..10).collect();
            for i in (1..10usize).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let permuted = g.permute_right(&perm).unwrap();
            let a = greedy_max_coverage(&g, 4).unwrap();
            let b = greedy_max_coverage(&permuted, 4).unwrap();
            assert_eq!(a.chosen, b.chosen);
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn solver_kind_parse() {
        assert_eq!("greedy".parse::<SolverKind>().unwrap(), SolverKind::Greedy);
        assert_eq!("LAZY".parse::<SolverKind>().unwrap(), SolverKind::Lazy);
        assert_eq!("exact".parse::<SolverKind>().unwrap(), SolverKind::Exact);
        assert!("magic".parse::<SolverKind>().is_err());
    }
}
