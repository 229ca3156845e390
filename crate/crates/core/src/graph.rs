//! Bipartite graphs and coverage-function evaluation.
//!
//! A graph `G = (L, R, E)` is stored as an adjacency list from left nodes to
//! right nodes. Node identity is a zero-based dense index per side, which
//! lets node sets be plain bit vectors. Graphs and node sets are immutable
//! after construction, so they can be shared freely across trial workers.

use std::fmt::Write as _;
use std::path::Path;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Which side of the bipartition a node or node set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A subset of left- or right-node indices, behaviorally a mathematical set.
///
/// The capacity is the number of nodes on the declared side, so membership is
/// always within range by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    side: Side,
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn empty(side: Side, capacity: usize) -> Self {
        NodeSet {
            side,
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    pub fn full(side: Side, capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        NodeSet { side, bits }
    }

    pub fn from_indices(side: Side, capacity: usize, members: &[usize]) -> Result<Self> {
        let mut set = NodeSet::empty(side, capacity);
        for &i in members {
            set.insert(i)?;
        }
        Ok(set)
    }

    pub(crate) fn from_bits(side: Side, bits: FixedBitSet) -> Self {
        NodeSet { side, bits }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, index: usize) -> Result<()> {
        if index >= self.bits.len() {
            return Err(Error::validation(format!(
                "node index {} out of range (capacity {})",
                index,
                self.bits.len()
            )));
        }
        self.bits.insert(index);
        Ok(())
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.bits.len() && self.bits.contains(index)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Iterate members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.side == other.side && self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &NodeSet) -> Result<NodeSet> {
        self.check_compatible(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(NodeSet {
            side: self.side,
            bits,
        })
    }

    pub fn intersection(&self, other: &NodeSet) -> Result<NodeSet> {
        self.check_compatible(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(NodeSet {
            side: self.side,
            bits,
        })
    }

    fn check_compatible(&self, other: &NodeSet) -> Result<()> {
        if self.side != other.side || self.bits.len() != other.bits.len() {
            return Err(Error::validation(
                "node sets have mismatched side or capacity",
            ));
        }
        Ok(())
    }

    pub(crate) fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut FixedBitSet {
        &mut self.bits
    }
}

/// The bipartite graph `G = (L, R, E)` with per-left-node sorted adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    adjacency: Vec<Vec<usize>>,
    // Bit-vector mirror of `adjacency`, used by all coverage evaluations.
    neighbor_bits: Vec<FixedBitSet>,
    right_degree: Vec<usize>,
}

impl BipartiteGraph {
    /// Build from adjacency lists. Each list must be strictly increasing and
    /// every entry must lie in `[0, n_right)`.
    pub fn from_adjacency(
        n_left: usize,
        n_right: usize,
        adjacency: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if n_left == 0 || n_right == 0 {
            return Err(Error::validation("graph requires n_left >= 1 and n_right >= 1"));
        }
        if adjacency.len() != n_left {
            return Err(Error::validation(format!(
                "expected {} adjacency lists, got {}",
                n_left,
                adjacency.len()
            )));
        }
        let mut right_degree = vec![0usize; n_right];
        let mut neighbor_bits = Vec::with_capacity(n_left);
        for (u, list) in adjacency.iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(n_right);
            for window in list.windows(2) {
                if window[0] >= window[1] {
                    return Err(Error::validation(format!(
                        "adjacency of left node {} is not strictly increasing",
                        u
                    )));
                }
            }
            for &v in list {
                if v >= n_right {
                    return Err(Error::validation(format!(
                        "adjacency of left node {} contains {} >= n_right {}",
                        u, v, n_right
                    )));
                }
                bits.insert(v);
                right_degree[v] += 1;
            }
            neighbor_bits.push(bits);
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            adjacency,
            neighbor_bits,
            right_degree,
        })
    }

    /// Build from per-left-node neighbor bit sets (each of length `n_right`).
    pub(crate) fn from_neighbor_bits(
        n_left: usize,
        n_right: usize,
        bits: Vec<FixedBitSet>,
    ) -> Result<Self> {
        let adjacency: Vec<Vec<usize>> = bits.iter().map(|b| b.ones().collect()).collect();
        debug_assert_eq!(bits.len(), n_left);
        Self::from_adjacency(n_left, n_right, adjacency)
    }

    /// Erdos-Renyi style random bipartite graph: each of the `n_left * n_right`
    /// edges is present independently with probability `density`.
    pub fn random<R: rand::Rng + ?Sized>(
        n_left: usize,
        n_right: usize,
        density: f64,
        rng: &mut R,
    ) -> Result<Self> {
        use rand::RngExt;
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::validation("density must lie in [0, 1]"));
        }
        let mut adjacency = Vec::with_capacity(n_left);
        for _ in 0..n_left {
            let mut list = Vec::new();
            for v in 0..n_right {
                if rng.random_bool(density) {
                    list.push(v);
                }
            }
            adjacency.push(list);
        }
        Self::from_adjacency(n_left, n_right, adjacency)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    /// Sorted neighbor list of left node `u`.
    pub fn adjacency(&self, u: usize) -> Result<&[usize]> {
        self.check_left(u)?;
        Ok(&self.adjacency[u])
    }

    /// `N_G(u)` as a right node set.
    pub fn neighbor_set(&self, u: usize) -> Result<NodeSet> {
        self.check_left(u)?;
        Ok(NodeSet::from_bits(
            Side::Right,
            self.neighbor_bits[u].clone(),
        ))
    }

    pub(crate) fn neighbor_bits(&self, u: usize) -> &FixedBitSet {
        &self.neighbor_bits[u]
    }

    fn check_left(&self, u: usize) -> Result<()> {
        if u >= self.n_left {
            return Err(Error::validation(format!(
                "left index {} out of range (n_left {})",
                u, self.n_left
            )));
        }
        Ok(())
    }

    fn check_left_set(&self, s: &NodeSet) -> Result<()> {
        if s.side() != Side::Left || s.capacity() != self.n_left {
            return Err(Error::validation(format!(
                "expected a left node set of capacity {}, got {:?} capacity {}",
                self.n_left,
                s.side(),
                s.capacity()
            )));
        }
        Ok(())
    }

    fn check_right_set(&self, s: &NodeSet) -> Result<()> {
        if s.side() != Side::Right || s.capacity() != self.n_right {
            return Err(Error::validation(format!(
                "expected a right node set of capacity {}, got {:?} capacity {}",
                self.n_right,
                s.side(),
                s.capacity()
            )));
        }
        Ok(())
    }

    /// `N_G(S)`: union of the neighbor sets of the members of `s`.
    pub fn neighbors(&self, s: &NodeSet) -> Result<NodeSet> {
        self.check_left_set(s)?;
        let mut bits = FixedBitSet::with_capacity(self.n_right);
        for u in s.iter() {
            bits.union_with(&self.neighbor_bits[u]);
        }
        Ok(NodeSet::from_bits(Side::Right, bits))
    }

    /// `f_G(S) = |N_G(S)|`.
    pub fn coverage_value(&self, s: &NodeSet) -> Result<usize> {
        Ok(self.neighbors(s)?.len())
    }

    /// `|N_G(u) \ covered|`, the gain of adding `u` when `covered` is the
    /// neighbor set of the current selection.
    pub fn marginal_gain(&self, covered: &NodeSet, u: usize) -> Result<usize> {
        self.check_left(u)?;
        self.check_right_set(covered)?;
        Ok(self.neighbor_bits[u].difference(covered.bits()).count())
    }

    /// `d(v)`: the number of left nodes adjacent to right node `v`.
    pub fn degree_right(&self, v: usize) -> Result<usize> {
        if v >= self.n_right {
            return Err(Error::validation(format!(
                "right index {} out of range (n_right {})",
                v, self.n_right
            )));
        }
        Ok(self.right_degree[v])
    }

    /// Left nodes adjacent to right node `v`.
    pub fn left_neighbors_of(&self, v: usize) -> Result<NodeSet> {
        if v >= self.n_right {
            return Err(Error::validation(format!(
                "right index {} out of range (n_right {})",
                v, self.n_right
            )));
        }
        let mut set = NodeSet::empty(Side::Left, self.n_left);
        for (u, bits) in self.neighbor_bits.iter().enumerate() {
            if bits.contains(v) {
                set.insert(u)?;
            }
        }
        Ok(set)
    }

    /// Rename right nodes by `perm` (a permutation of `0..n_right`). Used by
    /// label-blindness tests.
    pub fn permute_right(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_right {
            return Err(Error::validation("permutation length mismatch"));
        }
        let mut seen = vec![false; self.n_right];
        for &p in perm {
            if p >= self.n_right || seen[p] {
                return Err(Error::validation("not a permutation of right indices"));
            }
            seen[p] = true;
        }
        let adjacency = self
            .adjacency
            .iter()
            .map(|list| {
                let mut l: Vec<usize> = list.iter().map(|&v| perm[v]).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Self::from_adjacency(self.n_left, self.n_right, adjacency)
    }

    /// Canonical text form: first line `<n_left> <n_right>`, then one line of
    /// sorted right indices per left node (empty line for an empty list).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n_left, self.n_right);
        for list in &self.adjacency {
            let mut first = true;
            for v in list {
                if !first {
                    out.push(' ');
                }
                let _ = write!(out, "{}", v);
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::format("empty graph file"))?;
        let mut parts = header.split_whitespace();
        let n_left: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::format("graph header must be '<n_left> <n_right>'"))?;
        let n_right: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::format("graph header must be '<n_left> <n_right>'"))?;
        if parts.next().is_some() {
            return Err(Error::format("trailing tokens in graph header"));
        }
        let mut adjacency = Vec::with_capacity(n_left);
        for _ in 0..n_left {
            let line = lines.next().unwrap_or("");
            let mut list = Vec::new();
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::format(format!("bad right index '{}'", tok)))?;
                list.push(v);
            }
            adjacency.push(list);
        }
        Self::from_adjacency(n_left, n_right, adjacency)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}
