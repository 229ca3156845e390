//! Structured samples `{S_i, N_G(S_i)}` and their on-disk log format.
//!
//! A log file carries a single header line
//! `OPSS v1 n=<n> m=<m> k=<k> dist=<spec> seed=<seed> t=<count>`
//! followed by one line per sample, `S: u1 u2 ... | N: v1 v2 ...`, with
//! sorted indices on both sides.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeSet, Side};

/// One structured sample: the drawn set and the covered right nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub set: NodeSet,
    pub covered: NodeSet,
}

/// An ordered sequence of structured samples with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleLog {
    pub n_left: usize,
    pub n_right: usize,
    pub k: usize,
    pub dist: DistributionSpec,
    pub seed: u64,
    pub samples: Vec<Sample>,
}

impl SampleLog {
    /// Draw `t` samples from `dist` against the hidden graph, recording the
    /// exact covered set of each. The generator guarantees
    /// `covered == neighbors(g, set)` for every sample.
    pub fn generate_with<R: Rng + ?Sized>(
        g: &BipartiteGraph,
        dist: &DistributionSpec,
        k: usize,
        t: usize,
        seed: u64,
        rng: &mut R,
    ) -> Result<SampleLog> {
        dist.validate()?;
        if dist.n() != g.n_left() {
            return Err(Error::validation(format!(
                "distribution ground set {} does not match graph n_left {}",
                dist.n(),
                g.n_left()
            )));
        }
        if t == 0 {
            return Err(Error::validation("sample count t must be at least 1"));
        }
        if k == 0 {
            return Err(Error::validation("constraint k must be at least 1"));
        }
        let mut samples = Vec::with_capacity(t);
        for _ in 0..t {
            let set = dist.draw(rng)?;
            let covered = g.neighbors(&set)?;
            samples.push(Sample { set, covered });
        }
        Ok(SampleLog {
            n_left: g.n_left(),
            n_right: g.n_right(),
            k,
            dist: dist.clone(),
            seed,
            samples: samples,
        })
    }

    /// Convenience wrapper seeding its own generator from `seed`.
    pub fn generate(
        g: &BipartiteGraph,
        dist: &DistributionSpec,
        k: usize,
        t: usize,
        seed: u64,
    ) -> Result<SampleLog> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self::generate_with(g, dist, k, t, seed, &mut rng)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::validation("sample log is empty"));
        }
        for (i, s) in self.samples.iter().enumerate() {
            if s.set.side() != Side::Left
                || s.set.capacity() != self.n_left
                || s.covered.side() != Side::Right
                || s.covered.capacity() != self.n_right
            {
                return Err(Error::validation(format!(
                    "sample {} does not match log dimensions {}x{}",
                    i, self.n_left, self.n_right
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "OPSS v1 n={} m={} k={} dist={} seed={} t={}",
            self.n_left,
            self.n_right,
            self.k,
            self.dist,
            self.seed,
            self.samples.len()
        );
        for s in &self.samples {
            out.push_str("S:");
            for u in s.set.iter() {
                let _ = write!(out, " {}", u);
            }
            out.push_str(" | N:");
            for v in s.covered.iter() {
                let _ = write!(out, " {}", v);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SampleLog> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::format("empty sample log"))?;
        let rest = header
            .strip_prefix("OPSS v1 ")
            .ok_or_else(|| Error::format("sample log must start with 'OPSS v1'"))?;

        // Fixed field order; the dist value itself contains spaces and
        // key=value pairs, so it extends until the ' seed=' marker.
        let take = |s: &str, key: &str| -> Result<(String, String)> {
            let body = s
                .strip_prefix(key)
                .ok_or_else(|| Error::format(format!("expected '{}' in header", key)))?;
            match body.split_once(' ') {
                Some((v, tail)) => Ok((v.to_string(), tail.to_string())),
                None => Ok((body.to_string(), String::new())),
            }
        };
        let (n_str, rest) = take(rest, "n=")?;
        let (m_str, rest) = take(&rest, "m=")?;
        let (k_str, rest) = take(&rest, "k=")?;
        let rest = rest
            .strip_prefix("dist=")
            .ok_or_else(|| Error::format("expected 'dist=' in header"))?;
        let seed_pos = rest
            .find(" seed=")
            .ok_or_else(|| Error::format("expected 'seed=' in header"))?;
        let dist_str = &rest[..seed_pos];
        let (seed_str, rest) = take(&rest[seed_pos + 1..], "seed=")?;
        let (t_str, rest) = take(&rest, "t=")?;
        if !rest.is_empty() {
            return Err(Error::format("trailing tokens in sample log header"));
        }

        let parse_usize = |s: &str, what: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::format(format!("bad {} '{}'", what, s)))
        };
        let n_left = parse_usize(&n_str, "n")?;
        let n_right = parse_usize(&m_str, "m")?;
        let k = parse_usize(&k_str, "k")?;
        let t = parse_usize(&t_str, "t")?;
        let seed: u64 = seed_str
            .parse()
            .map_err(|_| Error::format(format!("bad seed '{}'", seed_str)))?;
        let dist: DistributionSpec = dist_str.parse()?;

        let mut samples = Vec::with_capacity(t);
        for i in 0..t {
            let line = lines
                .next()
                .ok_or_else(|| Error::format(format!("missing sample line {}", i)))?;
            let body = line
                .strip_prefix("S:")
                .ok_or_else(|| Error::format(format!("sample line {} must start with 'S:'", i)))?;
            let (s_part, n_part) = body
                .split_once("| N:")
                .ok_or_else(|| Error::format(format!("sample line {} missing '| N:'", i)))?;
            let parse_indices = |chunk: &str, cap: usize, side: Side| -> Result<NodeSet> {
                let mut set = NodeSet::empty(side, cap);
                for tok in chunk.split_whitespace() {
                    let idx: usize = tok
                        .parse()
                        .map_err(|_| Error::format(format!("bad index '{}'", tok)))?;
                    set.insert(idx)?;
                }
                Ok(set)
            };
            samples.push(Sample {
                set: parse_indices(s_part, n_left, Side::Left)?,
                covered: parse_indices(n_part, n_right, Side::Right)?,
            });
        }
        let log = SampleLog {
            n_left,
            n_right,
            k,
            dist,
            seed,
            samples,
        };
        log.validate()?;
        Ok(log)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<SampleLog> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}
