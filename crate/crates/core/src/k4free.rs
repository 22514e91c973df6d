//! The randomized graph H*: every clique of the secant graph is replaced by the
//! complete bipartite graph between the two halves of a random bipartition.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{BitSet, Graph};
use crate::report::Report;
use crate::secant_graph::SecantGraph;
use crate::streams::substream;

pub const CLIQUE_STREAM: &str = "k4free/clique";
const AUDIT_STREAM: &str = "k4free/audit";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum K4Mode {
    Structural,
    Exhaustive,
}

pub const DEFAULT_K4_CAP: usize = 250;

/// Side assignment of one clique; bit `i` set puts the `i`-th clique vertex
/// (in increasing ID order) in `B`, clear puts it in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub clique_id: u32,
    pub side_mask: BitSet,
}

impl Bipartition {
    pub fn sizes(&self) -> (usize, usize) {
        let b = self.side_mask.count();
        (self.side_mask.capacity() - b, b)
    }
}

pub struct K4FreeGraph<'a> {
    base: &'a SecantGraph,
    seed: u64,
    parts: Vec<Bipartition>,
}

pub fn randomize(base: &SecantGraph, seed: u64) -> K4FreeGraph<'_> {
    let parts = base
        .cliques()
        .par_iter()
        .enumerate()
        .map(|(c, verts)| {
            let mut rng = substream(seed, CLIQUE_STREAM, c as u64);
            let mut side_mask = BitSet::new(verts.len());
            for i in 0..verts.len() {
                if rng.gen::<bool>() {
                    side_mask.insert(i);
                }
            }
            Bipartition {
                clique_id: c as u32,
                side_mask,
            }
        })
        .collect();
    K4FreeGraph { base, seed, parts }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeAudit {
    pub size: usize,
    pub trials: usize,
    pub min_edges: u64,
    pub mean_edges: f64,
    /// `e(X) 256 q / |X|^2`.
    pub min_ratio: f64,
    pub mean_ratio: f64,
    /// `e(X) - p C(|X|, 2)` with `p` the expected edge density.
    pub min_deviation: f64,
    pub mean_deviation: f64,
    /// Quantiles 0, 0.1, 0.5, 0.9, 1 of `e(X) q / |X|^2`.
    pub scaled_quantiles: [f64; 5],
    /// Whether the floor applies to this size (`size >= m'`).
    pub asserted: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityAudit {
    pub q: u64,
    pub seed: u64,
    pub expected_density: f64,
    pub m_prime: usize,
    pub floor: f64,
    pub sizes: Vec<SizeAudit>,
}

impl DensityAudit {
    pub fn passed(&self) -> bool {
        self.sizes.iter().all(|s| s.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditParams {
    /// Sizes at or above this are held to the floor.
    pub m_prime: usize,
    /// Lower bound for `min e(X) q / |X|^2`.
    pub floor: f64,
}

impl<'a> K4FreeGraph<'a> {
    /// Rebuilds a graph from explicit bipartitions, for imports and fixtures.
    pub fn from_parts(base: &'a SecantGraph, seed: u64, parts: Vec<Bipartition>) -> Result<Self> {
        if parts.len() != base.cliques().len() {
            return Err(Error::InvalidArgument(format!(
                "{} bipartitions for {} cliques",
                parts.len(),
                base.cliques().len()
            )));
        }
        for (i, p) in parts.iter().enumerate() {
            if p.clique_id as usize != i || p.side_mask.capacity() != base.cliques()[i].len() {
                return Err(Error::InvalidArgument(format!("bipartition {i} does not fit its clique")));
            }
        }
        Ok(K4FreeGraph { base, seed, parts })
    }

    pub fn base(&self) -> &'a SecantGraph {
        self.base
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bipartitions(&self) -> &[Bipartition] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    #[inline]
    fn side(&self, c: u32, v: u32) -> Option<bool> {
        let pos = self.base.position_in_clique(c, v)?;
        Some(self.parts[c as usize].side_mask.contains(pos))
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match self.base.edge_clique(u, v) {
            Some(c) => self.side(c, u) != self.side(c, v),
            None => false,
        }
    }

    fn for_each_neighbor(&self, u: u32, mut f: impl FnMut(u32)) {
        for &c in self.base.vertex_cliques(u) {
            let verts = &self.base.cliques()[c as usize];
            let mask = &self.parts[c as usize].side_mask;
            let su = mask.contains(verts.binary_search(&u).unwrap());
            for (i, &w) in verts.iter().enumerate() {
                if mask.contains(i) != su {
                    f(w);
                }
            }
        }
    }

    pub fn neighbors(&self, u: u32) -> Vec<u32> {
        let mut out = Vec::new();
        self.for_each_neighbor(u, |w| out.push(w));
        out.sort_unstable();
        out
    }

    pub fn edge_count(&self) -> u64 {
        self.parts
            .iter()
            .map(|p| {
                let (a, b) = p.sizes();
                (a * b) as u64
            })
            .sum()
    }

    /// The explicit edge set.
    pub fn materialize(&self) -> Graph {
        let adj = (0..self.n() as u32).into_par_iter().map(|u| self.neighbors(u)).collect();
        Graph::from_symmetric_adjacency(adj).expect("cliques meet in at most one vertex")
    }

    /// SHA-256 over the side masks, one `0`/`1` string per clique.
    pub fn masks_digest(&self) -> String {
        let mut h = Sha256::new();
        for p in &self.parts {
            let line: String = (0..p.side_mask.capacity())
                .map(|i| if p.side_mask.contains(i) { '1' } else { '0' })
                .collect();
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    /// K4-freeness report. Structural mode checks the materialized edge set
    /// clique by clique; exhaustive mode enumerates K4s when `n <= cap` (and
    /// falls back to structural above it).
    pub fn verify_k4_free(&self, mode: K4Mode, cap: usize) -> Report {
        match mode {
            K4Mode::Exhaustive if self.n() <= cap => self.verify_exhaustive(&self.materialize()),
            _ => self.verify_structural(&self.materialize()),
        }
    }

    /// Checks that `edges` is exactly the union over cliques of `A x B`: every
    /// edge lies in a clique with its ends on opposite sides, and each clique
    /// carries `|A| |B|` edges.
    pub fn verify_structural(&self, edges: &Graph) -> Report {
        let mut r = Report::new();
        let n = self.n();
        if edges.n() != n {
            r.push("vertex_count", false, Some(format!("{} vertices, expected {n}", edges.n())));
            return r;
        }
        let k = self.parts.len();
        const UNSET: u32 = u32::MAX;
        // marks[w] = 2 * clique + side for the clique shared with the current u
        let (bad, counts) = (0..n as u32)
            .into_par_iter()
            .fold(
                || (None::<String>, vec![0u64; k], vec![UNSET; n]),
                |(mut bad, mut counts, mut marks), u| {
                    let mut su = Vec::with_capacity(self.base.vertex_cliques(u).len());
                    for &c in self.base.vertex_cliques(u) {
                        let mask = &self.parts[c as usize].side_mask;
                        for (i, &w) in self.base.cliques()[c as usize].iter().enumerate() {
                            if w == u {
                                su.push(mask.contains(i));
                            } else {
                                marks[w as usize] = 2 * c + mask.contains(i) as u32;
                            }
                        }
                    }
                    for &w in edges.neighbors(u) {
                        let m = marks[w as usize];
                        if m == UNSET {
                            bad.get_or_insert_with(|| format!("edge ({u}, {w}) is not a base edge"));
                            continue;
                        }
                        let c = m / 2;
                        let ci = self.base.vertex_cliques(u).binary_search(&c).unwrap();
                        if (m & 1 == 1) == su[ci] {
                            bad.get_or_insert_with(|| format!("edge ({u}, {w}) joins one side of clique {c}"));
                        }
                        counts[c as usize] += 1;
                    }
                    for &c in self.base.vertex_cliques(u) {
                        for &w in &self.base.cliques()[c as usize] {
                            marks[w as usize] = UNSET;
                        }
                    }
                    (bad, counts, marks)
                },
            )
            .map(|(b, c, _)| (b, c))
            .reduce(
                || (None, vec![0u64; k]),
                |(b1, mut c1), (b2, c2)| {
                    for (x, y) in c1.iter_mut().zip(c2) {
                        *x += y;
                    }
                    (b1.or(b2), c1)
                },
            );
        r.push_first_failure("edges_cross_bipartitions", bad);
        let bad = (0..k).find_map(|c| {
            let (a, b) = self.parts[c].sizes();
            let want = 2 * (a * b) as u64;
            (counts[c] != want).then(|| format!("clique {c} carries {} edges, expected |A||B| = {}", counts[c] / 2, want / 2))
        });
        r.push_first_failure("cliques_complete_bipartite", bad);
        r
    }

    /// Enumerates every K4 of `edges` directly.
    pub fn verify_exhaustive(&self, edges: &Graph) -> Report {
        let mut r = Report::new();
        let found = edges.to_dense().find_k4s(1);
        let detail = found.first().map(|k| {
            let owners: Vec<String> = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .map(|(i, j)| match self.base.edge_clique(k[i], k[j]) {
                    Some(c) => c.to_string(),
                    None => "-".into(),
                })
                .collect();
            format!("K4 {:?}, edge cliques [{}]", k, owners.join(", "))
        });
        r.push_first_failure("no_k4", detail);
        r
    }

    /// Edge counts of random vertex subsets. Each `(size, trial)` draws from
    /// its own substream.
    pub fn edge_density_audit(
        &self,
        sizes: &[usize],
        trials: usize,
        seed: u64,
        params: AuditParams,
    ) -> Result<DensityAudit> {
        let n = self.n();
        if let Some(&s) = sizes.iter().find(|&&s| s > n) {
            return Err(Error::SizeExceedsN { size: s, n });
        }
        let q = self.base.q() as f64;
        let d = self.base.params().degree as f64;
        let p = d / (2.0 * (n as f64 - 1.0));
        let mut out = Vec::with_capacity(sizes.len());
        for &s in sizes {
            let counts: Vec<u64> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = substream(seed, AUDIT_STREAM, ((s as u64) << 32) | t as u64);
                    let x: Vec<u32> = sample(&mut rng, n, s).iter().map(|v| v as u32).collect();
                    self.edges_within(&x)
                })
                .collect();
            let s2 = (s * s) as f64;
            let pairs = (s * s.saturating_sub(1) / 2) as f64;
            let ratio = |e: u64| if s == 0 { 0.0 } else { e as f64 * 256.0 * q / s2 };
            let scaled = |e: u64| if s == 0 { 0.0 } else { e as f64 * q / s2 };
            let min_edges = counts.iter().copied().min().unwrap_or(0);
            let mean_edges = counts.iter().sum::<u64>() as f64 / trials.max(1) as f64;
            let mut sorted: Vec<f64> = counts.iter().map(|&e| scaled(e)).collect();
            sorted.sort_by(f64::total_cmp);
            let quantile = |f: f64| {
                if sorted.is_empty() {
                    0.0
                } else {
                    sorted[((sorted.len() - 1) as f64 * f).round() as usize]
                }
            };
            let asserted = s >= params.m_prime && s >= 2;
            let passed = !asserted || (min_edges > 0 && scaled(min_edges) >= params.floor);
            out.push(SizeAudit {
                size: s,
                trials,
                min_edges,
                mean_edges,
                min_ratio: ratio(min_edges),
                mean_ratio: ratio(1) * mean_edges,
                min_deviation: min_edges as f64 - p * pairs,
                mean_deviation: mean_edges - p * pairs,
                scaled_quantiles: [quantile(0.0), quantile(0.1), quantile(0.5), quantile(0.9), quantile(1.0)],
                asserted,
                passed,
            });
        }
        Ok(DensityAudit {
            q: self.base.q(),
            seed,
            expected_density: p,
            m_prime: params.m_prime,
            floor: params.floor,
            sizes: out,
        })
    }

    /// Number of edges with both ends in `x`.
    pub fn edges_within(&self, x: &[u32]) -> u64 {
        let mut in_x = vec![false; self.n()];
        for &v in x {
            in_x[v as usize] = true;
        }
        let mut e = 0u64;
        for &u in x {
            self.for_each_neighbor(u, |w| {
                if w > u && in_x[w as usize] {
                    e += 1;
                }
            });
        }
        e
    }
}
