//! The secant graph: vertices are secants of the unital, two secants adjacent
//! when they meet in a unital point. The secants through one unital point form
//! a clique of order `q^2`; these `q^3 + 1` cliques partition the edge set.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::Report;
use crate::streams::substream;
use crate::unital::Unital;

/// Closed-form parameters of the secant graph for a given `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantParams {
    pub q: u64,
    pub n: u64,
    pub degree: u64,
    pub cliques: u64,
    pub clique_size: u64,
    pub edges: u64,
    /// Common neighbors of adjacent vertices.
    pub lambda: u64,
    /// Common neighbors of non-adjacent vertices.
    pub mu: u64,
}

impl SecantParams {
    pub fn for_q(q: u64) -> Self {
        let n = q * q * (q * q - q + 1);
        let degree = (q + 1) * (q * q - 1);
        SecantParams {
            q,
            n,
            degree,
            cliques: q * q * q + 1,
            clique_size: q * q,
            edges: n * degree / 2,
            lambda: 2 * q * q - 2,
            mu: (q + 1) * (q + 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SecantGraph {
    q: u64,
    graph: Graph,
    /// Per unital point, the sorted secants through it.
    cliques: Vec<Vec<u32>>,
    /// Per secant, the sorted cliques (unital points) containing it.
    vertex_cliques: Vec<Vec<u32>>,
}

fn invert(lists: &[Vec<u32>], n_targets: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); n_targets];
    for (i, l) in lists.iter().enumerate() {
        for &t in l {
            out[t as usize].push(i as u32);
        }
    }
    out
}

fn intersect_one(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Builds the secant graph clique-first: each vertex's neighborhood is the
/// union of its `q + 1` cliques, so no pairwise secant intersections are tested.
pub fn build_secant_graph(u: &Unital) -> Result<SecantGraph> {
    let q = u.q();
    let params = SecantParams::for_q(q);
    let vertex_cliques: Vec<Vec<u32>> = u.secant_points().to_vec();
    let cliques = invert(&vertex_cliques, u.n_points());
    let adj: Vec<Vec<u32>> = (0..vertex_cliques.len())
        .into_par_iter()
        .map(|v| {
            let mut l = Vec::with_capacity(params.degree as usize);
            for &c in &vertex_cliques[v] {
                l.extend(cliques[c as usize].iter().copied().filter(|&w| w != v as u32));
            }
            l
        })
        .collect();
    let graph = Graph::from_symmetric_adjacency(adj).map_err(|e| {
        Error::InvariantViolation(format!("two secants share more than one unital point: {e}"))
    })?;
    let g = SecantGraph {
        q,
        graph,
        cliques,
        vertex_cliques,
    };

    let fail = |what: String| Err(Error::InvariantViolation(what));
    if g.n() as u64 != params.n {
        return fail(format!("vertex count {} != {}", g.n(), params.n));
    }
    if let Some(v) = (0..g.n() as u32).find(|&v| g.graph.degree(v) as u64 != params.degree) {
        return fail(format!("vertex {v} has degree {} != {}", g.graph.degree(v), params.degree));
    }
    if g.cliques.len() as u64 != params.cliques {
        return fail(format!("clique count {} != {}", g.cliques.len(), params.cliques));
    }
    if let Some(c) = g.cliques.iter().position(|c| c.len() as u64 != params.clique_size) {
        return fail(format!("clique {c} has size {}", g.cliques[c].len()));
    }
    if let Some(v) = g.vertex_cliques.iter().position(|c| c.len() as u64 != q + 1) {
        return fail(format!("vertex {v} lies in {} cliques", g.vertex_cliques[v].len()));
    }
    if g.graph.edge_count() as u64 != params.edges {
        return fail(format!("edge count {} != {}", g.graph.edge_count(), params.edges));
    }
    // No duplicate neighbors means cliques share at most one vertex; the pair
    // count then forces exactly one.
    let incidences: u64 = g.vertex_cliques.iter().map(|c| (c.len() * (c.len() - 1) / 2) as u64).sum();
    if incidences != params.cliques * (params.cliques - 1) / 2 {
        return fail(format!("clique pair incidences {incidences} != C({}, 2)", params.cliques));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrgReport {
    pub lambda: u64,
    pub mu: u64,
    pub exhaustive: bool,
    pub adjacent_pairs: u64,
    pub nonadjacent_pairs: u64,
    pub violations: u64,
    pub first_violation: Option<(u32, u32, u64)>,
    /// `d (d - lambda - 1) == (n - d - 1) mu`.
    pub feasibility_identity: bool,
}

impl SrgReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.feasibility_identity
    }
}

/// One clique trace `X ∩ C` with at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub clique: u32,
    pub vertices: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassBounds {
    /// `v(L) <= 2|X|`.
    pub large_mass_bound: bool,
    /// `(q - 1)|X| - q^3 - 1`, possibly negative.
    pub small_medium_floor: i64,
    /// `v(S ⊔ M) >= (q - 1)|X| - q^3 - 1`.
    pub small_medium_bound: bool,
}

/// Both case quantities of the small/medium dichotomy at a scaled `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dichotomy {
    pub m: f64,
    /// `m^2 / (64 q)`.
    pub small_threshold: f64,
    /// `q m^{3/2} / (16 log^2 n)`.
    pub medium_threshold: f64,
    pub small_case: bool,
    pub medium_case: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionParams {
    /// Base of the logarithm in the small/medium threshold.
    pub log_base: f64,
    /// Scaled stand-in for `2^24 q^2` when evaluating the dichotomy.
    pub m_override: Option<f64>,
}

impl Default for DecompositionParams {
    fn default() -> Self {
        DecompositionParams {
            log_base: std::f64::consts::E,
            m_override: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueDecomposition {
    pub k: usize,
    /// Upper size limit of small traces, `sqrt(2k) / log n`.
    pub small_max: f64,
    /// Upper size limit of medium traces, `sqrt(2k)`.
    pub medium_max: f64,
    pub small: Vec<Trace>,
    pub medium: Vec<Trace>,
    pub large: Vec<Trace>,
    pub v_small: u64,
    pub v_medium: u64,
    pub v_large: u64,
    pub e_small: u64,
    pub e_medium: u64,
    pub e_large: u64,
    pub mass: MassBounds,
    pub dichotomy: Option<Dichotomy>,
}

impl SecantGraph {
    /// Assembles a graph from parts without checking any invariant. Meant for
    /// imported data and checker fixtures; run `verify_base_properties` on it.
    pub fn from_parts_unchecked(q: u64, graph: Graph, cliques: Vec<Vec<u32>>) -> Self {
        let mut cliques = cliques;
        for c in &mut cliques {
            c.sort_unstable();
        }
        let vertex_cliques = invert(&cliques, graph.n());
        SecantGraph {
            q,
            graph,
            cliques,
            vertex_cliques,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn params(&self) -> SecantParams {
        SecantParams::for_q(self.q)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cliques(&self) -> &[Vec<u32>] {
        &self.cliques
    }

    pub fn vertex_cliques(&self, v: u32) -> &[u32] {
        &self.vertex_cliques[v as usize]
    }

    /// The clique owning edge `{u, v}`; `None` when `u`, `v` share no clique.
    #[inline]
    pub fn edge_clique(&self, u: u32, v: u32) -> Option<u32> {
        if u == v {
            return None;
        }
        intersect_one(&self.vertex_cliques[u as usize], &self.vertex_cliques[v as usize])
    }

    /// Position of `v` inside clique `c`.
    #[inline]
    pub fn position_in_clique(&self, c: u32, v: u32) -> Option<usize> {
        self.cliques[c as usize].binary_search(&v).ok()
    }

    /// `K <clique id> : <vertex ids>` per clique.
    pub fn cliques_dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.cliques.iter().enumerate() {
            write!(out, "K {i} :").unwrap();
            for v in c {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Reads the `K <id> : <vertices>` format written by `cliques_dump`.
    pub fn parse_cliques(text: &str) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for (ln, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let (head, body) = line.split_once(':').ok_or_else(|| err("missing `:`"))?;
            let mut h = head.split_whitespace();
            if h.next() != Some("K") {
                return Err(err("expected `K`"));
            }
            let id: usize = h.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad clique id"))?;
            if id != out.len() {
                return Err(err("clique ids must be consecutive from 0"));
            }
            let verts = body
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| err("bad vertex")))
                .collect::<Result<Vec<u32>>>()?;
            out.push(verts);
        }
        Ok(out)
    }

    /// Whether three vertices lie in a common clique of the family.
    pub fn share_clique(&self, a: u32, b: u32, c: u32) -> bool {
        self.vertex_cliques[a as usize].iter().any(|k| {
            self.vertex_cliques[b as usize].binary_search(k).is_ok()
                && self.vertex_cliques[c as usize].binary_search(k).is_ok()
        })
    }

    /// Checks the base properties against the adjacency lists: regularity,
    /// clique family shape, membership, clique pair intersections, edge
    /// ownership, and (for `n <= k4_cap`) that every K4 has three vertices in
    /// one clique.
    pub fn verify_base_properties(&self, k4_cap: usize) -> Report {
        let p = self.params();
        let mut r = Report::new();
        let n = self.n();

        let bad = if n as u64 != p.n {
            Some(format!("n = {n}, expected {}", p.n))
        } else {
            (0..n as u32)
                .find(|&v| self.graph.degree(v) as u64 != p.degree)
                .map(|v| format!("vertex {v} has degree {}, expected {}", self.graph.degree(v), p.degree))
        };
        r.push_first_failure("regular", bad);

        let bad = if self.cliques.len() as u64 != p.cliques {
            Some(format!("{} cliques, expected {}", self.cliques.len(), p.cliques))
        } else {
            self.cliques
                .iter()
                .position(|c| c.len() as u64 != p.clique_size)
                .map(|i| format!("clique {i} has size {}", self.cliques[i].len()))
        };
        r.push_first_failure("clique_family", bad);

        // Every clique pair of the family must be an edge.
        let bad = (0..n as u32).into_par_iter().find_map_first(|u| {
            let nbrs = self.graph.neighbors(u);
            for &c in &self.vertex_cliques[u as usize] {
                for &w in &self.cliques[c as usize] {
                    if w != u && nbrs.binary_search(&w).is_err() {
                        return Some(format!("clique {c} pair ({u}, {w}) is not an edge"));
                    }
                }
            }
            None
        });
        r.push_first_failure("cliques_are_complete", bad);

        let k = self.cliques.len();
        let mut shared = vec![0u8; k * k];
        for vc in &self.vertex_cliques {
            for (i, &a) in vc.iter().enumerate() {
                for &b in &vc[i + 1..] {
                    let s = &mut shared[a as usize * k + b as usize];
                    *s = s.saturating_add(1);
                }
            }
        }
        let mut bad = None;
        'outer: for a in 0..k {
            for b in a + 1..k {
                if shared[a * k + b] != 1 {
                    bad = Some(format!("cliques {a} and {b} share {} vertices", shared[a * k + b]));
                    break 'outer;
                }
            }
        }
        r.push_first_failure("cliques_meet_in_one_vertex", bad);

        let bad = self
            .vertex_cliques
            .iter()
            .position(|c| c.len() as u64 != p.q + 1)
            .map(|v| format!("vertex {v} lies in {} cliques", self.vertex_cliques[v].len()));
        r.push_first_failure("vertex_in_q_plus_1_cliques", bad);

        let clique_edges: u64 = self.cliques.iter().map(|c| (c.len() * c.len().saturating_sub(1) / 2) as u64).sum();
        let e = self.graph.edge_count() as u64;
        r.push(
            "edge_clique_totality",
            clique_edges == e && e == p.edges,
            Some(format!("sum C(|C|,2) = {clique_edges}, e = {e}, n d / 2 = {}", p.edges)),
        );

        if n <= k4_cap {
            let dense = self.graph.to_dense();
            let mut total = 0u64;
            let mut bad = None;
            dense.for_each_k4(|k| {
                total += 1;
                let [a, b, c, d] = k;
                let ok = self.share_clique(a, b, c)
                    || self.share_clique(a, b, d)
                    || self.share_clique(a, c, d)
                    || self.share_clique(b, c, d);
                if !ok {
                    bad = Some(format!("K4 {k:?} has no three vertices in one clique"));
                }
                ok
            });
            r.push("k4_three_in_clique", bad.is_none(), Some(bad.unwrap_or(format!("{total} K4s checked"))));
        }
        r
    }

    /// Checks the strongly regular common-neighbor counts, on every pair when
    /// `C(n, 2) <= pair_budget`, otherwise on `pair_budget` seeded pairs (half
    /// drawn along edges so both cases are exercised).
    pub fn srg_check(&self, pair_budget: u64, seed: u64) -> SrgReport {
        let p = self.params();
        let n = self.n() as u64;
        let total_pairs = n * n.saturating_sub(1) / 2;
        let exhaustive = total_pairs <= pair_budget;
        let expected = |adjacent: bool| if adjacent { p.lambda } else { p.mu };

        let results: Vec<(u32, u32, bool, u64)> = if exhaustive {
            (0..n as u32)
                .into_par_iter()
                .flat_map_iter(|u| {
                    (u + 1..n as u32).map(move |v| {
                        let adj = self.graph.has_edge(u, v);
                        (u, v, adj, self.graph.common_neighbors(u, v) as u64)
                    })
                })
                .collect()
        } else {
            let mut rng = substream(seed, "secant_graph/srg_pairs", 0);
            let mut pairs = Vec::with_capacity(pair_budget as usize);
            while (pairs.len() as u64) < pair_budget {
                let u = rng.gen_range(0..n as u32);
                let v = if pairs.len() % 2 == 0 {
                    let nb = self.graph.neighbors(u);
                    nb[rng.gen_range(0..nb.len())]
                } else {
                    rng.gen_range(0..n as u32)
                };
                if u != v {
                    pairs.push((u, v));
                }
            }
            pairs
                .par_iter()
                .map(|&(u, v)| {
                    let adj = self.graph.has_edge(u, v);
                    (u, v, adj, self.graph.common_neighbors(u, v) as u64)
                })
                .collect()
        };

        let mut rep = SrgReport {
            lambda: p.lambda,
            mu: p.mu,
            exhaustive,
            adjacent_pairs: 0,
            nonadjacent_pairs: 0,
            violations: 0,
            first_violation: None,
            feasibility_identity: p.degree * (p.degree - p.lambda - 1) == (p.n - p.degree - 1) * p.mu,
        };
        for (u, v, adj, common) in results {
            if adj {
                rep.adjacent_pairs += 1;
            } else {
                rep.nonadjacent_pairs += 1;
            }
            if common != expected(adj) {
                rep.violations += 1;
                rep.first_violation.get_or_insert((u, v, common));
            }
        }
        rep
    }

    /// Splits the clique traces of `x` into small, medium and large parts and
    /// evaluates the mass bounds on them.
    pub fn clique_decomposition(&self, x: &[u32], params: DecompositionParams) -> Result<CliqueDecomposition> {
        let mut xs = x.to_vec();
        xs.sort_unstable();
        xs.dedup();
        if xs.is_empty() {
            return Err(Error::EmptyX);
        }
        if let Some(&v) = xs.iter().find(|&&v| v as usize >= self.n()) {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        let k = xs.len();
        let n = self.n() as f64;
        let log_n = n.ln() / params.log_base.ln();
        let medium_max = (2.0 * k as f64).sqrt();
        let small_max = medium_max / log_n;

        let mut in_x = vec![false; self.n()];
        for &v in &xs {
            in_x[v as usize] = true;
        }
        let (mut small, mut medium, mut large) = (Vec::new(), Vec::new(), Vec::new());
        for (ci, c) in self.cliques.iter().enumerate() {
            let tr: Vec<u32> = c.iter().copied().filter(|&v| in_x[v as usize]).collect();
            if tr.len() < 2 {
                continue;
            }
            let s = tr.len() as f64;
            let t = Trace {
                clique: ci as u32,
                vertices: tr,
            };
            if s <= small_max {
                small.push(t);
            } else if s <= medium_max {
                medium.push(t);
            } else {
                large.push(t);
            }
        }
        let mass = |ts: &[Trace]| ts.iter().map(|t| t.vertices.len() as u64).sum::<u64>();
        let pairs = |ts: &[Trace]| {
            ts.iter()
                .map(|t| (t.vertices.len() * (t.vertices.len() - 1) / 2) as u64)
                .sum::<u64>()
        };
        let (v_small, v_medium, v_large) = (mass(&small), mass(&medium), mass(&large));
        let (e_small, e_medium, e_large) = (pairs(&small), pairs(&medium), pairs(&large));

        let q = self.q as i64;
        let floor = (q - 1) * k as i64 - q * q * q - 1;
        let mass = MassBounds {
            large_mass_bound: v_large <= 2 * k as u64,
            small_medium_floor: floor,
            small_medium_bound: (v_small + v_medium) as i64 >= floor,
        };
        let dichotomy = params.m_override.map(|m| {
            let qf = self.q as f64;
            let small_threshold = m * m / (64.0 * qf);
            let medium_threshold = qf * m.powf(1.5) / (16.0 * log_n * log_n);
            Dichotomy {
                m,
                small_threshold,
                medium_threshold,
                small_case: e_small as f64 >= small_threshold,
                medium_case: e_medium as f64 >= medium_threshold,
            }
        });
        Ok(CliqueDecomposition {
            k,
            small_max,
            medium_max,
            small,
            medium,
            large,
            v_small,
            v_medium,
            v_large,
            e_small,
            e_medium,
            e_large,
            mass,
            dichotomy,
        })
    }
}
