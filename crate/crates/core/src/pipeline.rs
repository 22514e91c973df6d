//! Witness sampling and certification, blowups, and the multicolor
//! construction built from random permutations of a blowup.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::independent_sets::{binomial, independence_number_with, IndependentSet};
use crate::k4free::K4FreeGraph;
use crate::report::Report;
use crate::streams::substream;

pub const CERTIFICATE_VERSION: u32 = 1;
pub const TOOL: &str = concat!("unital-ramsey ", env!("CARGO_PKG_VERSION"));

/// Probabilities above this are outside the sparse sampling regime.
pub const REGIME_LIMIT: f64 = 0.25;

/// Serializes with sorted keys, two-space indent and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledGraph {
    pub graph: Graph,
    /// Original vertex of each sampled vertex, increasing.
    pub vertices: Vec<u32>,
    pub p_requested: f64,
    pub p_used: f64,
    pub flags: Vec<String>,
}

/// Keeps each vertex of `h` with probability `p`, drawing in vertex order from
/// one labelled stream. Values above 1 are clamped and flagged.
pub fn sample_vertices(h: &K4FreeGraph, p: f64, seed: u64) -> Result<SampledGraph> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(format!("sampling probability {p} is not positive")));
    }
    let mut flags = Vec::new();
    let p_used = if p > 1.0 {
        flags.push(format!("p = {p} exceeds 1 and was clamped to 1"));
        1.0
    } else {
        p
    };
    if p > REGIME_LIMIT {
        flags.push(format!("p = {p} is above {REGIME_LIMIT}, outside the asymptotic regime"));
    }
    let mut rng = substream(seed, "pipeline/sample", 0);
    let vertices: Vec<u32> = (0..h.n() as u32).filter(|_| rng.gen_bool(p_used)).collect();
    let mut index = vec![u32::MAX; h.n()];
    for (i, &v) in vertices.iter().enumerate() {
        index[v as usize] = i as u32;
    }
    let adj = vertices
        .iter()
        .map(|&v| {
            h.neighbors(v)
                .into_iter()
                .filter_map(|w| (index[w as usize] != u32::MAX).then(|| index[w as usize]))
                .collect()
        })
        .collect();
    Ok(SampledGraph {
        graph: Graph::from_symmetric_adjacency(adj)?,
        vertices,
        p_requested: p,
        p_used,
        flags,
    })
}

/// Checks that `graph` is the subgraph of `h` induced on `vertices` using only
/// the bipartition masks: every edge crosses its clique's bipartition and each
/// clique contributes `|A ∩ V| |B ∩ V|` edges.
pub fn verify_induced_structural(h: &K4FreeGraph, vertices: &[u32], graph: &Graph) -> Report {
    let mut r = Report::new();
    if vertices.len() != graph.n() || vertices.windows(2).any(|w| w[0] >= w[1]) {
        r.push("vertex_map", false, Some("vertex list does not match the graph".into()));
        return r;
    }
    if let Some(&v) = vertices.iter().find(|&&v| v as usize >= h.n()) {
        r.push("vertex_map", false, Some(format!("vertex {v} out of range")));
        return r;
    }
    let bad = graph.edges().find_map(|(a, b)| {
        let (u, v) = (vertices[a as usize], vertices[b as usize]);
        (!h.has_edge(u, v)).then(|| format!("edge ({a}, {b}) = ({u}, {v}) is not an edge of the randomized graph"))
    });
    r.push_first_failure("edges_cross_bipartitions", bad);
    let base = h.base();
    let mut expected = 0u64;
    for (c, verts) in base.cliques().iter().enumerate() {
        let mask = &h.bipartitions()[c].side_mask;
        let (mut a, mut b) = (0u64, 0u64);
        for (i, v) in verts.iter().enumerate() {
            if vertices.binary_search(v).is_ok() {
                if mask.contains(i) {
                    b += 1;
                } else {
                    a += 1;
                }
            }
        }
        expected += a * b;
    }
    let e = graph.edge_count() as u64;
    r.push(
        "induced_edge_count",
        e == expected,
        Some(format!("{e} edges, masks give {expected}")),
    );
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K4Record {
    /// `None` when the graph is above the exhaustive cap.
    pub exhaustive: Option<bool>,
    pub structural: bool,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaRecord {
    pub mode: AlphaMode,
    /// Exact independence number, or the best lower bound found.
    pub value: usize,
    pub t: usize,
    pub verdict: Verdict,
    /// An independent set of size `value`.
    pub witness: Vec<u32>,
    pub transcript: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingRecord {
    pub p_requested: f64,
    pub p_used: f64,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub tool: String,
    pub profile: String,
    pub q: u64,
    pub master_seed: u64,
    pub modulus: String,
    pub masks_digest: String,
    pub sampling: SamplingRecord,
    pub vertices: Vec<u32>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub edge_digest: String,
    pub k4_free: K4Record,
    pub alpha: AlphaRecord,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    /// Seconds since the Unix epoch; not part of re-verification.
    pub timestamp: u64,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub k4_cap: usize,
    pub alpha_cap: usize,
    pub node_budget: u64,
    pub profile: String,
    pub modulus: String,
    pub master_seed: u64,
}

/// Greedy minimum-degree independent set improved by 1-for-2 swaps.
pub fn greedy_independent_set(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut set = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (deg[v], v)) {
        set.push(v as u32);
        let mut gone = vec![v];
        gone.extend(g.neighbors(v as u32).iter().map(|&w| w as usize).filter(|&w| alive[w]));
        for &x in &gone {
            alive[x] = false;
        }
        for &x in &gone {
            for &w in g.neighbors(x as u32) {
                if alive[w as usize] {
                    deg[w as usize] -= 1;
                }
            }
        }
    }
    // Swap one set vertex for two non-adjacent vertices whose only set
    // neighbor it is.
    loop {
        let mut in_set = vec![false; n];
        for &v in &set {
            in_set[v as usize] = true;
        }
        let tight: Vec<Vec<u32>> = (0..n as u32)
            .map(|w| g.neighbors(w).iter().copied().filter(|&x| in_set[x as usize]).collect())
            .collect();
        let mut improved = false;
        'swap: for &s in &set {
            let cands: Vec<u32> = (0..n as u32)
                .filter(|&w| !in_set[w as usize] && tight[w as usize] == [s])
                .collect();
            for (i, &a) in cands.iter().enumerate() {
                for &b in &cands[i + 1..] {
                    if !g.has_edge(a, b) {
                        set.retain(|&x| x != s);
                        set.extend([a, b]);
                        improved = true;
                        break 'swap;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    set.sort_unstable();
    set
}

fn alpha_record(g: &Graph, t: usize, opts: &CertifyOptions) -> AlphaRecord {
    let (mode, found, transcript) = match independence_number_with(g, opts.alpha_cap, opts.node_budget) {
        Ok(IndependentSet { witness, .. }) => (
            AlphaMode::Exact,
            witness,
            "branch and bound on the complement with greedy coloring bounds".to_string(),
        ),
        Err(e) => (
            AlphaMode::Sampled,
            greedy_independent_set(g),
            format!("exact search unavailable ({e}); value is a greedy lower bound only"),
        ),
    };
    let verdict = if found.len() >= t {
        Verdict::Fail
    } else if mode == AlphaMode::Exact {
        Verdict::Pass
    } else {
        Verdict::Unverified
    };
    let witness = if verdict == Verdict::Fail {
        found[..t].to_vec()
    } else {
        found.clone()
    };
    AlphaRecord {
        mode,
        value: found.len(),
        t,
        verdict,
        witness,
        transcript,
    }
}

fn k4_record(h: &K4FreeGraph, s: &SampledGraph, cap: usize) -> K4Record {
    let structural = verify_induced_structural(h, &s.vertices, &s.graph);
    let exhaustive = (s.graph.n() <= cap).then(|| s.graph.to_dense().find_k4s(1));
    let mut detail = structural.failures().next().and_then(|c| c.detail.clone());
    if let Some(Some(k)) = exhaustive.as_ref().map(|f| f.first()) {
        detail = Some(format!("K4 {k:?}"));
    }
    let exhaustive = exhaustive.map(|f| f.is_empty());
    K4Record {
        exhaustive,
        structural: structural.all_passed(),
        passed: structural.all_passed() && exhaustive.unwrap_or(true),
        detail,
    }
}

/// Runs the K4 checks (mask path always, enumeration within the cap) and the
/// independence number bound, and records everything needed to re-verify.
pub fn certify_witness(h: &K4FreeGraph, s: &SampledGraph, t: usize, opts: &CertifyOptions) -> Certificate {
    let k4_free = k4_record(h, s, opts.k4_cap);
    let alpha = alpha_record(&s.graph, t, opts);
    let verdict = match (k4_free.passed, alpha.verdict) {
        (false, _) | (_, Verdict::Fail) => Verdict::Fail,
        (true, v) => v,
    };
    Certificate {
        version: CERTIFICATE_VERSION,
        tool: TOOL.into(),
        profile: opts.profile.clone(),
        q: h.base().q(),
        master_seed: opts.master_seed,
        modulus: opts.modulus.clone(),
        masks_digest: h.masks_digest(),
        sampling: SamplingRecord {
            p_requested: s.p_requested,
            p_used: s.p_used,
            flags: s.flags.clone(),
        },
        vertices: s.vertices.clone(),
        vertex_count: s.graph.n(),
        edge_count: s.graph.edge_count(),
        edge_digest: s.graph.edge_digest(),
        k4_free,
        alpha,
        verdict,
        notes: vec!["edge density floors are checked on sampled vertex sets only".into()],
        timestamp: 0,
    }
}

/// Recomputes every recorded result from `graph` (and, when given, the
/// randomized graph the sample came from). Returns the list of mismatches.
pub fn reverify(cert: &Certificate, graph: &Graph, h: Option<&K4FreeGraph>, opts: &CertifyOptions) -> Vec<String> {
    let mut bad = Vec::new();
    let cmp = |bad: &mut Vec<String>, what: &str, recorded: String, found: String| {
        if recorded != found {
            bad.push(format!("{what}: certificate has {recorded}, recomputed {found}"));
        }
    };
    cmp(&mut bad, "vertex count", cert.vertex_count.to_string(), graph.n().to_string());
    cmp(&mut bad, "edge count", cert.edge_count.to_string(), graph.edge_count().to_string());
    cmp(&mut bad, "edge digest", cert.edge_digest.clone(), graph.edge_digest());
    if let Some(h) = h {
        cmp(&mut bad, "masks digest", cert.masks_digest.clone(), h.masks_digest());
        let s = SampledGraph {
            graph: graph.clone(),
            vertices: cert.vertices.clone(),
            p_requested: cert.sampling.p_requested,
            p_used: cert.sampling.p_used,
            flags: cert.sampling.flags.clone(),
        };
        let k4 = k4_record(h, &s, opts.k4_cap);
        cmp(&mut bad, "K4 record", format!("{:?}", cert.k4_free), format!("{k4:?}"));
    } else if graph.n() <= opts.k4_cap {
        let free = graph.to_dense().find_k4s(1).is_empty();
        cmp(&mut bad, "exhaustive K4 check", format!("{:?}", cert.k4_free.exhaustive), format!("{:?}", Some(free)));
    }
    if let Some((u, v)) = graph.is_independent(&cert.alpha.witness) {
        bad.push(format!("recorded independent set contains edge ({u}, {v})"));
    }
    let alpha = alpha_record(graph, cert.alpha.t, opts);
    cmp(&mut bad, "independence record", format!("{:?}", cert.alpha), format!("{alpha:?}"));
    bad
}

/// Replaces vertex `x` by the independent set `x r .. x r + r - 1`.
pub fn blowup(g: &Graph, r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(Error::InvalidArgument("blowup factor must be at least 1".into()));
    }
    let adj = (0..g.n() * r)
        .map(|v| {
            let x = (v / r) as u32;
            g.neighbors(x)
                .iter()
                .flat_map(|&y| (0..r as u32).map(move |i| y * r as u32 + i))
                .collect()
        })
        .collect();
    Graph::from_symmetric_adjacency(adj)
}

/// Edge coloring of a complete graph with colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub n: usize,
    pub k: u8,
    /// Color of pair `(u, v)` at `u * n + v`, symmetric; 0 on the diagonal.
    pub colors: Vec<u8>,
    pub permutations: Vec<Vec<u32>>,
}

impl ColoredGraph {
    pub fn color(&self, u: u32, v: u32) -> u8 {
        self.colors[u as usize * self.n + v as usize]
    }

    pub fn class(&self, c: u8) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if self.color(u, v) == c {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges).unwrap()
    }

    /// Union of colors `1..k`.
    pub fn union_below_last(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n as u32 {
            for v in u + 1..self.n as u32 {
                if self.color(u, v) < self.k {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges).unwrap()
    }

    pub fn class_sizes(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.k as usize];
        for u in 0..self.n {
            for v in u + 1..self.n {
                let c = self.colors[u * self.n + v];
                if c >= 1 && c <= self.k {
                    out[c as usize - 1] += 1;
                }
            }
        }
        out
    }
}

/// Colors `1..k` are copies of the `r`-blowup under `k - 1` uniform
/// permutations drawn from the seed; a pair in several copies takes the
/// lowest color, and color `k` takes every remaining pair.
pub fn blowup_multicolor(g_t: &Graph, r: usize, k: u8, seed: u64) -> Result<ColoredGraph> {
    let n = g_t.n() * r;
    let perms = (1..k)
        .map(|i| {
            let mut rng = substream(seed, "pipeline/permutation", i as u64);
            let mut p: Vec<u32> = (0..n as u32).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    blowup_multicolor_with(g_t, r, k, perms)
}

pub fn blowup_multicolor_with(g_t: &Graph, r: usize, k: u8, permutations: Vec<Vec<u32>>) -> Result<ColoredGraph> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 colors, got {k}")));
    }
    if permutations.len() != k as usize - 1 {
        return Err(Error::InvalidArgument(format!("{} permutations for {k} colors", permutations.len())));
    }
    let b = blowup(g_t, r)?;
    let n = b.n();
    for p in &permutations {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&x| x as usize >= n || std::mem::replace(&mut seen[x as usize], true)) {
            return Err(Error::InvalidArgument("not a permutation of the blowup".into()));
        }
    }
    let mut colors = vec![0u8; n * n];
    for (i, p) in permutations.iter().enumerate() {
        for (u, v) in b.edges() {
            let (a, c) = (p[u as usize] as usize, p[v as usize] as usize);
            if colors[a * n + c] == 0 {
                colors[a * n + c] = i as u8 + 1;
                colors[c * n + a] = i as u8 + 1;
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && colors[u * n + v] == 0 {
                colors[u * n + v] = k;
            }
        }
    }
    Ok(ColoredGraph {
        n,
        k,
        colors,
        permutations,
    })
}

/// Partition completeness, no K4 in colors `1..k`, and no `K_t` in color
/// `k` (no independent `t`-set in the union of the others).
pub fn verify_coloring(c: &ColoredGraph, t: usize, k4_cap: usize, alpha_cap: usize, node_budget: u64) -> Report {
    let mut r = Report::new();
    let sizes = c.class_sizes();
    let total: u64 = sizes.iter().sum();
    let pairs = (c.n * c.n.saturating_sub(1) / 2) as u64;
    let symmetric = (0..c.n).all(|u| (0..c.n).all(|v| c.colors[u * c.n + v] == c.colors[v * c.n + u]));
    r.push(
        "partition",
        total == pairs && symmetric,
        Some(format!("color class sizes {sizes:?} sum to {total} of {pairs} pairs")),
    );
    for col in 1..c.k {
        let name = format!("color_{col}_k4_free");
        if c.n > k4_cap {
            r.push(name, false, Some(format!("{} vertices above the exhaustive cap {k4_cap}", c.n)));
            continue;
        }
        let found = c.class(col).to_dense().find_k4s(1);
        r.push_first_failure(name, found.first().map(|k| format!("K4 {k:?}")));
    }
    let name = format!("color_{}_no_k{}", c.k, t);
    if t > c.n {
        r.push(name, true, Some(format!("t = {t} exceeds {} vertices", c.n)));
    } else {
        match independence_number_with(&c.union_below_last(), alpha_cap, node_budget) {
            Ok(a) if a.size < t => r.push(name, true, Some(format!("largest K in last color has {} vertices", a.size))),
            Ok(a) => r.push(name, false, Some(format!("K_{t} on {:?}", &a.witness[..t]))),
            Err(e) => r.push(name, false, Some(format!("not decided: {e}"))),
        }
    }
    r
}

/// Expected number of independent `t`-sets in the union of the first `k - 1`
/// colors: `(C(T,s) (s r)^t / t!)^{k-1} C(rT,t)^{-(k-2)}`.
pub fn expected_independent_count(big_t: u64, s: u64, r: u64, t: u64, k: u32) -> BigRational {
    let fact: BigUint = (1..=t).fold(BigUint::one(), |a, i| a * i);
    let per = BigRational::new(
        BigInt::from(binomial(big_t, s) * Pow::pow(BigUint::from(s * r), t as u32)),
        BigInt::from(fact),
    );
    let denom = BigRational::from_integer(BigInt::from(binomial(r * big_t, t)));
    let mut value = Pow::pow(per, k - 1);
    if k >= 2 {
        value /= Pow::pow(denom, k - 2);
    }
    value
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCountReport {
    pub big_t: u64,
    pub s: u64,
    pub r: u64,
    pub t: u64,
    pub k: u32,
    pub numerator: String,
    pub denominator: String,
    pub approx: f64,
    pub below_one: bool,
}

pub fn expected_count_report(big_t: u64, s: u64, r: u64, t: u64, k: u32) -> ExpectedCountReport {
    let v = expected_independent_count(big_t, s, r, t, k);
    let approx = ratio_to_f64(&v);
    ExpectedCountReport {
        big_t,
        s,
        r,
        t,
        k,
        numerator: v.numer().to_string(),
        denominator: v.denom().to_string(),
        approx,
        below_one: v < BigRational::one(),
    }
}

fn ratio_to_f64(v: &BigRational) -> f64 {
    // Shift both parts down to at most 64 significant bits before dividing.
    let shift = |x: &BigInt| -> (f64, i64) {
        let bits = x.bits() as i64;
        let drop = (bits - 64).max(0);
        let top: BigInt = x >> drop as usize;
        (top.to_string().parse::<f64>().unwrap(), drop)
    };
    let (a, da) = shift(v.numer());
    let (b, db) = shift(v.denom());
    a / b * 2f64.powi((da - db) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::independent_sets::independence_number;
    use crate::k4free::randomize;
    use crate::plane::ProjectivePlane;
    use crate::secant_graph::{build_secant_graph, SecantGraph};
    use crate::unital::build_unital;

    fn secant_graph(q: u64) -> SecantGraph {
        let plane = ProjectivePlane::new(FieldSpec::for_q(q).unwrap());
        build_secant_graph(&build_unital(&plane).unwrap()).unwrap()
    }

    fn opts() -> CertifyOptions {
        CertifyOptions {
            k4_cap: 250,
            alpha_cap: 400,
            node_budget: 10_000_000,
            profile: "desk".into(),
            modulus: "x^2+2x+2".into(),
            master_seed: 42,
        }
    }

    #[test]
    fn full_sample_is_identity() {
        let g = secant_graph(3);
        let h = randomize(&g, 3);
        let s = sample_vertices(&h, 1.0, 9).unwrap();
        assert_eq!(s.graph.edge_digest(), h.materialize().edge_digest());
        assert_eq!(s.vertices.len(), 63);
        let s = sample_vertices(&h, 2.5, 9).unwrap();
        assert_eq!(s.p_used, 1.0);
        assert_eq!(s.flags.len(), 2);
        assert!(sample_vertices(&h, 0.0, 9).is_err());
    }

    #[test]
    fn sample_size_is_binomial() {
        let g = secant_graph(3);
        let h = randomize(&g, 3);
        let mean = (0..1000).map(|s| sample_vertices(&h, 0.5, s).unwrap().vertices.len()).sum::<usize>() as f64 / 1000.0;
        let sigma = (63.0f64 * 0.25 / 1000.0).sqrt();
        assert!((mean - 31.5).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn regime_flag_at_q8() {
        let p = (8f64.ln()).powi(2) / 8.0;
        assert!((p - 0.540).abs() < 1e-3);
        let g = secant_graph(2);
        let h = randomize(&g, 0);
        let s = sample_vertices(&h, p, 1).unwrap();
        assert!(s.flags[0].contains("outside the asymptotic regime"));
    }

    #[test]
    fn certificate_pass_fail_and_reverify() {
        let g = secant_graph(3);
        let h = randomize(&g, 42);
        let s = sample_vertices(&h, 0.5, 42).unwrap();
        let alpha = independence_number(&s.graph).unwrap().size;
        let c = certify_witness(&h, &s, alpha + 1, &opts());
        assert_eq!(c.verdict, Verdict::Pass);
        assert_eq!(c.alpha.mode, AlphaMode::Exact);
        assert_eq!(c.k4_free.exhaustive, Some(true));
        assert!(reverify(&c, &s.graph, Some(&h), &opts()).is_empty());
        assert!(reverify(&c, &s.graph, None, &opts()).is_empty());
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), c.to_json());

        let fail = certify_witness(&h, &s, 1, &opts());
        assert_eq!(fail.verdict, Verdict::Fail);
        assert_eq!(fail.alpha.witness.len(), 1);

        let (u, v) = s.graph.edges().next().unwrap();
        let edges: Vec<_> = s.graph.edges().filter(|&e| e != (u, v)).collect();
        let tampered = Graph::from_edges(s.graph.n(), &edges).unwrap();
        let bad = reverify(&c, &tampered, Some(&h), &opts());
        assert!(bad.iter().any(|m| m.starts_with("edge digest")));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        assert_eq!(to_canonical_json(&S { zeta: 1, alpha: 2 }), "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n");
    }

    #[test]
    fn blowup_small_cases() {
        let e = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let b = blowup(&e, 2).unwrap();
        assert_eq!(b.edges().collect::<Vec<_>>(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        let tri = Graph::complete(3);
        let b = blowup(&tri, 2).unwrap();
        assert_eq!(b.edge_count(), 12);
        assert_eq!(independence_number(&b).unwrap().size, 2);
        assert_eq!(blowup(&tri, 1).unwrap(), tri);
        assert!(blowup(&tri, 0).is_err());
    }

    #[test]
    fn multicolor_on_c5() {
        let c = blowup_multicolor(&Graph::cycle(5), 1, 3, 11).unwrap();
        let r = verify_coloring(&c, 6, 250, 400, 1_000_000);
        assert!(r.passed("partition") && r.passed("color_1_k4_free") && r.passed("color_2_k4_free"));
        assert!(r.passed("color_3_no_k6"));
        for col in 1..3 {
            let g = c.class(col);
            let dense = g.to_dense();
            for (u, v) in g.edges() {
                assert_eq!(dense.row(u as usize).intersection_count(dense.row(v as usize)), 0);
            }
        }
    }

    #[test]
    fn identical_permutations_empty_second_color() {
        let p: Vec<u32> = vec![3, 0, 4, 1, 2];
        let c = blowup_multicolor_with(&Graph::cycle(5), 1, 3, vec![p.clone(), p]).unwrap();
        assert_eq!(c.class_sizes(), vec![5, 0, 5]);
    }

    #[test]
    fn planted_k4_reported() {
        let mut c = blowup_multicolor(&Graph::cycle(5), 1, 3, 0).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    c.colors[a * 5 + b] = 1;
                }
            }
        }
        let r = verify_coloring(&c, 3, 250, 400, 1000);
        assert!(!r.passed("color_1_k4_free"));
        assert!(r.get("color_1_k4_free").unwrap().detail.as_ref().unwrap().contains("[0, 1, 2, 3]"));
    }

    #[test]
    fn expected_count_rational() {
        // k = 2: C(T,s)(sr)^t/t! with T=5, s=2, r=1, t=2 -> 10 * 4 / 2 = 20
        let v = expected_independent_count(5, 2, 1, 2, 2);
        assert_eq!(v, BigRational::from_integer(BigInt::from(20)));
        // k = 3: 20^2 / C(5,2) = 40
        let v = expected_independent_count(5, 2, 1, 2, 3);
        assert_eq!(v, BigRational::from_integer(BigInt::from(40)));
        let rep = expected_count_report(20, 2, 1, 10, 3);
        assert!((rep.approx - ratio_to_f64(&expected_independent_count(20, 2, 1, 10, 3))).abs() < 1e-12);
        // (C(20,2) 2^10 / 10!)^2 / C(20,10)
        let exact = (190.0f64 * 1024.0 / 3628800.0).powi(2) / 184756.0;
        assert!((rep.approx / exact - 1.0).abs() < 1e-9);
        assert!(rep.below_one);
    }
}
