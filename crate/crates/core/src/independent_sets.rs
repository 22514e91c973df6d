//! Fingerprint/container traces, the container count bound, and exact
//! independence oracles for small graphs.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BitSet, DenseGraph, Graph};
use crate::streams::substream;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainerParams {
    /// Fingerprint budget.
    pub r: usize,
    /// Container size threshold `R`.
    pub max_container: usize,
    pub alpha: f64,
}

impl ContainerParams {
    /// Whether `e^{-alpha r} n <= R`.
    pub fn condition_holds(&self, n: usize) -> bool {
        self.condition_lhs(n) <= self.max_container as f64
    }

    pub fn condition_lhs(&self, n: usize) -> f64 {
        (-self.alpha * self.r as f64).exp() * n as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContainerPair {
    pub fingerprint: Vec<u32>,
    pub container: Vec<u32>,
}

impl ContainerPair {
    /// Whether `set` lies inside fingerprint plus container.
    pub fn covers(&self, set: &[u32]) -> bool {
        set.iter()
            .all(|v| self.fingerprint.binary_search(v).is_ok() || self.container.binary_search(v).is_ok())
    }
}

/// Replays the deterministic selection on `g` for the independent set `set`:
/// while `|S| < r` and `|X| > R`, take the vertex of largest degree in `g[X]`
/// (lowest ID on ties); if it is in `set` it joins `S` and its closed
/// neighborhood leaves `X`, otherwise only the vertex leaves `X`.
pub fn kw_trace(g: &Graph, set: &[u32], params: &ContainerParams) -> Result<ContainerPair> {
    if let Some((u, v)) = g.is_independent(set) {
        return Err(Error::NotIndependent(u, v));
    }
    let n = g.n();
    let mut in_set = vec![false; n];
    for &v in set {
        in_set[v as usize] = true;
    }
    let mut in_x = vec![true; n];
    let mut deg: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut size = n;
    let mut fingerprint = Vec::new();

    let remove = |v: usize, in_x: &mut Vec<bool>, deg: &mut Vec<usize>, size: &mut usize| {
        in_x[v] = false;
        *size -= 1;
        for &w in g.neighbors(v as u32) {
            if in_x[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    };

    while fingerprint.len() < params.r && size > params.max_container {
        let v = (0..n)
            .filter(|&v| in_x[v])
            .min_by_key(|&v| (std::cmp::Reverse(deg[v]), v))
            .expect("X is nonempty");
        if in_set[v] {
            fingerprint.push(v as u32);
            for &w in g.neighbors(v as u32) {
                if in_x[w as usize] {
                    remove(w as usize, &mut in_x, &mut deg, &mut size);
                }
            }
        }
        remove(v, &mut in_x, &mut deg, &mut size);
    }
    fingerprint.sort_unstable();
    let container = (0..n as u32).filter(|&v| in_x[v as usize]).collect();
    Ok(ContainerPair { fingerprint, container })
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, r) C(R, t - r)`, the number of independent `t`-sets permitted by the
/// container argument. Refuses parameters with `e^{-alpha r} n > R`.
pub fn count_bound(g: &Graph, params: &ContainerParams, t: usize) -> Result<BigUint> {
    let n = g.n();
    if !params.condition_holds(n) {
        return Err(Error::ConditionViolated {
            lhs: params.condition_lhs(n),
            rhs: params.max_container as u64,
        });
    }
    if t < params.r {
        return Err(Error::InvalidArgument(format!("t = {t} is below r = {}", params.r)));
    }
    Ok(binomial(n as u64, params.r as u64) * binomial(params.max_container as u64, (t - params.r) as u64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub alpha: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest observed `2 e(X) / |X|^2`.
    pub min_density: f64,
}

/// Samples sets `X` with `|X| >= R` and tests `2 e(X) >= alpha |X|^2` on each.
/// This is evidence for the density hypothesis, not a proof of it.
pub fn sample_density_hypothesis(g: &Graph, params: &ContainerParams, trials: usize, seed: u64) -> DensityCheck {
    let n = g.n();
    let lo = params.max_container.max(1).min(n);
    let mut violations = 0;
    let mut min_density = f64::INFINITY;
    for t in 0..trials {
        let mut rng = substream(seed, "independent_sets/density", t as u64);
        let size = lo + (rand::Rng::gen_range(&mut rng, 0..=n - lo));
        if size == 0 {
            continue;
        }
        let x: Vec<u32> = sample(&mut rng, n, size).iter().map(|v| v as u32).collect();
        let e = g.edges_within(&x) as f64;
        let dens = 2.0 * e / (size * size) as f64;
        min_density = min_density.min(dens);
        if dens < params.alpha {
            violations += 1;
        }
    }
    DensityCheck {
        alpha: params.alpha,
        samples: trials,
        violations,
        min_density,
    }
}

pub const DEFAULT_ALPHA_CAP: usize = 400;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    pub size: usize,
    pub witness: Vec<u32>,
}

/// Exact independence number by branch and bound for a maximum clique of the
/// complement, bounded by greedy colorings.
pub fn independence_number(g: &Graph) -> Result<IndependentSet> {
    independence_number_with(g, DEFAULT_ALPHA_CAP, DEFAULT_NODE_BUDGET)
}

pub fn independence_number_with(g: &Graph, cap: usize, node_budget: u64) -> Result<IndependentSet> {
    let n = g.n();
    if n > cap {
        return Err(Error::TooLarge { n, limit: cap });
    }
    // Relabel by decreasing complement degree, which tightens color bounds.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut pos = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (pos[u as usize], pos[v as usize]);
        edges.push((a.min(b), a.max(b)));
    }
    let comp = DenseGraph::from(&Graph::from_edges(n, &edges)?).complement();

    let mut s = Search {
        g: &comp,
        best: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    let mut current = Vec::new();
    s.expand(&mut current, BitSet::full(n))?;
    let mut witness: Vec<u32> = s.best.iter().map(|&i| order[i as usize]).collect();
    witness.sort_unstable();
    Ok(IndependentSet {
        size: witness.len(),
        witness,
    })
}

struct Search<'a> {
    g: &'a DenseGraph,
    best: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Greedy sequential coloring of `p`; returns vertices with their color
    /// numbers, colors nondecreasing.
    fn color(&self, p: &BitSet) -> Vec<(u32, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(self.g.row(v));
                uncolored.remove(v);
                out.push((v as u32, color));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<u32>, mut p: BitSet) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Timeout(self.budget));
        }
        let colored = self.color(&p);
        for &(v, c) in colored.iter().rev() {
            if current.len() + c <= self.best.len() {
                return Ok(());
            }
            current.push(v);
            let next = p.intersection(self.g.row(v as usize));
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next)?;
            }
            current.pop();
            p.remove(v as usize);
        }
        Ok(())
    }
}

pub const COUNT_LIMIT: usize = 30;

/// Exact number of independent sets of size `t`, for graphs on at most 30
/// vertices.
pub fn count_independent_sets(g: &Graph, t: usize) -> Result<u64> {
    let n = g.n();
    if n > COUNT_LIMIT {
        return Err(Error::TooLarge { n, limit: COUNT_LIMIT });
    }
    let closed: Vec<u32> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | 1 << w))
        .collect();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(count_rec(full, t, &closed, &mut memo))
}

fn count_rec(p: u32, t: usize, closed: &[u32], memo: &mut HashMap<(u32, usize), u64>) -> u64 {
    if t == 0 {
        return 1;
    }
    if (p.count_ones() as usize) < t {
        return 0;
    }
    if let Some(&c) = memo.get(&(p, t)) {
        return c;
    }
    let v = p.trailing_zeros() as usize;
    let c = count_rec(p & !(1 << v), t, closed, memo) + count_rec(p & !closed[v], t - 1, closed, memo);
    memo.insert((p, t), c);
    c
}
