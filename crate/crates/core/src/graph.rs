//! Simple undirected graphs: sorted adjacency lists for large sparse-ish
//! graphs and bitset rows for the small exact oracles.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Fixed-capacity bitset over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Drops every element `<= i`.
    pub fn clear_up_to(&mut self, i: usize) {
        let w = i / 64;
        for word in &mut self.words[..w] {
            *word = 0;
        }
        let bit = i % 64;
        self.words[w] &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n as u32)
            .map(|u| (0..n as u32).filter(|&v| v != u).collect())
            .collect();
        Graph {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edges(n, &edges).expect("cycle on at least 3 vertices")
    }

    /// Rejects self-loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(Error::InvalidArgument(format!("bad edge ({u}, {v}) for n = {n}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Self::from_adjacency(adj)
    }

    /// Sorts each list and rejects duplicate entries, without the symmetry scan.
    pub(crate) fn from_symmetric_adjacency(mut adj: Vec<Vec<u32>>) -> Result<Self> {
        let mut twice = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvariantViolation(format!("duplicate edge ({u}, {})", w[0])));
            }
            twice += list.len();
        }
        Ok(Graph { adj, m: twice / 2 })
    }

    /// Sorts each list and rejects duplicates or asymmetric entries.
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Result<Self> {
        let n = adj.len();
        let mut twice = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvariantViolation(format!("duplicate edge ({u}, {})", w[0])));
            }
            if list.iter().any(|&v| v as usize == u || v as usize >= n) {
                return Err(Error::InvariantViolation(format!("vertex {u} has an invalid neighbor")));
            }
            twice += list.len();
        }
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if adj[v as usize].binary_search(&(u as u32)).is_err() {
                    return Err(Error::InvariantViolation(format!("edge ({u}, {v}) is not symmetric")));
                }
            }
        }
        Ok(Graph { adj, m: twice / 2 })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u as u32).map(move |&v| (u as u32, v)))
    }

    pub fn common_neighbors(&self, u: u32, v: u32) -> usize {
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[u32]) -> Graph {
        let mut pos = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let adj: Vec<Vec<u32>> = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<u32> = self.adj[v as usize]
                    .iter()
                    .map(|&w| pos[w as usize])
                    .filter(|&w| w != u32::MAX)
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adj, m }
    }

    /// Number of edges with both ends in `vertices` (which must be distinct).
    pub fn edges_within(&self, vertices: &[u32]) -> usize {
        let mut mark = vec![false; self.n()];
        for &v in vertices {
            mark[v as usize] = true;
        }
        let twice: usize = vertices
            .iter()
            .map(|&v| self.adj[v as usize].iter().filter(|&&w| mark[w as usize]).count())
            .sum();
        twice / 2
    }

    pub fn complement(&self) -> Graph {
        let n = self.n() as u32;
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|u| {
                let own = &self.adj[u as usize];
                (0..n).filter(|&v| v != u && own.binary_search(&v).is_err()).collect()
            })
            .collect();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adj, m }
    }

    pub fn is_independent(&self, set: &[u32]) -> Option<(u32, u32)> {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if self.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    pub fn to_dense(&self) -> DenseGraph {
        DenseGraph::from(self)
    }

    /// Edge-list text: header `p edge <n> <m>`, then `u v` per edge with
    /// `u < v` in lexicographic order, 0-based.
    pub fn to_edge_list(&self) -> String {
        let mut out = Vec::with_capacity(16 * self.m + 32);
        self.write_edge_list(&mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    pub fn write_edge_list<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p edge {} {}", self.n(), self.m)?;
        let mut line = String::new();
        for (u, v) in self.edges() {
            line.clear();
            writeln!(line, "{u} {v}").unwrap();
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        if parts.len() != 4 || parts[0] != "p" || parts[1] != "edge" {
            return Err(parse_err(hl, "expected `p edge <n> <m>`"));
        }
        let n: usize = parts[2].parse().map_err(|_| parse_err(hl, "bad vertex count"))?;
        let m: usize = parts[3].parse().map_err(|_| parse_err(hl, "bad edge count"))?;
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err(ln, "expected `u v`"));
            };
            let u: u32 = a.parse().map_err(|_| parse_err(ln, "bad vertex"))?;
            let v: u32 = b.parse().map_err(|_| parse_err(ln, "bad vertex"))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hl + 1,
                msg: format!("header says {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    /// SHA-256 of the canonical edge-list text, hex encoded.
    pub fn edge_digest(&self) -> String {
        let mut h = std::io::BufWriter::new(Sha256::new());
        self.write_edge_list(&mut h).unwrap();
        hex::encode(h.into_inner().ok().unwrap().finalize())
    }
}

/// Bitset adjacency rows, for graphs small enough that `n^2` bits is cheap.
#[derive(Clone, Debug)]
pub struct DenseGraph {
    rows: Vec<BitSet>,
}

impl From<&Graph> for DenseGraph {
    fn from(g: &Graph) -> Self {
        let n = g.n();
        let rows = (0..n as u32)
            .map(|u| {
                let mut b = BitSet::new(n);
                for &v in g.neighbors(u) {
                    b.insert(v as usize);
                }
                b
            })
            .collect();
        DenseGraph { rows }
    }
}

impl DenseGraph {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn complement(&self) -> DenseGraph {
        let n = self.n();
        let rows = (0..n)
            .map(|u| {
                let mut b = BitSet::full(n);
                b.remove(u);
                b.difference_with(&self.rows[u]);
                b
            })
            .collect();
        DenseGraph { rows }
    }

    /// Visits every K4 `a < b < c < d`, extending triangles through common
    /// neighbors in increasing ID order. The visitor returns `false` to stop.
    pub fn for_each_k4(&self, mut visit: impl FnMut([u32; 4]) -> bool) {
        let n = self.n();
        for a in 0..n {
            let mut na = self.rows[a].clone();
            na.clear_up_to(a);
            for b in na.iter() {
                let mut nab = na.intersection(&self.rows[b]);
                nab.clear_up_to(b);
                for c in nab.iter() {
                    let mut nabc = nab.intersection(&self.rows[c]);
                    nabc.clear_up_to(c);
                    for d in nabc.iter() {
                        if !visit([a as u32, b as u32, c as u32, d as u32]) {
                            return;
                        }
                    }
                }
            }
        }
    }

    pub fn find_k4s(&self, limit: usize) -> Vec<[u32; 4]> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        self.for_each_k4(|k| {
            out.push(k);
            out.len() < limit
        });
        out
    }

    pub fn count_k4s(&self) -> u64 {
        let mut c = 0;
        self.for_each_k4(|_| {
            c += 1;
            true
        });
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_basics() {
        let mut b = BitSet::new(130);
        for i in [0, 5, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        assert_eq!(b.count(), 5);
        b.clear_up_to(63);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![64, 129]);
        assert_eq!(b.first(), Some(64));
        b.clear_up_to(129);
        assert!(b.is_empty());
    }

    #[test]
    fn k4_counts() {
        assert_eq!(Graph::complete(4).to_dense().count_k4s(), 1);
        assert_eq!(Graph::complete(6).to_dense().count_k4s(), 15);
        assert_eq!(Graph::cycle(5).to_dense().count_k4s(), 0);
        assert_eq!(Graph::complete(6).to_dense().find_k4s(3).len(), 3);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = Graph::from_edges(5, &[(3, 1), (0, 4), (1, 2)]).unwrap();
        let text = g.to_edge_list();
        assert_eq!(text, "p edge 5 3\n0 4\n1 2\n1 3\n");
        let back = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_edge_list(), text);
        assert!(Graph::parse_edge_list("p edge 3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("p edge 3 1\n0 0\n").is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn complement_and_induced() {
        let c5 = Graph::cycle(5);
        let comp = c5.complement();
        assert_eq!(comp.edge_count(), 5);
        assert!(comp.has_edge(0, 2));
        let sub = c5.induced(&[4, 0, 1]);
        assert_eq!(sub.edge_count(), 2);
        assert!(sub.has_edge(0, 1) && sub.has_edge(1, 2) && !sub.has_edge(0, 2));
        assert_eq!(c5.edges_within(&[0, 1, 2, 3]), 3);
        assert_eq!(c5.is_independent(&[0, 2]), None);
        assert_eq!(c5.is_independent(&[0, 1]), Some((0, 1)));
    }
}
