//! Cross-checks against small independent reimplementations.

use std::collections::BTreeMap;

use unital_ramsey::field::FieldSpec;
use unital_ramsey::graph::Graph;
use unital_ramsey::independent_sets::{count_independent_sets, independence_number};
use unital_ramsey::plane::ProjectivePlane;
use unital_ramsey::secant_graph::{build_secant_graph, SecantGraph};
use unital_ramsey::unital::{build_unital, Unital};

fn build(q: u64) -> (Unital, SecantGraph) {
    let plane = ProjectivePlane::new(FieldSpec::for_q(q).unwrap());
    let u = build_unital(&plane).unwrap();
    let g = build_secant_graph(&u).unwrap();
    (u, g)
}

/// GF(p^2) as a + b s with s^2 = c, c a non-residue mod p (p odd).
#[derive(Clone, Copy)]
struct Quad {
    p: i64,
    c: i64,
}

impl Quad {
    fn for_prime(p: i64) -> Self {
        let c = (2..p).find(|&c| (1..p).all(|x| x * x % p != c)).unwrap();
        Quad { p, c }
    }
    fn add(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }
    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        let p = self.p;
        ((x.0 * y.0 + self.c * x.1 * y.1) % p, (x.0 * y.1 + x.1 * y.0) % p)
    }
    /// x^{p+1} = a^2 - c b^2.
    fn norm(&self, x: (i64, i64)) -> i64 {
        ((x.0 * x.0 - self.c * x.1 * x.1) % self.p + self.p) % self.p
    }
    fn elements(&self) -> Vec<(i64, i64)> {
        (0..self.p).flat_map(|a| (0..self.p).map(move |b| (a, b))).collect()
    }
}

fn normalized_triples<T: Copy>(els: &[T], zero: T, one: T) -> Vec<[T; 3]> {
    let mut out = vec![[zero, zero, one]];
    for &z in els {
        out.push([zero, one, z]);
    }
    for &y in els {
        for &z in els {
            out.push([one, y, z]);
        }
    }
    out
}

#[test]
fn hermitian_counts_over_quadratic_extensions() {
    for p in [3i64, 5, 7] {
        let f = Quad::for_prime(p);
        let els = f.elements();
        let pts = normalized_triples(&els, (0, 0), (1, 0));
        let unital: Vec<[(i64, i64); 3]> = pts
            .iter()
            .copied()
            .filter(|t| (f.norm(t[0]) + f.norm(t[1]) + f.norm(t[2])) % p == 0)
            .collect();
        let q = p as usize;
        assert_eq!(unital.len(), q * q * q + 1);
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for l in &pts {
            let on = unital
                .iter()
                .filter(|x| {
                    let s = f.add(f.add(f.mul(l[0], x[0]), f.mul(l[1], x[1])), f.mul(l[2], x[2]));
                    s == (0, 0)
                })
                .count();
            *hist.entry(on).or_default() += 1;
        }
        let expect = BTreeMap::from([(1, q * q * q + 1), (q + 1, q * q * (q * q - q + 1))]);
        assert_eq!(hist, expect, "p = {p}");

        let (u, g) = build(p as u64);
        assert_eq!(u.n_points(), unital.len());
        assert_eq!(u.secants().len(), hist[&(q + 1)]);
        assert_eq!(u.tangents().len(), hist[&1]);
        assert_eq!(g.n(), hist[&(q + 1)]);
    }
}

#[test]
fn gf4_unital_by_hand() {
    // GF(4) = {0, 1, w, w^2}; x^3 is 1 for every nonzero x.
    let pts = normalized_triples(&[0u8, 1, 2, 3], 0, 1);
    let count = pts
        .iter()
        .filter(|t| t.iter().filter(|&&x| x != 0).count() % 2 == 0)
        .count();
    assert_eq!(count, 9);
    assert_eq!(build(2).0.n_points(), 9);
}

#[test]
fn srg_by_matrix_square() {
    for q in [2u64, 3, 4] {
        let (_, g) = build(q);
        let n = g.n();
        let mut a = vec![0u32; n * n];
        for (u, v) in g.graph().edges() {
            a[u as usize * n + v as usize] = 1;
            a[v as usize * n + u as usize] = 1;
        }
        let p = g.params();
        for i in 0..n {
            for j in 0..n {
                let s: u32 = (0..n).map(|k| a[i * n + k] * a[k * n + j]).sum();
                let want = if i == j {
                    p.degree
                } else if a[i * n + j] == 1 {
                    p.lambda
                } else {
                    p.mu
                };
                assert_eq!(s as u64, want, "q={q} ({i},{j})");
            }
        }
    }
}

#[test]
fn k4_census_every_k4_is_three_concurrent_secants() {
    for q in [2u64, 3, 4] {
        let (u, g) = build(q);
        let n = g.n();
        let adj = |a: usize, b: usize| g.graph().has_edge(a as u32, b as u32);
        let concurrent = |a: usize, b: usize, c: usize| {
            let sp = u.secant_points();
            sp[a].iter().any(|x| sp[b].contains(x) && sp[c].contains(x))
        };
        let mut k4s = 0u64;
        for a in 0..n {
            let na: Vec<usize> = g.graph().neighbors(a as u32).iter().map(|&x| x as usize).filter(|&x| x > a).collect();
            for (i, &b) in na.iter().enumerate() {
                for (j, &c) in na.iter().enumerate().skip(i + 1) {
                    if !adj(b, c) {
                        continue;
                    }
                    for &d in &na[j + 1..] {
                        if adj(b, d) && adj(c, d) {
                            k4s += 1;
                            assert!(
                                concurrent(a, b, c) || concurrent(a, b, d) || concurrent(a, c, d) || concurrent(b, c, d),
                                "q={q}: K4 {a} {b} {c} {d}"
                            );
                        }
                    }
                }
            }
        }
        assert!(k4s > 0);
        assert_eq!(g.graph().to_dense().count_k4s(), k4s);
    }
}

fn alpha_by_scan(g: &Graph) -> usize {
    let n = g.n();
    let masks: Vec<u32> = (0..n as u32).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

#[test]
fn alpha_of_smallest_secant_graph() {
    let (_, g) = build(2);
    assert_eq!(g.n(), 12);
    // The complement is 2-regular.
    assert_eq!(g.graph().complement().edge_count(), 12);
    assert_eq!(alpha_by_scan(g.graph()), 3);
    assert_eq!(independence_number(g.graph()).unwrap().size, 3);
}

#[test]
fn independent_counts_match_scan() {
    let (_, g) = build(2);
    let n = g.n();
    let masks: Vec<u32> = (0..n as u32).map(|v| g.graph().neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    let mut by_size = [0u64; 13];
    for s in 0u32..1 << n {
        if (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0) {
            by_size[s.count_ones() as usize] += 1;
        }
    }
    for (t, &c) in by_size.iter().enumerate() {
        assert_eq!(count_independent_sets(g.graph(), t).unwrap(), c, "t={t}");
    }
}
