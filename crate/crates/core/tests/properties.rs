use std::sync::OnceLock;

use proptest::prelude::*;

use unital_ramsey::field::{Elem, FieldSpec};
use unital_ramsey::graph::Graph;
use unital_ramsey::independent_sets::{
    count_bound, count_independent_sets, independence_number, kw_trace, ContainerParams,
};
use unital_ramsey::pipeline::{blowup, blowup_multicolor};
use unital_ramsey::plane::ProjectivePlane;
use unital_ramsey::secant_graph::{build_secant_graph, DecompositionParams, SecantGraph};
use unital_ramsey::unital::build_unital;

fn secant_graph(q: u64) -> &'static SecantGraph {
    static CACHE: OnceLock<Vec<SecantGraph>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        [2u64, 3, 4]
            .iter()
            .map(|&q| build_secant_graph(&build_unital(&ProjectivePlane::new(FieldSpec::for_q(q).unwrap())).unwrap()).unwrap())
            .collect()
    });
    &all[[2u64, 3, 4].iter().position(|&x| x == q).unwrap()]
}

fn field(q: u64) -> &'static FieldSpec {
    static CACHE: OnceLock<Vec<FieldSpec>> = OnceLock::new();
    let all = CACHE.get_or_init(|| [9u64, 16, 25].iter().map(|&q| FieldSpec::for_q(q).unwrap()).collect());
    &all[[9u64, 16, 25].iter().position(|&x| x == q).unwrap()]
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |keep| {
            let edges: Vec<(u32, u32)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn independent_sets(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let masks: Vec<u32> = (0..n as u32).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0))
        .map(|s| (0..n as u32).filter(|&v| s >> v & 1 == 1).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(q in prop::sample::select(vec![9u64, 16, 25]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(q);
        let size = f.q2() as u32;
        let (a, b, c) = (Elem(a % size), Elem(b % size), Elem(c % size));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.frobenius_q(f.mul(a, b)), f.mul(f.frobenius_q(a), f.frobenius_q(b)));
        prop_assert_eq!(f.frobenius_q(f.add(a, b)), f.add(f.frobenius_q(a), f.frobenius_q(b)));
        prop_assert_eq!(f.hermitian_norm(f.mul(a, b)), f.mul(f.hermitian_norm(a), f.hermitian_norm(b)));
        prop_assert!(f.in_subfield(f.hermitian_norm(a)));
        if a != Elem::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(20)) {
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.to_edge_list(), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn alpha_and_counts_match_enumeration(g in arb_graph(13)) {
        let sets = independent_sets(&g);
        let alpha = sets.iter().map(|s| s.len()).max().unwrap();
        let found = independence_number(&g).unwrap();
        prop_assert_eq!(found.size, alpha);
        prop_assert!(g.is_independent(&found.witness).is_none());
        for t in 0..=g.n() {
            let exact = sets.iter().filter(|s| s.len() == t).count() as u64;
            prop_assert_eq!(count_independent_sets(&g, t).unwrap(), exact);
        }
    }

    #[test]
    fn traces_cover(g in arb_graph(11), r in 0usize..4, big_r in 0usize..8, alpha in 0.0f64..1.0) {
        let params = ContainerParams { r, max_container: big_r, alpha };
        for s in &independent_sets(&g) {
            let pair = kw_trace(&g, s, &params).unwrap();
            prop_assert!(pair.fingerprint.len() <= r);
            prop_assert!(pair.covers(s));
            prop_assert!(pair.fingerprint.iter().all(|v| s.contains(v)));
        }
    }

    #[test]
    fn bound_dominates_under_hypotheses(g in arb_graph(11), big_r in 1usize..12) {
        let n = g.n();
        let big_r = big_r.min(n);
        // Largest alpha with 2 e(X) >= alpha |X|^2 for every |X| >= R.
        let masks: Vec<u32> = (0..n as u32).map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)).collect();
        let alpha = (0u32..1 << n)
            .filter(|s| s.count_ones() as usize >= big_r)
            .map(|s| {
                let twice_e: u32 = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| (masks[v] & s).count_ones()).sum();
                twice_e as f64 / (s.count_ones() as f64).powi(2)
            })
            .fold(1.0f64, f64::min);
        let r = if big_r >= n {
            0
        } else if alpha == 0.0 {
            return Ok(());
        } else {
            ((n as f64 / big_r as f64).ln() / alpha).ceil() as usize
        };
        let params = ContainerParams { r, max_container: big_r, alpha: alpha * (1.0 - 1e-12) };
        if !params.condition_holds(n) {
            return Ok(());
        }
        let sets = independent_sets(&g);
        for t in r..=n {
            let exact = sets.iter().filter(|s| s.len() == t).count() as u64;
            prop_assert!(count_bound(&g, &params, t).unwrap() >= exact.into(), "t={} r={} R={}", t, r, big_r);
        }
    }

    #[test]
    fn blowup_identities(g in arb_graph(7), r in 1usize..4) {
        let b = blowup(&g, r).unwrap();
        prop_assert_eq!(b.n(), g.n() * r);
        prop_assert_eq!(b.edge_count(), g.edge_count() * r * r);
        prop_assert_eq!(
            independence_number(&b).unwrap().size,
            r * independence_number(&g).unwrap().size
        );
    }

    #[test]
    fn multicolor_partitions_pairs(g in arb_graph(8), r in 1usize..3, k in 2u8..5, seed in any::<u64>()) {
        let c = blowup_multicolor(&g, r, k, seed).unwrap();
        let n = c.n as u64;
        prop_assert_eq!(c.class_sizes().iter().sum::<u64>(), n * (n - 1) / 2);
        for col in 1..k {
            prop_assert!(c.class(col).edge_count() <= g.edge_count() * r * r);
        }
    }

    #[test]
    fn clique_mass_bounds(q in prop::sample::select(vec![2u64, 3, 4]), frac in 0.05f64..1.0, seed in any::<u64>()) {
        use rand::{seq::index::sample, SeedableRng};
        let g = secant_graph(q);
        let k = ((g.n() as f64 * frac) as usize).max(1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<u32> = sample(&mut rng, g.n(), k).iter().map(|v| v as u32).collect();
        let d = g.clique_decomposition(&x, DecompositionParams::default()).unwrap();
        prop_assert!(d.mass.large_mass_bound);
        prop_assert!(d.mass.small_medium_bound);
        prop_assert_eq!(d.e_small + d.e_medium + d.e_large, g.graph().edges_within(&x) as u64);
        for t in d.small.iter().chain(&d.medium).chain(&d.large) {
            prop_assert!(t.vertices.len() >= 2);
        }
    }
}
