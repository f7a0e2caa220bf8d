mod common;

use asdim_lab::graph::{
    load_graph, normalize, store_graph, Distance, DistanceOracle, MetricGraph, VertexId,
};
use common::*;
use proptest::prelude::*;
use std::sync::Arc;

fn edges_strategy(max_n: usize) -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let n32 = n as u32;
        let pair = (0..n32, 1..n32).prop_map(move |(a, off)| (a, (a + off) % n32));
        (Just(n), prop::collection::vec(pair, 0..3 * n))
    })
}

#[test]
fn fifty_random_graphs_match_floyd_warshall() {
    for seed in 0..50 {
        let g = random_graph(seed, 12, 0.25);
        let fw = floyd_warshall(&g);
        for u in g.vertices() {
            for v in g.vertices() {
                let expect = match fw[u.idx()][v.idx()] {
                    INF => Distance::Unreachable,
                    d => Distance::Finite(d),
                };
                assert_eq!(g.distance(u, v).unwrap(), expect, "seed {seed} pair {u} {v}");
            }
        }
    }
}

#[test]
fn geodesics_match_path_enumeration() {
    for seed in 0..40 {
        let g = random_graph(1000 + seed, 9, 0.35);
        let fw = floyd_warshall(&g);
        for u in g.vertices() {
            for v in g.vertices() {
                let brute = brute_geodesics(&g, &fw, u, v);
                match g.all_geodesics(u, v, 10_000) {
                    Ok((paths, truncated)) => {
                        assert!(!truncated);
                        assert_eq!(path_set(&paths), brute);
                        let canon = g.canonical_geodesic(u, v).unwrap();
                        assert_eq!(Some(canon.vertices()), brute.iter().next().map(Vec::as_slice));
                    }
                    Err(_) => assert!(brute.is_empty()),
                }
            }
        }
    }
}

#[test]
fn set_diameter_large_sets() {
    // sets above the brute-force threshold go through the bounding search
    for seed in 0..12 {
        let g = random_connected(seed, 150, 40 + 10 * seed as usize);
        let fw = floyd_warshall(&g);
        let members: Vec<VertexId> = g.vertices().filter(|v| (v.0 * 7 + seed as u32) % 3 != 0).collect();
        assert!(members.len() > 64);
        assert_eq!(g.set_diameter(&members).unwrap(), Distance::Finite(brute_diameter(&fw, &members)));
    }
}

#[test]
fn broom_like_tips() {
    // many leaves at distinct depths; the level cutoff must still return the exact value
    let mut edges = Vec::new();
    let mut next = 1u32;
    let mut tips = Vec::new();
    for len in 1..=30u32 {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        tips.push(VertexId(prev));
    }
    let g = MetricGraph::from_edges("broom", next as usize, edges).unwrap();
    let fw = floyd_warshall(&g);
    let deep: Vec<VertexId> = g.vertices().filter(|v| fw[0][v.idx()] >= 10).collect();
    assert_eq!(g.set_diameter(&deep).unwrap(), Distance::Finite(59));
    assert_eq!(g.set_diameter(&tips).unwrap(), Distance::Finite(59));
}

#[test]
fn oracle_rows_match_bfs() {
    let g = Arc::new(random_connected(7, 1500, 600));
    let oracle = DistanceOracle::new(Arc::clone(&g));
    for v in [0u32, 17, 1499, 17] {
        let v = VertexId(v);
        assert_eq!(&*oracle.row(v), g.bfs(v).as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric((n, edges) in edges_strategy(12)) {
        let g = MetricGraph::from_edges("p", n, edges).unwrap();
        let fw = floyd_warshall(&g);
        for u in g.vertices() {
            prop_assert_eq!(g.distance(u, u).unwrap(), Distance::Finite(0));
            for v in g.vertices() {
                let d = g.distance(u, v).unwrap();
                prop_assert_eq!(d, g.distance(v, u).unwrap());
                prop_assert_eq!(d.finite().unwrap_or(INF), fw[u.idx()][v.idx()]);
            }
        }
    }

    #[test]
    fn balls_and_spheres_agree((n, edges) in edges_strategy(12), r in 0u32..5) {
        let g = MetricGraph::from_edges("p", n, edges).unwrap();
        let fw = floyd_warshall(&g);
        for x in g.vertices() {
            let ball: Vec<VertexId> = g.vertices().filter(|y| fw[x.idx()][y.idx()] <= r).collect();
            let sphere: Vec<VertexId> = g.vertices().filter(|y| fw[x.idx()][y.idx()] == r).collect();
            prop_assert_eq!(g.ball(x, r).unwrap(), ball);
            prop_assert_eq!(g.sphere(x, r).unwrap(), sphere);
        }
    }

    #[test]
    fn every_geodesic_is_a_shortest_path((n, edges) in edges_strategy(10)) {
        let g = MetricGraph::from_edges("p", n, edges).unwrap();
        for u in g.vertices() {
            for v in g.vertices() {
                if let Ok((paths, _)) = g.all_geodesics(u, v, 10_000) {
                    let d = g.distance(u, v).unwrap().finite().unwrap();
                    prop_assert!(!paths.is_empty());
                    for p in &paths {
                        prop_assert_eq!(p.len(), d);
                        prop_assert_eq!((p.start(), p.end()), (u, v));
                        prop_assert!(p.vertices().windows(2).all(|w| g.has_edge(w[0], w[1])));
                    }
                    prop_assert!(paths.windows(2).all(|w| w[0].vertices() < w[1].vertices()));
                }
            }
        }
    }

    #[test]
    fn set_diameter_matches_pairs((n, edges) in edges_strategy(12), mask in any::<u16>()) {
        let g = MetricGraph::from_edges("p", n, edges).unwrap();
        let fw = floyd_warshall(&g);
        let s: Vec<VertexId> = g.vertices().filter(|v| mask >> v.0 & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let brute = brute_diameter(&fw, &s);
        let expect = if brute == INF { Distance::Unreachable } else { Distance::Finite(brute) };
        prop_assert_eq!(g.set_diameter(&s).unwrap(), expect);
    }

    #[test]
    fn store_load_round_trip((n, edges) in edges_strategy(12)) {
        let g = MetricGraph::from_edges("rt", n, edges).unwrap();
        let text = store_graph(&g);
        let back = load_graph(&text).unwrap();
        prop_assert_eq!(store_graph(&back), normalize(&text));
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }
}

#[test]
fn small_fixed_cases() {
    let c4 = MetricGraph::from_edges("c4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let (paths, _) = c4.all_geodesics(VertexId(0), VertexId(2), 10).unwrap();
    assert_eq!(paths.len(), 2);
    assert_eq!(c4.canonical_geodesic(VertexId(0), VertexId(2)).unwrap().to_string(), "0-1-2");
    let empty = MetricGraph::from_edges("e", 3, []).unwrap();
    assert_eq!(empty.edge_count(), 0);
    assert_eq!(empty.distance(VertexId(0), VertexId(2)).unwrap(), Distance::Unreachable);
    assert_eq!(empty.set_diameter(&[VertexId(1)]).unwrap(), Distance::Finite(0));
}
