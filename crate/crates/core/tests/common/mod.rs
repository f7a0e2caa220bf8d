//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use asdim_lab::graph::{MetricGraph, Path, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

/// Erdos-Renyi style graph with a seeded edge probability.
pub fn random_graph(seed: u64, n: usize, p: f64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    MetricGraph::from_edges("random", n, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(seed: u64, n: usize, extra: usize) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n as u32 {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            edges.push((u, v));
        }
    }
    MetricGraph::from_edges("connected", n, edges).unwrap()
}

pub fn floyd_warshall(g: &MetricGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for w in g.neighbors(VertexId(v as u32)) {
            d[v][w.idx()] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every simple path from u to v of length exactly `len`, in DFS order.
fn simple_paths(g: &MetricGraph, u: VertexId, v: VertexId, len: u32) -> Vec<Vec<VertexId>> {
    fn go(
        g: &MetricGraph,
        cur: &mut Vec<VertexId>,
        v: VertexId,
        len: u32,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let x = *cur.last().unwrap();
        if x == v && cur.len() as u32 == len + 1 {
            out.push(cur.clone());
            return;
        }
        if cur.len() as u32 > len {
            return;
        }
        for &w in g.neighbors(x) {
            if !cur.contains(&w) {
                cur.push(w);
                go(g, cur, v, len, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![u], v, len, &mut out);
    out
}

/// All shortest u-v paths, found without BFS layering: every simple path whose length
/// equals the Floyd-Warshall distance.
pub fn brute_geodesics(g: &MetricGraph, dist: &[Vec<u32>], u: VertexId, v: VertexId) -> BTreeSet<Vec<VertexId>> {
    let d = dist[u.idx()][v.idx()];
    if d == INF {
        return BTreeSet::new();
    }
    simple_paths(g, u, v, d).into_iter().collect()
}

pub fn path_set(paths: &[Path]) -> BTreeSet<Vec<VertexId>> {
    paths.iter().map(|p| p.vertices().to_vec()).collect()
}

fn ball(dist: &[Vec<u32>], x: usize, r: u32) -> Vec<usize> {
    (0..dist.len()).filter(|&y| dist[x][y] <= r).collect()
}

fn dist_to_set(dist: &[Vec<u32>], p: usize, s: &[VertexId]) -> u32 {
    s.iter().map(|q| dist[p][q.idx()]).min().unwrap()
}

/// Max over vertex triples and all choices of geodesic sides of the least thinness constant.
pub fn brute_delta(g: &MetricGraph) -> u32 {
    let dist = floyd_warshall(g);
    let n = g.vertex_count();
    let geo: Vec<Vec<Vec<Vec<VertexId>>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| brute_geodesics(g, &dist, VertexId(a as u32), VertexId(b as u32)).into_iter().collect())
                .collect()
        })
        .collect();
    let mut best = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for a in &geo[x][y] {
                    for b in &geo[y][z] {
                        for c in &geo[z][x] {
                            for p in a {
                                let t = dist_to_set(&dist, p.idx(), b).min(dist_to_set(&dist, p.idx(), c));
                                best = best.max(t);
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct BruteB {
    pub observed_d: u32,
    /// (a, b, r, c) with a family geodesic between the r-balls missing N(c; k).
    pub violations: BTreeSet<(u32, u32, u32, u32)>,
}

/// Property B straight from the definition over unordered pairs a < b, optionally only
/// pairs containing `anchor`.
pub fn brute_property_b(g: &MetricGraph, ell: u32, k: u32, r_max: u32, anchor: Option<u32>) -> BruteB {
    let dist = floyd_warshall(g);
    let n = g.vertex_count();
    let geo = |x: usize, y: usize| brute_geodesics(g, &dist, VertexId(x as u32), VertexId(y as u32));
    let mut out = BruteB::default();
    for a in 0..n {
        for b in a + 1..n {
            if dist[a][b] == INF {
                continue;
            }
            if let Some(x0) = anchor {
                if a as u32 != x0 && b as u32 != x0 {
                    continue;
                }
            }
            let gab: BTreeSet<usize> = geo(a, b).into_iter().flatten().map(|v| v.idx()).collect();
            for r in 0..=r_max {
                let na = ball(&dist, a, r);
                let nb = ball(&dist, b, r);
                let mut between: Vec<Vec<VertexId>> = Vec::new();
                for &x in &na {
                    for &y in &nb {
                        between.extend(geo(x, y));
                    }
                }
                let gr: BTreeSet<usize> = between.iter().flatten().map(|v| v.idx()).collect();
                for &c in &gab {
                    if dist[c][a].min(dist[c][b]) < r + ell {
                        continue;
                    }
                    let nc: BTreeSet<usize> = ball(&dist, c, k).into_iter().collect();
                    let count = gr.intersection(&nc).count() as u32;
                    out.observed_d = out.observed_d.max(count);
                    if between.iter().any(|p| p.iter().all(|v| !nc.contains(&v.idx()))) {
                        out.violations.insert((a as u32, b as u32, r, c as u32));
                    }
                }
            }
        }
    }
    out
}

pub fn brute_diameter(dist: &[Vec<u32>], s: &[VertexId]) -> u32 {
    s.iter()
        .flat_map(|a| s.iter().map(move |b| dist[a.idx()][b.idx()]))
        .max()
        .unwrap_or(0)
}

/// Largest subset of `cands` with pairwise distance at least `d`, by subset enumeration.
pub fn brute_capacity(dist: &[Vec<u32>], cands: &[VertexId], d: u32) -> usize {
    let m = cands.len();
    assert!(m <= 22, "brute force capacity is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << m) {
        let ones = mask.count_ones() as usize;
        if ones <= best {
            continue;
        }
        let pick: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let ok = pick
            .iter()
            .enumerate()
            .all(|(i, &x)| pick[i + 1..].iter().all(|&y| dist[cands[x].idx()][cands[y].idx()] >= d));
        if ok {
            best = ones;
        }
    }
    best
}
