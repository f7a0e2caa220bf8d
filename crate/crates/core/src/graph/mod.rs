//! Finite simple graphs with unit edge lengths and the BFS metric.

mod io;
mod oracle;
mod separation;

pub use io::{load_graph, normalize, store_graph};
pub use oracle::{BfsScratch, DistanceOracle};
pub use separation::SeparationIndex;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub(crate) fn from_raw(d: u32) -> Self {
        if d == UNSEEN {
            Distance::Unreachable
        } else {
            Distance::Finite(d)
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// A nonempty vertex sequence with consecutive vertices adjacent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    pub fn len(&self) -> u32 {
        (self.0.len() - 1) as u32
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn start(&self) -> VertexId {
        self.0[0]
    }

    pub fn end(&self) -> VertexId {
        *self.0.last().expect("paths are nonempty")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    InvalidVertex(u32),
    #[error("self loop at {0}")]
    SelfLoop(u32),
    #[error("vertices {0} and {1} lie in different components")]
    Unreachable(u32, u32),
    #[error("empty vertex set")]
    EmptySet,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: edge {u}-{v} has no reverse entry")]
    Asymmetric { line: usize, u: u32, v: u32 },
    #[error("line {line}: vertex id {id} out of range")]
    OutOfRange { line: usize, id: u32 },
}

/// Immutable simple undirected graph; neighbor lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    name: String,
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl MetricGraph {
    pub fn from_edges(
        name: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::InvalidVertex(w));
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u as usize].push(VertexId(v));
            adjacency[v as usize].push(VertexId(u));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adjacency(name.into(), adjacency))
    }

    pub(crate) fn from_sorted_adjacency(name: String, adjacency: Vec<Vec<VertexId>>) -> Self {
        let degree_sum: usize = adjacency.iter().map(Vec::len).sum();
        MetricGraph {
            name,
            adjacency,
            edge_count: degree_sum / 2,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adjacency.len() as u32).map(VertexId)
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.idx()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.idx()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u.idx()].binary_search(&v).is_ok()
    }

    pub fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if v.idx() < self.adjacency.len() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex(v.0))
        }
    }

    /// BFS distances from `src`; unreachable entries hold [`UNSEEN`].
    pub fn bfs(&self, src: VertexId) -> Vec<u32> {
        let mut dist = vec![UNSEEN; self.vertex_count()];
        dist[src.idx()] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.idx()];
            for &w in self.neighbors(u) {
                if dist[w.idx()] == UNSEEN {
                    dist[w.idx()] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS truncated at `radius`; returns visited vertices with their distances in BFS order.
    pub fn bfs_bounded(&self, src: VertexId, radius: u32) -> Vec<(VertexId, u32)> {
        let mut scratch = BfsScratch::new(self.vertex_count());
        scratch.run(self, &[src], radius);
        scratch.visited().to_vec()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.bfs(VertexId(0)).iter().all(|&d| d != UNSEEN)
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<Distance, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(Distance::Finite(0));
        }
        let mut dist = vec![UNSEEN; self.vertex_count()];
        dist[u.idx()] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x.idx()];
            for &w in self.neighbors(x) {
                if dist[w.idx()] == UNSEEN {
                    if w == v {
                        return Ok(Distance::Finite(dx + 1));
                    }
                    dist[w.idx()] = dx + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(Distance::Unreachable)
    }

    pub fn ball(&self, x: VertexId, r: u32) -> Result<Vec<VertexId>, GraphError> {
        self.check(x)?;
        let mut out: Vec<VertexId> = self.bfs_bounded(x, r).into_iter().map(|(v, _)| v).collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn sphere(&self, x: VertexId, r: u32) -> Result<Vec<VertexId>, GraphError> {
        self.check(x)?;
        let mut out: Vec<VertexId> = self
            .bfs_bounded(x, r)
            .into_iter()
            .filter(|&(_, d)| d == r)
            .map(|(v, _)| v)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    fn finite_distance(&self, u: VertexId, v: VertexId) -> Result<(Vec<u32>, u32), GraphError> {
        self.check(u)?;
        self.check(v)?;
        let row = self.bfs(v);
        match row[u.idx()] {
            UNSEEN => Err(GraphError::Unreachable(u.0, v.0)),
            d => Ok((row, d)),
        }
    }

    /// Shortest paths from `u` to `v`, in lexicographic order. At most `cap` paths are
    /// returned; the flag is set when more exist.
    pub fn all_geodesics(
        &self,
        u: VertexId,
        v: VertexId,
        cap: usize,
    ) -> Result<(Vec<Path>, bool), GraphError> {
        let (to_v, _) = self.finite_distance(u, v)?;
        Ok(geodesics_along(self, &to_v, u, v, cap))
    }

    pub fn canonical_geodesic(&self, u: VertexId, v: VertexId) -> Result<Path, GraphError> {
        let (to_v, _) = self.finite_distance(u, v)?;
        Ok(canonical_along(self, &to_v, u))
    }

    /// Max pairwise distance within `s`, measured in the whole graph.
    pub fn set_diameter(&self, s: &[VertexId]) -> Result<Distance, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        for &v in s {
            self.check(v)?;
        }
        let mut members: Vec<VertexId> = s.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut scratch = BfsScratch::new(self.vertex_count());
        let d = if members.len() <= 64 {
            let mut best = 0;
            for (i, &a) in members.iter().enumerate() {
                match scratch.eccentricity_within(self, a, &members[i..]) {
                    Some(e) => best = best.max(e),
                    None => return Ok(Distance::Unreachable),
                }
            }
            best
        } else {
            match bounding_diameter(self, &members, &mut scratch) {
                Some(d) => d,
                None => return Ok(Distance::Unreachable),
            }
        };
        Ok(Distance::Finite(d))
    }
}

/// Lexicographically ordered enumeration of shortest paths using a distance row to `v`.
pub(crate) fn geodesics_along(
    g: &MetricGraph,
    to_v: &[u32],
    u: VertexId,
    v: VertexId,
    cap: usize,
) -> (Vec<Path>, bool) {
    let mut out = Vec::new();
    let mut stack: Vec<(VertexId, usize)> = vec![(u, 0)];
    let mut current = vec![u];
    while let Some(&mut (x, ref mut next)) = stack.last_mut() {
        if x == v {
            out.push(Path(current.clone()));
            if out.len() > cap {
                out.truncate(cap);
                return (out, true);
            }
            stack.pop();
            current.pop();
            continue;
        }
        let target = to_v[x.idx()] - 1;
        let nbrs = g.neighbors(x);
        let mut step = None;
        while *next < nbrs.len() {
            let w = nbrs[*next];
            *next += 1;
            if to_v[w.idx()] == target {
                step = Some(w);
                break;
            }
        }
        match step {
            Some(w) => {
                stack.push((w, 0));
                current.push(w);
            }
            None => {
                stack.pop();
                current.pop();
            }
        }
    }
    (out, false)
}

pub(crate) fn canonical_along(g: &MetricGraph, to_v: &[u32], u: VertexId) -> Path {
    let mut path = vec![u];
    let mut x = u;
    while to_v[x.idx()] > 0 {
        let target = to_v[x.idx()] - 1;
        x = *g
            .neighbors(x)
            .iter()
            .find(|w| to_v[w.idx()] == target)
            .expect("a geodesic step exists");
        path.push(x);
    }
    Path(path)
}

/// Exact diameter of a large member set. Eccentricity bounds prune members, and levels from a
/// central vertex u cap every remaining pair at the sum of the two largest levels.
fn bounding_diameter(g: &MetricGraph, members: &[VertexId], scratch: &mut BfsScratch) -> Option<u32> {
    let m = members.len();
    let mut lower = vec![0u32; m];
    let mut upper = vec![u32::MAX; m];
    let mut best = 0u32;
    let mut done = vec![false; m];

    // (max distance, index of a farthest member)
    let sweep = |i: usize, scratch: &mut BfsScratch, lower: &mut [u32], upper: &mut [u32]| {
        scratch.run_until_covers(g, members[i], members);
        let mut far = (0, i);
        for (j, &v) in members.iter().enumerate() {
            let d = scratch.dist(v);
            if d == UNSEEN {
                return None;
            }
            if d > far.0 {
                far = (d, j);
            }
        }
        for (j, &v) in members.iter().enumerate() {
            let d = scratch.dist(v);
            lower[j] = lower[j].max(d.max(far.0 - d));
            upper[j] = upper[j].min(far.0 + d);
        }
        upper[i] = far.0;
        Some(far)
    };

    let (_, a) = sweep(0, scratch, &mut lower, &mut upper)?;
    done[0] = true;
    let (ecc_a, b) = sweep(a, scratch, &mut lower, &mut upper)?;
    done[a] = true;
    best = best.max(ecc_a);

    // midpoint of the a-b geodesic, walking back along the BFS from a
    let mut u = members[b];
    for _ in 0..ecc_a / 2 {
        let du = scratch.dist(u);
        u = *g
            .neighbors(u)
            .iter()
            .find(|w| scratch.dist(**w) == du - 1)
            .expect("BFS predecessor");
    }
    scratch.run_until_covers(g, u, members);
    let level: Vec<u32> = members.iter().map(|&v| scratch.dist(v)).collect();
    let top = level.iter().copied().max().unwrap_or(0);
    for j in 0..m {
        upper[j] = upper[j].min(level[j] + top);
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_unstable_by_key(|&j| (std::cmp::Reverse(level[j]), j));
    let mut pending: Vec<usize> = order.into_iter().filter(|&j| !done[j]).collect();
    loop {
        best = best.max(lower.iter().copied().max().unwrap_or(0));
        pending.retain(|&j| upper[j] > best);
        match pending.as_slice() {
            [] => break,
            [_] => break,
            [x, y, ..] if level[*x] + level[*y] <= best => break,
            _ => {}
        }
        let i = pending.remove(0);
        let (ecc, _) = sweep(i, scratch, &mut lower, &mut upper)?;
        best = best.max(ecc);
    }
    // a lone pending member only pairs with finished members, whose eccentricities are exact
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: u32) -> MetricGraph {
        MetricGraph::from_edges("path", n as usize, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: u32) -> MetricGraph {
        MetricGraph::from_edges("cycle", n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn path_distances() {
        let g = path_graph(5);
        assert_eq!(g.distance(VertexId(0), VertexId(4)).unwrap(), Distance::Finite(4));
        assert_eq!(g.distance(VertexId(3), VertexId(3)).unwrap(), Distance::Finite(0));
        assert_eq!(g.sphere(VertexId(2), 2).unwrap(), vec![VertexId(0), VertexId(4)]);
        assert_eq!(g.ball(VertexId(2), 0).unwrap(), vec![VertexId(2)]);
    }

    #[test]
    fn unreachable_is_a_value() {
        let g = MetricGraph::from_edges("two", 3, [(0, 1)]).unwrap();
        assert_eq!(g.distance(VertexId(0), VertexId(2)).unwrap(), Distance::Unreachable);
        assert!(g.all_geodesics(VertexId(0), VertexId(2), 10).is_err());
    }

    #[test]
    fn rejects_loops_and_bad_ids() {
        assert_eq!(
            MetricGraph::from_edges("x", 2, [(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
        assert_eq!(
            MetricGraph::from_edges("x", 2, [(0, 2)]).unwrap_err(),
            GraphError::InvalidVertex(2)
        );
        assert!(path_graph(3).distance(VertexId(0), VertexId(9)).is_err());
    }

    #[test]
    fn four_cycle_geodesics() {
        let g = cycle(4);
        let (paths, truncated) = g.all_geodesics(VertexId(0), VertexId(2), 10).unwrap();
        assert!(!truncated);
        assert_eq!(paths.len(), 2);
        let canon = g.canonical_geodesic(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(canon, Path(vec![VertexId(0), VertexId(1), VertexId(2)]));
        assert_eq!(canon, paths[0]);
    }

    #[test]
    fn k23_has_three_geodesics() {
        let g = MetricGraph::from_edges("k23", 5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
            .unwrap();
        let (paths, _) = g.all_geodesics(VertexId(0), VertexId(1), 100).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn truncation_flag() {
        let g = MetricGraph::from_edges("k23", 5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
            .unwrap();
        let (paths, truncated) = g.all_geodesics(VertexId(0), VertexId(1), 2).unwrap();
        assert!(truncated);
        assert_eq!(paths.len(), 2);
        let (_, exact) = g.all_geodesics(VertexId(0), VertexId(1), 3).unwrap();
        assert!(!exact);
    }

    #[test]
    fn diameters() {
        let g = path_graph(5);
        assert_eq!(g.set_diameter(&[VertexId(3)]).unwrap(), Distance::Finite(0));
        assert_eq!(
            g.set_diameter(&[VertexId(0), VertexId(4)]).unwrap(),
            Distance::Finite(4)
        );
        assert_eq!(g.set_diameter(&[]).unwrap_err(), GraphError::EmptySet);
    }

    #[test]
    fn large_set_diameter_matches_small_method() {
        let g = cycle(150);
        let all: Vec<VertexId> = g.vertices().collect();
        assert_eq!(g.set_diameter(&all).unwrap(), Distance::Finite(75));
        let some: Vec<VertexId> = (0..100).map(VertexId).collect();
        assert_eq!(g.set_diameter(&some).unwrap(), Distance::Finite(75));
    }
}
