//! Generators for the test spaces: broom trees, regular trees, Farey truncations, grids.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::graph::{load_graph, GraphError, MetricGraph, VertexId, UNSEEN};
use crate::registry::{Named, Registry, RegistryError};

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("{space}: {msg}")]
    BadArgs { space: &'static str, msg: String },
    #[error("space spec `{0}` must look like `<kind>:<args>`")]
    Syntax(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

fn bad(space: &'static str, msg: impl Into<String>) -> SpaceError {
    SpaceError::BadArgs {
        space,
        msg: msg.into(),
    }
}

/// Reduced fraction with the sign on `p`; `1/0` is the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub p: i64,
    pub q: u64,
}

impl Fraction {
    pub const INFINITY: Fraction = Fraction { p: 1, q: 0 };

    pub fn new(p: i64, q: u64) -> Option<Self> {
        if q == 0 {
            return (p == 1).then_some(Self::INFINITY);
        }
        (p.unsigned_abs().gcd(&q) == 1).then_some(Fraction { p, q })
    }

    /// The Farey edge rule `|ps - rq| = 1`.
    pub fn farey_adjacent(self, other: Fraction) -> bool {
        let det = self.p as i128 * other.q as i128 - other.p as i128 * self.q as i128;
        det.abs() == 1
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s.split_once('/').ok_or_else(|| format!("`{s}` is not p/q"))?;
        let p: i64 = p.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let q: u64 = q.parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        Fraction::new(p, q).ok_or_else(|| format!("`{s}` is not reduced"))
    }
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Arc<MetricGraph>,
    pub labels: Vec<String>,
    pub basepoint: VertexId,
}

impl LabeledGraph {
    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.idx()]
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| VertexId(i as u32))
    }
}

fn assemble(
    name: String,
    adjacency: Vec<Vec<VertexId>>,
    labels: Vec<String>,
    basepoint: VertexId,
) -> LabeledGraph {
    LabeledGraph {
        graph: Arc::new(MetricGraph::from_sorted_adjacency(name, adjacency)),
        labels,
        basepoint,
    }
}

/// Root with subdivided rays of lengths 1..=m.
pub fn broom_tree(m: u32) -> Result<LabeledGraph, SpaceError> {
    if m == 0 {
        return Err(bad("broom", "m must be at least 1"));
    }
    let n = 1 + (m as usize * (m as usize + 1)) / 2;
    let mut edges = Vec::with_capacity(n - 1);
    let mut labels = Vec::with_capacity(n);
    labels.push("x0".to_string());
    let mut next = 1u32;
    for ray in 1..=m {
        let mut prev = 0u32;
        for t in 1..=ray {
            edges.push((prev, next));
            labels.push(format!("ray{ray}:{t}"));
            prev = next;
            next += 1;
        }
    }
    let graph = MetricGraph::from_edges(format!("broom:{m}"), n, edges)?;
    Ok(LabeledGraph {
        graph: Arc::new(graph),
        labels,
        basepoint: VertexId(0),
    })
}

/// Ball of the given depth in the tree where every vertex has degree `valence`.
pub fn regular_tree(valence: u32, depth: u32) -> Result<LabeledGraph, SpaceError> {
    if valence < 2 || depth < 1 {
        return Err(bad("tree", "need valence >= 2 and depth >= 1"));
    }
    let mut labels = vec!["e".to_string()];
    let mut edges = Vec::new();
    let mut frontier = vec![0u32];
    for level in 0..depth {
        let fan = if level == 0 { valence } else { valence - 1 };
        let mut next_frontier = Vec::with_capacity(frontier.len() * fan as usize);
        for &parent in &frontier {
            for child in 0..fan {
                let id = labels.len() as u32;
                labels.push(format!("{}.{child}", labels[parent as usize]));
                edges.push((parent, id));
                next_frontier.push(id);
            }
        }
        frontier = next_frontier;
    }
    let graph = MetricGraph::from_edges(format!("tree:{valence},{depth}"), labels.len(), edges)?;
    Ok(LabeledGraph {
        graph: Arc::new(graph),
        labels,
        basepoint: VertexId(0),
    })
}

/// Vertex list of the Farey window: `1/0`, then by `q` ascending and `p` ascending.
pub fn farey_vertices(qmax: u32) -> Vec<Fraction> {
    let qm = qmax as i64;
    let mut out = vec![Fraction::INFINITY];
    for q in 1..=qmax as u64 {
        out.extend((-qm..=qm).filter_map(|p| Fraction::new(p, q)));
    }
    out
}

struct FareyIndex {
    qmax: i64,
    offsets: Vec<u32>,
    numerators: Vec<Vec<i64>>,
}

impl FareyIndex {
    fn new(vertices: &[Fraction], qmax: u32) -> Self {
        let mut offsets = vec![0u32; qmax as usize + 2];
        let mut numerators = vec![Vec::new(); qmax as usize + 1];
        for (i, f) in vertices.iter().enumerate().skip(1) {
            let q = f.q as usize;
            if numerators[q].is_empty() {
                offsets[q] = i as u32;
            }
            numerators[q].push(f.p);
        }
        FareyIndex {
            qmax: qmax as i64,
            offsets,
            numerators,
        }
    }

    fn id(&self, p: i64, q: u64) -> Option<u32> {
        if q == 0 {
            return (p == 1).then_some(0);
        }
        if p.abs() > self.qmax || q as i64 > self.qmax {
            return None;
        }
        let q = q as usize;
        self.numerators[q]
            .binary_search(&p)
            .ok()
            .map(|k| self.offsets[q] + k as u32)
    }
}

fn mod_inverse(p: i64, q: i64) -> i64 {
    let e = p.rem_euclid(q).extended_gcd(&q);
    e.x.rem_euclid(q)
}

/// Farey graph restricted to `|p| <= qmax`, `1 <= q <= qmax`, plus `1/0`.
pub fn farey_truncation(qmax: u32) -> Result<LabeledGraph, SpaceError> {
    if qmax == 0 {
        return Err(bad("farey", "qmax must be at least 1"));
    }
    let vertices = farey_vertices(qmax);
    let index = FareyIndex::new(&vertices, qmax);
    let qm = qmax as i64;
    let mut adjacency: Vec<Vec<VertexId>> = Vec::with_capacity(vertices.len());
    for f in &vertices {
        let mut nbrs = Vec::new();
        if f.q == 0 {
            nbrs.extend((-qm..=qm).filter_map(|n| index.id(n, 1)).map(VertexId));
        } else {
            if f.q == 1 {
                nbrs.push(VertexId(0));
            }
            let q = f.q as i64;
            let inv = if q == 1 { 0 } else { mod_inverse(f.p, q) };
            // p*s - r*q = sign, so s = sign * p^-1 (mod q) and r = (p*s - sign) / q
            for sign in [1i64, -1] {
                let start = (sign * inv).rem_euclid(q);
                let mut s = if start == 0 { q } else { start };
                while s <= qm {
                    let r = (f.p * s - sign) / q;
                    if let Some(id) = index.id(r, s as u64) {
                        nbrs.push(VertexId(id));
                    }
                    s += q;
                }
            }
        }
        nbrs.sort_unstable();
        nbrs.dedup();
        adjacency.push(nbrs);
    }
    let labels = vertices.iter().map(Fraction::to_string).collect();
    let base = VertexId(index.id(0, 1).expect("0/1 is in every window"));
    Ok(assemble(format!("farey:{qmax}"), adjacency, labels, base))
}

/// Largest `R` with ball(0/1, R) at `qmax` equal to ball(0/1, R) at `2 qmax` restricted
/// to the smaller window. Truncation only lengthens distances, so the first vertex whose
/// distance differs caps the radius.
pub fn farey_safe_radius(qmax: u32) -> Result<u32, SpaceError> {
    let small = farey_truncation(qmax)?;
    let large = farey_truncation(2 * qmax)?;
    let ds = small.graph.bfs(small.basepoint);
    let dl = large.graph.bfs(large.basepoint);
    let lindex = FareyIndex::new(&farey_vertices(2 * qmax), 2 * qmax);
    let mut safe = ds.iter().copied().filter(|&d| d != UNSEEN).max().unwrap_or(0);
    for (v, label) in small.labels.iter().enumerate() {
        let f: Fraction = label.parse().expect("labels are fractions");
        let w = lindex.id(f.p, f.q).expect("small window embeds in large");
        let (a, b) = (ds[v], dl[w as usize]);
        if a != b {
            safe = safe.min(b.saturating_sub(1));
        }
    }
    Ok(safe)
}

/// `n x n` lattice, id `i*n + j`.
pub fn grid(n: u32) -> Result<LabeledGraph, SpaceError> {
    if n < 2 {
        return Err(bad("grid", "n must be at least 2"));
    }
    let mut edges = Vec::new();
    let mut labels = Vec::with_capacity((n * n) as usize);
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("({i},{j})"));
            let v = i * n + j;
            if j + 1 < n {
                edges.push((v, v + 1));
            }
            if i + 1 < n {
                edges.push((v, v + n));
            }
        }
    }
    let graph = MetricGraph::from_edges(format!("grid:{n}"), (n * n) as usize, edges)?;
    Ok(LabeledGraph {
        graph: Arc::new(graph),
        labels,
        basepoint: VertexId(0),
    })
}

pub trait SpaceGenerator: Named + Send + Sync {
    fn usage(&self) -> &'static str;
    fn generate(&self, args: &str) -> Result<LabeledGraph, SpaceError>;
}

fn parse_nums(space: &'static str, args: &str, count: usize) -> Result<Vec<u32>, SpaceError> {
    let nums: Vec<u32> = args
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(space, format!("expected {count} natural number(s), got `{args}`")))?;
    if nums.len() != count {
        return Err(bad(space, format!("expected {count} argument(s), got `{args}`")));
    }
    Ok(nums)
}

macro_rules! numeric_space {
    ($ty:ident, $name:literal, $usage:literal, |$n:ident| $body:expr) => {
        pub struct $ty;
        impl Named for $ty {
            fn name(&self) -> &'static str {
                $name
            }
        }
        impl SpaceGenerator for $ty {
            fn usage(&self) -> &'static str {
                $usage
            }
            fn generate(&self, args: &str) -> Result<LabeledGraph, SpaceError> {
                let $n = parse_nums($name, args, $usage.matches(',').count() + 1)?;
                $body
            }
        }
    };
}

numeric_space!(BroomSpace, "broom", "broom:m", |n| broom_tree(n[0]));
numeric_space!(TreeSpace, "tree", "tree:v,d", |n| regular_tree(n[0], n[1]));
numeric_space!(FareySpace, "farey", "farey:qmax", |n| farey_truncation(n[0]));
numeric_space!(GridSpace, "grid", "grid:n", |n| grid(n[0]));

/// Loads a graph file; vertex labels are the ids and the basepoint is vertex 0.
pub struct FileSpace;

impl Named for FileSpace {
    fn name(&self) -> &'static str {
        "file"
    }
}

impl SpaceGenerator for FileSpace {
    fn usage(&self) -> &'static str {
        "file:path"
    }

    fn generate(&self, args: &str) -> Result<LabeledGraph, SpaceError> {
        let text = std::fs::read_to_string(args).map_err(|e| SpaceError::Io {
            path: args.to_string(),
            msg: e.to_string(),
        })?;
        let graph = load_graph(&text)?;
        if graph.vertex_count() == 0 {
            return Err(bad("file", "graph has no vertices"));
        }
        let labels = graph.vertices().map(|v| v.to_string()).collect();
        Ok(LabeledGraph {
            graph: Arc::new(graph),
            labels,
            basepoint: VertexId(0),
        })
    }
}

pub fn space_registry() -> Registry<dyn SpaceGenerator> {
    let reg: Registry<dyn SpaceGenerator> = Registry::new("space");
    reg.with(Box::new(BroomSpace))
        .with(Box::new(TreeSpace))
        .with(Box::new(FareySpace))
        .with(Box::new(GridSpace))
        .with(Box::new(FileSpace))
}

/// Builds a space from a spec such as `broom:120` or `tree:4,6`.
pub fn generate(spec: &str) -> Result<LabeledGraph, SpaceError> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| SpaceError::Syntax(spec.to_string()))?;
    space_registry().get(kind)?.generate(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn broom_shape() {
        let b = broom_tree(3).unwrap();
        assert_eq!(b.graph.vertex_count(), 7);
        assert_eq!(b.graph.degree(b.basepoint), 3);
        let one = broom_tree(1).unwrap();
        assert_eq!(one.graph.vertex_count(), 2);
        assert_eq!(one.graph.edge_count(), 1);
        assert!(broom_tree(0).is_err());
        let leaf = b.find("ray3:3").unwrap();
        assert_eq!(b.graph.bfs(b.basepoint)[leaf.idx()], 3);
    }

    #[test]
    fn tree_sizes() {
        assert_eq!(regular_tree(3, 1).unwrap().graph.vertex_count(), 4);
        for (v, d) in [(3u64, 4u32), (4, 3), (6, 2)] {
            let expect = 1 + v * ((v - 1).pow(d) - 1) / (v - 2);
            assert_eq!(
                regular_tree(v as u32, d).unwrap().graph.vertex_count() as u64,
                expect
            );
        }
        assert_eq!(regular_tree(2, 3).unwrap().graph.vertex_count(), 7);
        assert!(regular_tree(1, 3).is_err());
        assert!(regular_tree(3, 0).is_err());
    }

    #[test]
    fn fraction_rules() {
        let f = |s: &str| s.parse::<Fraction>().unwrap();
        assert!(f("1/2").farey_adjacent(f("1/3")));
        assert!(!f("1/2").farey_adjacent(f("1/4")));
        assert!(f("1/0").farey_adjacent(f("-7/1")));
        assert!("2/4".parse::<Fraction>().is_err());
        assert!("-1/0".parse::<Fraction>().is_err());
    }

    #[test]
    fn small_farey_matches_rule() {
        let fg = farey_truncation(6).unwrap();
        let fr: Vec<Fraction> = fg.labels.iter().map(|l| l.parse().unwrap()).collect();
        for u in fg.graph.vertices() {
            for v in fg.graph.vertices() {
                let want = u != v && fr[u.idx()].farey_adjacent(fr[v.idx()]);
                assert_eq!(fg.graph.has_edge(u, v), want, "{} {}", fr[u.idx()], fr[v.idx()]);
            }
        }
        assert_eq!(fg.label(fg.basepoint), "0/1");
    }

    #[test]
    fn grid_is_lattice() {
        let g = grid(2).unwrap();
        assert_eq!(g.graph.edge_count(), 4);
        assert!(g.graph.vertices().all(|v| g.graph.degree(v) == 2));
        let g = grid(5).unwrap();
        assert_eq!(g.graph.bfs(VertexId(0))[24], 8);
        assert!(grid(1).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(generate("tree:3,2").unwrap().graph.vertex_count(), 10);
        assert!(matches!(generate("moon:3"), Err(SpaceError::Registry(_))));
        assert!(matches!(generate("broom"), Err(SpaceError::Syntax(_))));
        assert!(matches!(generate("tree:3"), Err(SpaceError::BadArgs { .. })));
    }
}
