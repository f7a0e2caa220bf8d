//! Discrete-subset probes: r-capacity of balls, broom ray points, growth across truncations.

use std::fmt;

use thiserror::Error;

use crate::graph::{BfsScratch, GraphError, MetricGraph, VertexId};
use crate::registry::{Named, Registry};
use crate::spaces::{LabeledGraph, SpaceError};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("not a broom: {0}")]
    NotABroom(String),
    #[error("no ray has length at least {0}")]
    NoLongRay(u32),
    #[error("parameter sequence must be strictly increasing")]
    NotIncreasing,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Candidates with pairwise conflicts (distance below the threshold) as adjacency masks.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub candidates: Vec<VertexId>,
    pub conflicts: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn build(g: &MetricGraph, candidates: Vec<VertexId>, d: u32) -> Self {
        let mut scratch = BfsScratch::new(g.vertex_count());
        let conflicts = candidates
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if d == 0 {
                    return Vec::new();
                }
                scratch.run(g, &[c], d - 1);
                let mut near: Vec<usize> = scratch
                    .visited()
                    .iter()
                    .filter_map(|(v, _)| candidates.binary_search(v).ok())
                    .filter(|&j| j != i)
                    .collect();
                near.sort_unstable();
                near
            })
            .collect();
        ConflictGraph {
            candidates,
            conflicts,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Greedy,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Greedy => "greedy",
            Method::Exact => "exact",
        })
    }
}

pub trait CapacitySolver: Named + Send + Sync {
    fn method(&self) -> Method;
    /// Indices of an independent set of the conflict graph.
    fn solve(&self, cg: &ConflictGraph) -> Vec<usize>;
}

pub struct GreedySolver;

impl Named for GreedySolver {
    fn name(&self) -> &'static str {
        "greedy"
    }
}

impl CapacitySolver for GreedySolver {
    fn method(&self) -> Method {
        Method::Greedy
    }

    fn solve(&self, cg: &ConflictGraph) -> Vec<usize> {
        let mut taken = vec![false; cg.len()];
        let mut out = Vec::new();
        for i in 0..cg.len() {
            if cg.conflicts[i].iter().all(|&j| !taken[j]) {
                taken[i] = true;
                out.push(i);
            }
        }
        out
    }
}

/// Branch and bound over 128-bit masks; larger inputs fall back to greedy.
pub struct ExactSolver;

pub const EXACT_MAX: usize = 128;

struct Bnb {
    adj: Vec<u128>,
    best: u128,
    best_len: u32,
}

impl Bnb {
    fn clique_cover(&self, mut p: u128) -> u32 {
        let mut cliques = 0;
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            let mut clique_common = self.adj[v];
            p &= !(1u128 << v);
            let mut cand = p & clique_common;
            while cand != 0 {
                let u = cand.trailing_zeros() as usize;
                cand &= !(1u128 << u);
                if clique_common >> u & 1 == 1 {
                    p &= !(1u128 << u);
                    clique_common &= self.adj[u];
                    cand &= clique_common;
                }
            }
            cliques += 1;
        }
        cliques
    }

    fn search(&mut self, mut p: u128, mut chosen: u128) {
        // vertices with at most one neighbor left in p can always be taken
        loop {
            let mut reduced = false;
            let mut scan = p;
            while scan != 0 {
                let v = scan.trailing_zeros() as usize;
                scan &= !(1u128 << v);
                if p >> v & 1 == 0 {
                    continue;
                }
                if (self.adj[v] & p).count_ones() <= 1 {
                    chosen |= 1u128 << v;
                    p &= !(self.adj[v] | 1u128 << v);
                    reduced = true;
                }
            }
            if !reduced {
                break;
            }
        }
        let size = chosen.count_ones();
        if p == 0 {
            if size > self.best_len {
                self.best_len = size;
                self.best = chosen;
            }
            return;
        }
        if size + self.clique_cover(p) <= self.best_len {
            return;
        }
        let mut v = p.trailing_zeros() as usize;
        let mut deg = 0;
        let mut scan = p;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= !(1u128 << u);
            let du = (self.adj[u] & p).count_ones();
            if du > deg {
                deg = du;
                v = u;
            }
        }
        let bit = 1u128 << v;
        self.search(p & !(self.adj[v] | bit), chosen | bit);
        self.search(p & !bit, chosen);
    }
}

impl Named for ExactSolver {
    fn name(&self) -> &'static str {
        "exact"
    }
}

impl CapacitySolver for ExactSolver {
    fn method(&self) -> Method {
        Method::Exact
    }

    fn solve(&self, cg: &ConflictGraph) -> Vec<usize> {
        let n = cg.len();
        assert!(n <= EXACT_MAX, "exact solver handles at most {EXACT_MAX} candidates");
        let adj: Vec<u128> = cg
            .conflicts
            .iter()
            .map(|c| c.iter().fold(0u128, |m, &j| m | 1u128 << j))
            .collect();
        let seed = GreedySolver.solve(cg);
        let mut bnb = Bnb {
            adj,
            best: seed.iter().fold(0u128, |m, &j| m | 1u128 << j),
            best_len: seed.len() as u32,
        };
        let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        bnb.search(all, 0);
        (0..n).filter(|&i| bnb.best >> i & 1 == 1).collect()
    }
}

pub fn solver_registry() -> Registry<dyn CapacitySolver> {
    let reg: Registry<dyn CapacitySolver> = Registry::new("capacity solver");
    reg.with(Box::new(GreedySolver)).with(Box::new(ExactSolver))
}

#[derive(Debug, Clone)]
pub struct DiscreteSubsetReport {
    pub d: u32,
    pub center: VertexId,
    pub radius: u32,
    pub subset: Vec<VertexId>,
    pub cardinality: usize,
    pub method: Method,
    /// Pairwise distances re-checked by BFS and containment in the ball confirmed.
    pub verified: bool,
}

/// Re-checks that `subset` is d-discrete and inside ball(center, radius).
pub fn verify_discrete(g: &MetricGraph, subset: &[VertexId], d: u32, center: VertexId, radius: u32) -> bool {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut scratch = BfsScratch::new(g.vertex_count());
    scratch.run(g, &[center], radius);
    if sorted.iter().any(|&v| scratch.dist(v) == u32::MAX) {
        return false;
    }
    if d == 0 {
        return true;
    }
    sorted.iter().all(|&v| {
        scratch.run(g, &[v], d - 1);
        scratch
            .visited()
            .iter()
            .all(|(w, _)| *w == v || sorted.binary_search(w).is_err())
    })
}

/// Largest d-discrete subset of ball(center, radius): exact up to `exact_limit` candidates.
pub fn discrete_capacity(
    g: &MetricGraph,
    d: u32,
    center: VertexId,
    radius: u32,
    exact_limit: usize,
) -> Result<DiscreteSubsetReport, ProbeError> {
    let ball = g.ball(center, radius)?;
    let (subset, method) = if d <= 1 {
        (ball, Method::Exact)
    } else {
        let cg = ConflictGraph::build(g, ball, d);
        let solvers = solver_registry();
        let name = if cg.len() <= exact_limit.min(EXACT_MAX) {
            "exact"
        } else {
            "greedy"
        };
        let solver = solvers.get(name).expect("builtin solver");
        let picked = solver.solve(&cg);
        (
            picked.into_iter().map(|i| cg.candidates[i]).collect(),
            solver.method(),
        )
    };
    let verified = verify_discrete(g, &subset, d, center, radius);
    Ok(DiscreteSubsetReport {
        d,
        center,
        radius,
        cardinality: subset.len(),
        subset,
        method,
        verified,
    })
}

/// The depth-`d` vertex of every ray of length at least `d` in a broom.
pub fn ray_points(lg: &LabeledGraph, d: u32) -> Result<Vec<VertexId>, ProbeError> {
    let g = &lg.graph;
    let root = lg.basepoint;
    if g.edge_count() + 1 != g.vertex_count() || !g.is_connected() {
        return Err(ProbeError::NotABroom("not a tree".into()));
    }
    if let Some(v) = g.vertices().find(|&v| v != root && g.degree(v) > 2) {
        return Err(ProbeError::NotABroom(format!("vertex {v} branches away from the root")));
    }
    if d == 0 {
        return Ok(vec![root]);
    }
    let mut out = Vec::new();
    for &start in g.neighbors(root) {
        let (mut prev, mut cur, mut depth) = (root, start, 1);
        let mut at_d = (depth == d).then_some(cur);
        while let Some(&next) = g.neighbors(cur).iter().find(|&&w| w != prev) {
            prev = cur;
            cur = next;
            depth += 1;
            if depth == d {
                at_d = Some(cur);
            }
        }
        out.extend(at_d);
    }
    if out.is_empty() {
        return Err(ProbeError::NoLongRay(d));
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    UnboundedTrend,
    Bounded,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::UnboundedTrend => "UNBOUNDED-TREND",
            Verdict::Bounded => "BOUNDED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GrowthPoint {
    pub param: u32,
    pub report: DiscreteSubsetReport,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub points: Vec<GrowthPoint>,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn cardinalities(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.report.cardinality).collect()
    }

    pub fn lines(&self) -> Vec<String> {
        self.points
            .iter()
            .map(|p| {
                format!(
                    "capacity D={} param={} card={} method={}",
                    p.report.d, p.param, p.report.cardinality, p.report.method
                )
            })
            .collect()
    }
}

/// Strictly increasing throughout reads as unbounded; a constant second half as bounded.
pub fn verdict(cards: &[usize]) -> Verdict {
    if cards.len() >= 2 && cards.windows(2).all(|w| w[0] < w[1]) {
        return Verdict::UnboundedTrend;
    }
    let tail = &cards[cards.len() / 2..];
    if tail.len() >= 2 && tail.iter().all(|&c| c == tail[0]) {
        return Verdict::Bounded;
    }
    Verdict::Inconclusive
}

/// Capacity of ball(basepoint, radius) across an increasing parameter sequence.
pub fn growth_probe(
    generate: impl Fn(u32) -> Result<LabeledGraph, SpaceError>,
    params: &[u32],
    d: u32,
    radius: u32,
    exact_limit: usize,
) -> Result<GrowthReport, ProbeError> {
    if params.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ProbeError::NotIncreasing);
    }
    let mut points = Vec::with_capacity(params.len());
    for &param in params {
        let lg = generate(param)?;
        let report = discrete_capacity(&lg.graph, d, lg.basepoint, radius, exact_limit)?;
        points.push(GrowthPoint { param, report });
    }
    let cards: Vec<usize> = points.iter().map(|p| p.report.cardinality).collect();
    Ok(GrowthReport {
        verdict: verdict(&cards),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{broom_tree, regular_tree};

    #[test]
    fn d_one_takes_whole_ball() {
        let t = regular_tree(3, 3).unwrap();
        let rep = discrete_capacity(&t.graph, 1, t.basepoint, 2, 40).unwrap();
        assert_eq!(rep.cardinality, 10);
        assert!(rep.verified);
    }

    #[test]
    fn exact_beats_or_ties_greedy() {
        let t = regular_tree(4, 3).unwrap();
        let ball = t.graph.ball(t.basepoint, 2).unwrap();
        let cg = ConflictGraph::build(&t.graph, ball, 2);
        let g = GreedySolver.solve(&cg).len();
        let e = ExactSolver.solve(&cg).len();
        assert!(e >= g);
        // levels 0 and 2: 1 + 12 versus the 4 level-1 vertices
        assert_eq!(e, 13);
    }

    #[test]
    fn broom_rays() {
        let b = broom_tree(10).unwrap();
        let pts = ray_points(&b, 3).unwrap();
        assert_eq!(pts.len(), 8);
        assert!(verify_discrete(&b.graph, &pts, 6, b.basepoint, 3));
        assert!(!verify_discrete(&b.graph, &pts, 7, b.basepoint, 3));
        assert_eq!(ray_points(&b, 0).unwrap(), vec![b.basepoint]);
        assert!(matches!(ray_points(&b, 11), Err(ProbeError::NoLongRay(11))));
        let t = regular_tree(3, 3).unwrap();
        assert!(matches!(ray_points(&t, 1), Err(ProbeError::NotABroom(_))));
    }

    #[test]
    fn verdicts() {
        assert_eq!(verdict(&[1, 2, 5]), Verdict::UnboundedTrend);
        assert_eq!(verdict(&[3, 4, 4, 4]), Verdict::Bounded);
        assert_eq!(verdict(&[3, 5, 4, 6]), Verdict::Inconclusive);
    }

    #[test]
    fn increasing_params_required() {
        let err = growth_probe(broom_tree, &[3, 3], 1, 1, 40).unwrap_err();
        assert!(matches!(err, ProbeError::NotIncreasing));
    }
}
