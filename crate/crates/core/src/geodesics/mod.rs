//! Geodesic families, G-sets, thin triangles and the property B checker.

mod delta;
mod propb;

pub use delta::{thin_delta, thin_delta_scan, thinness, DeltaMethod, HyperbolicityReport};
pub use propb::{check_property_b, PairScope, PropertyBConfig, PropertyBReport, Violation};

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::graph::{DistanceOracle, GraphError, MetricGraph, Path, VertexId, UNSEEN};
use crate::registry::{Named, Registry};

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    All { cap: usize },
    Canonical,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::All { cap } => write!(f, "all(cap={cap})"),
            FamilyKind::Canonical => f.write_str("canonical"),
        }
    }
}

/// Vertices lying on geodesics from `u` to `v`, grouped by distance from `u`.
/// Each layer is sorted. `None` when `blocked` cuts every geodesic.
pub(crate) fn interval_layers(
    g: &MetricGraph,
    du: &[u32],
    v: VertexId,
    blocked: Option<&FixedBitSet>,
) -> Option<Vec<Vec<VertexId>>> {
    let len = du[v.idx()];
    debug_assert_ne!(len, UNSEEN);
    let is_blocked = |w: VertexId| blocked.is_some_and(|b| b.contains(w.idx()));
    if is_blocked(v) {
        return None;
    }
    let mut layers = vec![Vec::new(); len as usize + 1];
    layers[len as usize].push(v);
    for level in (1..=len).rev() {
        let mut next: Vec<VertexId> = layers[level as usize]
            .iter()
            .flat_map(|&x| g.neighbors(x).iter().copied())
            .filter(|&w| du[w.idx()] == level - 1 && !is_blocked(w))
            .collect();
        if next.is_empty() {
            return None;
        }
        next.sort_unstable();
        next.dedup();
        layers[level as usize - 1] = next;
    }
    Some(layers)
}

/// Lexicographically least walk through the layers, starting at the single vertex of layer 0.
pub(crate) fn least_path(g: &MetricGraph, layers: &[Vec<VertexId>]) -> Path {
    let mut x = layers[0][0];
    let mut out = vec![x];
    for layer in &layers[1..] {
        x = *g
            .neighbors(x)
            .iter()
            .find(|w| layer.binary_search(w).is_ok())
            .expect("layers are linked");
        out.push(x);
    }
    Path(out)
}

/// Max over geodesics through the layers of the min of `dp` along the geodesic,
/// with a path attaining it.
pub(crate) fn widest_path(g: &MetricGraph, layers: &[Vec<VertexId>], dp: &[u32]) -> (u32, Path) {
    let mut best: Vec<Vec<u32>> = Vec::with_capacity(layers.len());
    let mut from: Vec<Vec<usize>> = Vec::with_capacity(layers.len());
    best.push(vec![dp[layers[0][0].idx()]]);
    from.push(vec![0]);
    for i in 1..layers.len() {
        let prev = &layers[i - 1];
        let mut b = Vec::with_capacity(layers[i].len());
        let mut f = Vec::with_capacity(layers[i].len());
        for &y in &layers[i] {
            let mut arg = usize::MAX;
            let mut val = 0;
            for w in g.neighbors(y) {
                if let Ok(j) = prev.binary_search(w) {
                    let cand = best[i - 1][j];
                    if arg == usize::MAX || cand > val {
                        arg = j;
                        val = cand;
                    }
                }
            }
            b.push(val.min(dp[y.idx()]));
            f.push(arg);
        }
        best.push(b);
        from.push(f);
    }
    let last = layers.len() - 1;
    let mut path = Vec::with_capacity(layers.len());
    let mut j = 0;
    for i in (0..=last).rev() {
        path.push(layers[i][j]);
        j = from[i][j];
    }
    path.reverse();
    (best[last][0], Path(path))
}

/// A rule assigning to each vertex pair a nonempty set of geodesics.
///
/// Methods assume both endpoints lie in one component.
pub trait GeodesicFamily: Send + Sync {
    fn kind(&self) -> FamilyKind;
    fn oracle(&self) -> &Arc<DistanceOracle>;

    fn graph(&self) -> &MetricGraph {
        self.oracle().graph()
    }

    /// The family's geodesics from `u` to `v`; the flag marks a truncated list.
    fn resolve(&self, u: VertexId, v: VertexId) -> Result<(Vec<Path>, bool), GraphError>;

    /// G(u, v) in ascending order.
    fn union(&self, u: VertexId, v: VertexId) -> Vec<VertexId>;

    /// Some family geodesic from `u` to `v` avoiding `blocked`.
    fn avoiding(&self, u: VertexId, v: VertexId, blocked: &FixedBitSet) -> Option<Path>;

    /// Max over family geodesics from `u` to `v` of their distance to `p`, with a maximizer.
    fn farthest(&self, p: VertexId, u: VertexId, v: VertexId) -> (u32, Path);

    /// A family geodesic from `u` to `v` through `p`.
    fn through(&self, u: VertexId, v: VertexId, p: VertexId) -> Option<Path>;

    /// Vertices at distance `level` from `x0` lying on family geodesics from `x` to `x0`.
    fn crossings(&self, x: VertexId, x0: VertexId, level: u32) -> Vec<VertexId>;

    fn mark_union(&self, u: VertexId, v: VertexId, out: &mut FixedBitSet) {
        for w in self.union(u, v) {
            out.insert(w.idx());
        }
    }

    fn contains_vertex(&self, u: VertexId, v: VertexId, c: VertexId) -> bool {
        self.union(u, v).binary_search(&c).is_ok()
    }
}

pub struct AllGeodesics {
    oracle: Arc<DistanceOracle>,
    cap: usize,
}

impl AllGeodesics {
    pub fn new(oracle: Arc<DistanceOracle>, cap: usize) -> Self {
        AllGeodesics { oracle, cap }
    }

    fn layers(&self, u: VertexId, v: VertexId, blocked: Option<&FixedBitSet>) -> Option<Vec<Vec<VertexId>>> {
        interval_layers(self.graph(), &self.oracle.row(u), v, blocked)
    }
}

impl GeodesicFamily for AllGeodesics {
    fn kind(&self) -> FamilyKind {
        FamilyKind::All { cap: self.cap }
    }

    fn oracle(&self) -> &Arc<DistanceOracle> {
        &self.oracle
    }

    fn resolve(&self, u: VertexId, v: VertexId) -> Result<(Vec<Path>, bool), GraphError> {
        self.graph().all_geodesics(u, v, self.cap)
    }

    fn union(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self
            .layers(u, v, None)
            .expect("endpoints are connected")
            .into_iter()
            .flatten()
            .collect();
        all.sort_unstable();
        all
    }

    fn avoiding(&self, u: VertexId, v: VertexId, blocked: &FixedBitSet) -> Option<Path> {
        if blocked.contains(u.idx()) {
            return None;
        }
        let layers = self.layers(u, v, Some(blocked))?;
        Some(least_path(self.graph(), &layers))
    }

    fn farthest(&self, p: VertexId, u: VertexId, v: VertexId) -> (u32, Path) {
        let layers = self.layers(u, v, None).expect("endpoints are connected");
        widest_path(self.graph(), &layers, &self.oracle.row(p))
    }

    fn through(&self, u: VertexId, v: VertexId, p: VertexId) -> Option<Path> {
        let du = self.oracle.row(u);
        let dv = self.oracle.row(v);
        if du[p.idx()] + dv[p.idx()] != du[v.idx()] {
            return None;
        }
        let head = least_path(self.graph(), &interval_layers(self.graph(), &du, p, None)?);
        let tail = least_path(self.graph(), &interval_layers(self.graph(), &self.oracle.row(p), v, None)?);
        let mut out = head.0;
        out.extend_from_slice(&tail.0[1..]);
        Some(Path(out))
    }

    fn crossings(&self, x: VertexId, x0: VertexId, level: u32) -> Vec<VertexId> {
        let layers = self.layers(x0, x, None).expect("endpoints are connected");
        layers.get(level as usize).cloned().unwrap_or_default()
    }

    fn mark_union(&self, u: VertexId, v: VertexId, out: &mut FixedBitSet) {
        for layer in self.layers(u, v, None).expect("endpoints are connected") {
            for w in layer {
                out.insert(w.idx());
            }
        }
    }

    fn contains_vertex(&self, u: VertexId, v: VertexId, c: VertexId) -> bool {
        let du = self.oracle.row(u);
        let dv = self.oracle.row(v);
        du[c.idx()] != UNSEEN && du[c.idx()] + dv[c.idx()] == du[v.idx()]
    }
}

/// One geodesic per unordered pair: the least one walking from the smaller id.
pub struct CanonicalGeodesics {
    oracle: Arc<DistanceOracle>,
}

impl CanonicalGeodesics {
    pub fn new(oracle: Arc<DistanceOracle>) -> Self {
        CanonicalGeodesics { oracle }
    }

    pub fn path(&self, u: VertexId, v: VertexId) -> Path {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let layers = interval_layers(self.graph(), &self.oracle.row(lo), hi, None)
            .expect("endpoints are connected");
        let p = least_path(self.graph(), &layers);
        if u <= v {
            p
        } else {
            p.reversed()
        }
    }
}

impl GeodesicFamily for CanonicalGeodesics {
    fn kind(&self) -> FamilyKind {
        FamilyKind::Canonical
    }

    fn oracle(&self) -> &Arc<DistanceOracle> {
        &self.oracle
    }

    fn resolve(&self, u: VertexId, v: VertexId) -> Result<(Vec<Path>, bool), GraphError> {
        if self.oracle.dist(u, v) == UNSEEN {
            return Err(GraphError::Unreachable(u.0, v.0));
        }
        Ok((vec![self.path(u, v)], false))
    }

    fn union(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut vs = self.path(u, v).0;
        vs.sort_unstable();
        vs
    }

    fn avoiding(&self, u: VertexId, v: VertexId, blocked: &FixedBitSet) -> Option<Path> {
        let p = self.path(u, v);
        p.vertices()
            .iter()
            .all(|w| !blocked.contains(w.idx()))
            .then_some(p)
    }

    fn farthest(&self, p: VertexId, u: VertexId, v: VertexId) -> (u32, Path) {
        let path = self.path(u, v);
        let dp = self.oracle.row(p);
        let d = path.vertices().iter().map(|w| dp[w.idx()]).min().unwrap_or(0);
        (d, path)
    }

    fn through(&self, u: VertexId, v: VertexId, p: VertexId) -> Option<Path> {
        let path = self.path(u, v);
        path.vertices().contains(&p).then_some(path)
    }

    fn crossings(&self, x: VertexId, x0: VertexId, level: u32) -> Vec<VertexId> {
        let path = self.path(x0, x);
        path.vertices().get(level as usize).map(|&s| vec![s]).unwrap_or_default()
    }
}

pub trait FamilyFactory: Named + Send + Sync {
    fn build(&self, oracle: Arc<DistanceOracle>, cap: usize) -> Box<dyn GeodesicFamily>;
}

pub struct AllFactory;
pub struct CanonicalFactory;

impl Named for AllFactory {
    fn name(&self) -> &'static str {
        "all"
    }
}

impl FamilyFactory for AllFactory {
    fn build(&self, oracle: Arc<DistanceOracle>, cap: usize) -> Box<dyn GeodesicFamily> {
        Box::new(AllGeodesics::new(oracle, cap))
    }
}

impl Named for CanonicalFactory {
    fn name(&self) -> &'static str {
        "canonical"
    }
}

impl FamilyFactory for CanonicalFactory {
    fn build(&self, oracle: Arc<DistanceOracle>, _cap: usize) -> Box<dyn GeodesicFamily> {
        Box::new(CanonicalGeodesics::new(oracle))
    }
}

pub fn family_registry() -> Registry<dyn FamilyFactory> {
    let reg: Registry<dyn FamilyFactory> = Registry::new("geodesic family");
    reg.with(Box::new(AllFactory)).with(Box::new(CanonicalFactory))
}

/// G(A, B): union of family geodesics between the two vertex sets.
pub fn g_set_between(fam: &dyn GeodesicFamily, from: &[VertexId], to: &[VertexId]) -> Vec<VertexId> {
    let mut bits = FixedBitSet::with_capacity(fam.graph().vertex_count());
    for &a in from {
        for &b in to {
            fam.mark_union(a, b, &mut bits);
        }
    }
    bits.ones().map(|i| VertexId(i as u32)).collect()
}

/// G(a, b; r) = G(N(a; r), N(b; r)).
pub fn g_set_r(fam: &dyn GeodesicFamily, a: VertexId, b: VertexId, r: u32) -> Vec<VertexId> {
    let g = fam.graph();
    let na = g.ball(a, r).expect("valid vertex");
    let nb = g.ball(b, r).expect("valid vertex");
    g_set_between(fam, &na, &nb)
}
