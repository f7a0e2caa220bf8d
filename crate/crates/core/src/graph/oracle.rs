use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use super::{Distance, MetricGraph, VertexId, UNSEEN};

/// Reusable BFS buffers; resetting touches only visited entries.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    dist: Vec<u32>,
    visited: Vec<(VertexId, u32)>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![UNSEEN; n],
            visited: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &(v, _) in &self.visited {
            self.dist[v.idx()] = UNSEEN;
        }
        self.visited.clear();
    }

    fn seed(&mut self, sources: &[VertexId]) {
        self.reset();
        for &s in sources {
            if self.dist[s.idx()] == UNSEEN {
                self.dist[s.idx()] = 0;
                self.visited.push((s, 0));
            }
        }
    }

    /// Multi-source BFS up to `radius`.
    pub fn run(&mut self, g: &MetricGraph, sources: &[VertexId], radius: u32) {
        self.seed(sources);
        let mut head = 0;
        while head < self.visited.len() {
            let (u, du) = self.visited[head];
            head += 1;
            if du >= radius {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.dist[w.idx()] == UNSEEN {
                    self.dist[w.idx()] = du + 1;
                    self.visited.push((w, du + 1));
                }
            }
        }
    }

    /// BFS from `src` that stops once every vertex of the sorted slice `members` is reached.
    pub fn run_until_covers(&mut self, g: &MetricGraph, src: VertexId, members: &[VertexId]) {
        self.seed(&[src]);
        let mut remaining = members.len() - usize::from(members.binary_search(&src).is_ok());
        let mut head = 0;
        while head < self.visited.len() && remaining > 0 {
            let (u, du) = self.visited[head];
            head += 1;
            for &w in g.neighbors(u) {
                if self.dist[w.idx()] == UNSEEN {
                    self.dist[w.idx()] = du + 1;
                    self.visited.push((w, du + 1));
                    if members.binary_search(&w).is_ok() {
                        remaining -= 1;
                    }
                }
            }
        }
    }

    /// Max distance from `src` to the sorted `targets`, or `None` if some target is unreachable.
    pub fn eccentricity_within(
        &mut self,
        g: &MetricGraph,
        src: VertexId,
        targets: &[VertexId],
    ) -> Option<u32> {
        self.run_until_covers(g, src, targets);
        targets.iter().try_fold(0, |acc, t| match self.dist[t.idx()] {
            UNSEEN => None,
            d => Some(acc.max(d)),
        })
    }

    #[inline]
    pub fn dist(&self, v: VertexId) -> u32 {
        self.dist[v.idx()]
    }

    pub fn visited(&self) -> &[(VertexId, u32)] {
        &self.visited
    }
}

const DENSE_LIMIT: usize = 1024;
const CACHE_ROWS: usize = 256;

/// Distance rows with dense all-pairs storage on small graphs and a FIFO row cache otherwise.
#[derive(Debug)]
pub struct DistanceOracle {
    graph: Arc<MetricGraph>,
    dense: Option<Vec<Arc<[u32]>>>,
    cache: Mutex<(HashMap<u32, Arc<[u32]>>, VecDeque<u32>)>,
}

impl DistanceOracle {
    pub fn new(graph: Arc<MetricGraph>) -> Self {
        let dense = (graph.vertex_count() <= DENSE_LIMIT)
            .then(|| graph.vertices().map(|v| Arc::from(graph.bfs(v))).collect());
        DistanceOracle {
            graph,
            dense,
            cache: Mutex::new((HashMap::new(), VecDeque::new())),
        }
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn row(&self, v: VertexId) -> Arc<[u32]> {
        if let Some(rows) = &self.dense {
            return rows[v.idx()].clone();
        }
        let mut guard = self.cache.lock().expect("cache lock");
        let (map, order) = &mut *guard;
        if let Some(row) = map.get(&v.0) {
            return row.clone();
        }
        let row: Arc<[u32]> = Arc::from(self.graph.bfs(v));
        if order.len() >= CACHE_ROWS {
            if let Some(old) = order.pop_front() {
                map.remove(&old);
            }
        }
        map.insert(v.0, row.clone());
        order.push_back(v.0);
        row
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> u32 {
        self.row(u)[v.idx()]
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Distance {
        Distance::from_raw(self.dist(u, v))
    }
}
