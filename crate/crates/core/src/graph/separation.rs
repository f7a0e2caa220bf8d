use super::{MetricGraph, VertexId};

/// DFS low-link data answering whether removing one vertex disconnects two others.
#[derive(Debug, Clone)]
pub struct SeparationIndex {
    tin: Vec<u32>,
    tout: Vec<u32>,
    low: Vec<u32>,
    comp: Vec<u32>,
    children: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    Below(VertexId),
}

impl SeparationIndex {
    pub fn new(g: &MetricGraph) -> Self {
        let n = g.vertex_count();
        let mut tin = vec![u32::MAX; n];
        let mut tout = vec![0; n];
        let mut low = vec![0; n];
        let mut comp = vec![0; n];
        let mut children = vec![Vec::new(); n];
        let mut clock = 0u32;
        let mut ncomp = 0u32;
        for root in g.vertices() {
            if tin[root.idx()] != u32::MAX {
                continue;
            }
            let mut stack: Vec<(VertexId, Option<VertexId>, usize)> = vec![(root, None, 0)];
            tin[root.idx()] = clock;
            low[root.idx()] = clock;
            comp[root.idx()] = ncomp;
            clock += 1;
            while let Some(top) = stack.last_mut() {
                let (u, parent, ref mut next) = *top;
                let nbrs = g.neighbors(u);
                if *next < nbrs.len() {
                    let w = nbrs[*next];
                    *next += 1;
                    if tin[w.idx()] == u32::MAX {
                        tin[w.idx()] = clock;
                        low[w.idx()] = clock;
                        comp[w.idx()] = ncomp;
                        clock += 1;
                        children[u.idx()].push(w);
                        stack.push((w, Some(u), 0));
                    } else if Some(w) != parent {
                        low[u.idx()] = low[u.idx()].min(tin[w.idx()]);
                    }
                } else {
                    tout[u.idx()] = clock;
                    stack.pop();
                    if let Some(p) = parent {
                        low[p.idx()] = low[p.idx()].min(low[u.idx()]);
                    }
                }
            }
            ncomp += 1;
        }
        SeparationIndex {
            tin,
            tout,
            low,
            comp,
            children,
        }
    }

    fn side(&self, c: VertexId, v: VertexId) -> Side {
        let (tc, tv) = (self.tin[c.idx()], self.tin[v.idx()]);
        if tv < tc || tv >= self.tout[c.idx()] {
            return Side::Above;
        }
        let kids = &self.children[c.idx()];
        let pos = kids.partition_point(|k| self.tin[k.idx()] <= tv);
        let child = kids[pos - 1];
        if self.low[child.idx()] >= tc {
            Side::Below(child)
        } else {
            Side::Above
        }
    }

    /// True when `u` and `v` lie in one component but every path between them meets `c`.
    pub fn separates(&self, c: VertexId, u: VertexId, v: VertexId) -> bool {
        if c == u || c == v || self.comp[u.idx()] != self.comp[v.idx()] {
            return false;
        }
        self.side(c, u) != self.side(c, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_interior_separates() {
        let g = MetricGraph::from_edges("p", 5, (0..4).map(|i| (i, i + 1))).unwrap();
        let s = SeparationIndex::new(&g);
        assert!(s.separates(VertexId(2), VertexId(0), VertexId(4)));
        assert!(!s.separates(VertexId(2), VertexId(0), VertexId(1)));
        assert!(!s.separates(VertexId(4), VertexId(0), VertexId(3)));
    }

    #[test]
    fn cycle_has_no_cut_vertex() {
        let g = MetricGraph::from_edges("c", 6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let s = SeparationIndex::new(&g);
        for c in 0..6 {
            for u in 0..6 {
                for v in 0..6 {
                    assert!(!s.separates(VertexId(c), VertexId(u), VertexId(v)));
                }
            }
        }
    }

    #[test]
    fn bowtie_center() {
        // two triangles sharing vertex 2
        let g = MetricGraph::from_edges("b", 5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
            .unwrap();
        let s = SeparationIndex::new(&g);
        assert!(s.separates(VertexId(2), VertexId(0), VertexId(4)));
        assert!(!s.separates(VertexId(2), VertexId(3), VertexId(4)));
        assert!(!s.separates(VertexId(1), VertexId(0), VertexId(4)));
    }
}
