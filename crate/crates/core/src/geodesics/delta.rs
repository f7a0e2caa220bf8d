use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GeodesicFamily;
use crate::graph::{DistanceOracle, GraphError, Path, VertexId, UNSEEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMethod {
    TreeCertificate,
    Exhaustive,
    Sampled,
}

impl DeltaMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DeltaMethod::TreeCertificate => "tree-certificate",
            DeltaMethod::Exhaustive => "exhaustive",
            DeltaMethod::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HyperbolicityReport {
    pub delta: u32,
    /// Sides x->y, y->z, z->x of a triangle realizing `delta`.
    pub witness: [Path; 3],
    pub triangles_checked: u64,
    pub exhaustive: bool,
    pub method: DeltaMethod,
}

/// Least δ making the triangle with these sides δ-thin.
pub fn thinness(oracle: &DistanceOracle, sides: &[Path; 3]) -> u32 {
    let mut worst = 0;
    for i in 0..3 {
        for &p in sides[i].vertices() {
            let row = oracle.row(p);
            let near = |s: &Path| s.vertices().iter().map(|w| row[w.idx()]).min().unwrap_or(UNSEEN);
            let d = near(&sides[(i + 1) % 3]).min(near(&sides[(i + 2) % 3]));
            worst = worst.max(d);
        }
    }
    worst
}

fn require_connected(fam: &dyn GeodesicFamily) -> Result<(), GraphError> {
    let g = fam.graph();
    if g.vertex_count() == 0 {
        return Err(GraphError::EmptySet);
    }
    let row = fam.oracle().row(VertexId(0));
    match row.iter().position(|&d| d == UNSEEN) {
        Some(v) => Err(GraphError::Unreachable(0, v as u32)),
        None => Ok(()),
    }
}

/// δ over family triangles; trees short-circuit to 0.
pub fn thin_delta(
    fam: &dyn GeodesicFamily,
    budget: u64,
    seed: u64,
) -> Result<HyperbolicityReport, GraphError> {
    require_connected(fam)?;
    let g = fam.graph();
    if g.edge_count() + 1 == g.vertex_count() {
        let x = Path(vec![VertexId(0)]);
        return Ok(HyperbolicityReport {
            delta: 0,
            witness: [x.clone(), x.clone(), x],
            triangles_checked: 0,
            exhaustive: true,
            method: DeltaMethod::TreeCertificate,
        });
    }
    thin_delta_scan(fam, budget, seed)
}

struct Scanner<'a> {
    fam: &'a dyn GeodesicFamily,
    memo: HashMap<(u32, u32, u32), u32>,
}

impl Scanner<'_> {
    fn far(&mut self, p: VertexId, u: VertexId, v: VertexId) -> u32 {
        let key = (p.0, u.0.min(v.0), u.0.max(v.0));
        if let Some(&d) = self.memo.get(&key) {
            return d;
        }
        if self.memo.len() > 4_000_000 {
            self.memo.clear();
        }
        let d = self.fam.farthest(p, u, v).0;
        self.memo.insert(key, d);
        d
    }

    /// Best (value, side, p) over the three sides of triangle (x, y, z).
    fn triangle(&mut self, t: [VertexId; 3]) -> (u32, usize, VertexId) {
        let mut best = (0, 0, t[0]);
        for side in 0..3 {
            let (u, v, w) = (t[side], t[(side + 1) % 3], t[(side + 2) % 3]);
            for p in self.fam.union(u, v) {
                let d = self.far(p, v, w).min(self.far(p, w, u));
                if d > best.0 {
                    best = (d, side, p);
                }
            }
        }
        best
    }
}

/// δ over family triangles without the tree shortcut. Exhaustive over vertex multisets
/// `x <= y <= z` when there are at most `budget` of them, else a seeded sample.
pub fn thin_delta_scan(
    fam: &dyn GeodesicFamily,
    budget: u64,
    seed: u64,
) -> Result<HyperbolicityReport, GraphError> {
    require_connected(fam)?;
    let n = fam.graph().vertex_count() as u64;
    let total = (n as u128) * (n as u128 + 1) * (n as u128 + 2) / 6;
    let exhaustive = total <= budget as u128;
    let triples: Box<dyn Iterator<Item = [u32; 3]>> = if exhaustive {
        let n = n as u32;
        Box::new((0..n).flat_map(move |x| {
            (x..n).flat_map(move |y| (y..n).map(move |z| [x, y, z]))
        }))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picks: Vec<[u32; 3]> = (0..budget)
            .map(|_| {
                let mut t = [0u32; 3].map(|_| rng.gen_range(0..n) as u32);
                t.sort_unstable();
                t
            })
            .collect();
        picks.sort_unstable();
        picks.dedup();
        Box::new(picks.into_iter())
    };

    let mut scanner = Scanner {
        fam,
        memo: HashMap::new(),
    };
    let mut best = (0, 0, VertexId(0));
    let mut best_tri = [VertexId(0); 3];
    let mut checked = 0u64;
    for t in triples {
        let t = t.map(VertexId);
        let got = scanner.triangle(t);
        checked += 1;
        if got.0 > best.0 || checked == 1 {
            best = got;
            best_tri = t;
        }
    }

    let (side, p) = (best.1, best.2);
    let (u, v, w) = (best_tri[side], best_tri[(side + 1) % 3], best_tri[(side + 2) % 3]);
    let first = fam.through(u, v, p).expect("p was drawn from G(u, v)");
    let second = fam.farthest(p, v, w).1;
    let third = fam.farthest(p, w, u).1;
    // rotate so the sides read x->y, y->z, z->x
    let mut sides = [first, second, third];
    sides.rotate_right(side);
    Ok(HyperbolicityReport {
        delta: best.0,
        witness: sides,
        triangles_checked: checked,
        exhaustive,
        method: if exhaustive {
            DeltaMethod::Exhaustive
        } else {
            DeltaMethod::Sampled
        },
    })
}
