use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GeodesicFamily;
use crate::graph::{BfsScratch, Path, SeparationIndex, VertexId, UNSEEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairScope {
    AllPairs,
    /// Pairs {x0, b} only.
    Anchored(VertexId),
}

#[derive(Debug, Clone)]
pub struct PropertyBConfig {
    pub ell: u32,
    pub k: u32,
    pub r_max: u32,
    pub scope: PairScope,
    /// Max unordered pairs examined before switching to a seeded sample.
    pub budget: u64,
    pub seed: u64,
    /// Violations stored in the report; all are counted.
    pub max_violations: usize,
}

impl PropertyBConfig {
    pub fn new(ell: u32, k: u32, r_max: u32) -> Self {
        PropertyBConfig {
            ell,
            k,
            r_max,
            scope: PairScope::AllPairs,
            budget: 1_000_000,
            seed: 0,
            max_violations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub a: VertexId,
    pub b: VertexId,
    pub r: u32,
    pub c: VertexId,
    /// A family geodesic from N(a; r) to N(b; r) missing N(c; k).
    pub geodesic: Path,
}

#[derive(Debug, Clone)]
pub struct PropertyBReport {
    pub ell: u32,
    pub k: u32,
    pub r_max: u32,
    pub observed_d: u32,
    /// (a, b, r, c) attaining `observed_d`.
    pub d_witness: Option<(VertexId, VertexId, u32, VertexId)>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    /// Qualifying (a, b, c) instances examined.
    pub samples_checked: u64,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub flags: Vec<String>,
}

impl PropertyBReport {
    pub fn holds(&self) -> bool {
        self.violation_count == 0 && self.observed_d > 0
    }
}

fn pairs(n: u64, scope: PairScope, budget: u64, seed: u64) -> (Vec<(u32, u32)>, bool) {
    match scope {
        PairScope::Anchored(x0) => {
            let all: Vec<(u32, u32)> = (0..n as u32)
                .filter(|&b| b != x0.0)
                .map(|b| (x0.0.min(b), x0.0.max(b)))
                .collect();
            if all.len() as u64 <= budget {
                return (all, true);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pick = index::sample(&mut rng, all.len(), budget as usize).into_vec();
            pick.sort_unstable();
            (pick.into_iter().map(|i| all[i]).collect(), false)
        }
        PairScope::AllPairs => {
            let total = n * n.saturating_sub(1) / 2;
            if total <= budget {
                let n = n as u32;
                let all = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
                return (all, true);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pick = index::sample(&mut rng, total as usize, budget as usize).into_vec();
            pick.sort_unstable();
            (pick.into_iter().map(|i| decode_pair(i as u64, n)).collect(), false)
        }
    }
}

/// Inverse of the row-major enumeration of pairs a < b.
fn decode_pair(mut i: u64, n: u64) -> (u32, u32) {
    let mut a = 0;
    loop {
        let row = n - 1 - a;
        if i < row {
            return (a as u32, (a + 1 + i) as u32);
        }
        i -= row;
        a += 1;
    }
}

struct Checker<'a> {
    fam: &'a dyn GeodesicFamily,
    sep: &'a SeparationIndex,
    cfg: &'a PropertyBConfig,
    scratch: BfsScratch,
    balls: HashMap<(u32, u32), Vec<VertexId>>,
}

impl Checker<'_> {
    fn ball(&mut self, x: VertexId, r: u32) -> Vec<VertexId> {
        if let Some(b) = self.balls.get(&(x.0, r)) {
            return b.clone();
        }
        self.scratch.run(self.fam.graph(), &[x], r);
        let mut b: Vec<VertexId> = self.scratch.visited().iter().map(|&(v, _)| v).collect();
        b.sort_unstable();
        if self.balls.len() > 100_000 {
            self.balls.clear();
        }
        self.balls.insert((x.0, r), b.clone());
        b
    }

    fn neighborhood_bits(&mut self, c: VertexId) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.fam.graph().vertex_count());
        for v in self.ball(c, self.cfg.k) {
            bits.insert(v.idx());
        }
        bits
    }

    /// A family geodesic from N(a; r) to N(b; r) missing N(c; k), if any.
    fn clause_witness(&mut self, a: VertexId, b: VertexId, r: u32, c: VertexId) -> Option<Path> {
        if c == a || c == b || self.sep.separates(c, a, b) {
            return None;
        }
        let blocked = self.neighborhood_bits(c);
        let na = self.ball(a, r);
        let nb = self.ball(b, r);
        for &x in na.iter().filter(|x| !blocked.contains(x.idx())) {
            for &y in nb.iter().filter(|y| !blocked.contains(y.idx())) {
                if let Some(p) = self.fam.avoiding(x, y, &blocked) {
                    return Some(p);
                }
            }
        }
        None
    }

    fn g_set_r(&mut self, a: VertexId, b: VertexId, r: u32) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.fam.graph().vertex_count());
        let na = self.ball(a, r);
        let nb = self.ball(b, r);
        for &x in &na {
            for &y in &nb {
                self.fam.mark_union(x, y, &mut bits);
            }
        }
        bits
    }
}

/// Checks property B with constants (ell, k, D = observed) over the configured pairs.
///
/// Counts and the clause are monotone in r, so each (a, b, c) is evaluated at the largest
/// admissible r; lower r are visited only to list the failing ones.
pub fn check_property_b(
    fam: &dyn GeodesicFamily,
    sep: &SeparationIndex,
    cfg: &PropertyBConfig,
) -> PropertyBReport {
    let g = fam.graph();
    let n = g.vertex_count() as u64;
    let (pair_list, exhaustive) = pairs(n, cfg.scope, cfg.budget, cfg.seed);
    let mut ck = Checker {
        fam,
        sep,
        cfg,
        scratch: BfsScratch::new(g.vertex_count()),
        balls: HashMap::new(),
    };
    let mut report = PropertyBReport {
        ell: cfg.ell,
        k: cfg.k,
        r_max: cfg.r_max,
        observed_d: 0,
        d_witness: None,
        violations: Vec::new(),
        violation_count: 0,
        samples_checked: 0,
        pairs_checked: 0,
        exhaustive,
        flags: Vec::new(),
    };
    let mut unreachable_pairs = 0u64;
    for (a, b) in pair_list {
        let (a, b) = (VertexId(a), VertexId(b));
        // distances come from the anchor's row so anchored scans reuse one BFS
        let (s, t) = match cfg.scope {
            PairScope::Anchored(x0) if x0 == b => (b, a),
            _ => (a, b),
        };
        let da = fam.oracle().row(s);
        let dab = da[t.idx()];
        if dab == UNSEEN {
            unreachable_pairs += 1;
            continue;
        }
        report.pairs_checked += 1;
        let mut unions: HashMap<u32, FixedBitSet> = HashMap::new();
        let mut found: Vec<Violation> = Vec::new();
        for c in fam.union(s, t) {
            let m = da[c.idx()].min(dab - da[c.idx()]);
            if m < cfg.ell {
                continue;
            }
            let r_top = cfg.r_max.min(m - cfg.ell);
            report.samples_checked += 1;
            let count = if cfg.k == 0 {
                1
            } else {
                let u = match unions.get(&r_top) {
                    Some(u) => u.clone(),
                    None => {
                        let u = ck.g_set_r(a, b, r_top);
                        unions.insert(r_top, u.clone());
                        u
                    }
                };
                ck.ball(c, cfg.k).iter().filter(|v| u.contains(v.idx())).count() as u32
            };
            if count > report.observed_d {
                report.observed_d = count;
                report.d_witness = Some((a, b, r_top, c));
            }
            for r in (0..=r_top).rev() {
                match ck.clause_witness(a, b, r, c) {
                    Some(geodesic) => found.push(Violation { a, b, r, c, geodesic }),
                    None => break,
                }
            }
        }
        found.sort_by_key(|v| (v.r, v.c));
        report.violation_count += found.len() as u64;
        let room = cfg.max_violations.saturating_sub(report.violations.len());
        report.violations.extend(found.into_iter().take(room));
    }
    if report.observed_d == 0 {
        report.flags.push("no-qualifying-triples".into());
    }
    if !exhaustive {
        report.flags.push("sampled".into());
    }
    if unreachable_pairs > 0 {
        report.flags.push(format!("unreachable-pairs-skipped={unreachable_pairs}"));
    }
    if report.violation_count > report.violations.len() as u64 {
        report.flags.push("violations-truncated".into());
    }
    report
}
