//! Annulus covers built from geodesics to a basepoint, with diameter and multiplicity checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geodesics::GeodesicFamily;
use crate::graph::{BfsScratch, VertexId, UNSEEN};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("r must be at least 1")]
    ZeroR,
    #[error("ell = {ell} is below 10 * delta = {}", 10 * delta)]
    EllTooSmall { ell: u32, delta: u32 },
    #[error("vertex {0} is unreachable from the basepoint")]
    Unreachable(u32),
    #[error("basepoint {0} out of range")]
    BadBasepoint(u32),
    #[error("D must be at least 1")]
    ZeroD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverParams {
    pub r: u32,
    pub ell: u32,
    pub delta: u32,
    pub basepoint: VertexId,
}

impl CoverParams {
    pub fn validate(&self) -> Result<(), CoverError> {
        if self.r == 0 {
            return Err(CoverError::ZeroR);
        }
        if self.ell < 10 * self.delta {
            return Err(CoverError::EllTooSmall {
                ell: self.ell,
                delta: self.delta,
            });
        }
        Ok(())
    }

    /// Annulus width 10(r + ell).
    pub fn width(&self) -> u32 {
        10 * (self.r + self.ell)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    pub n: u32,
    pub anchor: Option<VertexId>,
    pub members: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct Cover {
    pub params: CoverParams,
    pub sets: Vec<CoverSet>,
    pub annuli: BTreeMap<u32, Vec<VertexId>>,
    pub spheres: BTreeMap<u32, Vec<VertexId>>,
    /// d(x0, .) for every vertex.
    pub depth: Vec<u32>,
    pub eccentricity: u32,
}

impl Cover {
    pub fn width(&self) -> u32 {
        self.params.width()
    }

    /// Largest n with 10n(r + ell) <= ecc - (r + ell); 0 when none.
    pub fn complete_annuli(&self) -> u32 {
        let slack = self.params.r + self.params.ell;
        self.eccentricity.saturating_sub(slack) / self.width()
    }

    pub fn is_complete(&self, n: u32) -> bool {
        n <= self.complete_annuli()
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!("cover r={} ell={} base={}\n", p.r, p.ell, p.basepoint);
        for s in &self.sets {
            let anchor = s.anchor.map_or("-".to_string(), |a| a.to_string());
            let _ = write!(out, "set n={} anchor={anchor} :", s.n);
            for m in &s.members {
                let _ = write!(out, " {m}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn build_cover(fam: &dyn GeodesicFamily, params: CoverParams) -> Result<Cover, CoverError> {
    params.validate()?;
    let g = fam.graph();
    let x0 = params.basepoint;
    if x0.idx() >= g.vertex_count() {
        return Err(CoverError::BadBasepoint(x0.0));
    }
    let depth = fam.oracle().row(x0).to_vec();
    if let Some(v) = depth.iter().position(|&d| d == UNSEEN) {
        return Err(CoverError::Unreachable(v as u32));
    }
    let w = params.width();
    let ecc = depth.iter().copied().max().unwrap_or(0);
    let n_max = ecc / w + 1;

    let mut annuli: BTreeMap<u32, Vec<VertexId>> = (1..=n_max).map(|n| (n, Vec::new())).collect();
    let mut spheres: BTreeMap<u32, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        let d = depth[v.idx()];
        if d % w == 0 {
            spheres.entry(d / w).or_default().push(v);
        }
        let hi = d.div_ceil(w).max(1);
        annuli.get_mut(&hi).expect("n <= n_max").push(v);
        if d % w == 0 && d > 0 {
            annuli.get_mut(&(hi + 1)).expect("n <= n_max").push(v);
        }
    }

    let mut sets = Vec::new();
    for (&n, members) in &annuli {
        if members.is_empty() {
            continue;
        }
        if n <= 2 {
            sets.push(CoverSet {
                n,
                anchor: None,
                members: members.clone(),
            });
            continue;
        }
        let level = w * (n - 2);
        let mut by_anchor: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &x in members {
            for s in fam.crossings(x, x0, level) {
                by_anchor.entry(s).or_default().push(x);
            }
        }
        sets.extend(by_anchor.into_iter().map(|(s, m)| CoverSet {
            n,
            anchor: Some(s),
            members: m,
        }));
    }

    Ok(Cover {
        params,
        sets,
        annuli,
        spheres,
        depth,
        eccentricity: ecc,
    })
}

/// Builds at parameter 2 * radius so that the floor(r/2) bound speaks about `radius`.
pub fn build_cover_for_radius(
    fam: &dyn GeodesicFamily,
    radius: u32,
    ell: u32,
    delta: u32,
    basepoint: VertexId,
) -> Result<Cover, CoverError> {
    build_cover(
        fam,
        CoverParams {
            r: 2 * radius.max(1),
            ell,
            delta,
            basepoint,
        },
    )
}

#[derive(Debug, Clone)]
pub struct DiameterReport {
    /// Max over sets of complete annuli.
    pub max_diam: u32,
    /// Max over all sets, including incomplete annuli.
    pub max_diam_all: u32,
    pub per_set: Vec<u32>,
    pub bound: u32,
    pub pass: bool,
}

pub fn verify_diameters(fam: &dyn GeodesicFamily, cover: &Cover) -> DiameterReport {
    let g = fam.graph();
    let per_set: Vec<u32> = cover
        .sets
        .iter()
        .map(|s| {
            g.set_diameter(&s.members)
                .expect("cover sets are nonempty")
                .finite()
                .expect("cover lives in one component")
        })
        .collect();
    let bound = 4 * cover.width();
    let max_diam = cover
        .sets
        .iter()
        .zip(&per_set)
        .filter(|(s, _)| cover.is_complete(s.n))
        .map(|(_, &d)| d)
        .max()
        .unwrap_or(0);
    let max_diam_all = per_set.iter().copied().max().unwrap_or(0);
    DiameterReport {
        max_diam,
        max_diam_all,
        per_set,
        bound,
        pass: max_diam <= bound,
    }
}

/// Diameter bound check for an arbitrary family of sets.
pub fn diameter_bound_holds(fam: &dyn GeodesicFamily, sets: &[Vec<VertexId>], bound: u32) -> bool {
    sets.iter().all(|s| {
        fam.graph()
            .set_diameter(s)
            .ok()
            .and_then(|d| d.finite())
            .is_some_and(|d| d <= bound)
    })
}

#[derive(Debug, Clone)]
pub struct MultiplicityReport {
    pub radius: u32,
    /// Max over the scope d(x0, x) + radius <= width * complete annuli.
    pub max_multiplicity: u32,
    pub witness: VertexId,
    /// Max over every vertex.
    pub global_max: u32,
    pub global_witness: VertexId,
    pub scope_size: usize,
    pub bound_2d: u32,
    pub pass: bool,
}

/// Per-vertex count of set indices whose set meets N(x; radius).
pub fn multiplicity_counts(fam: &dyn GeodesicFamily, sets: &[&[VertexId]], radius: u32) -> Vec<u32> {
    let g = fam.graph();
    let mut counts = vec![0u32; g.vertex_count()];
    let mut scratch = BfsScratch::new(g.vertex_count());
    for members in sets {
        scratch.run(g, members, radius);
        for &(v, _) in scratch.visited() {
            counts[v.idx()] += 1;
        }
    }
    counts
}

pub fn multiplicity(fam: &dyn GeodesicFamily, cover: &Cover, radius: u32, d: u32) -> MultiplicityReport {
    let sets: Vec<&[VertexId]> = cover.sets.iter().map(|s| s.members.as_slice()).collect();
    let counts = multiplicity_counts(fam, &sets, radius);
    let limit = cover.width() * cover.complete_annuli();
    let mut best = (0u32, VertexId(0));
    let mut global = (0u32, VertexId(0));
    let mut scope = 0;
    for (i, &c) in counts.iter().enumerate() {
        let v = VertexId(i as u32);
        if c > global.0 {
            global = (c, v);
        }
        if cover.depth[i] + radius <= limit {
            scope += 1;
            if c > best.0 {
                best = (c, v);
            }
        }
    }
    MultiplicityReport {
        radius,
        max_multiplicity: best.0,
        witness: best.1,
        global_max: global.0,
        global_witness: global.1,
        scope_size: scope,
        bound_2d: 2 * d,
        pass: best.0 <= 2 * d,
    }
}

pub fn asdim_upper_from_d(d: u32) -> Result<u32, CoverError> {
    if d == 0 {
        return Err(CoverError::ZeroD);
    }
    Ok(2 * d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{AllGeodesics, DEFAULT_CAP};
    use crate::graph::{DistanceOracle, MetricGraph};
    use std::sync::Arc;

    fn path_family(n: u32) -> AllGeodesics {
        let g = MetricGraph::from_edges("p", n as usize, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        AllGeodesics::new(Arc::new(DistanceOracle::new(Arc::new(g))), DEFAULT_CAP)
    }

    fn params(r: u32) -> CoverParams {
        CoverParams {
            r,
            ell: 0,
            delta: 0,
            basepoint: VertexId(0),
        }
    }

    #[test]
    fn small_graph_has_two_annuli_at_most() {
        let fam = path_family(15);
        let c = build_cover(&fam, params(1)).unwrap();
        assert_eq!(c.sets.len(), 2);
        assert!(c.sets.iter().all(|s| s.anchor.is_none()));
        assert_eq!(c.sets[0].members.len(), 11);
        assert_eq!(c.sets[1].members.len(), 5);
        let m = multiplicity(&fam, &c, 0, 1);
        assert_eq!((m.max_multiplicity, m.witness), (2, VertexId(10)));
        assert!(m.pass);
    }

    #[test]
    fn path_cover_sets_and_spheres() {
        let fam = path_family(50);
        let c = build_cover(&fam, params(1)).unwrap();
        assert_eq!(c.spheres[&1], vec![VertexId(10)]);
        let third = c.sets.iter().find(|s| s.n == 3).unwrap();
        assert_eq!(third.anchor, Some(VertexId(10)));
        assert_eq!(third.members.first(), Some(&VertexId(20)));
        assert_eq!(third.members.last(), Some(&VertexId(30)));
        let text = c.to_text();
        assert!(text.starts_with("cover r=1 ell=0 base=0\nset n=1 anchor=- : 0 1"));
        let diam = verify_diameters(&fam, &c);
        assert!(diam.pass);
        assert_eq!(diam.max_diam_all, 10);
    }

    #[test]
    fn guards() {
        let fam = path_family(5);
        assert_eq!(build_cover(&fam, params(0)).unwrap_err(), CoverError::ZeroR);
        let mut p = params(1);
        p.delta = 1;
        p.ell = 9;
        assert!(matches!(build_cover(&fam, p), Err(CoverError::EllTooSmall { .. })));
        assert_eq!(asdim_upper_from_d(1), Ok(1));
        assert_eq!(asdim_upper_from_d(3), Ok(5));
        assert_eq!(asdim_upper_from_d(0), Err(CoverError::ZeroD));
    }

    #[test]
    fn single_set_multiplicity_is_one() {
        let fam = path_family(6);
        let members: Vec<VertexId> = (0..6).map(VertexId).collect();
        let counts = multiplicity_counts(&fam, &[&members], 3);
        assert!(counts.iter().all(|&c| c == 1));
    }
}
