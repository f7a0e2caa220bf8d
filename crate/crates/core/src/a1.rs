//! Fattened covers and the exact-rational partition maps built on them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cover::{build_cover, verify_diameters, Cover, CoverError, CoverParams};
use crate::geodesics::GeodesicFamily;
use crate::graph::{BfsScratch, MetricGraph, VertexId, UNSEEN};

pub type Rational = Ratio<i128>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum A1Error {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("scope too small for r = {r}: {reason}")]
    ScopeTooSmall { r: u32, reason: String },
    #[error("fat cover order {order} at vertex {witness} exceeds 2D = {bound}")]
    OrderExceeded { order: u32, bound: u32, witness: u32 },
    #[error("vertex {0} lies in no fat set")]
    Uncovered(u32),
}

#[derive(Debug, Clone)]
pub struct FatSet {
    /// Index of the base cover set.
    pub origin: usize,
    pub members: Vec<VertexId>,
    pub anchor: VertexId,
    pub max_depth: u32,
}

#[derive(Debug, Clone)]
pub struct FatCover {
    pub base_r: u32,
    pub d: u32,
    pub cover: Cover,
    pub sets: Vec<FatSet>,
    /// Largest diameter among base cover sets.
    pub diam_u: u32,
    /// For each vertex, (fat set index, d(x, complement)) over sets containing it.
    pub membership: Vec<Vec<(u32, u32)>>,
    pub safe: Vec<bool>,
    pub safe_count: usize,
    pub order: u32,
}

impl FatCover {
    pub fn safe_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.safe
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// d(x, complement of set i); zero outside the set.
    pub fn depth(&self, x: VertexId, i: u32) -> u32 {
        self.membership[x.idx()]
            .iter()
            .find(|&&(j, _)| j == i)
            .map_or(0, |&(_, d)| d)
    }

    pub fn support_bound(&self) -> u32 {
        4 * self.base_r + self.diam_u
    }
}

/// Buffers for depth = 1 + distance inside a set to a vertex adjacent to its complement.
struct DepthScratch {
    stamp: Vec<u32>,
    inner: Vec<u32>,
    queue: Vec<VertexId>,
}

impl DepthScratch {
    fn new(n: usize) -> Self {
        DepthScratch {
            stamp: vec![u32::MAX; n],
            inner: vec![UNSEEN; n],
            queue: Vec::new(),
        }
    }

    /// Fills `inner` for the sorted `members` tagged `tag`; returns the deepest member,
    /// smallest id on ties.
    fn fill(&mut self, g: &MetricGraph, tag: u32, members: &[VertexId]) -> (VertexId, u32) {
        for &v in members {
            self.stamp[v.idx()] = tag;
        }
        self.queue.clear();
        for &v in members {
            if g.neighbors(v).iter().any(|w| self.stamp[w.idx()] != tag) {
                self.inner[v.idx()] = 1;
                self.queue.push(v);
            } else {
                self.inner[v.idx()] = UNSEEN;
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for &w in g.neighbors(v) {
                if self.stamp[w.idx()] == tag && self.inner[w.idx()] == UNSEEN {
                    self.inner[w.idx()] = self.inner[v.idx()] + 1;
                    self.queue.push(w);
                }
            }
        }
        let mut best = (members[0], 0);
        for &v in members {
            let dv = self.inner[v.idx()];
            if dv > best.1 {
                best = (v, dv);
            }
        }
        best
    }
}

/// Deepest point of a vertex set; the set must not be the whole graph.
pub fn deepest_point(g: &MetricGraph, members: &[VertexId]) -> (VertexId, u32) {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    DepthScratch::new(g.vertex_count()).fill(g, 0, &sorted)
}

/// Builds the base cover at parameter 10r and fattens every set by 2r.
pub fn build_fat_cover(
    fam: &dyn GeodesicFamily,
    r: u32,
    ell: u32,
    delta: u32,
    d: u32,
    basepoint: VertexId,
) -> Result<FatCover, A1Error> {
    let cover = build_cover(
        fam,
        CoverParams {
            r: 10 * r,
            ell,
            delta,
            basepoint,
        },
    )?;
    let g = fam.graph();
    let n = g.vertex_count();
    let n_c = cover.complete_annuli();
    if n_c == 0 {
        return Err(A1Error::ScopeTooSmall {
            r,
            reason: format!(
                "eccentricity {} leaves no complete annulus of width {}",
                cover.eccentricity,
                cover.width()
            ),
        });
    }

    let mut scratch = BfsScratch::new(n);
    let mut depths = DepthScratch::new(n);
    let mut membership: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    let mut sets = Vec::with_capacity(cover.sets.len());
    for (i, base) in cover.sets.iter().enumerate() {
        scratch.run(g, &base.members, 2 * r);
        let mut members: Vec<VertexId> = scratch.visited().iter().map(|&(v, _)| v).collect();
        if members.len() == n {
            return Err(A1Error::ScopeTooSmall {
                r,
                reason: format!("fat set {i} is the whole space"),
            });
        }
        members.sort_unstable();
        let (anchor, max_depth) = depths.fill(g, i as u32, &members);
        for &v in &members {
            membership[v.idx()].push((i as u32, depths.inner[v.idx()]));
        }
        sets.push(FatSet {
            origin: i,
            members,
            anchor,
            max_depth,
        });
    }

    let (order, witness) = membership
        .iter()
        .enumerate()
        .map(|(v, m)| (m.len() as u32, v as u32))
        .fold((0, 0), |best, cur| if cur.0 > best.0 { cur } else { best });
    if order > 2 * d {
        return Err(A1Error::OrderExceeded {
            order,
            bound: 2 * d,
            witness,
        });
    }
    if let Some(v) = membership.iter().position(Vec::is_empty) {
        return Err(A1Error::Uncovered(v as u32));
    }

    let limit = cover.width() * n_c;
    let safe: Vec<bool> = cover.depth.iter().map(|&dx| dx <= limit).collect();
    let safe_count = safe.iter().filter(|&&s| s).count();
    let diam_u = verify_diameters(fam, &cover).max_diam_all;
    Ok(FatCover {
        base_r: r,
        d,
        cover,
        sets,
        diam_u,
        membership,
        safe,
        safe_count,
        order,
    })
}

#[derive(Debug, Clone)]
pub struct LebesgueReport {
    /// Ball radius floor((r-1)/2) that must fit inside one fat set.
    pub ball_radius: u32,
    pub pass: bool,
    pub witness: Option<VertexId>,
    pub min_denominator: u32,
    pub denominator_pass: bool,
}

/// Every safe x has some fat set containing ball(x, floor((r-1)/2)), i.e. depth above that radius.
pub fn lebesgue_check(fc: &FatCover) -> LebesgueReport {
    let rho = (fc.base_r - 1) / 2;
    let mut witness = None;
    let mut min_den = u32::MAX;
    for x in fc.safe_vertices() {
        let m = &fc.membership[x.idx()];
        let best = m.iter().map(|&(_, d)| d).max().unwrap_or(0);
        if best <= rho && witness.is_none() {
            witness = Some(x);
        }
        min_den = min_den.min(m.iter().map(|&(_, d)| d).sum());
    }
    LebesgueReport {
        ball_radius: rho,
        pass: witness.is_none(),
        witness,
        min_denominator: min_den,
        denominator_pass: min_den >= fc.base_r,
    }
}

/// phi_V(x) = d(x, complement V) / sum over W of d(x, complement W), nonzero entries only.
pub fn phi(fc: &FatCover, x: VertexId) -> Result<Vec<(u32, Rational)>, A1Error> {
    let m = &fc.membership[x.idx()];
    let total: i128 = m.iter().map(|&(_, d)| d as i128).sum();
    if total == 0 {
        return Err(A1Error::Uncovered(x.0));
    }
    Ok(m.iter()
        .map(|&(i, d)| (i, Rational::new(d as i128, total)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A1Map {
    pub x: VertexId,
    /// Sorted by anchor id; values strictly positive.
    pub entries: Vec<(VertexId, Rational)>,
}

impl A1Map {
    pub fn l1(&self) -> Rational {
        self.entries.iter().map(|(_, v)| v.abs()).sum()
    }

    pub fn to_line(&self) -> String {
        let mut out = format!("a x={} :", self.x);
        for (z, v) in &self.entries {
            let _ = write!(out, " {z}={}/{}", v.numer(), v.denom());
        }
        out
    }
}

pub fn a1_map(fc: &FatCover, x: VertexId) -> Result<A1Map, A1Error> {
    let mut acc: BTreeMap<VertexId, Rational> = BTreeMap::new();
    for (i, v) in phi(fc, x)? {
        *acc.entry(fc.sets[i as usize].anchor).or_insert_with(Rational::zero) += v;
    }
    Ok(A1Map {
        x,
        entries: acc.into_iter().collect(),
    })
}

pub fn l1_distance(a: &A1Map, b: &A1Map) -> Rational {
    let mut acc: BTreeMap<VertexId, Rational> = BTreeMap::new();
    for (z, v) in &a.entries {
        *acc.entry(*z).or_insert_with(Rational::zero) += v;
    }
    for (z, v) in &b.entries {
        *acc.entry(*z).or_insert_with(Rational::zero) -= v;
    }
    acc.values().map(Signed::abs).sum()
}

#[derive(Debug, Clone)]
pub struct MapReport {
    pub checked: usize,
    pub norm_pass: bool,
    pub nonneg_pass: bool,
    pub max_support: usize,
    pub support_count_pass: bool,
    pub max_support_dist: u32,
    pub support_bound: u32,
    pub support_radius_pass: bool,
    pub phi_sum_pass: bool,
    pub first_failure: Option<VertexId>,
}

/// Items (1)-(3) over the safe core: unit norm, nonnegativity, support size and radius.
pub fn check_maps(fam: &dyn GeodesicFamily, fc: &FatCover) -> Result<MapReport, A1Error> {
    let mut report = MapReport {
        checked: 0,
        norm_pass: true,
        nonneg_pass: true,
        max_support: 0,
        support_count_pass: true,
        max_support_dist: 0,
        support_bound: fc.support_bound(),
        support_radius_pass: true,
        phi_sum_pass: true,
        first_failure: None,
    };
    let mut users: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for x in fc.safe_vertices() {
        let phis = phi(fc, x)?;
        let map = a1_map(fc, x)?;
        report.checked += 1;
        let mut ok = true;
        if phis.iter().map(|(_, v)| *v).sum::<Rational>() != Rational::one() {
            report.phi_sum_pass = false;
            ok = false;
        }
        if map.l1() != Rational::one() {
            report.norm_pass = false;
            ok = false;
        }
        if map.entries.iter().any(|(_, v)| !v.is_positive()) {
            report.nonneg_pass = false;
            ok = false;
        }
        report.max_support = report.max_support.max(map.entries.len());
        if map.entries.len() > 2 * fc.d as usize {
            report.support_count_pass = false;
            ok = false;
        }
        if !ok && report.first_failure.is_none() {
            report.first_failure = Some(x);
        }
        for (z, _) in map.entries {
            users.entry(z).or_default().push(x);
        }
    }
    let g = fam.graph();
    let mut scratch = BfsScratch::new(g.vertex_count());
    for (z, xs) in users {
        match scratch.eccentricity_within(g, z, &xs) {
            Some(e) => report.max_support_dist = report.max_support_dist.max(e),
            None => report.max_support_dist = UNSEEN,
        }
    }
    report.support_radius_pass = report.max_support_dist <= report.support_bound;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variation {
    pub l1: Rational,
    pub max_dphi: Rational,
    /// Sum over sets of |d(z, complement) - d(w, complement)|.
    pub sum_ddepth: u32,
    /// Max over sets of the same difference.
    pub max_step: u32,
}

pub fn variation(fc: &FatCover, z: VertexId, w: VertexId) -> Result<Variation, A1Error> {
    let az = a1_map(fc, z)?;
    let aw = a1_map(fc, w)?;
    let pz: BTreeMap<u32, Rational> = phi(fc, z)?.into_iter().collect();
    let pw: BTreeMap<u32, Rational> = phi(fc, w)?.into_iter().collect();
    let mut sets: Vec<u32> = pz.keys().chain(pw.keys()).copied().collect();
    sets.sort_unstable();
    sets.dedup();
    let zero = Rational::zero();
    let mut max_dphi = Rational::zero();
    let mut sum_ddepth = 0;
    let mut max_step = 0;
    for i in sets {
        let dphi = (pz.get(&i).unwrap_or(&zero) - pw.get(&i).unwrap_or(&zero)).abs();
        max_dphi = max_dphi.max(dphi);
        let step = fc.depth(z, i).abs_diff(fc.depth(w, i));
        sum_ddepth += step;
        max_step = max_step.max(step);
    }
    Ok(Variation {
        l1: l1_distance(&az, &aw),
        max_dphi,
        sum_ddepth,
        max_step,
    })
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub pairs: usize,
    pub sup_l1: Rational,
    pub sup_l1_pair: Option<(VertexId, VertexId)>,
    pub sup_dphi: Rational,
    pub sup_sum_ddepth: u32,
    pub sup_step: u32,
    pub l1_bound: Rational,
    pub dphi_bound: Rational,
    pub sum_bound: u32,
    pub l1_pass: bool,
    pub dphi_pass: bool,
    pub sum_pass: bool,
    pub step_pass: bool,
}

/// Variation over every edge with both ends in the safe core, against the d = 1 bounds
/// (4D+1)^2 / r, (4D+1) / r, 4D and 1.
pub fn sweep_variation(fam: &dyn GeodesicFamily, fc: &FatCover) -> Result<SweepReport, A1Error> {
    let g = fam.graph();
    let d4 = 4 * fc.d as i128 + 1;
    let r = fc.base_r as i128;
    let mut rep = SweepReport {
        pairs: 0,
        sup_l1: Rational::zero(),
        sup_l1_pair: None,
        sup_dphi: Rational::zero(),
        sup_sum_ddepth: 0,
        sup_step: 0,
        l1_bound: Rational::new(d4 * d4, r),
        dphi_bound: Rational::new(d4, r),
        sum_bound: 4 * fc.d,
        l1_pass: true,
        dphi_pass: true,
        sum_pass: true,
        step_pass: true,
    };
    for z in fc.safe_vertices() {
        for &w in g.neighbors(z) {
            if w <= z || !fc.safe[w.idx()] {
                continue;
            }
            let v = variation(fc, z, w)?;
            rep.pairs += 1;
            if v.l1 > rep.sup_l1 || rep.sup_l1_pair.is_none() {
                rep.sup_l1 = v.l1;
                rep.sup_l1_pair = Some((z, w));
            }
            rep.sup_dphi = rep.sup_dphi.max(v.max_dphi);
            rep.sup_sum_ddepth = rep.sup_sum_ddepth.max(v.sum_ddepth);
            rep.sup_step = rep.sup_step.max(v.max_step);
        }
    }
    rep.l1_pass = rep.sup_l1 <= rep.l1_bound;
    rep.dphi_pass = rep.sup_dphi <= rep.dphi_bound;
    rep.sum_pass = rep.sup_sum_ddepth <= rep.sum_bound;
    rep.step_pass = rep.sup_step <= 1;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{AllGeodesics, DEFAULT_CAP};
    use crate::graph::{DistanceOracle, MetricGraph};
    use crate::spaces::broom_tree;
    use std::sync::Arc;

    fn broom_family(m: u32) -> AllGeodesics {
        let b = broom_tree(m).unwrap();
        AllGeodesics::new(Arc::new(DistanceOracle::new(b.graph)), DEFAULT_CAP)
    }

    #[test]
    fn small_broom_is_too_small() {
        let fam = broom_family(40);
        let err = build_fat_cover(&fam, 1, 0, 0, 1, VertexId(0)).unwrap_err();
        assert!(matches!(err, A1Error::ScopeTooSmall { .. }));
    }

    #[test]
    fn broom_maps_are_exact() {
        let fam = broom_family(150);
        let fc = build_fat_cover(&fam, 1, 0, 0, 1, VertexId(0)).unwrap();
        assert!(fc.order <= 2);
        let leb = lebesgue_check(&fc);
        assert!(leb.pass && leb.denominator_pass);
        let maps = check_maps(&fam, &fc).unwrap();
        assert!(maps.norm_pass && maps.nonneg_pass && maps.support_count_pass);
        assert!(maps.support_radius_pass && maps.phi_sum_pass);
        let sweep = sweep_variation(&fam, &fc).unwrap();
        assert!(sweep.l1_pass && sweep.dphi_pass && sweep.sum_pass && sweep.step_pass);
        assert_eq!(variation(&fc, VertexId(5), VertexId(5)).unwrap().l1, Rational::zero());
    }

    #[test]
    fn interval_anchor_on_a_path() {
        // long path so the cover has many sets; anchors sit at max depth
        let g = MetricGraph::from_edges("p", 400, (0..399).map(|i| (i, i + 1))).unwrap();
        let fam = AllGeodesics::new(Arc::new(DistanceOracle::new(Arc::new(g))), DEFAULT_CAP);
        let fc = build_fat_cover(&fam, 1, 0, 0, 1, VertexId(0)).unwrap();
        for s in &fc.sets {
            let d = fc.depth(s.anchor, s.origin as u32);
            assert_eq!(d, s.max_depth);
            assert!(s.members.iter().all(|&v| fc.depth(v, s.origin as u32) < d || v >= s.anchor));
        }
        let single = a1_map(&fc, VertexId(50)).unwrap();
        assert_eq!(single.entries.len(), 1);
        assert_eq!(single.entries[0].1, Rational::one());
    }
}
