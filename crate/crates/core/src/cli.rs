//! Batch front end. Reports are `key=value` lines grouped under `# section` headers.

use std::fmt::{Display, Write as _};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::a1::{self, A1Error, FatCover, LebesgueReport, MapReport, SweepReport};
use crate::calculator::{self, ArtinFamily, Bound, CalcError, Surface};
use crate::cover::{self, CoverError, CoverParams, DiameterReport, MultiplicityReport};
use crate::geodesics::{
    check_property_b, family_registry, thin_delta, GeodesicFamily, HyperbolicityReport, PairScope,
    PropertyBConfig, PropertyBReport, DEFAULT_CAP,
};
use crate::graph::{store_graph, DistanceOracle, GraphError, SeparationIndex, VertexId};
use crate::probes::{self, ProbeError};
use crate::registry::RegistryError;
use crate::spaces::{self, LabeledGraph, SpaceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCOPE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "asdim-lab", version, about = "Finite checks for asymptotic dimension constructions")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a space and print it in the graph file format.
    Gen {
        #[arg(long)]
        space: String,
        /// Also list vertex labels.
        #[arg(long)]
        labels: bool,
    },
    /// Measure the thin-triangle constant.
    Delta(Common),
    /// Check property B and report the observed D.
    Propb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: u32,
        /// Defaults to 2 delta.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        rmax: u32,
        /// Only pairs containing this vertex (label, id, or `base`).
        #[arg(long)]
        anchor: Option<String>,
        /// Violations listed in the report.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Build the annulus cover and check diameters and multiplicity.
    Cover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        ell: u32,
        /// Use this D instead of measuring it.
        #[arg(long)]
        d: Option<u32>,
        /// Print every cover set.
        #[arg(long)]
        sets: bool,
    },
    /// Full partition-of-unity pipeline at parameter r.
    A1 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: u32,
        /// Print a_x for every safe vertex.
        #[arg(long)]
        maps: bool,
    },
    /// Largest D-discrete subset of a ball, optionally across a family of spaces.
    Probe {
        /// Full spec, or a prefix completed by each value of --params.
        #[arg(long)]
        space: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<u32>,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 40)]
        exact_limit: usize,
    },
    /// Asymptotic dimension bounds from closed formulas.
    Asdim(AsdimArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub space: String,
    /// Geodesic family.
    #[arg(long, default_value = "all")]
    pub family: String,
    /// Max geodesics enumerated per pair.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Exhaustive below this many triples or pairs, seeded sample above.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct AsdimArgs {
    /// g,p
    #[arg(long, value_parser = pair::<u32>)]
    pub surface: Option<(u32, u32)>,
    #[arg(long)]
    pub braid: Option<u32>,
    /// FAMILY,n with FAMILY one of A, B, affine-A, affine-C.
    #[arg(long)]
    pub artin: Option<String>,
    #[arg(long)]
    pub torelli: Option<u32>,
    #[arg(long)]
    pub farey: bool,
    /// 2D - 1 from a cover constant D.
    #[arg(long)]
    pub cover_d: Option<u64>,
    /// s,delta
    #[arg(long, value_parser = pair::<u64>)]
    pub hyperbolic: Option<(u64, u64)>,
}

fn pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<T>().map_err(|_| format!("bad number `{t}`"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    A1(#[from] A1Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::A1(A1Error::ScopeTooSmall { .. }) => EXIT_SCOPE,
            CliError::A1(A1Error::Cover(_)) => EXIT_USAGE,
            CliError::A1(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

#[derive(Default)]
struct Report(String);

impl Report {
    fn section(&mut self, name: &str) -> &mut Self {
        let _ = writeln!(self.0, "# {name}");
        self
    }

    fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        let _ = writeln!(self.0, "{key}={value}");
        self
    }

    fn line(&mut self, text: impl Display) -> &mut Self {
        let _ = writeln!(self.0, "{text}");
        self
    }

    fn finish(mut self, code: i32) -> Outcome {
        self.section("result");
        self.kv("exit", code);
        Outcome { code, text: self.0 }
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// Runs one subcommand. Errors become a report with the matching exit code.
pub fn run(cfg: &RunConfig) -> Outcome {
    let result = match &cfg.command {
        Command::Gen { space, labels } => cmd_gen(space, *labels),
        Command::Delta(common) => cmd_delta(common),
        Command::Propb {
            common,
            ell,
            k,
            rmax,
            anchor,
            show,
        } => cmd_propb(common, *ell, *k, *rmax, anchor.as_deref(), *show),
        Command::Cover {
            common,
            r,
            ell,
            d,
            sets,
        } => cmd_cover(common, *r, *ell, *d, *sets),
        Command::A1 { common, r, maps } => pipeline_a1(common, *r).map(|s| s.render(*maps)),
        Command::Probe {
            space,
            params,
            d,
            radius,
            exact_limit,
        } => cmd_probe(space, params, *d, *radius, *exact_limit),
        Command::Asdim(args) => cmd_asdim(args),
    };
    result.unwrap_or_else(|e| {
        let mut rep = Report::default();
        rep.section("error").kv("message", &e);
        if let CliError::A1(A1Error::ScopeTooSmall { .. }) = e {
            rep.kv("status", "scope-too-small");
        }
        rep.finish(e.exit_code())
    })
}

/// Parses `args`, runs, writes the report, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out = run(&cfg);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", out.text),
    }
    out.code
}

struct Setup {
    space: LabeledGraph,
    fam: Box<dyn GeodesicFamily>,
}

fn setup(common: &Common) -> Result<Setup, CliError> {
    let space = spaces::generate(&common.space)?;
    let oracle = Arc::new(DistanceOracle::new(Arc::clone(&space.graph)));
    let fam = family_registry().get(&common.family)?.build(oracle, common.cap);
    Ok(Setup { space, fam })
}

fn space_section(rep: &mut Report, spec: &str, lg: &LabeledGraph) {
    rep.section("space")
        .kv("spec", spec)
        .kv("vertices", lg.graph.vertex_count())
        .kv("edges", lg.graph.edge_count())
        .kv("basepoint", lg.label(lg.basepoint));
}

fn cmd_gen(spec: &str, labels: bool) -> Result<Outcome, CliError> {
    let lg = spaces::generate(spec)?;
    let mut rep = Report::default();
    space_section(&mut rep, spec, &lg);
    rep.kv("max_degree", lg.graph.max_degree())
        .kv("connected", lg.graph.is_connected());
    if labels {
        rep.section("labels");
        for v in lg.graph.vertices() {
            rep.kv(&v.to_string(), lg.label(v));
        }
    }
    rep.section("graph");
    rep.0.push_str(&store_graph(&lg.graph));
    Ok(rep.finish(EXIT_OK))
}

fn delta_section(rep: &mut Report, d: &HyperbolicityReport) {
    rep.section("delta")
        .kv("delta", d.delta)
        .kv("method", d.method.as_str())
        .kv("exhaustive", d.exhaustive)
        .kv("triangles_checked", d.triangles_checked);
    for (i, side) in d.witness.iter().enumerate() {
        rep.kv(&format!("witness_side{i}"), side);
    }
}

fn cmd_delta(common: &Common) -> Result<Outcome, CliError> {
    let s = setup(common)?;
    let mut rep = Report::default();
    space_section(&mut rep, &common.space, &s.space);
    rep.kv("family", s.fam.kind());
    let d = thin_delta(s.fam.as_ref(), common.budget, common.seed)?;
    delta_section(&mut rep, &d);
    Ok(rep.finish(EXIT_OK))
}

fn resolve_anchor(lg: &LabeledGraph, anchor: &str) -> Result<VertexId, CliError> {
    if anchor == "base" {
        return Ok(lg.basepoint);
    }
    if let Some(v) = lg.find(anchor) {
        return Ok(v);
    }
    match anchor.parse::<u32>() {
        Ok(id) if (id as usize) < lg.graph.vertex_count() => Ok(VertexId(id)),
        _ => Err(CliError::Usage(format!("no vertex `{anchor}`"))),
    }
}

fn propb_section(rep: &mut Report, lg: &LabeledGraph, pb: &PropertyBReport, show: usize) {
    rep.section("property-b")
        .kv("ell", pb.ell)
        .kv("k", pb.k)
        .kv("r_max", pb.r_max)
        .kv("observed_D", pb.observed_d);
    if let Some((a, b, r, c)) = pb.d_witness {
        rep.kv(
            "D_witness",
            format!("a={} b={} r={r} c={}", lg.label(a), lg.label(b), lg.label(c)),
        );
    }
    rep.kv("pairs_checked", pb.pairs_checked)
        .kv("samples_checked", pb.samples_checked)
        .kv("exhaustive", pb.exhaustive)
        .kv("violations", pb.violation_count);
    if !pb.flags.is_empty() {
        rep.kv("flags", pb.flags.join(","));
    }
    for v in pb.violations.iter().take(show) {
        rep.kv(
            "violation",
            format!(
                "a={} b={} r={} c={} geodesic={}",
                lg.label(v.a),
                lg.label(v.b),
                v.r,
                lg.label(v.c),
                v.geodesic
            ),
        );
    }
}

fn cmd_propb(
    common: &Common,
    ell: u32,
    k: Option<u32>,
    rmax: u32,
    anchor: Option<&str>,
    show: usize,
) -> Result<Outcome, CliError> {
    let s = setup(common)?;
    let scope = match anchor {
        Some(a) => PairScope::Anchored(resolve_anchor(&s.space, a)?),
        None => PairScope::AllPairs,
    };
    let mut rep = Report::default();
    space_section(&mut rep, &common.space, &s.space);
    rep.kv("family", s.fam.kind());
    let k = match k {
        Some(k) => k,
        None => {
            let d = thin_delta(s.fam.as_ref(), common.budget, common.seed)?;
            delta_section(&mut rep, &d);
            2 * d.delta
        }
    };
    let sep = SeparationIndex::new(&s.space.graph);
    let mut cfg = PropertyBConfig::new(ell, k, rmax);
    cfg.scope = scope;
    cfg.budget = common.budget;
    cfg.seed = common.seed;
    let pb = check_property_b(s.fam.as_ref(), &sep, &cfg);
    propb_section(&mut rep, &s.space, &pb, show);
    Ok(rep.finish(EXIT_OK))
}

/// Property B premises hold on the checked scope with nothing sampled.
fn premises_verified(delta: &HyperbolicityReport, pb: &PropertyBReport) -> bool {
    delta.exhaustive && pb.exhaustive && pb.violation_count == 0 && pb.observed_d > 0
}

fn premises(
    fam: &dyn GeodesicFamily,
    lg: &LabeledGraph,
    common: &Common,
    ell: Option<u32>,
    r_max: u32,
) -> Result<(HyperbolicityReport, PropertyBReport), CliError> {
    let delta = thin_delta(fam, common.budget, common.seed)?;
    let ell = ell.unwrap_or(10 * delta.delta);
    if ell < 10 * delta.delta {
        return Err(CoverError::EllTooSmall {
            ell,
            delta: delta.delta,
        }
        .into());
    }
    let sep = SeparationIndex::new(&lg.graph);
    let mut cfg = PropertyBConfig::new(ell, 2 * delta.delta, r_max);
    cfg.scope = PairScope::Anchored(lg.basepoint);
    cfg.budget = common.budget;
    cfg.seed = common.seed;
    let pb = check_property_b(fam, &sep, &cfg);
    Ok((delta, pb))
}

fn diameter_section(rep: &mut Report, d: &DiameterReport) {
    rep.section("diameters")
        .kv("max_diam", d.max_diam)
        .kv("max_diam_all", d.max_diam_all)
        .kv("bound", d.bound)
        .kv("check", yn(d.pass));
}

fn multiplicity_section(rep: &mut Report, lg: &LabeledGraph, m: &MultiplicityReport) {
    rep.section("multiplicity")
        .kv("radius", m.radius)
        .kv("max_mult", m.max_multiplicity)
        .kv("witness", lg.label(m.witness))
        .kv("scope_size", m.scope_size)
        .kv("global_max", m.global_max)
        .kv("global_witness", lg.label(m.global_witness))
        .kv("bound", m.bound_2d)
        .kv("check", yn(m.pass));
}

fn verdict_code(verified: bool, all_pass: bool) -> i32 {
    if verified && !all_pass {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn cmd_cover(common: &Common, r: u32, ell: u32, d: Option<u32>, sets: bool) -> Result<Outcome, CliError> {
    let s = setup(common)?;
    let fam = s.fam.as_ref();
    let lg = &s.space;
    let mut rep = Report::default();
    space_section(&mut rep, &common.space, lg);
    rep.kv("family", fam.kind());
    let (delta, pb) = premises(fam, lg, common, Some(ell), r)?;
    delta_section(&mut rep, &delta);
    propb_section(&mut rep, lg, &pb, 10);
    let (d, verified) = match d {
        Some(d) => (d, false),
        None => (pb.observed_d.max(1), premises_verified(&delta, &pb)),
    };
    if d == 0 {
        return Err(CoverError::ZeroD.into());
    }
    let c = cover::build_cover(
        fam,
        CoverParams {
            r,
            ell,
            delta: delta.delta,
            basepoint: lg.basepoint,
        },
    )?;
    rep.section("cover")
        .kv("r", r)
        .kv("ell", ell)
        .kv("D", d)
        .kv("width", c.width())
        .kv("eccentricity", c.eccentricity)
        .kv("sets", c.sets.len())
        .kv("complete_annuli", c.complete_annuli())
        .kv("premises", if verified { "verified" } else { "unverified" });
    let diam = cover::verify_diameters(fam, &c);
    diameter_section(&mut rep, &diam);
    let mult = cover::multiplicity(fam, &c, r / 2, d);
    multiplicity_section(&mut rep, lg, &mult);
    rep.section("bound").kv("asdim_upper", cover::asdim_upper_from_d(d)?);
    if sets {
        rep.section("sets");
        rep.0.push_str(&c.to_text());
    }
    Ok(rep.finish(verdict_code(verified, diam.pass && mult.pass)))
}

/// Everything the partition-of-unity pipeline measured.
pub struct A1Summary {
    pub spec: String,
    pub r: u32,
    pub space: LabeledGraph,
    pub delta: HyperbolicityReport,
    pub propb: PropertyBReport,
    pub d: u32,
    pub verified: bool,
    pub fat: FatCover,
    pub diameters: DiameterReport,
    pub multiplicity: MultiplicityReport,
    pub lebesgue: LebesgueReport,
    pub maps: MapReport,
    pub sweep: SweepReport,
}

impl A1Summary {
    pub fn all_pass(&self) -> bool {
        let m = &self.maps;
        let s = &self.sweep;
        self.diameters.pass
            && self.multiplicity.pass
            && self.lebesgue.pass
            && self.lebesgue.denominator_pass
            && m.norm_pass
            && m.nonneg_pass
            && m.support_count_pass
            && m.support_radius_pass
            && m.phi_sum_pass
            && s.l1_pass
            && s.dphi_pass
            && s.sum_pass
            && s.step_pass
    }

    pub fn exit_code(&self) -> i32 {
        verdict_code(self.verified, self.all_pass())
    }

    pub fn render(&self, with_maps: bool) -> Outcome {
        let lg = &self.space;
        let mut rep = Report::default();
        space_section(&mut rep, &self.spec, lg);
        delta_section(&mut rep, &self.delta);
        propb_section(&mut rep, lg, &self.propb, 10);
        let fc = &self.fat;
        rep.section("fat-cover")
            .kv("r", self.r)
            .kv("cover_param", 10 * self.r)
            .kv("D", self.d)
            .kv("premises", if self.verified { "verified" } else { "unverified" })
            .kv("width", fc.cover.width())
            .kv("complete_annuli", fc.cover.complete_annuli())
            .kv("sets", fc.sets.len())
            .kv("diam_U", fc.diam_u)
            .kv("order", fc.order)
            .kv("safe_vertices", fc.safe_count);
        diameter_section(&mut rep, &self.diameters);
        multiplicity_section(&mut rep, lg, &self.multiplicity);
        let l = &self.lebesgue;
        rep.section("lebesgue")
            .kv("ball_radius", l.ball_radius)
            .kv("check", yn(l.pass))
            .kv("min_denominator", l.min_denominator)
            .kv("denominator_check", yn(l.denominator_pass));
        if let Some(w) = l.witness {
            rep.kv("witness", lg.label(w));
        }
        let m = &self.maps;
        rep.section("maps")
            .kv("checked", m.checked)
            .kv("norm_one", yn(m.norm_pass))
            .kv("nonnegative", yn(m.nonneg_pass))
            .kv("max_support", m.max_support)
            .kv("support_count", yn(m.support_count_pass))
            .kv("max_support_dist", m.max_support_dist)
            .kv("support_bound", m.support_bound)
            .kv("support_radius", yn(m.support_radius_pass))
            .kv("phi_sum", yn(m.phi_sum_pass));
        if let Some(x) = m.first_failure {
            rep.kv("first_failure", lg.label(x));
        }
        let s = &self.sweep;
        rep.section("variation")
            .kv("pairs", s.pairs)
            .kv("sup_l1", s.sup_l1)
            .kv("l1_bound", s.l1_bound)
            .kv("l1", yn(s.l1_pass))
            .kv("sup_dphi", s.sup_dphi)
            .kv("dphi_bound", s.dphi_bound)
            .kv("dphi", yn(s.dphi_pass))
            .kv("sup_sum_ddepth", s.sup_sum_ddepth)
            .kv("sum_bound", s.sum_bound)
            .kv("sum_ddepth", yn(s.sum_pass))
            .kv("sup_step", s.sup_step)
            .kv("step", yn(s.step_pass));
        if let Some((z, w)) = s.sup_l1_pair {
            rep.kv("sup_l1_pair", format!("{} {}", lg.label(z), lg.label(w)));
        }
        if with_maps {
            rep.section("a-maps");
            for x in fc.safe_vertices() {
                if let Ok(a) = a1::a1_map(fc, x) {
                    rep.line(a.to_line());
                }
            }
        }
        rep.finish(self.exit_code())
    }
}

/// generate, measure delta, check property B at ell = 10 delta, k = 2 delta up to 10r,
/// build the cover at 10r, fatten by 2r, then check the maps and their variation.
pub fn pipeline_a1(common: &Common, r: u32) -> Result<A1Summary, CliError> {
    if r == 0 {
        return Err(CoverError::ZeroR.into());
    }
    let s = setup(common)?;
    let fam = s.fam.as_ref();
    let lg = &s.space;
    let (delta, propb) = premises(fam, lg, common, None, 10 * r)?;
    let verified = premises_verified(&delta, &propb);
    let d = propb.observed_d.max(1);
    let fat = a1::build_fat_cover(fam, r, 10 * delta.delta, delta.delta, d, lg.basepoint)?;
    let diameters = cover::verify_diameters(fam, &fat.cover);
    let multiplicity = cover::multiplicity(fam, &fat.cover, 5 * r, d);
    let lebesgue = a1::lebesgue_check(&fat);
    let maps = a1::check_maps(fam, &fat)?;
    let sweep = a1::sweep_variation(fam, &fat)?;
    Ok(A1Summary {
        spec: common.space.clone(),
        r,
        space: s.space,
        delta,
        propb,
        d,
        verified,
        fat,
        diameters,
        multiplicity,
        lebesgue,
        maps,
        sweep,
    })
}

fn cmd_probe(space: &str, params: &[u32], d: u32, radius: u32, exact_limit: usize) -> Result<Outcome, CliError> {
    let mut rep = Report::default();
    rep.section("probe")
        .kv("D", d)
        .kv("radius", radius)
        .kv("exact_limit", exact_limit);
    if params.is_empty() {
        let lg = spaces::generate(space)?;
        let c = probes::discrete_capacity(&lg.graph, d, lg.basepoint, radius, exact_limit)?;
        rep.kv("space", space)
            .kv("center", lg.label(c.center))
            .kv("cardinality", c.cardinality)
            .kv("method", c.method)
            .kv("verified", c.verified);
        let labels: Vec<&str> = c.subset.iter().map(|&v| lg.label(v)).collect();
        rep.kv("subset", labels.join(" "));
        return Ok(rep.finish(EXIT_OK));
    }
    let complete = |p: u32| {
        if space.contains(':') {
            format!("{space},{p}")
        } else {
            format!("{space}:{p}")
        }
    };
    rep.kv("family", complete(0).replace(",0", ",*").replace(":0", ":*"));
    let growth = probes::growth_probe(|p| spaces::generate(&complete(p)), params, d, radius, exact_limit)?;
    for line in growth.lines() {
        rep.line(line);
    }
    let cards: Vec<String> = growth.cardinalities().iter().map(|c| c.to_string()).collect();
    rep.kv("cardinalities", cards.join(","))
        .kv("all_verified", growth.points.iter().all(|p| p.report.verified))
        .kv("verdict", growth.verdict);
    Ok(rep.finish(EXIT_OK))
}

fn simple_bound(rep: &mut Report, subject: &str, value: u64, tag: &str, text: &str) {
    rep.line(format!("asdim {subject} : lower=none upper={value} exact=n"))
        .line(format!("  [{tag}] {text}"));
}

fn cmd_asdim(args: &AsdimArgs) -> Result<Outcome, CliError> {
    let mut rep = Report::default();
    rep.section("asdim");
    let bound = |rep: &mut Report, subject: &str, b: Bound| {
        rep.0.push_str(&b.render(subject));
    };
    if let Some((g, p)) = args.surface {
        let s = Surface::new(g, p);
        bound(&mut rep, &format!("Mod({s})"), calculator::asdim_mod(s));
        if s.euler() < 0 {
            rep.kv("vcd", calculator::vcd_mod(s));
        }
        rep.kv("asdim_pi1", calculator::asdim_pi1(s));
    } else if let Some(n) = args.braid {
        bound(&mut rep, &format!("B_{n}"), calculator::braid_bound(n)?);
    } else if let Some(spec) = &args.artin {
        let (fam, n) = spec
            .rsplit_once(',')
            .ok_or_else(|| CliError::Usage(format!("--artin expects FAMILY,n, got `{spec}`")))?;
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad rank in `{spec}`")))?;
        let family: ArtinFamily = fam.trim().parse()?;
        bound(&mut rep, &format!("Artin {fam} n={n}"), calculator::artin_bound(family, n)?);
    } else if let Some(g) = args.torelli {
        bound(&mut rep, &format!("I_{g}"), calculator::torelli(g));
    } else if args.farey {
        let v = calculator::farey_asdim();
        rep.line(format!("asdim Farey : lower={v} upper={v} exact=y"))
            .line("  [farey-tree-like] quasi-isometric to a tree with infinite valence");
    } else if let Some(d) = args.cover_d {
        let v = calculator::cover_bound(d)?;
        simple_bound(&mut rep, &format!("cover D={d}"), v, "cover-bound", "2D - 1");
    } else if let Some((gens, delta)) = args.hyperbolic {
        let v = calculator::hyperbolic_group_bound(gens, u32::try_from(delta).map_err(|_| CalcError::Overflow)?)?;
        simple_bound(
            &mut rep,
            &format!("hyperbolic s={gens} delta={delta}"),
            v,
            "hyperbolic-group-bound",
            "2 s^(2 delta) - 1",
        );
    }
    Ok(rep.finish(EXIT_OK))
}
