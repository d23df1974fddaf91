//! The `kneser` command line: argument parsing, resource caps and report
//! emission.
//!
//! Exit status: 0 on success, 1 when `verify` finds a violated proven bound,
//! 2 for invalid input, 3 when a resource cap is hit and 4 for I/O or
//! internal errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chromatic::{chi_exact_with, ChiOptions, ChromaticNumber, DEFAULT_MAX_VERTICES, DEFAULT_NODE_LIMIT};
use crate::defect::{ecd_with, DefectOptions, DEFAULT_MAX_N, DEFAULT_MAX_N_BAR};
use crate::error::{invalid, Error, Result};
use crate::families::{enumerate_family, FamilySpec, Partition, Subset};
use crate::hypergraph::{build_kneser, build_s_disjoint, induce_t_wide, is_homomorphism, Hypergraph, Variant};
use crate::lift::{induced_vertex_map, lift_family, lift_ground, lift_partition};
use crate::tucker::{check_tucker_conditions, TuckerContext, TuckerVariant, DEFAULT_MAX_FACES};
use crate::verify::grid::{run_suite, GridConfig, Suite, SuiteReport};
use crate::verify::hunt::{hunt_counterexample, HuntConfig, HuntReport};
use crate::verify::VerifyOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variables holding default caps; flags override them.
pub const ENV_MAX_N: &str = "KNESER_MAX_N";
pub const ENV_MAX_VERTICES: &str = "KNESER_MAX_VERTICES";
pub const ENV_MAX_FACES: &str = "KNESER_MAX_FACES";
pub const ENV_NODE_LIMIT: &str = "KNESER_NODE_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "kneser", version, about = "Exact defects, chromatic numbers and bound checks for Kneser-type hypergraphs")]
pub struct Cli {
    /// Worker threads. Output does not depend on this value.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest ground set for defect searches.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Largest hypergraph the chromatic solver accepts.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    /// Largest face count for the Tucker check.
    #[arg(long, global = true)]
    pub max_faces: Option<u64>,
    /// Search nodes allowed per chromatic decision.
    #[arg(long, global = true)]
    pub node_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Equitable colorability defect ecd^r(F, s).
    Ecd(EcdArgs),
    /// Exact chromatic number of a built or loaded hypergraph.
    Chi(ChiArgs),
    /// Lift a weighted family to an unweighted one.
    Lift(LiftArgs),
    /// Replay the Z_p-Tucker labeling on every signed face.
    TuckerCheck(TuckerArgs),
    /// Sweep a grid of formula and theorem checks.
    Verify(VerifyArgs),
    /// Search for counterexamples to the strengthened bound.
    Hunt(HuntArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EcdArgs {
    #[arg(long)]
    pub family: FamilySpec,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 0)]
    pub s: usize,
    /// Print the certifying partition.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiVariant {
    Plain,
    Tilde,
    Sdisjoint,
    Twide,
}

#[derive(Debug, Clone, Args)]
pub struct ChiArgs {
    /// Hypergraph JSON, inline or as a file path.
    #[arg(long, conflicts_with_all = ["family", "partition", "s", "variant", "weights", "t"])]
    pub hypergraph: Option<String>,
    #[arg(long)]
    pub family: Option<FamilySpec>,
    /// Defaults to singletons.
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<ChiVariant>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u32>>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Print the optimal coloring.
    #[arg(long)]
    pub witness: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Family,
    Partition,
    HomomorphismReport,
}

#[derive(Debug, Clone, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub family: FamilySpec,
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<u32>,
    #[arg(long)]
    pub partition: String,
    /// Uniformity of the hypergraphs in the homomorphism report.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "family")]
    pub emit: Emit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TuckerFlavor {
    Plain,
    Tilde,
}

#[derive(Debug, Clone, Args)]
pub struct TuckerArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub family: FamilySpec,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub partition: String,
    #[arg(long, value_enum, default_value = "plain")]
    pub variant: TuckerFlavor,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Suite,
    #[arg(long)]
    pub config: PathBuf,
    /// Verdict log, one JSON record per grid point.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Table with one row per grid point.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct HuntArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// JSON-lines log; logged points are skipped on rerun.
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub json: bool,
}

/// Resolved resource caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_n: usize,
    pub max_vertices: usize,
    pub max_faces: u64,
    pub node_limit: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
            max_vertices: DEFAULT_MAX_VERTICES,
            max_faces: DEFAULT_MAX_FACES,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// A validated command with its caps.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub caps: Caps,
    /// Caps given as flags, which also override grid configuration files.
    pub explicit: ExplicitCaps,
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExplicitCaps {
    pub max_n: bool,
    pub max_vertices: bool,
    pub node_limit: bool,
}

fn env_cap<T: std::str::FromStr>(env: &dyn Fn(&str) -> Option<String>, name: &str) -> Result<Option<T>> {
    match env(name) {
        None => Ok(None),
        Some(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("{name}={v:?} is not a valid cap"))),
    }
}

impl RunConfig {
    /// Resolves caps (flag, then environment, then default) and validates
    /// parameter combinations.
    pub fn from_cli(cli: Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<Self> {
        let mut caps = Caps::default();
        if let Some(v) = cli.max_n.or(env_cap(env, ENV_MAX_N)?) {
            caps.max_n = v;
        }
        if let Some(v) = cli.max_vertices.or(env_cap(env, ENV_MAX_VERTICES)?) {
            caps.max_vertices = v;
        }
        if let Some(v) = cli.max_faces.or(env_cap(env, ENV_MAX_FACES)?) {
            caps.max_faces = v;
        }
        if let Some(v) = cli.node_limit.or(env_cap(env, ENV_NODE_LIMIT)?) {
            caps.node_limit = v;
        }
        for (name, v) in [
            ("max-n", caps.max_n as u64),
            ("max-vertices", caps.max_vertices as u64),
            ("max-faces", caps.max_faces),
            ("node-limit", caps.node_limit),
        ] {
            if v == 0 {
                return invalid(format!("--{name} must be positive"));
            }
        }
        let workers = cli.workers.unwrap_or(1);
        if workers == 0 {
            return invalid("--workers must be positive");
        }
        validate(&cli.command)?;
        Ok(Self {
            explicit: ExplicitCaps {
                max_n: cli.max_n.is_some(),
                max_vertices: cli.max_vertices.is_some(),
                node_limit: cli.node_limit.is_some(),
            },
            command: cli.command,
            caps,
            workers,
        })
    }

    fn chi_options(&self) -> ChiOptions {
        ChiOptions { max_vertices: self.caps.max_vertices, node_limit: self.caps.node_limit, parallel: self.workers > 1 }
    }

    fn defect_options(&self) -> DefectOptions {
        DefectOptions { max_n: self.caps.max_n, max_n_bar: DEFAULT_MAX_N_BAR, parallel: self.workers > 1 }
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions { chi: self.chi_options(), defect: self.defect_options() }
    }

    /// Overrides configuration-file limits with caps given as flags.
    fn override_limits(&self, limits: &mut crate::verify::grid::Limits) {
        if self.explicit.max_n {
            limits.max_n = Some(self.caps.max_n);
        }
        if self.explicit.max_vertices {
            limits.max_vertices = Some(self.caps.max_vertices);
        }
        if self.explicit.node_limit {
            limits.node_limit = Some(self.caps.node_limit);
        }
    }
}

fn validate(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Ecd(a) if a.r < 2 => invalid("--r must be at least 2"),
        Command::Chi(a) if a.hypergraph.is_none() => {
            if a.family.is_none() {
                return invalid("--family or --hypergraph is required");
            }
            match a.r {
                None => return invalid("--r is required with --family"),
                Some(r) if r < 2 => return invalid("--r must be at least 2"),
                _ => {}
            }
            match a.variant.unwrap_or(ChiVariant::Plain) {
                ChiVariant::Sdisjoint if a.weights.is_none() => invalid("--weights is required for --variant sdisjoint"),
                ChiVariant::Twide if a.t.is_none() => invalid("--t is required for --variant twide"),
                ChiVariant::Twide if !matches!(a.family, Some(FamilySpec::KSubsets { .. })) => {
                    invalid("--variant twide needs --family ksubsets:n=..,k=..")
                }
                _ => Ok(()),
            }
        }
        Command::Lift(a) if a.r < 2 => invalid("--r must be at least 2"),
        Command::TuckerCheck(a) if a.family.n() != a.n => {
            invalid(format!("--n {} does not match the family's ground set [{}]", a.n, a.family.n()))
        }
        _ => Ok(()),
    }
}

/// Parses arguments, runs the command on a pool of `--workers` threads and
/// writes its output. Returns the exit status.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = RunConfig::from_cli(cli, env).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = pool.install(|| dispatch(&cfg, &mut stdout, &mut stderr));
        out.write_all(&stdout)?;
        err.write_all(&stderr)?;
        code
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidInput(_) | Error::Json(_) => EXIT_USAGE,
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_INTERNAL,
            }
        }
    }
}

/// Runs one command. Reports go to `out`, timing to `err`.
pub fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cfg.command {
        Command::Ecd(a) => cmd_ecd(cfg, a, out),
        Command::Chi(a) => cmd_chi(cfg, a, out),
        Command::Lift(a) => cmd_lift(a, out),
        Command::TuckerCheck(a) => cmd_tucker(cfg, a, out, err),
        Command::Verify(a) => cmd_verify(cfg, a, out),
        Command::Hunt(a) => cmd_hunt(cfg, a, out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn join_subsets(parts: &[Subset]) -> String {
    parts.iter().map(Subset::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_ecd(cfg: &RunConfig, a: &EcdArgs, out: &mut dyn Write) -> Result<i32> {
    let family = enumerate_family(&a.family)?;
    let d = ecd_with(&family, a.r, a.s, &cfg.defect_options())?;
    if a.json {
        write_json(out, &d)?;
    } else {
        writeln!(out, "{}", d.value)?;
        if a.witness {
            if let Some(x0) = &d.witness_x0 {
                writeln!(out, "removed: {x0}")?;
            }
            writeln!(out, "parts: {}", join_subsets(&d.witness_parts))?;
        }
    }
    Ok(EXIT_OK)
}

fn load_hypergraph(text: &str) -> Result<Hypergraph> {
    if text.trim_start().starts_with('{') {
        Hypergraph::from_json(text)
    } else {
        Hypergraph::from_json(&std::fs::read_to_string(text)?)
    }
}

fn chi_hypergraph(a: &ChiArgs) -> Result<Hypergraph> {
    if let Some(h) = &a.hypergraph {
        return load_hypergraph(h);
    }
    let spec = a.family.as_ref().expect("validated");
    let r = a.r.expect("validated");
    let s = a.s.unwrap_or(0);
    let family = enumerate_family(spec)?;
    let partition = Partition::parse_for(a.partition.as_deref().unwrap_or("singletons"), family.n())?;
    match a.variant.unwrap_or(ChiVariant::Plain) {
        ChiVariant::Plain => build_kneser(&family, &partition, s, Variant::Plain, r),
        ChiVariant::Tilde => build_kneser(&family, &partition, s, Variant::Tilde, r),
        ChiVariant::Sdisjoint => build_s_disjoint(&family, &partition, a.weights.as_deref().expect("validated"), r),
        ChiVariant::Twide => match *spec {
            FamilySpec::KSubsets { n, k } => induce_t_wide(n, k, &partition, a.t.expect("validated"), r),
            _ => unreachable!("validated"),
        },
    }
}

#[derive(Serialize)]
struct ChiReport<'a> {
    vertices: usize,
    edges: usize,
    r: usize,
    #[serde(flatten)]
    result: &'a crate::chromatic::ChromaticResult,
}

fn cmd_chi(cfg: &RunConfig, a: &ChiArgs, out: &mut dyn Write) -> Result<i32> {
    let h = chi_hypergraph(a)?;
    let res = chi_exact_with(&h, &cfg.chi_options())?;
    if a.json {
        write_json(out, &ChiReport { vertices: h.vertex_count(), edges: h.edge_count(), r: h.r(), result: &res })?;
    } else {
        writeln!(out, "{}", res.value)?;
        if a.witness {
            if let Some(c) = &res.coloring {
                for (v, color) in h.vertices().iter().zip(c) {
                    writeln!(out, "{v}: {color}")?;
                }
            } else if res.value == ChromaticNumber::Infinite {
                writeln!(out, "no coloring: the hypergraph has a loop")?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct LiftedPartition {
    n_bar: usize,
    blocks: Vec<Vec<usize>>,
    /// `w_S(P_i)` for each original block.
    block_weights: Vec<u32>,
}

#[derive(Serialize)]
struct HomomorphismReport {
    n: usize,
    n_bar: usize,
    r: usize,
    weights: Vec<u32>,
    block_weights: Vec<u32>,
    /// Every block has `S`-weight at most `r`.
    weight_guard: bool,
    source_vertices: usize,
    source_edges: usize,
    target_vertices: usize,
    target_edges: usize,
    /// Target index of each source vertex.
    map: Vec<u32>,
    homomorphism: bool,
}

fn cmd_lift(a: &LiftArgs, out: &mut dyn Write) -> Result<i32> {
    let family = enumerate_family(&a.family)?;
    let partition = Partition::parse_for(&a.partition, family.n())?;
    let lifting = lift_ground(&a.weights)?;
    match a.emit {
        Emit::Family => {
            let lifted = lift_family(&family, &lifting)?;
            writeln!(out, "{}", lifted.to_json())?;
        }
        Emit::Partition => {
            let (p, block_weights) = lift_partition(&partition, &lifting)?;
            write_json(out, &LiftedPartition { n_bar: lifting.n_bar(), blocks: p.block_lists(), block_weights })?;
        }
        Emit::HomomorphismReport => {
            let lifted = lift_family(&family, &lifting)?;
            let (lifted_partition, block_weights) = lift_partition(&partition, &lifting)?;
            let src = build_kneser(&lifted, &lifted_partition, 0, Variant::Plain, a.r)?;
            let dst = build_s_disjoint(&family, &partition, &a.weights, a.r)?;
            let map = induced_vertex_map(&lifting, &src, &dst)?;
            write_json(
                out,
                &HomomorphismReport {
                    n: lifting.n(),
                    n_bar: lifting.n_bar(),
                    r: a.r,
                    weights: a.weights.clone(),
                    weight_guard: block_weights.iter().all(|&w| w as usize <= a.r),
                    block_weights,
                    source_vertices: src.vertex_count(),
                    source_edges: src.edge_count(),
                    target_vertices: dst.vertex_count(),
                    target_edges: dst.edge_count(),
                    homomorphism: is_homomorphism(&map, &src, &dst),
                    map: map.assignment,
                },
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tucker(cfg: &RunConfig, a: &TuckerArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let family = enumerate_family(&a.family)?;
    let partition = Partition::parse_for(&a.partition, a.n)?;
    let variant = match a.variant {
        TuckerFlavor::Plain => TuckerVariant::Plain,
        TuckerFlavor::Tilde => TuckerVariant::Tilde,
    };
    let ctx = TuckerContext::new(&family, &partition, a.s, a.p, variant, None)?;
    let report = check_tucker_conditions(&ctx, cfg.caps.max_faces)?;
    if a.json {
        write_json(out, &report)?;
    } else {
        let yes = |b: bool| if b { "holds" } else { "FAILS" };
        writeln!(out, "p={} n={} s={} alpha={} t={} m={} faces={}", report.p, report.n, report.s, report.alpha, report.t, report.m, report.faces)?;
        writeln!(out, "equivariance: {}", yes(report.equivariance.holds))?;
        writeln!(out, "pairs: {}", yes(report.pairs.holds))?;
        writeln!(out, "chains: {}", yes(report.chains.holds))?;
        writeln!(out, "inequality: {} ({} >= {})", yes(report.inequality.holds), report.inequality.lhs, report.inequality.n)?;
        writeln!(out, "all conditions: {}", yes(report.all_hold))?;
    }
    writeln!(err, "elapsed: {} ms", start.elapsed().as_millis())?;
    Ok(EXIT_OK)
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read --config {}: {e}", path.display())))
}

#[derive(Serialize)]
struct CsvRow {
    suite: &'static str,
    check: String,
    family: String,
    partition: String,
    r: usize,
    s: String,
    a: String,
    t: String,
    weights: String,
    ecd: String,
    bound: String,
    chi: String,
    verdict: String,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn weights_text(w: Option<&[u32]>) -> String {
    w.map(|w| w.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).unwrap_or_default()
}

fn write_csv(path: &Path, report: &SuiteReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for f in &report.formulas {
        w.serialize(CsvRow {
            suite: "formula",
            check: kebab(&f.formula),
            family: f.family.to_string(),
            partition: String::new(),
            r: f.r,
            s: f.s.to_string(),
            a: String::new(),
            t: String::new(),
            weights: String::new(),
            ecd: opt(f.brute_force),
            bound: f.closed_form.to_string(),
            chi: String::new(),
            verdict: kebab(&f.status),
        })?;
    }
    let theorem_row = |suite: &'static str, t: &crate::verify::VerdictRecord, ecd: Option<usize>| CsvRow {
        suite,
        check: kebab(&t.theorem),
        family: opt(t.params.family.as_ref()),
        partition: t.params.partition.clone().unwrap_or_default(),
        r: t.params.r,
        s: opt(t.params.s),
        a: opt(t.params.a),
        t: opt(t.params.t),
        weights: weights_text(t.params.weights.as_deref()),
        ecd: opt(ecd),
        bound: opt(t.rhs),
        chi: match (t.lhs, t.lhs_exact) {
            (Some(v), true) => v.to_string(),
            (Some(v), false) => format!(">={v}"),
            (None, _) => String::new(),
        },
        verdict: kebab(&t.verdict),
    };
    for t in &report.theorems {
        w.serialize(theorem_row("theorem", t, t.ecd))?;
    }
    for d in &report.sdisjoint {
        w.serialize(theorem_row("sdisjoint", &d.theorem, Some(d.ecd_s)))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut grid = GridConfig::from_json(&read_config(&a.config)?)?;
    cfg.override_limits(&mut grid.limits);
    let report = run_suite(&grid, a.suite, cfg.verify_options())?;
    if let Some(path) = &a.out {
        let mut w = BufWriter::new(File::create(path)?);
        for line in report.log_lines() {
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.csv {
        write_csv(path, &report)?;
    }
    let failures = report.failures();
    let summary = report.summary();
    if a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            summary: &'a crate::verify::grid::Summary,
            failures: usize,
        }
        write_json(out, &Out { summary: &summary, failures })?;
    } else {
        let f = &summary.formulas;
        writeln!(out, "formulas: {} checked, {} match, {} mismatch, {} skipped", f.checked, f.matched, f.mismatched, f.skipped)?;
        let t = &summary.theorems;
        writeln!(
            out,
            "theorems: {} records, {} hold ({} on a lower bound), {} violated, {} hypothesis not met, {} skipped",
            t.records, t.holds, t.lower_bound_only, t.violated, t.hypothesis_not_met, t.skipped_resource
        )?;
        let d = &summary.sdisjoint;
        writeln!(
            out,
            "s-disjoint: {} instances, {} defect inequality failures, {} homomorphism failures, {} theorem failures",
            d.instances, d.defect_inequality_failures, d.homomorphism_failures, d.theorem_failures
        )?;
        for r in report.theorems.iter().filter(|r| r.is_failure()) {
            writeln!(out, "violated: {} {}", kebab(&r.theorem), serde_json::to_string(&r.params)?)?;
        }
        writeln!(out, "failures: {failures}")?;
    }
    Ok(if failures > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_hunt(cfg: &RunConfig, a: &HuntArgs, out: &mut dyn Write) -> Result<i32> {
    let mut hunt = HuntConfig::from_json(&read_config(&a.config)?)?;
    cfg.override_limits(&mut hunt.limits);
    let report: HuntReport = hunt_counterexample(&hunt, Some(&a.checkpoint), cfg.verify_options())?;
    if a.json {
        write_json(out, &report)?;
    } else {
        writeln!(
            out,
            "points: {}, evaluated {}, resumed {}, {}",
            report.points,
            report.evaluated,
            report.resumed,
            if report.complete { "complete" } else { "budget exhausted" }
        )?;
        for (variant, c) in &report.coverage {
            writeln!(
                out,
                "{variant}: {} hold, {} violated, {} hypothesis not met, {} skipped",
                c.holds, c.violated, c.hypothesis_not_met, c.skipped_resource
            )?;
        }
        writeln!(out, "violations: {}", report.violations.len())?;
    }
    Ok(EXIT_OK)
}
