//! Search for counterexamples to the strengthened bound
//! `χ >= ⌈ecd^r(F, s) / (r-1)⌉`, where the proven bounds use `⌊s/2⌋`.
//!
//! The hunter walks a grid of `k`-subset families in a fixed order and logs
//! one JSON line per point to a checkpoint file, so an interrupted run
//! resumes where it stopped.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::grid::{Limits, PartitionGen, Range};
use super::{bound_value, Verdict, Verifier, VerifyOptions, Witnesses};
use crate::chromatic::{find_coloring, is_proper, ChiOutcome, ChromaticNumber};
use crate::defect::is_avoiding_partition;
use crate::error::{invalid, Error, Result};
use crate::families::{enumerate_family, is_good_pair, FamilySpec, Partition};
use crate::hypergraph::{build_kneser, Variant};

/// Which of the four bounds a point strengthens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HuntVariant {
    /// `KG^r(F, P, s)` with only `|P_i| <= r`.
    Partition,
    /// `KG^r(F, s)`, trivial partition.
    Intersection,
    /// The tilde hypergraph.
    Tilde,
    /// `KG^r(F, P, s)` with `(F, P)` `s`-good.
    Goodness,
}

impl HuntVariant {
    const ALL: [HuntVariant; 4] =
        [HuntVariant::Partition, HuntVariant::Intersection, HuntVariant::Tilde, HuntVariant::Goodness];

    fn name(self) -> &'static str {
        match self {
            HuntVariant::Partition => "partition",
            HuntVariant::Intersection => "intersection",
            HuntVariant::Tilde => "tilde",
            HuntVariant::Goodness => "goodness",
        }
    }
}

fn all_variants() -> Vec<HuntVariant> {
    HuntVariant::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuntConfig {
    pub n: Range,
    pub k: Range,
    pub r: Range,
    pub s: Range,
    pub partitions: Vec<PartitionGen>,
    #[serde(default = "all_variants")]
    pub variants: Vec<HuntVariant>,
    /// Most grid points evaluated in one run; resumed points are free.
    #[serde(default)]
    pub budget: Option<usize>,
    #[serde(default)]
    pub limits: Limits,
}

impl HuntConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuntPoint {
    pub index: usize,
    pub variant: HuntVariant,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub partition: Partition,
}

impl HuntPoint {
    /// Identifies the point in the checkpoint log.
    pub fn key(&self) -> String {
        format!("{}:n={},k={},r={},s={},P={}", self.variant.name(), self.n, self.k, self.r, self.s, self.partition)
    }
}

/// The grid in traversal order.
pub fn hunt_points(cfg: &HuntConfig) -> Result<Vec<HuntPoint>> {
    let mut out = Vec::new();
    for n in cfg.n[0]..=cfg.n[1] {
        for k in (cfg.k[0]..=cfg.k[1]).filter(|&k| k >= 1 && k <= n) {
            for r in cfg.r[0]..=cfg.r[1] {
                for s in cfg.s[0]..=cfg.s[1] {
                    let mut seen = HashSet::new();
                    for gen in &cfg.partitions {
                        let Some(partition) = gen.make(n, r)? else { continue };
                        if !seen.insert(partition.to_string()) {
                            continue;
                        }
                        for &variant in &cfg.variants {
                            if variant == HuntVariant::Intersection && !partition.is_trivial() {
                                continue;
                            }
                            out.push(HuntPoint { index: out.len(), variant, n, k, r, s, partition: partition.clone() });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Independent checks of a reported violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Recheck {
    /// The witness coloring is proper with `χ` colors.
    pub coloring_proper: bool,
    /// A fresh search finds no proper coloring with `χ - 1` colors.
    pub refuted_below: bool,
    /// The defect witness avoids the family.
    pub defect_witness_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HuntRecord {
    pub index: usize,
    pub key: String,
    pub variant: HuntVariant,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub partition: String,
    pub hypothesis_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_failed: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<ChromaticNumber>,
    pub chi_exact: bool,
    /// `ecd^r(F, s)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ecd: Option<usize>,
    /// `⌈ecd^r(F, s) / (r-1)⌉`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strengthened: Option<i64>,
    /// `⌈ecd^r(F, ⌊s/2⌋) / (r-1)⌉`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proven: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recheck: Option<Recheck>,
}

fn evaluate(point: &HuntPoint, v: &mut Verifier) -> Result<HuntRecord> {
    let &HuntPoint { index, variant, n, k, r, s, .. } = point;
    let p = &point.partition;
    let mut rec = HuntRecord {
        index,
        key: point.key(),
        variant,
        n,
        k,
        r,
        s,
        partition: p.to_string(),
        hypothesis_ok: true,
        hypothesis_failed: None,
        verdict: Verdict::Holds,
        chi: None,
        chi_exact: false,
        ecd: None,
        strengthened: None,
        proven: None,
        note: None,
        witnesses: None,
        recheck: None,
    };
    let f = enumerate_family(&FamilySpec::KSubsets { n, k })?;
    let mut failed = None;
    if s >= k {
        failed = Some(format!("s = {s} is not below k = {k}"));
    } else if variant != HuntVariant::Intersection && p.max_block_size() > r {
        failed = Some(format!("a block has {} > r = {r} elements", p.max_block_size()));
    } else if variant == HuntVariant::Goodness {
        let good = is_good_pair(&f, p, s)?;
        if !good.good {
            failed = Some(format!("pair is not {s}-good"));
        }
    }
    if let Some(why) = failed {
        rec.hypothesis_ok = false;
        rec.hypothesis_failed = Some(why);
        rec.verdict = Verdict::HypothesisNotMet;
        return Ok(rec);
    }
    let (strong, weak) = match (v.ecd(&f, r, s), v.ecd(&f, r, s / 2)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::Resource(msg)), _) | (_, Err(Error::Resource(msg))) => {
            rec.verdict = Verdict::SkippedResource;
            rec.note = Some(msg);
            return Ok(rec);
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let strengthened = bound_value(strong.value as i64, r);
    rec.ecd = Some(strong.value);
    rec.strengthened = Some(strengthened);
    rec.proven = Some(bound_value(weak.value as i64, r));
    let graph_variant = if variant == HuntVariant::Tilde { Variant::Tilde } else { Variant::Plain };
    let h = build_kneser(&f, p, s, graph_variant, r)?;
    match v.chi(&h, Some(s), None)? {
        Err(msg) => {
            rec.verdict = Verdict::SkippedResource;
            rec.note = Some(msg);
        }
        Ok(ChiOutcome::Bounded(b)) => {
            rec.chi = Some(ChromaticNumber::Finite(b.lower));
            if b.lower as i64 >= strengthened {
                rec.note = Some(format!("node limit reached at {} colors; lower bound suffices", b.lower));
            } else {
                rec.verdict = Verdict::SkippedResource;
                rec.note = Some(format!("node limit reached at {} colors, below the bound", b.lower));
            }
        }
        Ok(ChiOutcome::Exact(res)) => {
            rec.chi = Some(res.value);
            rec.chi_exact = true;
            if !res.value.at_least(strengthened) {
                let chi = res.value.finite().expect("finite below a finite bound");
                let coloring = res.coloring.clone().expect("finite chromatic number has a coloring");
                let opts = v.options().chi;
                let recheck = Recheck {
                    coloring_proper: is_proper(&h, &coloring)?
                        && coloring.iter().copied().max().unwrap_or(0) as usize == chi,
                    refuted_below: chi == 0 || find_coloring(&h, chi - 1, &opts)?.0.is_none(),
                    defect_witness_valid: is_avoiding_partition(
                        strong.witness_x0.as_ref().expect("ecd witness has X0"),
                        &strong.witness_parts,
                        &f,
                        s,
                    )? && strong.witness_x0.as_ref().map(|x| x.len()) == Some(strong.value),
                };
                if !(recheck.coloring_proper && recheck.refuted_below && recheck.defect_witness_valid) {
                    return Err(Error::Internal(format!("violation at {} failed re-verification: {recheck:?}", rec.key)));
                }
                rec.verdict = Verdict::Violated;
                rec.recheck = Some(recheck);
                rec.witnesses = Some(Witnesses { coloring: Some(coloring), refuted: res.refuted, defect: Some(strong) });
            }
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub holds: usize,
    pub violated: usize,
    pub hypothesis_not_met: usize,
    pub skipped_resource: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuntReport {
    /// Every grid point has a logged verdict.
    pub complete: bool,
    pub points: usize,
    /// Points evaluated in this run.
    pub evaluated: usize,
    /// Points taken from the checkpoint.
    pub resumed: usize,
    pub coverage: BTreeMap<String, Coverage>,
    /// Points where the strengthened bound is below the proven one; always
    /// zero, since `ecd` does not decrease in `s`.
    pub inconsistent: usize,
    /// Violations with their witnesses and re-verification, in grid order.
    pub violations: Vec<Value>,
}

fn read_checkpoint(path: &Path) -> Result<BTreeMap<String, Value>> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    for (no, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidInput(format!("checkpoint line {}: {e}", no + 1)))?;
        let key = value
            .get("key")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput(format!("checkpoint line {} has no key", no + 1)))?
            .to_string();
        done.insert(key, value);
    }
    Ok(done)
}

/// Runs the hunt, resuming from and appending to `checkpoint` when given.
pub fn hunt_counterexample(cfg: &HuntConfig, checkpoint: Option<&Path>, opts: VerifyOptions) -> Result<HuntReport> {
    if cfg.r[0] < 2 {
        return invalid("the hunt needs r >= 2");
    }
    let mut opts = opts;
    cfg.limits.apply(&mut opts);
    let mut v = Verifier::new(opts);
    let points = hunt_points(cfg)?;
    let mut done = match checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => BTreeMap::new(),
    };
    let mut log = match checkpoint {
        Some(path) => Some(OpenOptions::new().create(true).append(true).open(path)?),
        None => None,
    };
    let mut records = Vec::with_capacity(points.len());
    let (mut evaluated, mut resumed, mut complete) = (0, 0, true);
    for point in &points {
        if let Some(value) = done.remove(&point.key()) {
            resumed += 1;
            records.push(value);
            continue;
        }
        if cfg.budget.is_some_and(|b| evaluated >= b) {
            complete = false;
            break;
        }
        let rec = evaluate(point, &mut v)?;
        let value = serde_json::to_value(&rec)?;
        if let Some(f) = log.as_mut() {
            writeln!(f, "{}", serde_json::to_string(&rec)?)?;
            f.flush()?;
        }
        evaluated += 1;
        records.push(value);
    }
    let mut coverage: BTreeMap<String, Coverage> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut inconsistent = 0;
    for rec in records {
        let variant = rec.get("variant").and_then(Value::as_str).unwrap_or("unknown").to_string();
        let c = coverage.entry(variant).or_default();
        match rec.get("verdict").and_then(Value::as_str) {
            Some("holds") => c.holds += 1,
            Some("violated") => c.violated += 1,
            Some("hypothesis-not-met") => c.hypothesis_not_met += 1,
            _ => c.skipped_resource += 1,
        }
        if let (Some(a), Some(b)) =
            (rec.get("strengthened").and_then(Value::as_i64), rec.get("proven").and_then(Value::as_i64))
        {
            inconsistent += (a < b) as usize;
        }
        if rec.get("verdict").and_then(Value::as_str) == Some("violated") {
            violations.push(rec);
        }
    }
    Ok(HuntReport { complete, points: points.len(), evaluated, resumed, coverage, inconsistent, violations })
}
