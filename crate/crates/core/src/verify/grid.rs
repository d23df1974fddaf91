//! Grid configuration and the formula, theorem and `S`-disjoint suites.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    formula_ecd_h, formula_ecd_ksubsets, formula_ecd_twide, TheoremId, TheoremInstance, Verdict, VerdictRecord,
    Verifier, VerifyOptions,
};
use crate::defect::{ecd_s_disjoint_with, ecd_with, is_avoiding_partition, DefectResult};
use crate::error::{invalid, Error, Result};
use crate::families::{enumerate_family, Family, FamilySpec, Partition};
use crate::hypergraph::{build_kneser, build_s_disjoint, is_homomorphism, Variant};
use crate::lift::{induced_vertex_map, lift_family, lift_ground, lift_partition};

/// An inclusive range written `[lo, hi]`.
pub type Range = [usize; 2];

fn span(r: Range) -> std::ops::RangeInclusive<usize> {
    r[0]..=r[1]
}

/// How a grid point's partition is produced from `n` and `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PartitionGen {
    Singletons,
    /// Consecutive blocks of size `r`.
    BlocksOfR,
    Consecutive(usize),
    /// A fixed partition, used only at its own ground-set size.
    Custom(Partition),
}

impl PartitionGen {
    /// `None` when a custom partition does not fit `n`.
    pub fn make(&self, n: usize, r: usize) -> Result<Option<Partition>> {
        Ok(Some(match self {
            PartitionGen::Singletons => Partition::singletons(n)?,
            PartitionGen::BlocksOfR => Partition::consecutive(n, r)?,
            PartitionGen::Consecutive(size) => Partition::consecutive(n, *size)?,
            PartitionGen::Custom(p) if p.n() == n => p.clone(),
            PartitionGen::Custom(_) => return Ok(None),
        }))
    }
}

impl fmt::Display for PartitionGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionGen::Singletons => f.write_str("singletons"),
            PartitionGen::BlocksOfR => f.write_str("blocks-of-r"),
            PartitionGen::Consecutive(k) => write!(f, "consecutive:{k}"),
            PartitionGen::Custom(p) => write!(f, "custom:{p}"),
        }
    }
}

impl FromStr for PartitionGen {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singletons" => Ok(PartitionGen::Singletons),
            "blocks-of-r" => Ok(PartitionGen::BlocksOfR),
            _ => {
                if let Some(k) = s.strip_prefix("consecutive:") {
                    let k = k.parse().map_err(|_| Error::InvalidInput(format!("bad block size in {s:?}")))?;
                    Ok(PartitionGen::Consecutive(k))
                } else if let Some(p) = s.strip_prefix("custom:") {
                    Ok(PartitionGen::Custom(Partition::parse(p)?))
                } else {
                    invalid(format!("unknown partition generator {s:?}"))
                }
            }
        }
    }
}

impl TryFrom<String> for PartitionGen {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PartitionGen> for String {
    fn from(p: PartitionGen) -> String {
        p.to_string()
    }
}

/// Parameter ranges; `s`, `a` and `t` run over everything the family allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Space {
    pub n: Range,
    pub k: Range,
    pub r: Range,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FormulaGrids {
    pub ksubsets: Option<Space>,
    pub hfamily: Option<Space>,
    pub twide: Option<Space>,
}

/// `k`-subset families against the four bounds on `KG^r(F, P, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KneserGrid {
    pub n: Range,
    pub k: Range,
    pub r: Range,
    pub s: Range,
    pub partitions: Vec<PartitionGen>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SDisjointSuite {
    pub instances: usize,
    pub seed: u64,
    pub n: Range,
    pub r: usize,
    /// Weights are drawn uniformly from this range.
    pub weights: [u32; 2],
    /// At most this many members per random family.
    pub max_sets: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TheoremGrids {
    pub kneser: Option<KneserGrid>,
    pub hfamily: Option<Space>,
    pub twide: Option<Space>,
    pub sdisjoint: Option<SDisjointSuite>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Limits {
    pub node_limit: Option<u64>,
    pub max_vertices: Option<usize>,
    pub max_n: Option<usize>,
}

impl Limits {
    /// Applies the limits that are set.
    pub fn apply(&self, opts: &mut VerifyOptions) {
        if let Some(v) = self.node_limit {
            opts.chi.node_limit = v;
        }
        if let Some(v) = self.max_vertices {
            opts.chi.max_vertices = v;
        }
        if let Some(v) = self.max_n {
            opts.defect.max_n = v;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub formulas: FormulaGrids,
    pub theorems: TheoremGrids,
    pub limits: Limits,
}

impl GridConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    Ksubsets,
    Hfamily,
    Twide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaStatus {
    Match,
    Mismatch,
    SkippedResource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaRecord {
    pub formula: FormulaId,
    pub family: FamilySpec,
    pub r: usize,
    pub s: usize,
    pub closed_form: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<usize>,
    pub status: FormulaStatus,
    /// The brute-force witness, on a mismatch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DefectResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Brute-force `ecd` against every closed form, on each closed form's region.
pub fn check_ecd_against_formulas(grids: &FormulaGrids, v: &mut Verifier) -> Result<Vec<FormulaRecord>> {
    let mut points = Vec::new();
    if let Some(g) = &grids.ksubsets {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k <= n) {
                for r in span(g.r) {
                    for s in 0..k {
                        if let Some(v) = formula_ecd_ksubsets(n, k, r, s) {
                            points.push((FormulaId::Ksubsets, FamilySpec::KSubsets { n, k }, r, s, v));
                        }
                    }
                }
            }
        }
    }
    if let Some(g) = &grids.hfamily {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k <= n) {
                for r in span(g.r) {
                    for s in 0..k {
                        for a in 0..n {
                            if let Some(v) = formula_ecd_h(n, k, r, s, a) {
                                points.push((FormulaId::Hfamily, FamilySpec::HFamily { n, k, a, s }, r, s, v));
                            }
                        }
                    }
                }
            }
        }
    }
    if let Some(g) = &grids.twide {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k <= n) {
                for r in span(g.r) {
                    for t in 1..=n {
                        if let Some(v) = formula_ecd_twide(n, k, r, t) {
                            points.push((FormulaId::Twide, FamilySpec::TWide { n, k, t }, r, 0, v));
                        }
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(points.len());
    for (formula, spec, r, s, closed_form) in points {
        let f = enumerate_family(&spec)?;
        let mut rec = FormulaRecord {
            formula,
            family: spec,
            r,
            s,
            closed_form,
            brute_force: None,
            status: FormulaStatus::Match,
            witness: None,
            note: None,
        };
        match v.ecd(&f, r, s) {
            Ok(d) => {
                rec.brute_force = Some(d.value);
                if d.value as i64 != closed_form {
                    rec.status = FormulaStatus::Mismatch;
                    rec.witness = Some(d);
                }
            }
            Err(Error::Resource(msg)) => {
                rec.status = FormulaStatus::SkippedResource;
                rec.note = Some(msg);
            }
            Err(e) => return Err(e),
        }
        out.push(rec);
    }
    Ok(out)
}

/// The theorem instances of a grid, in traversal order.
pub fn theorem_instances(grids: &TheoremGrids) -> Result<Vec<TheoremInstance>> {
    let mut out = Vec::new();
    if let Some(g) = &grids.kneser {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k >= 1 && k <= n) {
                for r in span(g.r) {
                    for s in span(g.s) {
                        let family = FamilySpec::KSubsets { n, k };
                        out.push(TheoremInstance::Intersection { family: family.clone(), r, s });
                        let mut seen = BTreeSet::new();
                        for gen in &g.partitions {
                            let Some(partition) = gen.make(n, r)? else { continue };
                            if !seen.insert(partition.to_string()) {
                                continue;
                            }
                            if s == 0 {
                                out.push(TheoremInstance::Partition { family: family.clone(), partition: partition.clone(), r });
                            }
                            out.push(TheoremInstance::Tilde { family: family.clone(), partition: partition.clone(), r, s });
                            out.push(TheoremInstance::Goodness { family: family.clone(), partition, r, s });
                        }
                    }
                }
            }
        }
    }
    if let Some(g) = &grids.hfamily {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k <= n) {
                for r in span(g.r) {
                    for s in 0..k {
                        for a in 0..n {
                            out.push(TheoremInstance::HFamily { n, k, r, s, a });
                        }
                    }
                }
            }
        }
    }
    if let Some(g) = &grids.twide {
        for n in span(g.n) {
            for k in span(g.k).filter(|&k| k >= 1 && k <= n) {
                for r in span(g.r) {
                    for t in 1..=n {
                        out.push(TheoremInstance::TWide { n, k, r, t });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn run_theorem_grid(grids: &TheoremGrids, v: &mut Verifier) -> Result<Vec<VerdictRecord>> {
    theorem_instances(grids)?.iter().map(|inst| v.check_theorem(inst)).collect()
}

/// One random instance of the `S`-disjoint suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SDisjointRecord {
    pub index: usize,
    pub family: FamilySpec,
    pub weights: Vec<u32>,
    pub partition: String,
    pub n_bar: usize,
    pub ecd_s: usize,
    /// `ecd^r` of the lifted family, `s = 0`.
    pub ecd_lifted: usize,
    pub defect_inequality: bool,
    pub homomorphism: bool,
    /// No copy pair of the lifted family is a vertex of the lifted hypergraph.
    pub copy_pairs_excluded: bool,
    pub theorem: VerdictRecord,
}

impl SDisjointRecord {
    pub fn is_failure(&self) -> bool {
        !self.defect_inequality || !self.homomorphism || !self.copy_pairs_excluded || self.theorem.is_failure()
    }
}

/// Random families, weights and partitions from a seeded ChaCha8 stream.
pub fn sdisjoint_instances(cfg: &SDisjointSuite) -> Result<Vec<(Family, Vec<u32>, Partition)>> {
    if cfg.n[0] == 0 || cfg.n[0] > cfg.n[1] || cfg.weights[0] > cfg.weights[1] || cfg.max_sets == 0 {
        return invalid("S-disjoint suite needs 1 <= n_lo <= n_hi, w_lo <= w_hi and max_sets >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.instances);
    while out.len() < cfg.instances {
        let n = rng.gen_range(span(cfg.n));
        let weights: Vec<u32> = (0..n).map(|_| rng.gen_range(cfg.weights[0]..=cfg.weights[1])).collect();
        if weights.iter().all(|&w| w == 0) {
            continue;
        }
        let m = rng.gen_range(1..=cfg.max_sets);
        let mut sets = BTreeSet::new();
        for _ in 0..m {
            let bits: u64 = rng.gen_range(1..(1u64 << n));
            sets.insert((0..n).filter(|j| bits >> j & 1 == 1).map(|j| j + 1).collect::<Vec<_>>());
        }
        let family = Family::explicit(n, sets.into_iter().collect())?;
        // consecutive blocks of one or two elements
        let mut blocks = Vec::new();
        let mut next = 1;
        while next <= n {
            let size = if next < n && rng.gen_bool(0.5) { 2 } else { 1 };
            blocks.push((next..next + size).collect());
            next += size;
        }
        out.push((family, weights, Partition::new(n, blocks)?));
    }
    Ok(out)
}

pub fn run_sdisjoint_suite(cfg: &SDisjointSuite, v: &mut Verifier) -> Result<Vec<SDisjointRecord>> {
    let opts = *v.options();
    let r = cfg.r;
    let mut out = Vec::new();
    for (index, (family, weights, partition)) in sdisjoint_instances(cfg)?.into_iter().enumerate() {
        let lifting = lift_ground(&weights)?;
        let lifted = lift_family(&family, &lifting)?;
        let (lifted_partition, _) = lift_partition(&partition, &lifting)?;
        let ecd_s = ecd_s_disjoint_with(&family, r, &weights, &opts.defect)?;
        let ecd_lifted = ecd_with(&lifted, r, 0, &opts.defect)?;
        if !is_avoiding_partition(
            ecd_lifted.witness_x0.as_ref().expect("ecd witness has X0"),
            &ecd_lifted.witness_parts,
            &lifted,
            0,
        )? {
            return Err(Error::Internal("lifted defect witness does not avoid the family".into()));
        }
        let src = build_kneser(&lifted, &lifted_partition, 0, Variant::Plain, r)?;
        let dst = build_s_disjoint(&family, &partition, &weights, r)?;
        let map = induced_vertex_map(&lifting, &src, &dst)?;
        let copy_pairs_excluded = src.vertices().iter().all(|a| {
            let v = a.to_vec();
            !(v.len() == 2 && lifting.project(v[0]) == lifting.project(v[1]))
        });
        let theorem = v.check_theorem(&TheoremInstance::SDisjoint {
            family: family.spec().clone(),
            partition: partition.clone(),
            r,
            weights: weights.clone(),
        })?;
        out.push(SDisjointRecord {
            index,
            family: family.spec().clone(),
            weights,
            partition: partition.to_string(),
            n_bar: lifting.n_bar(),
            ecd_s: ecd_s.value,
            ecd_lifted: ecd_lifted.value,
            defect_inequality: ecd_s.value <= ecd_lifted.value,
            homomorphism: is_homomorphism(&map, &src, &dst),
            copy_pairs_excluded,
            theorem,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Formulas,
    Theorems,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formulas" => Ok(Suite::Formulas),
            "theorems" => Ok(Suite::Theorems),
            "all" => Ok(Suite::All),
            _ => invalid(format!("unknown suite {s:?}; expected formulas, theorems or all")),
        }
    }
}

/// One line of the verdict log.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum LogLine<'a> {
    Formula(&'a FormulaRecord),
    Theorem(&'a VerdictRecord),
    Sdisjoint(&'a SDisjointRecord),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FormulaSummary {
    pub checked: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TheoremSummary {
    pub records: usize,
    pub holds: usize,
    pub violated: usize,
    /// Violations on points meeting the hypotheses.
    pub failures: usize,
    pub hypothesis_not_met: usize,
    pub skipped_resource: usize,
    /// Verdicts that rest on a certified lower bound rather than the exact value.
    pub lower_bound_only: usize,
    pub by_theorem: Vec<(TheoremId, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SDisjointSummary {
    pub instances: usize,
    pub defect_inequality_failures: usize,
    pub homomorphism_failures: usize,
    pub copy_pair_failures: usize,
    pub theorem_hypothesis_ok: usize,
    pub theorem_failures: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub formulas: FormulaSummary,
    pub theorems: TheoremSummary,
    pub sdisjoint: SDisjointSummary,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub formulas: Vec<FormulaRecord>,
    pub theorems: Vec<VerdictRecord>,
    pub sdisjoint: Vec<SDisjointRecord>,
}

impl SuiteReport {
    pub fn log_lines(&self) -> impl Iterator<Item = LogLine<'_>> {
        self.formulas
            .iter()
            .map(LogLine::Formula)
            .chain(self.theorems.iter().map(LogLine::Theorem))
            .chain(self.sdisjoint.iter().map(LogLine::Sdisjoint))
    }

    /// Failures of proven statements: theorem violations under their
    /// hypotheses and broken `S`-disjoint invariants. Formula mismatches are
    /// reported but not counted.
    pub fn failures(&self) -> usize {
        self.theorems.iter().filter(|r| r.is_failure()).count()
            + self.sdisjoint.iter().filter(|r| r.is_failure()).count()
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for f in &self.formulas {
            s.formulas.checked += 1;
            match f.status {
                FormulaStatus::Match => s.formulas.matched += 1,
                FormulaStatus::Mismatch => s.formulas.mismatched += 1,
                FormulaStatus::SkippedResource => s.formulas.skipped += 1,
            }
        }
        let mut by = std::collections::BTreeMap::new();
        for r in &self.theorems {
            let t = &mut s.theorems;
            t.records += 1;
            *by.entry(r.theorem).or_insert(0) += 1;
            match r.verdict {
                Verdict::Holds => t.holds += 1,
                Verdict::Violated => t.violated += 1,
                Verdict::HypothesisNotMet => t.hypothesis_not_met += 1,
                Verdict::SkippedResource => t.skipped_resource += 1,
            }
            t.failures += r.is_failure() as usize;
            t.lower_bound_only += (r.verdict == Verdict::Holds && !r.lhs_exact) as usize;
        }
        s.theorems.by_theorem = by.into_iter().collect();
        for r in &self.sdisjoint {
            let d = &mut s.sdisjoint;
            d.instances += 1;
            d.defect_inequality_failures += !r.defect_inequality as usize;
            d.homomorphism_failures += !r.homomorphism as usize;
            d.copy_pair_failures += !r.copy_pairs_excluded as usize;
            d.theorem_hypothesis_ok += r.theorem.hypothesis_ok as usize;
            d.theorem_failures += r.theorem.is_failure() as usize;
        }
        s
    }
}

/// Runs the chosen suites of a grid configuration.
pub fn run_suite(cfg: &GridConfig, suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let mut opts = opts;
    cfg.limits.apply(&mut opts);
    let mut v = Verifier::new(opts);
    let mut report = SuiteReport::default();
    if matches!(suite, Suite::Formulas | Suite::All) {
        report.formulas = check_ecd_against_formulas(&cfg.formulas, &mut v)?;
    }
    if matches!(suite, Suite::Theorems | Suite::All) {
        report.theorems = run_theorem_grid(&cfg.theorems, &mut v)?;
        if let Some(sd) = &cfg.theorems.sdisjoint {
            report.sdisjoint = run_sdisjoint_suite(sd, &mut v)?;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_generators() {
        for text in ["singletons", "blocks-of-r", "consecutive:2", "custom:1,2|3"] {
            let g: PartitionGen = text.parse().unwrap();
            assert_eq!(g.to_string(), text);
        }
        assert!("blocks".parse::<PartitionGen>().is_err());
        let custom: PartitionGen = "custom:1,2|3".parse().unwrap();
        assert!(custom.make(4, 2).unwrap().is_none());
        assert_eq!(PartitionGen::BlocksOfR.make(5, 2).unwrap().unwrap().to_string(), "1,2|3,4|5");
    }

    #[test]
    fn config_parses_and_rejects_unknown_fields() {
        let cfg = GridConfig::from_json(
            r#"{"formulas": {"ksubsets": {"n": [2, 5], "k": [2, 3], "r": [2, 2]}},
                "theorems": {"kneser": {"n": [4, 5], "k": [2, 2], "r": [2, 2], "s": [0, 1],
                                        "partitions": ["singletons", "blocks-of-r"]}},
                "limits": {"node_limit": 1000000}}"#,
        )
        .unwrap();
        assert_eq!(cfg.limits.node_limit, Some(1_000_000));
        assert!(GridConfig::from_json(r#"{"formula": {}}"#).is_err());
        let report = run_suite(&cfg, Suite::All, VerifyOptions::default()).unwrap();
        assert!(report.formulas.iter().all(|f| f.status == FormulaStatus::Match));
        assert!(report.theorems.iter().all(|r| !r.is_failure()));
        assert_eq!(report.failures(), 0);
        let s = report.summary();
        assert!(s.theorems.holds > 0);
        assert_eq!(s.theorems.records, report.theorems.len());
    }

    #[test]
    fn empty_config_is_empty() {
        let report = run_suite(&GridConfig::default(), Suite::All, VerifyOptions::default()).unwrap();
        assert_eq!(report, SuiteReport::default());
    }

    #[test]
    fn seeded_instances_repeat() {
        let cfg = SDisjointSuite { instances: 8, seed: 7, n: [1, 4], r: 2, weights: [1, 2], max_sets: 3 };
        let a = sdisjoint_instances(&cfg).unwrap();
        let b = sdisjoint_instances(&cfg).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!(a, b);
        let recs = run_sdisjoint_suite(&cfg, &mut Verifier::new(VerifyOptions::default())).unwrap();
        assert!(recs.iter().all(|r| !r.is_failure()), "{recs:?}");
    }
}
