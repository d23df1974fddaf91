//! Closed-form oracles, theorem checks over parameter grids, and the
//! counterexample hunter for the strengthened bound.
//!
//! Every lower-bound theorem is checked by computing both sides: the exact
//! chromatic number of the hypergraph and the defect on the right. The
//! verdict separates points outside a theorem's hypotheses from genuine
//! violations.

pub mod formulas;
pub mod grid;
pub mod hunt;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::chromatic::{chi_bounded, is_proper, standard_kneser_coloring, ChiOptions, ChiOutcome, ChromaticNumber, Refutation};
use crate::defect::{ecd_s_disjoint_with, ecd_with, DefectOptions, DefectResult};
use crate::error::{Error, Result};
use crate::families::{enumerate_family, is_good_pair, Family, FamilySpec, Partition};
use crate::hypergraph::{build_kneser, build_s_disjoint, induce_t_wide, Hypergraph, Variant};

pub use formulas::{
    bound_value, formula_ecd_h, formula_ecd_ksubsets, formula_ecd_twide, h_family_bound, twide_chromatic,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// `χ(KG^r(F, P)) >= ⌈ecd^r(F) / (r-1)⌉` when every `|P_i| <= r`.
    PartitionBound,
    /// `χ(KG^r(F, s)) >= ⌈ecd^r(F, ⌊s/2⌋) / (r-1)⌉` when `s < |F|` for all `F`.
    IntersectionBound,
    /// The same bound for the tilde hypergraph, with `|P_i| <= r`.
    TildeBound,
    /// The same bound for `KG^r(F, P, s)` when `(F, P)` is `⌊s/2⌋`-good.
    GoodnessBound,
    /// `χ(KG_S^r(F, P)) >= ⌈ecd_S^r(F) / (r-1)⌉` when every `w_S(P_i) <= r`.
    SDisjointBound,
    /// `χ(KG^r(n, k, a, s)) >= ⌈(n - r(k - ⌊s/2⌋ - 1)) / (r-1)⌉`.
    HFamilyBound,
    /// `χ(KG^r(n, k)_{t-wide}) = ⌈(n - r(k-1)) / (r-1)⌉` for `t <= r(k-2) + 1`.
    TwideEquality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    HypothesisNotMet,
    SkippedResource,
}

/// One instance of a theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremInstance {
    Partition { family: FamilySpec, partition: Partition, r: usize },
    Intersection { family: FamilySpec, r: usize, s: usize },
    Tilde { family: FamilySpec, partition: Partition, r: usize, s: usize },
    Goodness { family: FamilySpec, partition: Partition, r: usize, s: usize },
    SDisjoint { family: FamilySpec, partition: Partition, r: usize, weights: Vec<u32> },
    HFamily { n: usize, k: usize, r: usize, s: usize, a: usize },
    TWide { n: usize, k: usize, r: usize, t: usize },
}

impl TheoremInstance {
    pub fn id(&self) -> TheoremId {
        match self {
            TheoremInstance::Partition { .. } => TheoremId::PartitionBound,
            TheoremInstance::Intersection { .. } => TheoremId::IntersectionBound,
            TheoremInstance::Tilde { .. } => TheoremId::TildeBound,
            TheoremInstance::Goodness { .. } => TheoremId::GoodnessBound,
            TheoremInstance::SDisjoint { .. } => TheoremId::SDisjointBound,
            TheoremInstance::HFamily { .. } => TheoremId::HFamilyBound,
            TheoremInstance::TWide { .. } => TheoremId::TwideEquality,
        }
    }

    pub fn params(&self) -> Params {
        let mut p = Params::default();
        match self {
            TheoremInstance::Partition { family, partition, r } => {
                p.family = Some(family.clone());
                p.partition = Some(partition.to_string());
                p.r = *r;
                p.s = Some(0);
            }
            TheoremInstance::Intersection { family, r, s } => {
                p.family = Some(family.clone());
                p.r = *r;
                p.s = Some(*s);
            }
            TheoremInstance::Tilde { family, partition, r, s }
            | TheoremInstance::Goodness { family, partition, r, s } => {
                p.family = Some(family.clone());
                p.partition = Some(partition.to_string());
                p.r = *r;
                p.s = Some(*s);
            }
            TheoremInstance::SDisjoint { family, partition, r, weights } => {
                p.family = Some(family.clone());
                p.partition = Some(partition.to_string());
                p.r = *r;
                p.weights = Some(weights.clone());
            }
            TheoremInstance::HFamily { n, k, r, s, a } => {
                p.n = Some(*n);
                p.k = Some(*k);
                p.r = *r;
                p.s = Some(*s);
                p.a = Some(*a);
            }
            TheoremInstance::TWide { n, k, r, t } => {
                p.n = Some(*n);
                p.k = Some(*k);
                p.r = *r;
                p.t = Some(*t);
            }
        }
        p
    }
}

/// Parameters of a verdict, enough to reproduce it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
}

/// Certificates attached to a violated verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    pub refuted: Vec<Refutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<DefectResult>,
}

/// The standard coloring used as the upper bound in the `t`-wide equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StandardCheck {
    pub colors: usize,
    pub proper: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub theorem: TheoremId,
    pub params: Params,
    pub hypothesis_ok: bool,
    /// The first hypothesis that failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_failed: Option<String>,
    pub verdict: Verdict,
    /// The exact chromatic number, or a certified lower bound when
    /// `lhs_exact` is false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<ChromaticNumber>,
    pub lhs_exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<i64>,
    /// The defect the right-hand side is computed from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ecd: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard: Option<StandardCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
}

impl VerdictRecord {
    fn new(inst: &TheoremInstance) -> Self {
        Self {
            theorem: inst.id(),
            params: inst.params(),
            hypothesis_ok: true,
            hypothesis_failed: None,
            verdict: Verdict::Holds,
            lhs: None,
            lhs_exact: false,
            rhs: None,
            ecd: None,
            vertices: None,
            edges: None,
            standard: None,
            note: None,
            witnesses: None,
        }
    }

    fn not_met(mut self, why: impl Into<String>) -> Self {
        self.hypothesis_ok = false;
        self.hypothesis_failed = Some(why.into());
        self.verdict = Verdict::HypothesisNotMet;
        self
    }

    fn skipped(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::SkippedResource;
        self.note = Some(why.into());
        self
    }

    /// A violation on a point that satisfies the theorem's hypotheses.
    pub fn is_failure(&self) -> bool {
        self.hypothesis_ok && self.verdict == Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub chi: ChiOptions,
    pub defect: DefectOptions,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct GraphKey {
    r: usize,
    // s for intersection hypergraphs, weights for the S-disjoint kind
    s: Option<usize>,
    weights: Option<Vec<u32>>,
    vertices: Vec<u64>,
}

#[derive(Clone)]
enum ChiEntry {
    Done(ChiOutcome),
    Resource(String),
}

/// Runs theorem checks, caching chromatic numbers by hypergraph and defects
/// by family.
pub struct Verifier {
    opts: VerifyOptions,
    chi_cache: HashMap<GraphKey, ChiEntry>,
    ecd_cache: HashMap<(FamilySpec, usize, usize), DefectResult>,
}

impl Verifier {
    pub fn new(opts: VerifyOptions) -> Self {
        Self { opts, chi_cache: HashMap::new(), ecd_cache: HashMap::new() }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    /// `ecd^r(F, s)` for a generated family, cached.
    pub fn ecd(&mut self, family: &Family, r: usize, s: usize) -> Result<DefectResult> {
        let key = (family.spec().clone(), r, s);
        if let Some(d) = self.ecd_cache.get(&key) {
            return Ok(d.clone());
        }
        let d = ecd_with(family, r, s, &self.opts.defect)?;
        self.ecd_cache.insert(key, d.clone());
        Ok(d)
    }

    /// Exact chromatic number or bounds; `Err(message)` if the hypergraph is
    /// beyond the vertex cap.
    pub fn chi(&mut self, h: &Hypergraph, s: Option<usize>, weights: Option<&[u32]>) -> Result<std::result::Result<ChiOutcome, String>> {
        let key = GraphKey {
            r: h.r(),
            s,
            weights: weights.map(<[u32]>::to_vec),
            vertices: h.vertices().iter().map(|v| v.bits()).collect(),
        };
        let entry = match self.chi_cache.get(&key) {
            Some(e) => e.clone(),
            None => {
                let e = match chi_bounded(h, &self.opts.chi) {
                    Ok(out) => ChiEntry::Done(out),
                    Err(Error::Resource(msg)) => ChiEntry::Resource(msg),
                    Err(e) => return Err(e),
                };
                self.chi_cache.insert(key, e.clone());
                e
            }
        };
        Ok(match entry {
            ChiEntry::Done(out) => Ok(out),
            ChiEntry::Resource(msg) => Err(msg),
        })
    }

    pub fn check_theorem(&mut self, inst: &TheoremInstance) -> Result<VerdictRecord> {
        let rec = VerdictRecord::new(inst);
        match inst {
            TheoremInstance::Partition { family, partition, r } => {
                let f = enumerate_family(family)?;
                if let Some(why) = block_sizes_exceed(&f, partition, *r) {
                    return Ok(rec.not_met(why));
                }
                let h = build_kneser(&f, partition, 0, Variant::Plain, *r)?;
                self.kneser_bound(rec, &f, &h, *r, 0, Some(0))
            }
            TheoremInstance::Intersection { family, r, s } => {
                let f = enumerate_family(family)?;
                if let Some(why) = s_not_below_members(&f, *s) {
                    return Ok(rec.not_met(why));
                }
                let h = build_kneser(&f, &Partition::singletons(f.n())?, *s, Variant::Plain, *r)?;
                self.kneser_bound(rec, &f, &h, *r, *s / 2, Some(*s))
            }
            TheoremInstance::Tilde { family, partition, r, s } => {
                let f = enumerate_family(family)?;
                if let Some(why) = block_sizes_exceed(&f, partition, *r).or_else(|| s_not_below_members(&f, *s)) {
                    return Ok(rec.not_met(why));
                }
                let h = build_kneser(&f, partition, *s, Variant::Tilde, *r)?;
                self.kneser_bound(rec, &f, &h, *r, *s / 2, Some(*s))
            }
            TheoremInstance::Goodness { family, partition, r, s } => {
                let f = enumerate_family(family)?;
                if let Some(why) = block_sizes_exceed(&f, partition, *r).or_else(|| s_not_below_members(&f, *s)) {
                    return Ok(rec.not_met(why));
                }
                let good = is_good_pair(&f, partition, *s / 2)?;
                if !good.good {
                    let a = good.counterexample.map(|a| a.to_string()).unwrap_or_default();
                    return Ok(rec.not_met(format!("pair is not {}-good (fails at {a})", s / 2)));
                }
                let h = build_kneser(&f, partition, *s, Variant::Plain, *r)?;
                self.kneser_bound(rec, &f, &h, *r, *s / 2, Some(*s))
            }
            TheoremInstance::SDisjoint { family, partition, r, weights } => {
                let f = enumerate_family(family)?;
                if weights.len() != f.n() {
                    return Ok(rec.not_met(format!("{} weights for ground set [{}]", weights.len(), f.n())));
                }
                if let Some(w) = weights.iter().find(|&&w| w as usize > *r) {
                    return Ok(rec.not_met(format!("weight {w} exceeds r = {r}")));
                }
                if let Some((i, w)) = partition
                    .blocks()
                    .iter()
                    .map(|b| b.iter().map(|e| weights[e - 1]).sum::<u32>())
                    .enumerate()
                    .find(|&(_, w)| w as usize > *r)
                {
                    return Ok(rec.not_met(format!("block {} has S-weight {w} > r = {r}", i + 1)));
                }
                let d = ecd_s_disjoint_with(&f, *r, weights, &self.opts.defect)?;
                let h = build_s_disjoint(&f, partition, weights, *r)?;
                let rhs = bound_value(d.value as i64, *r);
                let mut rec = rec;
                rec.ecd = Some(d.value);
                self.at_least(rec, &h, rhs, None, Some(weights), Some(d))
            }
            TheoremInstance::HFamily { n, k, r, s, a } => {
                let Some(rhs) = h_family_bound(*n, *k, *r, *s, *a) else {
                    return Ok(rec.not_met("needs k, r >= 2, n > a, n >= rk, s < k and a <= r(k-s-1)"));
                };
                let f = enumerate_family(&FamilySpec::HFamily { n: *n, k: *k, a: *a, s: *s })?;
                let h = build_kneser(&f, &Partition::singletons(*n)?, *s, Variant::Plain, *r)?;
                self.at_least(rec, &h, rhs, Some(*s), None, None)
            }
            TheoremInstance::TWide { n, k, r, t } => {
                let Some(rhs) = twide_chromatic(*n, *k, *r, *t) else {
                    return Ok(rec.not_met("needs k >= 1, r >= 2, n >= rk and t <= r(k-2)+1"));
                };
                let h = induce_t_wide(*n, *k, &Partition::singletons(*n)?, *t, *r)?;
                self.equality(rec, &h, *n, *k, *r, rhs)
            }
        }
    }

    fn kneser_bound(
        &mut self,
        mut rec: VerdictRecord,
        f: &Family,
        h: &Hypergraph,
        r: usize,
        s_defect: usize,
        s_graph: Option<usize>,
    ) -> Result<VerdictRecord> {
        let d = match self.ecd(f, r, s_defect) {
            Ok(d) => d,
            Err(Error::Resource(msg)) => return Ok(rec.skipped(msg)),
            Err(e) => return Err(e),
        };
        rec.ecd = Some(d.value);
        let rhs = bound_value(d.value as i64, r);
        self.at_least(rec, h, rhs, s_graph, None, Some(d))
    }

    fn at_least(
        &mut self,
        mut rec: VerdictRecord,
        h: &Hypergraph,
        rhs: i64,
        s: Option<usize>,
        weights: Option<&[u32]>,
        defect: Option<DefectResult>,
    ) -> Result<VerdictRecord> {
        rec.rhs = Some(rhs);
        rec.vertices = Some(h.vertex_count());
        rec.edges = Some(h.edge_count());
        match self.chi(h, s, weights)? {
            Err(msg) => Ok(rec.skipped(msg)),
            Ok(ChiOutcome::Exact(res)) => {
                rec.lhs = Some(res.value);
                rec.lhs_exact = true;
                if !res.value.at_least(rhs) {
                    if let Some(c) = &res.coloring {
                        if !is_proper(h, c)? {
                            return Err(Error::Internal("solver coloring is not proper".into()));
                        }
                    }
                    rec.verdict = Verdict::Violated;
                    rec.witnesses = Some(Witnesses { coloring: res.coloring, refuted: res.refuted, defect });
                }
                Ok(rec)
            }
            Ok(ChiOutcome::Bounded(b)) => {
                rec.lhs = Some(ChromaticNumber::Finite(b.lower));
                if (b.lower as i64) >= rhs {
                    rec.note = Some(format!("node limit reached at {} colors; lower bound suffices", b.lower));
                    Ok(rec)
                } else {
                    Ok(rec.skipped(format!("node limit reached at {} colors, below the bound", b.lower)))
                }
            }
        }
    }

    fn equality(&mut self, mut rec: VerdictRecord, h: &Hypergraph, n: usize, k: usize, r: usize, rhs: i64) -> Result<VerdictRecord> {
        rec.rhs = Some(rhs);
        rec.vertices = Some(h.vertex_count());
        rec.edges = Some(h.edge_count());
        let standard = match standard_kneser_coloring(n, k, r, h) {
            Ok(c) => StandardCheck { colors: c.iter().copied().max().unwrap_or(0) as usize, proper: true },
            Err(Error::Internal(_)) => StandardCheck { colors: 0, proper: false },
            Err(e) => return Err(e),
        };
        rec.standard = Some(standard);
        let upper_ok = standard.proper && standard.colors as i64 <= rhs;
        match self.chi(h, Some(0), None)? {
            Err(msg) => Ok(rec.skipped(msg)),
            Ok(ChiOutcome::Exact(res)) => {
                rec.lhs = Some(res.value);
                rec.lhs_exact = true;
                if res.value != ChromaticNumber::Finite(rhs.max(0) as usize) || !upper_ok {
                    rec.verdict = Verdict::Violated;
                    rec.witnesses = Some(Witnesses { coloring: res.coloring, refuted: res.refuted, defect: None });
                }
                Ok(rec)
            }
            Ok(ChiOutcome::Bounded(b)) => {
                rec.lhs = Some(ChromaticNumber::Finite(b.lower));
                if b.lower as i64 > rhs {
                    rec.verdict = Verdict::Violated;
                    Ok(rec)
                } else if b.lower as i64 == rhs && upper_ok {
                    // the standard coloring closes the gap
                    rec.lhs_exact = true;
                    Ok(rec)
                } else {
                    Ok(rec.skipped(format!("node limit reached at {} colors", b.lower)))
                }
            }
        }
    }
}

fn block_sizes_exceed(f: &Family, p: &Partition, r: usize) -> Option<String> {
    if f.n() != p.n() {
        return Some(format!("partition of [{}] for a family over [{}]", p.n(), f.n()));
    }
    (p.max_block_size() > r).then(|| format!("a block has {} > r = {r} elements", p.max_block_size()))
}

fn s_not_below_members(f: &Family, s: usize) -> Option<String> {
    f.min_member_size()
        .filter(|&m| s >= m)
        .map(|m| format!("s = {s} is not below the smallest member size {m}"))
}

/// Checks one theorem instance with default options.
pub fn check_theorem(inst: &TheoremInstance) -> Result<VerdictRecord> {
    Verifier::new(VerifyOptions::default()).check_theorem(inst)
}
