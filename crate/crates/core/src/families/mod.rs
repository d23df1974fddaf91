//! Subsets of `[n]`, partitions, set families and the predicates relating them.

mod partition;
mod subset;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use partition::Partition;
pub(crate) use subset::{binomial, cmp_bits, k_subsets_bits, low_mask, within_s_bits, BitIter};
pub use subset::{GroundSet, Subset, MAX_GROUND};

use crate::error::{invalid, Error, Result};

/// Largest family that will be materialized.
pub const MAX_FAMILY: usize = 1 << 22;

/// Largest number of admissible subsets the goodness check will enumerate.
pub const MAX_GOODNESS_SUBSETS: u128 = 1 << 24;

/// How a family is produced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilySpec {
    Explicit { n: usize, sets: Vec<Vec<usize>> },
    /// All `k`-subsets of `[n]`.
    KSubsets { n: usize, k: usize },
    /// `k`-subsets `F` with `F` not `s`-nearly inside `{n-a+1, ..., n}`.
    HFamily { n: usize, k: usize, a: usize, s: usize },
    /// `k`-subsets not inside any window `{i, ..., i+t-1}`.
    TWide { n: usize, k: usize, t: usize },
}

impl FamilySpec {
    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::Explicit { n, .. }
            | FamilySpec::KSubsets { n, .. }
            | FamilySpec::HFamily { n, .. }
            | FamilySpec::TWide { n, .. } => n,
        }
    }

    /// Parses `ksubsets:n=7,k=3`, `hfamily:n=8,k=3,a=2,s=1`, `twide:n=7,k=3,t=3`
    /// or `file:<path>` (a JSON family document).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("family spec {text:?} has no kind")))?;
        if kind == "file" {
            let body = std::fs::read_to_string(rest)?;
            let fam = Family::from_json(&body)?;
            return Ok(fam.spec().clone());
        }
        let mut fields = std::collections::BTreeMap::new();
        for kv in rest.split(',') {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got {kv:?}")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad value in {kv:?}")))?;
            fields.insert(key.trim().to_string(), value);
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("family spec {text:?} lacks {key}=")))
        };
        let spec = match kind {
            "ksubsets" => FamilySpec::KSubsets { n: get("n")?, k: get("k")? },
            "hfamily" => FamilySpec::HFamily { n: get("n")?, k: get("k")?, a: get("a")?, s: get("s")? },
            "twide" => FamilySpec::TWide { n: get("n")?, k: get("k")?, t: get("t")? },
            other => return invalid(format!("unknown family kind {other:?}")),
        };
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Explicit { n, sets } => write!(f, "explicit:n={n},m={}", sets.len()),
            FamilySpec::KSubsets { n, k } => write!(f, "ksubsets:n={n},k={k}"),
            FamilySpec::HFamily { n, k, a, s } => write!(f, "hfamily:n={n},k={k},a={a},s={s}"),
            FamilySpec::TWide { n, k, t } => write!(f, "twide:n={n},k={k},t={t}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilySpec::parse(s)
    }
}

/// A finite family of distinct non-empty subsets of `[n]`, kept in the
/// size-then-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    n: usize,
    spec: FamilySpec,
    members: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl Family {
    /// Builds an explicit family; rejects empty members and duplicates.
    pub fn explicit(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        GroundSet::new(n)?;
        let subsets = sets
            .iter()
            .map(|s| {
                let sub = Subset::new(n, s.iter().copied())?;
                if sub.len() != s.len() {
                    return invalid(format!("member {s:?} repeats an element"));
                }
                Ok(sub)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_subsets(n, subsets)
    }

    pub fn from_subsets(n: usize, mut members: Vec<Subset>) -> Result<Self> {
        GroundSet::new(n)?;
        if members.len() > MAX_FAMILY {
            return Err(Error::Resource(format!("family larger than {MAX_FAMILY} members")));
        }
        for m in &members {
            if m.ground() != n {
                return invalid(format!("member {m} is over [{}], not [{n}]", m.ground()));
            }
            if m.is_empty() {
                return invalid("families may not contain the empty set");
            }
        }
        members.sort();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return invalid("family has duplicate members");
        }
        let spec = FamilySpec::Explicit { n, sets: members.iter().map(Subset::to_vec).collect() };
        Ok(Self { n, spec, members })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_subsets(n, Vec::new())
    }

    /// Reads `{"n": int, "sets": [[int, ...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FamilyJson = serde_json::from_str(text)?;
        Self::explicit(raw.n, raw.sets)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyJson {
            n: self.n,
            sets: self.members.iter().map(Subset::to_vec).collect(),
        })
        .expect("family serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: &Subset) -> bool {
        self.members.binary_search(a).is_ok()
    }

    pub fn min_member_size(&self) -> Option<usize> {
        self.members.first().map(Subset::len)
    }

    pub(crate) fn member_bits(&self) -> Vec<u64> {
        self.members.iter().map(Subset::bits).collect()
    }

    fn check_ground(&self, n: usize) -> Result<()> {
        if n != self.n {
            return invalid(format!("family over [{}] used with ground set [{n}]", self.n));
        }
        Ok(())
    }
}

/// Materializes a family from its spec, validating generator parameters.
pub fn enumerate_family(spec: &FamilySpec) -> Result<Family> {
    let n = spec.n();
    GroundSet::new(n)?;
    let keep: Box<dyn Fn(u64) -> bool> = match *spec {
        FamilySpec::Explicit { n, ref sets } => return Family::explicit(n, sets.clone()),
        FamilySpec::KSubsets { k, .. } => {
            check_k(n, k)?;
            Box::new(|_| true)
        }
        FamilySpec::HFamily { k, a, s, .. } => {
            check_k(n, k)?;
            if a >= n {
                return invalid(format!("hfamily needs 0 <= a < n, got a={a}, n={n}"));
            }
            if s >= k {
                return invalid(format!("hfamily needs 0 <= s < k, got s={s}, k={k}"));
            }
            // F ⊄_s A  ⇔  |F \ A| > s  ⇔  |F ∩ A| < k - s
            let tail = low_mask(n) & !low_mask(n - a);
            Box::new(move |f| ((f & tail).count_ones() as usize) < k - s)
        }
        FamilySpec::TWide { k, t, .. } => {
            check_k(n, k)?;
            if t == 0 || t > n {
                return invalid(format!("twide needs 1 <= t <= n, got t={t}, n={n}"));
            }
            // A set fits in some window of length t iff its span is at most t.
            Box::new(move |f| {
                let span = 64 - f.leading_zeros() as usize - f.trailing_zeros() as usize;
                span > t
            })
        }
    };
    let k = match *spec {
        FamilySpec::KSubsets { k, .. } | FamilySpec::HFamily { k, .. } | FamilySpec::TWide { k, .. } => k,
        FamilySpec::Explicit { .. } => unreachable!(),
    };
    if binomial(n, k) > MAX_FAMILY as u128 {
        return Err(Error::Resource(format!(
            "C({n},{k}) exceeds the family cap of {MAX_FAMILY} members"
        )));
    }
    let mut members: Vec<Subset> = k_subsets_bits(n, k)
        .filter(|&b| keep(b))
        .map(|b| Subset::from_bits_unchecked(n, b))
        .collect();
    members.sort();
    Ok(Family { n, spec: spec.clone(), members })
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return invalid(format!("need 1 <= k <= n, got k={k}, n={n}"));
    }
    Ok(())
}

/// `A ⊆_s B`: some `E` with `|E| <= s` has `A \ E ⊆ B`; equivalently `|A \ B| <= s`.
pub fn subset_within_s(a: &Subset, b: &Subset, s: usize) -> Result<bool> {
    if a.ground() != b.ground() {
        return invalid(format!("subsets over [{}] and [{}]", a.ground(), b.ground()));
    }
    Ok(a.within_s(b, s))
}

/// `|A ∩ P_i| <= 1` for every block.
pub fn is_admissible(a: &Subset, p: &Partition) -> Result<bool> {
    p.check_ground(a)?;
    Ok(p.admissible_bits(a.bits()))
}

/// `Σ_i max(|A ∩ P_i| - 1, 0)`.
pub fn tilde_excess(a: &Subset, p: &Partition) -> Result<usize> {
    p.check_ground(a)?;
    Ok(p.excess_bits(a.bits()))
}

/// Outcome of [`is_good_pair`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodnessCheck {
    pub good: bool,
    /// The order-least admissible `A` that breaks goodness.
    pub counterexample: Option<Subset>,
}

/// Bit patterns of all `P`-admissible subsets of `[n]`.
pub(crate) fn admissible_subsets(p: &Partition) -> Result<Vec<u64>> {
    let count: u128 = p.blocks().iter().map(|b| b.len() as u128 + 1).product();
    if count > MAX_GOODNESS_SUBSETS {
        return Err(Error::Resource(format!(
            "{count} admissible subsets exceed the cap of {MAX_GOODNESS_SUBSETS}"
        )));
    }
    let mut out = vec![0u64];
    for block in p.blocks() {
        let mut next = Vec::with_capacity(out.len() * (block.len() + 1));
        for &base in &out {
            next.push(base);
            for e in BitIter(block.bits()) {
                next.push(base | 1u64 << e);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Exhaustively decides whether `(F, P)` is `s`-good: every admissible `A` that
/// `s`-nearly contains some member also `s`-nearly contains an admissible member.
pub fn is_good_pair(f: &Family, p: &Partition, s: usize) -> Result<GoodnessCheck> {
    f.check_ground(p.n())?;
    let all = f.member_bits();
    let admissible: Vec<u64> = all.iter().copied().filter(|&b| p.admissible_bits(b)).collect();
    let mut worst: Option<u64> = None;
    for a in admissible_subsets(p)? {
        let hit = all.iter().any(|&m| within_s_bits(m, a, s));
        if hit && !admissible.iter().any(|&m| within_s_bits(m, a, s)) {
            worst = Some(match worst {
                Some(w) if cmp_bits(w, a).is_le() => w,
                _ => a,
            });
        }
    }
    Ok(GoodnessCheck {
        good: worst.is_none(),
        counterexample: worst.map(|b| Subset::from_bits_unchecked(p.n(), b)),
    })
}

/// `F(X, s)`: all non-empty `A ⊆ X` with some member `F` satisfying `A ⊆ F ⊆_s A`.
pub fn restricted_family(x: &Subset, f: &Family, s: usize) -> Result<Family> {
    f.check_ground(x.ground())?;
    let mut out = BTreeSet::new();
    for m in f.members() {
        let outside = m.difference(x);
        if outside.len() > s {
            continue;
        }
        // A = m minus E, where E ⊇ m \ X and |E| <= s.
        let budget = s - outside.len();
        let core = m.intersection(x).bits();
        let mut sub = core;
        loop {
            let removed = core & !sub;
            if removed.count_ones() as usize <= budget && sub != 0 {
                out.insert(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & core;
        }
    }
    Family::from_subsets(
        f.n(),
        out.into_iter().map(|b| Subset::from_bits_unchecked(f.n(), b)).collect(),
    )
}
