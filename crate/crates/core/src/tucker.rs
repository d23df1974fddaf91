//! The `Z_p`-Tucker labeling behind the defect lower bounds, evaluated
//! face by face on `E_{n-1}(Z_p)` and checked exhaustively.
//!
//! `Z_p` is the group of `p`-th roots of unity, written additively: the root
//! `exp(2πi·ω/p)` is stored as the residue `ω`, so multiplying roots adds
//! residues and raising to a power multiplies them.

use std::cmp::Ordering;

use serde::{Serialize, Serializer};

use crate::chromatic::{chi_exact, is_proper};
use crate::defect::ecd;
use crate::error::{invalid, Error, Result};
use crate::families::{cmp_bits, within_s_bits, Family, Partition, Subset};
use crate::hypergraph::{build_kneser, Hypergraph, Variant};

/// Default cap on `(p+1)^n`, the number of faces enumerated.
pub const DEFAULT_MAX_FACES: u64 = 1_000_000;
/// Largest prime accepted; chain tracking keeps one bit per subset of `Z_p`.
pub const MAX_P: usize = 7;

/// `A < B` in the complete order: by size, then lexicographically on the
/// ascending element lists.
pub fn complete_order_less(a: &Subset, b: &Subset) -> bool {
    cmp_bits(a.bits(), b.bits()) == Ordering::Less
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inverse_mod(a: usize, p: usize) -> usize {
    (1..p).find(|x| a * x % p == 1).expect("non-zero residue modulo a prime")
}

/// A face of `E_{n-1}(Z_p)`: each ground element `j` is absent or carries a
/// single sign `ω ∈ Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedFace {
    p: usize,
    signs: Vec<Option<u8>>,
}

impl SignedFace {
    /// `signs[j-1]` is the sign of element `j`, if present.
    pub fn new(p: usize, signs: Vec<Option<u8>>) -> Result<Self> {
        if !is_prime(p) || p > MAX_P {
            return invalid(format!("p must be a prime at most {MAX_P}, got {p}"));
        }
        if signs.len() > 64 {
            return invalid("faces live on at most 64 ground elements");
        }
        if let Some(w) = signs.iter().flatten().find(|&&w| w as usize >= p) {
            return invalid(format!("sign {w} is not a residue modulo {p}"));
        }
        Ok(Self { p, signs })
    }

    /// Builds a face from `(ω, j)` pairs.
    pub fn from_pairs(p: usize, n: usize, pairs: &[(u8, usize)]) -> Result<Self> {
        let mut signs = vec![None; n];
        for &(w, j) in pairs {
            if j == 0 || j > n {
                return invalid(format!("element {j} outside [1, {n}]"));
            }
            if signs[j - 1].is_some() {
                return invalid(format!("element {j} appears twice"));
            }
            signs[j - 1] = Some(w);
        }
        Self::new(p, signs)
    }

    fn from_code(p: usize, n: usize, mut code: u64) -> Self {
        let base = p as u64 + 1;
        let signs = (0..n)
            .map(|_| {
                let d = code % base;
                code /= base;
                (d > 0).then(|| (d - 1) as u8)
            })
            .collect();
        Self { p, signs }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn len(&self) -> usize {
        self.signs.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sign(&self, j: usize) -> Option<u8> {
        self.signs[j - 1]
    }

    /// `A^i`, the elements carrying sign `i`.
    pub fn part(&self, i: u8) -> Subset {
        Subset::from_bits_unchecked(self.n(), self.part_bits()[i as usize])
    }

    /// `π_2(A)`.
    pub fn support(&self) -> Subset {
        let bits = self.signs.iter().enumerate().filter(|(_, w)| w.is_some()).fold(0u64, |b, (j, _)| b | 1 << j);
        Subset::from_bits_unchecked(self.n(), bits)
    }

    /// `ω · A`.
    pub fn rotate(&self, omega: u8) -> Self {
        let p = self.p as u8;
        Self { p: self.p, signs: self.signs.iter().map(|w| w.map(|w| (w + omega % p) % p)).collect() }
    }

    pub fn is_subface_of(&self, other: &SignedFace) -> bool {
        self.n() == other.n() && self.signs.iter().zip(&other.signs).all(|(a, b)| a.is_none() || a == b)
    }

    fn part_bits(&self) -> [u64; MAX_P] {
        let mut parts = [0u64; MAX_P];
        for (j, w) in self.signs.iter().enumerate() {
            if let Some(w) = w {
                parts[*w as usize] |= 1 << j;
            }
        }
        parts
    }
}

impl Serialize for SignedFace {
    /// As the list of `[ω, j]` pairs in ascending `j`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(u8, usize)> =
            self.signs.iter().enumerate().filter_map(|(j, w)| w.map(|w| (w, j + 1))).collect();
        pairs.serialize(s)
    }
}

/// Which vertex condition Case 1 uses: `P`-admissibility, or the tilde
/// excess bound `Σ max(|F ∩ P_j| - 1, 0) <= s'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TuckerVariant {
    Plain,
    Tilde,
}

impl From<TuckerVariant> for Variant {
    fn from(v: TuckerVariant) -> Self {
        match v {
            TuckerVariant::Plain => Variant::Plain,
            TuckerVariant::Tilde => Variant::Tilde,
        }
    }
}

/// A value of `λ`: the sign `λ_1 ∈ Z_p` and the index `λ_2 ∈ [m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Label {
    pub sign: u8,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaCase {
    /// Some vertex `F` has `F ⊆_{s'} A^i`.
    MemberFound,
    /// The smallest parts of `B` are not all of `Z_p`.
    UnequalParts,
    /// All parts of `B` equal; fewer than `p` signs in the first block.
    BlockSignsPartial,
    /// All parts of `B` equal; all `p` signs in the first block.
    BlockSignsFull,
}

/// One evaluation of `λ` with the facts the construction asserts about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub label: Label,
    pub case: LambdaCase,
    /// The order-least qualifying member, in the member case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<Subset>,
    /// False if the member case found `F ⊆_{s'} A^i` for two signs `i`.
    pub sign_unique: bool,
    /// False if the parts case produced `λ_2 > α`.
    pub index_within_alpha: bool,
}

/// Everything `λ` depends on.
#[derive(Debug, Clone)]
pub struct TuckerContext {
    family: Family,
    partition: Partition,
    s: usize,
    p: usize,
    variant: TuckerVariant,
    hypergraph: Hypergraph,
    coloring: Vec<u32>,
    t: usize,
    alpha: usize,
    // vertices in the complete order, with their colors
    members: Vec<(u64, u32)>,
    blocks: Vec<u64>,
}

impl TuckerContext {
    /// Builds `KG^p(F, P, s)` (or its tilde variant) and takes an optimal
    /// coloring from the exact solver when none is given.
    pub fn new(
        family: &Family,
        partition: &Partition,
        s: usize,
        p: usize,
        variant: TuckerVariant,
        coloring: Option<Vec<u32>>,
    ) -> Result<Self> {
        if !is_prime(p) || p > MAX_P {
            return invalid(format!("p must be a prime at most {MAX_P}, got {p}"));
        }
        if family.n() != partition.n() {
            return invalid(format!("family over [{}] but partition of [{}]", family.n(), partition.n()));
        }
        if let Some(m) = family.min_member_size() {
            if s >= m {
                return invalid(format!("s = {s} must be below every member size (smallest is {m})"));
            }
        }
        let hypergraph = build_kneser(family, partition, s, variant.into(), p)?;
        let coloring = match coloring {
            Some(c) => c,
            None => chi_exact(&hypergraph)?
                .coloring
                .ok_or_else(|| Error::Internal("solver returned no coloring".into()))?,
        };
        if !is_proper(&hypergraph, &coloring)? {
            return invalid("coloring is not proper");
        }
        if coloring.contains(&0) {
            return invalid("colors are numbered from 1");
        }
        let t = coloring.iter().copied().max().unwrap_or(0) as usize;
        let defect = ecd(family, p, s / 2)?;
        let alpha = family.n() - defect.value;
        let mut members: Vec<(u64, u32)> =
            hypergraph.vertices().iter().zip(&coloring).map(|(v, &c)| (v.bits(), c)).collect();
        members.sort_by(|a, b| cmp_bits(a.0, b.0));
        let blocks = partition.blocks().iter().map(Subset::bits).collect();
        Ok(Self {
            family: family.clone(),
            partition: partition.clone(),
            s,
            p,
            variant,
            hypergraph,
            coloring,
            t,
            alpha,
            members,
            blocks,
        })
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `s' = ⌊s/2⌋`.
    pub fn s_prime(&self) -> usize {
        self.s / 2
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `m = α + t`.
    pub fn m(&self) -> usize {
        self.alpha + self.t
    }

    pub fn variant(&self) -> TuckerVariant {
        self.variant
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn coloring(&self) -> &[u32] {
        &self.coloring
    }

    fn evaluate(&self, parts: &[u64; MAX_P]) -> Evaluation {
        let p = self.p;
        let sp = self.s_prime();
        for &(f, color) in &self.members {
            let mut signs = (0..p).filter(|&i| within_s_bits(f, parts[i], sp));
            if let Some(i) = signs.next() {
                return Evaluation {
                    label: Label { sign: i as u8, index: color as usize + self.alpha },
                    case: LambdaCase::MemberFound,
                    member: Some(Subset::from_bits_unchecked(self.n(), f)),
                    sign_unique: signs.next().is_none(),
                    index_within_alpha: true,
                };
            }
        }
        // B keeps the largest element of every (sign, block) cell, which makes
        // π_2(B) largest in the complete order.
        let mut b = [0u64; MAX_P];
        for i in 0..p {
            for &blk in &self.blocks {
                let cell = parts[i] & blk;
                if cell != 0 {
                    b[i] |= 1 << (63 - cell.leading_zeros());
                }
            }
        }
        let sizes: Vec<usize> = (0..p).map(|i| b[i].count_ones() as usize).collect();
        let least = *sizes.iter().min().expect("p >= 2");
        let smallest: Vec<usize> = (0..p).filter(|&i| sizes[i] == least).collect();
        let h = smallest.len();
        let index = p * least + p - h;
        let (sign, case) = if h < p {
            ((smallest.iter().sum::<usize>() * inverse_mod(h, p)) % p, LambdaCase::UnequalParts)
        } else {
            let support = b[..p].iter().fold(0, |acc, x| acc | x);
            let blk = *self.blocks.iter().find(|&&blk| blk & support != 0).expect("non-empty face");
            let signs: Vec<usize> = (0..p).filter(|&i| b[i] & blk != 0).collect();
            let k = signs.len();
            if k < p {
                ((signs.iter().sum::<usize>() * inverse_mod(k, p)) % p, LambdaCase::BlockSignsPartial)
            } else {
                let first = (0..p).min_by_key(|&i| (b[i] & blk).trailing_zeros()).expect("p >= 2");
                (first, LambdaCase::BlockSignsFull)
            }
        };
        Evaluation {
            label: Label { sign: sign as u8, index },
            case,
            member: None,
            sign_unique: true,
            index_within_alpha: index <= self.alpha,
        }
    }
}

/// `λ(A)` together with its case and the two runtime assertions.
pub fn evaluate_lambda(face: &SignedFace, ctx: &TuckerContext) -> Result<Evaluation> {
    if face.p() != ctx.p || face.n() != ctx.n() {
        return invalid(format!(
            "face over Z_{} x [{}] but context over Z_{} x [{}]",
            face.p(),
            face.n(),
            ctx.p,
            ctx.n()
        ));
    }
    if face.is_empty() {
        return invalid("λ is defined on non-empty faces only");
    }
    Ok(ctx.evaluate(&face.part_bits()))
}

/// `λ(A)`; fails if either assertion of the construction is violated.
pub fn lambda_map(face: &SignedFace, ctx: &TuckerContext) -> Result<Label> {
    let ev = evaluate_lambda(face, ctx)?;
    if !ev.sign_unique {
        return Err(Error::Internal(format!("two signs qualify in the member case at {face:?}")));
    }
    if !ev.index_within_alpha {
        return Err(Error::Internal(format!("λ_2 = {} exceeds α = {} at {face:?}", ev.label.index, ctx.alpha)));
    }
    Ok(ev.label)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// Faces, pairs or chain steps examined.
    pub checked: u64,
    /// The first offending faces (a face and its rotation, a pair, or a chain).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<SignedFace>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    pub member_found: u64,
    pub unequal_parts: u64,
    pub block_signs_partial: u64,
    pub block_signs_full: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssertionVerdict {
    pub sign_unique: bool,
    pub index_within_alpha: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<SignedFace>,
}

/// `α + (m - α)(p - 1) >= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs: usize,
    pub n: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TuckerReport {
    pub p: usize,
    pub n: usize,
    pub s: usize,
    pub s_prime: usize,
    pub variant: TuckerVariant,
    pub alpha: usize,
    pub t: usize,
    pub m: usize,
    pub coloring: Vec<u32>,
    pub faces: u64,
    pub cases: CaseCounts,
    pub assertions: AssertionVerdict,
    pub equivariance: ConditionVerdict,
    pub pairs: ConditionVerdict,
    pub chains: ConditionVerdict,
    pub inequality: Inequality,
    /// Every condition, assertion and the inequality hold.
    pub all_hold: bool,
}

/// Checks `λ` itself.
pub fn check_tucker_conditions(ctx: &TuckerContext, max_faces: u64) -> Result<TuckerReport> {
    check_labeling(ctx, max_faces, |face| evaluate_lambda(face, ctx))
}

/// Checks an arbitrary labeling against the three Tucker conditions. Labels
/// must have `index` in `[1, m]`.
pub fn check_labeling<L>(ctx: &TuckerContext, max_faces: u64, label: L) -> Result<TuckerReport>
where
    L: Fn(&SignedFace) -> Result<Evaluation>,
{
    let (p, n) = (ctx.p, ctx.n());
    let base = p as u64 + 1;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(base).filter(|&v| v <= max_faces));
    let Some(total) = total else {
        return Err(Error::Resource(format!("(p+1)^n = {base}^{n} faces exceeds the cap of {max_faces}")));
    };
    let pow: Vec<u64> = (0..n).map(|j| base.pow(j as u32)).collect();
    let face = |code: u64| SignedFace::from_code(p, n, code);

    let mut labels = vec![Label { sign: 0, index: 0 }; total as usize];
    let mut cases = CaseCounts::default();
    let mut assertions = AssertionVerdict { sign_unique: true, index_within_alpha: true, first_failure: None };
    for code in 1..total {
        let f = face(code);
        let ev = label(&f)?;
        if ev.label.index == 0 || ev.label.index > ctx.m() || ev.label.sign as usize >= p {
            return invalid(format!("label {:?} outside Z_{p} x [{}]", ev.label, ctx.m()));
        }
        match ev.case {
            LambdaCase::MemberFound => cases.member_found += 1,
            LambdaCase::UnequalParts => cases.unequal_parts += 1,
            LambdaCase::BlockSignsPartial => cases.block_signs_partial += 1,
            LambdaCase::BlockSignsFull => cases.block_signs_full += 1,
        }
        if !(ev.sign_unique && ev.index_within_alpha) && assertions.first_failure.is_none() {
            assertions.first_failure = Some(f.clone());
        }
        assertions.sign_unique &= ev.sign_unique;
        assertions.index_within_alpha &= ev.index_within_alpha;
        labels[code as usize] = ev.label;
    }

    // Rotating every sign by ω maps digit d > 0 to ((d - 1 + ω) mod p) + 1.
    let rotate = |code: u64, w: u64| -> u64 {
        (0..n).fold(0, |acc, j| {
            let d = code / pow[j] % base;
            if d == 0 {
                acc
            } else {
                acc + ((d - 1 + w) % p as u64 + 1) * pow[j]
            }
        })
    };
    let mut equivariance = ConditionVerdict { holds: true, checked: 0, counterexample: None };
    'eq: for code in 1..total {
        let l = labels[code as usize];
        for w in 1..p as u64 {
            equivariance.checked += 1;
            let r = rotate(code, w);
            let lr = labels[r as usize];
            if lr.index != l.index || lr.sign as u64 != (l.sign as u64 + w) % p as u64 {
                equivariance.holds = false;
                equivariance.counterexample = Some(vec![face(code), face(r)]);
                break 'eq;
            }
        }
    }

    // Proper non-empty subfaces of `code`, via subsets of its support.
    let subfaces = |code: u64| -> Vec<u64> {
        let digits: Vec<(u64, u64)> =
            (0..n).filter_map(|j| Some(code / pow[j] % base).filter(|&d| d > 0).map(|d| (d, pow[j]))).collect();
        let full = (1u64 << digits.len()) - 1;
        (1..full)
            .map(|mask| {
                digits.iter().enumerate().filter(|(x, _)| mask >> x & 1 == 1).map(|(_, (d, pw))| d * pw).sum()
            })
            .collect()
    };

    let alpha = ctx.alpha;
    let mut pairs = ConditionVerdict { holds: true, checked: 0, counterexample: None };
    let mut chains = ConditionVerdict { holds: true, checked: 0, counterexample: None };
    // reach[A]: bit M is set when a chain ending at A, with all indices equal
    // to λ_2(A) > α, carries exactly the distinct signs M.
    let full_mask = (1usize << p) - 1;
    let mut reach = vec![0u128; total as usize];
    let mut chain_end = None;
    for code in 1..total {
        let l = labels[code as usize];
        let subs = subfaces(code);
        if l.index <= alpha {
            if pairs.holds {
                for &sub in &subs {
                    let ls = labels[sub as usize];
                    if ls.index == l.index {
                        pairs.checked += 1;
                        if ls.sign != l.sign {
                            pairs.holds = false;
                            pairs.counterexample = Some(vec![face(sub), face(code)]);
                            break;
                        }
                    }
                }
            }
            continue;
        }
        if !chains.holds {
            continue;
        }
        let own = 1usize << l.sign;
        let mut here = 1u128 << own;
        for &sub in &subs {
            if labels[sub as usize].index != l.index {
                continue;
            }
            chains.checked += 1;
            let mut from = reach[sub as usize];
            while from != 0 {
                let m = from.trailing_zeros() as usize;
                from &= from - 1;
                if m & own == 0 {
                    here |= 1u128 << (m | own);
                }
            }
        }
        reach[code as usize] = here;
        if here >> full_mask & 1 == 1 {
            chains.holds = false;
            chain_end = Some(code);
        }
    }
    if let Some(end) = chain_end {
        let mut chain = vec![end];
        let mut mask = full_mask;
        let mut cur = end;
        loop {
            mask &= !(1usize << labels[cur as usize].sign);
            if mask == 0 {
                break;
            }
            let idx = labels[cur as usize].index;
            cur = subfaces(cur)
                .into_iter()
                .find(|&sub| labels[sub as usize].index == idx && reach[sub as usize] >> mask & 1 == 1)
                .expect("reachable mask has a predecessor");
            chain.push(cur);
        }
        chain.reverse();
        chains.counterexample = Some(chain.into_iter().map(face).collect());
    }

    let lhs = alpha + ctx.t * (p - 1);
    let inequality = Inequality { lhs, n, holds: lhs >= n };
    let all_hold = equivariance.holds
        && pairs.holds
        && chains.holds
        && assertions.sign_unique
        && assertions.index_within_alpha
        && inequality.holds;
    Ok(TuckerReport {
        p,
        n,
        s: ctx.s,
        s_prime: ctx.s_prime(),
        variant: ctx.variant,
        alpha,
        t: ctx.t,
        m: ctx.m(),
        coloring: ctx.coloring.clone(),
        faces: total - 1,
        cases,
        assertions,
        equivariance,
        pairs,
        chains,
        inequality,
        all_hold,
    })
}
