//! Equitable colorability defects `ecd^r(F, s)` and `ecd_S^r(F)`.
//!
//! Both are computed by exhaustive search with witnesses. For `ecd` the search
//! ascends over the size `d` of the removed set `X_0`: if `(X_0, X_1..X_r)` is
//! avoiding, moving one element of a largest part into `X_0` keeps it equitable
//! and avoiding, so feasibility is monotone in `d` and the first feasible `d` is
//! the minimum. `ecd_S` descends over the total size `T` of the parts for the
//! same reason.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::families::{low_mask, within_s_bits, Family, Subset};
use crate::shard::{first_in_order, Cancel, ShardOutcome};

/// Default ground-set cap for the exhaustive `ecd` search.
pub const DEFAULT_MAX_N: usize = 16;
/// Default cap on `n̄ = Σ s_i` for the `ecd_S` search.
pub const DEFAULT_MAX_N_BAR: usize = 14;

const FRONTIER_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectKind {
    Ecd,
    EcdS,
}

/// A defect value with the partition certifying it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectResult {
    pub kind: DefectKind,
    pub value: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    /// The removed set; absent for `ecd_S`, whose parts may share elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_x0: Option<Subset>,
    /// `r` parts ordered by minimum element, empty parts last.
    pub witness_parts: Vec<Subset>,
    /// Search nodes visited; independent of the worker count.
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct DefectOptions {
    pub max_n: usize,
    pub max_n_bar: usize,
    pub parallel: bool,
}

impl Default for DefectOptions {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N, max_n_bar: DEFAULT_MAX_N_BAR, parallel: false }
    }
}

/// `ecd^r(F, s)` with default options.
pub fn ecd(f: &Family, r: usize, s: usize) -> Result<DefectResult> {
    ecd_with(f, r, s, &DefectOptions::default())
}

pub fn ecd_with(f: &Family, r: usize, s: usize, opts: &DefectOptions) -> Result<DefectResult> {
    let n = f.n();
    if r < 2 {
        return invalid(format!("r must be at least 2, got {r}"));
    }
    if n > opts.max_n {
        return Err(Error::Resource(format!(
            "exhaustive defect search is capped at n <= {}, got n = {n}",
            opts.max_n
        )));
    }
    if let Some(m) = f.min_member_size() {
        if m <= s {
            return invalid(format!(
                "a member of size {m} is {s}-nearly inside every set, so no partition avoids it"
            ));
        }
    }
    let space = EcdSpace::new(f, r, s);
    let mut nodes = 0;
    for d in 0..=n {
        let (found, used) = space.solve(d, opts.parallel);
        nodes += used;
        if let Some((x0, parts)) = found {
            return Ok(DefectResult {
                kind: DefectKind::Ecd,
                value: d,
                r,
                s: Some(s),
                weights: None,
                witness_x0: Some(Subset::from_bits_unchecked(n, x0)),
                witness_parts: canonical_parts(n, parts),
                nodes,
            });
        }
    }
    Err(Error::Internal("no avoiding partition even with X0 = [n]".into()))
}

fn canonical_parts(n: usize, mut parts: Vec<u64>) -> Vec<Subset> {
    parts.sort_by_key(|&p| if p == 0 { u32::MAX } else { p.trailing_zeros() });
    parts.into_iter().map(|p| Subset::from_bits_unchecked(n, p)).collect()
}

struct EcdSpace {
    n: usize,
    r: usize,
    s: usize,
    // members containing element e (zero-based bit)
    containing: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    X0,
    Part(u8),
}

#[derive(Clone)]
struct EcdState<'a> {
    sp: &'a EcdSpace,
    d: usize,
    q: usize,
    rem: usize,
    x0: u64,
    parts: Vec<u64>,
    open: usize,
    big: usize,
    nodes: u64,
}

impl EcdSpace {
    fn new(f: &Family, r: usize, s: usize) -> Self {
        let n = f.n();
        let bits = f.member_bits();
        let containing = (0..n).map(|e| bits.iter().copied().filter(|b| b >> e & 1 == 1).collect()).collect();
        Self { n, r, s, containing }
    }

    fn state(&self, d: usize) -> EcdState<'_> {
        let rest = self.n - d;
        EcdState {
            sp: self,
            d,
            q: rest / self.r,
            rem: rest % self.r,
            x0: 0,
            parts: vec![0; self.r],
            open: 0,
            big: 0,
            nodes: 0,
        }
    }

    /// Finds the first avoiding partition with `|X_0| = d` in search order.
    #[allow(clippy::type_complexity)]
    fn solve(&self, d: usize, parallel: bool) -> (Option<(u64, Vec<u64>)>, u64) {
        let mut root = self.state(d);
        let mut shards = Vec::new();
        root.frontier(0, FRONTIER_DEPTH.min(self.n), &mut Vec::new(), &mut shards);
        let head = root.nodes;
        let (hit, nodes) = first_in_order(&shards, parallel, |path: &Vec<Choice>, cancel: &dyn Cancel| {
            let mut st = self.state(d);
            for (e, &c) in path.iter().enumerate() {
                st.apply(e, c);
            }
            st.nodes = 0;
            match st.search(path.len(), cancel) {
                Some(true) => (ShardOutcome::Found((st.x0, st.parts.clone())), st.nodes),
                Some(false) => (ShardOutcome::Exhausted, st.nodes),
                None => (ShardOutcome::Budget, st.nodes),
            }
        });
        let found = match hit {
            Some((_, ShardOutcome::Found(w))) => Some(w),
            _ => None,
        };
        (found, head + nodes)
    }
}

impl EcdState<'_> {
    fn choices(&self, e: usize) -> Vec<Choice> {
        let mut out = Vec::with_capacity(self.r() + 1);
        if (self.x0.count_ones() as usize) < self.d {
            out.push(Choice::X0);
        }
        let bit = 1u64 << e;
        let limit = (self.open + 1).min(self.r());
        for i in 0..limit {
            let size = self.parts[i].count_ones() as usize;
            let fits = size < self.q || (size == self.q && self.big < self.rem);
            if !fits {
                continue;
            }
            let grown = self.parts[i] | bit;
            // Parts only grow, so a member already s-nearly inside one stays there.
            if self.sp.containing[e].iter().any(|&m| within_s_bits(m, grown, self.sp.s)) {
                continue;
            }
            out.push(Choice::Part(i as u8));
        }
        out
    }

    fn r(&self) -> usize {
        self.sp.r
    }

    fn apply(&mut self, e: usize, c: Choice) {
        self.nodes += 1;
        match c {
            Choice::X0 => self.x0 |= 1 << e,
            Choice::Part(i) => {
                let i = i as usize;
                if i == self.open {
                    self.open += 1;
                }
                if self.parts[i].count_ones() as usize == self.q {
                    self.big += 1;
                }
                self.parts[i] |= 1 << e;
            }
        }
    }

    fn undo(&mut self, e: usize, c: Choice) {
        match c {
            Choice::X0 => self.x0 &= !(1 << e),
            Choice::Part(i) => {
                let i = i as usize;
                self.parts[i] &= !(1 << e);
                if self.parts[i].count_ones() as usize == self.q {
                    self.big -= 1;
                }
                if self.parts[i] == 0 && i + 1 == self.open {
                    self.open -= 1;
                }
            }
        }
    }

    fn frontier(&mut self, e: usize, depth: usize, path: &mut Vec<Choice>, out: &mut Vec<Vec<Choice>>) {
        if e == depth {
            out.push(path.clone());
            return;
        }
        for c in self.choices(e) {
            self.apply(e, c);
            path.push(c);
            self.frontier(e + 1, depth, path, out);
            path.pop();
            self.undo(e, c);
        }
    }

    /// `Some(true)` leaves the witness in place.
    fn search(&mut self, e: usize, cancel: &dyn Cancel) -> Option<bool> {
        if e == self.sp.n {
            return Some(true);
        }
        if self.nodes & 0xfff == 0 && cancel.cancelled() {
            return None;
        }
        for c in self.choices(e) {
            self.apply(e, c);
            match self.search(e + 1, cancel) {
                Some(false) => self.undo(e, c),
                other => return other,
            }
        }
        Some(false)
    }
}

/// Checks that `X_0, X_1..X_r` is an equitable partition of `[n]` with no member
/// `F` satisfying `F ⊆_s X_i`. Inputs that do not partition `[n]` are rejected.
pub fn is_avoiding_partition(x0: &Subset, parts: &[Subset], f: &Family, s: usize) -> Result<bool> {
    let n = f.n();
    let mut seen = x0.bits();
    if x0.ground() != n {
        return invalid("X0 is over a different ground set");
    }
    for p in parts {
        if p.ground() != n {
            return invalid("a part is over a different ground set");
        }
        if seen & p.bits() != 0 {
            return invalid("parts overlap");
        }
        seen |= p.bits();
    }
    if seen != low_mask(n) {
        return invalid("X0 and the parts do not cover [n]");
    }
    if !is_equitable(parts) {
        return Ok(false);
    }
    let members = f.member_bits();
    Ok(parts.iter().all(|p| !members.iter().any(|&m| within_s_bits(m, p.bits(), s))))
}

fn is_equitable(parts: &[Subset]) -> bool {
    let sizes = parts.iter().map(Subset::len);
    match (sizes.clone().min(), sizes.max()) {
        (Some(lo), Some(hi)) => hi - lo <= 1,
        _ => true,
    }
}

/// `ecd_S^r(F)` with default options.
pub fn ecd_s_disjoint(f: &Family, r: usize, weights: &[u32]) -> Result<DefectResult> {
    ecd_s_disjoint_with(f, r, weights, &DefectOptions::default())
}

/// `n̄ − max Σ|A_i|` over equitable `S`-disjoint multisets `{A_1..A_r}` of subsets
/// of `[n]` with no member inside any `A_i`. Empty `A_i` are allowed.
pub fn ecd_s_disjoint_with(f: &Family, r: usize, weights: &[u32], opts: &DefectOptions) -> Result<DefectResult> {
    let n = f.n();
    if r < 2 {
        return invalid(format!("r must be at least 2, got {r}"));
    }
    if r > 32 {
        return invalid("r above 32 is not supported by the S-disjoint search");
    }
    if weights.len() != n {
        return invalid(format!("{} weights given for a ground set of size {n}", weights.len()));
    }
    if let Some(w) = weights.iter().find(|&&w| w as usize > r) {
        return invalid(format!("weight {w} exceeds r = {r}"));
    }
    let n_bar: usize = weights.iter().map(|&w| w as usize).sum();
    if n_bar > opts.max_n_bar {
        return Err(Error::Resource(format!(
            "S-disjoint defect search is capped at n̄ <= {}, got {n_bar}",
            opts.max_n_bar
        )));
    }
    let members = f.member_bits();
    let containing: Vec<Vec<u64>> =
        (0..n).map(|e| members.iter().copied().filter(|b| b >> e & 1 == 1).collect()).collect();
    let mut suffix = vec![0usize; n + 1];
    for e in (0..n).rev() {
        suffix[e] = suffix[e + 1] + weights[e] as usize;
    }
    let search = SDisjoint { n, r, weights, containing: &containing, suffix: &suffix };
    let mut nodes = 0;
    for total in (0..=n_bar).rev() {
        let mut st = SState { parts: vec![0; r], split: 1, total: 0, big: 0 };
        let (q, rem) = (total / r, total % r);
        if let Some(parts) = search.run(&mut st, 0, total, q, rem, &mut nodes) {
            let mut parts = parts;
            parts.sort_by_key(|&p| if p == 0 { u32::MAX } else { p.trailing_zeros() });
            return Ok(DefectResult {
                kind: DefectKind::EcdS,
                value: n_bar - total,
                r,
                s: None,
                weights: Some(weights.to_vec()),
                witness_x0: None,
                witness_parts: parts.into_iter().map(|p| Subset::from_bits_unchecked(n, p)).collect(),
                nodes,
            });
        }
    }
    Err(Error::Internal("the all-empty family is always feasible".into()))
}

struct SDisjoint<'a> {
    n: usize,
    r: usize,
    weights: &'a [u32],
    containing: &'a [Vec<u64>],
    suffix: &'a [usize],
}

#[derive(Clone)]
struct SState {
    parts: Vec<u64>,
    // bit i set: part i starts a class of parts identical so far
    split: u32,
    total: usize,
    big: usize,
}

impl SDisjoint<'_> {
    fn run(&self, st: &mut SState, e: usize, target: usize, q: usize, rem: usize, nodes: &mut u64) -> Option<Vec<u64>> {
        if st.total + self.suffix[e] < target {
            return None;
        }
        if e == self.n {
            return (st.total == target).then(|| st.parts.clone());
        }
        let classes: Vec<(usize, usize)> = {
            let mut v = Vec::new();
            let mut start = 0;
            for i in 1..=self.r {
                if i == self.r || st.split >> i & 1 == 1 {
                    v.push((start, i));
                    start = i;
                }
            }
            v
        };
        // Within a class of identical parts only a prefix may receive the element.
        let mut takes = vec![0usize; classes.len()];
        loop {
            let used: usize = takes.iter().sum();
            if used <= self.weights[e] as usize {
                if let Some(next) = self.place(st, e, &classes, &takes, q, rem) {
                    *nodes += 1;
                    let mut child = next;
                    if let Some(w) = self.run(&mut child, e + 1, target, q, rem, nodes) {
                        return Some(w);
                    }
                }
            }
            // odometer, last class fastest
            let mut i = classes.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                let (a, b) = classes[i];
                if takes[i] < b - a {
                    takes[i] += 1;
                    break;
                }
                takes[i] = 0;
            }
        }
    }

    fn place(&self, st: &SState, e: usize, classes: &[(usize, usize)], takes: &[usize], q: usize, rem: usize) -> Option<SState> {
        let mut next = st.clone();
        let bit = 1u64 << e;
        for (&(a, b), &j) in classes.iter().zip(takes) {
            for i in a..a + j {
                let size = next.parts[i].count_ones() as usize;
                if size == q {
                    if next.big == rem {
                        return None;
                    }
                    next.big += 1;
                } else if size > q {
                    return None;
                }
                let grown = next.parts[i] | bit;
                if self.containing[e].iter().any(|&m| m & !grown == 0) {
                    return None;
                }
                next.parts[i] = grown;
                next.total += 1;
            }
            if j > 0 && j < b - a {
                next.split |= 1 << (a + j);
            }
        }
        Some(next)
    }
}

/// Checks an `ecd_S` witness: equitable, `S`-disjoint and member-free parts.
pub fn is_s_disjoint_avoiding(parts: &[Subset], f: &Family, weights: &[u32]) -> Result<bool> {
    let n = f.n();
    if weights.len() != n {
        return invalid("weight vector length differs from the ground set");
    }
    if parts.iter().any(|p| p.ground() != n) {
        return invalid("a part is over a different ground set");
    }
    let covered = (0..n).all(|e| parts.iter().filter(|p| p.bits() >> e & 1 == 1).count() <= weights[e] as usize);
    let members = f.member_bits();
    let free = parts.iter().all(|p| !members.iter().any(|&m| m & !p.bits() == 0));
    Ok(covered && free && is_equitable(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate_family, FamilySpec};

    fn ks(n: usize, k: usize) -> Family {
        enumerate_family(&FamilySpec::KSubsets { n, k }).unwrap()
    }

    fn set(n: usize, e: &[usize]) -> Subset {
        Subset::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn ksubset_examples() {
        assert_eq!(ecd(&ks(7, 3), 2, 0).unwrap().value, 3);
        assert_eq!(ecd(&ks(6, 2), 2, 1).unwrap().value, 6);
        let empty = ecd(&Family::empty(5).unwrap(), 3, 0).unwrap();
        assert_eq!(empty.value, 0);
        assert_eq!(empty.witness_parts.iter().map(Subset::len).collect::<Vec<_>>(), vec![2, 2, 1]);
    }

    #[test]
    fn witnesses_are_valid_and_least() {
        let f = ks(7, 3);
        let res = ecd(&f, 2, 0).unwrap();
        let x0 = res.witness_x0.unwrap();
        assert!(is_avoiding_partition(&x0, &res.witness_parts, &f, 0).unwrap());
        // X0 first in search order is the lexicographically least 3-set.
        assert_eq!(x0.to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = ks(9, 3);
        let seq = ecd(&f, 3, 1).unwrap();
        let opts = DefectOptions { parallel: true, ..DefectOptions::default() };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let par = pool.install(|| ecd_with(&f, 3, 1, &opts).unwrap());
        assert_eq!(seq, par);
    }

    #[test]
    fn avoiding_partition_examples() {
        let f = ks(4, 2);
        assert!(!is_avoiding_partition(&Subset::empty(4), &[set(4, &[1, 2]), set(4, &[3, 4])], &f, 0).unwrap());
        assert!(is_avoiding_partition(&set(4, &[3, 4]), &[set(4, &[1]), set(4, &[2])], &f, 0).unwrap());
        assert!(is_avoiding_partition(&set(4, &[3]), &[set(4, &[1]), set(4, &[2])], &f, 0).is_err());
        assert!(is_avoiding_partition(&set(4, &[3, 4]), &[set(4, &[1, 3]), set(4, &[2])], &f, 0).is_err());
    }

    #[test]
    fn caps_and_degenerate_inputs() {
        assert!(matches!(ecd(&ks(17, 2), 2, 0), Err(Error::Resource(_))));
        assert!(ecd(&ks(5, 2), 2, 2).is_err());
        assert!(ecd(&ks(5, 2), 1, 0).is_err());
    }

    #[test]
    fn s_disjoint_examples() {
        let f = ks(5, 2);
        for r in [2, 3] {
            let a = ecd_s_disjoint(&f, r, &[1; 5]).unwrap();
            assert_eq!(a.value, ecd(&f, r, 0).unwrap().value);
            assert!(is_s_disjoint_avoiding(&a.witness_parts, &f, &[1; 5]).unwrap());
        }
        let single = Family::explicit(1, vec![vec![1]]).unwrap();
        for r in [2, 3] {
            assert_eq!(ecd_s_disjoint(&single, r, &[r as u32]).unwrap().value, r);
        }
        let g = Family::explicit(3, vec![vec![1, 2], vec![3]]).unwrap();
        let w = [2, 2, 1];
        let res = ecd_s_disjoint(&g, 2, &w).unwrap();
        assert!(is_s_disjoint_avoiding(&res.witness_parts, &g, &w).unwrap());
        // every part avoids 3 and cannot hold both 1 and 2
        assert_eq!(res.value, 5 - 2);
    }

    fn brute_s_disjoint(f: &Family, r: usize, w: &[u32]) -> usize {
        // all r-tuples of subsets, ordered, checked against the definition
        let n = f.n();
        let members = f.member_bits();
        let n_bar: usize = w.iter().map(|&x| x as usize).sum();
        let subsets: Vec<u64> =
            (0..1u64 << n).filter(|&a| !members.iter().any(|&m| m & !a == 0)).collect();
        let mut best = 0;
        let mut idx = vec![0usize; r];
        loop {
            let parts: Vec<u64> = idx.iter().map(|&i| subsets[i]).collect();
            let sizes: Vec<usize> = parts.iter().map(|p| p.count_ones() as usize).collect();
            let eq = sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1;
            let cover = (0..n).all(|e| parts.iter().filter(|&&p| p >> e & 1 == 1).count() <= w[e] as usize);
            if eq && cover {
                best = best.max(sizes.iter().sum());
            }
            let mut i = 0;
            loop {
                if i == r {
                    return n_bar - best;
                }
                idx[i] += 1;
                if idx[i] < subsets.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn s_disjoint_matches_brute_force() {
        let fams = [
            Family::explicit(3, vec![vec![1, 2], vec![3]]).unwrap(),
            Family::explicit(4, vec![vec![1, 2], vec![2, 3], vec![4]]).unwrap(),
            Family::explicit(4, vec![vec![1, 2, 3]]).unwrap(),
            ks(4, 2),
        ];
        for f in &fams {
            for w in [vec![1u32; f.n()], vec![2; f.n()], (0..f.n()).map(|i| 1 + (i % 2) as u32).collect()] {
                let got = ecd_s_disjoint(f, 2, &w).unwrap();
                assert_eq!(got.value, brute_s_disjoint(f, 2, &w), "{f:?} {w:?}");
                assert!(is_s_disjoint_avoiding(&got.witness_parts, f, &w).unwrap());
            }
        }
    }

    fn brute_ecd(f: &Family, r: usize, s: usize) -> usize {
        // assign each element a label in 0..=r (0 = X0), check every labeling
        let n = f.n();
        let members = f.member_bits();
        let mut best = n;
        let total = (r + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut parts = vec![0u64; r];
            let mut x0 = 0;
            for e in 0..n {
                let l = c % (r + 1);
                c /= r + 1;
                if l == 0 {
                    x0 += 1;
                } else {
                    parts[l - 1] |= 1 << e;
                }
            }
            let sizes: Vec<u32> = parts.iter().map(|p| p.count_ones()).collect();
            if sizes.iter().max().unwrap() - sizes.iter().min().unwrap() > 1 {
                continue;
            }
            if parts.iter().all(|&p| !members.iter().any(|&m| (m & !p).count_ones() as usize <= s)) {
                best = best.min(x0);
            }
        }
        best
    }

    #[test]
    fn ecd_matches_labeling_brute_force() {
        let fams = [
            ks(5, 2),
            ks(6, 3),
            Family::explicit(5, vec![vec![1, 2], vec![3, 4, 5], vec![2, 5]]).unwrap(),
            enumerate_family(&FamilySpec::TWide { n: 6, k: 2, t: 2 }).unwrap(),
        ];
        for f in &fams {
            for r in [2, 3] {
                for s in 0..f.min_member_size().unwrap() {
                    let got = ecd(f, r, s).unwrap();
                    assert_eq!(got.value, brute_ecd(f, r, s), "{f:?} r={r} s={s}");
                    let x0 = got.witness_x0.unwrap();
                    assert!(is_avoiding_partition(&x0, &got.witness_parts, f, s).unwrap());
                }
            }
        }
    }
}
