//! Exact chromatic numbers of uniform hypergraphs.
//!
//! A coloring is proper when no edge has all of its distinct members in one
//! color. The exact solver iterates the number of colors `t` upwards from a
//! lower bound and decides `t`-colorability by a DSATUR-style backtracking search
//! generalized to hypergraphs: an edge whose members are all colored `c` except
//! one vertex `u` forbids `c` at `u`, and a vertex's saturation is the number of
//! its forbidden colors. A new color may only be introduced as `max + 1`.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::shard::{first_in_order, Cancel, ShardOutcome};

pub const DEFAULT_MAX_VERTICES: usize = 120;
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000_000;

const FRONTIER_DEPTH: usize = 5;
const CLIQUE_NODE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChromaticNumber {
    Finite(usize),
    Infinite,
}

impl ChromaticNumber {
    pub fn finite(&self) -> Option<usize> {
        match *self {
            ChromaticNumber::Finite(v) => Some(v),
            ChromaticNumber::Infinite => None,
        }
    }

    /// `self >= bound`, with infinity above every integer.
    pub fn at_least(&self, bound: i64) -> bool {
        match *self {
            ChromaticNumber::Finite(v) => v as i64 >= bound,
            ChromaticNumber::Infinite => true,
        }
    }
}

impl fmt::Display for ChromaticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChromaticNumber::Finite(v) => write!(f, "{v}"),
            ChromaticNumber::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for ChromaticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ChromaticNumber::Finite(v) => s.serialize_u64(v as u64),
            ChromaticNumber::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// How the starting lower bound was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    /// `trivial`, `edge`, `clique` or `hyperclique`.
    pub source: String,
    /// Vertices of the clique or hyperclique, when one was used.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<u32>,
}

/// A color count that exhaustive search ruled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub colors: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticResult {
    pub value: ChromaticNumber,
    /// Colors in `1..=value`, one per vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    pub lower_bound: LowerBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub greedy_upper: Option<usize>,
    /// Every `t` below `value` not covered by the lower bound, with search effort.
    pub refuted: Vec<Refutation>,
}

#[derive(Debug, Clone, Copy)]
pub struct ChiOptions {
    pub max_vertices: usize,
    pub node_limit: u64,
    pub parallel: bool,
}

impl Default for ChiOptions {
    fn default() -> Self {
        Self { max_vertices: DEFAULT_MAX_VERTICES, node_limit: DEFAULT_NODE_LIMIT, parallel: false }
    }
}

/// Edges reduced to their sets of distinct members, deduplicated.
struct Constraints {
    nv: usize,
    edges: Vec<Vec<u32>>,
    incident: Vec<Vec<u32>>,
    has_loop: bool,
}

impl Constraints {
    fn new(h: &Hypergraph) -> Self {
        let nv = h.vertex_count();
        let mut set = HashSet::new();
        let mut edges = Vec::new();
        let mut has_loop = false;
        for e in h.edges() {
            let mut d = e.clone();
            d.dedup();
            has_loop |= d.len() == 1;
            if set.insert(d.clone()) {
                edges.push(d);
            }
        }
        let mut incident = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incident[v as usize].push(i as u32);
            }
        }
        Self { nv, edges, incident, has_loop }
    }
}

/// True iff no edge is monochromatic. Multiset edges count their distinct
/// members, so a loop edge is never properly colored.
pub fn is_proper(h: &Hypergraph, coloring: &[u32]) -> Result<bool> {
    if coloring.len() != h.vertex_count() {
        return invalid(format!(
            "coloring covers {} vertices, hypergraph has {}",
            coloring.len(),
            h.vertex_count()
        ));
    }
    Ok(h.edges().iter().all(|e| {
        let c = coloring[e[0] as usize];
        e.iter().any(|&v| coloring[v as usize] != c)
    }))
}

/// Sequential greedy coloring in descending-degree order (ties by index).
/// Returns the number of colors used and the coloring.
pub fn greedy_upper(h: &Hypergraph) -> (ChromaticNumber, Option<Vec<u32>>) {
    let c = Constraints::new(h);
    if c.has_loop {
        return (ChromaticNumber::Infinite, None);
    }
    let col = greedy(&c);
    let used = col.iter().copied().max().unwrap_or(0) as usize;
    (ChromaticNumber::Finite(used), Some(col))
}

fn greedy(c: &Constraints) -> Vec<u32> {
    let mut order: Vec<usize> = (0..c.nv).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(c.incident[v].len()), v));
    let mut col = vec![0u32; c.nv];
    let mut banned = Vec::new();
    for v in order {
        banned.clear();
        for &e in &c.incident[v] {
            let e = &c.edges[e as usize];
            let mut mono = None;
            let mut ok = true;
            for &u in e {
                if u as usize == v {
                    continue;
                }
                let cu = col[u as usize];
                if cu == 0 || mono.is_some_and(|m| m != cu) {
                    ok = false;
                    break;
                }
                mono = Some(cu);
            }
            if ok {
                if let Some(m) = mono {
                    banned.push(m);
                }
            }
        }
        let mut pick = 1;
        while banned.contains(&pick) {
            pick += 1;
        }
        col[v] = pick;
    }
    col
}

/// Exact chromatic number with default options.
pub fn chi_exact(h: &Hypergraph) -> Result<ChromaticResult> {
    chi_exact_with(h, &ChiOptions::default())
}

pub fn chi_exact_with(h: &Hypergraph, opts: &ChiOptions) -> Result<ChromaticResult> {
    match chi_bounded(h, opts)? {
        ChiOutcome::Exact(res) => Ok(res),
        ChiOutcome::Bounded(b) => Err(Error::Resource(format!(
            "node limit {} reached deciding {} colors (chromatic number in {}..={})",
            opts.node_limit, b.lower, b.lower, b.upper
        ))),
    }
}

/// What the search proved before its node budget ran out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialChi {
    /// Certified: no proper coloring with fewer colors exists.
    pub lower: usize,
    /// Colors used by the greedy coloring.
    pub upper: usize,
    pub lower_bound: LowerBound,
    pub refuted: Vec<Refutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiOutcome {
    Exact(ChromaticResult),
    Bounded(PartialChi),
}

/// Like [`chi_exact_with`], but a node budget running out yields the bounds
/// established so far instead of an error.
pub fn chi_bounded(h: &Hypergraph, opts: &ChiOptions) -> Result<ChiOutcome> {
    let c = Constraints::new(h);
    if c.has_loop {
        return Ok(ChiOutcome::Exact(ChromaticResult {
            value: ChromaticNumber::Infinite,
            coloring: None,
            lower_bound: LowerBound { value: 0, source: "loop".into(), vertices: vec![] },
            greedy_upper: None,
            refuted: vec![],
        }));
    }
    if c.nv > opts.max_vertices {
        return Err(Error::Resource(format!(
            "exact coloring is capped at {} vertices, hypergraph has {}",
            opts.max_vertices, c.nv
        )));
    }
    let trivial = |v: usize| LowerBound { value: v, source: "trivial".into(), vertices: vec![] };
    if c.nv == 0 {
        return Ok(ChiOutcome::Exact(ChromaticResult {
            value: ChromaticNumber::Finite(0),
            coloring: Some(vec![]),
            lower_bound: trivial(0),
            greedy_upper: Some(0),
            refuted: vec![],
        }));
    }
    if c.edges.is_empty() {
        return Ok(ChiOutcome::Exact(ChromaticResult {
            value: ChromaticNumber::Finite(1),
            coloring: Some(vec![1; c.nv]),
            lower_bound: trivial(1),
            greedy_upper: Some(1),
            refuted: vec![],
        }));
    }
    let greedy_col = greedy(&c);
    let ub = greedy_col.iter().copied().max().unwrap_or(1) as usize;
    let lb = lower_bound(&c, h.r());
    let mut refuted = Vec::new();
    for t in lb.value..=ub {
        match search_colors(&c, t, opts) {
            Ok((Some(col), _)) => {
                return Ok(ChiOutcome::Exact(ChromaticResult {
                    value: ChromaticNumber::Finite(t),
                    coloring: Some(col),
                    lower_bound: lb,
                    greedy_upper: Some(ub),
                    refuted,
                }));
            }
            Ok((None, nodes)) => refuted.push(Refutation { colors: t, nodes }),
            Err(Error::Resource(_)) => {
                return Ok(ChiOutcome::Bounded(PartialChi { lower: t, upper: ub, lower_bound: lb, refuted }));
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal(format!("search refuted the greedy bound of {ub} colors")))
}

/// Decides `t`-colorability; returns the first proper coloring in search order.
pub fn find_coloring(h: &Hypergraph, t: usize, opts: &ChiOptions) -> Result<(Option<Vec<u32>>, u64)> {
    let c = Constraints::new(h);
    if c.has_loop {
        return Ok((None, 0));
    }
    if c.nv > opts.max_vertices {
        return Err(Error::Resource(format!(
            "exact coloring is capped at {} vertices, hypergraph has {}",
            opts.max_vertices, c.nv
        )));
    }
    search_colors(&c, t, opts)
}

fn search_colors(c: &Constraints, t: usize, opts: &ChiOptions) -> Result<(Option<Vec<u32>>, u64)> {
    if c.nv == 0 {
        return Ok((Some(vec![]), 0));
    }
    if t == 0 {
        return Ok((None, 0));
    }
    if t > u8::MAX as usize - 1 {
        return invalid("more than 254 colors are not supported");
    }
    let mut root = Solver::new(c, t, u64::MAX);
    let mut shards = Vec::new();
    root.frontier(FRONTIER_DEPTH.min(c.nv), &mut Vec::new(), &mut shards);
    let head = root.nodes;
    let limit = opts.node_limit;
    let (hit, nodes) = first_in_order(&shards, opts.parallel, |path: &Vec<(u32, u8)>, cancel: &dyn Cancel| {
        let mut s = Solver::new(c, t, limit);
        for &(v, col) in path {
            s.assign(v as usize, col);
        }
        s.nodes = 0;
        let out = match s.dfs(cancel) {
            Step::Found => ShardOutcome::Found(s.color.iter().map(|&x| x as u32).collect::<Vec<_>>()),
            Step::Exhausted => ShardOutcome::Exhausted,
            Step::Stopped => ShardOutcome::Budget,
        };
        (out, s.nodes)
    });
    let total = head + nodes;
    match hit {
        Some((_, ShardOutcome::Found(col))) => Ok((Some(col), total)),
        Some(_) => Err(Error::Resource(format!(
            "deciding {t}-colorability exceeded the node limit of {limit}"
        ))),
        None if total > limit => Err(Error::Resource(format!(
            "deciding {t}-colorability exceeded the node limit of {limit}"
        ))),
        None => Ok((None, total)),
    }
}

enum Step {
    Found,
    Exhausted,
    Stopped,
}

struct Solver<'a> {
    c: &'a Constraints,
    t: usize,
    color: Vec<u8>,
    // per edge: colored members, color of the first colored member, members agreeing with it
    nc: Vec<u8>,
    mono: Vec<u8>,
    agree: Vec<u8>,
    forb: Vec<u32>,
    sat: Vec<u32>,
    maxc: usize,
    colored: usize,
    nodes: u64,
    limit: u64,
}

impl<'a> Solver<'a> {
    fn new(c: &'a Constraints, t: usize, limit: u64) -> Self {
        let m = c.edges.len();
        Self {
            c,
            t,
            color: vec![0; c.nv],
            nc: vec![0; m],
            mono: vec![0; m],
            agree: vec![0; m],
            forb: vec![0; c.nv * (t + 1)],
            sat: vec![0; c.nv],
            maxc: 0,
            colored: 0,
            nodes: 0,
            limit,
        }
    }

    #[inline]
    fn forbid(&mut self, u: usize, col: u8) {
        let f = &mut self.forb[u * (self.t + 1) + col as usize];
        if *f == 0 {
            self.sat[u] += 1;
        }
        *f += 1;
    }

    #[inline]
    fn allow(&mut self, u: usize, col: u8) {
        let f = &mut self.forb[u * (self.t + 1) + col as usize];
        *f -= 1;
        if *f == 0 {
            self.sat[u] -= 1;
        }
    }

    #[inline]
    fn critical(&self, e: usize) -> bool {
        let size = self.c.edges[e].len() as u8;
        self.nc[e] + 1 == size && self.agree[e] == self.nc[e]
    }

    fn uncolored_member(&self, e: usize, skip: usize) -> usize {
        self.c.edges[e]
            .iter()
            .map(|&u| u as usize)
            .find(|&u| u != skip && self.color[u] == 0)
            .expect("a critical edge has one uncolored member")
    }

    fn assign(&mut self, v: usize, col: u8) {
        self.nodes += 1;
        self.color[v] = col;
        self.colored += 1;
        let prev_max = self.maxc;
        self.maxc = self.maxc.max(col as usize);
        debug_assert!(self.maxc <= prev_max + 1);
        for i in 0..self.c.incident[v].len() {
            let e = self.c.incident[v][i] as usize;
            if self.critical(e) {
                let m = self.mono[e];
                self.allow(v, m);
            }
            if self.nc[e] == 0 {
                self.mono[e] = col;
                self.agree[e] = 1;
            } else if self.mono[e] == col {
                self.agree[e] += 1;
            }
            self.nc[e] += 1;
            if self.critical(e) {
                let u = self.uncolored_member(e, usize::MAX);
                let m = self.mono[e];
                self.forbid(u, m);
            }
        }
    }

    fn unassign(&mut self, v: usize, prev_max: usize) {
        let col = self.color[v];
        self.color[v] = 0;
        self.colored -= 1;
        self.maxc = prev_max;
        for i in (0..self.c.incident[v].len()).rev() {
            let e = self.c.incident[v][i] as usize;
            if self.critical(e) {
                let u = self.uncolored_member(e, v);
                let m = self.mono[e];
                self.allow(u, m);
            }
            if self.mono[e] == col {
                self.agree[e] -= 1;
            }
            self.nc[e] -= 1;
            if self.nc[e] == 0 {
                self.mono[e] = 0;
            }
            if self.critical(e) {
                let m = self.mono[e];
                self.forbid(v, m);
            }
        }
    }

    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (0u32, 0usize);
        for v in 0..self.c.nv {
            if self.color[v] != 0 {
                continue;
            }
            let k = (self.sat[v], self.c.incident[v].len());
            if best == usize::MAX || k > key {
                best = v;
                key = k;
            }
        }
        best
    }

    fn candidates(&self, v: usize) -> Vec<u8> {
        let base = v * (self.t + 1);
        let mut out: Vec<u8> = (1..=self.maxc).filter(|&c| self.forb[base + c] == 0).map(|c| c as u8).collect();
        if self.maxc < self.t {
            out.push(self.maxc as u8 + 1);
        }
        out
    }

    fn frontier(&mut self, depth: usize, path: &mut Vec<(u32, u8)>, out: &mut Vec<Vec<(u32, u8)>>) {
        if path.len() == depth || self.colored == self.c.nv {
            out.push(path.clone());
            return;
        }
        let v = self.pick();
        for col in self.candidates(v) {
            let prev = self.maxc;
            self.assign(v, col);
            path.push((v as u32, col));
            self.frontier(depth, path, out);
            path.pop();
            self.unassign(v, prev);
        }
    }

    fn dfs(&mut self, cancel: &dyn Cancel) -> Step {
        if self.colored == self.c.nv {
            return Step::Found;
        }
        if self.nodes > self.limit || (self.nodes & 0xffff == 0 && cancel.cancelled()) {
            return Step::Stopped;
        }
        let v = self.pick();
        for col in self.candidates(v) {
            let prev = self.maxc;
            self.assign(v, col);
            match self.dfs(cancel) {
                Step::Exhausted => self.unassign(v, prev),
                other => return other,
            }
        }
        Step::Exhausted
    }
}

fn lower_bound(c: &Constraints, r: usize) -> LowerBound {
    let mut best = LowerBound { value: 2, source: "edge".into(), vertices: vec![] };
    let words = c.nv.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; c.nv];
    let mut any_pair = false;
    for e in &c.edges {
        if e.len() == 2 {
            let (a, b) = (e[0] as usize, e[1] as usize);
            adj[a][b / 64] |= 1 << (b % 64);
            adj[b][a / 64] |= 1 << (a % 64);
            any_pair = true;
        }
    }
    if any_pair {
        let q = max_clique(&adj);
        if q.len() > best.value {
            best = LowerBound { value: q.len(), source: "clique".into(), vertices: q };
        }
    }
    if r >= 3 {
        let q = hyperclique(c, r);
        let v = q.len().div_ceil(r - 1);
        if v > best.value {
            best = LowerBound { value: v, source: "hyperclique".into(), vertices: q };
        }
    }
    best
}

/// Branch and bound with a greedy-coloring bound; falls back to the best clique
/// found when the node cap is reached, which is still a valid lower bound.
fn max_clique(adj: &[Vec<u64>]) -> Vec<u32> {
    struct Mc<'a> {
        adj: &'a [Vec<u64>],
        best: Vec<u32>,
        nodes: u64,
    }
    fn members(p: &[u64]) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in p.iter().enumerate() {
            let mut b = word;
            while b != 0 {
                out.push(w * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }
    impl Mc<'_> {
        fn color_sort(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
            let mut left = p.to_vec();
            let (mut order, mut bound) = (Vec::new(), Vec::new());
            let mut k = 0;
            while left.iter().any(|&w| w != 0) {
                k += 1;
                let mut q = left.clone();
                while let Some(v) = members(&q).first().copied() {
                    q[v / 64] &= !(1 << (v % 64));
                    left[v / 64] &= !(1 << (v % 64));
                    for (qw, aw) in q.iter_mut().zip(&self.adj[v]) {
                        *qw &= !aw;
                    }
                    order.push(v);
                    bound.push(k);
                }
            }
            (order, bound)
        }

        fn expand(&mut self, r: &mut Vec<u32>, mut p: Vec<u64>) {
            self.nodes += 1;
            if self.nodes > CLIQUE_NODE_LIMIT {
                return;
            }
            let (order, bound) = self.color_sort(&p);
            for i in (0..order.len()).rev() {
                if r.len() + bound[i] <= self.best.len() {
                    return;
                }
                let v = order[i];
                r.push(v as u32);
                let np: Vec<u64> = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
                if np.iter().all(|&w| w == 0) {
                    if r.len() > self.best.len() {
                        self.best = r.clone();
                    }
                } else {
                    self.expand(r, np);
                }
                r.pop();
                p[v / 64] &= !(1 << (v % 64));
            }
        }
    }
    let nv = adj.len();
    let mut all = vec![u64::MAX; nv.div_ceil(64)];
    if !nv.is_multiple_of(64) {
        *all.last_mut().unwrap() = (1u64 << (nv % 64)) - 1;
    }
    let mut mc = Mc { adj, best: Vec::new(), nodes: 0 };
    mc.expand(&mut Vec::new(), all);
    mc.best.sort_unstable();
    mc.best
}

/// Greedy search for a vertex set all of whose `r`-subsets are edges. Each
/// color class inside it holds at most `r - 1` vertices.
fn hyperclique(c: &Constraints, r: usize) -> Vec<u32> {
    let edges: HashSet<&[u32]> = c.edges.iter().filter(|e| e.len() == r).map(|e| e.as_slice()).collect();
    if edges.is_empty() {
        return vec![];
    }
    let mut order: Vec<usize> = (0..c.nv).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(c.incident[v].len()), v));
    let mut best: Vec<u32> = Vec::new();
    let mut buf = Vec::with_capacity(r);
    for &start in &order {
        let mut q = vec![start as u32];
        for &v in &order {
            if v == start {
                continue;
            }
            // every (r-1)-subset of q together with v must be an edge
            let ok = if q.len() + 1 < r {
                true
            } else {
                subsets_all(&q, r - 1, &mut |t| {
                    buf.clear();
                    buf.extend_from_slice(t);
                    buf.push(v as u32);
                    buf.sort_unstable();
                    edges.contains(buf.as_slice())
                })
            };
            if ok {
                q.push(v as u32);
            }
        }
        if q.len() >= r && q.len() > best.len() {
            best = q;
        }
    }
    best.sort_unstable();
    best
}

fn subsets_all(items: &[u32], k: usize, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
    fn rec(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            let ok = rec(items, k, i + 1, cur, f);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// The standard coloring of `KG^r(n, k)` restricted to the vertices of `h`:
/// `F` gets `min(ceil(min F / (r-1)), t*)` with `t* = ceil((n - r(k-1)) / (r-1))`.
/// The result is checked for properness before it is returned.
pub fn standard_kneser_coloring(n: usize, k: usize, r: usize, h: &Hypergraph) -> Result<Vec<u32>> {
    if r < 2 || k == 0 || n < r * k {
        return invalid(format!("standard coloring needs r >= 2, k >= 1 and n >= rk, got n={n}, k={k}, r={r}"));
    }
    if h.n() != n {
        return invalid(format!("hypergraph is over [{}], expected [{n}]", h.n()));
    }
    let tstar = (n - r * (k - 1)).div_ceil(r - 1);
    let coloring = h
        .vertices()
        .iter()
        .map(|v| {
            if v.len() != k {
                return invalid(format!("vertex {v} is not a {k}-subset"));
            }
            let m = v.min_element().expect("k >= 1");
            Ok(m.div_ceil(r - 1).min(tstar) as u32)
        })
        .collect::<Result<Vec<_>>>()?;
    if !is_proper(h, &coloring)? {
        return Err(Error::Internal("standard coloring is not proper on this hypergraph".into()));
    }
    Ok(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate_family, Family, FamilySpec, Partition, Subset};
    use crate::hypergraph::{build_kneser, build_s_disjoint, HypergraphMeta, Variant};

    fn kneser(n: usize, k: usize, r: usize, s: usize) -> Hypergraph {
        let f = enumerate_family(&FamilySpec::KSubsets { n, k }).unwrap();
        build_kneser(&f, &Partition::singletons(n).unwrap(), s, Variant::Plain, r).unwrap()
    }

    fn complete(m: usize, r: usize) -> Hypergraph {
        let verts: Vec<Subset> = (1..=m).map(|i| Subset::new(m, [i]).unwrap()).collect();
        let f = Family::from_subsets(m, verts).unwrap();
        build_kneser(&f, &Partition::singletons(m).unwrap(), 0, Variant::Plain, r).unwrap()
    }

    /// Smallest t with a proper coloring, by trying all t^nv colorings.
    fn brute_chi(h: &Hypergraph) -> usize {
        let nv = h.vertex_count();
        if nv == 0 {
            return 0;
        }
        for t in 1..=nv {
            let mut col = vec![1u32; nv];
            loop {
                if is_proper(h, &col).unwrap() {
                    return t;
                }
                let mut i = 0;
                while i < nv && col[i] == t as u32 {
                    col[i] = 1;
                    i += 1;
                }
                if i == nv {
                    break;
                }
                col[i] += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn petersen() {
        let h = kneser(5, 2, 2, 0);
        let res = chi_exact(&h).unwrap();
        assert_eq!(res.value, ChromaticNumber::Finite(3));
        assert!(is_proper(&h, res.coloring.as_ref().unwrap()).unwrap());
        // no 2-coloring among all 2^10
        let mut found = false;
        for code in 0u32..1 << 10 {
            let col: Vec<u32> = (0..10).map(|i| 1 + (code >> i & 1)).collect();
            found |= is_proper(&h, &col).unwrap();
        }
        assert!(!found);
        let (g, col) = greedy_upper(&h);
        assert!(g.at_least(3));
        assert!(is_proper(&h, &col.unwrap()).unwrap());
    }

    #[test]
    fn complete_hypergraphs() {
        assert_eq!(chi_exact(&complete(5, 3)).unwrap().value, ChromaticNumber::Finite(3));
        assert_eq!(chi_exact(&complete(6, 2)).unwrap().value, ChromaticNumber::Finite(6));
        assert_eq!(greedy_upper(&complete(6, 2)).0, ChromaticNumber::Finite(6));
    }

    #[test]
    fn conventions_and_loops() {
        let empty = Hypergraph::new(2, vec![], vec![], HypergraphMeta::new("test", 3), false).unwrap();
        assert_eq!(chi_exact(&empty).unwrap().value, ChromaticNumber::Finite(0));
        let one = Hypergraph::new(2, vec![Subset::new(3, [1]).unwrap()], vec![], HypergraphMeta::new("test", 3), false).unwrap();
        assert_eq!(chi_exact(&one).unwrap().value, ChromaticNumber::Finite(1));
        assert_eq!(greedy_upper(&one).0, ChromaticNumber::Finite(1));

        let f = Family::explicit(2, vec![vec![1], vec![2]]).unwrap();
        let h = build_s_disjoint(&f, &Partition::singletons(2).unwrap(), &[2, 1], 2).unwrap();
        assert_eq!(chi_exact(&h).unwrap().value, ChromaticNumber::Infinite);
        assert_eq!(greedy_upper(&h).0, ChromaticNumber::Infinite);
        assert!(!is_proper(&h, &[1, 2]).unwrap());
        assert!(is_proper(&h, &[1]).is_err());
    }

    #[test]
    fn matches_brute_force_on_small_instances() {
        let cases = [kneser(5, 2, 2, 0), kneser(6, 2, 3, 0), kneser(4, 2, 2, 1), kneser(6, 3, 2, 1), complete(4, 3)];
        for h in &cases {
            if h.vertex_count() > 10 {
                continue;
            }
            let got = chi_exact(h).unwrap();
            assert_eq!(got.value, ChromaticNumber::Finite(brute_chi(h)));
        }
    }

    #[test]
    fn kneser_values() {
        assert_eq!(chi_exact(&kneser(6, 2, 2, 0)).unwrap().value, ChromaticNumber::Finite(4));
        assert_eq!(chi_exact(&kneser(7, 2, 2, 0)).unwrap().value, ChromaticNumber::Finite(5));
        assert_eq!(chi_exact(&kneser(7, 3, 2, 0)).unwrap().value, ChromaticNumber::Finite(3));
        assert_eq!(chi_exact(&kneser(6, 2, 3, 0)).unwrap().value, ChromaticNumber::Finite(2));
    }

    #[test]
    fn standard_coloring() {
        for (n, k, r, colors) in [(5, 2, 2, 3), (6, 2, 2, 4), (6, 2, 3, 2), (9, 2, 3, 3), (9, 3, 3, 2)] {
            let h = kneser(n, k, r, 0);
            let col = standard_kneser_coloring(n, k, r, &h).unwrap();
            assert_eq!(col.iter().copied().max().unwrap() as usize, colors);
        }
        assert!(standard_kneser_coloring(5, 3, 2, &kneser(5, 3, 2, 0)).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let h = kneser(7, 2, 2, 0);
        let seq = chi_exact(&h).unwrap();
        let opts = ChiOptions { parallel: true, ..ChiOptions::default() };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let par = pool.install(|| chi_exact_with(&h, &opts).unwrap());
        assert_eq!(seq, par);
    }

    #[test]
    fn node_limit_is_reported() {
        let h = kneser(7, 2, 2, 0);
        let opts = ChiOptions { node_limit: 10, ..ChiOptions::default() };
        assert!(matches!(chi_exact_with(&h, &opts), Err(Error::Resource(_))));
        let big = ChiOptions { max_vertices: 5, ..ChiOptions::default() };
        assert!(matches!(chi_exact_with(&h, &big), Err(Error::Resource(_))));
    }

    #[test]
    fn bounded_search_keeps_certified_bounds() {
        let h = kneser(7, 2, 2, 0);
        let opts = ChiOptions { node_limit: 10, ..ChiOptions::default() };
        match chi_bounded(&h, &opts).unwrap() {
            ChiOutcome::Bounded(b) => {
                assert!(b.lower <= 5 && 5 <= b.upper, "{b:?}");
                assert!(b.lower >= b.lower_bound.value);
                assert!(b.refuted.iter().all(|r| r.colors < b.lower));
            }
            ChiOutcome::Exact(r) => panic!("unexpected exact result {r:?}"),
        }
        let ok = chi_bounded(&h, &ChiOptions::default()).unwrap();
        assert!(matches!(ok, ChiOutcome::Exact(r) if r.value == ChromaticNumber::Finite(5)));
    }
}
