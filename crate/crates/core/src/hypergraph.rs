//! Kneser-type hypergraph builders and a homomorphism check.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::families::{enumerate_family, Family, FamilySpec, Partition, Subset};

/// Vertex condition used by [`build_kneser`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Members meeting every block at most once.
    Plain,
    /// Members whose block excess is at most `floor(s/2)`.
    Tilde,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphMeta {
    pub construction: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    /// Some member has at most `s` elements, so `{F, ..., F}` would satisfy the
    /// intersection condition.
    #[serde(default)]
    pub loop_risk: bool,
    /// An edge consists of `r` copies of one vertex; the chromatic number is infinite.
    #[serde(default)]
    pub has_loop: bool,
    /// Number of edges with a repeated vertex.
    #[serde(default)]
    pub multiset_edges: usize,
}

impl HypergraphMeta {
    pub fn new(construction: &str, n: usize) -> Self {
        Self {
            construction: construction.to_string(),
            n,
            s: None,
            weights: None,
            partition: None,
            loop_risk: false,
            has_loop: false,
            multiset_edges: 0,
        }
    }
}

/// An `r`-uniform hypergraph with explicit vertex and edge lists.
///
/// Edges are sorted index lists; a repeated index makes the edge a multiset.
/// The edge list is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    vertices: Vec<Subset>,
    edges: Vec<Vec<u32>>,
    meta: HypergraphMeta,
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    r: usize,
    vertices: Vec<Vec<usize>>,
    edges: Vec<Vec<u32>>,
    meta: HypergraphMeta,
}

impl Hypergraph {
    /// Validates and canonicalizes a hypergraph. Multiset edges are accepted only
    /// when `allow_multisets` is set.
    pub fn new(
        r: usize,
        vertices: Vec<Subset>,
        mut edges: Vec<Vec<u32>>,
        mut meta: HypergraphMeta,
        allow_multisets: bool,
    ) -> Result<Self> {
        if r < 2 {
            return invalid(format!("uniformity must be at least 2, got {r}"));
        }
        if let Some(v) = vertices.iter().find(|v| v.ground() != meta.n) {
            return invalid(format!("vertex {v} is not over [{}]", meta.n));
        }
        let nv = vertices.len() as u32;
        let mut multisets = 0;
        let mut has_loop = false;
        for e in edges.iter_mut() {
            if e.len() != r {
                return invalid(format!("edge {e:?} does not have {r} members"));
            }
            if let Some(&bad) = e.iter().find(|&&i| i >= nv) {
                return invalid(format!("edge index {bad} out of range ({nv} vertices)"));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                if !allow_multisets {
                    return invalid(format!("edge {e:?} repeats a vertex"));
                }
                multisets += 1;
                has_loop |= e[0] == e[r - 1];
            }
        }
        edges.sort_unstable();
        edges.dedup();
        meta.multiset_edges = multisets;
        meta.has_loop = has_loop;
        Ok(Self { r, vertices, edges, meta })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: HypergraphJson = serde_json::from_str(text)?;
        let n = raw.meta.n;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| Subset::new(n, v.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.r, vertices, raw.edges, raw.meta, true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("hypergraph serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(HypergraphJson {
            r: self.r,
            vertices: self.vertices.iter().map(Subset::to_vec).collect(),
            edges: self.edges.clone(),
            meta: self.meta.clone(),
        })
        .expect("hypergraph serializes")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.meta.n
    }

    pub fn vertices(&self) -> &[Subset] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn meta(&self) -> &HypergraphMeta {
        &self.meta
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_loop(&self) -> bool {
        self.meta.has_loop
    }

    pub fn vertex_index(&self, v: &Subset) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    pub fn has_edge(&self, sorted_edge: &[u32]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(sorted_edge)).is_ok()
    }

    /// The sub-hypergraph induced by `keep` (indices into the vertex list).
    pub fn induced(&self, keep: &[usize]) -> Hypergraph {
        let mut remap = vec![u32::MAX; self.vertices.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new as u32;
        }
        let vertices = keep.iter().map(|&i| self.vertices[i]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| remap[v as usize] != u32::MAX))
            .map(|e| e.iter().map(|&v| remap[v as usize]).collect())
            .collect();
        let mut meta = self.meta.clone();
        meta.construction = format!("{}-induced", meta.construction);
        Hypergraph::new(self.r, vertices, edges, meta, true).expect("induced hypergraph is valid")
    }
}

fn check_common(f: &Family, p: &Partition, r: usize) -> Result<()> {
    if r < 2 {
        return invalid(format!("uniformity must be at least 2, got {r}"));
    }
    if f.n() != p.n() {
        return invalid(format!("family over [{}] but partition of [{}]", f.n(), p.n()));
    }
    Ok(())
}

/// Enumerates all `r`-cliques (increasing index lists) of a compatibility relation
/// given as adjacency bit rows.
fn enumerate_cliques(adj: &[Vec<u64>], r: usize) -> Vec<Vec<u32>> {
    let nv = adj.len();
    let words = nv.div_ceil(64);
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(r);
    let mut cands: Vec<Vec<u64>> = vec![vec![0; words]; r + 1];
    cands[0] = vec![u64::MAX; words];
    if !nv.is_multiple_of(64) && words > 0 {
        cands[0][words - 1] = (1u64 << (nv % 64)) - 1;
    }

    fn rec(
        adj: &[Vec<u64>],
        r: usize,
        depth: usize,
        start: usize,
        stack: &mut Vec<u32>,
        cands: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if depth == r {
            out.push(stack.clone());
            return;
        }
        let words = cands[depth].len();
        for w in start / 64..words {
            let mut bits = cands[depth][w];
            if w == start / 64 {
                bits &= !((1u64 << (start % 64)) - 1);
            }
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = w * 64 + b;
                let (lo, hi) = cands.split_at_mut(depth + 1);
                for (i, slot) in hi[0].iter_mut().enumerate() {
                    *slot = lo[depth][i] & adj[v][i];
                }
                stack.push(v as u32);
                rec(adj, r, depth + 1, v + 1, stack, cands, out);
                stack.pop();
            }
        }
    }

    rec(adj, r, 0, 0, &mut stack, &mut cands, &mut out);
    out
}

/// `KG^r(F, P, s)` (plain) or its tilde variant.
///
/// Vertices are the members passing the variant's block condition, in family
/// order; edges are the `r`-subsets of vertices with pairwise intersections of
/// at most `s` elements.
pub fn build_kneser(f: &Family, p: &Partition, s: usize, variant: Variant, r: usize) -> Result<Hypergraph> {
    check_common(f, p, r)?;
    let vertices: Vec<Subset> = f
        .members()
        .iter()
        .copied()
        .filter(|m| match variant {
            Variant::Plain => p.admissible_bits(m.bits()),
            Variant::Tilde => p.excess_bits(m.bits()) <= s / 2,
        })
        .collect();
    let nv = vertices.len();
    let words = nv.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; nv];
    for i in 0..nv {
        for j in i + 1..nv {
            if (vertices[i].bits() & vertices[j].bits()).count_ones() as usize <= s {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let edges = enumerate_cliques(&adj, r);
    let construction = match variant {
        Variant::Plain => "kneser-plain",
        Variant::Tilde => "kneser-tilde",
    };
    let mut meta = HypergraphMeta::new(construction, f.n());
    meta.s = Some(s);
    meta.partition = Some(p.block_lists());
    meta.loop_risk = f.min_member_size().is_some_and(|m| s >= m);
    Hypergraph::new(r, vertices, edges, meta, false)
}

/// `KG_S^r(F, P)`: admissible members, with every size-`r` multiset of vertices
/// covering each element `i` at most `weights[i-1]` times as an edge.
pub fn build_s_disjoint(f: &Family, p: &Partition, weights: &[u32], r: usize) -> Result<Hypergraph> {
    check_common(f, p, r)?;
    if weights.len() != f.n() {
        return invalid(format!("{} weights given for a ground set of size {}", weights.len(), f.n()));
    }
    if let Some(w) = weights.iter().find(|&&w| w as usize > r) {
        return invalid(format!("weight {w} exceeds r = {r}"));
    }
    let vertices: Vec<Subset> =
        f.members().iter().copied().filter(|m| p.admissible_bits(m.bits())).collect();
    let n = f.n();

    fn rec(
        vertices: &[Subset],
        weights: &[u32],
        r: usize,
        start: usize,
        cover: &mut Vec<u32>,
        stack: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if stack.len() == r {
            out.push(stack.clone());
            return;
        }
        for v in start..vertices.len() {
            let bits = vertices[v].bits();
            if vertices[v].iter().any(|e| cover[e - 1] + 1 > weights[e - 1]) {
                continue;
            }
            for e in crate::families::BitIter(bits) {
                cover[e] += 1;
            }
            stack.push(v as u32);
            rec(vertices, weights, r, v, cover, stack, out);
            stack.pop();
            for e in crate::families::BitIter(bits) {
                cover[e] -= 1;
            }
        }
    }

    let mut edges = Vec::new();
    rec(&vertices, weights, r, 0, &mut vec![0; n], &mut Vec::with_capacity(r), &mut edges);
    let mut meta = HypergraphMeta::new("s-disjoint", n);
    meta.weights = Some(weights.to_vec());
    meta.partition = Some(p.block_lists());
    Hypergraph::new(r, vertices, edges, meta, true)
}

/// The sub-hypergraph of `KG^r(n, k, P)` induced by the `t`-wide `k`-subsets.
pub fn induce_t_wide(n: usize, k: usize, p: &Partition, t: usize, r: usize) -> Result<Hypergraph> {
    if t == 0 || t > n {
        return invalid(format!("need 1 <= t <= n, got t={t}, n={n}"));
    }
    let family = enumerate_family(&FamilySpec::TWide { n, k, t })?;
    let mut h = build_kneser(&family, p, 0, Variant::Plain, r)?;
    h.meta.construction = format!("kneser-{t}-wide");
    Ok(h)
}

/// A map from source vertex indices to target vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexMap {
    pub assignment: Vec<u32>,
}

impl VertexMap {
    pub fn identity(nv: usize) -> Self {
        Self { assignment: (0..nv as u32).collect() }
    }

    /// Maps each source vertex to the target vertex holding `image(v)`.
    pub fn by_image<F: Fn(&Subset) -> Subset>(src: &Hypergraph, dst: &Hypergraph, image: F) -> Result<Self> {
        let assignment = src
            .vertices()
            .iter()
            .map(|v| {
                let w = image(v);
                dst.vertex_index(&w).map(|i| i as u32).ok_or_else(|| {
                    Error::InvalidInput(format!("image {w} of vertex {v} is not a target vertex"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { assignment })
    }
}

/// True iff the image of every source edge, as a multiset, is an edge of `dst`.
/// A map that is not total on the source vertices is never a homomorphism.
pub fn is_homomorphism(m: &VertexMap, src: &Hypergraph, dst: &Hypergraph) -> bool {
    if m.assignment.len() != src.vertex_count()
        || m.assignment.iter().any(|&t| t as usize >= dst.vertex_count())
        || src.r() != dst.r()
    {
        return false;
    }
    let mut image = Vec::with_capacity(src.r());
    src.edges().iter().all(|e| {
        image.clear();
        image.extend(e.iter().map(|&v| m.assignment[v as usize]));
        image.sort_unstable();
        dst.has_edge(&image)
    })
}
