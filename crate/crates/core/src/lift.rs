//! Replicating ground elements by weight, which turns `S`-disjointness into
//! ordinary disjointness.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::families::{low_mask, BitIter, Family, Partition, Subset, MAX_GROUND};
use crate::hypergraph::{Hypergraph, VertexMap};

/// Largest lifted ground set that [`lift_family`] materializes.
pub const MAX_LIFTED_GROUND: usize = 16;

/// Element `i` of `[n]` becomes copies `offset[i-1] + 1 ..= offset[i-1] + s_i`
/// of `[n̄]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lifting {
    weights: Vec<u32>,
    n_bar: usize,
    // projection of lifted element j is projection[j-1]
    projection: Vec<usize>,
    offsets: Vec<usize>,
}

impl Lifting {
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn n_bar(&self) -> usize {
        self.n_bar
    }

    /// `f(j)` for a lifted element `j`.
    pub fn project(&self, j: usize) -> usize {
        self.projection[j - 1]
    }

    /// Lifted elements that are copies of `i`.
    pub fn copies(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        let start = self.offsets[i - 1] + 1;
        start..=self.offsets[i - 1] + self.weights[i - 1] as usize
    }

    fn copy_mask(&self, i: usize) -> u64 {
        low_mask(self.weights[i - 1] as usize) << self.offsets[i - 1]
    }

    /// `f(A)` as a set.
    pub fn image(&self, a: &Subset) -> Subset {
        let bits = a.iter().fold(0u64, |acc, j| acc | 1 << (self.project(j) - 1));
        Subset::from_bits_unchecked(self.n(), bits)
    }
}

pub fn lift_ground(weights: &[u32]) -> Result<Lifting> {
    if weights.is_empty() {
        return invalid("empty weight vector");
    }
    let n_bar: usize = weights.iter().map(|&w| w as usize).sum();
    if n_bar == 0 {
        return invalid("all weights are zero");
    }
    if n_bar > MAX_GROUND {
        return invalid(format!("lifted ground set of size {n_bar} exceeds {MAX_GROUND}"));
    }
    let mut projection = Vec::with_capacity(n_bar);
    let mut offsets = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        offsets.push(projection.len());
        projection.extend(std::iter::repeat_n(i + 1, w as usize));
    }
    Ok(Lifting { weights: weights.to_vec(), n_bar, projection, offsets })
}

/// `F̄`: every `A ⊆ [n̄]` with `f(A) ∈ F`, plus every pair of two copies of one element.
pub fn lift_family(f: &Family, l: &Lifting) -> Result<Family> {
    if f.n() != l.n() {
        return invalid(format!("family over [{}] but {} weights", f.n(), l.n()));
    }
    if l.n_bar() > MAX_LIFTED_GROUND {
        return Err(Error::Resource(format!(
            "lifted family is materialized only for n̄ <= {MAX_LIFTED_GROUND}, got {}",
            l.n_bar()
        )));
    }
    let mut out: Vec<u64> = Vec::new();
    for m in f.members() {
        // A non-empty choice of copies for every element of m.
        let masks: Vec<u64> = m.iter().map(|i| l.copy_mask(i)).collect();
        if masks.contains(&0) {
            continue;
        }
        let mut acc = vec![0u64];
        for mask in masks {
            let mut next = Vec::new();
            for &base in &acc {
                let mut sub = mask;
                while sub != 0 {
                    next.push(base | sub);
                    sub = (sub - 1) & mask;
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    for i in 1..=l.n() {
        let copies: Vec<usize> = BitIter(l.copy_mask(i)).collect();
        for (x, &a) in copies.iter().enumerate() {
            for &b in &copies[x + 1..] {
                out.push(1 << a | 1 << b);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Family::from_subsets(l.n_bar(), out.into_iter().map(|b| Subset::from_bits_unchecked(l.n_bar(), b)).collect())
}

/// Membership in `F̄` without materializing it.
pub fn in_lifted_family(a: &Subset, f: &Family, l: &Lifting) -> bool {
    if a.ground() != l.n_bar() || a.is_empty() {
        return false;
    }
    if a.len() == 2 {
        let v = a.to_vec();
        if l.project(v[0]) == l.project(v[1]) {
            return true;
        }
    }
    f.contains(&l.image(a))
}

/// `P̄` and the weights `w_S(P_i)` of the original blocks. Blocks of weight
/// zero have no copies and are dropped from `P̄`.
pub fn lift_partition(p: &Partition, l: &Lifting) -> Result<(Partition, Vec<u32>)> {
    if p.n() != l.n() {
        return invalid(format!("partition of [{}] but {} weights", p.n(), l.n()));
    }
    let mut blocks = Vec::new();
    let mut weights = Vec::new();
    for b in p.blocks() {
        let w: u32 = b.iter().map(|i| l.weights[i - 1]).sum();
        weights.push(w);
        let lifted: Vec<usize> = b.iter().flat_map(|i| l.copies(i)).collect();
        if !lifted.is_empty() {
            blocks.push(lifted);
        }
    }
    Ok((Partition::new(l.n_bar(), blocks)?, weights))
}

/// The vertex map `A ↦ f(A)` from `KG^r(F̄, P̄)` to `KG_S^r(F, P)`.
pub fn induced_vertex_map(l: &Lifting, src: &Hypergraph, dst: &Hypergraph) -> Result<VertexMap> {
    if src.n() != l.n_bar() || dst.n() != l.n() {
        return invalid("hypergraphs do not match the lifting's ground sets");
    }
    VertexMap::by_image(src, dst, |a| l.image(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::chi_exact;
    use crate::hypergraph::{build_kneser, build_s_disjoint, is_homomorphism, Variant};

    fn lists(f: &Family) -> Vec<Vec<usize>> {
        f.members().iter().map(Subset::to_vec).collect()
    }

    #[test]
    fn ground_examples() {
        let l = lift_ground(&[2, 1]).unwrap();
        assert_eq!(l.n_bar(), 3);
        assert_eq!((1..=3).map(|j| l.project(j)).collect::<Vec<_>>(), vec![1, 1, 2]);
        let id = lift_ground(&[1, 1, 1]).unwrap();
        assert_eq!((1..=3).map(|j| id.project(j)).collect::<Vec<_>>(), vec![1, 2, 3]);
        let z = lift_ground(&[0, 2]).unwrap();
        assert_eq!(z.n_bar(), 2);
        assert_eq!((1..=2).map(|j| z.project(j)).collect::<Vec<_>>(), vec![2, 2]);
        assert!(lift_ground(&[0, 0]).is_err());
    }

    #[test]
    fn family_examples() {
        let l = lift_ground(&[2, 1]).unwrap();
        let f = Family::explicit(2, vec![vec![1, 2]]).unwrap();
        let lifted = lift_family(&f, &l).unwrap();
        assert_eq!(lists(&lifted), vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        // against the definition, subset by subset
        for bits in 1u64..8 {
            let a = Subset::from_bits(3, bits).unwrap();
            assert_eq!(lifted.contains(&a), in_lifted_family(&a, &f, &l), "{a}");
        }
        let g = Family::explicit(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(lift_family(&g, &lift_ground(&[1, 1, 1]).unwrap()).unwrap().members(), g.members());
        let e = Family::empty(2).unwrap();
        assert_eq!(lists(&lift_family(&e, &lift_ground(&[3, 1]).unwrap()).unwrap()), vec![
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]);
    }

    #[test]
    fn partition_examples() {
        let l = lift_ground(&[2, 1]).unwrap();
        let (p, w) = lift_partition(&Partition::singletons(2).unwrap(), &l).unwrap();
        assert_eq!(p.to_string(), "1,2|3");
        assert_eq!(w, vec![2, 1]);
        let (q, _) = lift_partition(&Partition::singletons(3).unwrap(), &lift_ground(&[1, 1, 1]).unwrap()).unwrap();
        assert!(q.is_trivial());
        let (one, w) = lift_partition(&Partition::parse("1,2,3").unwrap(), &lift_ground(&[2, 2, 2]).unwrap()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(w, vec![6]);
    }

    #[test]
    fn induced_map_is_a_homomorphism() {
        let f = Family::explicit(2, vec![vec![1], vec![2]]).unwrap();
        let w = [2, 1];
        let p = Partition::singletons(2).unwrap();
        let l = lift_ground(&w).unwrap();
        let fbar = lift_family(&f, &l).unwrap();
        let (pbar, _) = lift_partition(&p, &l).unwrap();
        let src = build_kneser(&fbar, &pbar, 0, Variant::Plain, 2).unwrap();
        let dst = build_s_disjoint(&f, &p, &w, 2).unwrap();
        // copy pairs are not admissible in P̄
        assert!(src.vertices().iter().all(|v| v.len() == 1));
        let m = induced_vertex_map(&l, &src, &dst).unwrap();
        assert!(is_homomorphism(&m, &src, &dst));
        let a = chi_exact(&src).unwrap().value;
        let b = chi_exact(&dst).unwrap().value;
        assert!(a <= b);
    }
}
