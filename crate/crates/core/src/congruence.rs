//! Partitions, congruences, quotients and relative congruences.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{for_each_tuple, same_signature, Algebra, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::hom::{hom_enumerate, Homomorphism};

/// A partition of `0..n` as a block-index vector. Blocks are numbered in order
/// of their smallest element, so equal partitions have equal vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    blocks: Vec<usize>,
}

impl Partition {
    /// Canonicalizes an arbitrary labeling of elements by block keys.
    pub fn from_labels<K: Eq + std::hash::Hash + Clone>(labels: &[K]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k.clone()).or_insert(next)
            })
            .collect();
        Partition { blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            blocks: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Partition { blocks: vec![0; n] }
    }

    pub fn kernel(h: &Homomorphism) -> Self {
        Self::from_labels(&h.map)
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, e: Elem) -> usize {
        self.blocks[e]
    }

    pub fn block_vector(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.blocks.len()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() <= 1
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    /// Smallest element of each block, indexed by block.
    pub fn representatives(&self) -> Vec<Elem> {
        let mut reps = vec![usize::MAX; self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = e;
            }
        }
        reps
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.blocks.iter().enumerate() {
            out[b].push(e);
        }
        out
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.blocks.iter().copied().zip(other.blocks.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let reps = self.representatives();
        self.blocks
            .iter()
            .enumerate()
            .all(|(e, &b)| other.related(e, reps[b]))
    }
}

/// Whether equal block tuples are sent to equal result blocks by every operation.
pub fn is_compatible<A: Algebra + ?Sized>(a: &A, theta: &Partition) -> bool {
    first_incompatible(a, theta).is_none()
}

fn first_incompatible<A: Algebra + ?Sized>(a: &A, theta: &Partition) -> Option<usize> {
    let reps = theta.representatives();
    let mut rep_args = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        let mut bad = false;
        for_each_tuple(a.size(), sym.arity, |t| {
            if bad {
                return;
            }
            rep_args.clear();
            rep_args.extend(t.iter().map(|&x| reps[theta.block_of(x)]));
            if !theta.related(a.apply(op, t), a.apply(op, &rep_args)) {
                bad = true;
            }
        });
        if bad {
            return Some(op);
        }
    }
    None
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The least congruence containing `pairs`.
pub fn congruence_generated<A: Algebra + ?Sized>(a: &A, pairs: &[(Elem, Elem)]) -> Result<Partition> {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    for &(x, y) in pairs {
        for e in [x, y] {
            if e >= n {
                return Err(Error::ArgumentOutOfRange { element: e, size: n });
            }
        }
        uf.union(x, y);
    }
    let mut rep_args = Vec::new();
    loop {
        let mut changed = false;
        for (op, sym) in a.signature().symbols().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            for_each_tuple(n, sym.arity, |t| {
                rep_args.clear();
                rep_args.extend(t.iter().map(|&x| uf.find(x)));
                if rep_args.as_slice() != t {
                    let r1 = a.apply(op, t);
                    let r2 = a.apply(op, &rep_args);
                    changed |= uf.union(r1, r2);
                }
            });
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|e| uf.find(e)).collect();
    Ok(Partition::from_labels(&roots))
}

/// A quotient algebra together with its natural surjection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: FiniteAlgebra,
    pub projection: Homomorphism,
    pub congruence: Partition,
}

/// `a/θ`; elements are blocks, labelled by their smallest member.
pub fn quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<Quotient> {
    if theta.size() != a.size() {
        return Err(Error::IncompatiblePartition(format!(
            "partition of {} elements for algebra of size {}",
            theta.size(),
            a.size()
        )));
    }
    if let Some(op) = first_incompatible(a, theta) {
        return Err(Error::IncompatiblePartition(a.signature().symbols()[op].name.clone()));
    }
    let reps = theta.representatives();
    let k = reps.len();
    let algebra = FiniteAlgebra::from_fn(format!("{}/θ", a.name()), a.signature().clone(), k, |op, args| {
        let lifted: Vec<Elem> = args.iter().map(|&b| reps[b]).collect();
        theta.block_of(a.apply(op, &lifted))
    })?
    .with_labels(reps.iter().map(|&r| format!("[{}]", a.label(r))))?;
    let projection = Homomorphism::new(theta.block_vector().to_vec(), k);
    Ok(Quotient {
        algebra,
        projection,
        congruence: theta.clone(),
    })
}

/// Kernels of all homomorphisms into members of `ms`.
pub fn hom_kernels(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<Vec<Partition>> {
    let mut kernels = BTreeSet::new();
    for m in ms {
        for h in hom_enumerate(a, m)? {
            kernels.insert(Partition::kernel(&h));
        }
    }
    Ok(kernels.into_iter().collect())
}

/// Meet of all kernels of homomorphisms into `ms`; the total partition if there are none.
pub fn kernel_meet(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<Partition> {
    Ok(hom_kernels(a, ms)?
        .iter()
        .fold(Partition::total(a.size()), |acc, k| acc.meet(k)))
}

/// Congruences of `a` relative to ISP(ms): hom kernels closed under meets, plus the total partition.
pub fn relative_congruences(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<Vec<Partition>> {
    let mut all: BTreeSet<Partition> = hom_kernels(a, ms)?.into_iter().collect();
    all.insert(Partition::total(a.size()));
    loop {
        let list: Vec<Partition> = all.iter().cloned().collect();
        let mut fresh = Vec::new();
        for (i, p) in list.iter().enumerate() {
            for q in &list[i + 1..] {
                let m = p.meet(q);
                if !all.contains(&m) {
                    fresh.push(m);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        all.extend(fresh);
    }
    Ok(all.into_iter().collect())
}

/// Whether homomorphisms into members of `ms` separate the points of `a`.
pub fn in_isp(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<bool> {
    for m in ms {
        same_signature(a, m)?;
    }
    Ok(kernel_meet(a, ms)?.is_discrete())
}

/// Relative subdirect irreducibility with respect to ISP(ms).
pub fn is_rel_subdirectly_irreducible(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<bool> {
    if !in_isp(a, ms)? {
        return Err(Error::NotInQuasivariety(a.name().to_string()));
    }
    let meet = hom_kernels(a, ms)?
        .iter()
        .filter(|k| !k.is_discrete())
        .fold(Partition::total(a.size()), |acc, k| acc.meet(k));
    Ok(!meet.is_discrete())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_numbering() {
        let p = Partition::from_labels(&[7, 3, 7, 1]);
        assert_eq!(p.block_vector(), &[0, 1, 0, 2]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.representatives(), vec![0, 1, 3]);
    }

    #[test]
    fn meet_and_refinement() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = Partition::from_labels(&[0, 1, 1, 1]);
        let m = p.meet(&q);
        assert_eq!(m.block_vector(), &[0, 1, 2, 2]);
        assert!(m.refines(&p) && m.refines(&q));
        assert!(!p.refines(&q));
        assert!(Partition::discrete(4).refines(&m));
        assert!(m.refines(&Partition::total(4)));
    }
}
