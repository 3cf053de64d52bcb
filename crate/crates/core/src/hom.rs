//! Homomorphism checks and enumeration.

use serde::Serialize;

use crate::algebra::{for_each_tuple, same_signature, Algebra, Elem};
use crate::bitset::ElemSet;
use crate::error::Result;

/// A map between universes, stored as the vector of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
    pub target_size: usize,
}

impl Homomorphism {
    pub fn new(map: Vec<Elem>, target_size: usize) -> Self {
        Homomorphism { map, target_size }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism::new((0..n).collect(), n)
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = ElemSet::empty(self.target_size);
        self.map.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective(&self) -> bool {
        ElemSet::from_elems(self.target_size, self.map.iter().copied()).count() == self.target_size
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism::new(self.map.iter().map(|&a| other.map[a]).collect(), other.target_size)
    }
}

/// Exhaustive check that `map` commutes with every operation.
pub fn is_homomorphism<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B, map: &[Elem]) -> bool {
    if a.signature() != b.signature() || map.len() != a.size() || map.iter().any(|&v| v >= b.size()) {
        return false;
    }
    let mut ok = true;
    let mut img = Vec::new();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        for_each_tuple(a.size(), sym.arity, |t| {
            if !ok {
                return;
            }
            img.clear();
            img.extend(t.iter().map(|&x| map[x]));
            if map[a.apply(op, t)] != b.apply(op, &img) {
                ok = false;
            }
        });
        if !ok {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct SearchOptions {
    pub injective: bool,
    pub first_only: bool,
}

/// All homomorphisms `a → b`, sorted lexicographically by map vector.
pub fn hom_enumerate<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> Result<Vec<Homomorphism>> {
    same_signature(a, b)?;
    Ok(search(a, b, SearchOptions::default(), None))
}

/// Injective homomorphisms `a → b`, sorted.
pub fn embeddings<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> Result<Vec<Homomorphism>> {
    same_signature(a, b)?;
    Ok(search(
        a,
        b,
        SearchOptions {
            injective: true,
            first_only: false,
        },
        None,
    ))
}

/// Whether `a` embeds into `b`.
pub fn embeds<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> bool {
    if a.signature() != b.signature() || a.size() > b.size() {
        return false;
    }
    !search(
        a,
        b,
        SearchOptions {
            injective: true,
            first_only: true,
        },
        None,
    )
    .is_empty()
}

/// An isomorphism `a → b` if one exists. Algebras of different signatures are never isomorphic.
pub fn isomorphic<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> Option<Homomorphism> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return None;
    }
    let fa = fingerprints(a);
    let fb = fingerprints(b);
    let mut sa = fa.clone();
    let mut sb = fb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let allowed: Vec<ElemSet> = fa
        .iter()
        .map(|f| ElemSet::from_elems(b.size(), (0..b.size()).filter(|&y| fb[y] == *f)))
        .collect();
    search(
        a,
        b,
        SearchOptions {
            injective: true,
            first_only: true,
        },
        Some(&allowed),
    )
    .pop()
}

/// Isomorphism-invariant data per element: preimage counts per operation and
/// idempotence / fixed-point flags.
fn fingerprints<A: Algebra + ?Sized>(a: &A) -> Vec<Vec<usize>> {
    let n = a.size();
    let sig = a.signature();
    let mut fp = vec![Vec::with_capacity(2 * sig.len()); n];
    for (op, sym) in sig.symbols().iter().enumerate() {
        let mut indeg = vec![0usize; n];
        for_each_tuple(n, sym.arity, |t| indeg[a.apply(op, t)] += 1);
        let diag: Vec<usize> = (0..n)
            .map(|e| {
                let t = vec![e; sym.arity];
                usize::from(sym.arity > 0 && a.apply(op, &t) == e)
            })
            .collect();
        for e in 0..n {
            fp[e].push(indeg[e]);
            fp[e].push(diag[e]);
        }
    }
    fp
}

struct Search<'x, A: ?Sized, B: ?Sized> {
    a: &'x A,
    b: &'x B,
    opts: SearchOptions,
    allowed: Option<&'x [ElemSet]>,
    map: Vec<Option<Elem>>,
    used: Vec<bool>,
    order: Vec<Elem>,
    processed: usize,
    arities: Vec<usize>,
    out: Vec<Homomorphism>,
}

impl<A: Algebra + ?Sized, B: Algebra + ?Sized> Search<'_, A, B> {
    fn assign(&mut self, x: Elem, v: Elem) -> bool {
        match self.map[x] {
            Some(w) => w == v,
            None => {
                if self.opts.injective && self.used[v] {
                    return false;
                }
                if let Some(allowed) = self.allowed {
                    if !allowed[x].contains(v) {
                        return false;
                    }
                }
                self.map[x] = Some(v);
                self.used[v] = true;
                self.order.push(x);
                true
            }
        }
    }

    fn undo_to(&mut self, len: usize, processed: usize) {
        while self.order.len() > len {
            let x = self.order.pop().unwrap();
            let v = self.map[x].take().unwrap();
            self.used[v] = false;
        }
        self.processed = processed;
    }

    /// Checks every operation instance whose arguments are assigned and whose
    /// last-assigned argument is the element being processed; forces outputs.
    fn propagate(&mut self) -> bool {
        let mut args = Vec::new();
        let mut img = Vec::new();
        let mut idx = Vec::new();
        while self.processed < self.order.len() {
            let k = self.processed;
            self.processed += 1;
            for op in 0..self.arities.len() {
                let m = self.arities[op];
                if m == 0 {
                    continue;
                }
                idx.clear();
                idx.resize(m, 0);
                'tuples: loop {
                    if idx.contains(&k) {
                        args.clear();
                        args.extend(idx.iter().map(|&i| self.order[i]));
                        img.clear();
                        img.extend(args.iter().map(|&x| self.map[x].unwrap()));
                        let r = self.a.apply(op, &args);
                        let v = self.b.apply(op, &img);
                        if !self.assign(r, v) {
                            return false;
                        }
                    }
                    let mut p = m;
                    loop {
                        if p == 0 {
                            break 'tuples;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] <= k {
                            continue 'tuples;
                        }
                        idx[p] = 0;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self) {
        if self.opts.first_only && !self.out.is_empty() {
            return;
        }
        let Some(x) = self.map.iter().position(Option::is_none) else {
            let map = self.map.iter().map(|v| v.unwrap()).collect();
            self.out.push(Homomorphism::new(map, self.b.size()));
            return;
        };
        for v in 0..self.b.size() {
            let (len, processed) = (self.order.len(), self.processed);
            if self.assign(x, v) && self.propagate() {
                self.run();
            }
            self.undo_to(len, processed);
            if self.opts.first_only && !self.out.is_empty() {
                return;
            }
        }
    }
}

pub(crate) fn search<A: Algebra + ?Sized, B: Algebra + ?Sized>(
    a: &A,
    b: &B,
    opts: SearchOptions,
    allowed: Option<&[ElemSet]>,
) -> Vec<Homomorphism> {
    if opts.injective && a.size() > b.size() {
        return Vec::new();
    }
    let arities: Vec<usize> = a.signature().symbols().iter().map(|s| s.arity).collect();
    let mut s = Search {
        a,
        b,
        opts,
        allowed,
        map: vec![None; a.size()],
        used: vec![false; b.size()],
        order: Vec::with_capacity(a.size()),
        processed: 0,
        arities,
        out: Vec::new(),
    };
    for (op, &m) in s.arities.clone().iter().enumerate() {
        if m == 0 && !s.assign(a.apply(op, &[]), b.apply(op, &[])) {
            return Vec::new();
        }
    }
    if !s.propagate() {
        return Vec::new();
    }
    s.run();
    s.out.sort();
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteAlgebra, Signature};

    fn chain(n: usize) -> FiniteAlgebra {
        let sig = Signature::new([("meet", 2), ("join", 2)]).unwrap();
        FiniteAlgebra::from_fn(format!("c{n}"), sig, n, |op, a| if op == 0 { a[0].min(a[1]) } else { a[0].max(a[1]) }).unwrap()
    }

    #[test]
    fn chain_endomorphisms_are_the_monotone_maps() {
        // lattice endomorphisms of a 3-chain without bounds: all monotone maps
        let homs = hom_enumerate(&chain(3), &chain(3)).unwrap();
        assert_eq!(homs.len(), 10);
        assert!(homs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn isomorphic_finds_relabeling() {
        let c = chain(4);
        let iso = isomorphic(&c, &c).unwrap();
        assert_eq!(iso.map, vec![0, 1, 2, 3]);
        assert!(isomorphic(&chain(3), &chain(4)).is_none());
    }

    #[test]
    fn composition_and_properties() {
        let h = Homomorphism::new(vec![0, 0, 1], 2);
        assert!(!h.is_injective());
        assert!(h.is_surjective());
        let g = Homomorphism::new(vec![1, 0], 2);
        assert_eq!(h.then(&g).map, vec![1, 1, 0]);
    }
}
