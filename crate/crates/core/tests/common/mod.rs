//! Brute-force oracles. They only read operation tables through `Algebra::apply`
//! and share no search code with the library.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use coprod::catalog::{make, CatalogId};
use coprod::{Algebra, DReductSpec, Elem, FiniteAlgebra};

pub fn entry(id: CatalogId) -> (FiniteAlgebra, DReductSpec) {
    let e = make(id).unwrap();
    (e.algebra, e.spec)
}

pub fn alg(id: CatalogId) -> FiniteAlgebra {
    make(id).unwrap().algebra
}

/// All tuples of length `k` over `0..n`, lexicographic.
pub fn tuples(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn preserves<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B, f: &[Elem]) -> bool {
    (0..a.signature().len()).all(|op| {
        tuples(a.size(), a.signature().arity(op)).iter().all(|t| {
            let img: Vec<Elem> = t.iter().map(|&x| f[x]).collect();
            f[a.apply(op, t)] == b.apply(op, &img)
        })
    })
}

/// Every map A → B that is a homomorphism, in lexicographic order.
pub fn brute_homs<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> Vec<Vec<Elem>> {
    tuples(b.size(), a.size()).into_iter().filter(|f| preserves(a, b, f)).collect()
}

pub fn closed<A: Algebra + ?Sized>(a: &A, s: &[bool]) -> bool {
    let members: Vec<Elem> = (0..a.size()).filter(|&x| s[x]).collect();
    (0..a.signature().len()).all(|op| {
        tuples(members.len(), a.signature().arity(op))
            .iter()
            .all(|t| s[a.apply(op, &t.iter().map(|&i| members[i]).collect::<Vec<_>>())])
    })
}

/// Maximal subuniverses of `a` contained in `l`, by checking every subset of `l`.
pub fn brute_maximal_in<A: Algebra + ?Sized>(a: &A, l: &[Elem]) -> BTreeSet<Vec<Elem>> {
    assert!(l.len() <= 20, "oracle too large");
    let mut subs: Vec<Vec<Elem>> = Vec::new();
    for mask in 0u32..(1 << l.len()) {
        let mut s = vec![false; a.size()];
        for (i, &x) in l.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s[x] = true;
            }
        }
        if closed(a, &s) {
            subs.push((0..a.size()).filter(|&x| s[x]).collect());
        }
    }
    let subset = |x: &Vec<Elem>, y: &Vec<Elem>| x.iter().all(|e| y.contains(e));
    subs.iter()
        .filter(|s| !subs.iter().any(|t| t.len() > s.len() && subset(s, t)))
        .cloned()
        .collect()
}

/// Every partition of `0..n` as a block-label vector (restricted growth strings).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, n, max.max(b), cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    if n == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![0];
    go(1, n, 0, &mut cur, &mut out);
    out
}

pub fn compatible<A: Algebra + ?Sized>(a: &A, labels: &[usize]) -> bool {
    (0..a.signature().len()).all(|op| {
        let k = a.signature().arity(op);
        let ts = tuples(a.size(), k);
        ts.iter().all(|s| {
            ts.iter().all(|t| {
                !(0..k).all(|i| labels[s[i]] == labels[t[i]]) || labels[a.apply(op, s)] == labels[a.apply(op, t)]
            })
        })
    })
}

/// Prime filters of the lattice (meet, join, bot, top) given as closures, by subset scan.
pub fn brute_prime_filters(
    n: usize,
    meet: impl Fn(Elem, Elem) -> Elem,
    join: impl Fn(Elem, Elem) -> Elem,
    bot: Elem,
    top: Elem,
) -> BTreeSet<Vec<Elem>> {
    assert!(n <= 20, "oracle too large");
    let leq = |x: Elem, y: Elem| meet(x, y) == x;
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let f = |x: Elem| mask >> x & 1 == 1;
        if !f(top) || f(bot) {
            continue;
        }
        let ok = (0..n).all(|x| {
            (0..n).all(|y| {
                (!f(x) || !leq(x, y) || f(y))
                    && (!(f(x) && f(y)) || f(meet(x, y)))
                    && (!f(join(x, y)) || f(x) || f(y))
            })
        });
        if ok {
            out.insert((0..n).filter(|&x| f(x)).collect());
        }
    }
    out
}

/// The subalgebra of ∏_{M ∈ ms} M^(M^n) generated by the n projections, by
/// naive fixpoint iteration. Returns its elements as coordinate tuples.
pub fn free_oracle(ms: &[FiniteAlgebra], n: usize) -> HashSet<Vec<Elem>> {
    let mut coords: Vec<(usize, Vec<Elem>)> = vec![];
    for (i, m) in ms.iter().enumerate() {
        for t in tuples(m.size(), n) {
            coords.push((i, t));
        }
    }
    let sig = ms[0].signature();
    let gens: Vec<Vec<Elem>> = (0..n).map(|g| coords.iter().map(|(_, t)| t[g]).collect()).collect();
    let mut set: HashSet<Vec<Elem>> = gens.into_iter().collect();
    loop {
        let elems: Vec<Vec<Elem>> = set.iter().cloned().collect();
        let before = set.len();
        for op in 0..sig.len() {
            for args in tuples(elems.len(), sig.arity(op)) {
                let v: Vec<Elem> = coords
                    .iter()
                    .enumerate()
                    .map(|(c, (m, _))| {
                        let a: Vec<Elem> = args.iter().map(|&i| elems[i][c]).collect();
                        ms[*m].apply(op, &a)
                    })
                    .collect();
                set.insert(v);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}
