mod common;

use std::collections::BTreeSet;

use common::*;
use coprod::catalog::{instances_up_to, CatalogId};
use coprod::distlat::{d_reduct, prime_filters};
use coprod::piggyback::{all_carriers, leq_sublattice, maximal_subuniverses_in, GeneratorSet};
use coprod::product::subuniverse_closure;
use coprod::*;
use proptest::prelude::*;

fn small_algebras(max: usize) -> Vec<FiniteAlgebra> {
    instances_up_to(max).into_iter().map(alg).collect()
}

#[test]
fn hom_enumeration_matches_brute_force() {
    let algs = small_algebras(6);
    let mut checked = 0;
    for a in &algs {
        for b in &algs {
            if a.signature() != b.signature() || (b.size() as f64).powi(a.size() as i32) > 1e6 {
                continue;
            }
            let got: Vec<Vec<Elem>> = hom_enumerate(a, b).unwrap().into_iter().map(|h| h.map).collect();
            assert_eq!(got, brute_homs(a, b), "{} -> {}", a.name(), b.name());
            checked += 1;
        }
    }
    assert!(checked > 30, "only {checked} pairs checked");
}

#[test]
fn generated_congruences_are_least() {
    for a in small_algebras(5) {
        let n = a.size();
        let compat: Vec<Vec<usize>> = partitions(n).into_iter().filter(|p| compatible(&a, p)).collect();
        for x in 0..n {
            for y in x + 1..n {
                let got = congruence_generated(&a, &[(x, y)]).unwrap();
                // least compatible partition relating x and y: the one with the most blocks
                let best = compat
                    .iter()
                    .filter(|p| p[x] == p[y])
                    .max_by_key(|p| p.iter().max().unwrap())
                    .unwrap();
                assert_eq!(got, Partition::from_labels(best), "{} ({x},{y})", a.name());
                for p in compat.iter().filter(|p| p[x] == p[y]) {
                    assert!(got.refines(&Partition::from_labels(p)));
                }
            }
        }
    }
}

#[test]
fn isp_membership_is_discrete_relative_congruence() {
    let algs = small_algebras(5);
    for a in &algs {
        for m in &algs {
            if a.signature() != m.signature() {
                continue;
            }
            let ms = std::slice::from_ref(m);
            let has_delta = relative_congruences(a, ms).unwrap().iter().any(|p| p.is_discrete());
            assert_eq!(in_isp(a, ms).unwrap(), has_delta, "{} in ISP({})", a.name(), m.name());
        }
    }
}

#[test]
fn prime_filters_match_subset_scan() {
    for id in instances_up_to(12) {
        let (a, spec) = entry(id);
        let l = d_reduct(&a, &spec).unwrap();
        let got: BTreeSet<Vec<Elem>> = prime_filters(&l).iter().map(|f| f.members.to_vec()).collect();
        let want = brute_prime_filters(l.size(), |x, y| l.meet(x, y), |x, y| l.join(x, y), l.bot(), l.top());
        assert_eq!(got, want, "{}", a.name());
        assert_eq!(got.len(), l.join_irreducibles().len());
    }
}

/// Generators and carrier pairs whose relations are computed in the classification examples.
fn relation_instances() -> Vec<FiniteAlgebra> {
    use CatalogId::*;
    [DeMorgan4, Kleene3, PseudoB(0), PseudoB(1), PseudoB(2), PseudoB(3), HeytingChain(3), HeytingChain(4)]
        .into_iter()
        .chain((1..=4).map(MvChain))
        .map(alg)
        .collect()
}

#[test]
fn maximal_subuniverses_match_subset_scan() {
    let mut small = 0;
    for m in relation_instances() {
        let spec = coprod::catalog::make_str(m.name()).map(|e| e.spec).unwrap_or_else(|_| DReductSpec::literal());
        let gens = GeneratorSet::new(vec![m.clone()], &spec).unwrap();
        let sq = direct_product(m.signature(), &[&m, &m], &Caps::default()).unwrap();
        for w1 in all_carriers(&gens) {
            for w2 in all_carriers(&gens) {
                let l = leq_sublattice(&gens, &w1, &w2);
                if l.count() > 14 {
                    continue;
                }
                let got: BTreeSet<Vec<Elem>> =
                    maximal_subuniverses_in(&sq.algebra, &l).iter().map(|s| s.to_vec()).collect();
                assert_eq!(got, brute_maximal_in(&sq.algebra, &l.to_vec()), "{}", m.name());
                if sq.algebra.size() <= 12 {
                    small += 1;
                }
            }
        }
    }
    assert!(small >= 6);
}

#[test]
fn maximal_subuniverses_of_mixed_products() {
    let c3 = alg(CatalogId::HeytingChain(3));
    let c2 = alg(CatalogId::HeytingChain(2));
    let gens = GeneratorSet::new(vec![c2.clone(), c3.clone()], &DReductSpec::literal()).unwrap();
    let p = direct_product(c2.signature(), &[&c2, &c3], &Caps::default()).unwrap();
    let cs = all_carriers(&gens);
    for w1 in cs.iter().filter(|w| w.sort == 0) {
        for w2 in cs.iter().filter(|w| w.sort == 1) {
            let l = leq_sublattice(&gens, w1, w2);
            let got: BTreeSet<Vec<Elem>> = maximal_subuniverses_in(&p.algebra, &l).iter().map(|s| s.to_vec()).collect();
            assert_eq!(got, brute_maximal_in(&p.algebra, &l.to_vec()));
        }
    }
}

#[test]
fn free_algebras_match_closure_oracle() {
    use CatalogId::*;
    let caps = Caps::with_product_size(1 << 24);
    for (id, n, size) in [(Kleene3, 1, 6), (DeMorgan4, 1, 6), (Bool2, 1, 4), (Bool2, 2, 16), (Kleene3, 2, 84)] {
        let m = alg(id);
        let oracle = free_oracle(std::slice::from_ref(&m), n);
        assert_eq!(oracle.len(), size, "{} n={n}", m.name());
        let f = free_algebra(std::slice::from_ref(&m), n, &caps).unwrap();
        assert_eq!(f.algebra.size(), size);
        let got: std::collections::HashSet<Vec<Elem>> = f.values.iter().cloned().collect();
        assert_eq!(got, oracle);
    }
    for id in [DeMorgan4, Kleene3, HeytingChain(3)] {
        let m = alg(id);
        assert_eq!(free_oracle(std::slice::from_ref(&m), 0).len(), 2);
        assert_eq!(free_algebra(&[m], 0, &caps).unwrap().algebra.size(), 2);
    }
}

#[test]
fn free_algebra_universal_property() {
    use CatalogId::*;
    let caps = Caps::with_product_size(1 << 24);
    for (id, n) in [(Bool2, 1), (Bool2, 2), (Kleene3, 1), (Kleene3, 2), (DeMorgan4, 1), (HeytingChain(3), 1), (HeytingChain(4), 1)] {
        let m = alg(id);
        let f = free_algebra(std::slice::from_ref(&m), n, &caps).unwrap();
        let homs = hom_enumerate(&f.algebra, &m).unwrap();
        for assignment in tuples(m.size(), n) {
            let ext = homs
                .iter()
                .filter(|h| f.generators.iter().zip(&assignment).all(|(&g, &v)| h.apply(g) == v))
                .count();
            assert_eq!(ext, 1, "{} n={n} {assignment:?}", m.name());
        }
        if n == 1 {
            assert_eq!(homs.len(), m.size());
        }
    }
}

fn closure_case() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0usize..6).prop_flat_map(|i| (Just(i), proptest::collection::vec(0usize..16, 0..4)))
}

proptest! {
    #[test]
    fn closure_is_idempotent((i, seeds) in closure_case()) {
        use CatalogId::*;
        let a = alg([DeMorgan4, Kleene3, PseudoB(3), HeytingChain(5), MvChain(6), MoisilL(4)][i]);
        let s = ElemSet::from_elems(a.size(), seeds.into_iter().map(|x| x % a.size()));
        let c = subuniverse_closure(&a, &s);
        prop_assert!(s.is_subset(&c));
        prop_assert_eq!(subuniverse_closure(&a, &c), c.clone());
        let mask: Vec<bool> = (0..a.size()).map(|x| c.contains(x)).collect();
        prop_assert!(closed(&a, &mask));
    }
}
