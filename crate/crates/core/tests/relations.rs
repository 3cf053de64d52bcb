mod common;

use common::*;
use coprod::catalog::{instances_up_to, make, CatalogId};
use coprod::piggyback::{
    all_carriers, leq_sublattice, relation_orbits, relations_for, sep_condition, unique_max_applicable, GeneratorSet,
};
use coprod::product::subuniverse_closure;
use coprod::*;
use proptest::prelude::*;

fn generator_set(id: CatalogId) -> GeneratorSet {
    let e = make(id).unwrap();
    GeneratorSet::new(vec![e.algebra], &e.spec).unwrap()
}

#[test]
fn relations_are_maximal_algebraic_and_below_the_order() {
    let caps = Caps::default();
    for id in instances_up_to(6) {
        let gens = generator_set(id);
        let m = gens.algebra(0).clone();
        let sq = direct_product(m.signature(), &[&m, &m], &caps).unwrap();
        let n = m.size();
        let cs = all_carriers(&gens);
        for (i, w1) in cs.iter().enumerate() {
            for (j, w2) in cs.iter().enumerate() {
                let l = leq_sublattice(&gens, w1, w2);
                let rels = relations_for(&gens, w1, w2, (i, j), &caps).unwrap();
                assert!(!rels.is_empty());
                let sets: Vec<ElemSet> = rels
                    .iter()
                    .map(|r| ElemSet::from_elems(n * n, r.pairs.iter().map(|&(a, b)| a * n + b)))
                    .collect();
                for (k, s) in sets.iter().enumerate() {
                    assert!(s.is_subset(&l));
                    let mask: Vec<bool> = (0..n * n).map(|e| s.contains(e)).collect();
                    assert!(closed(&sq.algebra, &mask), "{} r{k} not closed", m.name());
                    for other in sets.iter().filter(|o| *o != s) {
                        assert!(!s.is_subset(other));
                    }
                    for x in l.iter().filter(|&x| !s.contains(x)) {
                        let mut bigger = s.clone();
                        bigger.insert(x);
                        assert!(!subuniverse_closure(&sq.algebra, &bigger).is_subset(&l));
                    }
                }
            }
        }
    }
}

#[test]
fn endomorphism_signatures_have_one_relation_per_pair() {
    let caps = Caps::default();
    let mut applicable = 0;
    for id in instances_up_to(8) {
        let e = make(id).unwrap();
        if !unique_max_applicable(&e.algebra, &e.spec).unwrap() {
            continue;
        }
        applicable += 1;
        let gens = generator_set(id);
        let cs = all_carriers(&gens);
        for (i, w1) in cs.iter().enumerate() {
            for (j, w2) in cs.iter().enumerate() {
                assert_eq!(relations_for(&gens, w1, w2, (i, j), &caps).unwrap().len(), 1, "{:?}", id);
            }
        }
    }
    assert!(applicable >= 5);
}

#[test]
fn pseudocomplemented_relation_counts() {
    let caps = Caps::default();
    let mut literal = vec![];
    let mut orbits = vec![];
    for n in 1..=3 {
        let gens = generator_set(CatalogId::PseudoB(n));
        let top = gens.algebra(0).size() - 1;
        let w = gens.carrier_with_members(0, &[top]).unwrap();
        assert!(sep_condition(&gens, std::slice::from_ref(&w)).holds);
        let rels = relations_for(&gens, &w, &w, (0, 0), &caps).unwrap();
        literal.push(rels.len());
        orbits.push(relation_orbits(&gens, &rels));
    }
    assert_eq!(literal, [1, 4, 27]);
    assert_eq!(orbits, [1, 2, 3]);
}

fn sep_case() -> impl Strategy<Value = (usize, Vec<bool>, Vec<bool>)> {
    (0usize..5).prop_flat_map(|i| {
        (
            Just(i),
            proptest::collection::vec(any::<bool>(), 8),
            proptest::collection::vec(any::<bool>(), 8),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn separation_is_monotone((i, pick, extra) in sep_case()) {
        use CatalogId::*;
        let gens = generator_set([DeMorgan4, Kleene3, HeytingChain(4), MvChain(4), PseudoB(2)][i]);
        let all = all_carriers(&gens);
        let omega: Vec<_> = all.iter().zip(&pick).filter(|(_, &p)| p).map(|(c, _)| c.clone()).collect();
        let sup: Vec<_> = all
            .iter()
            .zip(pick.iter().zip(&extra))
            .filter(|(_, (&p, &e))| p || e)
            .map(|(c, _)| c.clone())
            .collect();
        if sep_condition(&gens, &omega).holds {
            prop_assert!(sep_condition(&gens, &sup).holds);
        }
        prop_assert!(sep_condition(&gens, &all).holds);
    }
}
