mod common;

use common::*;
use coprod::catalog::{make, CatalogId};
use coprod::distlat::{d_reduct, prime_filters};
use coprod::*;

fn classify(id: CatalogId) -> (FiniteAlgebra, ClassificationReport) {
    let e = make(id).unwrap();
    let r = flowchart_classify(std::slice::from_ref(&e.algebra), &e.spec, &Caps::default()).unwrap();
    (e.algebra, r)
}

#[test]
fn iota_flags_match_verdicts_on_doubled_generators() {
    use CatalogId::*;
    let caps = Caps::default();
    for id in [Bool2, DeMorgan4, Kleene3, HeytingChain(3), PseudoB(1), PseudoB(2), MvChain(2), MoisilL(3)] {
        let (m, r) = classify(id);
        let io = iota_check(&r.ego, &[m.clone(), m.clone()], &caps).unwrap();
        assert_eq!((io.surjective, io.order_embedding), (r.verdict_e, r.verdict_s), "{id}");
        if r.verdict_e {
            assert!(io.injections_injective, "{id}");
        }
    }
}

#[test]
fn iota_factors_through_the_dual() {
    use CatalogId::*;
    let caps = Caps::default();
    for id in [DeMorgan4, Kleene3, HeytingChain(3)] {
        let (m, r) = classify(id);
        let ego = &r.ego;
        let ks = [m.clone(), m.clone()];
        let c = coproduct(ego, &ks, &caps).unwrap();
        let io = iota_check(ego, &ks, &caps).unwrap();
        let spec = &ego.generators.spec;
        let fc = prime_filters(&d_reduct(&c.algebra, spec).unwrap());
        let fb = prime_filters(&d_reduct(&m, spec).unwrap());
        let x = natural_dual(&c.algebra, ego, &caps).unwrap();
        for (k, w) in ego.omega.iter().enumerate() {
            for point in &x.points[w.sort] {
                // Φ(x, ω) = ω∘x, then ι
                let phi = ElemSet::from_elems(c.algebra.size(), (0..c.algebra.size()).filter(|&e| w.eval(point[e])));
                let i = fc.iter().position(|f| f.members == phi).unwrap();
                // Ψ(x, ω) = (ω∘x∘ε_B)_B
                let psi: Vec<usize> = c
                    .injections
                    .iter()
                    .map(|eps| {
                        let s = ElemSet::from_elems(m.size(), (0..m.size()).filter(|&b| w.eval(point[eps.apply(b)])));
                        fb.iter().position(|f| f.members == s).unwrap()
                    })
                    .collect();
                assert_eq!(io.map[i], psi, "{id} ω{k}");
            }
        }
    }
}

#[test]
fn single_relation_orders_the_dual() {
    let caps = Caps::with_product_size(1 << 20);
    let (dm, r) = classify(CatalogId::DeMorgan4);
    assert_eq!(r.omega.len(), 1);
    let free = free_algebra(std::slice::from_ref(&dm), 1, &caps).unwrap().algebra;
    for a in [dm.clone(), alg(CatalogId::Bool2), alg(CatalogId::Kleene3), free] {
        let x = natural_dual(&a, &r.ego, &caps).unwrap();
        let n = x.point_count(0);
        let rel = &x.relations[0];
        let p = FinitePoset::from_fn((0..n).map(|i| i.to_string()).collect(), |i, j| rel.contains(&(i, j))).unwrap();
        let l = d_reduct(&a, &DReductSpec::literal()).unwrap();
        assert!(poset_isomorphic(&p, &priestley_dual(&l)).is_some(), "{}", a.name());
    }
}

#[test]
fn natural_dual_points_are_the_homs() {
    let caps = Caps::default();
    let (k, r) = classify(CatalogId::Kleene3);
    for a in [k.clone(), alg(CatalogId::Bool2)] {
        let x = natural_dual(&a, &r.ego, &caps).unwrap();
        assert_eq!(x.points[0], brute_homs(&a, &k));
    }
}

#[test]
fn reflection_into_a_subquasivariety() {
    let caps = Caps::default();
    let (k, kr) = classify(CatalogId::Kleene3);
    let (_, dr) = classify(CatalogId::DeMorgan4);
    let native = coproduct(&kr.ego, &[k.clone(), k.clone()], &caps).unwrap();
    let in_dm = coproduct(&dr.ego, &[k.clone(), k.clone()], &caps).unwrap();
    let refl = reflector(&in_dm.algebra, std::slice::from_ref(&k)).unwrap();
    assert!(!refl.collapsed);
    assert!(in_dm.algebra.size() > native.algebra.size());
    assert!(isomorphic(&refl.quotient.algebra, &native.algebra).is_some());
}

#[test]
fn coproduct_sizes() {
    let caps = Caps::default();
    let (dm, r) = classify(CatalogId::DeMorgan4);
    assert_eq!(coproduct(&r.ego, &[dm.clone(), dm.clone()], &caps).unwrap().algebra.size(), 16);
    let (b, br) = classify(CatalogId::Bool2);
    // 2 is initial among Boolean algebras
    assert_eq!(coproduct(&br.ego, &[b.clone(), b.clone()], &caps).unwrap().algebra.size(), 2);
    // the empty family gives the initial algebra
    assert_eq!(coproduct(&r.ego, &[], &caps).unwrap().algebra.size(), 2);
}
