mod common;

use common::*;
use coprod::catalog::instances_up_to;
use coprod::distlat::{d_reduct, dual_of_hom, lattice_coproduct, prime_filters, upset_lattice};
use coprod::*;

fn reducts(max: usize) -> Vec<DistLatticeReduct> {
    let mut out: Vec<DistLatticeReduct> = vec![];
    for id in instances_up_to(max) {
        let (a, spec) = entry(id);
        let l = d_reduct(&a, &spec).unwrap();
        if !out.iter().any(|o| isomorphic(&o.to_algebra(), &l.to_algebra()).is_some()) {
            out.push(l);
        }
    }
    out
}

fn two() -> FiniteAlgebra {
    let (l, _) = upset_lattice(&FinitePoset::chain(1), &Caps::default()).unwrap();
    l.to_algebra()
}

#[test]
fn coproducts_dualise_to_products() {
    let ls = reducts(9);
    assert!(ls.len() >= 6);
    let mut checked = 0;
    for a in &ls {
        for b in &ls {
            let (pa, pb) = (priestley_dual(a), priestley_dual(b));
            if pa.size() * pb.size() > 64 {
                continue;
            }
            let caps = Caps {
                upsets: 150,
                ..Caps::default()
            };
            let c = match lattice_coproduct(&[a, b], &caps) {
                Ok(c) => c,
                Err(e) if e.is_cap() => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(poset_isomorphic(&priestley_dual(&c), &pa.product(&pb)).is_some());
            // bounded homs into 2 are pairs of bounded homs into 2
            if c.size() <= 10 {
                let two = two();
                let n = brute_homs(&c.to_algebra(), &two).len();
                assert_eq!(n, brute_homs(&a.to_algebra(), &two).len() * brute_homs(&b.to_algebra(), &two).len());
            }
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn duals_of_homs_are_strong() {
    let ls = reducts(7);
    for a in &ls {
        for b in &ls {
            let pa = prime_filters(a);
            let pb = prime_filters(b);
            for h in hom_enumerate(&a.to_algebra(), &b.to_algebra()).unwrap() {
                let d = dual_of_hom(a, b, &h.map).unwrap();
                assert_eq!(d.len(), pb.len());
                // order preserving
                for i in 0..pb.len() {
                    for j in 0..pb.len() {
                        if pb[i].members.is_subset(&pb[j].members) {
                            assert!(pa[d[i]].members.is_subset(&pa[d[j]].members));
                        }
                    }
                }
                if h.is_injective() {
                    let mut img = d.clone();
                    img.sort_unstable();
                    img.dedup();
                    assert_eq!(img.len(), pa.len(), "{} -> {}", a.name(), b.name());
                }
                if h.is_surjective() {
                    for i in 0..pb.len() {
                        for j in 0..pb.len() {
                            assert_eq!(
                                pa[d[i]].members.is_subset(&pa[d[j]].members),
                                pb[i].members.is_subset(&pb[j].members)
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn non_homs_are_rejected() {
    let ls = reducts(4);
    let l = &ls[0];
    let constant = vec![l.top(); l.size()];
    assert!(dual_of_hom(l, l, &constant).is_err());
}

#[test]
fn upset_lattice_inverts_priestley_dual() {
    for l in reducts(10) {
        let (k, _) = upset_lattice(&priestley_dual(&l), &Caps::default()).unwrap();
        assert!(isomorphic(&k.to_algebra(), &l.to_algebra()).is_some(), "{}", l.name());
    }
}
