use coprod::catalog::{self, CatalogId};
use coprod::{FiniteAlgebra, Signature};
use coprod_cli::AlgebraFile;
use proptest::prelude::*;

fn shipped(name: &str) -> String {
    let path = format!("{}/algebras/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn shipped_demorgan_file_matches_catalog() {
    let parsed = AlgebraFile::parse(&shipped("demorgan4.alg")).unwrap();
    let entry = catalog::make(CatalogId::DeMorgan4).unwrap();
    assert_eq!(parsed, AlgebraFile::from_entry(&entry));
    assert_eq!(AlgebraFile::parse(&parsed.to_text()).unwrap(), parsed);
}

#[test]
fn shipped_mv_file_matches_catalog() {
    let parsed = AlgebraFile::parse(&shipped("mv3.alg")).unwrap();
    let entry = catalog::make(CatalogId::MvChain(2)).unwrap();
    assert_eq!(parsed.algebras[0], entry.algebra);
    assert_eq!(parsed.reduct.as_ref(), Some(&entry.spec));
}

#[test]
fn every_small_catalog_entry_round_trips() {
    for id in catalog::instances_up_to(12) {
        let f = AlgebraFile::from_entry(&catalog::make(id).unwrap());
        assert_eq!(AlgebraFile::parse(&f.to_text()).unwrap(), f, "{id}");
    }
}

#[test]
fn several_algebras_in_one_file() {
    let text = "algebra a size 1\nop c 0\ntable c = 0\n\nalgebra b size 2\nop c 0\ntable c = 1\ncarrier {1}\n";
    let f = AlgebraFile::parse(text).unwrap();
    assert_eq!(f.algebras.len(), 2);
    assert_eq!(f.carriers[0].algebra, 1);
    assert_eq!(f.carriers[0].members, vec![1]);
}

#[test]
fn errors_carry_locations() {
    let cases = [
        ("op meet 2\n", 1, 1, "before any `algebra`"),
        ("algebra a size x\n", 1, 16, "invalid size"),
        ("algebra a size 2\nop f 1\ntable f = 0 2\n", 3, 13, "value 2 outside 0..2"),
        ("algebra a size 2\nelements p q\nop f 1\ntable f = p r\n", 4, 13, "unknown element `r`"),
        ("algebra a size 2\nop f 1\ntable g = 0 1\n", 3, 7, "undefined symbol `g`"),
        ("algebra a size 2\nop f 1\ncarrier {0, 5}\n", 3, 13, "value 5 outside"),
        ("algebra a size 2\nop f x\n", 2, 6, "invalid arity"),
        ("algebra a size 2\nop f 1\nop f 2\n", 3, 4, "declared twice"),
        ("# only a comment\n", 1, 1, "no `algebra`"),
    ];
    for (text, line, column, needle) in cases {
        let e = AlgebraFile::parse(text).unwrap_err();
        assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
        assert!(e.message.contains(needle), "{text:?}: {e}");
    }
}

#[test]
fn semantic_errors_come_from_the_core() {
    let e = AlgebraFile::parse("algebra a size 2\nelements p p\nop f 0\ntable f = 0\n").unwrap_err();
    assert_eq!(e.line, 1);
    assert!(e.message.contains("label"), "{e}");
}

fn arb_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=4, prop::collection::vec(0usize..=2, 1..=3), any::<bool>()).prop_flat_map(|(n, arities, labelled)| {
        let lens: Vec<usize> = arities.iter().map(|&a| n.pow(a as u32)).collect();
        let tables = lens.iter().map(|&l| prop::collection::vec(0..n, l)).collect::<Vec<_>>();
        (Just(n), Just(arities), Just(labelled), tables)
    })
    .prop_map(|(n, arities, labelled, tables)| {
        let sig = Signature::new(arities.iter().enumerate().map(|(i, &a)| (format!("f{i}"), a))).unwrap();
        let a = FiniteAlgebra::new("r", sig, n, tables).unwrap();
        if labelled {
            a.with_labels((0..n).map(|i| format!("e{}", n - i))).unwrap()
        } else {
            a
        }
    })
}

proptest! {
    #[test]
    fn export_then_parse_is_identity(a in arb_algebra()) {
        let f = AlgebraFile { algebras: vec![a], reduct: None, carriers: vec![] };
        prop_assert_eq!(AlgebraFile::parse(&f.to_text()).unwrap(), f);
    }
}
