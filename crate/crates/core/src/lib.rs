//! Finite algebras over bounded distributive lattices: quasivariety machinery,
//! finite Priestley duality, piggyback natural dualities and coproducts.

pub mod algebra;
pub mod bitset;
pub mod caps;
pub mod catalog;
pub mod classify;
pub mod congruence;
pub mod distlat;
pub mod duality;
pub mod error;
pub mod hom;
pub mod piggyback;
pub mod poset;
pub mod product;

pub use algebra::{eval_term, Algebra, Elem, FiniteAlgebra, Signature, Symbol, Term};
pub use bitset::ElemSet;
pub use caps::Caps;
pub use congruence::{
    congruence_generated, in_isp, is_compatible, is_rel_subdirectly_irreducible, quotient, relative_congruences,
    Partition, Quotient,
};
pub use error::{Error, Result};
pub use hom::{embeds, hom_enumerate, is_homomorphism, isomorphic, Homomorphism};
pub use product::{
    direct_product, free_algebra, subalgebra, subalgebras_up_to_iso, subuniverse_closure, subuniverses, FreeAlgebra,
    Product, ProductAlgebra,
};
pub use catalog::{make, table1_suite, CatalogEntry, CatalogId, Expected};
pub use distlat::{
    d_reduct, dual_of_hom, prime_filters, priestley_dual, upset_lattice, DReductSpec, DistLatticeReduct, PrimeFilter,
};
pub use poset::{poset_isomorphic, FinitePoset};
pub use piggyback::{
    all_carriers, build_alter_ego, maximal_subuniverses_in, minimal_omega, sep_condition, AlterEgo, CarrierMap,
    GeneratorSet, OmegaChoice, SortedRelation,
};
pub use classify::{
    check_condition_c, condition_c_scan, find_single_generator, flowchart_classify, flowchart_classify_with,
    simplify_generators,
    ClassificationReport, ConditionC,
};
pub use duality::{
    coproduct, e_functor, evaluation, iota_check, lambda_map, natural_dual, reflector, reveng_priestley,
    structure_product, Coproduct, EAlgebra, IotaCheck, MultisortedStructure, PreorderSpace, Reconstruction, Reflection,
};
