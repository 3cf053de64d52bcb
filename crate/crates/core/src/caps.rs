use serde::Serialize;

/// Resource limits shared by the enumeration routines. Exceeding any of them
/// is reported as [`crate::Error::CapExceeded`], never silently truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Maximum number of elements of a direct product (including the ambient
    /// product used to build free algebras).
    pub product_size: u128,
    /// Maximum number of entries stored across the operation tables of a
    /// materialized algebra.
    pub table_entries: u128,
    /// Maximum number of points per sort of a multisorted product structure.
    pub points_per_sort: u128,
    /// Maximum number of search nodes visited while enumerating morphisms
    /// into the alter ego.
    pub morphism_visits: u64,
    /// Largest generator for which subalgebras are enumerated.
    pub subalgebra_generator_size: usize,
    /// Maximum number of up-sets enumerated for a poset.
    pub upsets: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            product_size: 1_000_000,
            table_entries: 50_000_000,
            points_per_sort: 5_000,
            morphism_visits: 10_000_000,
            subalgebra_generator_size: 12,
            upsets: 1_000_000,
        }
    }
}

impl Caps {
    /// Default caps with the product-size cap replaced.
    pub fn with_product_size(product_size: u128) -> Self {
        Caps {
            product_size,
            ..Caps::default()
        }
    }
}
