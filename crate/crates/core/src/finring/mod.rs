//! Finite rings, modules and the constructions built from their tables.

pub mod derivation;
pub mod group;
pub mod ideals;
pub mod module;
pub mod ring;
pub mod search;
pub mod snf;
pub mod subset;
pub mod tensor;

pub use derivation::{
    check_module_derivation, check_module_derivation_with, check_ring_derivation, enumerate_derivations,
    enumerate_derivations_exhaustive, enumerate_module_derivations, inner_derivation, Derivation,
};
pub use group::{AbelianGroup, Presentation};
pub use ideals::{enumerate_ideals, generate_ideal, is_ideal};
pub use module::{Action, FiniteModule};
pub use ring::{ring_from_tables, FiniteRing, RingRef, RingTables};
pub use search::{find_ring_isomorphism, hom_set, ring_homs, Search};
pub use snf::SnfQuotient;
pub use subset::Subset;
pub use tensor::{bimodule_to_right_module, right_module_to_bimodule, tensor_over_r, tensor_over_z, TensorProduct, TensorRing};
