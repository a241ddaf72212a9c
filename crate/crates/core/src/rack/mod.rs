//! Finite racks, affine racks and the type-D search.

mod affine;
mod core;
mod quotient;
mod typed;

pub use self::core::{format_rack, parse_rack, Rack, RackKind, EXHAUSTIVE_AXIOM_LIMIT, SAMPLED_TRIPLES};
pub use affine::{semidirect_realization, AffineClass, AffineClassKind, AffineRack, SemidirectRealization, AFFINE_CARRIER_LIMIT};
pub use quotient::{direct_product, type_d_via_quotient, Homomorphism, LiftedWitness};
pub use typed::{braid_condition, type_d_search, witness_for_pair, SearchBudget, SearchOutcome, Strategy, TypeDWitness};
