//! Permutation groups: elements, stabilizer chains, conjugacy classes,
//! power maps and random sampling.

mod group;
mod parse;
mod perm;
mod random;
mod schreier;

pub use group::{class_fusion, closure, element_orders, ConjClass, Elements, PermGroup, Reality, DEFAULT_ENUM_BUDGET};
pub use parse::{format_group, parse_group};
pub use perm::{compose, Perm};
pub use random::{ProductReplacement, PR_SLOTS, PR_WARMUP};
pub use schreier::StabChain;
