//! Character tables: the CTAB format, Dixon–Burnside computation and the
//! character-theoretic formulas used by the criteria.

mod ctab;
mod dixon;
mod table;

use num_bigint::BigUint;

pub use ctab::{format_ctab, parse_ctab, parse_ctab_unchecked};
pub use dixon::{compute_character_table, compute_character_table_with_limit, DEFAULT_DIXON_LIMIT};
pub use table::{eigen_from_values, CharacterTable, EigenCounts};

use crate::error::Result;
use crate::permgrp::PermGroup;

/// Direct count of `a ∈ O_i` with `a⁻¹ z ∈ O_j` for a fixed `z ∈ O_k`.
pub fn s_count_bruteforce(g: &PermGroup, i: usize, j: usize, k: usize) -> Result<BigUint> {
    let classes = g.conjugacy_classes()?;
    let z = &classes[k].representative;
    let elems = g.elements()?;
    let mut count = 0u64;
    for &a in &classes[i].members {
        let b = &elems.get(a as usize).inverse() * z;
        if g.class_of(&b)? == j {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}
