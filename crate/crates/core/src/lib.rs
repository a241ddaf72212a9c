//! Racks, conjugacy classes, character tables and the criteria deciding
//! when Nichols algebras over a conjugacy class are infinite-dimensional.

pub mod chartab;
pub mod criteria;
pub mod cyclo;
pub mod diagonal;
pub mod error;
pub mod fp;
pub mod nichols;
pub mod permgrp;
pub mod rack;
pub mod wire;

pub use error::{Error, Result};
