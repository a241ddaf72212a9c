use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::core::Rack;
use crate::error::{Error, Result};
use crate::permgrp::StabChain;

/// Unions of orbits up to this size are checked for closure on every pair.
pub const CLOSURE_CHECK_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    Randomized { samples: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Maximal number of pairs `(r, s)` examined.
    pub max_pairs: u64,
    /// Maximal size of an orbit certificate.
    pub orbit_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_pairs: 100_000_000, orbit_cap: 1_000_000 }
    }
}

/// Certificate that a rack is of type D: `r ▷ (s ▷ (r ▷ s)) ≠ s` and the orbits
/// of `r` and `s` under `⟨φ_r, φ_s⟩` are disjoint, so their union is a
/// decomposable subrack.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDWitness {
    pub r: usize,
    pub s: usize,
    pub r_element: String,
    pub s_element: String,
    pub orbit_r: Vec<usize>,
    pub orbit_s: Vec<usize>,
    /// Order of `⟨r, s⟩` for conjugation racks.
    #[serde(with = "crate::wire::opt_dec")]
    pub subgroup_order: Option<u128>,
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: SearchBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Witness(TypeDWitness),
    /// Exhaustive search completed without a witness.
    NotTypeD { pairs: u64 },
    /// Randomized search, or exhaustive search with skipped pairs, found nothing.
    Unknown { pairs: u64, skipped: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&TypeDWitness> {
        match self {
            SearchOutcome::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// `r ▷ (s ▷ (r ▷ s)) ≠ s`; for conjugation racks this is `(rs)² ≠ (sr)²`.
pub fn braid_condition(x: &Rack, r: usize, s: usize) -> bool {
    x.op(r, x.op(s, x.op(r, s))) != s
}

enum PairResult {
    Witness(Box<TypeDWitness>),
    Fails,
    Skipped,
}

fn try_pair(x: &Rack, r: usize, s: usize, strategy: Strategy, seed: u64, budget: SearchBudget) -> PairResult {
    if !braid_condition(x, r, s) {
        return PairResult::Fails;
    }
    let orbit_r = match x.orbit(r, &[r, s], budget.orbit_cap) {
        Ok(o) => o,
        Err(_) => return PairResult::Skipped,
    };
    if orbit_r.binary_search(&s).is_ok() {
        return PairResult::Fails;
    }
    let orbit_s = match x.orbit(s, &[r, s], budget.orbit_cap) {
        Ok(o) => o,
        Err(_) => return PairResult::Skipped,
    };
    let subgroup_order = match (x.element(r), x.element(s)) {
        (Some(a), Some(b)) => {
            let deg = a.degree().max(b.degree());
            Some(StabChain::new(&[a.clone(), b.clone()], deg).order())
        }
        _ => None,
    };
    PairResult::Witness(Box::new(TypeDWitness {
        r,
        s,
        r_element: x.element_name(r),
        s_element: x.element_name(s),
        orbit_r,
        orbit_s,
        subgroup_order,
        strategy,
        seed,
        budget,
    }))
}

/// Builds and checks the certificate for a specific pair.
pub fn witness_for_pair(x: &Rack, r: usize, s: usize, budget: SearchBudget) -> Result<Option<TypeDWitness>> {
    match try_pair(x, r, s, Strategy::Exhaustive, 0, budget) {
        PairResult::Witness(w) => {
            w.validate(x)?;
            Ok(Some(*w))
        }
        PairResult::Fails => Ok(None),
        PairResult::Skipped => Err(Error::budget("rack orbit", budget.orbit_cap as u128)),
    }
}

/// Searches for a type-D certificate.
///
/// The exhaustive strategy fixes `r` at one element per orbit of the known
/// automorphism group and tries every `s`; the randomized strategy samples
/// both. Candidates are examined in parallel and the first one in the
/// deterministic candidate order wins.
pub fn type_d_search(x: &Rack, strategy: Strategy, seed: u64, budget: SearchBudget) -> Result<SearchOutcome> {
    let n = x.size();
    let pairs: Vec<(usize, usize)> = match strategy {
        Strategy::Exhaustive => {
            let total = x.orbit_representatives().len() as u64 * n as u64;
            if total > budget.max_pairs {
                return Err(Error::budget("type-D pairs", budget.max_pairs));
            }
            x.orbit_representatives().iter().flat_map(|&r| (0..n).map(move |s| (r, s))).collect()
        }
        Strategy::Randomized { samples } => {
            let samples = samples.min(budget.max_pairs);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        }
    };
    let skipped = AtomicU64::new(0);
    let found = pairs.par_iter().find_map_first(|&(r, s)| match try_pair(x, r, s, strategy, seed, budget) {
        PairResult::Witness(w) => Some(w),
        PairResult::Skipped => {
            skipped.fetch_add(1, Ordering::Relaxed);
            None
        }
        PairResult::Fails => None,
    });
    if let Some(w) = found {
        w.validate(x)?;
        return Ok(SearchOutcome::Witness(*w));
    }
    let skipped = skipped.into_inner();
    let tried = pairs.len() as u64;
    Ok(match strategy {
        Strategy::Exhaustive if skipped == 0 => SearchOutcome::NotTypeD { pairs: tried },
        _ => SearchOutcome::Unknown { pairs: tried, skipped },
    })
}

impl TypeDWitness {
    /// Re-checks the certificate against `x` from scratch.
    pub fn validate(&self, x: &Rack) -> Result<()> {
        let n = x.size();
        if self.r >= n || self.s >= n {
            return Err(Error::invalid("witness elements outside the carrier"));
        }
        if x.element_name(self.r) != self.r_element || x.element_name(self.s) != self.s_element {
            return Err(Error::invalid("witness elements do not match the carrier"));
        }
        if !braid_condition(x, self.r, self.s) {
            return Err(Error::invalid("r ▷ (s ▷ (r ▷ s)) = s"));
        }
        let cap = n.max(1);
        let orbit_r = x.orbit(self.r, &[self.r, self.s], cap)?;
        let orbit_s = x.orbit(self.s, &[self.r, self.s], cap)?;
        if orbit_r != self.orbit_r || orbit_s != self.orbit_s {
            return Err(Error::invalid("stored orbits differ from recomputed orbits"));
        }
        if orbit_r.iter().any(|a| orbit_s.binary_search(a).is_ok()) {
            return Err(Error::invalid("orbits are not disjoint"));
        }
        let y: Vec<usize> = orbit_r.iter().chain(&orbit_s).copied().collect();
        if y.len() <= CLOSURE_CHECK_LIMIT {
            let mut inside = vec![false; n];
            for &a in &y {
                inside[a] = true;
            }
            for &a in &y {
                for &b in &y {
                    if !inside[x.op(a, b)] {
                        return Err(Error::invalid("orbit union is not a subrack"));
                    }
                }
            }
            for (part, other) in [(&orbit_r, &orbit_s), (&orbit_s, &orbit_r)] {
                for &a in part.iter() {
                    for &b in part.iter() {
                        if other.binary_search(&x.op(a, b)).is_ok() {
                            return Err(Error::invalid("orbit is not a subrack"));
                        }
                    }
                }
            }
        }
        if let (Some(a), Some(b), Some(ord)) = (x.element(self.r), x.element(self.s), self.subgroup_order) {
            let deg = a.degree().max(b.degree());
            if StabChain::new(&[a.clone(), b.clone()], deg).order() != ord {
                return Err(Error::invalid("subgroup order differs"));
            }
        }
        Ok(())
    }

    /// Transports a witness found in a subrack along its embedding.
    pub fn embed(&self, embedding: &[usize], ambient: &Rack) -> Result<TypeDWitness> {
        let map = |v: &[usize]| {
            let mut out: Vec<usize> = v.iter().map(|&i| embedding[i]).collect();
            out.sort_unstable();
            out
        };
        let w = TypeDWitness {
            r: embedding[self.r],
            s: embedding[self.s],
            r_element: ambient.element_name(embedding[self.r]),
            s_element: ambient.element_name(embedding[self.s]),
            orbit_r: map(&self.orbit_r),
            orbit_s: map(&self.orbit_s),
            ..self.clone()
        };
        w.validate(ambient)?;
        Ok(w)
    }
}
