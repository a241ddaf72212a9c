use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{CriterionId, Effect, Evidence, Finding, Reason};
use crate::error::Result;
use crate::fp::is_prime;
use crate::permgrp::{Perm, PermGroup, Reality};
use crate::rack::{AffineRack, AFFINE_CARRIER_LIMIT};

/// An embedding of `F_p^t ⋊ <T>` into `G` with `ψ(0, T) = σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRealization {
    pub p: u64,
    pub dim: usize,
    pub d: u64,
    pub j: u64,
    /// `T` acting on column coordinates in `basis`.
    pub matrix: Vec<Vec<u64>>,
    pub sigma: Perm,
    pub basis: Vec<Perm>,
    #[serde(with = "crate::wire::dec")]
    pub subgroup_order: u128,
}

impl AffineRealization {
    pub fn affine_rack(&self) -> Result<AffineRack> {
        AffineRack::simple(self.p, self.dim, self.matrix.clone())
    }

    pub fn finding(&self) -> Finding {
        let evidence = Evidence::Affine {
            p: self.p,
            dim: self.dim,
            d: self.d,
            j: self.j,
            matrix: self.matrix.clone(),
            sigma: self.sigma.to_string(),
            basis: self.basis.iter().map(Perm::to_string).collect(),
            subgroup_order: self.subgroup_order,
        };
        Finding { reason: Reason::new(CriterionId::AffineQuasiReal, evidence), effect: Effect::AllInfinite }
    }

    /// Rechecks the embedding in `g` from the stored data.
    pub fn verify(&self, g: &PermGroup) -> Result<bool> {
        let r = match self.affine_rack() {
            Ok(r) => r,
            Err(_) => return Ok(false),
        };
        if r.order() != self.d || self.sigma.order() != self.d || self.p == 2 && self.d.is_multiple_of(2) {
            return Ok(false);
        }
        let Some(span) = span_of(&self.basis, self.p, AFFINE_CARRIER_LIMIT) else { return Ok(false) };
        if span.len() != (self.p as usize).pow(self.dim as u32) || !self.basis.iter().all(|b| g.contains(b)) {
            return Ok(false);
        }
        for (c, b) in self.basis.iter().enumerate() {
            let image = self.sigma.conj(b);
            let coords = span.get(&image);
            let want: Vec<u64> = (0..self.dim).map(|row| self.matrix[row][c]).collect();
            if coords != Some(&want) {
                return Ok(false);
            }
        }
        if (1..self.d).any(|i| span.contains_key(&self.sigma.pow(i as i64))) {
            return Ok(false);
        }
        let mut gens = self.basis.clone();
        gens.push(self.sigma.clone());
        let h = PermGroup::with_degree(gens, g.degree());
        let reality = g.reality_of(&self.sigma)?;
        let quasi = matches!(&reality, Reality::QuasiReal(js) if js.contains(&self.j) && 1 < self.j && self.j < self.d);
        Ok(quasi && h.order() == self.subgroup_order && self.subgroup_order == span.len() as u128 * self.d as u128)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum AffineSearch {
    Found(AffineRealization),
    /// No realization; `candidates` elements were tried.
    NotFound { candidates: u64 },
    /// The class is not quasi-real, or `p > 2` cannot hold.
    Inapplicable,
}

/// Coordinates of every element of the elementary abelian group spanned by `basis`.
fn span_of(basis: &[Perm], p: u64, cap: usize) -> Option<HashMap<Perm, Vec<u64>>> {
    let t = basis.len();
    let mut span: HashMap<Perm, Vec<u64>> = HashMap::from([(Perm::identity(), vec![0; t])]);
    for (i, b) in basis.iter().enumerate() {
        let current: Vec<(Perm, Vec<u64>)> = span.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut power = Perm::identity();
        for c in 1..p {
            power = &power * b;
            for (e, v) in &current {
                let mut w = v.clone();
                w[i] = c;
                if span.insert(e * &power, w).is_some() {
                    return None;
                }
            }
        }
        if span.len() > cap {
            return None;
        }
    }
    Some(span)
}

/// Searches for `x` of prime order `p` whose `<σ>`-conjugates generate an
/// elementary abelian `E` on which conjugation by `σ` is irreducible of order
/// `d = |σ|`, with `E ∩ <σ> = 1`; `σ` is the representative of class `k`.
pub fn find_affine_realization(g: &PermGroup, k: usize, max_candidates: u64) -> Result<AffineSearch> {
    let class = &g.conjugacy_classes()?[k];
    let sigma = class.representative.clone();
    let d = class.order;
    let Reality::QuasiReal(js) = g.reality_of(&sigma)? else { return Ok(AffineSearch::Inapplicable) };
    let Some(&j) = js.iter().find(|&&j| 1 < j && j < d) else { return Ok(AffineSearch::Inapplicable) };
    let sigma_powers: HashSet<Perm> = (1..d).map(|i| sigma.pow(i as i64)).collect();
    let mut tried = 0u64;
    let mut seen: HashSet<Vec<Perm>> = HashSet::new();
    let mut primes: Vec<u64> = g.conjugacy_classes()?.iter().map(|c| c.order).filter(|&o| is_prime(o)).collect();
    primes.sort();
    primes.dedup();
    for p in primes {
        if p == 2 && d % 2 == 0 {
            continue;
        }
        for x in g.elements()?.iter() {
            if x.order() != p || sigma_powers.contains(x) {
                continue;
            }
            if tried >= max_candidates {
                return Ok(AffineSearch::NotFound { candidates: tried });
            }
            tried += 1;
            let mut conjugates = Vec::with_capacity(d as usize);
            let mut y = x.clone();
            for _ in 0..d {
                conjugates.push(y.clone());
                y = sigma.conj(&y);
            }
            if !conjugates.iter().enumerate().all(|(a, u)| conjugates[a + 1..].iter().all(|v| u.commutes_with(v))) {
                continue;
            }
            let mut sorted = conjugates.clone();
            sorted.sort();
            sorted.dedup();
            if !seen.insert(sorted) {
                continue;
            }
            let mut basis: Vec<Perm> = Vec::new();
            let mut span = span_of(&basis, p, AFFINE_CARRIER_LIMIT).expect("trivial span");
            let mut too_big = false;
            for c in &conjugates {
                if span.contains_key(c) {
                    continue;
                }
                basis.push(c.clone());
                match span_of(&basis, p, AFFINE_CARRIER_LIMIT) {
                    Some(s) => span = s,
                    None => {
                        too_big = true;
                        break;
                    }
                }
            }
            if too_big || sigma_powers.iter().any(|s| span.contains_key(s)) {
                continue;
            }
            let t = basis.len();
            let mut matrix = vec![vec![0u64; t]; t];
            for (col, b) in basis.iter().enumerate() {
                let image = sigma.conj(b);
                let coords = &span[&image];
                for row in 0..t {
                    matrix[row][col] = coords[row];
                }
            }
            let Ok(r) = AffineRack::simple(p, t, matrix.clone()) else { continue };
            if r.order() != d {
                continue;
            }
            let mut gens = basis.clone();
            gens.push(sigma.clone());
            let subgroup_order = PermGroup::with_degree(gens, g.degree()).order();
            let found = AffineRealization { p, dim: t, d, j, matrix, sigma: sigma.clone(), basis, subgroup_order };
            if found.subgroup_order != span.len() as u128 * d as u128 {
                continue;
            }
            return Ok(AffineSearch::Found(found));
        }
    }
    Ok(AffineSearch::NotFound { candidates: tried })
}
