use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{factorize, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::permgrp::Reality;

/// Class metadata plus irreducible characters, one row per character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub name: String,
    pub order: BigUint,
    pub labels: Vec<String>,
    pub sizes: Vec<BigUint>,
    pub orders: Vec<u64>,
    /// Prime `p` to the 0-based class of `p`-th powers.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
}

/// Eigenvalue multiplicities of `ρ(h)`: `counts[t]` is the multiplicity of `ζ_m^t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenCounts {
    pub m: u64,
    pub counts: Vec<u64>,
}

impl EigenCounts {
    pub fn root(&self, t: usize) -> Cyclotomic {
        Cyclotomic::root(self.m, t as i64)
    }

    /// Multiplicities of `+1` and `-1`.
    pub fn plus_minus(&self) -> (u64, u64) {
        let minus = if self.m.is_multiple_of(2) { self.counts[(self.m / 2) as usize] } else { 0 };
        (self.counts[0], minus)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `counts[t] = (1/m) Σ_a χ(h^a) ζ_m^{-ta}` from the values `χ(h^a)`, `a = 0..m`.
pub fn eigen_from_values(values: &[Cyclotomic]) -> Result<EigenCounts> {
    let m = values.len() as u64;
    if m == 0 {
        return Err(Error::invalid("no character values"));
    }
    let inv_m = Rational::new(BigInt::one(), BigInt::from(m));
    let mut counts = Vec::with_capacity(m as usize);
    for t in 0..m {
        let s: Cyclotomic = values
            .iter()
            .enumerate()
            .map(|(a, v)| v * &Cyclotomic::root(m, -((t * a as u64) as i64)))
            .sum();
        let c = s.scale(&inv_m);
        let n = c
            .as_integer()
            .filter(|n| !n.is_negative())
            .ok_or_else(|| Error::CorruptTable(format!("eigenvalue multiplicity {c} is not a nonnegative integer")))?;
        counts.push(n.to_u64().expect("multiplicity fits"));
    }
    Ok(EigenCounts { m, counts })
}

fn big(u: &BigUint) -> BigInt {
    BigInt::from(u.clone())
}

impl CharacterTable {
    pub fn nclasses(&self) -> usize {
        self.labels.len()
    }

    pub fn centralizer_order(&self, k: usize) -> BigUint {
        &self.order / &self.sizes[k]
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.irreducibles[i][0].as_i64().expect("degree is an integer") as u64
    }

    pub fn class_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(label))
            .ok_or_else(|| Error::invalid(format!("table {} has no class {label}", self.name)))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |a, &o| a.lcm(&o))
    }

    /// Checks all structural invariants and exact row orthogonality.
    pub fn validate(&self) -> Result<()> {
        let k = self.nclasses();
        if self.sizes.len() != k || self.orders.len() != k {
            return Err(Error::CorruptTable("row lengths differ from nclasses".into()));
        }
        if k == 0 || !self.sizes[0].is_one() || self.orders[0] != 1 {
            return Err(Error::CorruptTable("first class must be the identity".into()));
        }
        let total: BigUint = self.sizes.iter().sum();
        if total != self.order {
            return Err(Error::CorruptTable(format!("class sizes sum to {total}, not {}", self.order)));
        }
        for (s, o) in self.sizes.iter().zip(&self.orders) {
            if !(&self.order % s).is_zero() || *o == 0 || !(&self.order % BigUint::from(*o)).is_zero() {
                return Err(Error::CorruptTable("class size or element order does not divide the group order".into()));
            }
        }
        for (&p, map) in &self.power_maps {
            if map.len() != k {
                return Err(Error::CorruptTable(format!("power map {p} has wrong length")));
            }
            for (c, &img) in map.iter().enumerate() {
                let o = self.orders[c];
                if img >= k || self.orders[img] != o / o.gcd(&p) {
                    return Err(Error::CorruptTable(format!("power map {p} is inconsistent at class {}", self.labels[c])));
                }
            }
        }
        if self.irreducibles.len() != k {
            return Err(Error::CorruptTable(format!("{} characters for {k} classes", self.irreducibles.len())));
        }
        let mut sumsq = BigInt::zero();
        for (i, row) in self.irreducibles.iter().enumerate() {
            if row.len() != k {
                return Err(Error::CorruptTable(format!("character {} has wrong length", i + 1)));
            }
            match row[0].as_integer() {
                Some(d) if d.is_positive() => sumsq += &d * &d,
                _ => return Err(Error::CorruptTable(format!("character {} has a non-positive degree", i + 1))),
            }
        }
        if sumsq != big(&self.order) {
            return Err(Error::CorruptTable(format!("sum of squared degrees is {sumsq}")));
        }
        self.check_orthogonality()
    }

    fn check_orthogonality(&self) -> Result<()> {
        let k = self.nclasses();
        let ints: Vec<Vec<Option<BigInt>>> =
            self.irreducibles.iter().map(|r| r.iter().map(Cyclotomic::as_integer).collect()).collect();
        let conjs: Vec<Vec<Cyclotomic>> =
            self.irreducibles.iter().map(|r| r.iter().map(Cyclotomic::conj).collect()).collect();
        let sizes: Vec<BigInt> = self.sizes.iter().map(big).collect();
        let order = big(&self.order);
        let bad = (0..k).into_par_iter().find_map_first(|i| {
            for j in i..k {
                let mut acc_int = BigInt::zero();
                let mut acc = Cyclotomic::zero();
                for c in 0..k {
                    match (&ints[i][c], &ints[j][c]) {
                        (Some(a), Some(b)) => {
                            if !a.is_zero() && !b.is_zero() {
                                acc_int += a * b * &sizes[c];
                            }
                        }
                        _ => {
                            let t = &self.irreducibles[i][c] * &conjs[j][c];
                            acc = &acc + &t.scale(&Rational::from_integer(sizes[c].clone()));
                        }
                    }
                }
                let total = &acc + &Cyclotomic::from_rational(Rational::from_integer(acc_int));
                let expect = if i == j { order.clone() } else { BigInt::zero() };
                if total != Cyclotomic::from_rational(Rational::from_integer(expect)) {
                    return Some(Error::Orthogonality { i: i + 1, j: j + 1 });
                }
            }
            None
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Column orthogonality: `Σ_χ |χ(k)|² = |C(k)|` and distinct columns orthogonal.
    pub fn check_columns(&self) -> Result<()> {
        let k = self.nclasses();
        for a in 0..k {
            for b in a..k {
                let s: Cyclotomic =
                    self.irreducibles.iter().map(|r| &r[a] * &r[b].conj()).sum();
                let expect = if a == b { big(&self.centralizer_order(a)) } else { BigInt::zero() };
                if s != Cyclotomic::from_rational(Rational::from_integer(expect)) {
                    return Err(Error::CorruptTable(format!(
                        "columns {} and {} are not orthogonal",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        Ok(())
    }

    fn galois_column(&self, k: usize, q: u64) -> Result<usize> {
        let target: Vec<Cyclotomic> =
            self.irreducibles.iter().map(|r| r[k].galois(q as i64)).collect::<Result<_>>()?;
        (0..self.nclasses())
            .find(|&c| self.orders[c] == self.orders[k] && self.irreducibles.iter().zip(&target).all(|(r, t)| &r[c] == t))
            .ok_or_else(|| Error::CorruptTable(format!("no Galois image of class {} under {q}", self.labels[k])))
    }

    /// Class of `g^j` for `g` in class `k`, composed from prime power maps;
    /// primes coprime to the element order without a stored map act by
    /// Galois conjugation on the column.
    pub fn class_power(&self, k: usize, j: i64) -> Result<usize> {
        let m = self.orders[k] as i64;
        let j = j.rem_euclid(m) as u64;
        if j == 0 {
            return Ok(0);
        }
        let mut cur = k;
        for (q, e) in factorize(j) {
            for _ in 0..e {
                cur = match self.power_maps.get(&q) {
                    Some(map) => map[cur],
                    None if !self.orders[cur].is_multiple_of(q) => self.galois_column(cur, q)?,
                    None => return Err(Error::MissingPowerMap(q)),
                };
            }
        }
        Ok(cur)
    }

    pub fn inverse_class(&self, k: usize) -> Result<usize> {
        self.class_power(k, -1)
    }

    /// Reality computed from power maps only.
    pub fn reality(&self, k: usize) -> Result<Reality> {
        if self.inverse_class(k)? == k {
            return Ok(Reality::Real);
        }
        let m = self.orders[k];
        let mut js = Vec::new();
        for j in 2..m {
            if j.gcd(&m) == 1 && self.class_power(k, j as i64)? == k {
                js.push(j);
            }
        }
        Ok(if js.is_empty() { Reality::Neither } else { Reality::QuasiReal(js) })
    }

    /// Class multiplication coefficient `S(O_i, O_j, O_k)` from characters.
    pub fn s_count(&self, i: usize, j: usize, k: usize) -> Result<BigUint> {
        let n = self.nclasses();
        if i >= n || j >= n || k >= n {
            return Err(Error::invalid("class index out of range"));
        }
        let mut rat = Rational::zero();
        let mut irr = Cyclotomic::zero();
        for row in &self.irreducibles {
            let d = row[0].as_rational().expect("integral degree");
            match (row[i].as_rational(), row[j].as_rational(), row[k].as_rational()) {
                (Some(a), Some(b), Some(c)) => rat += a * b * c / d,
                _ => {
                    let t = &(&row[i] * &row[j]) * &row[k].conj();
                    irr = &irr + &t.scale(&d.recip());
                }
            }
        }
        let total = &irr + &Cyclotomic::from_rational(rat);
        let factor = Rational::new(big(&self.sizes[i]) * big(&self.sizes[j]), big(&self.order));
        let s = total.scale(&factor);
        match s.as_integer() {
            Some(v) if !v.is_negative() => Ok(v.to_biguint().expect("nonnegative")),
            _ => Err(Error::CorruptTable(format!(
                "S({},{},{}) = {s} is not a nonnegative integer",
                self.labels[i], self.labels[j], self.labels[k]
            ))),
        }
    }

    pub fn s_count_by_label(&self, a: &str, b: &str, c: &str) -> Result<BigUint> {
        self.s_count(self.class_index(a)?, self.class_index(b)?, self.class_index(c)?)
    }

    /// Central scalar `χ(g)/χ(1)` of character `i` at class `k`.
    pub fn central_scalar(&self, i: usize, k: usize) -> Cyclotomic {
        let d = self.irreducibles[i][0].as_rational().expect("integral degree");
        self.irreducibles[i][k].scale(&d.recip())
    }

    /// Eigenvalue multiplicities of `ρ_i(h)` for `h` in class `h`.
    pub fn eigenvalue_multiplicities(&self, i: usize, h: usize) -> Result<EigenCounts> {
        let m = self.orders[h];
        let values: Vec<Cyclotomic> = (0..m)
            .map(|a| self.class_power(h, a as i64).map(|c| self.irreducibles[i][c].clone()))
            .collect::<Result<_>>()?;
        let e = eigen_from_values(&values)?;
        if e.total() != self.degree(i) {
            return Err(Error::CorruptTable("multiplicities do not sum to the degree".into()));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_inversion() {
        let e = eigen_from_values(&[Cyclotomic::from_int(5), Cyclotomic::from_int(3)]).unwrap();
        assert_eq!(e.plus_minus(), (4, 1));
        let e = eigen_from_values(&[Cyclotomic::from_int(2), Cyclotomic::from_int(0)]).unwrap();
        assert_eq!(e.plus_minus(), (1, 1));
        assert!(eigen_from_values(&[Cyclotomic::from_int(2), Cyclotomic::from_int(1)]).is_err());
    }
}
