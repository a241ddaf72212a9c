use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::table::CharacterTable;
use crate::cyclo::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::fp::{inv_mod, is_prime, nullspace, pow_mod, primitive_root, rref};
use crate::permgrp::PermGroup;

/// Default order ceiling for the Dixon–Burnside computation.
pub const DEFAULT_DIXON_LIMIT: u128 = 2000;

struct ClassAlgebra {
    k: usize,
    sizes: Vec<u64>,
    inverse: Vec<usize>,
    /// `powers[c][a]` is the class of `g_c^a`.
    powers: Vec<Vec<usize>>,
    orders: Vec<u64>,
    /// `coef[i][j][l]`: pairs `(x, y) ∈ C_i × C_j` with `xy = z_l`.
    coef: Vec<Vec<Vec<u64>>>,
    order: u64,
    exponent: u64,
}

fn class_algebra(g: &PermGroup) -> Result<ClassAlgebra> {
    let classes = g.conjugacy_classes()?;
    let elems = g.elements()?;
    let k = classes.len();
    let coef: Vec<Vec<Vec<u64>>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut m = vec![vec![0u64; k]; k];
            for (l, cl) in classes.iter().enumerate() {
                let z = &cl.representative;
                for &xi in &classes[i].members {
                    let y = &elems.get(xi as usize).inverse() * z;
                    let j = g.class_of(&y).expect("product lies in the group");
                    m[j][l] += 1;
                }
            }
            m
        })
        .collect();
    let mut powers = Vec::with_capacity(k);
    for c in classes {
        let row = (0..c.order).map(|a| g.class_of(&c.representative.pow(a as i64))).collect::<Result<Vec<_>>>()?;
        powers.push(row);
    }
    let inverse = classes.iter().map(|c| g.class_of(&c.representative.inverse())).collect::<Result<Vec<_>>>()?;
    Ok(ClassAlgebra {
        k,
        sizes: classes.iter().map(|c| c.size as u64).collect(),
        inverse,
        powers,
        orders: classes.iter().map(|c| c.order).collect(),
        coef,
        order: g.order() as u64,
        exponent: g.exponent()?,
    })
}

/// Common eigenvectors of the class matrices modulo `p`, normalized to 1 at the identity.
fn split_mod_p(alg: &ClassAlgebra, p: u64) -> Option<Vec<Vec<u64>>> {
    let k = alg.k;
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect()];
    for i in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for mut basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let pivots = rref(&mut basis, p);
            let d = basis.len();
            let apply = |w: &[u64]| -> Vec<u64> {
                (0..k)
                    .map(|j| (0..k).fold(0u64, |acc, l| (acc + alg.coef[i][j][l] % p * w[l]) % p))
                    .collect()
            };
            let images: Vec<Vec<u64>> = basis.iter().map(|b| apply(b)).collect();
            let a: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|c| images[c][pivots[r]]).collect()).collect();
            let mut found = 0;
            for lambda in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| (0..d).map(|c| if r == c { (a[r][c] + p - lambda) % p } else { a[r][c] }).collect())
                    .collect();
                let ker = nullspace(&shifted, p);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|coords| {
                        (0..k).map(|j| (0..d).fold(0u64, |acc, r| (acc + coords[r] * basis[r][j]) % p)).collect()
                    })
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    for s in spaces {
        let w = &s[0];
        if w[0] == 0 {
            return None;
        }
        let inv = inv_mod(w[0], p);
        out.push(w.iter().map(|x| x * inv % p).collect());
    }
    Some(out)
}

fn lift(alg: &ClassAlgebra, p: u64, omegas: &[Vec<u64>]) -> Option<Vec<Vec<Cyclotomic>>> {
    let k = alg.k;
    let z = pow_mod(primitive_root(p), (p - 1) / alg.exponent, p);
    let order = alg.order % p;
    let mut chars = Vec::with_capacity(k);
    for w in omegas {
        let mut s = 0u64;
        for j in 0..k {
            s = (s + w[j] * w[alg.inverse[j]] % p * inv_mod(alg.sizes[j] % p, p)) % p;
        }
        if s == 0 {
            return None;
        }
        let d2 = order * inv_mod(s, p) % p;
        let d = (1..=((alg.order as f64).sqrt() as u64 + 1)).find(|d| d * d % p == d2)?;
        let modp: Vec<u64> = (0..k).map(|j| d * w[j] % p * inv_mod(alg.sizes[j] % p, p) % p).collect();
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let m = alg.orders[j];
            let zm = pow_mod(z, alg.exponent / m, p);
            let m_inv = inv_mod(m % p, p);
            let mut terms = Vec::new();
            let mut total = 0u64;
            for t in 0..m {
                let mut acc = 0u64;
                for a in 0..m {
                    let root = pow_mod(zm, (m - (t * a) % m) % m, p);
                    acc = (acc + modp[alg.powers[j][a as usize]] * root) % p;
                }
                let n_t = acc * m_inv % p;
                if n_t > d {
                    return None;
                }
                total += n_t;
                if n_t > 0 {
                    terms.push((t, Rational::from_integer(n_t.into())));
                }
            }
            if total != d {
                return None;
            }
            row.push(Cyclotomic::from_terms(m, terms));
        }
        chars.push(row);
    }
    Some(chars)
}

/// Character table of an enumerable group by the Dixon–Burnside method.
pub fn compute_character_table(g: &PermGroup, name: &str) -> Result<CharacterTable> {
    compute_character_table_with_limit(g, name, DEFAULT_DIXON_LIMIT)
}

pub fn compute_character_table_with_limit(g: &PermGroup, name: &str, limit: u128) -> Result<CharacterTable> {
    let order = g.order();
    if order > limit {
        return Err(Error::budget(format!("character table of a group of order {order}"), limit));
    }
    let alg = class_algebra(g)?;
    let classes = g.conjugacy_classes()?;
    let bound = 2.0 * (alg.order as f64).sqrt();
    let mut p = alg.exponent + 1;
    let mut attempts = 0;
    let chars = loop {
        if is_prime(p) && (p as f64) > bound {
            attempts += 1;
            if let Some(om) = split_mod_p(&alg, p) {
                if let Some(ch) = lift(&alg, p, &om) {
                    break ch;
                }
            }
            if attempts > 20 {
                return Err(Error::invalid("no suitable prime found for the class algebra"));
            }
        }
        p += alg.exponent;
    };
    let mut chars = chars;
    let trivial = chars.iter().position(|r| r.iter().all(Cyclotomic::is_one)).expect("trivial character");
    let first = chars.remove(trivial);
    chars.sort_by(|a, b| a[0].cmp(&b[0]).then_with(|| a.cmp(b)));
    chars.insert(0, first);
    let exponent = alg.exponent;
    let mut power_maps = BTreeMap::new();
    for (q, _) in crate::cyclo::factorize(exponent) {
        power_maps.insert(q, g.power_map(q as i64)?);
    }
    let t = CharacterTable {
        name: name.to_string(),
        order: BigUint::from(order),
        labels: classes.iter().map(|c| c.label.clone()).collect(),
        sizes: classes.iter().map(|c| BigUint::from(c.size)).collect(),
        orders: classes.iter().map(|c| c.order).collect(),
        power_maps,
        irreducibles: chars,
    };
    t.validate()?;
    Ok(t)
}
