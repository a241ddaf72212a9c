use serde::{Deserialize, Serialize};

use super::core::Rack;
use crate::error::{Error, Result};
use crate::fp::{is_prime, rank};
use crate::permgrp::{Perm, PermGroup};

/// Largest `p^t` accepted for an affine carrier.
pub const AFFINE_CARRIER_LIMIT: usize = 1 << 20;

type Matrix = Vec<Vec<u64>>;

fn identity(t: usize) -> Matrix {
    (0..t).map(|i| (0..t).map(|j| (i == j) as u64).collect()).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let t = a.len();
    (0..t).map(|i| (0..t).map(|j| (0..t).fold(0, |acc, k| (acc + a[i][k] * b[k][j]) % p)).collect()).collect()
}

fn mat_vec(a: &Matrix, v: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(v).fold(0, |acc, (x, y)| (acc + x * y) % p)).collect()
}

/// The affine rack `F_p^t` with `x ▷ y = (1 − T)x + Ty`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRack {
    p: u64,
    t: usize,
    matrix: Matrix,
    order: u64,
    size: usize,
}

impl AffineRack {
    /// Affine rack of an invertible `T ≠ 1`; `matrix` acts on column vectors.
    pub fn new(p: u64, t: usize, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if t == 0 || matrix.len() != t || matrix.iter().any(|r| r.len() != t) {
            return Err(Error::invalid(format!("T must be a {t}×{t} matrix")));
        }
        let size = (p as usize).checked_pow(t as u32).filter(|&n| n <= AFFINE_CARRIER_LIMIT);
        let size = size.ok_or_else(|| Error::budget("affine carrier p^t", AFFINE_CARRIER_LIMIT as u128))?;
        let matrix: Matrix = matrix.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        if rank(&matrix, p) != t {
            return Err(Error::invalid("T is singular"));
        }
        let id = identity(t);
        if matrix == id {
            return Err(Error::invalid("T is the identity"));
        }
        let mut power = matrix.clone();
        let mut order = 1u64;
        while power != id {
            power = mat_mul(&power, &matrix, p);
            order += 1;
        }
        Ok(AffineRack { p, t, matrix, order, size })
    }

    /// As [`AffineRack::new`], additionally requiring `T` to act irreducibly.
    pub fn simple(p: u64, t: usize, matrix: Vec<Vec<u64>>) -> Result<Self> {
        let r = Self::new(p, t, matrix)?;
        if !r.is_irreducible() {
            return Err(Error::invalid("T leaves a proper subspace invariant"));
        }
        Ok(r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.t
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Multiplicative order `d` of `T`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point(&self, x: usize) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.t);
        let mut x = x as u64;
        for _ in 0..self.t {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn index(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.p + c % self.p) as usize
    }

    pub fn power(&self, j: i64) -> Vec<Vec<u64>> {
        let e = j.rem_euclid(self.order as i64) as u64;
        let mut acc = identity(self.t);
        for _ in 0..e {
            acc = mat_mul(&acc, &self.matrix, self.p);
        }
        acc
    }

    pub fn apply(&self, j: i64, v: &[u64]) -> Vec<u64> {
        mat_vec(&self.power(j), v, self.p)
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        let (xv, yv) = (self.point(x), self.point(y));
        let tx = mat_vec(&self.matrix, &xv, self.p);
        let ty = mat_vec(&self.matrix, &yv, self.p);
        let out: Vec<u64> = (0..self.t).map(|i| (xv[i] + self.p - tx[i] + ty[i]) % self.p).collect();
        self.index(&out)
    }

    /// No nonzero vector spans a proper `T`-invariant subspace.
    pub fn is_irreducible(&self) -> bool {
        (1..self.size).all(|x| {
            let mut krylov = vec![self.point(x)];
            for _ in 1..self.t {
                let next = mat_vec(&self.matrix, krylov.last().unwrap(), self.p);
                krylov.push(next);
            }
            rank(&krylov, self.p) == self.t
        })
    }

    /// Whether `1 − T^j` is invertible.
    pub fn one_minus_power_is_bijective(&self, j: i64) -> bool {
        let tj = self.power(j);
        let m: Matrix = (0..self.t)
            .map(|r| (0..self.t).map(|c| ((r == c) as u64 + self.p - tj[r][c]) % self.p).collect())
            .collect();
        rank(&m, self.p) == self.t
    }

    /// `T`-orbit of the point `x`.
    pub fn t_orbit(&self, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut v = mat_vec(&self.matrix, &self.point(x), self.p);
        while self.index(&v) != x {
            out.push(self.index(&v));
            v = mat_vec(&self.matrix, &v, self.p);
        }
        out.sort_unstable();
        out
    }

    pub fn rack(&self) -> Rack {
        Rack::from_affine(self.clone())
    }

    /// The permutation `x ↦ T^j x + w` of the carrier.
    pub fn affine_map(&self, w: &[u64], j: i64) -> Perm {
        let tj = self.power(j);
        let images = (0..self.size)
            .map(|x| {
                let v = mat_vec(&tj, &self.point(x), self.p);
                let out: Vec<u64> = v.iter().zip(w).map(|(a, b)| (a + b) % self.p).collect();
                self.index(&out) as u32
            })
            .collect();
        Perm::from_images(images).expect("affine maps are bijective")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum AffineClassKind {
    /// The `T`-orbit of a translation.
    Orbit { size: usize },
    /// `Q^j = {(w, T^j) : w ∈ A}`.
    Q { j: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineClass {
    pub label: String,
    pub size: usize,
    pub kind: AffineClassKind,
}

/// `A ⋊ ⟨T⟩` acting on `A` by affine maps, with its classes identified.
#[derive(Debug)]
pub struct SemidirectRealization {
    pub group: PermGroup,
    pub classes: Vec<AffineClass>,
    /// Image of `(0, T)`.
    pub sigma: Perm,
}

pub fn semidirect_realization(r: &AffineRack, budget: usize) -> Result<SemidirectRealization> {
    let order = r.size as u128 * r.order as u128;
    if order > budget as u128 {
        return Err(Error::budget("semidirect product order", budget as u128));
    }
    let zero = vec![0u64; r.t];
    let mut gens: Vec<Perm> = (0..r.t)
        .map(|i| {
            let mut e = zero.clone();
            e[i] = 1;
            r.affine_map(&e, 0)
        })
        .collect();
    let sigma = r.affine_map(&zero, 1);
    gens.push(sigma.clone());
    let group = PermGroup::with_budget(gens, r.size, budget);
    if group.order() != order {
        return Err(Error::invalid("affine model has the wrong order"));
    }
    let powers: Vec<Perm> = (0..r.order as i64).map(|j| r.affine_map(&zero, j)).collect();
    let mut classes = Vec::new();
    for c in group.conjugacy_classes()? {
        let g = &c.representative;
        let w = r.point(g.apply(0) as usize);
        let translate_back = r.affine_map(&w.iter().map(|&x| (r.p - x) % r.p).collect::<Vec<_>>(), 0);
        let linear = &translate_back * g;
        let j = powers.iter().position(|q| *q == linear).ok_or_else(|| Error::invalid("element outside A ⋊ ⟨T⟩"))?;
        let kind = if j == 0 { AffineClassKind::Orbit { size: c.size } } else { AffineClassKind::Q { j: j as u64 } };
        classes.push(AffineClass { label: c.label.clone(), size: c.size, kind });
    }
    Ok(SemidirectRealization { group, classes, sigma })
}

impl SemidirectRealization {
    /// Checks that the nontrivial classes are the `Q^j`, `j ≠ 0`, and the `T`-orbits in `A`.
    pub fn verify_class_structure(&self, r: &AffineRack) -> Result<()> {
        let mut seen_j = vec![false; r.order as usize];
        for c in &self.classes {
            match c.kind {
                AffineClassKind::Q { j } => {
                    if c.size != r.size || seen_j[j as usize] {
                        return Err(Error::invalid(format!("class {} is not all of Q^{j}", c.label)));
                    }
                    seen_j[j as usize] = true;
                }
                AffineClassKind::Orbit { size } => {
                    let idx = self.group.class_by_label(&c.label)?;
                    let rep = &self.group.conjugacy_classes()?[idx].representative;
                    if size != r.t_orbit(rep.apply(0) as usize).len() {
                        return Err(Error::invalid(format!("class {} is not a T-orbit", c.label)));
                    }
                }
            }
        }
        if (1..r.order as usize).any(|j| !seen_j[j]) {
            return Err(Error::invalid("some Q^j is missing"));
        }
        Ok(())
    }
}
