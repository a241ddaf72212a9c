//! Graded dimensions of Nichols algebras through the ranks of the quantum
//! symmetrizers `Ω_n`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::rack::Rack;

/// Default ceiling on `N^n`, the dimension of `V^{⊗n}`.
pub const DEFAULT_TENSOR_LIMIT: usize = 20_000;

/// Largest degree whose symmetrizer is expanded over all of `S_n`.
pub const LITERAL_SYMMETRIZER_MAX_DEGREE: usize = 8;

type Column = Vec<(usize, Cyclotomic)>;

/// A braided vector space `(V, c)` with `c` stored column-wise on `V ⊗ V`.
#[derive(Clone, Debug)]
pub struct BraidedVectorSpace {
    dim: usize,
    /// `c(e_a ⊗ e_b) = Σ coeff · e_{k / dim} ⊗ e_{k % dim}` for `(k, coeff)` in `columns[a * dim + b]`.
    columns: Vec<Column>,
}

/// A 2-cocycle on a rack.
#[derive(Clone, Debug)]
pub enum Cocycle {
    /// `q_{x,y}` scalar.
    Scalar(Vec<Vec<Cyclotomic>>),
    /// `q_{x,y}` an `n × n` matrix.
    Matrix { n: usize, values: Vec<Vec<Vec<Vec<Cyclotomic>>>> },
}

impl Cocycle {
    pub fn constant(size: usize, q: Cyclotomic) -> Self {
        Cocycle::Scalar(vec![vec![q; size]; size])
    }

    fn rank(&self) -> usize {
        match self {
            Cocycle::Scalar(_) => 1,
            Cocycle::Matrix { n, .. } => *n,
        }
    }

    fn matrix(&self, x: usize, y: usize) -> Vec<Vec<Cyclotomic>> {
        match self {
            Cocycle::Scalar(q) => vec![vec![q[x][y].clone()]],
            Cocycle::Matrix { values, .. } => values[x][y].clone(),
        }
    }
}

fn mat_mul(a: &[Vec<Cyclotomic>], b: &[Vec<Cyclotomic>]) -> Vec<Vec<Cyclotomic>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn mat_is_invertible(a: &[Vec<Cyclotomic>]) -> bool {
    let rows: Vec<Vec<Cyclotomic>> = a.to_vec();
    dense_rank(rows) == a.len()
}

impl BraidedVectorSpace {
    /// Space from explicit columns; the braid equation is checked on every basis triple.
    pub fn from_columns(dim: usize, columns: Vec<Vec<(usize, Cyclotomic)>>) -> Result<Self> {
        if dim == 0 || columns.len() != dim * dim {
            return Err(Error::invalid("braiding must have dim² columns"));
        }
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut acc: HashMap<usize, Cyclotomic> = HashMap::new();
                for (k, v) in col {
                    let e = acc.entry(k).or_insert_with(Cyclotomic::zero);
                    *e = &*e + &v;
                }
                let mut out: Column = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                out.sort_by_key(|(k, _)| *k);
                out
            })
            .collect();
        let v = BraidedVectorSpace { dim, columns };
        v.check_braid_equation()?;
        Ok(v)
    }

    /// `c^q(e_x v ⊗ e_y w) = e_{x ▷ y} q_{x,y}(w) ⊗ e_x v`, after checking the cocycle condition.
    pub fn from_cocycle(x: &Rack, q: &Cocycle) -> Result<Self> {
        let n = x.size();
        let r = q.rank();
        match q {
            Cocycle::Scalar(m) if m.len() != n || m.iter().any(|row| row.len() != n) => {
                return Err(Error::invalid("cocycle must have one value per pair"))
            }
            Cocycle::Matrix { values, .. }
                if values.len() != n
                    || values.iter().any(|row| row.len() != n || row.iter().any(|m| m.len() != r || m.iter().any(|l| l.len() != r))) =>
            {
                return Err(Error::invalid("cocycle must have one square matrix per pair"))
            }
            _ => {}
        }
        for a in 0..n {
            for b in 0..n {
                let m = q.matrix(a, b);
                if !mat_is_invertible(&m) {
                    return Err(Error::invalid(format!("q({a}, {b}) is not invertible")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = mat_mul(&q.matrix(a, x.op(b, c)), &q.matrix(b, c));
                    let rhs = mat_mul(&q.matrix(x.op(a, b), x.op(a, c)), &q.matrix(a, c));
                    if lhs != rhs {
                        return Err(Error::Cocycle { x: a, y: b, z: c });
                    }
                }
            }
        }
        let dim = n * r;
        let mut columns = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            let a = i / r;
            for j in 0..dim {
                let (b, wb) = (j / r, j % r);
                let m = q.matrix(a, b);
                let target = x.op(a, b);
                let col: Column = (0..r)
                    .filter(|&k| !m[k][wb].is_zero())
                    .map(|k| ((target * r + k) * dim + i, m[k][wb].clone()))
                    .collect();
                columns.push(col);
            }
        }
        Self::from_columns(dim, columns)
    }

    /// `c(e_i ⊗ e_j) = q_ij e_j ⊗ e_i`.
    pub fn diagonal(q: &[Vec<Cyclotomic>]) -> Result<Self> {
        let n = q.len();
        if n == 0 || q.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("braiding matrix must be square and non-empty"));
        }
        for row in q {
            for v in row {
                if v.root_of_unity_order().is_none() {
                    return Err(Error::invalid(format!("{v} is not a root of unity")));
                }
            }
        }
        let mut columns = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                columns.push(vec![(j * n + i, q[i][j].clone())]);
            }
        }
        Self::from_columns(n, columns)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, a: usize, b: usize) -> &[(usize, Cyclotomic)] {
        &self.columns[a * self.dim + b]
    }

    fn is_rational(&self) -> bool {
        self.columns.iter().flatten().all(|(_, v)| v.is_rational())
    }

    /// `(c ⊗ 1)(1 ⊗ c)(c ⊗ 1) = (1 ⊗ c)(c ⊗ 1)(1 ⊗ c)` on all of `V^{⊗3}`.
    pub fn check_braid_equation(&self) -> Result<()> {
        let n = self.dim;
        let engine = Engine::<Cyclotomic>::new(self);
        let bad = (0..n * n * n).into_par_iter().find_any(|&w| {
            let v: SparseVec<Cyclotomic> = HashMap::from([(w, Cyclotomic::one())]);
            let lhs = engine.apply_word(&[0, 1, 0], 3, v.clone());
            let rhs = engine.apply_word(&[1, 0, 1], 3, v);
            !sparse_eq(&lhs, &rhs)
        });
        match bad {
            Some(_) => Err(Error::BraidEquation),
            None => Ok(()),
        }
    }

    /// A braided subspace spanned by a subset of the basis, if `c` preserves it.
    pub fn restrict(&self, basis: &[usize]) -> Result<Self> {
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let m = basis.len();
        let mut columns = Vec::with_capacity(m * m);
        for &a in basis {
            for &b in basis {
                let mut col = Vec::new();
                for (k, v) in self.column(a, b) {
                    let (x, y) = (k / self.dim, k % self.dim);
                    match (pos.get(&x), pos.get(&y)) {
                        (Some(&i), Some(&j)) => col.push((i * m + j, v.clone())),
                        _ => return Err(Error::invalid("basis subset is not a braided subspace")),
                    }
                }
                columns.push(col);
            }
        }
        Self::from_columns(m, columns)
    }
}

trait Coeff: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_cyclotomic(c: &Cyclotomic) -> Self;
}

impl Coeff for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        Cyclotomic::inv(self).expect("pivot is nonzero")
    }
    fn from_cyclotomic(c: &Cyclotomic) -> Self {
        c.clone()
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        num_traits::Inv::inv(self.clone())
    }
    fn from_cyclotomic(c: &Cyclotomic) -> Self {
        c.as_rational().expect("rational braiding")
    }
}

type SparseVec<F> = HashMap<usize, F>;

fn sparse_eq<F: Coeff>(a: &SparseVec<F>, b: &SparseVec<F>) -> bool {
    a.iter().all(|(k, v)| v.is_zero() || b.get(k) == Some(v)) && b.iter().all(|(k, v)| v.is_zero() || a.get(k) == Some(v))
}

struct Engine<F> {
    dim: usize,
    columns: Vec<Vec<(usize, F)>>,
}

impl<F: Coeff> Engine<F> {
    fn new(v: &BraidedVectorSpace) -> Self {
        let columns = v.columns.iter().map(|c| c.iter().map(|(k, x)| (*k, F::from_cyclotomic(x))).collect()).collect();
        Engine { dim: v.dim, columns }
    }

    /// `σ_i` (0-based slot `i`) on a basis word of length `n`, as `(word, coeff)` terms.
    fn sigma_word(&self, i: usize, n: usize, w: usize) -> impl Iterator<Item = (usize, &F)> + '_ {
        let d = self.dim;
        let stride = d.pow((n - i - 2) as u32);
        let a = (w / (stride * d)) % d;
        let b = (w / stride) % d;
        let base = w - (a * d + b) * stride;
        self.columns[a * d + b].iter().map(move |(k, x)| (base + k * stride, x))
    }

    fn sigma(&self, i: usize, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out: SparseVec<F> = HashMap::with_capacity(v.len());
        for (&w, x) in v {
            for (w2, q) in self.sigma_word(i, n, w) {
                let t = x.mul(q);
                match out.get_mut(&w2) {
                    Some(e) => *e = e.add(&t),
                    None => {
                        out.insert(w2, t);
                    }
                }
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// `σ_{word[0]} ⋯ σ_{word[k-1]}` applied to `v`.
    fn apply_word(&self, word: &[usize], n: usize, mut v: SparseVec<F>) -> SparseVec<F> {
        for &i in word.iter().rev() {
            v = self.sigma(i, n, &v);
        }
        v
    }

    /// `Ω_n e_w` through `Ω_k = (Ω_{k-1} ⊗ 1)(1 + σ_{k-1}(1 + σ_{k-2}(1 + ⋯ (1 + σ_1))))`.
    fn omega_factorized(&self, n: usize, w: usize) -> SparseVec<F> {
        let mut v: SparseVec<F> = HashMap::from([(w, F::one())]);
        for k in (2..=n).rev() {
            let mut acc = v.clone();
            for slot in 0..k - 1 {
                acc = self.sigma(slot, n, &acc);
                for (w2, x) in &v {
                    match acc.get_mut(w2) {
                        Some(e) => *e = e.add(x),
                        None => {
                            acc.insert(*w2, x.clone());
                        }
                    }
                }
                acc.retain(|_, x| !x.is_zero());
            }
            v = acc;
        }
        v
    }

    fn omega_literal(&self, n: usize, w: usize, words: &[Vec<usize>]) -> SparseVec<F> {
        let mut acc: SparseVec<F> = HashMap::new();
        for word in words {
            let t = self.apply_word(word, n, HashMap::from([(w, F::one())]));
            for (w2, x) in t {
                match acc.get_mut(&w2) {
                    Some(e) => *e = e.add(&x),
                    None => {
                        acc.insert(w2, x);
                    }
                }
            }
        }
        acc.retain(|_, x| !x.is_zero());
        acc
    }

    /// Blocks of basis words closed under every `σ_i`.
    fn components(&self, n: usize) -> Vec<Vec<usize>> {
        let total = self.dim.pow(n as u32);
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for w in 0..total {
            for i in 0..n.saturating_sub(1) {
                for (w2, _) in self.sigma_word(i, n, w) {
                    let (a, b) = (find(&mut parent, w), find(&mut parent, w2));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for w in 0..total {
            let r = find(&mut parent, w);
            groups.entry(r).or_default().push(w);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|g| g[0]);
        out
    }

    fn rank_omega(&self, n: usize) -> usize {
        if n <= 1 {
            return self.dim.pow(n as u32);
        }
        self.components(n)
            .par_iter()
            .map(|block| {
                let pos: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &w)| (w, i)).collect();
                let rows: Vec<Vec<F>> = block
                    .iter()
                    .map(|&w| {
                        let col = self.omega_factorized(n, w);
                        let mut row = vec![F::zero(); block.len()];
                        for (w2, x) in col {
                            row[pos[&w2]] = x;
                        }
                        row
                    })
                    .collect();
                dense_rank(rows)
            })
            .sum()
    }
}

fn dense_rank<F: Coeff>(mut m: Vec<Vec<F>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        let pivot: Vec<F> = m[r].iter().map(|x| x.mul(&inv)).collect();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].neg();
            for j in c..cols {
                if !pivot[j].is_zero() {
                    m[i][j] = m[i][j].add(&f.mul(&pivot[j]));
                }
            }
        }
        m[r] = pivot;
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Which reduced word represents each permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedWords {
    /// Bubble sort swapping the leftmost descent first.
    Leftmost,
    /// Bubble sort swapping the rightmost descent first.
    Rightmost,
}

fn reduced_words(n: usize, choice: ReducedWords) -> Vec<Vec<usize>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    perms(n)
        .into_iter()
        .map(|mut p| {
            let mut word = Vec::new();
            loop {
                let descents = (0..n.saturating_sub(1)).filter(|&i| p[i] > p[i + 1]);
                let i = match choice {
                    ReducedWords::Leftmost => descents.min(),
                    ReducedWords::Rightmost => descents.max(),
                };
                let Some(i) = i else { break };
                p.swap(i, i + 1);
                word.push(i);
            }
            word
        })
        .collect()
}

/// The quantum symmetrizer as a sparse matrix on `V^{⊗n}`, column `w` being `Ω_n e_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetrizer {
    pub degree: usize,
    pub size: usize,
    pub columns: Vec<Vec<(usize, Cyclotomic)>>,
}

impl Symmetrizer {
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Cyclotomic>> = self
            .columns
            .iter()
            .map(|col| {
                let mut row = vec![Cyclotomic::zero(); self.size];
                for (k, v) in col {
                    row[*k] = v.clone();
                }
                row
            })
            .collect();
        dense_rank(rows)
    }
}

fn tensor_size(v: &BraidedVectorSpace, n: usize, limit: usize) -> Result<usize> {
    v.dim
        .checked_pow(n as u32)
        .filter(|&s| s <= limit)
        .ok_or_else(|| Error::budget(format!("tensor power of degree {n}"), limit as u128))
}

fn to_columns(cols: Vec<SparseVec<Cyclotomic>>) -> Vec<Vec<(usize, Cyclotomic)>> {
    cols.into_iter()
        .map(|c| {
            let mut c: Vec<(usize, Cyclotomic)> = c.into_iter().collect();
            c.sort_by_key(|(k, _)| *k);
            c
        })
        .collect()
}

/// `Ω_n = Σ_{σ ∈ S_n} M(σ)`, each `M(σ)` the braid-group lift of a reduced word of `σ`.
pub fn symmetrizer(v: &BraidedVectorSpace, n: usize, choice: ReducedWords, limit: usize) -> Result<Symmetrizer> {
    if n < 2 {
        return Err(Error::invalid("symmetrizers start in degree 2"));
    }
    if n > LITERAL_SYMMETRIZER_MAX_DEGREE {
        return Err(Error::budget("permutations in the symmetrizer", LITERAL_SYMMETRIZER_MAX_DEGREE as u128));
    }
    let size = tensor_size(v, n, limit)?;
    let words = reduced_words(n, choice);
    let e = Engine::<Cyclotomic>::new(v);
    let cols: Vec<SparseVec<Cyclotomic>> = (0..size).into_par_iter().map(|w| e.omega_literal(n, w, &words)).collect();
    Ok(Symmetrizer { degree: n, size, columns: to_columns(cols) })
}

/// `Ω_n` through the recursive coset factorization; equal to [`symmetrizer`].
pub fn symmetrizer_factorized(v: &BraidedVectorSpace, n: usize, limit: usize) -> Result<Symmetrizer> {
    if n < 2 {
        return Err(Error::invalid("symmetrizers start in degree 2"));
    }
    let size = tensor_size(v, n, limit)?;
    let e = Engine::<Cyclotomic>::new(v);
    let cols: Vec<SparseVec<Cyclotomic>> = (0..size).into_par_iter().map(|w| e.omega_factorized(n, w)).collect();
    Ok(Symmetrizer { degree: n, size, columns: to_columns(cols) })
}

/// Graded dimensions `dim B^0, …, dim B^k` of the Nichols algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPrefix {
    pub dims: Vec<usize>,
    pub maxdeg: usize,
    /// Some degree has dimension 0, so the algebra is finite-dimensional.
    pub terminated: bool,
    /// The computation stopped early at the tensor-size ceiling.
    pub budget_exceeded: bool,
}

impl HilbertPrefix {
    pub fn total(&self) -> Option<usize> {
        self.terminated.then(|| self.dims.iter().sum())
    }
}

impl fmt::Display for HilbertPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "{}", dims.join(","))?;
        match self.total() {
            Some(t) => write!(f, " total {t}"),
            None if self.budget_exceeded => write!(f, " (budget exceeded)"),
            None => write!(f, " (not terminated)"),
        }
    }
}

/// `dim B^n = rank Ω_n` for `n ≤ maxdeg`, stopping at the first zero.
pub fn hilbert_prefix(v: &BraidedVectorSpace, maxdeg: usize, limit: usize) -> HilbertPrefix {
    let rational = v.is_rational();
    let e_q = rational.then(|| Engine::<Rational>::new(v));
    let e_c = (!rational).then(|| Engine::<Cyclotomic>::new(v));
    let mut dims = Vec::new();
    let mut terminated = false;
    let mut budget_exceeded = false;
    for n in 0..=maxdeg {
        if tensor_size(v, n, limit).is_err() {
            budget_exceeded = true;
            break;
        }
        let d = match (&e_q, &e_c) {
            (Some(e), _) => e.rank_omega(n),
            (_, Some(e)) => e.rank_omega(n),
            _ => unreachable!(),
        };
        dims.push(d);
        if d == 0 {
            terminated = true;
            break;
        }
    }
    HilbertPrefix { dims, maxdeg, terminated, budget_exceeded }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional() {
        let v = BraidedVectorSpace::diagonal(&[vec![Cyclotomic::from_int(-1)]]).unwrap();
        assert_eq!(hilbert_prefix(&v, 3, DEFAULT_TENSOR_LIMIT).to_string(), "1,1,0 total 2");
        let s = symmetrizer(&v, 2, ReducedWords::Leftmost, 100).unwrap();
        assert!(s.columns[0].is_empty());
        let v = BraidedVectorSpace::diagonal(&[vec![Cyclotomic::one()]]).unwrap();
        assert_eq!(hilbert_prefix(&v, 6, DEFAULT_TENSOR_LIMIT).to_string(), "1,1,1,1,1,1,1 (not terminated)");
        let s = symmetrizer(&v, 4, ReducedWords::Rightmost, 100).unwrap();
        assert_eq!(s.columns, vec![vec![(0, Cyclotomic::from_int(24))]]);
        let w = Cyclotomic::e(3);
        let v = BraidedVectorSpace::diagonal(&[vec![w]]).unwrap();
        assert_eq!(hilbert_prefix(&v, 5, DEFAULT_TENSOR_LIMIT).to_string(), "1,1,1,0 total 3");
    }

    #[test]
    fn reduced_word_lengths() {
        let words = reduced_words(4, ReducedWords::Leftmost);
        assert_eq!(words.len(), 24);
        let total: usize = words.iter().map(Vec::len).sum();
        assert_eq!(total, 72);
    }
}
