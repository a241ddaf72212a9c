//! Diagonal braidings, their generalized Dynkin diagrams and a fixed battery
//! of obstructions to finite-dimensionality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fp::is_prime;
use crate::rack::AffineRack;

/// Step limit for the long-cycle search.
pub const CYCLE_SEARCH_STEPS: usize = 1_000_000;

/// `c(e_i ⊗ e_j) = q_ij e_j ⊗ e_i` with every `q_ij` a root of unity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalBraiding {
    q: Vec<Vec<Cyclotomic>>,
}

impl DiagonalBraiding {
    pub fn new(q: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let n = q.len();
        if n == 0 || q.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("braiding matrix must be square and non-empty"));
        }
        for (i, row) in q.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if x.root_of_unity_order().is_none() {
                    return Err(Error::invalid(format!("q[{i}][{j}] = {x} is not a root of unity")));
                }
            }
        }
        Ok(DiagonalBraiding { q })
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.q[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Cyclotomic>] {
        &self.q
    }

    /// The braiding with indices relabelled by `perm` (`new[i] = old[perm[i]]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let q = perm.iter().map(|&a| perm.iter().map(|&b| self.q[a][b].clone()).collect()).collect();
        DiagonalBraiding { q }
    }
}

/// Vertices labelled `q_ii`; an edge `{i, j}` labelled `q_ij q_ji` whenever that product is not 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gdd {
    pub labels: Vec<Cyclotomic>,
    /// Keyed by `(i, j)` with `i < j`.
    pub edges: BTreeMap<(usize, usize), Cyclotomic>,
}

impl Gdd {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&Cyclotomic> {
        self.edges.get(&(i.min(j), i.max(j)))
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.size()).filter(|&j| j != i && self.edge(i, j).is_some()).collect()
    }

    pub fn valency(&self, i: usize) -> usize {
        self.neighbours(i).len()
    }
}

pub fn build_gdd(b: &DiagonalBraiding) -> Gdd {
    let n = b.size();
    let labels = (0..n).map(|i| b.q[i][i].clone()).collect();
    let mut edges = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = &b.q[i][j] * &b.q[j][i];
            if !e.is_one() {
                edges.insert((i, j), e);
            }
        }
    }
    Gdd { labels, edges }
}

/// A feature of a diagram forcing the Nichols algebra to be infinite-dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "obstruction", rename_all = "kebab-case")]
pub enum Obstruction {
    /// `q_ii = 1`: the polynomial algebra in `e_i` embeds.
    VertexLabelOne { vertex: usize },
    /// A vertex with more than three neighbours.
    Valency { vertex: usize, valency: usize },
    /// A cycle with more than three vertices.
    LongCycle { cycle: Vec<usize> },
    /// Three vertices labelled `q`, pairwise joined by edges labelled `ω ≠ 1` of odd prime order `p`, `q^p = 1`.
    EqualTriangle { vertices: [usize; 3], vertex_label: Cyclotomic, edge_label: Cyclotomic },
    /// Two vertices labelled `q ≠ ±1` joined by an edge labelled `q^{-2}`.
    CartanA11 { vertices: [usize; 2], vertex_label: Cyclotomic },
}

impl Obstruction {
    pub fn citation(&self) -> &'static str {
        match self {
            Obstruction::VertexLabelOne { .. } => "vertex label 1 (rho(g) = 1 criterion)",
            Obstruction::Valency { .. } => "vertex of valency > 3 (involution eigenvalue count)",
            Obstruction::LongCycle { .. } => "cycle of length > 3 (affine racks, odd d)",
            Obstruction::EqualTriangle { .. } => "triangle with equal labels (affine racks, 3 | d)",
            Obstruction::CartanA11 { .. } => "Cartan type A1^(1) (affine racks, even d)",
        }
    }
}

fn find_long_cycle(d: &Gdd) -> Option<Vec<usize>> {
    let n = d.size();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| d.neighbours(i)).collect();
    let mut steps = 0usize;
    fn dfs(
        adj: &[Vec<usize>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        steps: &mut usize,
    ) -> Option<Vec<usize>> {
        *steps += 1;
        if *steps > CYCLE_SEARCH_STEPS {
            return None;
        }
        let last = *path.last().unwrap();
        if path.len() >= 4 && adj[last].contains(&start) {
            return Some(path.clone());
        }
        for &nb in &adj[last] {
            if nb > start && !on_path[nb] {
                on_path[nb] = true;
                path.push(nb);
                if let Some(c) = dfs(adj, start, path, on_path, steps) {
                    return Some(c);
                }
                path.pop();
                on_path[nb] = false;
            }
        }
        None
    }
    for start in 0..n {
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let mut path = vec![start];
        if let Some(c) = dfs(&adj, start, &mut path, &mut on_path, &mut steps) {
            return Some(c);
        }
    }
    None
}

fn odd_prime_order(x: &Cyclotomic) -> Option<u64> {
    x.root_of_unity_order().filter(|&m| m > 2 && is_prime(m))
}

/// Runs every obstruction in the battery. An empty result is inconclusive.
pub fn obstruction_scan(d: &Gdd) -> Vec<Obstruction> {
    let n = d.size();
    let mut out = Vec::new();
    for (i, q) in d.labels.iter().enumerate() {
        if q.is_one() {
            out.push(Obstruction::VertexLabelOne { vertex: i });
        }
    }
    for i in 0..n {
        let v = d.valency(i);
        if v > 3 {
            out.push(Obstruction::Valency { vertex: i, valency: v });
        }
    }
    if let Some(cycle) = find_long_cycle(d) {
        out.push(Obstruction::LongCycle { cycle });
    }
    for (&(i, j), w) in &d.edges {
        for k in j + 1..n {
            let (Some(a), Some(b)) = (d.edge(i, k), d.edge(j, k)) else { continue };
            let q = &d.labels[i];
            if a != w || b != w || &d.labels[j] != q || &d.labels[k] != q {
                continue;
            }
            if let Some(p) = odd_prime_order(w) {
                if q.root_of_unity_order().is_some_and(|m| p % m == 0) && !q.is_one() {
                    out.push(Obstruction::EqualTriangle { vertices: [i, j, k], vertex_label: q.clone(), edge_label: w.clone() });
                }
            }
        }
    }
    for (&(i, j), e) in &d.edges {
        let q = &d.labels[i];
        if &d.labels[j] != q {
            continue;
        }
        let q2 = q * q;
        if q2.is_one() {
            continue;
        }
        if (&q2 * e).is_one() {
            out.push(Obstruction::CartanA11 { vertices: [i, j], vertex_label: q.clone() });
        }
    }
    out
}

/// Braiding on `x_1 v_i, x_2 v_j` built from the eigenvalues of `ρ(h)`:
/// `−1` inside each block and `λ_j` across blocks.
pub fn involution_pair_braiding(eigenvalues: &[Cyclotomic]) -> Result<DiagonalBraiding> {
    let n = eigenvalues.len();
    let minus = Cyclotomic::from_int(-1);
    let mut q = vec![vec![Cyclotomic::zero(); 2 * n]; 2 * n];
    for a in 0..2 * n {
        for b in 0..2 * n {
            q[a][b] = if (a < n) == (b < n) { minus.clone() } else { eigenvalues[b % n].clone() };
        }
    }
    DiagonalBraiding::new(q)
}

/// A character of `F_p^t`, `χ(w) = ζ_p^{c · w}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCharacter {
    pub p: u64,
    pub functional: Vec<u64>,
}

impl AffineCharacter {
    pub fn new(p: u64, functional: Vec<u64>) -> Self {
        let functional = functional.into_iter().map(|c| c % p).collect();
        AffineCharacter { p, functional }
    }

    /// Recovers the functional from the values on every point, checking multiplicativity.
    pub fn from_values(r: &AffineRack, values: &[Cyclotomic]) -> Result<Self> {
        if values.len() != r.size() {
            return Err(Error::invalid("a character needs one value per point"));
        }
        let p = r.p();
        let zeta = Cyclotomic::e(p);
        let mut functional = Vec::with_capacity(r.dim());
        for i in 0..r.dim() {
            let mut e = vec![0u64; r.dim()];
            e[i] = 1;
            let v = &values[r.index(&e)];
            let c = (0..p).find(|&c| zeta.pow(c as i64).map(|z| &z == v).unwrap_or(false));
            functional.push(c.ok_or_else(|| Error::invalid("character value is not a p-th root of unity"))?);
        }
        let chi = AffineCharacter { p, functional };
        for (x, v) in values.iter().enumerate() {
            if &chi.eval(&r.point(x)) != v {
                return Err(Error::invalid("values do not define a character"));
            }
        }
        Ok(chi)
    }

    pub fn eval(&self, w: &[u64]) -> Cyclotomic {
        let e = self.functional.iter().zip(w).fold(0u64, |acc, (c, x)| (acc + c * x) % self.p);
        Cyclotomic::root(self.p, e as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.functional.iter().all(|&c| c == 0)
    }
}

/// `q_kℓ = χ(T^{k−ℓ} v)` for `0 ≤ k, ℓ < d`.
pub fn affine_class_braiding(r: &AffineRack, v: &[u64], chi: &AffineCharacter) -> Result<DiagonalBraiding> {
    if chi.p != r.p() || chi.functional.len() != r.dim() || v.len() != r.dim() {
        return Err(Error::invalid("character and point must live on the rack's carrier"));
    }
    if v.iter().all(|&x| x % r.p() == 0) {
        return Err(Error::invalid("v must be nonzero"));
    }
    if chi.eval(v).is_one() {
        return Err(Error::invalid("χ(v) = 1"));
    }
    let d = r.order() as i64;
    let orbit: Vec<Cyclotomic> = (0..d).map(|k| chi.eval(&r.apply(k, v))).collect();
    let q = (0..d).map(|k| (0..d).map(|l| orbit[(k - l).rem_euclid(d) as usize].clone()).collect()).collect();
    DiagonalBraiding::new(q)
}
