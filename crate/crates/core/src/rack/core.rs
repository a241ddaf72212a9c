use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::affine::AffineRack;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

/// Largest carrier on which self-distributivity is checked on every triple.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 64;
/// Number of sampled triples above that size.
pub const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RackKind {
    Class { classes: Vec<String> },
    Affine { p: u64, t: usize, matrix: Vec<Vec<u64>> },
    Table,
    Subrack { of: Box<RackKind> },
}

#[derive(Clone, Debug)]
enum Op {
    Table(Vec<u32>),
    Conj { elems: Vec<Perm>, index: HashMap<Perm, u32> },
    Affine(AffineRack),
}

/// A finite rack on the carrier `0..size`.
#[derive(Clone, Debug)]
pub struct Rack {
    kind: RackKind,
    size: usize,
    op: Op,
    /// One element per orbit of a group of automorphisms known to act on the rack.
    orbit_reps: Vec<usize>,
}

impl Rack {
    /// Rack given by its full operation table, `table[x * n + y] = x ▷ y`.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a rack is non-empty"));
        }
        if table.len() != n * n || table.iter().any(|&v| v as usize >= n) {
            return Err(Error::invalid("rack table has the wrong shape or out-of-range entries"));
        }
        let mut r = Rack { kind: RackKind::Table, size: n, op: Op::Table(table), orbit_reps: Vec::new() };
        r.check_axioms(0)?;
        r.orbit_reps = r.inner_orbit_reps();
        Ok(r)
    }

    /// The rack `O` with `x ▷ y = x y x⁻¹`.
    pub fn class_rack(g: &PermGroup, class: usize) -> Result<Self> {
        Self::class_union_rack(g, &[class])
    }

    /// Union of conjugacy classes, a subrack of the group rack.
    pub fn class_union_rack(g: &PermGroup, classes: &[usize]) -> Result<Self> {
        let all = g.conjugacy_classes()?;
        let elements = g.elements()?;
        let mut elems = Vec::new();
        let mut reps = Vec::new();
        let mut labels = Vec::new();
        let mut sorted: Vec<usize> = classes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &k in &sorted {
            let c = all.get(k).ok_or_else(|| Error::invalid(format!("no class with index {k}")))?;
            reps.push(elems.len());
            labels.push(c.label.clone());
            elems.push(c.representative.clone());
            elems.extend(c.members.iter().map(|&i| elements.get(i as usize)).filter(|x| **x != c.representative).cloned());
        }
        Self::from_perms(elems, reps, RackKind::Class { classes: labels }, false)
    }

    /// Conjugation rack on an explicit set of permutations closed under conjugation by itself.
    pub fn perm_rack(elems: Vec<Perm>) -> Result<Self> {
        let mut r = Self::from_perms(elems, Vec::new(), RackKind::Table, true)?;
        r.orbit_reps = r.inner_orbit_reps();
        Ok(r)
    }

    fn from_perms(elems: Vec<Perm>, reps: Vec<usize>, kind: RackKind, check: bool) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::invalid("a rack is non-empty"));
        }
        let index: HashMap<Perm, u32> = elems.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        if index.len() != elems.len() {
            return Err(Error::invalid("repeated elements in the carrier"));
        }
        let size = elems.len();
        let r = Rack { kind, size, op: Op::Conj { elems, index }, orbit_reps: reps };
        if check {
            r.check_closed()?;
        }
        Ok(r)
    }

    pub(crate) fn from_affine(a: AffineRack) -> Self {
        let kind = RackKind::Affine { p: a.p(), t: a.dim(), matrix: a.matrix().to_vec() };
        let size = a.size();
        let mut r = Rack { kind, size, op: Op::Affine(a), orbit_reps: Vec::new() };
        r.orbit_reps = r.inner_orbit_reps();
        r
    }

    pub fn kind(&self) -> &RackKind {
        &self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `x ▷ y`.
    pub fn op(&self, x: usize, y: usize) -> usize {
        match &self.op {
            Op::Table(t) => t[x * self.size + y] as usize,
            Op::Conj { elems, index } => index[&elems[x].conj(&elems[y])] as usize,
            Op::Affine(a) => a.op(x, y),
        }
    }

    /// Elements from which an exhaustive search may start.
    pub fn orbit_representatives(&self) -> &[usize] {
        &self.orbit_reps
    }

    pub fn element(&self, x: usize) -> Option<&Perm> {
        match &self.op {
            Op::Conj { elems, .. } => elems.get(x),
            _ => None,
        }
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        match &self.op {
            Op::Conj { index, .. } => index.get(p).map(|&i| i as usize),
            _ => None,
        }
    }

    pub fn elements(&self) -> Option<&[Perm]> {
        match &self.op {
            Op::Conj { elems, .. } => Some(elems),
            _ => None,
        }
    }

    pub fn element_name(&self, x: usize) -> String {
        match &self.op {
            Op::Conj { elems, .. } => elems[x].to_string(),
            Op::Affine(a) => {
                let v: Vec<String> = a.point(x).iter().map(u64::to_string).collect();
                format!("[{}]", v.join(","))
            }
            Op::Table(_) => x.to_string(),
        }
    }

    pub fn table(&self) -> Vec<u32> {
        let n = self.size;
        let mut t = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                t.push(self.op(x, y) as u32);
            }
        }
        t
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.op(x, y) == y))
    }

    fn check_closed(&self) -> Result<()> {
        if let Op::Conj { elems, index } = &self.op {
            for x in elems {
                for y in elems {
                    if !index.contains_key(&x.conj(y)) {
                        return Err(Error::invalid(format!("carrier not closed: {x} ▷ {y}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Verifies bijectivity of every left translation and self-distributivity,
    /// exhaustively on small carriers and on sampled triples otherwise.
    pub fn check_axioms(&self, seed: u64) -> Result<()> {
        let n = self.size;
        for x in 0..n {
            let mut hit = vec![false; n];
            for y in 0..n {
                let z = self.op(x, y);
                if hit[z] {
                    return Err(Error::invalid(format!("left translation by {} is not bijective", self.element_name(x))));
                }
                hit[z] = true;
            }
        }
        let check = |x: usize, y: usize, z: usize| -> Result<()> {
            if self.op(x, self.op(y, z)) != self.op(self.op(x, y), self.op(x, z)) {
                return Err(Error::invalid(format!(
                    "self-distributivity fails at ({}, {}, {})",
                    self.element_name(x),
                    self.element_name(y),
                    self.element_name(z)
                )));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        check(x, y, z)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Orbit of `x` under the group generated by the translations `φ_g`, `g ∈ gens`.
    pub fn orbit(&self, x: usize, gens: &[usize], cap: usize) -> Result<Vec<usize>> {
        let mut seen = vec![false; self.size];
        seen[x] = true;
        let mut out = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for &g in gens {
                let z = self.op(g, y);
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                    if out.len() > cap {
                        return Err(Error::budget("rack orbit", cap as u128));
                    }
                    queue.push_back(z);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Orbits of the inner group, as a labelling of the carrier.
    pub fn inner_orbits(&self) -> Vec<usize> {
        let n = self.size;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in 0..n {
            for y in 0..n {
                let a = find(&mut parent, y);
                let b = find(&mut parent, self.op(x, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }

    fn inner_orbit_reps(&self) -> Vec<usize> {
        let labels = self.inner_orbits();
        (0..self.size).filter(|&x| labels[x] == x).collect()
    }

    /// Smallest subrack containing `seeds`, with the embedding of its carrier.
    pub fn subrack_generated(&self, seeds: &[usize], cap: usize) -> Result<(Rack, Vec<usize>)> {
        if seeds.is_empty() {
            return Err(Error::invalid("a subrack needs at least one generator"));
        }
        let mut inside = vec![false; self.size];
        let mut members: Vec<usize> = Vec::new();
        for &s in seeds {
            if s >= self.size {
                return Err(Error::invalid(format!("seed {s} outside the carrier")));
            }
            if !inside[s] {
                inside[s] = true;
                members.push(s);
            }
        }
        let mut done = 0;
        while done < members.len() {
            let x = members[done];
            let mut k = 0;
            while k <= done {
                let y = members[k];
                for z in [self.op(x, y), self.op(y, x)] {
                    if !inside[z] {
                        inside[z] = true;
                        members.push(z);
                        if members.len() > cap {
                            return Err(Error::budget("subrack closure", cap as u128));
                        }
                    }
                }
                k += 1;
            }
            done += 1;
        }
        members.sort_unstable();
        Ok((self.restrict(&members), members))
    }

    /// The subrack on a subset already known to be closed.
    pub(crate) fn restrict(&self, members: &[usize]) -> Rack {
        let pos: HashMap<usize, u32> = members.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
        let kind = RackKind::Subrack { of: Box::new(self.kind.clone()) };
        let op = match &self.op {
            Op::Conj { elems, .. } => {
                let sub: Vec<Perm> = members.iter().map(|&m| elems[m].clone()).collect();
                let index = sub.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
                Op::Conj { elems: sub, index }
            }
            _ => {
                let mut t = Vec::with_capacity(members.len() * members.len());
                for &x in members {
                    for &y in members {
                        t.push(pos[&self.op(x, y)]);
                    }
                }
                Op::Table(t)
            }
        };
        let mut r = Rack { kind, size: members.len(), op, orbit_reps: Vec::new() };
        r.orbit_reps = r.inner_orbit_reps();
        r
    }

    /// Carrier of `self × other` with the componentwise operation.
    pub fn product(&self, other: &Rack) -> Rack {
        let (n, m) = (self.size, other.size);
        let mut t = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                let (x1, x2) = (x / m, x % m);
                let (y1, y2) = (y / m, y % m);
                t.push((self.op(x1, y1) * m + other.op(x2, y2)) as u32);
            }
        }
        let mut r = Rack { kind: RackKind::Table, size: n * m, op: Op::Table(t), orbit_reps: Vec::new() };
        r.orbit_reps = r.inner_orbit_reps();
        r
    }
}

/// Parses the `RACK v1` table format: `size N` followed by `N` rows of `N` 0-based indices.
pub fn parse_rack(text: &str) -> Result<Rack> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let last = text.lines().count().max(1);
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == ["RACK", "v1"] => {}
        Some((no, _)) => return Err(Error::parse(no, 1, "expected `RACK v1`")),
        None => return Err(Error::parse(last, 1, "empty rack file")),
    }
    let n = match lines.next() {
        Some((no, l)) => {
            let mut parts = l.split_whitespace();
            if parts.next() != Some("size") {
                return Err(Error::parse(no, 1, "expected `size N`"));
            }
            let n = parts
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::parse(no, 1, "size must be a positive integer"))?;
            if parts.next().is_some() {
                return Err(Error::parse(no, 1, "trailing tokens after size"));
            }
            n
        }
        None => return Err(Error::parse(last, 1, "missing `size N` line")),
    };
    let mut table = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (no, l) in lines {
        if rows == n {
            return Err(Error::parse(no, 1, "more rows than the declared size"));
        }
        let mut count = 0;
        for tok in l.split_whitespace() {
            let col = tok.as_ptr() as usize - l.as_ptr() as usize + 1;
            let v: u32 = tok.parse().map_err(|_| Error::parse(no, col, format!("invalid index `{tok}`")))?;
            if v as usize >= n {
                return Err(Error::parse(no, col, format!("index {v} out of range")));
            }
            table.push(v);
            count += 1;
        }
        if count != n {
            return Err(Error::parse(no, 1, format!("expected {n} entries, found {count}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::parse(last, 1, format!("expected {n} rows, found {rows}")));
    }
    Rack::from_table(n, table)
}

pub fn format_rack(r: &Rack) -> String {
    let n = r.size();
    let mut out = format!("RACK v1\nsize {n}\n");
    for x in 0..n {
        let row: Vec<String> = (0..n).map(|y| r.op(x, y).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
