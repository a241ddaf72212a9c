use std::collections::{BTreeSet, HashMap, VecDeque};

use num_integer::Integer;
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use super::perm::{compose, Perm};
use super::random::ProductReplacement;
use super::schreier::StabChain;
use crate::error::{Error, Result};

/// Default cap on the number of group elements held in memory.
pub const DEFAULT_ENUM_BUDGET: usize = 10_000_000;

#[derive(Debug)]
pub struct Elements {
    list: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

impl Elements {
    fn from_list(list: Vec<Perm>) -> Self {
        let index = list.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        Elements { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &Perm {
        &self.list[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Perm> {
        self.list.iter()
    }
}

/// A conjugacy class of an enumerated permutation group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjClass {
    pub label: String,
    pub representative: Perm,
    pub order: u64,
    pub size: usize,
    #[serde(with = "crate::wire::dec")]
    pub centralizer_order: u128,
    /// Indices into the owner group's element store.
    #[serde(skip)]
    pub members: Vec<u32>,
}

#[derive(Debug)]
struct ClassData {
    classes: Vec<ConjClass>,
    class_of: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "exponents", rename_all = "kebab-case")]
pub enum Reality {
    Real,
    QuasiReal(Vec<u64>),
    Neither,
}

impl std::fmt::Display for Reality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reality::Real => write!(f, "real"),
            Reality::Neither => write!(f, "neither"),
            Reality::QuasiReal(j) => {
                let j: Vec<String> = j.iter().map(u64::to_string).collect();
                write!(f, "quasi-real J={{{}}}", j.join(","))
            }
        }
    }
}

/// A permutation group given by generators, with lazily computed order,
/// element store and conjugacy classes.
#[derive(Debug)]
pub struct PermGroup {
    gens: Vec<Perm>,
    degree: usize,
    budget: usize,
    chain: OnceCell<StabChain>,
    elements: OnceCell<Elements>,
    classes: OnceCell<ClassData>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::with_budget(self.gens.clone(), self.degree, self.budget)
    }
}

impl PermGroup {
    pub fn new(gens: Vec<Perm>) -> Self {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0);
        Self::with_budget(gens, degree, DEFAULT_ENUM_BUDGET)
    }

    pub fn with_degree(gens: Vec<Perm>, degree: usize) -> Self {
        Self::with_budget(gens, degree, DEFAULT_ENUM_BUDGET)
    }

    pub fn with_budget(gens: Vec<Perm>, degree: usize, budget: usize) -> Self {
        let degree = gens.iter().map(Perm::degree).max().unwrap_or(0).max(degree);
        let gens = if gens.is_empty() { vec![Perm::identity()] } else { gens };
        PermGroup {
            gens,
            degree,
            budget,
            chain: OnceCell::new(),
            elements: OnceCell::new(),
            classes: OnceCell::new(),
        }
    }

    /// Group whose element set is known; generators are chosen greedily.
    pub fn from_elements(elements: Vec<Perm>, degree: usize) -> Result<Self> {
        let set: std::collections::HashSet<&Perm> = elements.iter().collect();
        let mut gens: Vec<Perm> = Vec::new();
        let mut covered: std::collections::HashSet<Perm> = [Perm::identity()].into_iter().collect();
        for e in &elements {
            if covered.contains(e) {
                continue;
            }
            gens.push(e.clone());
            covered = closure(&gens, usize::MAX)?.into_iter().collect();
            if covered.iter().any(|c| !set.contains(c)) {
                return Err(Error::NotSubgroup("element set is not closed".into()));
            }
        }
        if covered.len() != elements.len() {
            return Err(Error::NotSubgroup("element set is not a group".into()));
        }
        let g = PermGroup::with_degree(gens, degree);
        let _ = g.elements.set(Elements::from_list(elements));
        Ok(g)
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn set_budget(&mut self, budget: usize) {
        self.budget = budget;
    }

    pub fn stab_chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(&self.gens, self.degree))
    }

    /// Exact order: from the element store when present, else by stabilizer chain.
    pub fn order(&self) -> u128 {
        match self.elements.get() {
            Some(e) => e.len() as u128,
            None => self.stab_chain().order(),
        }
    }

    pub fn contains(&self, g: &Perm) -> bool {
        match self.elements.get() {
            Some(e) => e.index_of(g).is_some(),
            None => self.stab_chain().contains(g),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|a| self.gens.iter().all(|b| a.commutes_with(b)))
    }

    pub fn elements(&self) -> Result<&Elements> {
        self.elements.get_or_try_init(|| {
            let order = self.stab_chain().order();
            if order > self.budget as u128 {
                return Err(Error::budget(format!("enumerating a group of order {order}"), self.budget as u128));
            }
            Ok(Elements::from_list(closure(&self.gens, self.budget)?))
        })
    }

    fn class_data(&self) -> Result<&ClassData> {
        self.classes.get_or_try_init(|| compute_classes(self))
    }

    pub fn conjugacy_classes(&self) -> Result<&[ConjClass]> {
        Ok(&self.class_data()?.classes)
    }

    pub fn class_of_index(&self, i: usize) -> Result<usize> {
        Ok(self.class_data()?.class_of[i] as usize)
    }

    /// Index of the class containing `g`.
    pub fn class_of(&self, g: &Perm) -> Result<usize> {
        let i = self
            .elements()?
            .index_of(g)
            .ok_or_else(|| Error::invalid(format!("{g} is not in the group")))?;
        self.class_of_index(i)
    }

    pub fn class_by_label(&self, label: &str) -> Result<usize> {
        self.conjugacy_classes()?
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| Error::invalid(format!("no class labelled {label}")))
    }

    pub fn class_elements(&self, k: usize) -> Result<Vec<Perm>> {
        let e = self.elements()?;
        Ok(self.conjugacy_classes()?[k].members.iter().map(|&i| e.get(i as usize).clone()).collect())
    }

    /// Class of `g^k` for each class.
    pub fn power_map(&self, k: i64) -> Result<Vec<usize>> {
        self.conjugacy_classes()?.iter().map(|c| self.class_of(&c.representative.pow(k))).collect()
    }

    pub fn reality_profile(&self, k: usize) -> Result<Reality> {
        let c = &self.conjugacy_classes()?[k];
        self.reality_of(&c.representative)
    }

    /// Reality profile of the class of `g`, computed from `g` itself.
    pub fn reality_of(&self, g: &Perm) -> Result<Reality> {
        let k = self.class_of(g)?;
        if self.class_of(&g.inverse())? == k {
            return Ok(Reality::Real);
        }
        let m = g.order();
        let mut j_set = Vec::new();
        for j in 2..m {
            if j.gcd(&m) == 1 && self.class_of(&g.pow(j as i64))? == k {
                j_set.push(j);
            }
        }
        Ok(if j_set.is_empty() { Reality::Neither } else { Reality::QuasiReal(j_set) })
    }

    pub fn centralizer(&self, g: &Perm) -> Result<PermGroup> {
        let elems: Vec<Perm> = self.elements()?.iter().filter(|x| x.commutes_with(g)).cloned().collect();
        PermGroup::from_elements(elems, self.degree)
    }

    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if !self.contains(g) {
                return Err(Error::NotSubgroup(format!("{g} is not in the group")));
            }
        }
        Ok(PermGroup::with_budget(gens, self.degree, self.budget))
    }

    pub fn random_elements(&self, n: usize, seed: u64) -> Vec<Perm> {
        ProductReplacement::new(&self.gens, seed).take(n).collect()
    }

    pub fn random_source(&self, seed: u64, worker: u64) -> ProductReplacement {
        ProductReplacement::for_worker(&self.gens, seed, worker)
    }

    pub fn exponent(&self) -> Result<u64> {
        Ok(self.conjugacy_classes()?.iter().fold(1u64, |a, c| a.lcm(&c.order)))
    }
}

/// BFS closure of the generators; errors once more than `budget` elements appear.
pub fn closure(gens: &[Perm], budget: usize) -> Result<Vec<Perm>> {
    let mut list = vec![Perm::identity()];
    let mut seen: std::collections::HashSet<Perm> = list.iter().cloned().collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &list[i]);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                list.push(y);
                if list.len() > budget {
                    return Err(Error::budget("group closure", budget as u128));
                }
                queue.push_back(list.len() - 1);
            }
        }
    }
    Ok(list)
}

fn letters(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}

fn compute_classes(g: &PermGroup) -> Result<ClassData> {
    let elems = g.elements()?;
    let n = elems.len();
    let order = n as u128;
    let mut class_of = vec![u32::MAX; n];
    let mut raw: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if class_of[start] != u32::MAX {
            continue;
        }
        let id = raw.len() as u32;
        class_of[start] = id;
        let mut members = vec![start as u32];
        let mut k = 0;
        while k < members.len() {
            let x = elems.get(members[k] as usize);
            for s in &g.gens {
                let y = s.conj(x);
                let yi = elems.index_of(&y).expect("closed under conjugation");
                if class_of[yi] == u32::MAX {
                    class_of[yi] = id;
                    members.push(yi as u32);
                }
            }
            k += 1;
        }
        raw.push(members);
    }
    struct Raw {
        members: Vec<u32>,
        rep: usize,
        order: u64,
    }
    let mut raws: Vec<Raw> = raw
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            let rep = *members.iter().min_by(|&&a, &&b| elems.get(a as usize).cmp(elems.get(b as usize))).unwrap();
            let order = elems.get(rep as usize).order();
            Raw { members, rep: rep as usize, order }
        })
        .collect();
    raws.sort_by(|a, b| {
        a.order
            .cmp(&b.order)
            .then(a.members.len().cmp(&b.members.len()))
            .then_with(|| elems.get(a.rep).cmp(elems.get(b.rep)))
    });
    let mut classes = Vec::with_capacity(raws.len());
    let mut letter = 0usize;
    let mut last_order = 0u64;
    let mut new_class_of = vec![0u32; n];
    for (idx, r) in raws.into_iter().enumerate() {
        if r.order != last_order {
            letter = 0;
            last_order = r.order;
        }
        for &m in &r.members {
            new_class_of[m as usize] = idx as u32;
        }
        let size = r.members.len();
        classes.push(ConjClass {
            label: format!("{}{}", r.order, letters(letter)),
            representative: elems.get(r.rep).clone(),
            order: r.order,
            size,
            centralizer_order: order / size as u128,
            members: r.members,
        });
        letter += 1;
    }
    Ok(ClassData { classes, class_of: new_class_of })
}

/// For each class of `h`, the index of the class of `g` containing it.
pub fn class_fusion(h: &PermGroup, g: &PermGroup) -> Result<Vec<usize>> {
    for x in h.generators() {
        if !g.contains(x) {
            return Err(Error::NotSubgroup(format!("generator {x} is not in the ambient group")));
        }
    }
    h.conjugacy_classes()?.iter().map(|c| g.class_of(&c.representative)).collect()
}

/// Distinct element orders of the group, ascending.
pub fn element_orders(g: &PermGroup) -> Result<BTreeSet<u64>> {
    Ok(g.conjugacy_classes()?.iter().map(|c| c.order).collect())
}
