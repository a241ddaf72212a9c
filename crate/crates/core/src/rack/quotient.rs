use std::collections::VecDeque;

use super::core::Rack;
use super::typed::{witness_for_pair, SearchBudget, TypeDWitness};
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup};

/// A group homomorphism `G → H` tabulated on all elements of `G`.
#[derive(Debug)]
pub struct Homomorphism<'a> {
    source: &'a PermGroup,
    target: &'a PermGroup,
    images: Vec<Perm>,
}

impl<'a> Homomorphism<'a> {
    /// Extends `gens(G)[i] ↦ images[i]` along a breadth-first spanning tree of `G`
    /// and checks `f(gx) = f(g) f(x)` on every element and generator.
    pub fn from_generator_images(source: &'a PermGroup, target: &'a PermGroup, images: Vec<Perm>) -> Result<Self> {
        let gens = source.generators();
        if gens.len() != images.len() {
            return Err(Error::NotHomomorphism(format!("{} generators but {} images", gens.len(), images.len())));
        }
        for y in &images {
            if !target.contains(y) {
                return Err(Error::NotHomomorphism(format!("image {y} is not in the target")));
            }
        }
        let elems = source.elements()?;
        let mut table: Vec<Option<Perm>> = vec![None; elems.len()];
        let id = elems.index_of(&Perm::identity()).expect("identity");
        table[id] = Some(Perm::identity());
        let mut queue = VecDeque::from([id]);
        while let Some(i) = queue.pop_front() {
            let fx = table[i].clone().expect("visited");
            for (g, fg) in gens.iter().zip(&images) {
                let j = elems.index_of(&(g * elems.get(i))).expect("closed");
                let want = fg * &fx;
                match &table[j] {
                    Some(have) if *have != want => {
                        return Err(Error::NotHomomorphism(format!(
                            "{} has images {have} and {want}",
                            elems.get(j)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        table[j] = Some(want);
                        queue.push_back(j);
                    }
                }
            }
        }
        let images = table.into_iter().map(|x| x.expect("connected")).collect();
        Ok(Homomorphism { source, target, images })
    }

    pub fn source(&self) -> &PermGroup {
        self.source
    }

    pub fn target(&self) -> &PermGroup {
        self.target
    }

    pub fn image(&self, g: &Perm) -> Result<&Perm> {
        let i = self.source.elements()?.index_of(g).ok_or_else(|| Error::invalid(format!("{g} is not in the source")))?;
        Ok(&self.images[i])
    }

    pub fn is_surjective(&self) -> bool {
        let set: std::collections::HashSet<&Perm> = self.images.iter().collect();
        set.len() as u128 == self.target.order()
    }
}

/// A witness for the class of `g` in the source, lifted from a witness for
/// the class of `f(g)` in the target.
#[derive(Debug)]
pub struct LiftedWitness {
    pub rack: Rack,
    pub witness: TypeDWitness,
}

/// Lifts a type-D certificate along an epimorphism: preimages `r', s'` of the
/// witness pair inside the class of `g` satisfy the same conditions.
pub fn type_d_via_quotient(f: &Homomorphism, g: &Perm, target_rack: &Rack, w: &TypeDWitness) -> Result<Option<LiftedWitness>> {
    if !f.is_surjective() {
        return Err(Error::NotHomomorphism("map is not onto".into()));
    }
    w.validate(target_rack)?;
    let h = f.image(g)?;
    if target_rack.index_of(h).is_none() {
        return Ok(None);
    }
    let (r, s) = (
        target_rack.element(w.r).ok_or_else(|| Error::invalid("target rack is not a conjugation rack"))?,
        target_rack.element(w.s).expect("conjugation rack"),
    );
    let source = f.source();
    let rack = Rack::class_rack(source, source.class_of(g)?)?;
    let elems = rack.elements().expect("conjugation rack");
    let find = |t: &Perm| elems.iter().position(|x| f.image(x).map(|y| y == t).unwrap_or(false));
    let (Some(r1), Some(s1)) = (find(r), find(s)) else { return Ok(None) };
    let witness = witness_for_pair(&rack, r1, s1, SearchBudget { orbit_cap: rack.size(), ..w.budget })?;
    Ok(witness.map(|witness| LiftedWitness { rack, witness }))
}

/// `G × K` on the disjoint union of the point sets, with both projections.
pub fn direct_product(g: &PermGroup, k: &PermGroup) -> (PermGroup, Vec<Perm>, Vec<Perm>) {
    let shift = g.degree() as u32;
    let lifted: Vec<Perm> = k
        .generators()
        .iter()
        .map(|x| {
            let mut im: Vec<u32> = (0..shift).collect();
            im.extend((0..k.degree() as u32).map(|i| x.apply(i) + shift));
            Perm::from_images(im).expect("shifted permutation")
        })
        .collect();
    let mut gens: Vec<Perm> = g.generators().to_vec();
    gens.extend(lifted);
    let proj_g: Vec<Perm> =
        g.generators().iter().cloned().chain(k.generators().iter().map(|_| Perm::identity())).collect();
    let proj_k: Vec<Perm> =
        g.generators().iter().map(|_| Perm::identity()).chain(k.generators().iter().cloned()).collect();
    (PermGroup::with_degree(gens, g.degree() + k.degree()), proj_g, proj_k)
}
