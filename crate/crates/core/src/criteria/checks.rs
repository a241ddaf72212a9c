use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::classify::ExtensionKnowledge;
use super::{CriterionId, DegreeCondition, Effect, Evidence, Finding, Outcome, Reason, ReprConstraint, ScalarCondition, Verdict};
use crate::chartab::{compute_character_table_with_limit, s_count_bruteforce, CharacterTable};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::permgrp::{Perm, PermGroup, Reality};
use crate::rack::{type_d_search, witness_for_pair, Rack, SearchBudget, SearchOutcome, Strategy};

/// `ρ(g) = 1` kills the representation.
pub fn crit_scalar_one(scalar: &Cyclotomic) -> bool {
    scalar.is_one()
}

fn reality_evidence(order: u64, reality: &Reality, j: Option<u64>, differs: bool) -> Evidence {
    Evidence::Reality { order, reality: reality.clone(), j, j_squared_power_differs: differs }
}

/// Real classes: survivors need `ρ(g) = -1`, impossible in odd order.
pub fn crit_real(order: u64, reality: &Reality) -> Option<Finding> {
    if *reality != Reality::Real || order < 2 {
        return None;
    }
    let reason = Reason::new(CriterionId::Real, reality_evidence(order, reality, None, false));
    let effect = if order % 2 == 1 {
        Effect::AllInfinite
    } else {
        Effect::Constraints {
            constraints: vec![ReprConstraint { scalar: ScalarCondition::MinusOne, degree: DegreeCondition::Any, source: CriterionId::Real }],
        }
    };
    Some(Finding { reason, effect })
}

/// Quasi-real classes. A `j ∈ J` with `g^{j²} ≠ g` forces `ρ(g) = -1`; otherwise
/// degree > 1 needs `ρ(g) = -1` and degree 1 needs `ρ(g) ∈ {-1} ∪ R3`.
/// Since `ρ(g)^m = 1`, odd `m` rules out `-1`, and `3 ∤ m` rules out `R3`.
pub fn crit_quasireal(order: u64, reality: &Reality) -> Option<Finding> {
    let Reality::QuasiReal(js) = reality else { return None };
    let m = order;
    let first = *js.first()?;
    if let Some(&j) = js.iter().find(|&&j| (j * j) % m != 1) {
        let reason = Reason::new(CriterionId::QuasiReal, reality_evidence(order, reality, Some(j), true));
        let effect = if m % 2 == 1 {
            Effect::AllInfinite
        } else {
            Effect::Constraints {
                constraints: vec![ReprConstraint {
                    scalar: ScalarCondition::MinusOne,
                    degree: DegreeCondition::Any,
                    source: CriterionId::QuasiReal,
                }],
            }
        };
        return Some(Finding { reason, effect });
    }
    let reason = Reason::new(CriterionId::QuasiReal, reality_evidence(order, reality, Some(first), false));
    let effect = if m % 2 == 1 && !m.is_multiple_of(3) {
        Effect::AllInfinite
    } else {
        Effect::Constraints {
            constraints: vec![
                ReprConstraint { scalar: ScalarCondition::MinusOne, degree: DegreeCondition::AtLeastTwo, source: CriterionId::QuasiReal },
                ReprConstraint { scalar: ScalarCondition::MinusOneOrThirdRoot, degree: DegreeCondition::One, source: CriterionId::QuasiReal },
            ],
        }
    };
    Some(Finding { reason, effect })
}

fn order_three_classes(orders: &[u64]) -> Vec<usize> {
    orders.iter().enumerate().filter(|(_, &o)| o == 3).map(|(i, _)| i).collect()
}

/// Involution class `k`: first ordered pair of order-3 classes with `S(O, K1, K2) ≥ 1`.
pub fn crit_involution_a4_table(t: &CharacterTable, k: usize) -> Result<Option<Finding>> {
    if t.orders[k] != 2 {
        return Ok(None);
    }
    let threes = order_three_classes(&t.orders);
    for &k1 in &threes {
        for &k2 in &threes {
            let s = t.s_count(k, k1, k2)?;
            if !s.is_zero() {
                let evidence = Evidence::A4 {
                    involution: t.labels[k].clone(),
                    k1: t.labels[k1].clone(),
                    k2: t.labels[k2].clone(),
                    s_value: Some(s.to_string()),
                    pair: None,
                    subgroup_order: None,
                };
                return Ok(Some(Finding { reason: Reason::new(CriterionId::InvolutionA4, evidence), effect: Effect::AllInfinite }));
            }
        }
    }
    Ok(None)
}

/// The same criterion from the group: `a ∈ O`, `b1 = a⁻¹ b2 ∈ K1`, and `⟨a, b1⟩` of order 12.
pub fn crit_involution_a4_group(g: &PermGroup, k: usize) -> Result<Option<Finding>> {
    let classes = g.conjugacy_classes()?;
    if classes[k].order != 2 {
        return Ok(None);
    }
    let orders: Vec<u64> = classes.iter().map(|c| c.order).collect();
    let threes = order_three_classes(&orders);
    for &k1 in &threes {
        for &k2 in &threes {
            let s = s_count_bruteforce(g, k, k1, k2)?;
            if s.is_zero() {
                continue;
            }
            let b2 = &classes[k2].representative;
            let a = g
                .class_elements(k)?
                .into_iter()
                .find(|a| g.class_of(&(&a.inverse() * b2)).map(|c| c == k1).unwrap_or(false))
                .expect("nonzero structure constant");
            let b1 = &a.inverse() * b2;
            let h = PermGroup::with_degree(vec![a.clone(), b1.clone()], g.degree());
            let order = h.order();
            if order != 12 {
                return Err(Error::invalid(format!("<{a}, {b1}> has order {order}, not 12")));
            }
            let evidence = Evidence::A4 {
                involution: classes[k].label.clone(),
                k1: classes[k1].label.clone(),
                k2: classes[k2].label.clone(),
                s_value: Some(s.to_string()),
                pair: Some((a.to_string(), b1.to_string())),
                subgroup_order: Some(order),
            };
            return Ok(Some(Finding { reason: Reason::new(CriterionId::InvolutionA4, evidence), effect: Effect::AllInfinite }));
        }
    }
    Ok(None)
}

/// Involution class `k`: first class `B` of even order `n > 4` with `S(A, A, B) > 0`.
pub fn crit_dihedral_table(t: &CharacterTable, k: usize) -> Result<Option<Finding>> {
    if t.orders[k] != 2 {
        return Ok(None);
    }
    for b in 0..t.nclasses() {
        let n = t.orders[b];
        if !n.is_multiple_of(2) || n <= 4 {
            continue;
        }
        let s = t.s_count(k, k, b)?;
        if !s.is_zero() {
            let evidence = Evidence::Dihedral {
                involution: t.labels[k].clone(),
                class: t.labels[b].clone(),
                n,
                s_value: Some(s.to_string()),
                witness: None,
            };
            return Ok(Some(Finding { reason: Reason::new(CriterionId::Dihedral, evidence), effect: Effect::TypeD }));
        }
    }
    Ok(None)
}

/// Group version: `r = t s` with `s, t ∈ A`, `r` of even order `n > 4`; the pair
/// `(s, t)` is checked as a type-D witness in the class rack `x` of `A`.
pub fn crit_dihedral_group(g: &PermGroup, k: usize, x: &Rack, budget: SearchBudget) -> Result<Option<Finding>> {
    let classes = g.conjugacy_classes()?;
    if classes[k].order != 2 {
        return Ok(None);
    }
    let s = &classes[k].representative;
    let mut best: Option<(usize, Perm)> = None;
    for t in g.class_elements(k)? {
        let r = &t * s;
        let n = r.order();
        if n % 2 == 0 && n > 4 {
            let b = g.class_of(&r)?;
            if best.as_ref().is_none_or(|(bb, _)| b < *bb) {
                best = Some((b, t));
            }
        }
    }
    let Some((b, t)) = best else { return Ok(None) };
    let (si, ti) = (x.index_of(s).expect("class member"), x.index_of(&t).expect("class member"));
    let witness = witness_for_pair(x, si, ti, budget)?
        .ok_or_else(|| Error::invalid(format!("dihedral pair ({s}, {t}) is not a type-D witness")))?;
    let evidence = Evidence::Dihedral {
        involution: classes[k].label.clone(),
        class: classes[b].label.clone(),
        n: classes[b].order,
        s_value: Some(s_count_bruteforce(g, k, k, b)?.to_string()),
        witness: Some(witness),
    };
    Ok(Some(Finding { reason: Reason::new(CriterionId::Dihedral, evidence), effect: Effect::TypeD }))
}

/// `C_G(g)` with its character table and the index of the central class `{g}`.
#[derive(Debug)]
pub struct CentralizerContext {
    pub group: PermGroup,
    pub table: CharacterTable,
    pub g_class: usize,
}

impl CentralizerContext {
    pub fn scalar(&self, i: usize) -> Cyclotomic {
        self.table.central_scalar(i, self.g_class)
    }
}

pub fn centralizer_context(g: &PermGroup, x: &Perm, dixon_limit: u128) -> Result<CentralizerContext> {
    let c = g.centralizer(x)?;
    let table = compute_character_table_with_limit(&c, &format!("C({x})"), dixon_limit)?;
    let g_class = c.class_of(x)?;
    Ok(CentralizerContext { group: c, table, g_class })
}

/// An involution `x` with `h = xgx` commuting with `g`, `h ≠ g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionConjugate {
    pub x: Perm,
    pub h: Perm,
    /// Class of `h` in `C_G(g)`.
    pub h_class: usize,
}

/// One conjugate per class of `C_G(g)`, in class order.
pub fn involution_conjugates(g: &PermGroup, x0: &Perm, ctx: &CentralizerContext) -> Result<Vec<InvolutionConjugate>> {
    let mut found: Vec<Option<InvolutionConjugate>> = vec![None; ctx.table.nclasses()];
    for x in g.elements()?.iter() {
        if x.order() != 2 {
            continue;
        }
        let h = x.conj(x0);
        if h == *x0 || !h.commutes_with(x0) {
            continue;
        }
        let c = ctx.group.class_of(&h)?;
        if found[c].is_none() {
            found[c] = Some(InvolutionConjugate { x: x.clone(), h, h_class: c });
        }
    }
    Ok(found.into_iter().flatten().collect())
}

/// Gate on the `±1` multiplicities of `ρ(h)`.
pub fn eigen_gate(a: u64, b: u64) -> bool {
    (a > 0 && b > 3) || (a > 3 && b > 0)
}

/// Character `i` of `C_G(g)` with `ρ(g) = -1`, tested at every conjugate `h`.
pub fn crit_involution_count(ctx: &CentralizerContext, i: usize, conjugates: &[InvolutionConjugate]) -> Result<Option<Finding>> {
    if ctx.scalar(i).as_i64() != Some(-1) {
        return Ok(None);
    }
    for c in conjugates {
        let (a, b) = ctx.table.eigenvalue_multiplicities(i, c.h_class)?.plus_minus();
        if eigen_gate(a, b) {
            let evidence = Evidence::Eigen {
                character: i,
                x: c.x.to_string(),
                h: c.h.to_string(),
                h_class: ctx.table.labels[c.h_class].clone(),
                a,
                b,
            };
            return Ok(Some(Finding { reason: Reason::new(CriterionId::InvolutionCount, evidence), effect: Effect::AllInfinite }));
        }
    }
    Ok(None)
}

/// Conclusive verdicts for classes of `H ≤ G`, transported to the `G`-classes
/// containing them. Type-D subracks stay type D in the ambient class.
pub fn crit_subgroup_propagation(name: &str, h: &PermGroup, h_verdicts: &[Verdict], fusion: &[usize]) -> Result<Vec<(usize, Finding)>> {
    let mut out = Vec::new();
    for v in h_verdicts {
        let effect = match v.outcome {
            Outcome::CollapsesTypeD => Effect::TypeD,
            Outcome::AllReprsInfinite => Effect::AllInfinite,
            _ => continue,
        };
        let hk = h.class_by_label(&v.label)?;
        let gk = *fusion.get(hk).ok_or_else(|| Error::NotSubgroup("fusion map too short".into()))?;
        let evidence = Evidence::Subgroup { subgroup: name.to_string(), class: v.label.clone(), outcome: v.outcome.name().to_string() };
        out.push((gk, Finding { reason: Reason::new(CriterionId::Subgroup, evidence), effect }));
    }
    Ok(out)
}

/// Outcome of the extension arithmetic for an element of order `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionCheck {
    pub m: u64,
    pub qualifying: Vec<u64>,
    /// Qualifying orders present in `H` but not known type D.
    pub missing: Vec<u64>,
    pub fires: bool,
}

/// `k | m` and `m/k | |K|`; fires when every `H`-class of each qualifying order is type D.
pub fn crit_extension(m: u64, knowledge: &ExtensionKnowledge) -> ExtensionCheck {
    let kernel = BigUint::from(knowledge.kernel_order);
    let qualifying: Vec<u64> =
        (1..=m).filter(|k| m.is_multiple_of(*k) && (&kernel % BigUint::from(m / k)).is_zero()).collect();
    let missing: Vec<u64> = qualifying
        .iter()
        .copied()
        .filter(|k| knowledge.element_orders.contains(k) && !knowledge.type_d_orders.contains(k))
        .collect();
    let fires = missing.is_empty();
    ExtensionCheck { m, qualifying, missing, fires }
}

/// Element orders of `H` all of whose classes are type D by exhaustive search.
pub fn type_d_orders(h: &PermGroup, budget: SearchBudget) -> Result<(BTreeSet<u64>, BTreeSet<u64>)> {
    let classes = h.conjugacy_classes()?;
    let present: BTreeSet<u64> = classes.iter().map(|c| c.order).collect();
    let mut typed = BTreeSet::new();
    for &o in &present {
        if o == 1 {
            continue;
        }
        let mut all = true;
        for (k, c) in classes.iter().enumerate() {
            if c.order != o {
                continue;
            }
            let x = Rack::class_rack(h, k)?;
            if !matches!(type_d_search(&x, Strategy::Exhaustive, 0, budget)?, SearchOutcome::Witness(_)) {
                all = false;
                break;
            }
        }
        if all {
            typed.insert(o);
        }
    }
    Ok((present, typed))
}
