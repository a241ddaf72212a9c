use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::affine::{find_affine_realization, AffineRealization, AffineSearch};
use super::checks::*;
use super::{
    Attempt, CriterionId, DegreeCondition, Effect, Evidence, Finding, Outcome, Reason, ReprConstraint, ReprVerdict,
    ScalarCondition, Verdict,
};
use crate::chartab::{s_count_bruteforce, CharacterTable, DEFAULT_DIXON_LIMIT};
use crate::error::{Error, Result};
use crate::permgrp::{class_fusion, Perm, PermGroup, Reality, DEFAULT_ENUM_BUDGET};
use crate::rack::{type_d_search, Rack, SearchBudget, SearchOutcome, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Element enumeration cap for groups.
    pub enumeration: usize,
    /// Largest pair count searched exhaustively; beyond it the search is randomized.
    pub max_pairs: u64,
    /// Cap on orbit certificates.
    pub orbit_cap: usize,
    /// Pairs drawn by a randomized type-D search.
    pub samples: u64,
    /// Largest centralizer whose character table is computed.
    #[serde(with = "crate::wire::dec")]
    pub dixon_limit: u128,
    /// Elements tried by the affine realization search.
    pub affine_candidates: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: DEFAULT_ENUM_BUDGET,
            max_pairs: 10_000_000,
            orbit_cap: 1_000_000,
            samples: 100_000,
            dixon_limit: DEFAULT_DIXON_LIMIT,
            affine_candidates: 1_000_000,
        }
    }
}

impl Budgets {
    pub fn search(&self) -> SearchBudget {
        SearchBudget { max_pairs: self.max_pairs.max(self.samples), orbit_cap: self.orbit_cap }
    }

    pub fn check(&self) -> Result<()> {
        if self.enumeration == 0
            || self.max_pairs == 0
            || self.orbit_cap == 0
            || self.samples == 0
            || self.dixon_limit == 0
            || self.affine_candidates == 0
        {
            return Err(Error::invalid("all budgets must be positive"));
        }
        Ok(())
    }
}

/// What is known about a quotient `H` of an extension `1 → K → M → H → 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionKnowledge {
    pub quotient: String,
    #[serde(with = "crate::wire::dec")]
    pub kernel_order: u128,
    pub element_orders: BTreeSet<u64>,
    /// Orders `k` such that every class of order `k` in `H` is type D.
    pub type_d_orders: BTreeSet<u64>,
}

impl ExtensionKnowledge {
    pub fn from_group(quotient: &str, h: &PermGroup, kernel_order: u128, budget: SearchBudget) -> Result<Self> {
        let (element_orders, type_d_orders) = type_d_orders(h, budget)?;
        Ok(ExtensionKnowledge { quotient: quotient.to_string(), kernel_order, element_orders, type_d_orders })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub budgets: Budgets,
    /// Subgroups whose verdicts are fused into the group.
    pub subgroups: Vec<(String, PermGroup)>,
    pub extensions: Vec<ExtensionKnowledge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub mode: String,
    pub order: String,
    pub verdicts: Vec<Verdict>,
    pub collapses: bool,
    pub seed: u64,
    pub budgets: Budgets,
}

impl Report {
    fn new(name: &str, mode: &str, order: String, verdicts: Vec<Verdict>, opts: &ClassifyOptions) -> Self {
        let collapses = verdicts.iter().all(|v| v.outcome.is_conclusive());
        Report { name: name.to_string(), mode: mode.to_string(), order, verdicts, collapses, seed: opts.seed, budgets: opts.budgets }
    }

    pub fn verdict(&self, label: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.label == label)
    }

    pub fn summary_line(&self) -> String {
        if self.collapses {
            "group collapses".to_string()
        } else {
            let open: Vec<&str> = self.verdicts.iter().filter(|v| !v.outcome.is_conclusive()).map(|v| v.label.as_str()).collect();
            format!("not settled: {}", open.join(" "))
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (order {}, {} mode, seed {})", self.name, self.order, self.mode, self.seed);
        let _ = writeln!(out, "{:<6} {:>5} {:>10} {:>10}  {:<22} {:<21} relevant information", "class", "ord", "size", "|C(g)|", "reality", "outcome");
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "{:<6} {:>5} {:>10} {:>10}  {:<22} {:<21} {}",
                v.label,
                v.order,
                v.size,
                v.centralizer_order,
                v.reality.to_string(),
                v.outcome.name(),
                describe(v)
            );
        }
        let _ = writeln!(out, "{}", self.summary_line());
        out
    }
}

fn describe(v: &Verdict) -> String {
    match &v.outcome {
        Outcome::CollapsesTypeD | Outcome::AllReprsInfinite => {
            v.reasons.iter().map(describe_reason).collect::<Vec<_>>().join("; ")
        }
        Outcome::SurvivorsConstrained { constraints } => {
            let cs: Vec<String> = constraints.iter().map(|c| c.to_string()).collect();
            let survivors = v
                .representations
                .as_ref()
                .map(|r| format!(" ({} of {} characters survive)", r.iter().filter(|x| x.killed_by.is_none()).count(), r.len()))
                .unwrap_or_default();
            format!("{}{survivors}", cs.join(", "))
        }
        Outcome::Open => {
            let tried: Vec<&str> = v.attempted.iter().map(|a| a.criterion.name()).collect();
            format!("tried: {}", tried.join(", "))
        }
    }
}

fn describe_reason(r: &Reason) -> String {
    match &r.evidence {
        Evidence::Witness { witness } => {
            format!("type D: r={} s={} |<r,s>|={}", witness.r_element, witness.s_element, witness.subgroup_order.map_or("?".into(), |o| o.to_string()))
        }
        Evidence::Dihedral { involution, class, n, s_value, .. } => {
            format!("dihedral: S({involution},{involution},{class})={} n={n}", s_value.as_deref().unwrap_or("?"))
        }
        Evidence::Extension { m, kernel_order, qualifying, quotient } => {
            format!("extension over {quotient}: m={m} |K|={kernel_order} k in {qualifying:?}")
        }
        Evidence::Subgroup { subgroup, class, outcome } => format!("subgroup {subgroup} class {class}: {outcome}"),
        Evidence::A4 { involution, k1, k2, s_value, .. } => {
            format!("A4: S({involution},{k1},{k2})={}", s_value.as_deref().unwrap_or("?"))
        }
        Evidence::Scalar { characters } => format!("ρ(g)=1 for characters {characters:?}"),
        Evidence::Reality { order, reality, j, j_squared_power_differs } => match (reality, j) {
            (Reality::Real, _) => format!("real, order {order}"),
            (_, Some(j)) if *j_squared_power_differs => {
                format!("quasi-real j={j}, g^{} ≠ g, order {order}{}", j * j, if order % 2 == 1 { " odd" } else { "" })
            }
            (_, Some(j)) => format!("quasi-real j={j}, order {order}"),
            _ => reality.to_string(),
        },
        Evidence::Affine { p, dim, d, j, subgroup_order, .. } => {
            format!("affine F_{p}^{dim} ⋊ C_{d}, |H|={subgroup_order}, quasi-real of type {j}")
        }
        Evidence::Eigen { character, h_class, a, b, .. } => {
            format!("eigenvalue count: χ{character} at {h_class} a={a} b={b}")
        }
    }
}

struct ClassRun {
    reasons: Vec<Reason>,
    attempted: Vec<Attempt>,
    constraints: Vec<ReprConstraint>,
    representations: Option<Vec<ReprVerdict>>,
}

impl ClassRun {
    fn new() -> Self {
        ClassRun { reasons: Vec::new(), attempted: Vec::new(), constraints: Vec::new(), representations: None }
    }

    fn attempt(&mut self, criterion: CriterionId, result: impl Into<String>) {
        self.attempted.push(Attempt { criterion, result: result.into() });
    }

    /// Records a finding; returns the outcome if it settles the class.
    fn apply(&mut self, f: Finding) -> Option<Outcome> {
        self.reasons.push(f.reason);
        match f.effect {
            Effect::TypeD => Some(Outcome::CollapsesTypeD),
            Effect::AllInfinite => Some(Outcome::AllReprsInfinite),
            Effect::Constraints { constraints } => {
                self.constraints.extend(constraints);
                None
            }
        }
    }

    fn finish(mut self, outcome: Option<Outcome>) -> (Outcome, ClassRun) {
        if let Some(o) = outcome {
            return (o, self);
        }
        if self.constraints.is_empty() {
            return (Outcome::Open, self);
        }
        let mut cs = vec![ReprConstraint { scalar: ScalarCondition::NotOne, degree: DegreeCondition::Any, source: CriterionId::ScalarOne }];
        cs.append(&mut self.constraints);
        (Outcome::SurvivorsConstrained { constraints: cs }, self)
    }
}

fn class_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the battery on every nontrivial class of an enumerable group.
pub fn classify_group(name: &str, g: &PermGroup, opts: &ClassifyOptions) -> Result<Report> {
    opts.budgets.check()?;
    let mut g = g.clone();
    g.set_budget(opts.budgets.enumeration);
    let classes = g.conjugacy_classes()?;
    let mut transported: BTreeMap<usize, Vec<Finding>> = BTreeMap::new();
    for (hname, h) in &opts.subgroups {
        let fusion = class_fusion(h, &g)?;
        let sub_opts = ClassifyOptions { subgroups: Vec::new(), extensions: Vec::new(), ..opts.clone() };
        let hr = classify_group(hname, h, &sub_opts)?;
        for (gk, f) in crit_subgroup_propagation(hname, h, &hr.verdicts, &fusion)? {
            transported.entry(gk).or_default().push(f);
        }
    }
    let ks: Vec<usize> = (0..classes.len()).filter(|&k| classes[k].order > 1).collect();
    let verdicts = ks
        .par_iter()
        .map(|&k| classify_group_class(&g, k, opts, transported.get(&k).map(Vec::as_slice).unwrap_or(&[])))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(name, "group", g.order().to_string(), verdicts, opts))
}

fn classify_group_class(g: &PermGroup, k: usize, opts: &ClassifyOptions, transported: &[Finding]) -> Result<Verdict> {
    let b = opts.budgets;
    let c = &g.conjugacy_classes()?[k];
    let reality = g.reality_profile(k)?;
    let mut run = ClassRun::new();
    let outcome = (|| -> Result<Option<Outcome>> {
        let x = Rack::class_rack(g, k)?;
        if let Some(f) = crit_dihedral_group(g, k, &x, b.search())? {
            return Ok(run.apply(f));
        }
        if c.order == 2 {
            run.attempt(CriterionId::Dihedral, "no product of two class elements has even order > 4");
        }
        let pairs = (x.size() as u64).saturating_mul(x.orbit_representatives().len() as u64);
        let strategy = if pairs <= b.max_pairs { Strategy::Exhaustive } else { Strategy::Randomized { samples: b.samples } };
        match type_d_search(&x, strategy, class_seed(opts.seed, k), b.search()) {
            Ok(SearchOutcome::Witness(w)) => {
                return Ok(run.apply(Finding {
                    reason: Reason::new(CriterionId::TypeDSearch, Evidence::Witness { witness: w }),
                    effect: Effect::TypeD,
                }))
            }
            Ok(SearchOutcome::NotTypeD { pairs }) => run.attempt(CriterionId::TypeDSearch, format!("exhaustive: not type D ({pairs} pairs)")),
            Ok(SearchOutcome::Unknown { pairs, skipped }) => {
                run.attempt(CriterionId::TypeDSearch, format!("unknown ({pairs} pairs, {skipped} skipped)"))
            }
            Err(e @ Error::BudgetExceeded { .. }) => run.attempt(CriterionId::TypeDSearch, e.to_string()),
            Err(e) => return Err(e),
        }
        if let Some(f) = transported.iter().find(|f| f.effect == Effect::TypeD) {
            return Ok(run.apply(f.clone()));
        }
        for e in &opts.extensions {
            let check = crit_extension(c.order, e);
            if check.fires {
                let evidence = Evidence::Extension {
                    m: c.order,
                    kernel_order: e.kernel_order,
                    qualifying: check.qualifying,
                    quotient: e.quotient.clone(),
                };
                return Ok(run.apply(Finding { reason: Reason::new(CriterionId::Extension, evidence), effect: Effect::TypeD }));
            }
            run.attempt(CriterionId::Extension, format!("over {}: orders {:?} not known type D", e.quotient, check.missing));
        }
        if let Some(f) = crit_involution_a4_group(g, k)? {
            return Ok(run.apply(f));
        }
        if c.order == 2 {
            run.attempt(CriterionId::InvolutionA4, "no pair of order-3 classes");
        }
        if let Some(f) = transported.iter().find(|f| f.effect == Effect::AllInfinite) {
            return Ok(run.apply(f.clone()));
        }
        if let Some(f) = crit_real(c.order, &reality).or_else(|| crit_quasireal(c.order, &reality)) {
            if let Some(o) = run.apply(f) {
                return Ok(Some(o));
            }
        }
        if matches!(reality, Reality::QuasiReal(_)) {
            match find_affine_realization(g, k, b.affine_candidates)? {
                AffineSearch::Found(r) => return Ok(run.apply(r.finding())),
                AffineSearch::NotFound { candidates } => {
                    run.attempt(CriterionId::AffineQuasiReal, format!("no realization among {candidates} candidates"))
                }
                AffineSearch::Inapplicable => run.attempt(CriterionId::AffineQuasiReal, "inapplicable"),
            }
        }
        let ctx = match centralizer_context(g, &c.representative, b.dixon_limit) {
            Ok(ctx) => ctx,
            Err(e @ Error::BudgetExceeded { .. }) => {
                run.attempt(CriterionId::ScalarOne, format!("centralizer characters unavailable: {e}"));
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let conjugates = if c.order == 2 { involution_conjugates(g, &c.representative, &ctx)? } else { Vec::new() };
        if c.order == 2 && conjugates.is_empty() {
            run.attempt(CriterionId::InvolutionCount, "no involution x with xgx ≠ g commuting with g");
        }
        let mut reprs = Vec::new();
        let mut ones = Vec::new();
        let mut eigen = Vec::new();
        for i in 0..ctx.table.nclasses() {
            let scalar = ctx.scalar(i);
            let degree = ctx.table.degree(i);
            let killed_by = if crit_scalar_one(&scalar) {
                ones.push(i);
                Some(CriterionId::ScalarOne)
            } else if let Some(cs) = run.constraints.iter().find(|cs| !cs.allows(degree, &scalar)) {
                Some(cs.source)
            } else if let Some(f) = crit_involution_count(&ctx, i, &conjugates)? {
                eigen.push(f.reason);
                Some(CriterionId::InvolutionCount)
            } else {
                None
            };
            reprs.push(ReprVerdict { character: i, degree, scalar, killed_by });
        }
        let all = reprs.iter().all(|r| r.killed_by.is_some());
        if !ones.is_empty() {
            run.reasons.push(Reason::new(CriterionId::ScalarOne, Evidence::Scalar { characters: ones }));
        }
        let eigen_found = !eigen.is_empty();
        run.reasons.extend(eigen);
        if c.order == 2 && !eigen_found && !conjugates.is_empty() {
            run.attempt(CriterionId::InvolutionCount, format!("gate fails at {} conjugate classes", conjugates.len()));
        }
        run.representations = Some(reprs);
        Ok(all.then_some(Outcome::AllReprsInfinite))
    })()?;
    let (outcome, run) = run.finish(outcome);
    Ok(Verdict {
        label: c.label.clone(),
        order: c.order,
        size: c.size.to_string(),
        centralizer_order: c.centralizer_order.to_string(),
        reality,
        outcome,
        reasons: run.reasons,
        representations: run.representations,
        attempted: run.attempted,
        seed: opts.seed,
        budgets: opts.budgets,
    })
}

/// Table-level criteria only: dihedral, extension, A4 and reality.
pub fn classify_table(t: &CharacterTable, opts: &ClassifyOptions) -> Result<Report> {
    opts.budgets.check()?;
    let ks: Vec<usize> = (0..t.nclasses()).filter(|&k| t.orders[k] > 1).collect();
    let verdicts = ks.par_iter().map(|&k| classify_table_class(t, k, opts)).collect::<Result<Vec<_>>>()?;
    Ok(Report::new(&t.name, "table", t.order.to_string(), verdicts, opts))
}

fn classify_table_class(t: &CharacterTable, k: usize, opts: &ClassifyOptions) -> Result<Verdict> {
    let order = t.orders[k];
    let reality = t.reality(k)?;
    let mut run = ClassRun::new();
    let outcome = (|| -> Result<Option<Outcome>> {
        if let Some(f) = crit_dihedral_table(t, k)? {
            return Ok(run.apply(f));
        }
        if order == 2 {
            run.attempt(CriterionId::Dihedral, "no class B of even order > 4 with S(A,A,B) > 0");
        }
        run.attempt(CriterionId::TypeDSearch, "needs the group");
        for e in &opts.extensions {
            let check = crit_extension(order, e);
            if check.fires {
                let evidence =
                    Evidence::Extension { m: order, kernel_order: e.kernel_order, qualifying: check.qualifying, quotient: e.quotient.clone() };
                return Ok(run.apply(Finding { reason: Reason::new(CriterionId::Extension, evidence), effect: Effect::TypeD }));
            }
            run.attempt(CriterionId::Extension, format!("over {}: orders {:?} not known type D", e.quotient, check.missing));
        }
        if let Some(f) = crit_involution_a4_table(t, k)? {
            return Ok(run.apply(f));
        }
        if order == 2 {
            run.attempt(CriterionId::InvolutionA4, "no pair of order-3 classes");
        }
        if let Some(f) = crit_real(order, &reality).or_else(|| crit_quasireal(order, &reality)) {
            if let Some(o) = run.apply(f) {
                return Ok(Some(o));
            }
        }
        if matches!(reality, Reality::QuasiReal(_)) {
            run.attempt(CriterionId::AffineQuasiReal, "needs the group");
        }
        if order == 2 {
            run.attempt(CriterionId::InvolutionCount, "needs the group");
        }
        Ok(None)
    })()?;
    let (outcome, run) = run.finish(outcome);
    Ok(Verdict {
        label: t.labels[k].clone(),
        order,
        size: t.sizes[k].to_string(),
        centralizer_order: t.centralizer_order(k).to_string(),
        reality,
        outcome,
        reasons: run.reasons,
        representations: None,
        attempted: run.attempted,
        seed: opts.seed,
        budgets: opts.budgets,
    })
}

fn mismatch(label: &str, what: &str) -> Error {
    Error::invalid(format!("class {label}: {what} does not re-validate"))
}

fn parse_perm(s: &str) -> Result<Perm> {
    Perm::parse(s)
}

/// Recomputes every reason of every verdict from its stored parameters.
/// Returns the number of reasons checked; reasons that need data not supplied
/// (the group or a table) are skipped and not counted.
pub fn revalidate(report: &Report, g: Option<&PermGroup>, t: Option<&CharacterTable>) -> Result<usize> {
    let mut checked = 0;
    for v in &report.verdicts {
        let gk = match g {
            Some(g) => Some(g.class_by_label(&v.label)?),
            None => None,
        };
        let tk = match t {
            Some(t) => Some(t.class_index(&v.label)?),
            None => None,
        };
        for r in &v.reasons {
            let ok = match (&r.evidence, g, gk) {
                (Evidence::Witness { witness }, Some(g), Some(k)) => {
                    witness.validate(&Rack::class_rack(g, k)?).map_err(|_| mismatch(&v.label, "witness"))?;
                    true
                }
                (Evidence::Dihedral { involution, class, n, s_value, witness }, _, _) => {
                    let s = match (t, g) {
                        (Some(t), _) => Some(t.s_count_by_label(involution, involution, class)?),
                        (None, Some(g)) => {
                            let (a, b) = (g.class_by_label(involution)?, g.class_by_label(class)?);
                            Some(s_count_bruteforce(g, a, a, b)?)
                        }
                        _ => None,
                    };
                    if let (Some(s), Some(stored)) = (&s, s_value) {
                        if s.to_string() != *stored || s.to_string() == "0" || n % 2 != 0 || *n <= 4 {
                            return Err(mismatch(&v.label, "dihedral structure constant"));
                        }
                    }
                    if let (Some(w), Some(g), Some(k)) = (witness, g, gk) {
                        w.validate(&Rack::class_rack(g, k)?).map_err(|_| mismatch(&v.label, "dihedral witness"))?;
                    }
                    s.is_some()
                }
                (Evidence::Extension { m, kernel_order, qualifying, .. }, _, _) => {
                    let want: Vec<u64> = (1..=*m).filter(|k| m % k == 0 && kernel_order % (m / k) as u128 == 0).collect();
                    if want != *qualifying || *m != v.order {
                        return Err(mismatch(&v.label, "extension arithmetic"));
                    }
                    true
                }
                (Evidence::A4 { involution, k1, k2, s_value, pair, subgroup_order }, _, _) => {
                    let s = match (t, g) {
                        (Some(t), _) => Some(t.s_count_by_label(involution, k1, k2)?),
                        (None, Some(g)) => {
                            Some(s_count_bruteforce(g, g.class_by_label(involution)?, g.class_by_label(k1)?, g.class_by_label(k2)?)?)
                        }
                        _ => None,
                    };
                    if let (Some(s), Some(stored)) = (&s, s_value) {
                        if s.to_string() != *stored || s.to_string() == "0" {
                            return Err(mismatch(&v.label, "A4 structure constant"));
                        }
                    }
                    if let (Some((a, b1)), Some(g)) = (pair, g) {
                        let (a, b1) = (parse_perm(a)?, parse_perm(b1)?);
                        let h = PermGroup::with_degree(vec![a.clone(), b1.clone()], g.degree());
                        let ok = g.class_of(&a)? == g.class_by_label(involution)?
                            && g.class_of(&b1)? == g.class_by_label(k1)?
                            && g.class_of(&(&a * &b1))? == g.class_by_label(k2)?
                            && Some(h.order()) == *subgroup_order
                            && h.order() == 12;
                        if !ok {
                            return Err(mismatch(&v.label, "A4 pair"));
                        }
                    }
                    s.is_some()
                }
                (Evidence::Reality { order, reality, j, j_squared_power_differs }, _, _) => {
                    let fresh = match (g, gk, t, tk) {
                        (Some(g), Some(k), _, _) => Some(g.reality_profile(k)?),
                        (_, _, Some(t), Some(k)) => Some(t.reality(k)?),
                        _ => None,
                    };
                    if let Some(fresh) = &fresh {
                        let j_ok = match (reality, j) {
                            (Reality::QuasiReal(js), Some(j)) => js.contains(j) && ((j * j) % order != 1) == *j_squared_power_differs,
                            (Reality::Real, None) => true,
                            _ => false,
                        };
                        if fresh != reality || *order != v.order || !j_ok {
                            return Err(mismatch(&v.label, "reality profile"));
                        }
                    }
                    fresh.is_some()
                }
                (Evidence::Affine { p, dim, d, j, matrix, sigma, basis, subgroup_order }, Some(g), _) => {
                    let r = AffineRealization {
                        p: *p,
                        dim: *dim,
                        d: *d,
                        j: *j,
                        matrix: matrix.clone(),
                        sigma: parse_perm(sigma)?,
                        basis: basis.iter().map(|b| parse_perm(b)).collect::<Result<_>>()?,
                        subgroup_order: *subgroup_order,
                    };
                    if !r.verify(g)? || Some(g.class_of(&r.sigma)?) != gk {
                        return Err(mismatch(&v.label, "affine realization"));
                    }
                    true
                }
                (Evidence::Scalar { characters }, Some(g), Some(k)) => {
                    let ctx = centralizer_context(g, &g.conjugacy_classes()?[k].representative, report.budgets.dixon_limit)?;
                    if !characters.iter().all(|&i| i < ctx.table.nclasses() && ctx.scalar(i).is_one()) {
                        return Err(mismatch(&v.label, "scalar-one characters"));
                    }
                    true
                }
                (Evidence::Eigen { character, x, h, a, b, .. }, Some(g), Some(k)) => {
                    let g0 = g.conjugacy_classes()?[k].representative.clone();
                    let ctx = centralizer_context(g, &g0, report.budgets.dixon_limit)?;
                    let (x, h) = (parse_perm(x)?, parse_perm(h)?);
                    let hc = ctx.group.class_of(&h)?;
                    let (a2, b2) = ctx.table.eigenvalue_multiplicities(*character, hc)?.plus_minus();
                    let ok = x.order() == 2
                        && g.contains(&x)
                        && x.conj(&g0) == h
                        && h.commutes_with(&g0)
                        && ctx.scalar(*character).as_i64() == Some(-1)
                        && (a2, b2) == (*a, *b)
                        && eigen_gate(a2, b2);
                    if !ok {
                        return Err(mismatch(&v.label, "eigenvalue count"));
                    }
                    true
                }
                _ => false,
            };
            if ok {
                checked += 1;
            }
        }
    }
    Ok(checked)
}
