//! The criteria battery: per-class verdicts on the dimension of Nichols algebras
//! over a conjugacy class, with propagation along subgroups and extensions.

mod affine;
mod classify;
mod checks;

use serde::{Deserialize, Serialize};

use crate::cyclo::Cyclotomic;
use crate::permgrp::Reality;
use crate::rack::TypeDWitness;

pub use affine::{find_affine_realization, AffineRealization, AffineSearch};
pub use classify::{classify_group, classify_table, revalidate, Budgets, ClassifyOptions, ExtensionKnowledge, Report};
pub use checks::{
    centralizer_context, crit_dihedral_group, crit_dihedral_table, crit_extension, crit_involution_a4_group,
    crit_involution_a4_table, crit_involution_count, crit_quasireal, crit_real, crit_scalar_one,
    crit_subgroup_propagation, eigen_gate, involution_conjugates, type_d_orders, CentralizerContext, ExtensionCheck,
    InvolutionConjugate,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionId {
    TypeDSearch,
    Dihedral,
    Extension,
    Subgroup,
    InvolutionA4,
    ScalarOne,
    Real,
    QuasiReal,
    AffineQuasiReal,
    InvolutionCount,
}

impl CriterionId {
    pub fn citation(&self) -> &'static str {
        match self {
            CriterionId::TypeDSearch => "decomposable subrack R ⊔ S with r ▷ (s ▷ (r ▷ s)) ≠ s",
            CriterionId::Dihedral => "S(A, A, B) > 0 with B of even order n > 4 gives a dihedral subrack of type D",
            CriterionId::Extension => "type D lifts along M → H when every H-class of order k, k | m, m/k | |K|, is type D",
            CriterionId::Subgroup => "all Nichols algebras over the H-class infinite, or the H-class of type D",
            CriterionId::InvolutionA4 => "S(O, K1, K2) ≥ 1 with K1, K2 of order 3 gives a subgroup A4",
            CriterionId::ScalarOne => "ρ(g) = 1 forces infinite dimension",
            CriterionId::Real => "real class: ρ(g) = -1 and g of even order",
            CriterionId::QuasiReal => "quasi-real class g ≠ g^j ∈ O",
            CriterionId::AffineQuasiReal => "simple affine A ⋊ <T> inside G with ψ(0, T) quasi-real of type j, 1 < j < d",
            CriterionId::InvolutionCount => "involution x with h = xgx, gh = hg: ρ(h) with a > 0, b > 3 or a > 3, b > 0",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CriterionId::TypeDSearch => "type-D",
            CriterionId::Dihedral => "dihedral",
            CriterionId::Extension => "extension",
            CriterionId::Subgroup => "subgroup",
            CriterionId::InvolutionA4 => "A4",
            CriterionId::ScalarOne => "scalar-one",
            CriterionId::Real => "real",
            CriterionId::QuasiReal => "quasi-real",
            CriterionId::AffineQuasiReal => "affine",
            CriterionId::InvolutionCount => "eigenvalue-count",
        }
    }
}

/// Parameters of a finding, sufficient to recompute it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "kebab-case")]
pub enum Evidence {
    Witness {
        witness: TypeDWitness,
    },
    Dihedral {
        involution: String,
        class: String,
        n: u64,
        s_value: Option<String>,
        witness: Option<TypeDWitness>,
    },
    Extension {
        m: u64,
        #[serde(with = "crate::wire::dec")]
        kernel_order: u128,
        qualifying: Vec<u64>,
        quotient: String,
    },
    Subgroup {
        subgroup: String,
        class: String,
        outcome: String,
    },
    A4 {
        involution: String,
        k1: String,
        k2: String,
        s_value: Option<String>,
        pair: Option<(String, String)>,
        #[serde(with = "crate::wire::opt_dec")]
        subgroup_order: Option<u128>,
    },
    Scalar {
        characters: Vec<usize>,
    },
    Reality {
        order: u64,
        reality: Reality,
        j: Option<u64>,
        j_squared_power_differs: bool,
    },
    Affine {
        p: u64,
        dim: usize,
        d: u64,
        j: u64,
        matrix: Vec<Vec<u64>>,
        sigma: String,
        basis: Vec<String>,
        #[serde(with = "crate::wire::dec")]
        subgroup_order: u128,
    },
    Eigen {
        character: usize,
        x: String,
        h: String,
        h_class: String,
        a: u64,
        b: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub criterion: CriterionId,
    pub citation: String,
    #[serde(flatten)]
    pub evidence: Evidence,
}

impl Reason {
    pub fn new(criterion: CriterionId, evidence: Evidence) -> Self {
        Reason { criterion, citation: criterion.citation().to_string(), evidence }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarCondition {
    MinusOne,
    MinusOneOrThirdRoot,
    NotOne,
}

impl ScalarCondition {
    pub fn holds(&self, s: &Cyclotomic) -> bool {
        match self {
            ScalarCondition::MinusOne => s.as_i64() == Some(-1),
            ScalarCondition::MinusOneOrThirdRoot => {
                s.as_i64() == Some(-1) || matches!(s.root_of_unity_order(), Some(1) | Some(3))
            }
            ScalarCondition::NotOne => !s.is_one(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeCondition {
    Any,
    One,
    AtLeastTwo,
}

impl DegreeCondition {
    pub fn applies(&self, degree: u64) -> bool {
        match self {
            DegreeCondition::Any => true,
            DegreeCondition::One => degree == 1,
            DegreeCondition::AtLeastTwo => degree >= 2,
        }
    }
}

/// A necessary condition on `ρ(g) = χ(g)/χ(1)` for `dim B(O, ρ) < ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReprConstraint {
    pub scalar: ScalarCondition,
    pub degree: DegreeCondition,
    pub source: CriterionId,
}

impl ReprConstraint {
    pub fn allows(&self, degree: u64, scalar: &Cyclotomic) -> bool {
        !self.degree.applies(degree) || self.scalar.holds(scalar)
    }
}

impl std::fmt::Display for ReprConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.scalar {
            ScalarCondition::MinusOne => "ρ(g) = -1",
            ScalarCondition::MinusOneOrThirdRoot => "ρ(g) ∈ {-1} ∪ R3",
            ScalarCondition::NotOne => "ρ(g) ≠ 1",
        };
        match self.degree {
            DegreeCondition::Any => write!(f, "{s}"),
            DegreeCondition::One => write!(f, "deg 1: {s}"),
            DegreeCondition::AtLeastTwo => write!(f, "deg > 1: {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Effect {
    TypeD,
    AllInfinite,
    Constraints { constraints: Vec<ReprConstraint> },
}

/// The result of one criterion on one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub reason: Reason,
    pub effect: Effect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    CollapsesTypeD,
    AllReprsInfinite,
    SurvivorsConstrained { constraints: Vec<ReprConstraint> },
    Open,
}

impl Outcome {
    /// Higher dominates.
    pub fn rank(&self) -> u8 {
        match self {
            Outcome::CollapsesTypeD => 3,
            Outcome::AllReprsInfinite => 2,
            Outcome::SurvivorsConstrained { .. } => 1,
            Outcome::Open => 0,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        self.rank() >= 2
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::CollapsesTypeD => "CollapsesTypeD",
            Outcome::AllReprsInfinite => "AllReprsInfinite",
            Outcome::SurvivorsConstrained { .. } => "SurvivorsConstrained",
            Outcome::Open => "Open",
        }
    }
}

/// Status of one irreducible character of the centralizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReprVerdict {
    pub character: usize,
    pub degree: u64,
    pub scalar: Cyclotomic,
    pub killed_by: Option<CriterionId>,
}

/// A criterion that ran without settling the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub criterion: CriterionId,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: String,
    pub order: u64,
    pub size: String,
    pub centralizer_order: String,
    pub reality: Reality,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub reasons: Vec<Reason>,
    pub representations: Option<Vec<ReprVerdict>>,
    pub attempted: Vec<Attempt>,
    pub seed: u64,
    pub budgets: Budgets,
}

impl Verdict {
    /// The criterion that settled the class, or the strongest constraint source.
    pub fn decided_by(&self) -> Option<CriterionId> {
        match &self.outcome {
            Outcome::CollapsesTypeD | Outcome::AllReprsInfinite => self.reasons.last().map(|r| r.criterion),
            Outcome::SurvivorsConstrained { constraints } => constraints.iter().map(|c| c.source).next_back(),
            Outcome::Open => None,
        }
    }
}
