//! The graded possession metric: degree = T(c) - R(c), where T is the
//! total information needed to specify a concept and R is the selection
//! information a given interface demands from the environment.
//!
//! Log-factorials are exact summations, not Stirling; the golden numbers
//! must not depend on approximation error.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Bits,
    Nats,
}

/// A non-negative extended-real information quantity with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoQuantity {
    pub value: f64,
    pub unit: Unit,
}

impl InfoQuantity {
    pub fn bits(value: f64) -> Self {
        InfoQuantity { value, unit: Unit::Bits }
    }

    pub fn nats(value: f64) -> Self {
        InfoQuantity { value, unit: Unit::Nats }
    }

    pub fn infinite(unit: Unit) -> Self {
        InfoQuantity { value: f64::INFINITY, unit }
    }

    /// bits = nats / ln 2.
    pub fn to_unit(&self, unit: Unit) -> InfoQuantity {
        let value = match (self.unit, unit) {
            (Unit::Bits, Unit::Bits) | (Unit::Nats, Unit::Nats) => self.value,
            (Unit::Nats, Unit::Bits) => self.value / std::f64::consts::LN_2,
            (Unit::Bits, Unit::Nats) => self.value * std::f64::consts::LN_2,
        };
        InfoQuantity { value, unit }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PossessionError {
    #[error("unit mismatch: {0:?} vs {1:?} (convert before subtracting)")]
    UnitMismatch(Unit, Unit),
    #[error("no semantically equivalent term found within budget {budget}; minimal size is only lower-bounded")]
    LowerBoundOnly { budget: usize },
    #[error(transparent)]
    Space(#[from] crate::space::SpaceError),
}

/// Exact log(n!) by summation in the requested unit's log base.
pub fn log_factorial(n: u64, unit: Unit) -> InfoQuantity {
    let mut total = 0.0f64;
    for k in 2..=n {
        total += match unit {
            Unit::Bits => (k as f64).log2(),
            Unit::Nats => (k as f64).ln(),
        };
    }
    InfoQuantity { value: total, unit }
}

/// Stirling's approximation with the 1/(12n) correction, for cross-checks
/// only.
pub fn stirling_log_factorial(n: u64, unit: Unit) -> InfoQuantity {
    if n <= 1 {
        return InfoQuantity { value: 0.0, unit };
    }
    let x = n as f64;
    let nats = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x);
    InfoQuantity::nats(nats).to_unit(unit)
}

/// Information content of a text under a per-character rate, in bits.
pub fn text_info(char_count: u64, bits_per_char: f64) -> InfoQuantity {
    InfoQuantity::bits(char_count as f64 * bits_per_char)
}

/// How an interface lets its user select a target object, and therefore
/// how much information that selection demands.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SelectionModel {
    /// Every character typed in: the full text information.
    Keyboard { char_count: u64, bits_per_char: f64 },
    /// A single affordance; `action_count` alternatives to decide among.
    OneButton { action_count: u64 },
    /// n unlabeled buttons pressed once each in the right order: log(n!).
    OrderedButtons { n: u64 },
    /// A hypothesis space that may not contain the target at all.
    RestrictedSpace { target_expressible: bool },
}

/// R(c) for a selection model, in the requested unit.
pub fn required_info(model: &SelectionModel, unit: Unit) -> InfoQuantity {
    match model {
        SelectionModel::Keyboard { char_count, bits_per_char } => {
            text_info(*char_count, *bits_per_char).to_unit(unit)
        }
        SelectionModel::OneButton { action_count } => {
            let bits = if *action_count <= 1 { 0.0 } else { (*action_count as f64).log2() };
            InfoQuantity::bits(bits).to_unit(unit)
        }
        SelectionModel::OrderedButtons { n } => log_factorial(*n, unit),
        SelectionModel::RestrictedSpace { target_expressible } => {
            if *target_expressible {
                InfoQuantity { value: 0.0, unit }
            } else {
                InfoQuantity::infinite(unit)
            }
        }
    }
}

/// One concept's possession arithmetic under one selection model.
#[derive(Debug, Clone, Serialize)]
pub struct PossessionReport {
    pub concept_id: String,
    pub total: InfoQuantity,
    pub required: InfoQuantity,
    /// T - R in the shared unit; -inf when R is infinite (anti-possession).
    pub degree: f64,
    /// (T - R) / T, defined when T > 0 and R <= T.
    pub fraction: Option<f64>,
}

/// degree = T - R. T and R must share a unit; convert first.
pub fn degree_of_possession(
    concept_id: impl Into<String>,
    total: InfoQuantity,
    required: InfoQuantity,
) -> Result<PossessionReport, PossessionError> {
    if total.unit != required.unit {
        return Err(PossessionError::UnitMismatch(total.unit, required.unit));
    }
    let degree = if required.value.is_infinite() {
        f64::NEG_INFINITY
    } else {
        total.value - required.value
    };
    let fraction = if total.value > 0.0 && required.value <= total.value {
        Some((total.value - required.value) / total.value)
    } else {
        None
    };
    Ok(PossessionReport {
        concept_id: concept_id.into(),
        total,
        required,
        degree,
        fraction,
    })
}

/// T(c) for a term: minimal description length in a declared reference
/// basis, found by exhaustive search for the smallest semantically
/// equivalent term up to `budget`.
pub fn term_total_info(
    t: &crate::term::Term,
    reference: &crate::term::Basis,
    budget: usize,
) -> Result<InfoQuantity, PossessionError> {
    let space = crate::space::BudgetedSpace::new(reference.clone(), budget)?;
    let target = space.truth_table(t)?;
    let witness = space
        .contains_semantics(target)?
        .ok_or(PossessionError::LowerBoundOnly { budget })?;
    let bits_per_symbol = (reference.symbol_count().max(2) as f64).log2();
    Ok(InfoQuantity::bits(witness.size() as f64 * bits_per_symbol))
}
