//! Bayesian belief fixation over a budgeted space: size-based prior,
//! noise-parameterized likelihood, posterior, and the selection
//! information R(c) = -log2 p that bridges inference to possession.
//!
//! Probabilities are carried in log space; datasets long enough to
//! underflow a linear-space product are routine.

use std::rc::Rc;

use thiserror::Error;

use crate::space::{evaluate, BudgetedSpace, FeatureObject, SpaceError, TruthTable};
use crate::term::Term;

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("epsilon must lie in [0, 0.5), found {0}")]
    BadEpsilon(f64),
    #[error("term {0:?} is not in the space")]
    OutOfSpace(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Size-based description-length prior: bits(t) = size(t) * log2(|symbols|),
/// prior(t) proportional to 2^(-bits(t)), normalized over the space.
#[derive(Debug, Clone, Copy, Default)]
pub struct PriorModel;

impl PriorModel {
    /// Unnormalized log2 weight.
    fn log_weight(&self, t: &Term, space: &BudgetedSpace) -> f64 {
        let bits_per_symbol = (space.basis.symbol_count().max(2) as f64).log2();
        -(t.size() as f64) * bits_per_symbol
    }

    /// Normalized prior over the space, aligned with `space.terms()`.
    pub fn distribution(&self, space: &BudgetedSpace) -> Vec<f64> {
        let logs: Vec<f64> = space.terms().iter().map(|t| self.log_weight(t, space)).collect();
        normalize_log2(&logs).expect("size-based weights are always finite")
    }
}

/// Per-example noise: P(label | t, obj) = 1 - eps on agreement, eps on
/// disagreement. eps = 0 is hard filtering.
#[derive(Debug, Clone, Copy)]
pub struct LikelihoodModel {
    epsilon: f64,
}

impl LikelihoodModel {
    pub fn new(epsilon: f64) -> Result<Self, InferenceError> {
        if !(0.0..0.5).contains(&epsilon) {
            return Err(InferenceError::BadEpsilon(epsilon));
        }
        Ok(LikelihoodModel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// log2 P(label | t, obj); -inf under hard filtering on disagreement.
    pub fn log_likelihood(
        &self,
        t: &Term,
        obj: &FeatureObject,
        label: bool,
        space: &BudgetedSpace,
    ) -> Result<f64, SpaceError> {
        let predicted = evaluate(t, obj, &space.basis)?;
        let p = if predicted == label { 1.0 - self.epsilon } else { self.epsilon };
        Ok(p.log2())
    }
}

/// Posterior probabilities aligned with the space's enumeration order.
/// When every hypothesis has zero likelihood the table is all zeros and
/// flagged degenerate rather than renormalized.
#[derive(Debug, Clone)]
pub struct PosteriorTable {
    pub entries: Vec<(Rc<Term>, f64)>,
    pub dataset_size: usize,
    pub degenerate: bool,
}

impl PosteriorTable {
    pub fn probability_of(&self, c: &Term) -> Option<f64> {
        self.entries.iter().find(|(t, _)| **t == *c).map(|(_, p)| *p)
    }
}

/// entry(t) proportional to prior(t) * product over examples of
/// P(label | t, obj), normalized.
pub fn posterior(
    space: &BudgetedSpace,
    prior: &PriorModel,
    like: &LikelihoodModel,
    data: &[(FeatureObject, bool)],
) -> Result<PosteriorTable, InferenceError> {
    let mut logs = Vec::with_capacity(space.len());
    for t in space.terms() {
        let mut log_p = prior.log_weight(t, space);
        for (obj, label) in data {
            log_p += like.log_likelihood(t, obj, *label, space)?;
        }
        logs.push(log_p);
    }
    match normalize_log2(&logs) {
        Some(probs) => Ok(PosteriorTable {
            entries: space.terms().iter().cloned().zip(probs).collect(),
            dataset_size: data.len(),
            degenerate: false,
        }),
        None => Ok(PosteriorTable {
            entries: space.terms().iter().cloned().map(|t| (t, 0.0)).collect(),
            dataset_size: data.len(),
            degenerate: true,
        }),
    }
}

/// Whether R(c) reads one syntactic entry or a whole semantic class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Syntactic,
    Semantic,
}

/// R = -log2 p, where p is c's posterior probability (syntactic) or the
/// total probability of c's semantic class. p = 0 gives +inf.
pub fn selection_info(
    table: &PosteriorTable,
    space: &BudgetedSpace,
    c: &Term,
    granularity: Granularity,
) -> Result<f64, InferenceError> {
    if table.probability_of(c).is_none() {
        return Err(InferenceError::OutOfSpace(c.render()));
    }
    let p = match granularity {
        Granularity::Syntactic => table.probability_of(c).unwrap(),
        Granularity::Semantic => {
            let target = space.truth_table(c)?;
            class_mass(table, space, target)?
        }
    };
    Ok(bits_from_probability(p))
}

/// Total posterior mass of one truth-table class.
pub fn class_mass(
    table: &PosteriorTable,
    space: &BudgetedSpace,
    target: TruthTable,
) -> Result<f64, InferenceError> {
    let atoms = space.atoms();
    let mut mass = 0.0;
    for (t, p) in &table.entries {
        if crate::space::truth_table_over(t, &atoms, &space.basis)? == target {
            mass += p;
        }
    }
    Ok(mass)
}

pub fn bits_from_probability(p: f64) -> f64 {
    if p <= 0.0 {
        f64::INFINITY
    } else {
        // + 0.0 normalizes the -0.0 that -log2(1.0) produces.
        -p.log2() + 0.0
    }
}

/// R(target) after each prefix of the data stream, starting from the
/// prior at zero examples seen.
pub fn fixation_curve(
    space: &BudgetedSpace,
    prior: &PriorModel,
    like: &LikelihoodModel,
    data: &[(FeatureObject, bool)],
    target: &Term,
    granularity: Granularity,
) -> Result<Vec<(usize, f64)>, InferenceError> {
    let mut curve = Vec::with_capacity(data.len() + 1);
    for seen in 0..=data.len() {
        let table = posterior(space, prior, like, &data[..seen])?;
        let r = if table.degenerate {
            f64::INFINITY
        } else {
            selection_info(&table, space, target, granularity)?
        };
        curve.push((seen, r));
    }
    Ok(curve)
}

/// log-sum-exp normalization in base 2; `None` when all weights are -inf.
fn normalize_log2(logs: &[f64]) -> Option<Vec<f64>> {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let shifted: Vec<f64> = logs.iter().map(|&l| (l - max).exp2()).collect();
    let total: f64 = shifted.iter().sum();
    Some(shifted.into_iter().map(|w| w / total).collect())
}
