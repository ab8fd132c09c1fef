//! Contraction and revision of epistemic states, conditional and
//! contractional acceptance, and α-equivalence.
//!
//! Both operators move as little as possible: contraction by α lowers only
//! the most plausible counter-models of α into rank 0, revision by α lifts
//! only the most plausible models of α into a new exclusive bottom layer.
//! Every other pair of worlds keeps its relative order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{entails, Formula, LogicError, Signature, WorldSet};
use crate::states::{BeliefSet, EpistemicState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChangeError {
    #[error("cannot revise by an inconsistent formula")]
    InconsistentInput,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Contraction,
    Revision,
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChangeKind::Contraction => "contraction",
            ChangeKind::Revision => "revision",
        })
    }
}

/// A belief change operator `E × L → E`.
///
/// Operators act on the model class of the input formula, so equivalent
/// formulas always yield the same posterior.
pub trait ChangeOperator: Sync {
    fn kind(&self) -> ChangeKind;

    fn describe(&self) -> String;

    fn apply(&self, state: &EpistemicState, input: &WorldSet) -> Result<EpistemicState, ChangeError>;

    fn apply_formula(&self, state: &EpistemicState, input: &Formula) -> Result<EpistemicState, ChangeError> {
        self.apply(state, &input.models(state.signature())?)
    }
}

/// Minimal-movement contraction.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaturalContraction;

/// Minimal-movement revision.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaturalRevision;

impl ChangeOperator for NaturalContraction {
    fn kind(&self) -> ChangeKind {
        ChangeKind::Contraction
    }

    fn describe(&self) -> String {
        "natural contraction".into()
    }

    fn apply(&self, state: &EpistemicState, input: &WorldSet) -> Result<EpistemicState, ChangeError> {
        Ok(contract_models(state, input))
    }
}

impl ChangeOperator for NaturalRevision {
    fn kind(&self) -> ChangeKind {
        ChangeKind::Revision
    }

    fn describe(&self) -> String {
        "natural revision".into()
    }

    fn apply(&self, state: &EpistemicState, input: &WorldSet) -> Result<EpistemicState, ChangeError> {
        revise_models(state, input)
    }
}

/// Contraction by the formula with models `alpha`.
pub fn contract_models(state: &EpistemicState, alpha: &WorldSet) -> EpistemicState {
    let lowered = state.min_worlds(&alpha.complement());
    if lowered.is_empty() || lowered.is_subset(state.belief_models()) {
        return state.clone();
    }
    let scores: Vec<u64> = state
        .signature()
        .worlds()
        .map(|w| {
            if lowered.contains(w) {
                0
            } else {
                state.rank(w) as u64
            }
        })
        .collect();
    EpistemicState::from_scores(state.signature_arc().clone(), &scores)
}

/// Revision by the formula with models `alpha`.
pub fn revise_models(state: &EpistemicState, alpha: &WorldSet) -> Result<EpistemicState, ChangeError> {
    let raised = state.min_worlds(alpha);
    if raised.is_empty() {
        return Err(ChangeError::InconsistentInput);
    }
    if raised == *state.belief_models() {
        return Ok(state.clone());
    }
    let scores: Vec<u64> = state
        .signature()
        .worlds()
        .map(|w| {
            if raised.contains(w) {
                0
            } else {
                state.rank(w) as u64 + 1
            }
        })
        .collect();
    Ok(EpistemicState::from_scores(state.signature_arc().clone(), &scores))
}

/// `Ψ ÷ α`.
pub fn natural_contraction(state: &EpistemicState, alpha: &Formula) -> Result<EpistemicState, ChangeError> {
    NaturalContraction.apply_formula(state, alpha)
}

/// `Ψ ∗ α`; fails with [`ChangeError::InconsistentInput`] when α is unsatisfiable.
pub fn natural_revision(state: &EpistemicState, alpha: &Formula) -> Result<EpistemicState, ChangeError> {
    NaturalRevision.apply_formula(state, alpha)
}

/// A Ramsey-test conditional `(β | α)`: after revising by α, believe β.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditional {
    pub antecedent: Formula,
    pub consequent: Formula,
}

/// A contractional `(β ⇐ α)`: believe β even in the absence of α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contractional {
    pub removed: Formula,
    pub kept: Formula,
}

/// `(β | α)` is accepted when every model of `α ∧ ¬β` is strictly less
/// plausible than some model of `α ∧ β`.
pub fn conditional_accepted(state: &EpistemicState, alpha: &WorldSet, beta: &WorldSet) -> bool {
    let falsifying = alpha.difference(beta);
    let verifying = alpha.intersection(beta);
    match verifying.iter().map(|w| state.rank(w)).min() {
        None => falsifying.is_empty(),
        Some(best) => falsifying.iter().all(|w| best < state.rank(w)),
    }
}

/// `(β ⇐ α)` is accepted when the most plausible worlds all satisfy β and
/// every model of `¬α ∧ ¬β` is strictly less plausible than some model of
/// `¬α ∧ β`.
pub fn contractional_accepted(state: &EpistemicState, removed: &WorldSet, kept: &WorldSet) -> bool {
    state.belief_models().is_subset(kept) && conditional_accepted(state, &removed.complement(), kept)
}

pub fn accepts_conditional(state: &EpistemicState, c: &Conditional) -> Result<bool, LogicError> {
    let sig = state.signature();
    Ok(conditional_accepted(
        state,
        &c.antecedent.models(sig)?,
        &c.consequent.models(sig)?,
    ))
}

pub fn accepts_contractional(state: &EpistemicState, c: &Contractional) -> Result<bool, LogicError> {
    let sig = state.signature();
    Ok(contractional_accepted(
        state,
        &c.removed.models(sig)?,
        &c.kept.models(sig)?,
    ))
}

/// `W1 =_α W2`: both sets contain the same models of α.
pub fn alpha_equivalent(w1: &WorldSet, w2: &WorldSet, alpha: &WorldSet) -> bool {
    w1.intersection(alpha) == w2.intersection(alpha)
}

pub fn alpha_equiv_worldsets(
    w1: &WorldSet,
    w2: &WorldSet,
    alpha: &Formula,
    sig: &Signature,
) -> Result<bool, LogicError> {
    Ok(alpha_equivalent(w1, w2, &alpha.models(sig)?))
}

/// α-equivalence of two formula sets as equality of `Cn(X ∪ {α})` and
/// `Cn(Y ∪ {α})`, decided by mutual entailment of the generating sets.
pub fn alpha_equiv_via_cn(
    x: &[Formula],
    y: &[Formula],
    alpha: &Formula,
    sig: &Signature,
) -> Result<bool, LogicError> {
    let with_alpha = |set: &[Formula]| {
        let mut v = set.to_vec();
        v.push(alpha.clone());
        v
    };
    let (xa, ya) = (with_alpha(x), with_alpha(y));
    for f in &ya {
        if !entails(&xa, f, sig)? {
            return Ok(false);
        }
    }
    for f in &xa {
        if !entails(&ya, f, sig)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Bel(x) ⊆ Bel(y)`, which holds exactly when `y` has no more models than `x`.
pub fn belief_subset(x: &BeliefSet, y: &BeliefSet) -> bool {
    y.model_set.is_subset(&x.model_set)
}

/// [`belief_subset`] on the belief sets of two states.
pub fn beliefs_included(x: &EpistemicState, y: &EpistemicState) -> bool {
    y.belief_models().is_subset(x.belief_models())
}
