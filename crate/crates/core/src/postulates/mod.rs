//! The postulate catalog, single-instance evaluation and sweeps.
//!
//! Postulates are evaluated at the model level: formulas are bound as world
//! sets, beliefs are compared through belief models, and `Bel(x) ⊆ Bel(y)`
//! becomes `[[y]] ⊆ [[x]]`. A binding whose guard fails is vacuously
//! satisfied.

mod catalog;
mod eval;
mod sweep;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::change::{ChangeError, ChangeKind, ChangeOperator};
use crate::logic::{LogicError, World, WorldSet};
use crate::logic::Formula;
use crate::states::{EpistemicState, StateError};

pub use catalog::{PostulateId, UnknownPostulate, Var};
pub use sweep::{sweep, sweep_with, PostulateReport, Strategy, MAX_EXHAUSTIVE_INSTANCES};

pub(crate) use eval::{evaluate, ModelBinding, Outcome, Posteriors};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PostulateError {
    #[error("{postulate} binds {expected:?}, got {provided:?}")]
    ArityMismatch {
        postulate: PostulateId,
        expected: Vec<Var>,
        provided: Vec<Var>,
    },
    #[error("{postulate} constrains {expected} operators, got a {found} operator")]
    WrongOperatorKind {
        postulate: PostulateId,
        expected: ChangeKind,
        found: ChangeKind,
    },
    #[error("world index {index} out of range for {worlds} worlds")]
    WorldOutOfRange { index: u32, worlds: usize },
    #[error("exhaustive sweep too large: {reason}")]
    TooLarge { reason: String },
    #[error(transparent)]
    Operator(#[from] ChangeError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Values for the variables of one postulate instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub state: EpistemicState,
    pub alpha: Option<Formula>,
    pub beta: Option<Formula>,
    pub gamma: Option<Formula>,
    pub mu: Option<Formula>,
    pub w1: Option<World>,
    pub w2: Option<World>,
}

impl Binding {
    pub fn new(state: EpistemicState) -> Self {
        Binding {
            state,
            alpha: None,
            beta: None,
            gamma: None,
            mu: None,
            w1: None,
            w2: None,
        }
    }

    pub fn alpha(mut self, f: Formula) -> Self {
        self.alpha = Some(f);
        self
    }

    pub fn beta(mut self, f: Formula) -> Self {
        self.beta = Some(f);
        self
    }

    pub fn gamma(mut self, f: Formula) -> Self {
        self.gamma = Some(f);
        self
    }

    pub fn mu(mut self, f: Formula) -> Self {
        self.mu = Some(f);
        self
    }

    pub fn w1(mut self, w: World) -> Self {
        self.w1 = Some(w);
        self
    }

    pub fn w2(mut self, w: World) -> Self {
        self.w2 = Some(w);
        self
    }

    /// The variables this binding supplies, in canonical order.
    pub fn provided(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        for (var, set) in [
            (Var::Alpha, self.alpha.is_some()),
            (Var::Beta, self.beta.is_some()),
            (Var::Gamma, self.gamma.is_some()),
            (Var::Mu, self.mu.is_some()),
            (Var::W1, self.w1.is_some()),
            (Var::W2, self.w2.is_some()),
        ] {
            if set {
                vars.push(var);
            }
        }
        vars
    }

    fn formulas(&self) -> impl Iterator<Item = (Var, &Formula)> {
        [
            (Var::Alpha, &self.alpha),
            (Var::Beta, &self.beta),
            (Var::Gamma, &self.gamma),
            (Var::Mu, &self.mu),
        ]
        .into_iter()
        .filter_map(|(v, f)| f.as_ref().map(|f| (v, f)))
    }

    fn worlds(&self) -> impl Iterator<Item = (Var, World)> {
        [(Var::W1, self.w1), (Var::W2, self.w2)]
            .into_iter()
            .filter_map(|(v, w)| w.map(|w| (v, w)))
    }

    fn to_models(&self) -> Result<ModelBinding, PostulateError> {
        let sig = self.state.signature();
        let mut m = ModelBinding::default();
        for (var, f) in self.formulas() {
            let models = f.models(sig)?;
            *m.formula_mut(var) = Some(models);
        }
        for (var, w) in self.worlds() {
            if w.index() as usize >= sig.world_count() {
                return Err(PostulateError::WorldOutOfRange {
                    index: w.index(),
                    worlds: sig.world_count(),
                });
            }
            match var {
                Var::W1 => m.w1 = Some(w),
                _ => m.w2 = Some(w),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.state.signature().len();
        write!(f, "state {}", self.state.compact())?;
        for (var, formula) in self.formulas() {
            write!(f, ", {var} = {formula}")?;
        }
        for (var, w) in self.worlds() {
            write!(f, ", {var} = {}", w.to_bitstring(n))?;
        }
        Ok(())
    }
}

impl Serialize for Binding {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.state.signature().len();
        let mut st = serializer.serialize_struct("Binding", 7)?;
        st.serialize_field("state", &self.state.to_text())?;
        let text = |f: &Option<Formula>| f.as_ref().map(|f| f.to_string());
        let bits = |w: &Option<World>| w.map(|w| w.to_bitstring(n));
        st.serialize_field("alpha", &text(&self.alpha))?;
        st.serialize_field("beta", &text(&self.beta))?;
        st.serialize_field("gamma", &text(&self.gamma))?;
        st.serialize_field("mu", &text(&self.mu))?;
        st.serialize_field("w1", &bits(&self.w1))?;
        st.serialize_field("w2", &bits(&self.w2))?;
        st.end()
    }
}

/// Result of checking one or many instances. A witness is present exactly
/// when the postulate does not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Set by single-instance checks whose guard failed.
    pub vacuous: bool,
    pub witness: Option<Binding>,
}

impl Verdict {
    pub(crate) fn holds() -> Self {
        Verdict {
            holds: true,
            vacuous: false,
            witness: None,
        }
    }
}

pub(crate) fn check_kind(p: PostulateId, op: &dyn ChangeOperator) -> Result<(), PostulateError> {
    match p.kind() {
        Some(expected) if expected != op.kind() => Err(PostulateError::WrongOperatorKind {
            postulate: p,
            expected,
            found: op.kind(),
        }),
        _ => Ok(()),
    }
}

/// Evaluates one instance of `p` for `op`.
pub fn check_instance(
    p: PostulateId,
    op: &dyn ChangeOperator,
    binding: &Binding,
) -> Result<Verdict, PostulateError> {
    let provided = binding.provided();
    if provided != p.arity() {
        return Err(PostulateError::ArityMismatch {
            postulate: p,
            expected: p.arity().to_vec(),
            provided,
        });
    }
    check_kind(p, op)?;
    let models = binding.to_models()?;
    let ctx = Posteriors::new(op, &binding.state);
    Ok(match evaluate(p, &ctx, &models)? {
        Outcome::Holds => Verdict::holds(),
        Outcome::Vacuous => Verdict {
            vacuous: true,
            ..Verdict::holds()
        },
        Outcome::Fails => Verdict {
            holds: false,
            vacuous: false,
            witness: Some(binding.clone()),
        },
    })
}

/// Model sets of a binding back as a formula-level [`Binding`].
pub(crate) fn binding_from_models(state: &EpistemicState, m: &ModelBinding) -> Binding {
    let sig = state.signature();
    let formula = |ws: &Option<WorldSet>| {
        ws.as_ref()
            .map(|ws| crate::logic::formula_from_worldset(ws, sig))
    };
    Binding {
        state: state.clone(),
        alpha: formula(&m.alpha),
        beta: formula(&m.beta),
        gamma: formula(&m.gamma),
        mu: formula(&m.mu),
        w1: m.w1,
        w2: m.w2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::change::{NaturalContraction, NaturalRevision};
    use crate::logic::parse_formula;
    use crate::states::fixtures::{sig_ab, worked_psi};

    fn f(text: &str) -> Formula {
        parse_formula(text, &sig_ab()).unwrap()
    }

    fn bits(text: &str) -> World {
        World::from_bitstring(text, 2).unwrap()
    }

    #[test]
    fn c9prime_fails_on_worked_trace() {
        let b = Binding::new(worked_psi()).alpha(f("a")).beta(f("a | b"));
        let v = check_instance(PostulateId::C9Prime, &NaturalContraction, &b).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(b.clone()));
        let v = check_instance(PostulateId::C9, &NaturalContraction, &b).unwrap();
        assert!(v.holds && !v.vacuous);
    }

    #[test]
    fn c5_on_commuted_conjunction() {
        let b = Binding::new(worked_psi()).alpha(f("a & b")).beta(f("b & a"));
        assert!(check_instance(PostulateId::C5, &NaturalContraction, &b).unwrap().holds);
    }

    #[test]
    fn cr9_on_worked_pair() {
        let b = Binding::new(worked_psi())
            .alpha(f("a"))
            .w1(bits("01"))
            .w2(bits("00"));
        let v = check_instance(PostulateId::CR9, &NaturalContraction, &b).unwrap();
        assert!(v.holds && !v.vacuous);
    }

    #[test]
    fn failed_guard_is_vacuous() {
        let b = Binding::new(worked_psi()).alpha(f("a")).beta(f("b"));
        let v = check_instance(PostulateId::C8, &NaturalContraction, &b).unwrap();
        assert!(v.holds && v.vacuous);
    }

    #[test]
    fn arity_and_kind_errors() {
        let b = Binding::new(worked_psi()).alpha(f("a"));
        assert!(matches!(
            check_instance(PostulateId::C8, &NaturalContraction, &b),
            Err(PostulateError::ArityMismatch { .. })
        ));
        let b = Binding::new(worked_psi()).alpha(f("a")).mu(f("b"));
        assert!(matches!(
            check_instance(PostulateId::DP1, &NaturalContraction, &b),
            Err(PostulateError::WrongOperatorKind { .. })
        ));
        assert!(check_instance(PostulateId::DP1, &NaturalRevision, &b).unwrap().holds);
        let b = Binding::new(worked_psi()).alpha(Formula::atom("c"));
        assert!(matches!(
            check_instance(PostulateId::C1, &NaturalContraction, &b),
            Err(PostulateError::Logic(_))
        ));
        let b = Binding::new(worked_psi())
            .alpha(f("a"))
            .w1(World::new(4))
            .w2(World::new(0));
        assert!(matches!(
            check_instance(PostulateId::CR8, &NaturalContraction, &b),
            Err(PostulateError::WorldOutOfRange { .. })
        ));
    }

    #[test]
    fn revision_by_contradiction_is_vacuous() {
        let b = Binding::new(worked_psi()).alpha(f("bot")).mu(f("a"));
        let v = check_instance(PostulateId::DP3, &NaturalRevision, &b).unwrap();
        assert!(v.holds && v.vacuous);
    }

    #[test]
    fn witness_serializes_as_state_fragment() {
        let b = Binding::new(worked_psi()).alpha(f("a")).beta(f("a | b"));
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["state"], "sig: a b\n0: 11\n1: 10 01 00\n");
        assert_eq!(json["beta"], "a | b");
        assert!(json["w1"].is_null());
    }
}
