use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::change::ChangeKind;

/// A variable a postulate quantifies over, besides the prior state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Alpha,
    Beta,
    Gamma,
    Mu,
    W1,
    W2,
}

impl Var {
    pub fn is_formula(self) -> bool {
        !matches!(self, Var::W1 | Var::W2)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Gamma => "gamma",
            Var::Mu => "mu",
            Var::W1 => "w1",
            Var::W2 => "w2",
        })
    }
}

macro_rules! postulates {
    ($($id:ident => $name:literal),* $(,)?) => {
        /// Every postulate the checker knows.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum PostulateId {
            $($id,)*
        }

        impl PostulateId {
            pub const ALL: &'static [PostulateId] = &[$(PostulateId::$id,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(PostulateId::$id => $name,)*
                }
            }
        }
    };
}

postulates! {
    FA1 => "FA1", FA2 => "FA2",
    C1 => "C1", C2 => "C2", C3 => "C3", C4 => "C4", C5 => "C5", C6 => "C6", C7 => "C7",
    C8 => "C8", C9 => "C9", C9Prime => "C9PRIME", C10 => "C10", C11 => "C11",
    C8Cond => "C8COND", C9Cond => "C9COND", C10Cond => "C10COND", C11Cond => "C11COND",
    IC8 => "IC8", IC9 => "IC9", IC10 => "IC10", IC11 => "IC11",
    DP1 => "DP1", DP2 => "DP2", DP3 => "DP3", DP4 => "DP4",
    DP1Cond => "DP1COND", DP2Cond => "DP2COND", DP3Cond => "DP3COND", DP4Cond => "DP4COND",
    CR8 => "CR8", CR9 => "CR9", CR10 => "CR10", CR11 => "CR11",
    RR8 => "RR8", RR9 => "RR9", RR10 => "RR10", RR11 => "RR11",
}

impl PostulateId {
    /// The variables bound by the postulate, in quantification order.
    pub fn arity(self) -> &'static [Var] {
        use PostulateId::*;
        use Var::*;
        match self {
            FA1 | FA2 | CR8 | CR9 | CR10 | CR11 | RR8 | RR9 | RR10 | RR11 => &[Alpha, W1, W2],
            C1 | C2 | C3 | C4 => &[Alpha],
            C5 | C6 | C7 | C8 | C9 | C9Prime => &[Alpha, Beta],
            C10 | C11 | C8Cond | C9Cond | C10Cond | C11Cond | IC8 | IC9 | IC10 | IC11 => {
                &[Alpha, Beta, Gamma]
            }
            DP1 | DP2 | DP3 | DP4 | DP3Cond | DP4Cond => &[Alpha, Mu],
            DP1Cond | DP2Cond => &[Alpha, Beta, Mu],
        }
    }

    pub fn formula_arity(self) -> usize {
        self.arity().iter().filter(|v| v.is_formula()).count()
    }

    /// The operator kind the postulate constrains; `None` for faithfulness,
    /// which applies to both.
    pub fn kind(self) -> Option<ChangeKind> {
        use PostulateId::*;
        match self {
            FA1 | FA2 => None,
            DP1 | DP2 | DP3 | DP4 | DP1Cond | DP2Cond | DP3Cond | DP4Cond | RR8 | RR9 | RR10
            | RR11 => Some(ChangeKind::Revision),
            _ => Some(ChangeKind::Contraction),
        }
    }

    /// One-line statement of the postulate in model-level terms.
    pub fn statement(self) -> &'static str {
        use PostulateId::*;
        match self {
            FA1 => "w1, w2 in [[Ψ∘α]] ⇒ w1 ≃ w2 in Ψ∘α",
            FA2 => "w1 in [[Ψ∘α]], w2 not in [[Ψ∘α]] ⇒ w1 < w2 in Ψ∘α",
            C1 => "Bel(Ψ÷α) ⊆ Bel(Ψ)",
            C2 => "α ∉ Bel(Ψ) ⇒ Bel(Ψ) ⊆ Bel(Ψ÷α)",
            C3 => "α ≢ ⊤ ⇒ α ∉ Bel(Ψ÷α)",
            C4 => "Bel(Ψ) ⊆ Cn(Bel(Ψ÷α) ∪ {α})",
            C5 => "α ≡ β ⇒ Bel(Ψ÷α) = Bel(Ψ÷β)",
            C6 => "Bel(Ψ÷α) ∩ Bel(Ψ÷β) ⊆ Bel(Ψ÷(α∧β))",
            C7 => "β ∉ Bel(Ψ÷(α∧β)) ⇒ Bel(Ψ÷(α∧β)) ⊆ Bel(Ψ÷β)",
            C8 => "¬α ⊨ β ⇒ Bel(Ψ÷α÷β) =_α Bel(Ψ÷β)",
            C9 => "α ⊨ β ⇒ Bel(Ψ÷α÷β) =_¬β Bel(Ψ÷β)",
            C9Prime => "α ⊨ β ⇒ Bel(Ψ÷α÷β) =_¬α Bel(Ψ÷β)",
            C10 => "¬α ⊨ γ ⇒ (Ψ÷β ⊨ γ ⇒ Ψ÷α÷β ⊨ γ)",
            C11 => "α ⊨ γ ⇒ (Ψ÷α÷β ⊨ γ ⇒ Ψ÷β ⊨ γ)",
            C8Cond => "¬α ⊨ β ⇒ (Ψ÷α ⊨ (γ∨¬α ⇐ β) ⇔ Ψ ⊨ (γ∨¬α ⇐ β))",
            C9Cond => "α ⊨ β ⇒ (Ψ÷α ⊨ (γ∨β ⇐ β) ⇔ Ψ ⊨ (γ∨β ⇐ β))",
            C10Cond => "¬α ⊨ γ ⇒ (Ψ ⊨ (γ ⇐ β) ⇒ Ψ÷α ⊨ (γ ⇐ β))",
            C11Cond => "α ⊨ γ ⇒ (Ψ÷α ⊨ (γ ⇐ β) ⇒ Ψ ⊨ (γ ⇐ β))",
            IC8 => "¬α ⊨ γ ⇒ (Bel(Ψ÷α) ⊆ Bel(Ψ÷(α∨β)) ⇔ Bel(Ψ÷γ÷α) ⊆ Bel(Ψ÷γ÷(α∨β)))",
            IC9 => "γ ⊨ α ⇒ (Bel(Ψ÷α) ⊆ Bel(Ψ÷(α∨β)) ⇔ Bel(Ψ÷γ÷α) ⊆ Bel(Ψ÷γ÷(α∨β)))",
            IC10 => "¬β ⊨ γ ⇒ (Bel(Ψ÷γ÷α) ⊆ Bel(Ψ÷γ÷(α∨β)) ⇒ Bel(Ψ÷α) ⊆ Bel(Ψ÷(α∨β)))",
            IC11 => "γ ⊨ β ⇒ (Bel(Ψ÷α) ⊆ Bel(Ψ÷(α∨β)) ⇒ Bel(Ψ÷γ÷α) ⊆ Bel(Ψ÷γ÷(α∨β)))",
            DP1 => "α ⊨ μ ⇒ Bel(Ψ∗μ∗α) = Bel(Ψ∗α)",
            DP2 => "α ⊨ ¬μ ⇒ Bel(Ψ∗μ∗α) = Bel(Ψ∗α)",
            DP3 => "Ψ∗α ⊨ μ ⇒ Ψ∗μ∗α ⊨ μ",
            DP4 => "Ψ∗α ⊭ ¬μ ⇒ Ψ∗μ∗α ⊭ ¬μ",
            DP1Cond => "α ⊨ μ ⇒ (Ψ ⊨ (β|α) ⇔ Ψ∗μ ⊨ (β|α))",
            DP2Cond => "α ⊨ ¬μ ⇒ (Ψ ⊨ (β|α) ⇔ Ψ∗μ ⊨ (β|α))",
            DP3Cond => "Ψ ⊨ (μ|α) ⇒ Ψ∗μ ⊨ (μ|α)",
            DP4Cond => "Ψ ⊭ (¬μ|α) ⇒ Ψ∗μ ⊭ (¬μ|α)",
            CR8 => "w1, w2 ⊨ α ⇒ (w1 ≤Ψ w2 ⇔ w1 ≤Ψ÷α w2)",
            CR9 => "w1, w2 ⊨ ¬α ⇒ (w1 ≤Ψ w2 ⇔ w1 ≤Ψ÷α w2)",
            CR10 => "w1 ⊨ ¬α, w2 ⊨ α ⇒ (w1 <Ψ w2 ⇒ w1 <Ψ÷α w2)",
            CR11 => "w1 ⊨ ¬α, w2 ⊨ α ⇒ (w1 ≤Ψ w2 ⇒ w1 ≤Ψ÷α w2)",
            RR8 => "w1, w2 ⊨ α ⇒ (w1 ≤Ψ w2 ⇔ w1 ≤Ψ∗α w2)",
            RR9 => "w1, w2 ⊨ ¬α ⇒ (w1 ≤Ψ w2 ⇔ w1 ≤Ψ∗α w2)",
            RR10 => "w1 ⊨ α, w2 ⊨ ¬α ⇒ (w1 <Ψ w2 ⇒ w1 <Ψ∗α w2)",
            RR11 => "w1 ⊨ α, w2 ⊨ ¬α ⇒ (w1 ≤Ψ w2 ⇒ w1 ≤Ψ∗α w2)",
        }
    }
}

impl fmt::Display for PostulateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PostulateId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown postulate `{0}`")]
pub struct UnknownPostulate(pub String);

impl FromStr for PostulateId {
    type Err = UnknownPostulate;

    /// Case-insensitive; also accepts `C9'` and a `_cond` / `cond` suffix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s
            .trim()
            .to_ascii_uppercase()
            .replace(['_', '-'], "")
            .replace(['\'', '′'], "PRIME");
        PostulateId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == norm)
            .ok_or_else(|| UnknownPostulate(s.to_string()))
    }
}
