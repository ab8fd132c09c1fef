//! Finite propositional logic: signatures, formulas, worlds and model sets.

mod formula;
mod parser;
mod signature;
mod world;

use thiserror::Error;

pub use formula::{all_worlds, entails, formula_from_worldset, Formula};
pub use parser::parse_formula;
pub use signature::{Signature, MAX_ATOMS};
pub use world::{World, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("signature must contain at least one atom")]
    EmptySignature,
    #[error("signature has {0} atoms; at most {MAX_ATOMS} are supported")]
    TooManyAtoms(usize),
    #[error("duplicate atom `{0}` in signature")]
    DuplicateAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
}
