//! Iterated belief contraction and revision over finite propositional
//! signatures.
//!
//! Epistemic states are ranked total preorders over worlds ([`states`]); the
//! [`change`] module provides the minimal-movement contraction and revision
//! operators together with conditional and contractional acceptance;
//! [`postulates`] checks rationality postulates over whole operator spaces
//! and [`lab`] reproduces the representation results empirically.

pub mod logic;
pub mod states;
pub mod change;
pub mod postulates;
pub mod lab;

/// Seed used by every seeded routine when none is given.
pub const DEFAULT_SEED: u64 = 20_250_101;
