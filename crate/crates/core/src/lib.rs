//! Proof checking for modal, justification, fixed-point, mu-calculus,
//! quantified and timed epistemic logics.

pub mod corpus;
pub mod fixedpoint;
pub mod kernel;
pub mod registry;
pub mod semantics;
pub mod syntax;
pub mod transforms;
