//! Mechanical conversion of programs between a function-centered and a
//! constructor-centered module architecture.
//!
//! The conversion is a script of small, precondition-checked refactorings
//! over a minimal functional language with modules. Behavior preservation
//! is checked with a call-by-need evaluator and structural results with
//! α-equivalence against reference projects.

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod lang;
pub mod refactor;
pub mod resolve;
pub mod script;
