//! Parameterized α-fixed semantics of logic programs over Belnap's
//! four-valued bilattice.
//!
//! Programs are parsed with [`syntax::parse_program`], grounded with
//! [`grounder::ground`], and evaluated with the fixpoint operators in
//! [`engine`]. [`bottom_up`] gives an independent set-based route to the same
//! semantics and [`oracles`] provides the classical three-valued semantics.

pub mod bilattice;
pub mod bottom_up;
pub mod engine;
pub mod grounder;
pub mod oracles;
pub mod syntax;
pub mod valuation;

pub use bilattice::TruthValue;
pub use engine::{
    compare_semantics, consensus_semantics, fix_f_t, fix_i, fix_u, psi, psi_prime,
    ComparisonReport, ConsensusReport, EngineError, SemanticsResult,
};
pub use grounder::{ground, ground_with, Base, BaseMode, GroundOptions, GroundProgram};
pub use syntax::{parse_program, Program, SyntaxError};
pub use valuation::{Valuation, ValuationError};
