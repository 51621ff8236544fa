//! First-order Gödel logic `G` and its extension `G^Δ`: syntax, exact
//! semantics over finite valuations, decision procedures, Lindenbaum chains,
//! linear-order amalgamation and Craig interpolation with countermodel
//! synthesis.

pub mod decision;
pub mod exec;
pub mod interpolation;
pub mod lemmas;
pub mod lindenbaum;
pub mod linorder;
pub mod semantics;
pub mod syntax;
