//! A finite-model workbench for weak BCC-algebras.
//!
//! Algebras are Cayley tables over `{0, .., n-1}` with `0` the
//! distinguished constant. The crate checks the axiom systems, derives the
//! branch decomposition, evaluates the named identities under their
//! quantification scope, checks lattice structure, enumerates small
//! algebras up to isomorphism and audits a catalogue of theorems over
//! finite models.

pub mod audit;
pub mod axioms;
pub mod enumerate;
pub mod fixtures;
pub mod lattice;
pub mod laws;
pub mod model;
pub mod properties;
pub mod set;
pub mod structure;

pub use model::{parse_table, Algebra, ModelError, ParseError, Relation, Verdict, Witness};
pub use set::ElemSet;
