//! Proof search, proof checking and proof transformations for
//! multiplicative-additive linear logic with Tarskian modalities and its
//! substructural and modal neighbours.

pub mod calculus;
pub mod corpus;
pub mod formula;
pub mod multiset;
pub mod proof;
pub mod prover;
pub mod random;
pub mod sequent;
pub mod transform;
mod syntax;

pub use calculus::{LogicSpec, Preset, RuleId, SearchBudget};
pub use formula::{Formula, Style};
pub use proof::Derivation;
pub use prover::{prove, prove_rule, Verdict};
pub use sequent::{Hypersequent, Sequent};
