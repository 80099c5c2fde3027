//! Axiom schemas for the four calculi, schema instantiation, a
//! derivation checker and a randomized soundness sweep.

mod derivation;
mod harness;
mod schemas;

pub use derivation::{
    check_derivation, derivation_from_json, is_propositional_tautology, CheckError, Derivation,
    DerivationIoError, Justification, Line,
};
pub use harness::{
    random_suite, soundness_harness, Counterexample, HarnessConfig, SoundnessReport, SuiteModel,
};
pub use schemas::{
    count_term_occurrences, derived_principles, instantiate, lookup_schema,
    replace_term_occurrence, schemas, AxiomSchema, Bindings, InstantiateError, SlotKind,
    SlotValue,
};
