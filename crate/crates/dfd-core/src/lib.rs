//! Logic toolkit for dynamic functional dependence over finite discrete
//! dynamical systems: formula language, four model classes with
//! validators, evaluation under plain / relational / general / timed
//! semantics, the model constructions between them, dynamical-system
//! analysis, truth-preserving translations, Hilbert-style derivation
//! checking, a filtration construction and bounded satisfiability search.

pub mod analysis;
pub mod gallery;
pub mod gen;
pub mod models;
pub mod proofsys;
pub mod satcheck;
pub mod semantics;
pub mod syntax;
pub mod transform;
pub mod translate;
