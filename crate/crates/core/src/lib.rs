//! Stochastic reactor dynamics for algebraic artificial chemistries.
//!
//! A [`signature::Signature`] names the operations components can perform,
//! an [`algebra::Algebra`] says what they compute, and a list of
//! [`signature::Protocol`]s says which reactions happen when members of a
//! reactor collide. [`flask::FlaskProcess`] turns these into a discrete-time
//! Markov process on [`multiset::Multiset`]s, with exact one-step
//! [`dist::Distribution`]s and seeded trajectory sampling. Homomorphisms of
//! algebras induce maps of processes, checked by
//! [`flask::MarkovMorphism::check_naturality`].

pub mod algebra;
pub mod chem;
pub mod cli;
pub mod dist;
pub mod flask;
pub mod multiset;
pub mod signature;

pub use algebra::{Algebra, FiniteAlgebra, Homomorphism};
pub use dist::Distribution;
pub use flask::{FlaskError, FlaskProcess};
pub use multiset::Multiset;
pub use signature::{OpSymbol, Protocol, ProtocolTerm, Signature};
