//! Incidence systems, their correlation groups, and verification that a
//! construction is a (weak) incidence geometric representation of a group.
//!
//! The crate is organised bottom-up:
//!
//! - [`perm`] and [`permgroup`]: permutations and Schreier–Sims groups.
//! - [`incidence`]: the incidence-system data model and its predicates.
//! - [`autsolver`]: correlation and type-preserving automorphism groups.
//! - [`galois`]: finite fields, projective spaces and cross-ratios.
//! - [`constructions`]: every concrete geometry, plus coset geometries.
//! - [`freegroup`]: Stallings graphs for subgroups of free groups.

pub mod autsolver;
pub mod constructions;
pub mod error;
pub mod freegroup;
pub mod galois;
pub mod graph;
pub mod incidence;
pub mod perm;
pub mod permgroup;
pub mod search;

pub use autsolver::{AutResult, RepresentationReport, Verdict};
pub use error::{
    ConstructionError, FieldError, FreeGroupError, GroupError, IncidenceError, SolverError,
};
pub use freegroup::{FreeAutomorphism, ParabolicFamily, StallingsGraph, Word};
pub use galois::{FiniteField, ProjectiveSpace};
pub use graph::Graph;
pub use incidence::{Flag, IncidenceSystem, Induced, SystemBuilder, TypeId, ValidationReport};
pub use perm::Permutation;
pub use permgroup::{GroupFingerprint, PermGroup, StabChain};
