//! Regular graphs invariant under transitive permutation actions, built as
//! unions of paired orbitals, together with the binary codes their adjacency
//! matrices span: distance-regularity classification, canonical forms and
//! automorphism groups, minimum distances and weight distributions, PD-sets
//! for permutation decoding, and the 2-designs supported by fixed-weight
//! codewords.

pub mod action;
pub mod autiso;
pub mod bits;
pub mod classify;
pub mod codes;
pub mod data;
pub mod designs;
pub mod drg;
pub mod error;
pub mod graphs;
pub mod group;
pub mod orbitals;
pub mod pdset;
pub mod perm;
pub mod report;

pub use error::{Error, Result};
