//! Exact computation of two-dimensional Schur numbers `S(r, k)`.
//!
//! Fix an injective enumeration `a_1, a_2, ...` of a subset of a countable
//! commutative group. `S(r, k)` is the least `n` such that every
//! `r`-coloring of the prefix `{a_1, ..., a_n}` contains a monochromatic
//! configuration `{a} ∪ B ∪ (a + B)` with `|B| = k`. For the natural
//! enumeration of the positive integers, `S(r, 1)` are the classical Schur
//! numbers (2, 5, 14, 45, 161, ...).
//!
//! The crate provides:
//!
//! * ground types for groups, enumerations, colorings, and witnesses, with
//!   a brute-force counting oracle that defines ground truth ([`oracle`]);
//! * an exact backtracking solver with symmetry breaking ([`solver`]),
//!   including deterministic multi-worker search (`std` feature);
//! * a DIMACS CNF encoder with sequential-counter cardinality constraints
//!   for handing instances to external SAT solvers, plus model decoding
//!   and certificate verification ([`cnf`]);
//! * finite block-family constructions with disjoint-sum, forcing, and
//!   pseudo-intersection verification ([`blocks`]).
//!
//! The crate is `no_std`-compatible (`alloc` is required); disabling the
//! default `std` feature removes wall-clock budgets and parallel search.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod blocks;
pub mod cnf;
pub mod coloring;
pub mod enumeration;
mod error;
pub mod group;
pub mod oracle;
pub mod solver;
pub mod witness;

pub use coloring::Coloring;
pub use enumeration::{Enumeration, EnumerationSource, Prefix};
pub use error::Error;
pub use group::{AmbientGroup, GroupElement};
pub use witness::{SchurConfiguration, SchurWitness};

#[cfg(test)]
mod sharing {
    // ground types are immutable after construction and cross threads freely
    fn assert_shareable<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_sync() {
        assert_shareable::<crate::AmbientGroup>();
        assert_shareable::<crate::GroupElement>();
        assert_shareable::<crate::Enumeration>();
        assert_shareable::<crate::Prefix>();
        assert_shareable::<crate::Coloring>();
        assert_shareable::<crate::SchurWitness>();
        assert_shareable::<crate::blocks::BlockFamily>();
        assert_shareable::<crate::cnf::CnfInstance>();
    }
}
