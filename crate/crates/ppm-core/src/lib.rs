//! Permutation pattern matching inside two permutation classes.
//!
//! Deciding whether a text permutation contains a pattern permutation is
//! NP-complete in general, but when both sides are 321-avoiding, or both are
//! skew-merged, it takes O(kn) time for a pattern of size k and a text of
//! size n. This crate implements both matchers on top of the linear-time
//! structural decompositions they need, plus a brute-force oracle that
//! certifies them on small instances.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the
//! command line live in the companion `ppm-cli` crate.

#![no_std]

extern crate alloc;

use core::fmt;

pub mod classify321;
pub mod match321;
pub mod match_skew;
pub mod oracle;
pub mod perm;
pub mod skew;

pub use classify321::{Block, BlockDecomposition, Label321, Labels321, RigidType};
pub use match321::{
    match_321, match_321_traced, min_rigid_embedding, problem_bound_321, BlockTrace,
    FixpointOutcome, Frontier, MatchError, MatchResult, MatchTrace, ProblemBound,
};
pub use match_skew::{
    match_skew_merged, min_noncentral_embedding, monotone_capacity, problem_bound_skew,
    remaining_region, Region,
};
pub use perm::{
    direct_sum, verify_embedding, Direction, ElementRef, Embedding, EmbeddingError, PermError,
    Permutation,
};
pub use skew::{CenterDirection, Corner, SkewDir, SkewLabel, SkewLabels};

/// The two permutation classes the fast matchers cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermClass {
    Av321,
    SkewMerged,
}

impl fmt::Display for PermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermClass::Av321 => "321-avoiding",
            PermClass::SkewMerged => "skew-merged",
        })
    }
}
