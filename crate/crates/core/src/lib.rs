//! Exact combinatorics of the partition perimeter.
//!
//! A partition's perimeter is its largest part plus its number of parts,
//! minus one. Only `2^(n-1)` partitions share perimeter `n`, and they
//! correspond to the compositions of `n` through the perimeter bijection
//! ([`pi`]), which makes exhaustive verification of perimeter-indexed
//! counting identities cheap and exact.
//!
//! The crate provides:
//!
//! - the fundamental objects: [`Partition`], [`Composition`],
//!   [`MModularDiagram`], and canonical bitmask [`rank_composition`] /
//!   [`unrank_composition`] enumeration;
//! - the constructive maps between the counted families: digit rotation for
//!   residue classes ([`rotate_residues`]), the part-splitting injection
//!   [`phi`] with trace and inverse-on-image, the transport maps
//!   [`ft1_map`] / [`ft2_map`], and the Fibonacci chain maps;
//! - a [`FamilySpec`] catalog with membership, exhaustive counting, and
//!   rank-ordered enumeration for every named family;
//! - a verification harness (`verify::*`) that turns each counting statement
//!   into a pass/fail [`TheoremReport`], plus grid [`sweep`]s;
//! - deterministic text/JSON/CSV emission and ASCII diagram rendering for
//!   the `perim` command-line tool.

mod composition;
mod error;
mod family;
mod partition;
mod perimeter;

pub mod emit;
pub mod maps;
pub mod render;
pub mod verify;

pub use composition::{
    composition_count, enumerate_compositions, m_modular, rank_composition, unrank_composition,
    Composition, CompositionIndex, Compositions, MModularDiagram, MAX_SIZE,
};
pub use error::{Error, Result};
pub use family::{FamilyIter, FamilyObject, FamilySpec, ResidueSet, DEFAULT_CAP};
pub use maps::{
    check_map, fib_chain_12_from_odd, fib_chain_gt1_from_12, ft1_map, ft2_map, ft2_unmap,
    phi, phi_preimage, phi_traced, rotate_residues, strict_witness, unrotate_residues,
    MapReport, PhiBranch, PhiStep, PhiTrace,
};
pub use partition::Partition;
pub use perimeter::{enumerate_perimeter_partitions, pi, pi_inverse, PerimeterPartitions};
pub use verify::{
    fibonacci, sweep, sweep_all_default, verify_fibonacci, verify_fu_tang, verify_huang,
    verify_lemma, verify_main, verify_munagi, verify_proposition, RPolicy, Suite, SweepConfig,
    SweepReport, TheoremReport, VerifyOptions,
};

/// Parses a comma-separated list of positive integers (the CLI form of
/// partitions, compositions, and residue lists).
pub(crate) fn parse_parts(s: &str) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Err(Error::parse(s, "empty part list"));
    }
    s.split(',')
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::parse(s, format!("`{tok}` is not a positive integer")))
        })
        .collect()
}
