//! Exact oracles that certify the constructions.

mod brute;
mod chains;
mod subspace;
pub mod suites;

pub use brute::brute_force_components;
pub use chains::{
    certify_column_space, certify_kernel, check_duality_chain, check_lemma25_roundtrip,
    DualityChainReport, IdentityResult, Lemma25Report,
};
pub use subspace::{kernel_basis, subspace_equal, SubspaceBasis, DEFAULT_SUBSPACE_TOL};
