//! Volumes of central sections of coordinate-dilated cross-polytopes.
//!
//! For a subspace `H ⊆ Rⁿ` and scales `a₁,…,aₙ > 0` the crate computes
//! `vol_H(diag(a)B₁ⁿ ∩ H)` in several independent ways:
//!
//! * two Monte Carlo estimators over exponential weights
//!   ([`estimators::estimate_codim`], [`estimators::estimate_dim`]),
//! * exact oracles for one- and two-dimensional sections and a hit-or-miss
//!   oracle beyond ([`oracle`]),
//!
//! and uses them to probe log-concavity of `t ↦ vol_H(diag(eᵗ)B₁ⁿ ∩ H)`
//! ([`analysis`]). The `xsec` binary exposes the same operations from the
//! command line; see [`cli`].
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod numkit;
pub mod oracle;
pub mod rng;
pub mod section;

pub use error::{Error, Result};
pub use estimators::{
    density_identity_check, estimate_codim, estimate_dim, estimate_logvol_path, Aggregation, MCConfig, Method,
    VolumeEstimate,
};
pub use oracle::{full_volume, volume_k1, volume_k2, volume_mc, SectionBody};
pub use section::{
    codim_profile, dim_profile, to_dilation, ColumnProfile, DilationVector, GivenAs, LogDilation, ProfileMode,
    SubspaceSpec,
};
