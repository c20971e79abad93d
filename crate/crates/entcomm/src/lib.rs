//! Distinguishability-constrained communication: classical, quantum, and
//! entanglement-assisted protocols with certified numerics.
//!
//! The crate computes and cross-verifies the distinguishability of a
//! sender's inputs across four regimes (classical with shared randomness,
//! quantum, entanglement-assisted classical, entanglement-assisted quantum),
//! simulates the corresponding protocols, converts protocols between regimes,
//! and searches for advantageous strategies with a see-saw of certified
//! semidefinite sub-solves.

pub mod classical;
pub mod discrimination;
pub mod protocols;
pub mod qcore;
pub mod search;
pub mod tasks;
pub mod transforms;
