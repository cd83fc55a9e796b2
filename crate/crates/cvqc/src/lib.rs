//! Desk-scale simulation of a protocol stack for classical verification of
//! quantum computation.
//!
//! The stack is built around a local Hamiltonian energy test: a verifier who
//! can only flip coins and hash bytes checks that an (honestly quantum, here
//! simulated) prover holds a low-energy state of a two-local XX/ZZ
//! Hamiltonian. Commitments to the quantum state go through trapdoor function
//! families — claw-free pairs for X-basis qubits, injective ones for Z-basis
//! qubits — so the verifier can decode measurement outcomes from classical
//! strings alone.
//!
//! Layers, bottom to top:
//!
//! * [`hamiltonian`] — problem instances, term sampling, energy oracles.
//! * [`funcfam`] — trapdoor claw-free / injective function families
//!   (toy backends, seedable and exhaustively testable).
//! * [`qprover`] — compact simulation of the honest quantum prover.
//! * [`fullsim`] — brute-force full-register reference simulator used as an
//!   independent oracle for `qprover`.
//! * [`protocol`] — the three-round interactive verification protocol with
//!   parallel repetition, plus its proof-of-quantumness degeneration.
//! * [`fiatshamir`] — the hash-derived-challenge variant and the
//!   random-oracle reduction harness.
//! * [`zkp`] — the zero-knowledge wrapper: padded instances, commitments,
//!   encrypted proofs, and the transcript simulator.
//! * [`analysis`] — Monte-Carlo estimators, cheating strategies, and the
//!   analytic bounds they are checked against.
//!
//! Everything is deterministic given a seed; transcripts and keys have
//! canonical byte encodings so runs can be digested, stored, and replayed.

pub mod analysis;
pub mod artifacts;
pub mod bits;
pub mod error;
pub mod fiatshamir;
pub mod fullsim;
pub mod funcfam;
pub mod hamiltonian;
pub mod protocol;
pub mod qprover;
pub mod statevec;
pub mod wire;
pub mod zkp;

pub use bits::Bits;
pub use error::{Error, Result};
