//! Honest quantum prover, simulated compactly.
//!
//! The real prover entangles each witness qubit with a function-family
//! register and measures an image `y` per qubit. Simulating those registers
//! literally costs `2^(n + Σ widths)` amplitudes; this module instead tracks
//! only the n-qubit logical state plus one small record per qubit, using the
//! structure of the committed state:
//!
//! * Claw-free key (X-basis qubit): after the image measurement the register
//!   holds `α₀|0, x₀⟩ + α₁|1, x₁⟩` where `(x₀, x₁)` is the claw of `y`. The
//!   logical qubit stays live; the record keeps the claw.
//! * Injective key (Z-basis qubit): the image pins down a single preimage,
//!   so the measurement collapses the qubit to `|b⟩` with Born probability.
//!   The record keeps `(b, x)`.
//!
//! Extracting `x₁` from a claw classically requires the trapdoor, so
//! [`commit`] takes full key pairs. That is bookkeeping, not a privilege:
//! the quantum prover physically holds `x₁` in superposition inside its
//! registers and never learns it. The compact simulation is validated
//! against a literal full-register simulation elsewhere in this crate.
//!
//! Both measurement queries reply with one `(bit, string)` pair per qubit:
//!
//! * test round — `(b, x)`: a claimed preimage of the committed image;
//! * Hadamard round — `(w, t)`: the Hadamard-basis outcome of the
//!   `(bit, preimage)` register. For a claw-free qubit the verifier decodes
//!   the X-basis bit as `w ⊕ t·(x₀⊕x₁)`; honest provers draw `t ≠ 0` so the
//!   decoding is informative. For an injective qubit the register is a basis
//!   state and the outcome is uniform noise.

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::funcfam::{FamilyKind, KeyPair};
use crate::statevec::Statevector;

/// One qubit's share of a measurement reply: a bit and a domain string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitReply {
    pub bit: bool,
    pub string: Bits,
}

/// A full copy's reply to one measurement query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyReply {
    pub qubits: Vec<QubitReply>,
}

#[derive(Clone, Debug)]
enum QubitRecord {
    /// Claw-free commitment: qubit still live, claw `(x₀, x₁)` recorded.
    Claw { x0: Bits, x1: Bits },
    /// Injective commitment: qubit collapsed to `b` with preimage `x`.
    Collapsed { b: bool, x: Bits },
}

/// A committed witness copy: the (partially collapsed) logical state, the
/// per-qubit records, and the images sent to the verifier.
#[derive(Clone, Debug)]
pub struct CommittedCopy {
    state: Statevector,
    records: Vec<QubitRecord>,
    commitments: Vec<Bits>,
}

/// Applies the Pauli pad `X^β Z^γ` qubit-wise to a state.
pub fn apply_pad(state: &mut Statevector, beta: &Bits, gamma: &Bits) {
    assert_eq!(beta.len(), state.num_qubits());
    assert_eq!(gamma.len(), state.num_qubits());
    for q in 0..state.num_qubits() {
        if gamma.get(q) {
            state.apply_z(q);
        }
        if beta.get(q) {
            state.apply_x(q);
        }
    }
}

/// Commits one copy of `witness` under one key per qubit.
pub fn commit<R: Rng + ?Sized>(
    witness: &Statevector,
    keys: &[KeyPair],
    rng: &mut R,
) -> Result<CommittedCopy> {
    if keys.len() != witness.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{} keys for a {}-qubit witness",
            keys.len(),
            witness.num_qubits()
        )));
    }
    let mut state = witness.clone();
    let mut records = Vec::with_capacity(keys.len());
    let mut commitments = Vec::with_capacity(keys.len());
    for (q, kp) in keys.iter().enumerate() {
        match kp.pk.kind() {
            FamilyKind::Ntcf => {
                // The image of a uniform domain point under branch 0; the claw
                // supplies the branch-1 preimage living in superposition.
                let seed_x = kp.pk.sample_domain(rng);
                let y = kp.pk.eval(false, &seed_x)?;
                let (x0, x1) = kp
                    .sk
                    .claw(&y)
                    .ok_or_else(|| Error::Protocol("claw-free key failed to open a claw".into()))?;
                records.push(QubitRecord::Claw { x0, x1 });
                commitments.push(y);
            }
            FamilyKind::Ntif => {
                let b = state.measure_qubit(q, rng);
                let x = kp.pk.sample_domain(rng);
                let y = kp.pk.eval(b, &x)?;
                records.push(QubitRecord::Collapsed { b, x });
                commitments.push(y);
            }
        }
    }
    Ok(CommittedCopy {
        state,
        records,
        commitments,
    })
}

impl CommittedCopy {
    /// Per-qubit images `y` — the message sent to the verifier at commit time.
    pub fn commitments(&self) -> &[Bits] {
        &self.commitments
    }

    pub fn num_qubits(&self) -> usize {
        self.records.len()
    }

    /// Answers the test query: measure every live qubit in the computational
    /// basis and reveal the matching preimage.
    pub fn measure_test<R: Rng + ?Sized>(mut self, rng: &mut R) -> CopyReply {
        let mut qubits = Vec::with_capacity(self.records.len());
        for (q, rec) in self.records.iter().enumerate() {
            match rec {
                QubitRecord::Claw { x0, x1 } => {
                    let b = self.state.measure_qubit(q, rng);
                    let x = if b { x1.clone() } else { x0.clone() };
                    qubits.push(QubitReply { bit: b, string: x });
                }
                QubitRecord::Collapsed { b, x } => {
                    qubits.push(QubitReply {
                        bit: *b,
                        string: x.clone(),
                    });
                }
            }
        }
        CopyReply { qubits }
    }

    /// Answers the Hadamard query: Hadamard-measure each qubit's
    /// `(bit, preimage)` register.
    ///
    /// For claw-free qubits this telescopes to drawing `t` uniform nonzero,
    /// applying the phase `Z^(t·(x₀⊕x₁))`, and Hadamard-measuring all live
    /// qubits jointly. Injective registers are computational basis states,
    /// so their outcomes are fresh uniform bits (`t = 0` included).
    pub fn measure_hadamard<R: Rng + ?Sized>(mut self, rng: &mut R) -> CopyReply {
        // Phases first: every claw-free qubit picks its t.
        let mut ts: Vec<Option<Bits>> = Vec::with_capacity(self.records.len());
        for (q, rec) in self.records.iter().enumerate() {
            match rec {
                QubitRecord::Claw { x0, x1 } => {
                    let t = Bits::random_nonzero(rng, x0.len());
                    if t.dot(&x0.xor(x1)) {
                        self.state.apply_z(q);
                    }
                    ts.push(Some(t));
                }
                QubitRecord::Collapsed { .. } => ts.push(None),
            }
        }
        // Joint Hadamard-basis measurement of the live qubits.
        for (q, rec) in self.records.iter().enumerate() {
            if matches!(rec, QubitRecord::Claw { .. }) {
                self.state.apply_h(q);
            }
        }
        let outcome = self.state.measure_all(rng);
        let mut qubits = Vec::with_capacity(self.records.len());
        for (q, rec) in self.records.iter().enumerate() {
            match (rec, &ts[q]) {
                (QubitRecord::Claw { .. }, Some(t)) => {
                    qubits.push(QubitReply {
                        bit: self.state.bit(outcome, q),
                        string: t.clone(),
                    });
                }
                (QubitRecord::Collapsed { x, .. }, None) => {
                    qubits.push(QubitReply {
                        bit: rng.gen(),
                        string: Bits::random(rng, x.len()),
                    });
                }
                _ => unreachable!(),
            }
        }
        CopyReply { qubits }
    }
}
