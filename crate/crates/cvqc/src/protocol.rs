//! Committed-measurement verification with instance-independent setup.
//!
//! One session verifies a claimed low-energy witness for a two-local XX/ZZ
//! Hamiltonian without the verifier ever holding a qubit:
//!
//! 1. **Setup** (instance-independent): for each of `k·r` witness copies the
//!    verifier draws a basis string `h ∈ {0,1}^n`, one trapdoor key per
//!    qubit whose kind matches the basis bit, and a 64-bit term-sampling
//!    string `s`. The prover receives only the public keys.
//! 2. **Commit**: the prover sends one image `y` per qubit per copy.
//! 3. **Challenge**: one uniform bit per copy group `i ∈ [k]`; `c_i = 0`
//!    asks group `i` to open preimages (test round), `c_i = 1` asks for
//!    Hadamard-basis measurements of the committed registers.
//! 4. **Verdict**: test groups must pass `chk` everywhere. For a Hadamard
//!    group the verifier keeps the copies whose bases match the sampled
//!    term (the consistent set `A_i`), decodes each qubit with its
//!    trapdoor, and accepts the group when at least `(2−a−b)/4` of the
//!    consistent copies satisfy their term — the midpoint between the
//!    acceptance rates guaranteed by the two promise thresholds.
//!
//! The k-fold grouping is parallel repetition: a prover that can only
//! answer one challenge kind survives with probability `2^{−k}`.
//!
//! [`run_ctq`] reuses the machinery as a bare test of quantumness: no
//! Hamiltonain term statistics, only decode success — claw-free qubits must
//! return valid equations (`e = 0` on the uniform witness), which a
//! classical prover cannot do while also opening preimages.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::funcfam::{self, Backend, FamilyKind, KeyPair, PublicKey};
use crate::hamiltonian::ZxHamiltonian;
use crate::qprover::{self, CommittedCopy, CopyReply};
use crate::statevec::{Statevector, MAX_QUBITS};
use crate::wire::{sha256, Writer};

/// Session shape: security parameter, qubits per copy, copies per group,
/// challenge groups, and the function-family backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub lambda: u32,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub backend: Backend,
}

impl ProtocolParams {
    pub fn new(lambda: u32, n: usize, r: usize, k: usize, backend: Backend) -> Result<Self> {
        let p = ProtocolParams { lambda, n, r, k, backend };
        p.validate()?;
        Ok(p)
    }

    /// Total number of witness copies (`k` groups of `r`).
    pub fn copies(&self) -> usize {
        self.r * self.k
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::ParameterRange(format!(
                "n must be 1..={MAX_QUBITS}, got {}",
                self.n
            )));
        }
        if self.r == 0 {
            return Err(Error::ParameterRange("r must be at least 1".into()));
        }
        if self.k > 64 {
            return Err(Error::ParameterRange("k must be at most 64".into()));
        }
        if self.copies().saturating_mul(self.n) > 1_000_000 {
            return Err(Error::ParameterRange("n·r·k exceeds the session cap".into()));
        }
        Ok(())
    }
}

/// Verifier-side setup: bases, trapdoor keys, and term-sampling randomness,
/// all indexed by copy `m = i·r + j`. Drawn before the instance is known —
/// only the qubit count enters.
///
/// Promise thresholds `(a, b)` are instance data and deliberately not stored
/// here; the verdict reads them from the Hamiltonian.
#[derive(Clone, Debug)]
pub struct VerifierSetup {
    pub params: ProtocolParams,
    /// Basis string per copy (`n` bits; 1 = X basis = claw-free key).
    pub h: Vec<Bits>,
    /// One key pair per qubit per copy, kinds matching `h`.
    pub keys: Vec<Vec<KeyPair>>,
    /// Term-sampling randomness per copy (64 bits).
    pub s: Vec<Bits>,
}

/// Prover-side setup: the public keys only.
#[derive(Clone, Debug)]
pub struct ProverSetup {
    pub params: ProtocolParams,
    pub pks: Vec<Vec<PublicKey>>,
}

/// Both halves of a freshly sampled setup.
#[derive(Clone, Debug)]
pub struct Setups {
    pub verifier: VerifierSetup,
    pub prover: ProverSetup,
}

fn pk_digest<'a>(pks: impl Iterator<Item = &'a PublicKey>) -> [u8; 32] {
    let mut w = Writer::tagged("CVQC-PKS-v1");
    for pk in pks {
        w.put_bytes(&pk.to_bytes());
    }
    sha256(&w.finish())
}

impl VerifierSetup {
    /// The keys' public halves, in the same copy/qubit order.
    pub fn prover_view(&self) -> ProverSetup {
        ProverSetup {
            params: self.params,
            pks: self
                .keys
                .iter()
                .map(|copy| copy.iter().map(|kp| kp.pk.clone()).collect())
                .collect(),
        }
    }

    /// Digest of the public keys (the verifier's first message).
    pub fn setup_digest(&self) -> [u8; 32] {
        pk_digest(self.keys.iter().flatten().map(|kp| &kp.pk))
    }

    /// Canonical byte serialization of the whole verifier state — including
    /// secret keys — for embedding setups into statements and replay
    /// records. Not a public message.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-VS-v1");
        w.put_u32(self.params.lambda);
        w.put_u32(self.params.n as u32);
        w.put_u32(self.params.r as u32);
        w.put_u32(self.params.k as u32);
        w.put_u8(match self.params.backend {
            Backend::Mock => 0,
            Backend::ToyLwe => 1,
        });
        w.put_u32(self.h.len() as u32);
        for (m, bases) in self.h.iter().enumerate() {
            w.put_bits(bases);
            for kp in &self.keys[m] {
                w.put_bytes(&kp.sk.to_bytes());
            }
            w.put_bits(&self.s[m]);
        }
        w.finish()
    }

    pub fn digest(&self) -> [u8; 32] {
        sha256(&self.canonical_bytes())
    }
}

impl ProverSetup {
    /// Digest of the public keys; matches [`VerifierSetup::setup_digest`].
    pub fn setup_digest(&self) -> [u8; 32] {
        pk_digest(self.pks.iter().flatten())
    }
}

/// Samples a full setup. Instance-independent: consumes the qubit count `n`
/// from `params`, never a Hamiltonian.
pub fn setup<R: Rng + ?Sized>(params: ProtocolParams, rng: &mut R) -> Result<Setups> {
    params.validate()?;
    let copies = params.copies();
    let mut h = Vec::with_capacity(copies);
    let mut keys = Vec::with_capacity(copies);
    let mut s = Vec::with_capacity(copies);
    for _ in 0..copies {
        let bases = Bits::random(rng, params.n);
        keys.push(funcfam::gen_for_bases(params.backend, params.lambda, &bases, rng));
        h.push(bases);
        s.push(Bits::random(rng, 64));
    }
    let verifier = VerifierSetup { params, h, keys, s };
    let prover = verifier.prover_view();
    Ok(Setups { verifier, prover })
}

/// A prover's behavior in one session: produce the commitment message, then
/// answer the challenge. Malformed messages are legal — the verdict rejects
/// them rather than crashing.
pub trait Prover {
    /// Per-copy, per-qubit commitment images.
    fn commit(&mut self, rng: &mut dyn RngCore) -> Vec<Vec<Bits>>;
    /// One reply per copy; group `i` of the challenge governs copies
    /// `i·r..(i+1)·r`.
    fn respond(&mut self, c: &Bits, rng: &mut dyn RngCore) -> Vec<CopyReply>;
}

/// The honest prover: commits `k·r` copies of a witness state and measures
/// them as asked.
///
/// Construction takes the verifier setup because classically simulating a
/// quantum prover requires the claw bookkeeping (the real prover holds the
/// claws in superposition; see the prover-simulation module docs). The
/// simulation still only ever *sends* what an honest quantum prover would.
pub struct HonestProver {
    witness: Statevector,
    keys: Vec<Vec<KeyPair>>,
    r: usize,
    copies: Vec<Option<CommittedCopy>>,
}

impl HonestProver {
    pub fn new(witness: Statevector, vs: &VerifierSetup) -> Result<Self> {
        if witness.num_qubits() != vs.params.n {
            return Err(Error::DimensionMismatch(format!(
                "witness has {} qubits, setup expects {}",
                witness.num_qubits(),
                vs.params.n
            )));
        }
        Ok(HonestProver {
            witness,
            keys: vs.keys.clone(),
            r: vs.params.r,
            copies: Vec::new(),
        })
    }
}

impl Prover for HonestProver {
    fn commit(&mut self, rng: &mut dyn RngCore) -> Vec<Vec<Bits>> {
        let mut message = Vec::with_capacity(self.keys.len());
        self.copies.clear();
        for copy_keys in &self.keys {
            let copy = qprover::commit(&self.witness, copy_keys, rng)
                .expect("honest commitment cannot fail on a well-formed setup");
            message.push(copy.commitments().to_vec());
            self.copies.push(Some(copy));
        }
        message
    }

    fn respond(&mut self, c: &Bits, rng: &mut dyn RngCore) -> Vec<CopyReply> {
        let mut replies = Vec::with_capacity(self.copies.len());
        for (m, slot) in self.copies.iter_mut().enumerate() {
            let copy = slot.take().expect("respond called once after commit");
            let group = m / self.r;
            replies.push(if c.get(group) {
                copy.measure_hadamard(rng)
            } else {
                copy.measure_test(rng)
            });
        }
        replies
    }
}

/// One finished session: everything either party saw, plus the decision.
#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub instance_digest: [u8; 32],
    pub y: Vec<Vec<Bits>>,
    pub c: Bits,
    pub u: Vec<CopyReply>,
    pub decision: bool,
}

impl Transcript {
    /// Canonical byte serialization — injective on field values, stable
    /// across runs; the transcript digest hashes exactly these bytes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-TR-v1");
        w.put_bytes(&self.instance_digest);
        w.put_u32(self.y.len() as u32);
        for copy in &self.y {
            w.put_u32(copy.len() as u32);
            for bits in copy {
                w.put_bits(bits);
            }
        }
        w.put_bits(&self.c);
        w.put_u32(self.u.len() as u32);
        for reply in &self.u {
            w.put_u32(reply.qubits.len() as u32);
            for q in &reply.qubits {
                w.put_bool(q.bit);
                w.put_bits(&q.string);
            }
        }
        w.put_bool(self.decision);
        w.finish()
    }

    pub fn digest(&self) -> [u8; 32] {
        sha256(&self.canonical_bytes())
    }
}

/// Per-group accounting from one verdict evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupOutcome {
    /// Challenge bit for this group (false = test round).
    pub hadamard: bool,
    /// Size of the consistent set (Hadamard groups only).
    pub consistent: usize,
    /// Consistent copies whose term was satisfied.
    pub satisfied: usize,
    pub passed: bool,
}

/// Verdict plus per-group detail (consistent-set sizes, satisfied counts).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictDetail {
    pub accept: bool,
    pub groups: Vec<GroupOutcome>,
}

/// Acceptance threshold for a Hadamard group: the fraction `(2−a−b)/4` of
/// the consistent set, the midpoint between the per-copy acceptance rates
/// `(1−a)/2` and `(1−b)/2` guaranteed by the two promise thresholds.
pub fn group_threshold(a: f64, b: f64, consistent: usize) -> f64 {
    (2.0 - a - b) * consistent as f64 / 4.0
}

/// Decodes one consistent copy's measurement outcome bit for qubit `q`:
/// basis bit 0 reads the committed value from the image via the injective
/// trapdoor; basis bit 1 solves the claw equation `e = w ⊕ t·(x₀⊕x₁)`,
/// rejecting trivial `t`. `None` marks a decode failure (copy rejected).
fn decode_qubit(kp: &KeyPair, x_basis: bool, y: &Bits, reply: &CopyReply, q: usize) -> Option<bool> {
    if x_basis {
        let (x0, x1) = kp.sk.claw(y)?;
        let qr = reply.qubits.get(q)?;
        let t = &qr.string;
        if t.len() != x0.len() || t.is_zero() {
            return None;
        }
        Some(qr.bit ^ t.dot(&x0.xor(&x1)))
    } else {
        let (b, _x) = kp.sk.invert_pair(y)?;
        Some(b)
    }
}

/// Setup invariants that replayed or reconstructed setups must satisfy:
/// per-copy shapes, key kinds matching bases, 64-bit term randomness.
fn setup_shape_ok(vs: &VerifierSetup) -> bool {
    let p = vs.params;
    let copies = p.copies();
    vs.h.len() == copies
        && vs.keys.len() == copies
        && vs.s.len() == copies
        && (0..copies).all(|m| {
            vs.h[m].len() == p.n
                && vs.keys[m].len() == p.n
                && vs.s[m].len() >= 64
                && (0..p.n).all(|q| {
                    vs.keys[m][q].pk.kind() == FamilyKind::for_basis(vs.h[m].get(q))
                })
        })
}

/// The verifier's decision function. Pure in its arguments; malformed
/// prover messages fail the affected copies instead of crashing.
pub fn verdict(
    instance: &ZxHamiltonian,
    vs: &VerifierSetup,
    y: &[Vec<Bits>],
    c: &Bits,
    u: &[CopyReply],
) -> bool {
    verdict_detailed(instance, vs, y, c, u).accept
}

/// [`verdict`] with per-group accounting.
pub fn verdict_detailed(
    instance: &ZxHamiltonian,
    vs: &VerifierSetup,
    y: &[Vec<Bits>],
    c: &Bits,
    u: &[CopyReply],
) -> VerdictDetail {
    let p = vs.params;
    assert_eq!(c.len(), p.k, "challenge length is the verifier's own k");
    let mut groups = Vec::with_capacity(p.k);
    let mut accept = instance.num_qubits() == p.n;
    // Prover-controlled shapes: wrong counts are a failed session. Setup
    // shapes are validated too, because reconstructed setups (replay, proof
    // statements) flow through here.
    if y.len() != p.copies() || u.len() != p.copies() || !setup_shape_ok(vs) {
        return VerdictDetail { accept: false, groups };
    }
    for i in 0..p.k {
        let copies = i * p.r..(i + 1) * p.r;
        let outcome = if !c.get(i) {
            let ok = copies.clone().all(|m| {
                y[m].len() == p.n
                    && u[m].qubits.len() == p.n
                    && (0..p.n).all(|q| {
                        let qr = &u[m].qubits[q];
                        vs.keys[m][q].pk.chk(qr.bit, &qr.string, &y[m][q])
                    })
            });
            GroupOutcome { hadamard: false, consistent: 0, satisfied: 0, passed: ok }
        } else {
            let mut consistent = 0;
            let mut satisfied = 0;
            for m in copies.clone() {
                let term = instance
                    .sample_term(&vs.s[m])
                    .expect("term randomness length checked above");
                if !term.is_consistent(&vs.h[m]) {
                    continue;
                }
                consistent += 1;
                if y[m].len() != p.n {
                    continue;
                }
                let mut e = Vec::with_capacity(p.n);
                for q in 0..p.n {
                    match decode_qubit(&vs.keys[m][q], vs.h[m].get(q), &y[m][q], &u[m], q) {
                        Some(bit) => e.push(bit),
                        None => break,
                    }
                }
                if e.len() == p.n && term.satisfied(e[term.i], e[term.j]) {
                    satisfied += 1;
                }
            }
            let threshold = group_threshold(instance.a, instance.b, consistent);
            let passed = satisfied as f64 >= threshold - 1e-9;
            GroupOutcome { hadamard: true, consistent, satisfied, passed }
        };
        accept &= outcome.passed;
        groups.push(outcome);
    }
    VerdictDetail { accept, groups }
}

/// Runs one interactive session: commit, uniform challenge, response,
/// verdict.
pub fn run_interactive<R: Rng>(
    instance: &ZxHamiltonian,
    vs: &VerifierSetup,
    prover: &mut dyn Prover,
    rng: &mut R,
) -> Transcript {
    let y = prover.commit(rng);
    let c = Bits::random(rng, vs.params.k);
    let u = prover.respond(&c, rng);
    let decision = verdict(instance, vs, &y, &c, &u);
    Transcript {
        instance_digest: instance.digest(),
        y,
        c,
        u,
        decision,
    }
}

/// Decision function for the bare quantumness test: no term statistics —
/// a Hadamard group passes when every qubit of every copy decodes, meaning
/// images invert and every claw-free qubit returns a valid nontrivial
/// equation (`e = 0` on the uniform witness).
pub fn ctq_verdict(vs: &VerifierSetup, y: &[Vec<Bits>], c: &Bits, u: &[CopyReply]) -> bool {
    let p = vs.params;
    assert_eq!(c.len(), p.k);
    if y.len() != p.copies() || u.len() != p.copies() || !setup_shape_ok(vs) {
        return false;
    }
    (0..p.k).all(|i| {
        (i * p.r..(i + 1) * p.r).all(|m| {
            if y[m].len() != p.n || u[m].qubits.len() != p.n {
                return false;
            }
            (0..p.n).all(|q| {
                if !c.get(i) {
                    let qr = &u[m].qubits[q];
                    vs.keys[m][q].pk.chk(qr.bit, &qr.string, &y[m][q])
                } else if vs.h[m].get(q) {
                    // Claw equation must hold: e = w ⊕ t·(x₀⊕x₁) = 0.
                    decode_qubit(&vs.keys[m][q], true, &y[m][q], &u[m], q) == Some(false)
                } else {
                    vs.keys[m][q].sk.invert_pair(&y[m][q]).is_some()
                }
            })
        })
    })
}

/// The statement digest recorded in quantumness-test transcripts, where no
/// Hamiltonian is involved.
pub fn ctq_digest() -> [u8; 32] {
    sha256(b"CVQC-CTQ-v1")
}

/// Runs one quantumness-test session. The honest prover for this mode
/// commits the uniform superposition (see [`run_interactive`] for the
/// Hamiltonian-verifying counterpart).
pub fn run_ctq<R: Rng>(
    vs: &VerifierSetup,
    prover: &mut dyn Prover,
    rng: &mut R,
) -> Transcript {
    let y = prover.commit(rng);
    let c = Bits::random(rng, vs.params.k);
    let u = prover.respond(&c, rng);
    let decision = ctq_verdict(vs, &y, &c, &u);
    Transcript {
        instance_digest: ctq_digest(),
        y,
        c,
        u,
        decision,
    }
}
