//! Zero-knowledge wrapper around the verification session.
//!
//! The interactive session leaks measurement outcomes of the witness state.
//! To hide them, a trusted setup hands the prover a uniform Pauli one-time
//! pad `(β, γ)` and publishes only a commitment `ξ` to it; the prover runs
//! the session on the padded witness `X^β Z^γ |ψ⟩`. Because conjugating a
//! two-local XX/ZZ instance by the pad only flips term signs
//! ([`ZxHamiltonian::conjugate_pad`]), the padded session is a session for
//! an equivalent instance, and the outcomes the verifier would see are
//! one-time-padded — individually uniform.
//!
//! The verifier still has to *decide*, so the prover proves in
//! zero-knowledge that the padded transcript accepts: it commits to its
//! response message (`χ`), then sends an encrypted non-interactive proof
//! `ce` for the statement
//!
//! ```text
//! x = (H, s, sk, ξ, y, c, χ) ∈ L  ⟺  ∃ τ = (β, γ, u, r₁, r₂):
//!     ξ opens to (β, γ) with r₁, χ opens to u with r₂,
//!     and the verdict accepts (H_{β,γ}, y, c, u).
//! ```
//!
//! The proof runs *inside* an FHE evaluation over encryptions of the
//! verifier's trapdoors (`csk`) and term randomness (`cs`), so the prover's
//! classical state [`ZkProverState`] never contains a plaintext secret key —
//! a property the tests check at the type level.
//!
//! Scale substitutions, both deliberately harmless to the statistics being
//! measured and deliberately worthless as cryptography:
//!
//! * [`TransparentFhe`] is a key-tagged identity encoding. Evaluation
//!   applies the circuit to the payload bytes; decryption checks the tag.
//! * [`ToyNizk`] proves by hashing the statement. It is complete (the
//!   prover refuses statements whose witness fails the relation) and
//!   trivially zero-knowledge (the simulator emits the same hash), but it
//!   is **not sound** — soundness experiments live in the unwrapped
//!   protocol layers.
//!
//! [`simulate`] produces transcripts from the setup state alone — no
//! witness parameter exists in its signature. Commitment-phase outcomes for
//! injective-key qubits are chosen with the term parities the padded
//! verdict wants; claw-free replies are assembled from the decoding
//! identity `w = e ⊕ t·(x₀⊕x₁)` backwards. Per-qubit marginals match the
//! honest prover's (uniform), which is the content of the wrapped
//! protocol's zero-knowledge argument.

use rand::{Rng, RngCore};
use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::funcfam::{FamilyKind, KeyPair, SecretKey};
use crate::hamiltonian::ZxHamiltonian;
use crate::protocol::{self, verdict, ProtocolParams, ProverSetup, VerifierSetup};
use crate::qprover::{self, CopyReply, QubitReply};
use crate::statevec::Statevector;
use crate::wire::{sha256, Reader, Writer};

// ---------------------------------------------------------------------------
// Hash commitments

/// A 32-byte hash commitment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Commitment(pub [u8; 32]);

/// Commits to `m` under randomness `r`: `SHA-256("CVQC-COM-v1" ∥ r ∥ m)`.
pub fn commit(r: &[u8; 32], m: &[u8]) -> Commitment {
    let mut h = Sha256::new();
    h.update(b"CVQC-COM-v1");
    h.update(r);
    h.update(m);
    Commitment(h.finalize().into())
}

/// Checks an opening.
pub fn verify_commit(c: &Commitment, r: &[u8; 32], m: &[u8]) -> bool {
    commit(r, m) == *c
}

// ---------------------------------------------------------------------------
// Homomorphic encryption interface and the transparent stand-in

/// An FHE key: public and secret halves are both opaque tags here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FheKey(pub [u8; 16]);

/// A ciphertext: the key tag it was encrypted under plus a payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub tag: [u8; 16],
    pub payload: Vec<u8>,
}

/// The homomorphic-encryption operations the wrapper needs: key
/// generation, encryption, decryption, and evaluation of a byte-level
/// circuit over ciphertexts.
pub trait Fhe {
    /// Generates a `(public, secret)` key pair.
    fn gen(&self, rng: &mut dyn RngCore) -> (FheKey, FheKey);
    fn encrypt(&self, hpk: &FheKey, plaintext: &[u8]) -> Ciphertext;
    fn decrypt(&self, hsk: &FheKey, ct: &Ciphertext) -> Result<Vec<u8>>;
    /// Applies `f` to the plaintexts under the hood, producing a ciphertext
    /// of the result under the same key.
    fn eval(
        &self,
        hpk: &FheKey,
        f: &dyn Fn(&[Vec<u8>]) -> Vec<u8>,
        inputs: &[&Ciphertext],
    ) -> Result<Ciphertext>;
}

/// Key-tagged identity encoding. Ciphertexts carry their plaintext openly;
/// the only enforced semantics are that decryption and evaluation check key
/// tags. Stands in for an actual FHE scheme so the surrounding protocol
/// logic — who holds which key, what flows through `eval` — is exercised
/// faithfully.
#[derive(Clone, Copy, Debug, Default)]
pub struct TransparentFhe;

impl Fhe for TransparentFhe {
    fn gen(&self, rng: &mut dyn RngCore) -> (FheKey, FheKey) {
        let mut tag = [0u8; 16];
        rng.fill_bytes(&mut tag);
        (FheKey(tag), FheKey(tag))
    }

    fn encrypt(&self, hpk: &FheKey, plaintext: &[u8]) -> Ciphertext {
        Ciphertext { tag: hpk.0, payload: plaintext.to_vec() }
    }

    fn decrypt(&self, hsk: &FheKey, ct: &Ciphertext) -> Result<Vec<u8>> {
        if ct.tag != hsk.0 {
            return Err(Error::Protocol("ciphertext was encrypted under a different key".into()));
        }
        Ok(ct.payload.clone())
    }

    fn eval(
        &self,
        hpk: &FheKey,
        f: &dyn Fn(&[Vec<u8>]) -> Vec<u8>,
        inputs: &[&Ciphertext],
    ) -> Result<Ciphertext> {
        let mut plain = Vec::with_capacity(inputs.len());
        for ct in inputs {
            if ct.tag != hpk.0 {
                return Err(Error::Protocol("evaluation inputs must share the key".into()));
            }
            plain.push(ct.payload.clone());
        }
        Ok(Ciphertext { tag: hpk.0, payload: f(&plain) })
    }
}

// ---------------------------------------------------------------------------
// The language L and its toy proof system

/// Statement: everything the padded-session verdict reads. Includes the
/// verifier setup (trapdoors and term randomness) because the verdict is a
/// trapdoor computation; the honest prover only ever assembles this inside
/// an FHE evaluation.
#[derive(Clone, Debug)]
pub struct LInstance {
    pub instance: ZxHamiltonian,
    pub setup: VerifierSetup,
    pub xi: Commitment,
    pub y: Vec<Vec<Bits>>,
    pub c: Bits,
    pub chi: Commitment,
}

impl LInstance {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-LX-v1");
        w.put_bytes(&self.instance.canonical_bytes());
        w.put_bytes(&self.setup.canonical_bytes());
        w.put_bytes(&self.xi.0);
        w.put_bytes(&crate::fiatshamir::commitment_bytes(&self.y));
        w.put_bits(&self.c);
        w.put_bytes(&self.chi.0);
        w.finish()
    }

    pub fn digest(&self) -> [u8; 32] {
        sha256(&self.canonical_bytes())
    }
}

/// Witness: the pad, the response message, and the two commitment
/// openings.
#[derive(Clone, Debug)]
pub struct LWitness {
    pub beta: Bits,
    pub gamma: Bits,
    pub u: Vec<CopyReply>,
    pub r1: [u8; 32],
    pub r2: [u8; 32],
}

/// Canonical encoding of a pad opening, the message under `ξ`.
pub fn pad_bytes(beta: &Bits, gamma: &Bits) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-PAD-v1");
    w.put_bits(beta);
    w.put_bits(gamma);
    w.finish()
}

/// Canonical encoding of a response message, the message under `χ`.
pub fn replies_bytes(u: &[CopyReply]) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-U-v1");
    w.put_u32(u.len() as u32);
    for reply in u {
        w.put_u32(reply.qubits.len() as u32);
        for q in &reply.qubits {
            w.put_bool(q.bit);
            w.put_bits(&q.string);
        }
    }
    w.finish()
}

/// The verdict of the statement's session under the pad-conjugated
/// instance: `H_{β,γ}` accepts `(y, c, u)`.
pub fn verdict_prime(x: &LInstance, beta: &Bits, gamma: &Bits, u: &[CopyReply]) -> bool {
    match x.instance.conjugate_pad(beta, gamma) {
        Ok(conj) => verdict(&conj, &x.setup, &x.y, &x.c, u),
        Err(_) => false,
    }
}

/// The relation defining `L`: both commitments open and the padded verdict
/// accepts.
pub fn relation(x: &LInstance, tau: &LWitness) -> bool {
    verify_commit(&x.xi, &tau.r1, &pad_bytes(&tau.beta, &tau.gamma))
        && verify_commit(&x.chi, &tau.r2, &replies_bytes(&tau.u))
        && verdict_prime(x, &tau.beta, &tau.gamma, &tau.u)
}

/// A non-interactive proof system for `L`.
pub trait Nizk {
    /// Proves `x ∈ L` with witness `tau`. Errors when the witness fails
    /// the relation (completeness is meaningful).
    fn prove(&self, crs: &[u8; 32], x: &LInstance, tau: &LWitness) -> Result<Vec<u8>>;
    fn verify(&self, crs: &[u8; 32], x: &LInstance, proof: &[u8]) -> bool;
    /// Produces a proof from the statement alone.
    fn simulate(&self, crs: &[u8; 32], x: &LInstance) -> Vec<u8>;
}

/// Hash-of-statement proofs: `π = SHA-256("CVQC-NIZK-v1" ∥ crs ∥ x)`.
///
/// Complete — `prove` checks the relation and refuses bad witnesses — and
/// perfectly simulatable, since the proof never depended on the witness.
/// **Not sound**: anyone can hash a false statement. Soundness
/// measurements for the stack live in the protocol and Fiat–Shamir layers,
/// where no proof-system shortcut exists.
#[derive(Clone, Copy, Debug, Default)]
pub struct ToyNizk;

impl ToyNizk {
    fn proof_bytes(crs: &[u8; 32], x: &LInstance) -> Vec<u8> {
        let mut h = Sha256::new();
        h.update(b"CVQC-NIZK-v1");
        h.update(crs);
        h.update(x.digest());
        h.finalize().to_vec()
    }
}

impl Nizk for ToyNizk {
    fn prove(&self, crs: &[u8; 32], x: &LInstance, tau: &LWitness) -> Result<Vec<u8>> {
        if !relation(x, tau) {
            return Err(Error::Protocol("witness fails the relation".into()));
        }
        Ok(Self::proof_bytes(crs, x))
    }

    fn verify(&self, crs: &[u8; 32], x: &LInstance, proof: &[u8]) -> bool {
        proof == Self::proof_bytes(crs, x).as_slice()
    }

    fn simulate(&self, crs: &[u8; 32], x: &LInstance) -> Vec<u8> {
        Self::proof_bytes(crs, x)
    }
}

// ---------------------------------------------------------------------------
// Trusted setup

/// Verifier state after trusted setup: the CRS, the session setup (bases,
/// trapdoors, term randomness), the FHE keys, and the pad commitment. The
/// verifier never holds the pad itself.
#[derive(Clone, Debug)]
pub struct ZkVerifierState {
    pub crs: [u8; 32],
    pub setup: VerifierSetup,
    pub hpk: FheKey,
    pub hsk: FheKey,
    pub xi: Commitment,
}

/// Prover state after trusted setup. Holds public keys, the pad and its
/// opening, and *encryptions* of the verifier secrets — by construction
/// there is no plaintext trapdoor or term-randomness field in this type.
#[derive(Clone, Debug)]
pub struct ZkProverState {
    pub crs: [u8; 32],
    pub setup: ProverSetup,
    pub hpk: FheKey,
    pub csk: Ciphertext,
    pub cs: Ciphertext,
    pub beta: Bits,
    pub gamma: Bits,
    pub r1: [u8; 32],
    pub xi: Commitment,
}

/// Both halves of the trusted setup, as the (honest, simulated) trusted
/// party sees them.
#[derive(Clone, Debug)]
pub struct ZkSetup {
    pub verifier: ZkVerifierState,
    pub prover: ZkProverState,
}

fn sks_to_bytes(keys: &[Vec<KeyPair>]) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-SKS-v1");
    w.put_u32(keys.len() as u32);
    for copy in keys {
        w.put_u32(copy.len() as u32);
        for kp in copy {
            w.put_bytes(&kp.sk.to_bytes());
        }
    }
    w.finish()
}

fn sks_from_bytes(bytes: &[u8]) -> Result<Vec<Vec<KeyPair>>> {
    let mut r = Reader::tagged(bytes, "CVQC-SKS-v1")?;
    let copies = r.get_u32()? as usize;
    let mut keys = Vec::with_capacity(copies.min(1 << 20));
    for _ in 0..copies {
        let n = r.get_u32()? as usize;
        let mut copy = Vec::with_capacity(n.min(4096));
        for _ in 0..n {
            let sk = SecretKey::from_bytes(&r.get_bytes()?)?;
            copy.push(KeyPair { pk: sk.public().clone(), sk });
        }
        keys.push(copy);
    }
    r.done()?;
    Ok(keys)
}

fn s_to_bytes(s: &[Bits]) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-S-v1");
    w.put_u32(s.len() as u32);
    for bits in s {
        w.put_bits(bits);
    }
    w.finish()
}

fn s_from_bytes(bytes: &[u8]) -> Result<Vec<Bits>> {
    let mut r = Reader::tagged(bytes, "CVQC-S-v1")?;
    let count = r.get_u32()? as usize;
    let mut s = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        s.push(r.get_bits()?);
    }
    r.done()?;
    Ok(s)
}

/// Rebuilds a verifier setup from decrypted secrets. Bases are recovered
/// from the key kinds.
fn setup_from_secrets(
    params: ProtocolParams,
    keys: Vec<Vec<KeyPair>>,
    s: Vec<Bits>,
) -> VerifierSetup {
    let h = keys
        .iter()
        .map(|copy| {
            let mut bases = Bits::zero(copy.len());
            for (q, kp) in copy.iter().enumerate() {
                bases.set(q, kp.pk.kind() == FamilyKind::Ntcf);
            }
            bases
        })
        .collect();
    VerifierSetup { params, h, keys, s }
}

/// Runs the trusted setup: a protocol setup, FHE keys, a uniform pad with
/// its commitment, and encryptions of the verifier secrets for the prover.
pub fn setup_zk<F: Fhe, R: Rng>(
    fhe: &F,
    params: ProtocolParams,
    rng: &mut R,
) -> Result<ZkSetup> {
    let setups = protocol::setup(params, rng)?;
    let mut crs = [0u8; 32];
    rng.fill_bytes(&mut crs);
    let (hpk, hsk) = fhe.gen(rng);
    let beta = Bits::random(rng, params.n);
    let gamma = Bits::random(rng, params.n);
    let mut r1 = [0u8; 32];
    rng.fill_bytes(&mut r1);
    let xi = commit(&r1, &pad_bytes(&beta, &gamma));
    let csk = fhe.encrypt(&hpk, &sks_to_bytes(&setups.verifier.keys));
    let cs = fhe.encrypt(&hpk, &s_to_bytes(&setups.verifier.s));
    Ok(ZkSetup {
        verifier: ZkVerifierState {
            crs,
            setup: setups.verifier,
            hpk,
            hsk,
            xi,
        },
        prover: ZkProverState {
            crs,
            setup: setups.prover,
            hpk,
            csk,
            cs,
            beta,
            gamma,
            r1,
            xi,
        },
    })
}

/// Public digest of a zk session's setup, computable by both parties:
/// CRS, public keys, FHE public key, and the pad commitment.
fn public_setup_digest(crs: &[u8; 32], pks: &ProverSetup, hpk: &FheKey, xi: &Commitment) -> [u8; 32] {
    let mut w = Writer::tagged("CVQC-ZKPUB-v1");
    w.put_bytes(crs);
    w.put_bytes(&pks.setup_digest());
    w.put_bytes(&hpk.0);
    w.put_bytes(&xi.0);
    sha256(&w.finish())
}

impl ZkProverState {
    pub fn public_digest(&self) -> [u8; 32] {
        public_setup_digest(&self.crs, &self.setup, &self.hpk, &self.xi)
    }
}

impl ZkVerifierState {
    pub fn public_digest(&self) -> [u8; 32] {
        public_setup_digest(&self.crs, &self.setup.prover_view(), &self.hpk, &self.xi)
    }
}

// ---------------------------------------------------------------------------
// Session machinery

/// Where the challenge comes from after the verifier sees `(ξ, y)`:
/// an honest verifier flips coins, a malicious one computes, the
/// non-interactive variant hashes.
pub trait ChallengeSource {
    fn challenge(&mut self, view: &[u8], k: usize, rng: &mut dyn RngCore) -> Bits;
}

/// Honest verifier: uniform challenge, independent of the view.
pub struct UniformChallenge;

impl ChallengeSource for UniformChallenge {
    fn challenge(&mut self, _view: &[u8], k: usize, rng: &mut dyn RngCore) -> Bits {
        Bits::random(rng, k)
    }
}

/// A fixed challenge (adversarial or replayed).
pub struct FixedChallenge(pub Bits);

impl ChallengeSource for FixedChallenge {
    fn challenge(&mut self, _view: &[u8], k: usize, _rng: &mut dyn RngCore) -> Bits {
        assert_eq!(self.0.len(), k);
        self.0.clone()
    }
}

/// Hash-derived challenge over `(x, w, view)`, the non-interactive variant.
pub struct DerivedChallenge {
    pub x: Vec<u8>,
    pub w: Vec<u8>,
}

impl ChallengeSource for DerivedChallenge {
    fn challenge(&mut self, view: &[u8], k: usize, _rng: &mut dyn RngCore) -> Bits {
        crate::fiatshamir::derive_challenge(&self.x, &self.w, view, k)
    }
}

/// Canonical bytes of the verifier's pre-challenge view `(ξ, y)`.
pub fn view_bytes(xi: &Commitment, y: &[Vec<Bits>]) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-ZKVIEW-v1");
    w.put_bytes(&xi.0);
    w.put_bytes(&crate::fiatshamir::commitment_bytes(y));
    w.finish()
}

/// Stand-in for the prover's quantum memory. Classically simulating the
/// claw-state commitment requires the trapdoors (the physical prover holds
/// both preimages in superposition instead); this wrapper keeps that
/// bookkeeping out of [`ZkProverState`], whose fields carry the prover's
/// *classical* knowledge and are what the structural zero-knowledge checks
/// constrain.
pub struct QuantumSim {
    keys: Vec<Vec<KeyPair>>,
}

impl QuantumSim {
    pub fn new(vs: &VerifierSetup) -> Self {
        QuantumSim { keys: vs.keys.clone() }
    }
}

/// One wrapped session as the verifier records it.
#[derive(Clone, Debug, PartialEq)]
pub struct ZkTranscript {
    pub xi: Commitment,
    pub y: Vec<Vec<Bits>>,
    pub c: Bits,
    pub chi: Commitment,
    pub ce: Ciphertext,
}

/// Runs the prover side of a wrapped session: commits the padded witness,
/// gets a challenge for the view `(ξ, y)`, commits the response under `χ`,
/// and assembles the encrypted proof inside an FHE evaluation — the
/// statement's secret fields only ever exist under encryption from the
/// prover's perspective.
pub fn zk_prove<F: Fhe, N: Nizk, R: Rng>(
    fhe: &F,
    nizk: &N,
    instance: &ZxHamiltonian,
    st_p: &ZkProverState,
    quantum: &QuantumSim,
    witness: &Statevector,
    challenge: &mut dyn ChallengeSource,
    rng: &mut R,
) -> Result<ZkTranscript> {
    let params = st_p.setup.params;
    if instance.num_qubits() != params.n || witness.num_qubits() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "instance and witness must have n = {} qubits",
            params.n
        )));
    }
    if st_p.setup.pks.len() != params.copies()
        || st_p.setup.pks.iter().any(|copy| copy.len() != params.n)
        || quantum.keys.len() != params.copies()
    {
        return Err(Error::Protocol("setup shape does not match the parameters".into()));
    }

    // Pad the witness, then run the ordinary session on it.
    let mut padded = witness.clone();
    qprover::apply_pad(&mut padded, &st_p.beta, &st_p.gamma);

    let mut copies = Vec::with_capacity(params.copies());
    let mut y = Vec::with_capacity(params.copies());
    for copy_keys in &quantum.keys {
        let copy = qprover::commit(&padded, copy_keys, rng)?;
        y.push(copy.commitments().to_vec());
        copies.push(copy);
    }

    let c = challenge.challenge(&view_bytes(&st_p.xi, &y), params.k, rng);
    let u: Vec<CopyReply> = copies
        .into_iter()
        .enumerate()
        .map(|(m, copy)| {
            if c.get(m / params.r) {
                copy.measure_hadamard(rng)
            } else {
                copy.measure_test(rng)
            }
        })
        .collect();

    let mut r2 = [0u8; 32];
    rng.fill_bytes(&mut r2);
    let chi = commit(&r2, &replies_bytes(&u));

    // The proof circuit: decrypt trapdoors and term randomness, assemble
    // the statement and witness, prove. Runs under the FHE evaluation.
    let crs = st_p.crs;
    let xi = st_p.xi;
    let tau = LWitness {
        beta: st_p.beta.clone(),
        gamma: st_p.gamma.clone(),
        u: u.clone(),
        r1: st_p.r1,
        r2,
    };
    let circuit = |plain: &[Vec<u8>]| -> Vec<u8> {
        let keys = match sks_from_bytes(&plain[0]) {
            Ok(k) => k,
            Err(_) => return Vec::new(),
        };
        let s = match s_from_bytes(&plain[1]) {
            Ok(s) => s,
            Err(_) => return Vec::new(),
        };
        let x = LInstance {
            instance: instance.clone(),
            setup: setup_from_secrets(params, keys, s),
            xi,
            y: y.clone(),
            c: c.clone(),
            chi,
        };
        nizk.prove(&crs, &x, &tau).unwrap_or_default()
    };
    let ce = fhe.eval(&st_p.hpk, &circuit, &[&st_p.csk, &st_p.cs])?;

    Ok(ZkTranscript { xi, y, c, chi, ce })
}

/// Verifies a wrapped session: the transcript must carry the setup's pad
/// commitment, the ciphertext must decrypt under the verifier's FHE key,
/// and the decrypted proof must verify for the statement the verifier
/// assembles from its own secrets.
pub fn zk_verify<F: Fhe, N: Nizk>(
    fhe: &F,
    nizk: &N,
    instance: &ZxHamiltonian,
    st_v: &ZkVerifierState,
    t: &ZkTranscript,
) -> bool {
    if t.xi != st_v.xi {
        return false;
    }
    let proof = match fhe.decrypt(&st_v.hsk, &t.ce) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let x = LInstance {
        instance: instance.clone(),
        setup: st_v.setup.clone(),
        xi: t.xi,
        y: t.y.clone(),
        c: t.c.clone(),
        chi: t.chi,
    };
    nizk.verify(&st_v.crs, &x, &proof)
}

/// Produces a transcript with the same verifier-visible distribution as an
/// honest run — **without a witness state**; the signature has none. Works
/// from the trusted-party view of the setup (in the zero-knowledge
/// experiment the simulator runs the setup itself).
///
/// Returns the transcript together with the internal witness it assembled,
/// so tests can measure how often simulated transcripts land in `L`.
pub fn simulate<F: Fhe, N: Nizk, R: Rng>(
    fhe: &F,
    nizk: &N,
    instance: &ZxHamiltonian,
    zk: &ZkSetup,
    challenge: &mut dyn ChallengeSource,
    rng: &mut R,
) -> Result<(ZkTranscript, LWitness)> {
    let st_v = &zk.verifier;
    let st_p = &zk.prover;
    let params = st_v.setup.params;
    if instance.num_qubits() != params.n {
        return Err(Error::DimensionMismatch("instance size mismatch".into()));
    }
    // Signs the padded verdict will check against.
    let conj = instance.conjugate_pad(&st_p.beta, &st_p.gamma)?;

    // Commit phase: uniform (b, x) per qubit, except that copies whose
    // sampled term is ZZ-consistent get the term parity the padded verdict
    // wants — for injective keys the committed bit *is* the decoded
    // outcome. Pairwise parity is invisible in per-qubit marginals.
    let copies = params.copies();
    let mut committed: Vec<Vec<(bool, Bits)>> = Vec::with_capacity(copies);
    let mut y: Vec<Vec<Bits>> = Vec::with_capacity(copies);
    for m in 0..copies {
        let term = conj.sample_term(&st_v.setup.s[m])?;
        let consistent = term.is_consistent(&st_v.setup.h[m]);
        let mut copy: Vec<(bool, Bits)> = Vec::with_capacity(params.n);
        for q in 0..params.n {
            let pk = &st_p.setup.pks[m][q];
            let mut b = rng.gen::<bool>();
            if consistent && !st_v.setup.h[m].get(term.i) && q == term.j {
                // ZZ-consistent: fix the pair parity to satisfy the
                // conjugated sign.
                b = copy[term.i].0 ^ (term.sign > 0);
            }
            let x = pk.sample_domain(rng);
            copy.push((b, x));
        }
        y.push(
            copy.iter()
                .enumerate()
                .map(|(q, (b, x))| st_p.setup.pks[m][q].eval(*b, x))
                .collect::<Result<Vec<_>>>()?,
        );
        committed.push(copy);
    }

    let c = challenge.challenge(&view_bytes(&st_p.xi, &y), params.k, rng);

    // Response phase.
    let mut u = Vec::with_capacity(copies);
    for m in 0..copies {
        let group_hadamard = c.get(m / params.r);
        let term = conj.sample_term(&st_v.setup.s[m])?;
        let consistent = term.is_consistent(&st_v.setup.h[m]);
        let xx_consistent = consistent && st_v.setup.h[m].get(term.i);
        // Target outcomes for an XX-consistent copy: uniform bit for one
        // term qubit, partner fixed by the conjugated sign.
        let e_i = rng.gen::<bool>();
        let e_j = e_i ^ (term.sign > 0);
        let qubits = (0..params.n)
            .map(|q| {
                let (b, x) = &committed[m][q];
                if !group_hadamard {
                    return QubitReply { bit: *b, string: x.clone() };
                }
                if !st_v.setup.h[m].get(q) {
                    // Injective key: the verdict ignores this reply; match
                    // the honest marginal (uniform bit and string).
                    return QubitReply {
                        bit: rng.gen(),
                        string: Bits::random(rng, x.len()),
                    };
                }
                // Claw-free key: nontrivial t, then solve the decoding
                // identity for the wanted (or uniform) outcome.
                let t = Bits::random_nonzero(rng, x.len());
                let (x0, x1) = st_v.setup.keys[m][q]
                    .sk
                    .claw(&y[m][q])
                    .expect("commitments are honest images");
                let o = t.dot(&x0.xor(&x1));
                let e = if xx_consistent && q == term.i {
                    e_i
                } else if xx_consistent && q == term.j {
                    e_j
                } else {
                    rng.gen::<bool>()
                };
                QubitReply { bit: e ^ o, string: t }
            })
            .collect();
        u.push(CopyReply { qubits });
    }

    let mut r2 = [0u8; 32];
    rng.fill_bytes(&mut r2);
    let chi = commit(&r2, &replies_bytes(&u));
    let x = LInstance {
        instance: instance.clone(),
        setup: st_v.setup.clone(),
        xi: st_p.xi,
        y,
        c,
        chi,
    };
    let ce = fhe.encrypt(&st_v.hpk, &nizk.simulate(&st_v.crs, &x));
    let tau = LWitness {
        beta: st_p.beta.clone(),
        gamma: st_p.gamma.clone(),
        u,
        r1: st_p.r1,
        r2,
    };
    let t = ZkTranscript { xi: x.xi, y: x.y.clone(), c: x.c.clone(), chi, ce };
    Ok((t, tau))
}

/// Non-interactive wrapped session: the challenge is derived from the
/// instance digest, the public setup digest, and the view `(ξ, y)`.
pub fn fs_zk_prove<F: Fhe, N: Nizk, R: Rng>(
    fhe: &F,
    nizk: &N,
    instance: &ZxHamiltonian,
    st_p: &ZkProverState,
    quantum: &QuantumSim,
    witness: &Statevector,
    rng: &mut R,
) -> Result<ZkTranscript> {
    let mut challenge = DerivedChallenge {
        x: instance.digest().to_vec(),
        w: st_p.public_digest().to_vec(),
    };
    zk_prove(fhe, nizk, instance, st_p, quantum, witness, &mut challenge, rng)
}

/// Verifies a non-interactive wrapped session: re-derives the challenge
/// and then verifies as usual.
pub fn fs_zk_verify<F: Fhe, N: Nizk>(
    fhe: &F,
    nizk: &N,
    instance: &ZxHamiltonian,
    st_v: &ZkVerifierState,
    t: &ZkTranscript,
) -> bool {
    let expected = crate::fiatshamir::derive_challenge(
        &instance.digest(),
        &st_v.public_digest(),
        &view_bytes(&t.xi, &t.y),
        st_v.setup.params.k,
    );
    t.c == expected && zk_verify(fhe, nizk, instance, st_v, t)
}
