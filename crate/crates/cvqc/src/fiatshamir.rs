//! Removing the challenge message with a hash-derived challenge.
//!
//! The interactive session has a public-coin verifier: its only message
//! after setup is the uniform challenge `c`. Deriving `c` from a hash of
//! everything the prover is already bound to — the instance, the setup's
//! public keys, and the commitment message —
//!
//! ```text
//! c = first k bits of SHA-256("CVQC-FS-v1" ∥ x ∥ w ∥ y)
//! ```
//!
//! turns the session into a single prover message that anyone can verify
//! offline. Soundness degrades by a factor governed by how often a prover
//! can re-roll `y`: for a `q`-query adversary with interactive advantage
//! `ε`, the non-interactive advantage stays above
//! `ε / (2(2q+1)(2q+3)) − 1/((2q+1)|Y|)` ([`fs_bound`]). The loss is
//! witnessed constructively by [`reduction_sim`], which runs an adversary
//! against a lazily sampled oracle, intercepts one query at random, and
//! splices an externally supplied challenge into the oracle at that query's
//! commitment — the measure-and-reprogram argument specialized to
//! classical adversaries, where "measuring" a query is just reading it.

use std::collections::HashMap;

use rand::{Rng, RngCore};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::hamiltonian::ZxHamiltonian;
use crate::protocol::{verdict, Prover, VerifierSetup};
use crate::qprover::{CopyReply, QubitReply};
use crate::wire::{sha256, Reader, Writer};

use sha2::{Digest, Sha256};

const CHALLENGE_TAG: &str = "CVQC-FS-v1";

/// Truncates a 32-byte digest to its first `k` bits.
fn digest_prefix(digest: [u8; 32], k: usize) -> Bits {
    let mut c = Bits::zero(k);
    for i in 0..k {
        c.set(i, digest[i / 8] >> (7 - i % 8) & 1 == 1);
    }
    c
}

/// Derives the challenge from the instance digest `x`, the setup digest
/// `w`, and the canonical commitment bytes `y`. All three inputs are
/// length-prefixed before hashing, so no two distinct triples collide as
/// byte strings. `k` must be at most 256.
pub fn derive_challenge(x: &[u8], w: &[u8], y: &[u8], k: usize) -> Bits {
    assert!(k <= 256, "a single digest supplies at most 256 challenge bits");
    let mut h = Sha256::new();
    h.update(CHALLENGE_TAG.as_bytes());
    for part in [x, w, y] {
        h.update((part.len() as u64).to_be_bytes());
        h.update(part);
    }
    digest_prefix(h.finalize().into(), k)
}

/// Canonical byte encoding of a commitment message, the `y` input to
/// [`derive_challenge`].
pub fn commitment_bytes(y: &[Vec<Bits>]) -> Vec<u8> {
    let mut w = Writer::tagged("CVQC-FSY-v1");
    w.put_u32(y.len() as u32);
    for copy in y {
        w.put_u32(copy.len() as u32);
        for bits in copy {
            w.put_bits(bits);
        }
    }
    w.finish()
}

/// A lazily sampled random function `(x, y) → {0,1}^k` with support for
/// reprogramming by commitment: [`RandomOracle::reprogram`] overrides the
/// answer on *every* input whose `y`-component matches, leaving all other
/// inputs untouched. Base answers come from a salted hash, so distinct
/// oracles are independent random functions.
pub struct RandomOracle {
    salt: [u8; 32],
    k: usize,
    overrides: HashMap<Vec<u8>, Bits>,
}

impl RandomOracle {
    /// A fresh oracle with `k`-bit answers.
    pub fn new<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        assert!(k <= 256);
        let mut salt = [0u8; 32];
        rng.fill_bytes(&mut salt);
        RandomOracle { salt, k, overrides: HashMap::new() }
    }

    pub fn challenge_bits(&self) -> usize {
        self.k
    }

    /// The oracle's answer on `(x, y)`.
    pub fn query(&self, x: &[u8], y: &[u8]) -> Bits {
        if let Some(c) = self.overrides.get(y) {
            return c.clone();
        }
        let mut h = Sha256::new();
        h.update(b"CVQC-RO-v1");
        h.update(self.salt);
        for part in [x, y] {
            h.update((part.len() as u64).to_be_bytes());
            h.update(part);
        }
        digest_prefix(h.finalize().into(), self.k)
    }

    /// Overrides the answer on all inputs with commitment component `y`.
    pub fn reprogram(&mut self, y: &[u8], c: Bits) {
        assert_eq!(c.len(), self.k);
        self.overrides.insert(y.to_vec(), c);
    }
}

/// A non-interactive session record: the bound digests, the prover's two
/// messages, the derived challenge, and the decision.
#[derive(Clone, Debug, PartialEq)]
pub struct FsTranscript {
    /// Instance digest.
    pub x: [u8; 32],
    /// Setup (public-key) digest.
    pub w: [u8; 32],
    pub y: Vec<Vec<Bits>>,
    pub c: Bits,
    pub u: Vec<CopyReply>,
    pub decision: bool,
}

impl FsTranscript {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-FST-v1");
        w.put_bytes(&self.x);
        w.put_bytes(&self.w);
        w.put_bytes(&commitment_bytes(&self.y));
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

    pub fn to_bytes(&self) -> Vec<u8> {
        self.canonical_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::tagged(bytes, "CVQC-FST-v1")?;
        let fixed = |v: Vec<u8>| -> Result<[u8; 32]> {
            v.try_into()
                .map_err(|_| Error::Encoding("digest fields are 32 bytes".into()))
        };
        let x = fixed(r.get_bytes()?)?;
        let w = fixed(r.get_bytes()?)?;
        let y_bytes = r.get_bytes()?;
        let mut yr = Reader::tagged(&y_bytes, "CVQC-FSY-v1")?;
        let copies = yr.get_u32()? as usize;
        if copies > 1_000_000 {
            return Err(Error::Encoding("unreasonable copy count".into()));
        }
        let mut y = Vec::with_capacity(copies);
        for _ in 0..copies {
            let qubits = yr.get_u32()? as usize;
            let mut copy = Vec::with_capacity(qubits.min(4096));
            for _ in 0..qubits {
                copy.push(yr.get_bits()?);
            }
            y.push(copy);
        }
        yr.done()?;
        let c = r.get_bits()?;
        let replies = r.get_u32()? as usize;
        if replies > 1_000_000 {
            return Err(Error::Encoding("unreasonable reply count".into()));
        }
        let mut u = Vec::with_capacity(replies);
        for _ in 0..replies {
            let qubits = r.get_u32()? as usize;
            let mut reply = Vec::with_capacity(qubits.min(4096));
            for _ in 0..qubits {
                let bit = r.get_bool()?;
                let string = r.get_bits()?;
                reply.push(QubitReply { bit, string });
            }
            u.push(CopyReply { qubits: reply });
        }
        let decision = r.get_bool()?;
        r.done()?;
        Ok(FsTranscript { x, w, y, c, u, decision })
    }

    /// Number of flippable bit positions across the semantic fields
    /// (`x`, `w`, `y`, `c`, `u`, `decision`), in that order.
    pub fn bit_positions(&self) -> usize {
        let y_bits: usize = self.y.iter().flatten().map(Bits::len).sum();
        let u_bits: usize = self
            .u
            .iter()
            .flat_map(|r| r.qubits.iter())
            .map(|q| 1 + q.string.len())
            .sum();
        256 + 256 + y_bits + self.c.len() + u_bits + 1
    }

    /// The transcript with semantic bit `index` flipped; positions are
    /// ordered as in [`FsTranscript::bit_positions`]. Used by tamper
    /// diagnostics.
    pub fn with_flipped_bit(&self, index: usize) -> FsTranscript {
        let mut t = self.clone();
        let mut i = index;
        if i < 256 {
            t.x[i / 8] ^= 1 << (7 - i % 8);
            return t;
        }
        i -= 256;
        if i < 256 {
            t.w[i / 8] ^= 1 << (7 - i % 8);
            return t;
        }
        i -= 256;
        for copy in &mut t.y {
            for bits in copy {
                if i < bits.len() {
                    bits.flip(i);
                    return t;
                }
                i -= bits.len();
            }
        }
        if i < t.c.len() {
            t.c.flip(i);
            return t;
        }
        i -= t.c.len();
        for reply in &mut t.u {
            for q in &mut reply.qubits {
                if i == 0 {
                    q.bit = !q.bit;
                    return t;
                }
                i -= 1;
                if i < q.string.len() {
                    q.string.flip(i);
                    return t;
                }
                i -= q.string.len();
            }
        }
        assert_eq!(i, 0, "bit index out of range");
        t.decision = !t.decision;
        t
    }
}

/// Produces a non-interactive transcript: commit, derive the challenge
/// from `(x, w, y)`, respond, record the verdict.
pub fn fs_prove<R: Rng>(
    instance: &ZxHamiltonian,
    vs: &VerifierSetup,
    prover: &mut dyn Prover,
    rng: &mut R,
) -> FsTranscript {
    let y = prover.commit(rng);
    let x = instance.digest();
    let w = vs.setup_digest();
    let c = derive_challenge(&x, &w, &commitment_bytes(&y), vs.params.k);
    let u = prover.respond(&c, rng);
    let decision = verdict(instance, vs, &y, &c, &u);
    FsTranscript { x, w, y, c, u, decision }
}

/// Checks a stored transcript end to end: the digests must match the
/// verifier's own instance and setup, the challenge must equal the derived
/// one, and the recorded decision must equal the verdict recomputed from
/// the stored messages. Accepts only transcripts that pass all of that
/// *and* whose verdict accepts.
pub fn fs_verify(instance: &ZxHamiltonian, vs: &VerifierSetup, t: &FsTranscript) -> bool {
    if t.x != instance.digest() || t.w != vs.setup_digest() {
        return false;
    }
    if t.c != derive_challenge(&t.x, &t.w, &commitment_bytes(&t.y), vs.params.k) {
        return false;
    }
    let recomputed = verdict(instance, vs, &t.y, &t.c, &t.u);
    recomputed == t.decision && recomputed
}

/// Lower bound on the non-interactive advantage of a `q`-query adversary
/// whose interactive advantage is `eps`, over a commitment space of size
/// `y_space`: `eps / (2(2q+1)(2q+3)) − 1/((2q+1)·y_space)`.
pub fn fs_bound(q: u32, y_space: f64, eps: f64) -> f64 {
    let q = q as f64;
    eps / (2.0 * (2.0 * q + 1.0) * (2.0 * q + 3.0)) - 1.0 / ((2.0 * q + 1.0) * y_space)
}

/// A classical adversary against the random oracle: declares its query
/// budget, then runs with oracle access and outputs a commitment and a
/// response. The oracle closure errors once the budget is exceeded.
pub trait ClassicalAdversary {
    /// Maximum number of oracle queries (`q`).
    fn queries(&self) -> usize;
    /// Runs to completion, returning the final commitment `y` and response
    /// `m`. Oracle errors must be propagated.
    fn run(
        &mut self,
        oracle: &mut dyn FnMut(&[u8], &[u8]) -> Result<Bits>,
        rng: &mut dyn RngCore,
    ) -> Result<(Vec<u8>, Bits)>;
}

/// Everything observable about one reduction run.
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    /// Commitment forwarded to the external verifier.
    pub y: Vec<u8>,
    /// The adversary's final response.
    pub m: Bits,
    /// Whether `valid(m, theta)` held and the run did not abort.
    pub success: bool,
    /// The adversary's final commitment differed from the intercepted one.
    pub aborted: bool,
    /// Which query was intercepted (`q` means none — the output was used).
    pub intercept: usize,
    /// Whether the intercepted query itself already saw the reprogrammed
    /// answer.
    pub reprogram_before: bool,
}

/// Runs the measure-and-reprogram reduction on a classical adversary.
///
/// Draws `i` uniform in `0..=q` and a coin. Queries before the `i`-th are
/// answered by the base oracle. At the `i`-th query (or at the adversary's
/// output, when `i = q` or the adversary stops early) its commitment
/// component is forwarded externally, the answer `theta` comes back, and
/// the oracle is reprogrammed on that commitment — before answering the
/// intercepted query if the coin says so, after it otherwise. The run
/// aborts if the adversary's final commitment differs from the intercepted
/// one. Success means `valid(m, theta)` on a non-aborted run.
pub fn reduction_sim<R: Rng>(
    adversary: &mut dyn ClassicalAdversary,
    theta: &Bits,
    valid: &dyn Fn(&Bits, &Bits) -> bool,
    rng: &mut R,
) -> Result<ReductionOutcome> {
    let q = adversary.queries();
    let k = theta.len();
    let mut oracle = RandomOracle::new(k, rng);
    let intercept = rng.gen_range(0..=q);
    let reprogram_before = rng.gen::<bool>();
    let mut count = 0usize;
    let mut intercepted: Option<Vec<u8>> = None;

    let (final_y, m) = {
        let oracle_ref = &mut oracle;
        let intercepted_ref = &mut intercepted;
        let count_ref = &mut count;
        let mut closure = |x: &[u8], y: &[u8]| -> Result<Bits> {
            if *count_ref >= q {
                return Err(Error::Protocol(format!(
                    "adversary exceeded its declared budget of {q} queries"
                )));
            }
            let index = *count_ref;
            *count_ref += 1;
            if index == intercept && intercepted_ref.is_none() {
                *intercepted_ref = Some(y.to_vec());
                if reprogram_before {
                    oracle_ref.reprogram(y, theta.clone());
                    return Ok(oracle_ref.query(x, y));
                }
                let answer = oracle_ref.query(x, y);
                oracle_ref.reprogram(y, theta.clone());
                return Ok(answer);
            }
            Ok(oracle_ref.query(x, y))
        };
        adversary.run(&mut closure, rng)?
    };

    let (y_star, aborted) = match intercepted {
        Some(y_star) => {
            let aborted = y_star != final_y;
            (y_star, aborted)
        }
        // No query was intercepted (i = q, or the adversary finished
        // early): the output commitment is the one forwarded.
        None => (final_y.clone(), false),
    };
    let success = !aborted && valid(&m, theta);
    Ok(ReductionOutcome {
        y: y_star,
        m,
        success,
        aborted,
        intercept,
        reprogram_before,
    })
}
