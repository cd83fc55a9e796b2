//! Literal full-register prover simulation, used as a reference oracle.
//!
//! Where the compact prover tracks claws and collapsed bits, this module
//! carries explicit amplitudes over every `(bit, preimage)` register — one
//! `1 + width` bit block per qubit — and implements the committed-state
//! measurements directly:
//!
//! * image measurement: Born-sample `y` from the pushforward of the register
//!   distribution through the key, then project onto its preimages;
//! * test query: computational-basis measurement of all registers;
//! * Hadamard query: Walsh–Hadamard transform on every register bit, then a
//!   computational-basis measurement, redrawn until every claw-free qubit's
//!   `t` is nonzero (the honest convention; the joint `t` marginal is
//!   uniform, so redrawing implements exact conditioning).
//!
//! Cost is `2^(n + Σ widths)` amplitudes, so this only runs at toy sizes and
//! only on the mock backend (it must enumerate full bitstring domains). Its
//! sole purpose is to validate the compact prover: the two must produce
//! identical joint distributions of commitments and replies.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::funcfam::{Backend, KeyPair};
use crate::qprover::{CopyReply, QubitReply};
use crate::statevec::Statevector;

const MAX_TOTAL_BITS: usize = 20;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One committed copy with explicit registers.
pub struct FullRegisterCopy {
    amps: Vec<Complex64>,
    total_bits: usize,
    offsets: Vec<usize>,
    widths: Vec<usize>,
    claw_free: Vec<bool>,
    commitments: Vec<Bits>,
}

fn field(index: usize, total_bits: usize, pos: usize, len: usize) -> usize {
    (index >> (total_bits - pos - len)) & ((1 << len) - 1)
}

fn born_sample<R: Rng + ?Sized>(amps: &[Complex64], rng: &mut R) -> usize {
    let r: f64 = rng.gen();
    let mut cum = 0.0;
    for (i, a) in amps.iter().enumerate() {
        cum += a.norm_sqr();
        if r < cum {
            return i;
        }
    }
    amps.len() - 1
}

/// Commits one copy of `witness` with explicit function-family registers.
pub fn commit_full<R: Rng + ?Sized>(
    witness: &Statevector,
    keys: &[KeyPair],
    rng: &mut R,
) -> Result<FullRegisterCopy> {
    let n = witness.num_qubits();
    if keys.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} keys for a {n}-qubit witness",
            keys.len()
        )));
    }
    if keys.iter().any(|k| k.pk.backend() != Backend::Mock) {
        return Err(Error::ParameterRange(
            "full-register simulation requires the mock backend".into(),
        ));
    }
    let widths: Vec<usize> = keys.iter().map(|k| k.pk.domain_bits()).collect();
    let mut offsets = Vec::with_capacity(n);
    let mut total_bits = 0;
    for w in &widths {
        offsets.push(total_bits);
        total_bits += 1 + w;
    }
    if total_bits > MAX_TOTAL_BITS {
        return Err(Error::ParameterRange(format!(
            "full registers need {total_bits} bits; at most {MAX_TOTAL_BITS} supported"
        )));
    }

    // ψ ⊗ (uniform preimage superposition per qubit).
    let dim = 1usize << total_bits;
    let x_cells: f64 = widths.iter().map(|w| (1u64 << w) as f64).product();
    let scale = 1.0 / x_cells.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (i, amp) in amps.iter_mut().enumerate() {
        let mut logical = 0usize;
        for q in 0..n {
            logical = (logical << 1) | field(i, total_bits, offsets[q], 1);
        }
        *amp = witness.amps()[logical] * scale;
    }

    let mut copy = FullRegisterCopy {
        amps,
        total_bits,
        offsets,
        widths,
        claw_free: keys
            .iter()
            .map(|k| k.pk.kind() == crate::funcfam::FamilyKind::Ntcf)
            .collect(),
        commitments: Vec::with_capacity(n),
    };

    // Measure each qubit's image register in turn.
    for (q, kp) in keys.iter().enumerate() {
        let w = copy.widths[q];
        let image_bits = kp.pk.image_bits();
        // Pushforward of the register distribution through the key.
        let mut pushforward: BTreeMap<u64, f64> = BTreeMap::new();
        let mut images = vec![0u64; 1 << (1 + w)];
        for bx in 0..(1usize << (1 + w)) {
            let b = bx >> w == 1;
            let x = Bits::from_u64((bx & ((1 << w) - 1)) as u64, w);
            images[bx] = kp.pk.eval(b, &x)?.to_u64();
        }
        for (i, a) in copy.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                let bx = field(i, copy.total_bits, copy.offsets[q], 1 + w);
                *pushforward.entry(images[bx]).or_insert(0.0) += p;
            }
        }
        let r: f64 = rng.gen();
        let mut cum = 0.0;
        let mut chosen = *pushforward.keys().next_back().unwrap();
        for (&y, &p) in &pushforward {
            cum += p;
            if r < cum {
                chosen = y;
                break;
            }
        }
        // Project onto the chosen image's preimages and renormalize.
        let mut kept = 0.0;
        for (i, a) in copy.amps.iter_mut().enumerate() {
            let bx = field(i, copy.total_bits, copy.offsets[q], 1 + w);
            if images[bx] == chosen {
                kept += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let norm = kept.sqrt();
        for a in copy.amps.iter_mut() {
            *a /= norm;
        }
        copy.commitments.push(Bits::from_u64(chosen, image_bits));
    }
    Ok(copy)
}

impl FullRegisterCopy {
    /// Per-qubit images `y`.
    pub fn commitments(&self) -> &[Bits] {
        &self.commitments
    }

    fn decode(&self, index: usize) -> CopyReply {
        let qubits = (0..self.offsets.len())
            .map(|q| {
                let bit = field(index, self.total_bits, self.offsets[q], 1) == 1;
                let x = field(index, self.total_bits, self.offsets[q] + 1, self.widths[q]);
                QubitReply {
                    bit,
                    string: Bits::from_u64(x as u64, self.widths[q]),
                }
            })
            .collect();
        CopyReply { qubits }
    }

    /// Computational-basis measurement of every register.
    pub fn measure_test<R: Rng + ?Sized>(self, rng: &mut R) -> CopyReply {
        self.decode(born_sample(&self.amps, rng))
    }

    /// Hadamard-basis measurement of every register.
    pub fn measure_hadamard<R: Rng + ?Sized>(mut self, rng: &mut R) -> CopyReply {
        // Walsh–Hadamard butterfly on each of the total_bits register bits.
        for p in 0..self.total_bits {
            let stride = 1usize << (self.total_bits - 1 - p);
            for i in 0..self.amps.len() {
                if i & stride == 0 {
                    let lo = self.amps[i];
                    let hi = self.amps[i | stride];
                    self.amps[i] = (lo + hi) * FRAC_1_SQRT_2;
                    self.amps[i | stride] = (lo - hi) * FRAC_1_SQRT_2;
                }
            }
        }
        // Condition on nonzero t for claw-free qubits (uniform marginal, so
        // redrawing terminates quickly and implements exact conditioning).
        for _ in 0..100_000 {
            let index = born_sample(&self.amps, rng);
            let reply = self.decode(index);
            let trivial = reply
                .qubits
                .iter()
                .zip(&self.claw_free)
                .any(|(qr, &cf)| cf && qr.string.is_zero());
            if !trivial {
                return reply;
            }
        }
        unreachable!("nonzero-t conditioning failed to terminate");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::chi_square_two_sample_p;
    use crate::funcfam::{self, FamilyKind};
    use crate::qprover;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Folds a commitment list and reply into one joint-outcome key.
    fn outcome_key(ys: &[Bits], reply: &CopyReply) -> u64 {
        let mut k = 0u64;
        for (y, qr) in ys.iter().zip(&reply.qubits) {
            k = (k << y.len()) | y.to_u64();
            k = (k << 1) | qr.bit as u64;
            k = (k << qr.string.len()) | qr.string.to_u64();
        }
        k
    }

    fn compare_distributions<FA, FB>(mut run_a: FA, mut run_b: FB, trials: usize) -> f64
    where
        FA: FnMut(&mut ChaCha8Rng) -> u64,
        FB: FnMut(&mut ChaCha8Rng) -> u64,
    {
        let mut rng_a = ChaCha8Rng::seed_from_u64(0xA);
        let mut rng_b = ChaCha8Rng::seed_from_u64(0xB);
        let mut bins: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
        for _ in 0..trials {
            bins.entry(run_a(&mut rng_a)).or_insert((0.0, 0.0)).0 += 1.0;
            bins.entry(run_b(&mut rng_b)).or_insert((0.0, 0.0)).1 += 1.0;
        }
        let a: Vec<f64> = bins.values().map(|v| v.0).collect();
        let b: Vec<f64> = bins.values().map(|v| v.1).collect();
        chi_square_two_sample_p(&a, &b)
    }

    fn witness() -> Statevector {
        // Generic coefficients: nonuniform diagonal plus coherences.
        Statevector::from_reals(&[1.0, 2.0, -2.0, 1.0]).unwrap()
    }

    #[test]
    fn rejects_non_mock_backends_and_oversize_registers() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let lwe = vec![
            funcfam::gen(funcfam::Backend::ToyLwe, FamilyKind::Ntcf, 16, &mut rng),
            funcfam::gen(funcfam::Backend::ToyLwe, FamilyKind::Ntif, 16, &mut rng),
        ];
        assert!(commit_full(&witness(), &lwe, &mut rng).is_err());
        let wide: Vec<_> = (0..2)
            .map(|_| funcfam::mock_with_width(FamilyKind::Ntcf, 24, &mut rng))
            .collect();
        assert!(commit_full(&witness(), &wide, &mut rng).is_err());
    }

    #[test]
    fn commitments_verify_under_test_round() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let keys = vec![
                funcfam::mock_with_width(FamilyKind::Ntcf, 2, &mut rng),
                funcfam::mock_with_width(FamilyKind::Ntif, 2, &mut rng),
            ];
            let copy = commit_full(&witness(), &keys, &mut rng).unwrap();
            let ys = copy.commitments().to_vec();
            let reply = copy.measure_test(&mut rng);
            for q in 0..2 {
                assert!(keys[q].pk.chk(reply.qubits[q].bit, &reply.qubits[q].string, &ys[q]));
            }
        }
    }

    #[test]
    fn test_round_distribution_matches_compact_prover() {
        let mut key_rng = ChaCha8Rng::seed_from_u64(22);
        let keys = vec![
            funcfam::mock_with_width(FamilyKind::Ntcf, 1, &mut key_rng),
            funcfam::mock_with_width(FamilyKind::Ntif, 1, &mut key_rng),
        ];
        let w = witness();
        let p = compare_distributions(
            |rng| {
                let c = commit_full(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_test(rng))
            },
            |rng| {
                let c = qprover::commit(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_test(rng))
            },
            10_000,
        );
        assert!(p > 1e-3, "test-round distributions differ (p = {p:.2e})");
    }

    #[test]
    fn hadamard_round_distribution_matches_compact_prover() {
        let mut key_rng = ChaCha8Rng::seed_from_u64(23);
        let keys = vec![
            funcfam::mock_with_width(FamilyKind::Ntcf, 1, &mut key_rng),
            funcfam::mock_with_width(FamilyKind::Ntif, 1, &mut key_rng),
        ];
        let w = witness();
        let p = compare_distributions(
            |rng| {
                let c = commit_full(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_hadamard(rng))
            },
            |rng| {
                let c = qprover::commit(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_hadamard(rng))
            },
            10_000,
        );
        assert!(p > 1e-3, "Hadamard-round distributions differ (p = {p:.2e})");
    }

    #[test]
    fn all_claw_free_hadamard_distribution_matches_compact_prover() {
        // Entangled all-X-basis configuration with width 2: exercises the
        // joint Hadamard measurement across live qubits.
        let mut key_rng = ChaCha8Rng::seed_from_u64(24);
        let keys = vec![
            funcfam::mock_with_width(FamilyKind::Ntcf, 2, &mut key_rng),
            funcfam::mock_with_width(FamilyKind::Ntcf, 2, &mut key_rng),
        ];
        let w = Statevector::from_reals(&[1.0, 1.0, 1.0, -1.0]).unwrap();
        let p = compare_distributions(
            |rng| {
                let c = commit_full(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_hadamard(rng))
            },
            |rng| {
                let c = qprover::commit(&w, &keys, rng).unwrap();
                let ys = c.commitments().to_vec();
                outcome_key(&ys, &c.measure_hadamard(rng))
            },
            10_000,
        );
        assert!(p > 1e-3, "joint Hadamard distributions differ (p = {p:.2e})");
    }

    #[test]
    fn plus_witness_decodes_to_zero_in_both_simulators() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let keys = vec![
            funcfam::mock_with_width(FamilyKind::Ntcf, 2, &mut rng),
            funcfam::mock_with_width(FamilyKind::Ntcf, 2, &mut rng),
        ];
        let plus = Statevector::uniform(2);
        for _ in 0..50 {
            for full in [true, false] {
                let (ys, reply) = if full {
                    let c = commit_full(&plus, &keys, &mut rng).unwrap();
                    let ys = c.commitments().to_vec();
                    (ys, c.measure_hadamard(&mut rng))
                } else {
                    let c = qprover::commit(&plus, &keys, &mut rng).unwrap();
                    let ys = c.commitments().to_vec();
                    (ys, c.measure_hadamard(&mut rng))
                };
                for q in 0..2 {
                    let (x0, x1) = keys[q].sk.claw(&ys[q]).unwrap();
                    let qr = &reply.qubits[q];
                    assert!(!qr.string.is_zero());
                    assert!(!(qr.bit ^ qr.string.dot(&x0.xor(&x1))), "X-basis bit must be 0");
                }
            }
        }
    }
}
