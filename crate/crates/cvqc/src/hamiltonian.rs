//! Two-local XX/ZZ Hamiltonian instances and their energy tests.
//!
//! An instance is `H = Σ_{i<j} J_ij (X_i X_j + Z_i Z_j)` over `n` qubits,
//! normalized so that `2 Σ |J_ij| = 1`, together with promise thresholds
//! `a < b`: yes-instances have ground energy ≤ `a`, no-instances ≥ `b`.
//!
//! For verification the Hamiltonian is handled as a list of weighted Pauli
//! terms: each coupling contributes a `Z_i Z_j` and an `X_i X_j` term, both
//! with weight `|J_ij|` and sign `sgn(J_ij)`. The weights form a probability
//! distribution π, and a verifier checks energy by sampling a term `S ~ π`
//! and measuring whether the prover's state satisfies the two-outcome test
//! `(1 - sgn·S)/2`: a state ψ passes with probability `(1 - ⟨ψ|H|ψ⟩)/2`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::statevec::{Statevector, MAX_QUBITS};
use crate::wire::{sha256, Writer};

/// Flavor of a two-qubit Pauli term. Canonical term order lists `ZZ` before
/// `XX` within a qubit pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli2 {
    ZZ,
    XX,
}

/// One weighted term `sign · P_i P_j` with sampling weight `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub i: usize,
    pub j: usize,
    pub pauli: Pauli2,
    /// Sampling weight `|J_ij|`; weights over all terms sum to 1.
    pub weight: f64,
    /// `+1` or `-1`, the sign the term carries in the Hamiltonian.
    pub sign: i8,
}

impl Term {
    /// True when basis choice `h` (one bit per qubit, 1 = X basis) lets this
    /// term be evaluated: an XX term needs the X basis on both of its qubits,
    /// a ZZ term the Z basis on both.
    pub fn is_consistent(&self, h: &Bits) -> bool {
        let (hi, hj) = (h.get(self.i), h.get(self.j));
        match self.pauli {
            Pauli2::XX => hi && hj,
            Pauli2::ZZ => !hi && !hj,
        }
    }

    /// Whether decoded outcome bits at the term's two qubits pass the energy
    /// test: the measured eigenvalue `(-1)^{e_i ⊕ e_j}` must equal `-sign`,
    /// i.e. `e_i ⊕ e_j = (1 + sign)/2`.
    pub fn satisfied(&self, e_i: bool, e_j: bool) -> bool {
        (e_i ^ e_j) == (self.sign > 0)
    }
}

/// A normalized two-local XX/ZZ Hamiltonian with promise thresholds.
#[derive(Clone, Debug)]
pub struct ZxHamiltonian {
    n: usize,
    terms: Vec<Term>,
    /// Yes-instances promise ground energy ≤ `a`.
    pub a: f64,
    /// No-instances promise ground energy ≥ `b`.
    pub b: f64,
}

impl ZxHamiltonian {
    /// Builds an instance from couplings `(i, j, J_ij)`, rescaling them so
    /// `2 Σ |J_ij| = 1`. Thresholds `a < b` are taken on the normalized
    /// energy scale (the spectrum lies in `[-1, 1]`).
    ///
    /// Requirements: `1 ≤ n ≤ 12`, indices `i < j < n` with no duplicate
    /// pairs, and at least one nonzero coupling.
    pub fn new(n: usize, couplings: &[(usize, usize, f64)], a: f64, b: f64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidInstance(format!(
                "qubit count {n} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, w) in couplings {
            if i >= j || j >= n {
                return Err(Error::InvalidInstance(format!(
                    "coupling ({i},{j}) must satisfy i < j < n"
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "coupling ({i},{j}) has non-finite weight"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate coupling for pair ({i},{j})"
                )));
            }
        }
        let total: f64 = couplings.iter().map(|&(_, _, w)| w.abs()).sum();
        if total == 0.0 {
            return Err(Error::InvalidInstance(
                "all couplings are zero; the instance has no terms".into(),
            ));
        }
        // Thresholds are stated on the normalized scale (energies in [-1, 1]).
        if !(a < b) {
            return Err(Error::InvalidInstance(format!(
                "thresholds need a < b, got a={a}, b={b}"
            )));
        }

        let mut sorted: Vec<_> = couplings
            .iter()
            .copied()
            .filter(|&(_, _, w)| w != 0.0)
            .collect();
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut terms = Vec::with_capacity(2 * sorted.len());
        for (i, j, w) in sorted {
            let weight = w.abs() / (2.0 * total);
            let sign = if w > 0.0 { 1 } else { -1 };
            terms.push(Term { i, j, pauli: Pauli2::ZZ, weight, sign });
            terms.push(Term { i, j, pauli: Pauli2::XX, weight, sign });
        }
        Ok(ZxHamiltonian { n, terms, a, b })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Promise gap `b - a`.
    pub fn gap(&self) -> f64 {
        self.b - self.a
    }

    /// Terms in canonical order: ascending `(i, j)`, `ZZ` before `XX`.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Deterministically samples a term from the weight distribution π using
    /// randomness `s` (at least 64 bits). The first 64 bits of `s`, read as a
    /// big-endian fixed-point fraction `u ∈ [0,1)`, select a term by inverse
    /// CDF over the canonical order; a `u` that lands exactly on a CDF
    /// boundary resolves to the lower term index.
    pub fn sample_term(&self, s: &Bits) -> Result<Term> {
        if s.len() < 64 {
            return Err(Error::DimensionMismatch(format!(
                "term-sampling randomness needs ≥ 64 bits, got {}",
                s.len()
            )));
        }
        let u = s.slice(0, 64).to_u64() as f64 / 2f64.powi(64);
        let mut cum = 0.0;
        for t in &self.terms {
            cum += t.weight;
            if u <= cum {
                return Ok(*t);
            }
        }
        // Cumulative rounding can leave the final boundary just below 1.
        Ok(*self.terms.last().expect("instances always have terms"))
    }

    /// ⟨ψ|H|ψ⟩ for the normalized Hamiltonian. The state must have `n`
    /// qubits; the result lies in [-1, 1].
    pub fn energy(&self, state: &Statevector) -> Result<f64> {
        if state.num_qubits() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "state has {} qubits, instance has {}",
                state.num_qubits(),
                self.n
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| {
                let e = match t.pauli {
                    Pauli2::ZZ => state.expect_zz(t.i, t.j),
                    Pauli2::XX => state.expect_xx(t.i, t.j),
                };
                t.sign as f64 * t.weight * e
            })
            .sum())
    }

    /// Dense matrix of the Hamiltonian in the computational basis (real
    /// symmetric; XX and ZZ terms have no imaginary parts).
    pub fn matrix(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for t in &self.terms {
            let c = t.sign as f64 * t.weight;
            let mi = 1usize << (self.n - 1 - t.i);
            let mj = 1usize << (self.n - 1 - t.j);
            match t.pauli {
                Pauli2::ZZ => {
                    for idx in 0..dim {
                        let sign = if ((idx & mi != 0) as u8) ^ ((idx & mj != 0) as u8) == 1 {
                            -1.0
                        } else {
                            1.0
                        };
                        m[(idx, idx)] += c * sign;
                    }
                }
                Pauli2::XX => {
                    let flip = mi | mj;
                    for idx in 0..dim {
                        m[(idx, idx ^ flip)] += c;
                    }
                }
            }
        }
        m
    }

    /// Exact ground energy and a ground state, by dense diagonalization.
    pub fn ground(&self) -> (f64, Statevector) {
        let eig = SymmetricEigen::new(self.matrix());
        let (argmin, &emin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .expect("nonempty spectrum");
        let col = eig.eigenvectors.column(argmin);
        let state = Statevector::from_reals(col.as_slice()).expect("eigenvector is unit norm");
        (emin, state)
    }

    /// All eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.matrix());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Probability that a single energy-test round (sample a term from π,
    /// measure it) accepts the given state: `(1 - ⟨ψ|H|ψ⟩)/2`.
    pub fn energy_test_probability(&self, state: &Statevector) -> Result<f64> {
        Ok((1.0 - self.energy(state)?) / 2.0)
    }

    /// Conjugates the instance by the Pauli pad `X^β Z^γ`: ZZ terms flip sign
    /// where `β_i ⊕ β_j = 1`, XX terms where `γ_i ⊕ γ_j = 1`. Weights and the
    /// spectrum are unchanged.
    pub fn conjugate_pad(&self, beta: &Bits, gamma: &Bits) -> Result<ZxHamiltonian> {
        if beta.len() != self.n || gamma.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "pad strings must have {} bits each, got {}/{}",
                self.n,
                beta.len(),
                gamma.len()
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let flip = match t.pauli {
                    Pauli2::ZZ => beta.get(t.i) ^ beta.get(t.j),
                    Pauli2::XX => gamma.get(t.i) ^ gamma.get(t.j),
                };
                Term {
                    sign: if flip { -t.sign } else { t.sign },
                    ..*t
                }
            })
            .collect();
        Ok(ZxHamiltonian {
            n: self.n,
            terms,
            a: self.a,
            b: self.b,
        })
    }

    /// Canonical byte encoding (term list, thresholds); input to the instance
    /// digest.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-H-v1");
        w.put_u32(self.n as u32);
        w.put_u32(self.terms.len() as u32);
        for t in &self.terms {
            w.put_u32(t.i as u32);
            w.put_u32(t.j as u32);
            w.put_u8(match t.pauli {
                Pauli2::ZZ => 0,
                Pauli2::XX => 1,
            });
            w.put_f64(t.weight);
            w.put_u8(if t.sign > 0 { 1 } else { 0 });
        }
        w.put_f64(self.a);
        w.put_f64(self.b);
        w.finish()
    }

    /// SHA-256 digest of the canonical encoding.
    pub fn digest(&self) -> [u8; 32] {
        sha256(&self.canonical_bytes())
    }
}

/// The two-qubit reference instance `H = (X_0X_1 + Z_0Z_1)/2` with the given
/// thresholds. Its spectrum is `{-1, 0, 0, 1}` and its ground state the
/// singlet `(|01⟩ - |10⟩)/√2`.
pub fn reference_instance(a: f64, b: f64) -> ZxHamiltonian {
    ZxHamiltonian::new(2, &[(0, 1, 1.0)], a, b).expect("reference instance is valid")
}

/// Samples a yes-instance: uniform couplings on every qubit pair, `a` a
/// hair above the actual ground energy, and `b = a + gap`. Since thresholds
/// live on the normalized scale with `b ≤ 0` required for a meaningful
/// test, a gap too wide for the sampled spectrum is an error (try a
/// smaller one).
pub fn random_instance<R: Rng + ?Sized>(n: usize, gap: f64, rng: &mut R) -> Result<ZxHamiltonian> {
    if !(gap > 0.0 && gap <= 1.0) {
        return Err(Error::ParameterRange(format!(
            "promise gap must lie in (0, 1], got {gap}"
        )));
    }
    let mut couplings = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut w = 0.0;
            while w == 0.0 {
                w = rng.gen_range(-1.0..1.0);
            }
            couplings.push((i, j, w));
        }
    }
    // Thresholds depend on the spectrum; probe with placeholders first.
    let probe = ZxHamiltonian::new(n, &couplings, -2.0, -1.5)?;
    let a = probe.ground().0 + 1e-9;
    let b = a + gap;
    if b > 0.0 {
        return Err(Error::ParameterRange(format!(
            "ground energy {a:.4} leaves room for a gap of at most {:.4}",
            -a
        )));
    }
    ZxHamiltonian::new(n, &couplings, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h2() -> ZxHamiltonian {
        reference_instance(-0.9, -0.5)
    }

    #[test]
    fn normalization_and_validation() {
        // A single coupling of 2.0 rescales to weight 0.5 per term.
        let h = ZxHamiltonian::new(2, &[(0, 1, 2.0)], -0.9, -0.5).unwrap();
        assert_eq!(h.terms().len(), 2);
        for t in h.terms() {
            assert!((t.weight - 0.5).abs() < 1e-15);
            assert_eq!(t.sign, 1);
        }
        let total: f64 = h.terms().iter().map(|t| t.weight).sum();
        assert!((total - 1.0).abs() < 1e-15);

        assert!(ZxHamiltonian::new(2, &[], -0.9, -0.5).is_err());
        assert!(ZxHamiltonian::new(2, &[(0, 1, 0.0)], -0.9, -0.5).is_err());
        assert!(ZxHamiltonian::new(2, &[(1, 0, 1.0)], -0.9, -0.5).is_err());
        assert!(ZxHamiltonian::new(2, &[(0, 1, 1.0), (0, 1, 1.0)], -0.9, -0.5).is_err());
        assert!(ZxHamiltonian::new(2, &[(0, 2, 1.0)], -0.9, -0.5).is_err());
        assert!(ZxHamiltonian::new(2, &[(0, 1, 1.0)], -0.5, -0.5).is_err());
        assert!(ZxHamiltonian::new(13, &[(0, 1, 1.0)], -0.9, -0.5).is_err());
    }

    #[test]
    fn random_instances_are_yes_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 2..=4 {
            let h = random_instance(n, 0.3, &mut rng).unwrap();
            let (e0, ground) = h.ground();
            assert!(e0 <= h.a && h.a < h.b && h.b <= 0.0);
            assert!((h.b - h.a - 0.3).abs() < 1e-12);
            assert!((h.energy(&ground).unwrap() - e0).abs() < 1e-9);
        }
        assert!(random_instance(2, 0.0, &mut rng).is_err());
        assert!(random_instance(2, 1.1, &mut rng).is_err());
    }

    #[test]
    fn canonical_term_order() {
        let h = ZxHamiltonian::new(3, &[(1, 2, -1.0), (0, 1, 1.0)], -0.9, -0.5).unwrap();
        let t = h.terms();
        assert_eq!(
            t.iter().map(|t| (t.i, t.j, t.pauli, t.sign)).collect::<Vec<_>>(),
            vec![
                (0, 1, Pauli2::ZZ, 1),
                (0, 1, Pauli2::XX, 1),
                (1, 2, Pauli2::ZZ, -1),
                (1, 2, Pauli2::XX, -1),
            ]
        );
        for term in t {
            assert!((term.weight - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn sample_term_boundaries() {
        let h = h2();
        // u = 0 selects the first term.
        let s0 = Bits::zero(64);
        assert_eq!(h.sample_term(&s0).unwrap().pauli, Pauli2::ZZ);
        // u = 0.75 lands inside the XX slot.
        let s75 = Bits::from_u64(0b11 << 62, 64);
        assert_eq!(h.sample_term(&s75).unwrap().pauli, Pauli2::XX);
        // u = 0.5 sits exactly on the ZZ/XX boundary and resolves low.
        let s50 = Bits::from_u64(1 << 63, 64);
        assert_eq!(h.sample_term(&s50).unwrap().pauli, Pauli2::ZZ);
        // Short randomness is an error.
        assert!(h.sample_term(&Bits::zero(63)).is_err());
        // Extra bits beyond 64 are ignored.
        let long = Bits::zero(64).concat(&Bits::from_u64(0b1, 1));
        assert_eq!(h.sample_term(&long).unwrap().pauli, Pauli2::ZZ);
    }

    #[test]
    fn sample_term_marginal_matches_weights() {
        // Two couplings of unequal strength: weights 1/6, 1/6, 1/3, 1/3.
        let h = ZxHamiltonian::new(3, &[(0, 1, 1.0), (1, 2, -2.0)], -0.9, -0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let trials = 100_000usize;
        let mut counts = [0usize; 4];
        for _ in 0..trials {
            let s = Bits::random(&mut rng, 64);
            let t = h.sample_term(&s).unwrap();
            let slot = h
                .terms()
                .iter()
                .position(|x| (x.i, x.j, x.pauli) == (t.i, t.j, t.pauli))
                .unwrap();
            counts[slot] += 1;
        }
        let expected = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
        let p = crate::analysis::chi_square_gof_p(
            &counts.iter().map(|&c| c as f64).collect::<Vec<_>>(),
            &expected.iter().map(|&e| e * trials as f64).collect::<Vec<_>>(),
        );
        assert!(p > 0.001, "term marginal diverges from weights (p = {p})");
    }

    #[test]
    fn consistency_rules_and_rate() {
        let h = h2();
        let zz = h.terms()[0];
        let xx = h.terms()[1];
        assert!(zz.is_consistent(&Bits::from_u64(0b00, 2)));
        assert!(!zz.is_consistent(&Bits::from_u64(0b01, 2)));
        assert!(!zz.is_consistent(&Bits::from_u64(0b11, 2)));
        assert!(xx.is_consistent(&Bits::from_u64(0b11, 2)));
        assert!(!xx.is_consistent(&Bits::from_u64(0b10, 2)));

        // A two-local term is consistent with a uniform basis string exactly
        // 1/4 of the time.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let big = ZxHamiltonian::new(4, &[(1, 3, 1.0)], -0.9, -0.5).unwrap();
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| {
                let basis = Bits::random(&mut rng, 4);
                let t = big.sample_term(&Bits::random(&mut rng, 64)).unwrap();
                t.is_consistent(&basis)
            })
            .count();
        let rate = hits as f64 / trials as f64;
        assert!((rate - 0.25).abs() < 0.01, "consistency rate {rate}");
    }

    #[test]
    fn satisfaction_truth_table() {
        let mut plus = h2().terms()[0];
        plus.sign = 1;
        let mut minus = plus;
        minus.sign = -1;
        // sign +1 wants odd parity, sign -1 wants even parity.
        assert!(plus.satisfied(false, true));
        assert!(plus.satisfied(true, false));
        assert!(!plus.satisfied(false, false));
        assert!(!plus.satisfied(true, true));
        assert!(minus.satisfied(false, false));
        assert!(minus.satisfied(true, true));
        assert!(!minus.satisfied(false, true));
    }

    #[test]
    fn energy_against_explicit_matrix() {
        // Hand-built matrix of (XX + ZZ)/2 in the computational basis.
        let m = [
            [0.5, 0.0, 0.0, 0.5],
            [0.0, -0.5, 0.5, 0.0],
            [0.0, 0.5, -0.5, 0.0],
            [0.5, 0.0, 0.0, 0.5],
        ];
        let h = h2();
        let built = h.matrix();
        for r in 0..4 {
            for c in 0..4 {
                assert!((built[(r, c)] - m[r][c]).abs() < 1e-15);
            }
        }

        // ⟨00|H|00⟩ = 1/2 from the ZZ term alone.
        let zero = Statevector::basis(2, 0);
        assert!((h.energy(&zero).unwrap() - 0.5).abs() < 1e-12);
        // MF acceptance of |00⟩ is (1 - 1/2)/2 = 1/4.
        assert!((h.energy_test_probability(&zero).unwrap() - 0.25).abs() < 1e-12);

        // Random states: term-wise energy equals the quadratic form ψᵀMψ.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let raw: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 0.05).collect();
            let psi = Statevector::from_reals(&raw).unwrap();
            let quad: f64 = (0..4)
                .map(|r| {
                    (0..4)
                        .map(|c| psi.amps()[r].re * m[r][c] * psi.amps()[c].re)
                        .sum::<f64>()
                })
                .sum();
            assert!((h.energy(&psi).unwrap() - quad).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_of_reference_instance() {
        let h = h2();
        let (e0, psi) = h.ground();
        // Spectrum {-1, 0, 0, 1}; ground state is the singlet.
        assert!((e0 + 1.0).abs() < 1e-12);
        let spec = h.spectrum();
        let expect = [-1.0, 0.0, 0.0, 1.0];
        for (got, want) in spec.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "spectrum {spec:?}");
        }
        let singlet = Statevector::from_reals(&[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!((psi.inner(&singlet).norm() - 1.0).abs() < 1e-9);
        // Ground-state MF acceptance is (1 - (-1))/2 = 1.
        assert!((h.energy_test_probability(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_test_probability_matches_simulated_rounds() {
        // Monte-Carlo oracle: play literal energy-test rounds (sample a term,
        // measure it in its own basis) against a non-trivial state.
        let h = h2();
        let psi = Statevector::from_reals(&[0.6, 0.0, 0.8, 0.0]).unwrap();
        let p_formula = h.energy_test_probability(&psi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let trials = 10_000;
        let mut hits = 0;
        for _ in 0..trials {
            let t = h.sample_term(&Bits::random(&mut rng, 64)).unwrap();
            let mut s = psi.clone();
            if t.pauli == Pauli2::XX {
                s.apply_h_all();
            }
            let idx = s.measure_all(&mut rng);
            let e_i = s.bit(idx, t.i);
            let e_j = s.bit(idx, t.j);
            if t.satisfied(e_i, e_j) {
                hits += 1;
            }
        }
        let p_emp = hits as f64 / trials as f64;
        let sigma = (p_formula * (1.0 - p_formula) / trials as f64).sqrt();
        assert!(
            (p_emp - p_formula).abs() < 3.0 * sigma + 1e-9,
            "empirical {p_emp} vs formula {p_formula}"
        );
    }

    #[test]
    fn conjugation_flips_signs_and_preserves_spectrum() {
        let h = h2();
        // β = 10: Z_0 Z_1 anticommutes with X_0, so the ZZ sign flips.
        let beta = Bits::from_u64(0b10, 2);
        let gamma = Bits::zero(2);
        let hc = h.conjugate_pad(&beta, &gamma).unwrap();
        assert_eq!(hc.terms()[0].sign, -1); // ZZ flipped
        assert_eq!(hc.terms()[1].sign, 1); // XX unchanged

        // Identity pad is a no-op.
        let hid = h.conjugate_pad(&Bits::zero(2), &Bits::zero(2)).unwrap();
        assert_eq!(hid.terms(), h.terms());

        // Conjugation is unitary: spectra agree for random pads/instances.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4);
            let mut couplings = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen::<bool>() {
                        couplings.push((i, j, rng.gen_range(-1.0..1.0)));
                    }
                }
            }
            if couplings.iter().all(|&(_, _, w)| w == 0.0) || couplings.is_empty() {
                couplings.push((0, 1, 1.0));
            }
            let h = ZxHamiltonian::new(n, &couplings, -0.9, -0.5).unwrap();
            let beta = Bits::random(&mut rng, n);
            let gamma = Bits::random(&mut rng, n);
            let hc = h.conjugate_pad(&beta, &gamma).unwrap();
            for (x, y) in h.spectrum().iter().zip(hc.spectrum()) {
                assert!((x - y).abs() < 1e-9);
            }
            // Weights never change.
            for (t, tc) in h.terms().iter().zip(hc.terms()) {
                assert_eq!(t.weight, tc.weight);
            }
        }
    }

    #[test]
    fn digest_is_stable_and_sign_sensitive() {
        let d1 = h2().digest();
        let d2 = h2().digest();
        assert_eq!(d1, d2);
        let flipped = h2()
            .conjugate_pad(&Bits::from_u64(0b10, 2), &Bits::zero(2))
            .unwrap();
        assert_ne!(d1, flipped.digest());
    }
}
