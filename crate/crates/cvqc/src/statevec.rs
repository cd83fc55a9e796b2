//! Dense statevector simulation for small qubit registers.
//!
//! Amplitudes are indexed so that qubit 0 is the most significant bit of the
//! basis index: `|b_0 b_1 … b_{n-1}⟩` lives at index `b_0·2^{n-1} + … +
//! b_{n-1}`. Registers here stay small (the protocol caps witnesses at a
//! dozen qubits), so everything is straightforward dense arithmetic.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Maximum register size for dense simulation.
pub const MAX_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-9;

/// A normalized pure state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The computational basis state with the given index.
    pub fn basis(n: usize, index: usize) -> Self {
        assert!(n <= MAX_QUBITS && index < 1 << n);
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[index] = Complex64::ONE;
        Statevector { n, amps }
    }

    /// `|+⟩^{⊗n}`, the uniform superposition.
    pub fn uniform(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Statevector {
            n,
            amps: vec![a; dim],
        }
    }

    /// Builds a state from raw amplitudes; the vector must have length `2^n`
    /// for some `n ≤ 12` and unit norm within `1e-9`.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "statevector length {dim} is not a power of two"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::ParameterRange(format!(
                "{n} qubits exceeds the dense-simulation cap of {MAX_QUBITS}"
            )));
        }
        let sv = Statevector { n, amps };
        let norm = sv.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "statevector norm {norm} is not 1 within {NORM_TOL}"
            )));
        }
        Ok(sv)
    }

    /// Builds from real amplitudes (normalizing them), a convenience for
    /// eigenvector output and hand-written test states.
    pub fn from_reals(amps: &[f64]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DimensionMismatch("zero vector".into()));
        }
        Self::from_amps(amps.iter().map(|&a| Complex64::new(a / norm, 0.0)).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Extracts bit `q` (qubit `q`) of a basis index.
    #[inline]
    pub fn bit(&self, index: usize, q: usize) -> bool {
        (index >> (self.n - 1 - q)) & 1 == 1
    }

    #[inline]
    fn qmask(&self, q: usize) -> usize {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        1 << (self.n - 1 - q)
    }

    /// Pauli X on qubit `q`.
    pub fn apply_x(&mut self, q: usize) {
        let mask = self.qmask(q);
        for idx in 0..self.amps.len() {
            if idx & mask == 0 {
                self.amps.swap(idx, idx | mask);
            }
        }
    }

    /// Pauli Z on qubit `q`.
    pub fn apply_z(&mut self, q: usize) {
        let mask = self.qmask(q);
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if idx & mask != 0 {
                *a = -*a;
            }
        }
    }

    /// Hadamard on qubit `q`.
    pub fn apply_h(&mut self, q: usize) {
        let mask = self.qmask(q);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for idx in 0..self.amps.len() {
            if idx & mask == 0 {
                let lo = self.amps[idx];
                let hi = self.amps[idx | mask];
                self.amps[idx] = s * (lo + hi);
                self.amps[idx | mask] = s * (lo - hi);
            }
        }
    }

    /// Hadamard on every qubit.
    pub fn apply_h_all(&mut self) {
        for q in 0..self.n {
            self.apply_h(q);
        }
    }

    /// ⟨ψ|Z_i Z_j|ψ⟩.
    pub fn expect_zz(&self, i: usize, j: usize) -> f64 {
        let (mi, mj) = (self.qmask(i), self.qmask(j));
        self.amps
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let sign = if ((idx & mi != 0) as u8) ^ ((idx & mj != 0) as u8) == 1 {
                    -1.0
                } else {
                    1.0
                };
                sign * a.norm_sqr()
            })
            .sum()
    }

    /// ⟨ψ|X_i X_j|ψ⟩.
    pub fn expect_xx(&self, i: usize, j: usize) -> f64 {
        let flip = self.qmask(i) | self.qmask(j);
        self.amps
            .iter()
            .enumerate()
            .map(|(idx, a)| (a.conj() * self.amps[idx ^ flip]).re)
            .sum()
    }

    /// ⟨φ|ψ⟩ with `self` as ψ.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        assert_eq!(self.n, other.n);
        other
            .amps
            .iter()
            .zip(&self.amps)
            .map(|(phi, psi)| phi.conj() * psi)
            .sum()
    }

    /// Probability that qubit `q` measures to 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let mask = self.qmask(q);
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Measures qubit `q` in the computational basis, collapsing the state.
    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        let p1 = self.prob_one(q);
        let outcome = rng.gen::<f64>() < p1;
        self.project_qubit(q, outcome);
        outcome
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Panics if the
    /// outcome has zero probability (callers measure first).
    pub fn project_qubit(&mut self, q: usize, outcome: bool) {
        let mask = self.qmask(q);
        let mut kept = 0.0f64;
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if (idx & mask != 0) != outcome {
                *a = Complex64::ZERO;
            } else {
                kept += a.norm_sqr();
            }
        }
        assert!(kept > 0.0, "projection onto a zero-probability outcome");
        let scale = 1.0 / kept.sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
    }

    /// Measures the whole register in the computational basis. The state is
    /// consumed conceptually; callers that need the collapsed state can use
    /// [`Statevector::basis`] with the returned index.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut u = rng.gen::<f64>();
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if u < p {
                return idx;
            }
            u -= p;
        }
        // Floating-point slack: fall back to the last nonzero amplitude.
        self.amps
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .expect("state has no support")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell_pair() -> Statevector {
        // (|00⟩ + |11⟩)/√2
        Statevector::from_reals(&[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn singlet() -> Statevector {
        // (|01⟩ - |10⟩)/√2
        Statevector::from_reals(&[0.0, 1.0, -1.0, 0.0]).unwrap()
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let mut sv = Statevector::basis(2, 0);
        sv.apply_x(0);
        // X on qubit 0 maps |00⟩ to |10⟩ = index 2.
        assert_eq!(sv.amps()[2], Complex64::ONE);
    }

    #[test]
    fn x_z_h_algebra() {
        let mut sv = Statevector::basis(1, 0);
        sv.apply_h(0);
        assert!((sv.amps()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        sv.apply_z(0);
        sv.apply_h(0);
        // HZH = X, so the net effect on |0⟩ is |1⟩.
        assert!((sv.amps()[1].re - 1.0).abs() < 1e-12);

        // H is an involution.
        let mut t = bell_pair();
        t.apply_h_all();
        t.apply_h_all();
        assert!((t.inner(&bell_pair()).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_expectations_on_reference_states() {
        let bell = bell_pair();
        assert!((bell.expect_zz(0, 1) - 1.0).abs() < 1e-12);
        assert!((bell.expect_xx(0, 1) - 1.0).abs() < 1e-12);

        let s = singlet();
        assert!((s.expect_zz(0, 1) + 1.0).abs() < 1e-12);
        assert!((s.expect_xx(0, 1) + 1.0).abs() < 1e-12);

        let z = Statevector::basis(2, 0);
        assert!((z.expect_zz(0, 1) - 1.0).abs() < 1e-12);
        assert!(z.expect_xx(0, 1).abs() < 1e-12);
    }

    #[test]
    fn measurement_collapses_entanglement() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut sv = bell_pair();
            let a = sv.measure_qubit(0, &mut rng);
            let b = sv.measure_qubit(1, &mut rng);
            assert_eq!(a, b, "Bell pair outcomes must agree");
        }
    }

    #[test]
    fn measure_all_matches_born_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sv = Statevector::from_reals(&[3.0, 0.0, 0.0, 4.0]).unwrap();
        let trials = 20_000;
        let ones = (0..trials)
            .filter(|_| sv.measure_all(&mut rng) == 3)
            .count() as f64;
        let p = ones / trials as f64;
        // Expected 16/25 = 0.64; 3σ ≈ 0.0102.
        assert!((p - 0.64).abs() < 0.011, "p={p}");
    }

    #[test]
    fn malformed_vectors_rejected() {
        assert!(Statevector::from_amps(vec![Complex64::ONE; 3]).is_err());
        assert!(Statevector::from_amps(vec![Complex64::ONE; 4]).is_err());
        assert!(Statevector::from_amps(vec![Complex64::ONE]).is_ok());
    }
}
