//! Monte-Carlo estimators, canonical cheating strategies, and numeric
//! checks of the closed-form bounds.
//!
//! Soundness claims quantify over all provers, which no test suite can
//! enumerate. What experiments *can* do is pin the floor and the formulas:
//!
//! * [`estimate`] Monte-Carlos the acceptance rate of a prover model —
//!   honest, or one of the [`StrategyKind`] classical cheats — against any
//!   session mode. Canonical cheats survive the k-group challenge at the
//!   `2^{−k}` floor, which [`soundness_curve`] tabulates against the
//!   reference column.
//! * [`hoeffding_bound`] evaluates the tail bound `2·e^{−r g²/16}` on the
//!   error of an r-copy energy-test round at promise gap `g = (b−a)/2`;
//!   [`energy_test_rate`] measures the game it bounds.
//! * [`lemma3_check`] samples random projector tuples and verifies
//!   `⟨ψ|Σ A_i|ψ⟩ ≤ 1 + (Σ_{i<j} δ_ij)^{1/2}` with
//!   `δ_ij = ⟨ψ|A_iA_j + A_jA_i|ψ⟩` — the overlap inequality the
//!   parallel-repetition argument leans on.
//!
//! Classical strategies are built from [`ProverSetup`] alone: the type
//! carries public keys only, so no cheat can read a trapdoor or a
//! statevector without failing to compile.
//!
//! Estimation is embarrassingly parallel. Each trial derives its own seed
//! from `(seed, index)`, so reports are bit-identical regardless of thread
//! count; `CVQC_THREADS` caps the worker pool.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::funcfam::PublicKey;
use crate::hamiltonian::ZxHamiltonian;
use crate::protocol::{
    self, group_threshold, run_ctq, run_interactive, HonestProver, ProtocolParams, Prover,
    ProverSetup,
};
use crate::qprover::{CopyReply, QubitReply};
use crate::statevec::Statevector;

// ---------------------------------------------------------------------------
// Statistics helpers

/// Upper-tail probability of a chi-squared statistic with `dof` degrees of
/// freedom.
pub fn chi_square_sf(stat: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof).expect("positive dof");
    1.0 - dist.cdf(stat.max(0.0))
}

/// Goodness-of-fit p-value for observed counts against expected counts.
/// Bins with expected count zero must have observed zero (else p = 0).
pub fn chi_square_gof_p(observed: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    let mut stat = 0.0;
    let mut dof = -1.0f64;
    for (&o, &e) in observed.iter().zip(expected) {
        if e <= 0.0 {
            if o > 0.0 {
                return 0.0;
            }
            continue;
        }
        stat += (o - e) * (o - e) / e;
        dof += 1.0;
    }
    chi_square_sf(stat, dof.max(1.0))
}

/// Two-sample chi-squared homogeneity p-value: are two sets of counts over
/// the same bins drawn from one distribution? Uses the standard
/// `(a√(N_b/N_a) - b√(N_a/N_b))² / (a + b)` statistic with `bins - 1` degrees
/// of freedom (empty joint bins are skipped).
pub fn chi_square_two_sample_p(counts_a: &[f64], counts_b: &[f64]) -> f64 {
    assert_eq!(counts_a.len(), counts_b.len());
    let na: f64 = counts_a.iter().sum();
    let nb: f64 = counts_b.iter().sum();
    assert!(na > 0.0 && nb > 0.0);
    let (ra, rb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut stat = 0.0;
    let mut dof = -1.0f64;
    for (&a, &b) in counts_a.iter().zip(counts_b) {
        if a + b == 0.0 {
            continue;
        }
        let d = a * ra - b * rb;
        stat += d * d / (a + b);
        dof += 1.0;
    }
    chi_square_sf(stat, dof.max(1.0))
}

// ---------------------------------------------------------------------------
// Closed-form bounds

/// Tail bound `2·e^{−r g²/16}` on the error probability of an `r`-copy
/// energy-test round at promise gap `g = (b−a)/2`: both the completeness
/// error on a yes-instance and the acceptance probability on a no-instance
/// sit below it.
pub fn hoeffding_bound(r: usize, g: f64) -> f64 {
    assert!(r >= 1, "r must be at least 1");
    assert!(g > 0.0 && g <= 1.0, "gap must lie in (0, 1]");
    2.0 * (-(r as f64) * g * g / 16.0).exp()
}

// ---------------------------------------------------------------------------
// Deterministic trial seeding and the worker pool

/// Derives the per-trial seed from the report seed and the trial index
/// (splitmix64 finalizer), so results never depend on thread scheduling.
fn trial_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds the trial worker pool, honoring the `CVQC_THREADS` cap.
fn trial_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = std::env::var("CVQC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        builder = builder.num_threads(t.max(1));
    }
    builder.build().expect("worker pool")
}

// ---------------------------------------------------------------------------
// Canonical classical cheating strategies

/// The canonical classical cheats. Each prepares some copies *openable*
/// (images of sampled preimages, so test queries pass) and the rest junk,
/// then answers from its plan regardless of the challenge — which is all a
/// committed classical prover can do, and why each survives at the
/// `2^{−k}` floor at best.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Every copy openable; always answers with openings, as if every
    /// group had asked the test query.
    TestOnly,
    /// Guesses the challenge at commit time: groups guessed "test" are
    /// prepared openable, groups guessed "Hadamard" are junk.
    GuessChallenge,
    /// Alternates openable and junk copies within every group, hedging
    /// both ways and winning neither.
    HalfSplit,
    /// Commits uniform noise and answers uniform noise.
    RandomNoise,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::TestOnly,
        StrategyKind::GuessChallenge,
        StrategyKind::HalfSplit,
        StrategyKind::RandomNoise,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::TestOnly => "test-only",
            StrategyKind::GuessChallenge => "guess-challenge",
            StrategyKind::HalfSplit => "half-split",
            StrategyKind::RandomNoise => "random-noise",
        }
    }

    pub fn from_name(name: &str) -> Option<StrategyKind> {
        StrategyKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// A classical prover following one of the canonical cheats. Constructed
/// from the prover-side setup only — public keys, never trapdoors — and it
/// holds no statevector; both exclusions are structural.
pub struct ClassicalStrategy {
    kind: StrategyKind,
    params: ProtocolParams,
    pks: Vec<Vec<PublicKey>>,
    /// Per copy: `Some` openable data `(b, x)` per qubit, `None` junk.
    plan: Vec<Option<Vec<(bool, Bits)>>>,
}

impl ClassicalStrategy {
    pub fn new(kind: StrategyKind, ps: &ProverSetup) -> Self {
        ClassicalStrategy {
            kind,
            params: ps.params,
            pks: ps.pks.clone(),
            plan: Vec::new(),
        }
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    fn uniform_reply(&self, m: usize, q: usize, rng: &mut dyn RngCore) -> QubitReply {
        QubitReply {
            bit: rng.gen(),
            string: Bits::random(rng, self.pks[m][q].domain_bits()),
        }
    }
}

impl Prover for ClassicalStrategy {
    fn commit(&mut self, rng: &mut dyn RngCore) -> Vec<Vec<Bits>> {
        let copies = self.params.copies();
        // Which copies get openable commitments.
        let openable: Vec<bool> = match self.kind {
            StrategyKind::TestOnly => vec![true; copies],
            StrategyKind::GuessChallenge => {
                let guess = Bits::random(rng, self.params.k);
                (0..copies).map(|m| !guess.get(m / self.params.r)).collect()
            }
            StrategyKind::HalfSplit => (0..copies).map(|m| m % 2 == 0).collect(),
            StrategyKind::RandomNoise => vec![false; copies],
        };
        let mut y = Vec::with_capacity(copies);
        self.plan.clear();
        for (m, &open) in openable.iter().enumerate() {
            if open {
                let mut data = Vec::with_capacity(self.params.n);
                let mut images = Vec::with_capacity(self.params.n);
                for pk in &self.pks[m] {
                    let b = rng.gen::<bool>();
                    let x = pk.sample_domain(rng);
                    images.push(pk.eval(b, &x).expect("sampled point lies in the domain"));
                    data.push((b, x));
                }
                self.plan.push(Some(data));
                y.push(images);
            } else {
                self.plan.push(None);
                y.push(
                    self.pks[m]
                        .iter()
                        .map(|pk| Bits::random(rng, pk.image_bits()))
                        .collect(),
                );
            }
        }
        y
    }

    fn respond(&mut self, _c: &Bits, rng: &mut dyn RngCore) -> Vec<CopyReply> {
        // The plan was fixed at commit time; the challenge changes nothing,
        // which is exactly the bind the test/Hadamard split creates.
        (0..self.params.copies())
            .map(|m| CopyReply {
                qubits: (0..self.params.n)
                    .map(|q| match &self.plan[m] {
                        Some(data) => {
                            let (b, x) = &data[q];
                            QubitReply { bit: *b, string: x.clone() }
                        }
                        None => self.uniform_reply(m, q, rng),
                    })
                    .collect(),
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimation

/// Which session the estimator runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SessionMode {
    /// Commit / random challenge / respond / verdict.
    Interactive,
    /// Challenge derived by hashing, verified from the transcript.
    FiatShamir,
    /// Bare quantumness test: decode success only, no term statistics.
    Ctq,
}

impl SessionMode {
    pub fn name(&self) -> &'static str {
        match self {
            SessionMode::Interactive => "interactive",
            SessionMode::FiatShamir => "fiat-shamir",
            SessionMode::Ctq => "ctq",
        }
    }

    pub fn from_name(name: &str) -> Option<SessionMode> {
        [SessionMode::Interactive, SessionMode::FiatShamir, SessionMode::Ctq]
            .into_iter()
            .find(|m| m.name() == name)
    }
}

/// The prover the estimator plays: honest (ground-state witness; uniform
/// superposition in CTQ mode) or a canonical classical cheat.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProverModel {
    Honest,
    Cheat(StrategyKind),
}

impl ProverModel {
    pub fn name(&self) -> String {
        match self {
            ProverModel::Honest => "honest".into(),
            ProverModel::Cheat(k) => k.name().into(),
        }
    }
}

/// Optional pass/fail comparison attached to a report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundCheck {
    /// The rate must not exceed the value (soundness-style).
    AtMost(f64),
    /// The rate must reach the value (completeness-style).
    AtLeast(f64),
}

/// Result of a Monte-Carlo acceptance estimate. Reproducible bit-exactly
/// from the recorded seed and parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mode: String,
    pub strategy: String,
    pub lambda: u32,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub backend: String,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    /// `sqrt(rate·(1−rate)/trials)`.
    pub std_err: f64,
    pub seed: u64,
    pub bound: Option<BoundCheck>,
    pub bound_ok: Option<bool>,
}

/// Estimates the acceptance probability of a prover model over independent
/// sessions (fresh setup per trial, per-trial seeds derived from `seed`).
/// Needs `trials ≥ 100` for the normal-approximation error bar to mean
/// anything.
pub fn estimate(
    mode: SessionMode,
    instance: &ZxHamiltonian,
    params: ProtocolParams,
    model: ProverModel,
    trials: usize,
    seed: u64,
    bound: Option<BoundCheck>,
) -> Result<EstimateReport> {
    if trials < 100 {
        return Err(Error::ParameterRange(format!(
            "need at least 100 trials for a meaningful estimate, got {trials}"
        )));
    }
    if instance.num_qubits() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "instance has {} qubits, parameters say {}",
            instance.num_qubits(),
            params.n
        )));
    }
    // The honest witness is challenge-independent; compute it once.
    let witness = match (model, mode) {
        (ProverModel::Honest, SessionMode::Ctq) => Some(Statevector::uniform(params.n)),
        (ProverModel::Honest, _) => Some(instance.ground().1),
        (ProverModel::Cheat(_), _) => None,
    };

    let run_one = |t: usize| -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let setups = protocol::setup(params, &mut rng)?;
        let mut prover: Box<dyn Prover> = match (&model, &witness) {
            (ProverModel::Honest, Some(w)) => {
                Box::new(HonestProver::new(w.clone(), &setups.verifier)?)
            }
            (ProverModel::Cheat(kind), _) => {
                Box::new(ClassicalStrategy::new(*kind, &setups.prover))
            }
            _ => unreachable!("honest model always carries a witness"),
        };
        Ok(match mode {
            SessionMode::Interactive => {
                run_interactive(instance, &setups.verifier, prover.as_mut(), &mut rng).decision
            }
            SessionMode::FiatShamir => {
                crate::fiatshamir::fs_prove(instance, &setups.verifier, prover.as_mut(), &mut rng)
                    .decision
            }
            SessionMode::Ctq => run_ctq(&setups.verifier, prover.as_mut(), &mut rng).decision,
        })
    };

    let outcomes: Vec<Result<bool>> = trial_pool()
        .install(|| (0..trials).into_par_iter().map(run_one).collect());
    let mut successes = 0;
    for o in outcomes {
        successes += o? as usize;
    }

    let rate = successes as f64 / trials as f64;
    let std_err = (rate * (1.0 - rate) / trials as f64).sqrt();
    let bound_ok = bound.map(|b| match b {
        BoundCheck::AtMost(v) => rate <= v,
        BoundCheck::AtLeast(v) => rate >= v,
    });
    Ok(EstimateReport {
        mode: mode.name().into(),
        strategy: model.name(),
        lambda: params.lambda,
        n: params.n,
        r: params.r,
        k: params.k,
        backend: format!("{:?}", params.backend).to_lowercase(),
        trials,
        successes,
        rate,
        std_err,
        seed,
        bound,
        bound_ok,
    })
}

// ---------------------------------------------------------------------------
// Soundness curve

/// One strategy's empirical rate at one `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyRate {
    pub strategy: String,
    pub rate: f64,
}

/// Empirical acceptance rates at one challenge-group count, with the
/// `2^{−k}` reference.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveRow {
    pub k: usize,
    pub rates: Vec<StrategyRate>,
    pub reference: f64,
}

/// The table [`soundness_curve`] produces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoundnessCurve {
    pub lambda: u32,
    pub n: usize,
    pub r: usize,
    pub backend: String,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<CurveRow>,
}

/// Default copies-per-group for soundness curves: large enough that the
/// decode-leak of random replies through Hadamard groups (which shrinks
/// exponentially in the consistent-set size) stays far below the Monte
/// Carlo resolution.
pub const CURVE_DEFAULT_R: usize = 64;

/// Tabulates empirical acceptance rates of classical strategies against
/// the `2^{−k}` reference, for `k` up to 10. `template.k` is ignored; its
/// other fields size each row's sessions.
pub fn soundness_curve(
    instance: &ZxHamiltonian,
    template: ProtocolParams,
    ks: &[usize],
    strategies: &[StrategyKind],
    trials: usize,
    seed: u64,
) -> Result<SoundnessCurve> {
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        if k == 0 || k > 10 {
            return Err(Error::ParameterRange(format!(
                "curve rows cover k in 1..=10, got {k}"
            )));
        }
        let params =
            ProtocolParams::new(template.lambda, template.n, template.r, k, template.backend)?;
        let mut rates = Vec::with_capacity(strategies.len());
        for (si, &kind) in strategies.iter().enumerate() {
            let report = estimate(
                SessionMode::Interactive,
                instance,
                params,
                ProverModel::Cheat(kind),
                trials,
                trial_seed(seed, k * 64 + si),
                None,
            )?;
            rates.push(StrategyRate {
                strategy: kind.name().into(),
                rate: report.rate,
            });
        }
        rows.push(CurveRow {
            k,
            rates,
            reference: 2f64.powi(-(k as i32)),
        });
    }
    Ok(SoundnessCurve {
        lambda: template.lambda,
        n: template.n,
        r: template.r,
        backend: format!("{:?}", template.backend).to_lowercase(),
        trials,
        seed,
        rows,
    })
}

// ---------------------------------------------------------------------------
// The bare energy-test game (no function families)

/// Plays one `r`-copy energy-test round directly on a witness state: each
/// copy gets a uniform basis string and a term sampled from the coupling
/// distribution; consistent copies are measured and the satisfied count is
/// held against the promise-midpoint threshold.
pub fn energy_test_round<R: Rng + ?Sized>(
    instance: &ZxHamiltonian,
    witness: &Statevector,
    r: usize,
    rng: &mut R,
) -> Result<bool> {
    let n = instance.num_qubits();
    if witness.num_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "witness has {} qubits, instance has {n}",
            witness.num_qubits()
        )));
    }
    if r == 0 {
        return Err(Error::ParameterRange("r must be at least 1".into()));
    }
    let mut consistent = 0usize;
    let mut satisfied = 0usize;
    for _ in 0..r {
        let h = Bits::random(rng, n);
        let s = Bits::random(rng, 64);
        let term = instance.sample_term(&s)?;
        if !term.is_consistent(&h) {
            continue;
        }
        consistent += 1;
        let mut state = witness.clone();
        for q in 0..n {
            if h.get(q) {
                state.apply_h(q);
            }
        }
        let outcome = state.measure_all(rng);
        if term.satisfied(state.bit(outcome, term.i), state.bit(outcome, term.j)) {
            satisfied += 1;
        }
    }
    Ok(satisfied as f64 >= group_threshold(instance.a, instance.b, consistent) - 1e-9)
}

/// Monte-Carlo acceptance rate of [`energy_test_round`] over independent
/// rounds (parallel, per-trial seeds).
pub fn energy_test_rate(
    instance: &ZxHamiltonian,
    witness: &Statevector,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::ParameterRange("trials must be at least 1".into()));
    }
    let outcomes: Vec<Result<bool>> = trial_pool().install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
                energy_test_round(instance, witness, r, &mut rng)
            })
            .collect()
    });
    let mut accepts = 0usize;
    for o in outcomes {
        accepts += o? as usize;
    }
    Ok(accepts as f64 / trials as f64)
}

/// A two-qubit state with exact energy `E ∈ [−1, 1]` for
/// [`reference_instance`](crate::hamiltonian::reference_instance): mixes
/// the singlet (energy −1), `(|00⟩−|11⟩)/√2` (energy 0), and
/// `(|00⟩+|11⟩)/√2` (energy +1) eigenstates. Pins witnesses to promise
/// edges when measuring how tightly the tail bound holds.
pub fn reference_witness(energy: f64) -> Result<Statevector> {
    if !(-1.0..=1.0).contains(&energy) {
        return Err(Error::ParameterRange(format!(
            "energy {energy} outside the normalized spectrum [-1, 1]"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if energy <= 0.0 {
        let cg = (-energy).sqrt();
        let cm = (1.0 + energy).sqrt();
        // cg · (0, s, −s, 0) + cm · (s, 0, 0, −s)
        Statevector::from_reals(&[cm * s, cg * s, -cg * s, -cm * s])
    } else {
        let ct = energy.sqrt();
        let cm = (1.0 - energy).sqrt();
        // ct · (s, 0, 0, s) + cm · (s, 0, 0, −s)
        Statevector::from_reals(&[(ct + cm) * s, 0.0, 0.0, (ct - cm) * s])
    }
}

// ---------------------------------------------------------------------------
// Projector overlap inequality

/// Tally from [`lemma3_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub dim: usize,
    pub m: usize,
    pub trials: usize,
    /// Trials where `⟨ψ|Σ A_i|ψ⟩` exceeded `1 + (Σ δ_ij)^{1/2} + 1e-9`.
    pub violations: usize,
    /// Raw overlaps above 2 (the inequality's hypothesis range) — reported
    /// rather than silently clamped; none are expected for projectors.
    pub delta_out_of_range: usize,
    pub max_lhs: f64,
    /// Minimum of `bound − LHS` over all trials (how close the inequality
    /// came to tight).
    pub min_slack: f64,
}

/// Samples random orthogonal-projector tuples `A_1..A_m` (uniform random
/// subspaces of dimension up to `dim/2`) and unit vectors `ψ`, and checks
/// the overlap inequality
///
/// ```text
/// ⟨ψ|(A_1 + ⋯ + A_m)|ψ⟩ ≤ 1 + (Σ_{i<j} δ_ij)^{1/2},
/// δ_ij = max(⟨ψ|A_iA_j + A_jA_i|ψ⟩, 0).
/// ```
///
/// For pairwise-orthogonal projectors every δ vanishes and the bound is
/// the familiar `Σ A_i ⪯ 1`.
pub fn lemma3_check<R: Rng + ?Sized>(
    dim: usize,
    m: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Lemma3Report> {
    if dim == 0 || dim > 64 {
        return Err(Error::ParameterRange(format!("dim must be 1..=64, got {dim}")));
    }
    if m == 0 || m > 16 {
        return Err(Error::ParameterRange(format!("m must be 1..=16, got {m}")));
    }
    if trials == 0 {
        return Err(Error::ParameterRange("trials must be at least 1".into()));
    }
    let gaussian = |rng: &mut R, rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
    };

    let mut violations = 0usize;
    let mut delta_out_of_range = 0usize;
    let mut max_lhs = f64::NEG_INFINITY;
    let mut min_slack = f64::INFINITY;
    let max_rank = (dim / 2).max(1);
    for _ in 0..trials {
        let projectors: Vec<DMatrix<f64>> = (0..m)
            .map(|_| {
                let rank = rng.gen_range(1..=max_rank);
                let q = nalgebra::linalg::QR::new(gaussian(rng, dim, rank)).q();
                &q * q.transpose()
            })
            .collect();
        let psi = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .normalize();

        let images: Vec<DVector<f64>> = projectors.iter().map(|p| p * &psi).collect();
        let lhs: f64 = images.iter().map(|ap| ap.dot(ap)).sum();
        let mut delta_sum = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                // ⟨ψ|A_iA_j + A_jA_i|ψ⟩ = 2·⟨A_iψ, A_jψ⟩ for projectors.
                let raw = 2.0 * images[i].dot(&images[j]);
                if raw > 2.0 + 1e-12 {
                    delta_out_of_range += 1;
                }
                delta_sum += raw.max(0.0);
            }
        }
        let bound = 1.0 + delta_sum.sqrt();
        if lhs > bound + 1e-9 {
            violations += 1;
        }
        max_lhs = max_lhs.max(lhs);
        min_slack = min_slack.min(bound - lhs);
    }
    Ok(Lemma3Report {
        dim,
        m,
        trials,
        violations,
        delta_out_of_range,
        max_lhs,
        min_slack,
    })
}
