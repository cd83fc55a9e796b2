//! Acceptance gate: one test per quantitative claim the stack makes,
//! each asserting its stated tolerance and runtime budget.
//!
//! Every test prints a single `criterion N ...: PASS` line with the
//! measured quantities (visible under `--nocapture`); the test names
//! themselves double as the pass/fail report in default output. The
//! budgets assume one core and optimized test builds.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvqc::analysis::{
    chi_square_two_sample_p, energy_test_rate, estimate, hoeffding_bound, lemma3_check,
    reference_witness, ClassicalStrategy, ProverModel, SessionMode, StrategyKind,
};
use cvqc::fiatshamir::{
    commitment_bytes, derive_challenge, fs_bound, fs_prove, fs_verify, reduction_sim,
    ClassicalAdversary, FsTranscript,
};
use cvqc::funcfam::{mock_with_width, Backend, FamilyKind, KeyPair};
use cvqc::hamiltonian::{reference_instance, ZxHamiltonian};
use cvqc::protocol::{setup, verdict, HonestProver, ProtocolParams, Prover, VerifierSetup};
use cvqc::statevec::Statevector;
use cvqc::zkp::{
    relation, setup_zk, simulate, zk_prove, zk_verify, LInstance, QuantumSim, ToyNizk,
    TransparentFhe, UniformChallenge,
};
use cvqc::{fullsim, qprover, Bits};

/// Joint-sample key: all commitments plus the whole reply, rendered to text.
fn sample_key(y: &[Bits], reply: &qprover::CopyReply) -> String {
    let mut key = y.iter().map(Bits::to_text).collect::<Vec<_>>().join(",");
    for q in &reply.qubits {
        key.push('|');
        key.push(if q.bit { '1' } else { '0' });
        key.push(':');
        key.push_str(&q.string.to_text());
    }
    key
}

fn two_sample_p(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let ca: Vec<f64> = keys.iter().map(|k| a.get(*k).copied().unwrap_or(0.0)).collect();
    let cb: Vec<f64> = keys.iter().map(|k| b.get(*k).copied().unwrap_or(0.0)).collect();
    chi_square_two_sample_p(&ca, &cb)
}

#[test]
fn c1_prover_matches_full_register_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let samples = 10_000;

    let configs: Vec<(&str, Vec<(FamilyKind, usize)>, Vec<f64>)> = vec![
        ("n=1 claw-free w=3", vec![(FamilyKind::Ntcf, 3)], vec![0.6, 0.8]),
        ("n=1 injective w=2", vec![(FamilyKind::Ntif, 2)], vec![0.8, -0.6]),
        (
            "n=2 mixed w=2/1",
            vec![(FamilyKind::Ntcf, 2), (FamilyKind::Ntif, 1)],
            vec![0.5, 0.5, 0.5, -0.5],
        ),
        (
            "n=2 claw-free w=2",
            vec![(FamilyKind::Ntcf, 2), (FamilyKind::Ntcf, 2)],
            vec![0.0, 0.7, -0.7, 0.14],
        ),
    ];

    let mut worst_p = 1.0f64;
    for (name, shape, amps) in &configs {
        let keys: Vec<KeyPair> =
            shape.iter().map(|&(kind, w)| mock_with_width(kind, w, &mut rng)).collect();
        let witness = Statevector::from_reals(amps).unwrap();
        for hadamard in [false, true] {
            let mut compact: BTreeMap<String, f64> = BTreeMap::new();
            let mut full: BTreeMap<String, f64> = BTreeMap::new();
            for _ in 0..samples {
                let copy = qprover::commit(&witness, &keys, &mut rng).unwrap();
                let y = copy.commitments().to_vec();
                let reply = if hadamard {
                    copy.measure_hadamard(&mut rng)
                } else {
                    copy.measure_test(&mut rng)
                };
                *compact.entry(sample_key(&y, &reply)).or_default() += 1.0;

                let copy = fullsim::commit_full(&witness, &keys, &mut rng).unwrap();
                let y = copy.commitments().to_vec();
                let reply = if hadamard {
                    copy.measure_hadamard(&mut rng)
                } else {
                    copy.measure_test(&mut rng)
                };
                *full.entry(sample_key(&y, &reply)).or_default() += 1.0;
            }
            let p = two_sample_p(&compact, &full);
            assert!(
                p > 0.001,
                "joint (y, u) distributions diverge for {name} (hadamard={hadamard}): p = {p:.5}"
            );
            worst_p = worst_p.min(p);
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 120.0, "criterion 1 overran its 2-minute budget: {dt:.1}s");
    println!(
        "criterion 1 (prover vs full-register oracle): PASS — worst p {worst_p:.4} over 4 configs x 2 queries x {samples} samples, {dt:.1}s"
    );
}

#[test]
fn c2_completeness_at_sized_repetition() {
    let start = Instant::now();
    let (g, r, k) = (0.2, 1476, 3);
    assert!(hoeffding_bound(r, g) <= 0.05, "r must be sized for a 0.05 error bound");
    let instance = reference_instance(-0.95, -0.55);
    let params = ProtocolParams::new(8, 2, r, k, Backend::Mock).unwrap();
    let report = estimate(
        SessionMode::Interactive,
        &instance,
        params,
        ProverModel::Honest,
        200,
        102,
        None,
    )
    .unwrap();
    assert!(
        report.rate >= 0.90,
        "honest acceptance {:.3} fell below 0.90 at r={r}, k={k}",
        report.rate
    );
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 300.0, "criterion 2 overran its 5-minute budget: {dt:.1}s");
    println!(
        "criterion 2 (completeness): PASS — honest rate {:.3} over 200 runs at r={r} (bound {:.4}), {dt:.1}s",
        report.rate,
        hoeffding_bound(r, g)
    );
}

#[test]
fn c3_parallel_repetition_floor() {
    let start = Instant::now();
    let instance = reference_instance(-0.9, -0.5);
    let trials = 10_000;
    let mut worst_sigmas = 0.0f64;
    for k in 1..=6usize {
        let params = ProtocolParams::new(8, 2, 64, k, Backend::Mock).unwrap();
        let report = estimate(
            SessionMode::Interactive,
            &instance,
            params,
            ProverModel::Cheat(StrategyKind::TestOnly),
            trials,
            103 + k as u64,
            None,
        )
        .unwrap();
        let reference = 0.5f64.powi(k as i32);
        let sigma = (reference * (1.0 - reference) / trials as f64).sqrt();
        let dev = (report.rate - reference).abs();
        assert!(
            dev <= 3.0 * sigma,
            "k={k}: test-only rate {:.4} strays from 2^-k = {reference:.4} by {:.1}σ",
            report.rate,
            dev / sigma
        );
        worst_sigmas = worst_sigmas.max(dev / sigma);
    }

    let params = ProtocolParams::new(8, 2, 8, 1, Backend::Mock).unwrap();
    let ctq = estimate(
        SessionMode::Ctq,
        &instance,
        params,
        ProverModel::Cheat(StrategyKind::TestOnly),
        trials,
        113,
        None,
    )
    .unwrap();
    assert!(
        (ctq.rate - 0.5).abs() <= 0.02,
        "classical quantumness-test rate {:.4} is not ≈ 1/2",
        ctq.rate
    );
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 300.0, "criterion 3 overran its 5-minute budget: {dt:.1}s");
    println!(
        "criterion 3 (parallel repetition floor): PASS — max deviation {worst_sigmas:.2}σ over k=1..6 at {trials} trials, quantumness-test rate {:.3}, {dt:.1}s",
        ctq.rate
    );
}

#[test]
fn c4_energy_test_error_bound() {
    let start = Instant::now();
    let trials = 2000;
    let mut points = 0;
    let mut min_slack = f64::INFINITY;
    for (pi, &g) in [0.2, 0.3, 0.4, 0.5].iter().enumerate() {
        for (qi, &r) in [8usize, 16, 32, 64, 128].iter().enumerate() {
            let (a, b) = (-1.0 + g, -1.0 + 3.0 * g);
            let instance = reference_instance(a, b);
            let bound = hoeffding_bound(r, g);
            let seed = 104_000 + (pi * 8 + qi) as u64;
            let err_yes =
                1.0 - energy_test_rate(&instance, &reference_witness(a).unwrap(), r, trials, seed)
                    .unwrap();
            let err_no =
                energy_test_rate(&instance, &reference_witness(b).unwrap(), r, trials, seed + 1)
                    .unwrap();
            for (side, err) in [("yes", err_yes), ("no", err_no)] {
                let sigma = (err * (1.0 - err) / trials as f64).sqrt();
                assert!(
                    err <= bound + 3.0 * sigma,
                    "{side}-witness error {err:.4} exceeds bound {bound:.4} at r={r}, g={g}"
                );
                min_slack = min_slack.min(bound + 3.0 * sigma - err);
            }
            points += 1;
        }
    }
    assert_eq!(points, 20);
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 300.0, "criterion 4 overran its 5-minute budget: {dt:.1}s");
    println!(
        "criterion 4 (energy-test error bound): PASS — 20-point (r,g) grid, min slack {min_slack:.4} at {trials} trials/point, {dt:.1}s"
    );
}

#[test]
fn c5_projector_overlap_inequality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let report = lemma3_check(8, 4, 10_000, &mut rng).unwrap();
    assert_eq!(report.violations, 0, "overlap bound violated: {report:?}");
    assert_eq!(report.delta_out_of_range, 0, "anticommutator overflow: {report:?}");
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion 5 overran its 1-minute budget: {dt:.1}s");
    println!(
        "criterion 5 (projector overlap inequality): PASS — 10^4 instances at dim 8, m=4, 0 violations, min slack {:.4}, {dt:.1}s",
        report.min_slack
    );
}

/// An all-binding non-interactive session: every bit of the serialized
/// transcript is load-bearing.
///
/// Shape: 2 qubits, 2 copies per group, 2 groups, claw-free keys of width
/// 1 everywhere (so each reply string is a single mandatory-nonzero bit),
/// term randomness fixed to select the XX term for every copy, and a key
/// seed chosen so the derived challenge makes both groups energy rounds
/// *and* every single commitment-bit flip moves the derived challenge.
fn binding_session(instance: &ZxHamiltonian) -> (VerifierSetup, FsTranscript) {
    let params = ProtocolParams::new(8, 2, 2, 2, Backend::Mock).unwrap();
    let copies = params.copies();
    // First two bits set: the 64-bit fraction 0.11... = 3/4 lands in the
    // XX half of the term distribution.
    let mut s_bits = Bits::zero(64);
    s_bits.set(0, true);
    s_bits.set(1, true);

    for seed in 0..10_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs = VerifierSetup {
            params,
            h: vec![Bits::from_bools(&[true, true]); copies],
            keys: (0..copies)
                .map(|_| (0..2).map(|_| mock_with_width(FamilyKind::Ntcf, 1, &mut rng)).collect())
                .collect(),
            s: vec![s_bits.clone(); copies],
        };
        let mut prover = HonestProver::new(instance.ground().1, &vs).unwrap();
        let t = fs_prove(instance, &vs, &mut prover, &mut rng);
        let all_energy = t.c.get(0) && t.c.get(1);
        let every_commit_bit_binds = (0..copies).all(|m| {
            (0..2).all(|q| {
                let mut y = t.y.clone();
                y[m][q].flip(0);
                derive_challenge(&t.x, &t.w, &commitment_bytes(&y), params.k) != t.c
            })
        });
        if all_energy && every_commit_bit_binds {
            assert!(t.decision, "the engineered session must accept");
            return (vs, t);
        }
    }
    panic!("no all-binding session in 10^4 key seeds");
}

#[test]
fn c6_fs_equivalence_and_tamper_rejection() {
    let start = Instant::now();
    let instance = reference_instance(-0.9, -0.5);

    // Equivalence: the non-interactive check accepts exactly when the
    // interactive verdict accepts under the derived challenge.
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let params = ProtocolParams::new(8, 2, 8, 3, Backend::Mock).unwrap();
    let (mut accepts, mut rejects) = (0, 0);
    for i in 0..100 {
        let setups = setup(params, &mut rng).unwrap();
        let mut prover: Box<dyn Prover> = match i % 5 {
            0 | 1 => Box::new(HonestProver::new(instance.ground().1, &setups.verifier).unwrap()),
            2 => Box::new(ClassicalStrategy::new(StrategyKind::TestOnly, &setups.prover)),
            3 => Box::new(ClassicalStrategy::new(StrategyKind::HalfSplit, &setups.prover)),
            _ => Box::new(ClassicalStrategy::new(StrategyKind::RandomNoise, &setups.prover)),
        };
        let t = fs_prove(&instance, &setups.verifier, prover.as_mut(), &mut rng);
        let interactive = verdict(&instance, &setups.verifier, &t.y, &t.c, &t.u);
        assert_eq!(
            fs_verify(&instance, &setups.verifier, &t),
            interactive,
            "stored-transcript check disagrees with the interactive verdict (session {i})"
        );
        if interactive {
            accepts += 1;
        } else {
            rejects += 1;
        }
    }
    assert!(accepts > 0 && rejects > 0, "both outcomes must be exercised");

    // Tampering: on the all-binding session, every single-bit flip of the
    // serialized transcript is rejected (exhaustively, which covers well
    // over the 10^3 required tampers).
    let (vs, t) = binding_session(&instance);
    assert!(fs_verify(&instance, &vs, &t));
    let bytes = t.to_bytes();
    let mut tampers = 0;
    for pos in 0..bytes.len() * 8 {
        let mut forged = bytes.clone();
        forged[pos / 8] ^= 0x80u8 >> (pos % 8);
        if let Ok(t2) = FsTranscript::from_bytes(&forged) {
            assert!(
                !fs_verify(&instance, &vs, &t2),
                "single-bit tamper at bit {pos} was accepted"
            );
        }
        tampers += 1;
    }
    assert!(tampers >= 1000, "transcript too small to exercise 10^3 tampers");
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion 6 overran its 1-minute budget: {dt:.1}s");
    println!(
        "criterion 6 (hash-binding): PASS — verdict equivalence on 100 transcripts ({accepts} accept / {rejects} reject), {tampers} single-bit tampers all rejected, {dt:.1}s"
    );
}

/// One-query adversary with interactive advantage 1: it answers with
/// whatever challenge the oracle gave its only commitment.
struct Scripted;

impl ClassicalAdversary for Scripted {
    fn queries(&self) -> usize {
        1
    }
    fn run(
        &mut self,
        oracle: &mut dyn FnMut(&[u8], &[u8]) -> cvqc::Result<Bits>,
        _rng: &mut dyn rand::RngCore,
    ) -> cvqc::Result<(Vec<u8>, Bits)> {
        let y = b"the-commitment".to_vec();
        let seen = oracle(b"session", &y)?;
        Ok((y, seen))
    }
}

#[test]
fn c7_reduction_success_floor() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (k, trials) = (4, 10_000);
    let mut successes = 0usize;
    for _ in 0..trials {
        let theta = Bits::random(&mut rng, k);
        let out = reduction_sim(&mut Scripted, &theta, &|m, th| m == th, &mut rng).unwrap();
        successes += out.success as usize;
    }
    let rate = successes as f64 / trials as f64;
    let floor = fs_bound(1, 2f64.powi(32), 1.0);
    let sigma = (rate * (1.0 - rate) / trials as f64).sqrt();
    assert!(
        rate >= floor - 3.0 * sigma,
        "reduction success {rate:.4} fell below the floor {floor:.4}"
    );
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 120.0, "criterion 7 overran its 2-minute budget: {dt:.1}s");
    println!(
        "criterion 7 (reduction success floor): PASS — scripted 1-query success {rate:.4} ≥ {floor:.4} − 3σ at {trials} trials, {dt:.1}s"
    );
}

#[test]
fn c8_zk_simulation_matches_honest_sessions() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let instance = reference_instance(-0.9, -0.5);
    // λ = 8 gives width-8 keys on the mock backend.
    let params = ProtocolParams::new(8, 2, 2, 2, Backend::Mock).unwrap();
    let session = setup_zk(&TransparentFhe, params, &mut rng).unwrap();
    let quantum = QuantumSim::new(&session.verifier.setup);
    let witness = instance.ground().1;
    let samples = 10_000;

    let mut honest_accepts = 0usize;
    let mut sim_in_relation = 0usize;
    let mut honest_y: Vec<BTreeMap<String, f64>> = vec![BTreeMap::new(); params.n];
    let mut sim_y = honest_y.clone();
    for _ in 0..samples {
        let t = zk_prove(
            &TransparentFhe,
            &ToyNizk,
            &instance,
            &session.prover,
            &quantum,
            &witness,
            &mut UniformChallenge,
            &mut rng,
        )
        .unwrap();
        honest_accepts +=
            zk_verify(&TransparentFhe, &ToyNizk, &instance, &session.verifier, &t) as usize;
        for (m, copy) in t.y.iter().enumerate() {
            for q in 0..params.n {
                *honest_y[q].entry(format!("{m}:{}", copy[q].to_text())).or_default() += 1.0;
            }
        }

        let (t, tau) = simulate(
            &TransparentFhe,
            &ToyNizk,
            &instance,
            &session,
            &mut UniformChallenge,
            &mut rng,
        )
        .unwrap();
        let x = LInstance {
            instance: instance.clone(),
            setup: session.verifier.setup.clone(),
            xi: t.xi,
            y: t.y.clone(),
            c: t.c.clone(),
            chi: t.chi,
        };
        sim_in_relation += relation(&x, &tau) as usize;
        for (m, copy) in t.y.iter().enumerate() {
            for q in 0..params.n {
                *sim_y[q].entry(format!("{m}:{}", copy[q].to_text())).or_default() += 1.0;
            }
        }
    }

    let honest_rate = honest_accepts as f64 / samples as f64;
    let sim_rate = sim_in_relation as f64 / samples as f64;
    assert!(
        (honest_rate - sim_rate).abs() <= 0.05,
        "simulated relation rate {sim_rate:.3} strays from honest acceptance {honest_rate:.3}"
    );

    let mut worst_p = 1.0f64;
    for q in 0..params.n {
        let p = two_sample_p(&honest_y[q], &sim_y[q]);
        assert!(p > 0.01, "qubit {q} commitment marginals diverge: p = {p:.5}");
        worst_p = worst_p.min(p);
    }

    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 300.0, "criterion 8 overran its 5-minute budget: {dt:.1}s");
    println!(
        "criterion 8 (zero-knowledge simulation): PASS — honest accept {honest_rate:.3} vs simulated relation {sim_rate:.3}, worst commitment-marginal p {worst_p:.3} at {samples} samples, simulator takes no witness input, {dt:.1}s"
    );
}

#[test]
fn c9_pad_conjugation_preserves_spectra() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = 2 + case % 3;
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
        let h = ZxHamiltonian::new(n, &couplings, -0.6, -0.4).unwrap();
        let beta = Bits::random(&mut rng, n);
        let gamma = Bits::random(&mut rng, n);
        let padded = h.conjugate_pad(&beta, &gamma).unwrap();
        for (a, b) in h.spectrum().iter().zip(padded.spectrum().iter()) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-9, "pad conjugation moved an eigenvalue by {worst:.2e}");
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 30.0, "criterion 9 overran its 30-second budget: {dt:.1}s");
    println!(
        "criterion 9 (pad spectrum invariance): PASS — max eigenvalue shift {worst:.2e} over 100 random cases, {dt:.1}s"
    );
}
