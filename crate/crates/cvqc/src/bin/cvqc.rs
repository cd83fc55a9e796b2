//! Command-line surface: reproducible sessions, estimates, and bound
//! checks over JSON artifact files.
//!
//! Exit codes: 0 success/accept, 1 reject (or replay disagreement),
//! 2 usage or input error, 3 bound-check failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cvqc::analysis::{
    estimate, lemma3_check, soundness_curve, BoundCheck, ProverModel, SessionMode, StrategyKind,
    CURVE_DEFAULT_R,
};
use cvqc::artifacts::{
    backend_from_name, load_json, save_json, InstanceFile, SetupFile, TranscriptFile,
    TranscriptKind, ZkTranscriptFile,
};
use cvqc::fiatshamir::{derive_challenge, fs_prove, fs_verify};
use cvqc::hamiltonian::{random_instance, ZxHamiltonian};
use cvqc::protocol::{
    self, ctq_digest, ctq_verdict, run_ctq, run_interactive, verdict, HonestProver,
    ProtocolParams, VerifierSetup,
};
use cvqc::statevec::Statevector;
use cvqc::zkp::{
    fs_zk_prove, fs_zk_verify, relation, setup_zk, simulate, zk_verify, LInstance, QuantumSim,
    ToyNizk, TransparentFhe, UniformChallenge,
};
use cvqc::{Error, Result};

const EXIT_OK: u8 = 0;
const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BOUND: u8 = 3;

#[derive(Parser)]
#[command(name = "cvqc", version, about = "Verify quantum computations with a classical verifier, at desk scale")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Session-shape flags shared by the commands that sample setups.
#[derive(Args, Clone)]
struct ShapeArgs {
    /// Security parameter for the function families.
    #[arg(long, default_value_t = 8)]
    lambda: u32,
    /// Qubits per witness copy.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Copies per challenge group.
    #[arg(long, default_value_t = 32)]
    r: usize,
    /// Challenge groups (soundness floor 2^-k).
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Function family backend: mock | toylwe.
    #[arg(long, default_value = "mock")]
    funcfam: String,
}

impl ShapeArgs {
    fn params(&self) -> Result<ProtocolParams> {
        ProtocolParams::new(self.lambda, self.n, self.r, self.k, backend_from_name(&self.funcfam)?)
    }
}

/// Toy-backend selectors for the zero-knowledge commands.
#[derive(Args, Clone)]
struct ZkBackendArgs {
    /// Homomorphic encryption backend: transparent.
    #[arg(long, default_value = "transparent")]
    fhe: String,
    /// Proof-system backend: toy.
    #[arg(long, default_value = "toy")]
    nizk: String,
}

impl ZkBackendArgs {
    fn validate(&self) -> Result<()> {
        if self.fhe != "transparent" {
            return Err(Error::ParameterRange(format!(
                "unknown FHE backend {:?} (available: transparent)",
                self.fhe
            )));
        }
        if self.nizk != "toy" {
            return Err(Error::ParameterRange(format!(
                "unknown NIZK backend {:?} (available: toy)",
                self.nizk
            )));
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a random yes-instance and write it as JSON.
    GenInstance {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Promise gap b - a on the normalized energy scale.
        #[arg(long, default_value_t = 0.4)]
        gap: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonalize an instance: ground energy and promise classification.
    GroundEnergy {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Sample a verifier setup (trapdoors included) and write it as JSON.
    Setup {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one interactive session with the honest prover.
    Run {
        #[arg(long)]
        instance: PathBuf,
        /// Reuse a stored setup instead of sampling one.
        #[arg(long)]
        setup: Option<PathBuf>,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one non-interactive (hash-derived challenge) session.
    FsRun {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        setup: Option<PathBuf>,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one bare quantumness-test session (no Hamiltonian).
    Ctq {
        #[arg(long)]
        setup: Option<PathBuf>,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one zero-knowledge-wrapped session (non-interactive).
    ZkRun {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        zk: ZkBackendArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce a wrapped-session transcript without any witness state.
    ZkSimulate {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        zk: ZkBackendArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo a prover model's acceptance rate.
    Estimate {
        /// Instance file; defaults to the built-in two-qubit reference.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Session mode: interactive | fiat-shamir | ctq.
        #[arg(long, default_value = "interactive")]
        mode: String,
        /// honest | test-only | guess-challenge | half-split | random-noise.
        #[arg(long, default_value = "honest")]
        strategy: String,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fail (exit 3) if the rate exceeds this bound.
        #[arg(long)]
        at_most: Option<f64>,
        /// Fail (exit 3) if the rate falls short of this bound.
        #[arg(long)]
        at_least: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate cheating-strategy rates against the 2^-k reference.
    SoundnessCurve {
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Rows cover k = 1..=k-max.
        #[arg(long, default_value_t = 6)]
        k_max: usize,
        #[arg(long, default_value_t = CURVE_DEFAULT_R)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        lambda: u32,
        #[arg(long, default_value = "mock")]
        funcfam: String,
        /// Comma-separated strategy names; defaults to all.
        #[arg(long)]
        strategies: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the projector overlap inequality on random instances.
    LemmaCheck {
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a stored transcript and report field-level differences.
    Replay {
        /// Required for interactive and fiat-shamir transcripts.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        transcript: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load_instance(path: &Path) -> Result<ZxHamiltonian> {
    load_json::<InstanceFile>(path)?.to_instance()
}

/// Emit a report: to `--out` as a file when given (echoing the path on
/// stdout), to stdout otherwise.
fn emit<T: serde::Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            save_json(path, value)?;
            println!("{}", json!({ "written": path.display().to_string() }));
        }
        None => println!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

/// Setup for a session command: from a stored file when given (its shape
/// wins), freshly sampled otherwise.
fn obtain_setup(
    setup_path: &Option<PathBuf>,
    shape: &ShapeArgs,
    rng: &mut ChaCha8Rng,
) -> Result<VerifierSetup> {
    match setup_path {
        Some(path) => load_json::<SetupFile>(path)?.to_setup(),
        None => Ok(protocol::setup(shape.params()?, rng)?.verifier),
    }
}

fn check_sizes(instance: &ZxHamiltonian, vs: &VerifierSetup) -> Result<()> {
    if instance.num_qubits() != vs.params.n {
        return Err(Error::DimensionMismatch(format!(
            "instance has {} qubits but the setup expects {}",
            instance.num_qubits(),
            vs.params.n
        )));
    }
    Ok(())
}

fn parse_model(name: &str) -> Result<ProverModel> {
    if name == "honest" {
        return Ok(ProverModel::Honest);
    }
    StrategyKind::from_name(name)
        .map(ProverModel::Cheat)
        .ok_or_else(|| {
            Error::ParameterRange(format!(
                "unknown strategy {name:?} (honest, test-only, guess-challenge, half-split, random-noise)"
            ))
        })
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::GenInstance { n, gap, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let instance = random_instance(n, gap, &mut rng)?;
            let file = InstanceFile::from_instance(&instance);
            emit(&file, &out)?;
            if out.is_some() {
                println!(
                    "{}",
                    json!({
                        "n": n,
                        "a": instance.a,
                        "b": instance.b,
                        "digest": hex::encode(instance.digest()),
                    })
                );
            }
            Ok(EXIT_OK)
        }
        Cmd::GroundEnergy { instance } => {
            let h = load_instance(&instance)?;
            let (e0, _) = h.ground();
            let spectrum = h.spectrum();
            let promise = if e0 <= h.a {
                "yes"
            } else if e0 >= h.b {
                "no"
            } else {
                "between-thresholds"
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "ground_energy": e0,
                    "spectrum": spectrum,
                    "a": h.a,
                    "b": h.b,
                    "promise": promise,
                    "digest": hex::encode(h.digest()),
                }))?
            );
            Ok(EXIT_OK)
        }
        Cmd::Setup { shape, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let setups = protocol::setup(shape.params()?, &mut rng)?;
            emit(&SetupFile::from_setup(&setups.verifier), &out)?;
            Ok(EXIT_OK)
        }
        Cmd::Run { instance, setup, shape, seed, out } => {
            let h = load_instance(&instance)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs = obtain_setup(&setup, &shape, &mut rng)?;
            check_sizes(&h, &vs)?;
            let mut prover = HonestProver::new(h.ground().1, &vs)?;
            let t = run_interactive(&h, &vs, &mut prover, &mut rng);
            let file = TranscriptFile::from_interactive(TranscriptKind::Interactive, seed, &vs, &t);
            if let Some(path) = &out {
                save_json(path, &file)?;
            }
            println!(
                "{}",
                json!({
                    "decision": t.decision,
                    "challenge": t.c.to_text(),
                    "transcript_digest": hex::encode(t.digest()),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                })
            );
            Ok(if t.decision { EXIT_OK } else { EXIT_REJECT })
        }
        Cmd::FsRun { instance, setup, shape, seed, out } => {
            let h = load_instance(&instance)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs = obtain_setup(&setup, &shape, &mut rng)?;
            check_sizes(&h, &vs)?;
            let mut prover = HonestProver::new(h.ground().1, &vs)?;
            let t = fs_prove(&h, &vs, &mut prover, &mut rng);
            let verified = fs_verify(&h, &vs, &t);
            let file = TranscriptFile::from_fs(seed, &vs, &t);
            if let Some(path) = &out {
                save_json(path, &file)?;
            }
            println!(
                "{}",
                json!({
                    "decision": t.decision,
                    "verified": verified,
                    "challenge": t.c.to_text(),
                    "transcript_digest": hex::encode(t.digest()),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                })
            );
            Ok(if verified { EXIT_OK } else { EXIT_REJECT })
        }
        Cmd::Ctq { setup, shape, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vs = obtain_setup(&setup, &shape, &mut rng)?;
            let mut prover = HonestProver::new(Statevector::uniform(vs.params.n), &vs)?;
            let t = run_ctq(&vs, &mut prover, &mut rng);
            let file = TranscriptFile::from_interactive(TranscriptKind::Ctq, seed, &vs, &t);
            if let Some(path) = &out {
                save_json(path, &file)?;
            }
            println!(
                "{}",
                json!({
                    "decision": t.decision,
                    "challenge": t.c.to_text(),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                })
            );
            Ok(if t.decision { EXIT_OK } else { EXIT_REJECT })
        }
        Cmd::ZkRun { instance, shape, zk, seed, out } => {
            zk.validate()?;
            let h = load_instance(&instance)?;
            let params = shape.params()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let session = setup_zk(&TransparentFhe, params, &mut rng)?;
            check_sizes(&h, &session.verifier.setup)?;
            let quantum = QuantumSim::new(&session.verifier.setup);
            let witness = h.ground().1;
            let t = fs_zk_prove(
                &TransparentFhe,
                &ToyNizk,
                &h,
                &session.prover,
                &quantum,
                &witness,
                &mut rng,
            )?;
            let accepted = fs_zk_verify(&TransparentFhe, &ToyNizk, &h, &session.verifier, &t);
            let file = ZkTranscriptFile::new("prove", seed, &h, &t, accepted);
            if let Some(path) = &out {
                save_json(path, &file)?;
            }
            println!(
                "{}",
                json!({
                    "accepted": accepted,
                    "challenge": t.c.to_text(),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                })
            );
            Ok(if accepted { EXIT_OK } else { EXIT_REJECT })
        }
        Cmd::ZkSimulate { instance, shape, zk, seed, out } => {
            zk.validate()?;
            let h = load_instance(&instance)?;
            let params = shape.params()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let session = setup_zk(&TransparentFhe, params, &mut rng)?;
            check_sizes(&h, &session.verifier.setup)?;
            let (t, tau) = simulate(
                &TransparentFhe,
                &ToyNizk,
                &h,
                &session,
                &mut UniformChallenge,
                &mut rng,
            )?;
            let accepted = zk_verify(&TransparentFhe, &ToyNizk, &h, &session.verifier, &t);
            let x = LInstance {
                instance: h.clone(),
                setup: session.verifier.setup.clone(),
                xi: t.xi,
                y: t.y.clone(),
                c: t.c.clone(),
                chi: t.chi,
            };
            let in_language = relation(&x, &tau);
            let file = ZkTranscriptFile::new("simulate", seed, &h, &t, accepted);
            if let Some(path) = &out {
                save_json(path, &file)?;
            }
            println!(
                "{}",
                json!({
                    "accepted": accepted,
                    "relation_holds": in_language,
                    "out": out.as_ref().map(|p| p.display().to_string()),
                })
            );
            Ok(if accepted { EXIT_OK } else { EXIT_REJECT })
        }
        Cmd::Estimate {
            instance,
            mode,
            strategy,
            shape,
            trials,
            seed,
            at_most,
            at_least,
            out,
        } => {
            let h = match &instance {
                Some(path) => load_instance(path)?,
                None => cvqc::hamiltonian::reference_instance(-0.9, -0.5),
            };
            let mode = SessionMode::from_name(&mode).ok_or_else(|| {
                Error::ParameterRange(format!(
                    "unknown mode {mode:?} (interactive, fiat-shamir, ctq)"
                ))
            })?;
            let model = parse_model(&strategy)?;
            let bound = match (at_most, at_least) {
                (Some(_), Some(_)) => {
                    return Err(Error::ParameterRange(
                        "pass at most one of --at-most / --at-least".into(),
                    ))
                }
                (Some(v), None) => Some(BoundCheck::AtMost(v)),
                (None, Some(v)) => Some(BoundCheck::AtLeast(v)),
                (None, None) => None,
            };
            let report = estimate(mode, &h, shape.params()?, model, trials, seed, bound)?;
            emit(&report, &out)?;
            Ok(if report.bound_ok == Some(false) { EXIT_BOUND } else { EXIT_OK })
        }
        Cmd::SoundnessCurve {
            instance,
            k_max,
            r,
            lambda,
            funcfam,
            strategies,
            trials,
            seed,
            out,
        } => {
            let h = match &instance {
                Some(path) => load_instance(path)?,
                None => cvqc::hamiltonian::reference_instance(-0.9, -0.5),
            };
            let kinds: Vec<StrategyKind> = match &strategies {
                None => StrategyKind::ALL.to_vec(),
                Some(list) => list
                    .split(',')
                    .map(|name| {
                        StrategyKind::from_name(name.trim()).ok_or_else(|| {
                            Error::ParameterRange(format!("unknown strategy {name:?}"))
                        })
                    })
                    .collect::<Result<_>>()?,
            };
            let template = ProtocolParams::new(
                lambda,
                h.num_qubits(),
                r,
                1,
                backend_from_name(&funcfam)?,
            )?;
            let ks: Vec<usize> = (1..=k_max).collect();
            let curve = soundness_curve(&h, template, &ks, &kinds, trials, seed)?;
            // The floor claim: no strategy may beat the reference beyond
            // Monte-Carlo noise.
            let mut breached = false;
            for row in &curve.rows {
                let sigma = (row.reference * (1.0 - row.reference) / trials as f64).sqrt();
                for sr in &row.rates {
                    if sr.rate > row.reference + 3.0 * sigma + 0.01 {
                        breached = true;
                        eprintln!(
                            "bound breach: {} at k={} reached {:.4} against reference {:.4}",
                            sr.strategy, row.k, sr.rate, row.reference
                        );
                    }
                }
            }
            emit(&curve, &out)?;
            Ok(if breached { EXIT_BOUND } else { EXIT_OK })
        }
        Cmd::LemmaCheck { dim, m, trials, seed, out } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = lemma3_check(dim, m, trials, &mut rng)?;
            emit(&report, &out)?;
            Ok(if report.violations > 0 { EXIT_BOUND } else { EXIT_OK })
        }
        Cmd::Replay { instance, transcript } => replay(instance.as_deref(), &transcript),
    }
}

/// Re-verifies a stored transcript from scratch, reporting every field that
/// disagrees with the recomputation.
fn replay(instance: Option<&Path>, transcript: &Path) -> Result<u8> {
    let tf: TranscriptFile = load_json(transcript)?;
    let vs = tf.setup.to_setup()?;
    let (y, c, u) = tf.messages()?;
    let mut diffs = Vec::new();
    let mut diff = |field: &str, stored: String, recomputed: String| {
        if stored != recomputed {
            diffs.push(json!({ "field": field, "stored": stored, "recomputed": recomputed }));
        }
    };

    let recomputed_decision = match tf.kind {
        TranscriptKind::Interactive | TranscriptKind::FiatShamir => {
            let path = instance.ok_or_else(|| {
                Error::ParameterRange("--instance is required for this transcript kind".into())
            })?;
            let h = load_instance(path)?;
            diff(
                "instance_digest",
                tf.instance_digest.clone(),
                hex::encode(h.digest()),
            );
            if tf.kind == TranscriptKind::FiatShamir {
                let fst = tf.to_fs_transcript()?;
                diff("fs_x", hex::encode(fst.x), hex::encode(h.digest()));
                diff("fs_w", hex::encode(fst.w), hex::encode(vs.setup_digest()));
                let derived = derive_challenge(
                    &fst.x,
                    &fst.w,
                    &cvqc::fiatshamir::commitment_bytes(&fst.y),
                    vs.params.k,
                );
                diff("challenge", fst.c.to_text(), derived.to_text());
            }
            verdict(&h, &vs, &y, &c, &u)
        }
        TranscriptKind::Ctq => {
            diff(
                "instance_digest",
                tf.instance_digest.clone(),
                hex::encode(ctq_digest()),
            );
            ctq_verdict(&vs, &y, &c, &u)
        }
    };
    diff("decision", tf.decision.to_string(), recomputed_decision.to_string());

    let agree = diffs.is_empty();
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "agree": agree,
            "decision": recomputed_decision,
            "diffs": diffs,
        }))?
    );
    Ok(if agree && recomputed_decision { EXIT_OK } else { EXIT_REJECT })
}
