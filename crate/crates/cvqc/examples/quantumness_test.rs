//! The bare quantumness test: no Hamiltonian, no witness — just proof
//! that the prover holds a qubit per committed image.
//!
//! Test rounds demand a preimage; Hadamard rounds demand an equation
//! over the claw. A quantum prover passes both from the same commitment;
//! a classical one must choose at commit time and gets caught on the
//! other branch about half the time per claw-bound qubit.

use cvqc::analysis::{estimate, ProverModel, SessionMode, StrategyKind};
use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::{run_ctq, setup, HonestProver, ProtocolParams};
use cvqc::statevec::Statevector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let params = ProtocolParams::new(8, 2, 8, 1, Backend::Mock)?;
    let setups = setup(params, &mut rng)?;
    let vs = setups.verifier;

    // One session, honestly quantum (simulated): any state will do.
    let mut prover = HonestProver::new(Statevector::uniform(2), &vs)?;
    let t = run_ctq(&vs, &mut prover, &mut rng);
    println!("single honest session: challenge {}, decision {}", t.c.to_text(), t.decision);

    // Rates over many sessions. The honest prover always passes; the
    // commit-and-hope classical strategy passes the branch it prepared
    // for, so with k = 1 it survives about half the time.
    let instance = reference_instance(-0.9, -0.5);
    let honest = estimate(SessionMode::Ctq, &instance, params, ProverModel::Honest, 400, 1, None)?;
    let classical = estimate(
        SessionMode::Ctq,
        &instance,
        params,
        ProverModel::Cheat(StrategyKind::TestOnly),
        400,
        1,
        None,
    )?;
    println!("honest rate    {:.3}", honest.rate);
    println!("classical rate {:.3} (prepared for test rounds only)", classical.rate);
    Ok(())
}
