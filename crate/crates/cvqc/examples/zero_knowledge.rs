//! The zero-knowledge wrapper: commit to a one-time pad, run the padded
//! session, and prove acceptance under homomorphic encryption.
//!
//! The verifier's trapdoors travel encrypted; the response lands in a
//! commitment χ; a proof evaluated under the encryption shows that the
//! committed session satisfies the padded verdict. The verifier learns
//! one bit — accept — and nothing about the witness.

use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::ProtocolParams;
use cvqc::zkp::{fs_zk_prove, fs_zk_verify, setup_zk, QuantumSim, ToyNizk, TransparentFhe};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instance = reference_instance(-0.9, -0.5);
    let params = ProtocolParams::new(8, 2, 8, 3, Backend::Mock)?;
    let session = setup_zk(&TransparentFhe, params, &mut rng)?;

    let quantum = QuantumSim::new(&session.verifier.setup);
    let witness = instance.ground().1;
    let t = fs_zk_prove(
        &TransparentFhe,
        &ToyNizk,
        &instance,
        &session.prover,
        &quantum,
        &witness,
        &mut rng,
    )?;

    println!("pad commitment ξ      {}", hex::encode(t.xi.0));
    println!("derived challenge     {}", t.c.to_text());
    println!("response commitment χ {}", hex::encode(t.chi.0));
    println!("proof ciphertext      {} bytes", t.ce.payload.len());

    let accepted = fs_zk_verify(&TransparentFhe, &ToyNizk, &instance, &session.verifier, &t);
    println!("verifier accepts      {accepted}");
    assert!(accepted);
    Ok(())
}
