//! Removing the interaction: the challenge becomes a hash of the
//! instance, the setup, and the prover's commitments.
//!
//! `c = H(x ∥ w ∥ y)` pins the challenge to the commitments, so a stored
//! transcript can be verified from scratch by anyone holding the setup.
//! Flipping any committed bit re-derives a different challenge.

use cvqc::fiatshamir::{derive_challenge, fs_prove, fs_verify};
use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::{setup, HonestProver, ProtocolParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let instance = reference_instance(-0.9, -0.5);
    let params = ProtocolParams::new(8, 2, 16, 4, Backend::Mock)?;
    let vs = setup(params, &mut rng)?.verifier;

    let mut prover = HonestProver::new(instance.ground().1, &vs)?;
    let t = fs_prove(&instance, &vs, &mut prover, &mut rng);
    println!("instance digest  {}", hex::encode(t.x));
    println!("setup digest     {}", hex::encode(t.w));
    println!("derived c        {}", t.c.to_text());
    println!("verified         {}", fs_verify(&instance, &vs, &t));

    // Tamper with one commitment bit: the re-derived challenge moves.
    let mut forged = t.clone();
    forged.y[0][0].flip(0);
    let rederived = derive_challenge(
        &forged.x,
        &forged.w,
        &cvqc::fiatshamir::commitment_bytes(&forged.y),
        params.k,
    );
    println!("tampered c       {} (stored {})", rederived.to_text(), forged.c.to_text());
    println!("tampered verify  {}", fs_verify(&instance, &vs, &forged));
    Ok(())
}
