//! One full interactive session: setup, commit, challenge, respond,
//! verdict — with per-group accounting printed along the way.
//!
//! The verifier samples r·k trapdoor keypairs (basis choices hidden in a
//! per-copy string `h`), the prover commits to images of its witness
//! copies, a k-bit challenge splits the groups into test and energy
//! rounds, and the verdict decodes outcomes with the trapdoors.

use cvqc::protocol::{run_interactive, setup, verdict_detailed, HonestProver, ProtocolParams};
use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let instance = reference_instance(-0.9, -0.5);
    let params = ProtocolParams::new(8, 2, 16, 4, Backend::Mock)?;
    let setups = setup(params, &mut rng)?;
    let vs = setups.verifier;

    let witness = instance.ground().1;
    let mut prover = HonestProver::new(witness, &vs)?;
    let t = run_interactive(&instance, &vs, &mut prover, &mut rng);

    println!("challenge  {}", t.c.to_text());
    println!("decision   {}", t.decision);
    let detail = verdict_detailed(&instance, &vs, &t.y, &t.c, &t.u);
    for (m, g) in detail.groups.iter().enumerate() {
        let kind = if g.hadamard { "energy" } else { "test  " };
        println!(
            "group {m}: {kind}  consistent {:2}  satisfied {:2}  passed {}",
            g.consistent, g.satisfied, g.passed
        );
    }
    assert_eq!(detail.accept, t.decision);
    Ok(())
}
