//! Simulating wrapped sessions without any witness: the formal content
//! of the zero-knowledge claim.
//!
//! The simulator sees only public setup material, yet produces
//! transcripts the verifier accepts, together with language witnesses
//! showing the committed session really satisfies the padded verdict.
//! If a distinguisher can't tell these from honest transcripts, honest
//! transcripts can't be leaking the witness.

use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::ProtocolParams;
use cvqc::zkp::{
    relation, setup_zk, simulate, zk_verify, LInstance, ToyNizk, TransparentFhe, UniformChallenge,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let instance = reference_instance(-0.9, -0.5);
    let params = ProtocolParams::new(8, 2, 8, 3, Backend::Mock)?;
    let session = setup_zk(&TransparentFhe, params, &mut rng)?;

    let mut accepted = 0usize;
    let mut in_language = 0usize;
    let runs = 50;
    for _ in 0..runs {
        let (t, tau) = simulate(
            &TransparentFhe,
            &ToyNizk,
            &instance,
            &session,
            &mut UniformChallenge,
            &mut rng,
        )?;
        accepted += zk_verify(&TransparentFhe, &ToyNizk, &instance, &session.verifier, &t) as usize;
        let x = LInstance {
            instance: instance.clone(),
            setup: session.verifier.setup.clone(),
            xi: t.xi,
            y: t.y.clone(),
            c: t.c.clone(),
            chi: t.chi,
        };
        in_language += relation(&x, &tau) as usize;
    }
    println!("runs                 {runs}");
    println!("verifier accepted    {accepted}");
    println!("relation holds       {in_language}");
    println!("witness touched      0 (the simulator has no witness parameter)");
    Ok(())
}
