//! Exact diagonalization of two-local ZX Hamiltonians: spectra, ground
//! states, and the yes/no promise.
//!
//! Instances are sums `Σ J_ij (X_i X_j + Z_i Z_j)` normalized so the
//! energy lands in [-1, 1]. A yes-instance has ground energy at most `a`;
//! a no-instance stays at or above `b`.

use cvqc::hamiltonian::{random_instance, reference_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let h = reference_instance(-0.9, -0.5);
    let (e0, ground) = h.ground();
    println!("reference two-qubit instance (a = {}, b = {}):", h.a, h.b);
    println!("  spectrum       {:?}", h.spectrum());
    println!("  ground energy  {e0:.6}");
    println!("  ground state   {:?}", ground.amps());
    println!("  energy check   {:.6}", h.energy(&ground)?);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=4 {
        let h = random_instance(n, 0.4, &mut rng)?;
        let (e0, _) = h.ground();
        let promise = if e0 <= h.a { "yes" } else { "no" };
        println!(
            "random n={n}: ground {e0:+.4}, thresholds ({:+.4}, {:+.4}) -> {promise}",
            h.a, h.b
        );
    }
    Ok(())
}
