//! The energy test in isolation: per-copy acceptance tracks (1 - E)/2,
//! and repetition concentrates it.
//!
//! For a witness at energy E, a random term is satisfied with
//! probability (1 - E)/2, so accepting when the satisfied fraction
//! clears the midpoint threshold separates E ≤ a from E ≥ b with error
//! at most `hoeffding_bound(r, (b - a)/2)`.

use cvqc::analysis::{energy_test_rate, hoeffding_bound, reference_witness};
use cvqc::hamiltonian::reference_instance;

fn main() -> cvqc::Result<()> {
    let instance = reference_instance(-0.6, -0.2);
    let r = 128;
    let g = (instance.b - instance.a) / 2.0;
    println!("thresholds ({}, {}), r = {r}, bound {:.4}", instance.a, instance.b, hoeffding_bound(r, g));
    println!("{:>8} {:>12} {:>12}", "E", "per-copy", "accept rate");

    for e in [-1.0, -0.8, -0.6, -0.4, -0.2, 0.0, 0.5] {
        let witness = reference_witness(e)?;
        let per_copy = instance.energy_test_probability(&witness)?;
        let rate = energy_test_rate(&instance, &witness, r, 400, 7)?;
        println!("{e:>8.2} {per_copy:>12.4} {rate:>12.4}");
    }
    println!("(per-copy column is exactly (1 - E)/2)");
    Ok(())
}
