//! Cheating strategies against the challenge floor 2^-k.
//!
//! A classical prover must commit before seeing which groups become test
//! rounds. Opening everything survives only all-test challenges; junk
//! commitments survive only all-energy ones. The table shows measured
//! rates converging to (or staying under) the 2^-k reference.

use cvqc::analysis::{soundness_curve, StrategyKind, CURVE_DEFAULT_R};
use cvqc::funcfam::Backend;
use cvqc::hamiltonian::reference_instance;
use cvqc::protocol::ProtocolParams;

fn main() -> cvqc::Result<()> {
    let instance = reference_instance(-0.9, -0.5);
    let template = ProtocolParams::new(8, 2, CURVE_DEFAULT_R, 1, Backend::Mock)?;
    let ks = [1, 2, 3, 4, 5];
    let curve = soundness_curve(&instance, template, &ks, &StrategyKind::ALL, 2000, 1)?;

    print!("{:>4} {:>10}", "k", "2^-k");
    for kind in StrategyKind::ALL {
        print!(" {:>16}", kind.name());
    }
    println!();
    for row in &curve.rows {
        print!("{:>4} {:>10.4}", row.k, row.reference);
        for sr in &row.rates {
            print!(" {:>16.4}", sr.rate);
        }
        println!();
    }
    Ok(())
}
