//! Two provers, one distribution: the compact committed-copy prover
//! against a literal full-register amplitude simulation.
//!
//! The compact prover never materializes the preimage registers; the
//! full-register oracle carries every amplitude and measures them
//! directly. Sampling both on the same keys should give matching
//! commitment-and-reply statistics — here, matching test-reply
//! histograms on a one-qubit witness.

use std::collections::BTreeMap;

use cvqc::fullsim::commit_full;
use cvqc::funcfam::{mock_with_width, FamilyKind};
use cvqc::qprover;
use cvqc::statevec::Statevector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let keys = vec![mock_with_width(FamilyKind::Ntcf, 3, &mut rng)];
    let witness = Statevector::from_reals(&[0.6, 0.8])?;

    let trials = 4000;
    let mut compact: BTreeMap<String, usize> = BTreeMap::new();
    let mut full: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..trials {
        let copy = qprover::commit(&witness, &keys, &mut rng)?;
        let reply = copy.measure_test(&mut rng);
        let q = &reply.qubits[0];
        *compact.entry(format!("{} {}", q.bit as u8, q.string.to_text())).or_default() += 1;

        let copy = commit_full(&witness, &keys, &mut rng)?;
        let reply = copy.measure_test(&mut rng);
        let q = &reply.qubits[0];
        *full.entry(format!("{} {}", q.bit as u8, q.string.to_text())).or_default() += 1;
    }

    println!("{:>12} {:>9} {:>9}", "(b, x)", "compact", "full");
    for key in compact.keys().chain(full.keys()).collect::<std::collections::BTreeSet<_>>() {
        println!(
            "{key:>12} {:>9} {:>9}",
            compact.get(key).copied().unwrap_or(0),
            full.get(key).copied().unwrap_or(0)
        );
    }
    Ok(())
}
