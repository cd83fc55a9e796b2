//! Measure-and-reprogram: turning a one-query random-oracle adversary
//! into a prover against an external challenge.
//!
//! The simulator guesses which query to intercept, forwards its
//! commitment, and reprograms the oracle with the external challenge
//! θ — before or after answering, by a coin. The success floor for a
//! perfect underlying adversary is `fs_bound(q, |Y|, 1)`.

use cvqc::fiatshamir::{fs_bound, reduction_sim, ClassicalAdversary};
use cvqc::Bits;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Queries once, then answers with whatever the oracle said for its one
/// commitment — a perfect (ε = 1) adversary in the plain FS game.
struct OneQuery;

impl ClassicalAdversary for OneQuery {
    fn queries(&self) -> usize {
        1
    }
    fn run(
        &mut self,
        oracle: &mut dyn FnMut(&[u8], &[u8]) -> cvqc::Result<Bits>,
        _rng: &mut dyn RngCore,
    ) -> cvqc::Result<(Vec<u8>, Bits)> {
        let y = b"the only commitment".to_vec();
        let c = oracle(b"context", &y)?;
        Ok((y, c))
    }
}

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k = 4;
    let trials = 20_000;
    let mut successes = 0usize;
    let mut aborted = 0usize;
    for _ in 0..trials {
        let theta = Bits::random(&mut rng, k);
        // The response must equal the external challenge on the forwarded
        // commitment — exactly the FS winning condition here.
        let outcome = reduction_sim(&mut OneQuery, &theta, &|m, th| m == th, &mut rng)?;
        successes += outcome.success as usize;
        aborted += outcome.aborted as usize;
    }
    let rate = successes as f64 / trials as f64;
    let floor = fs_bound(1, 2f64.powi(k as i32), 1.0);
    let expected = 0.25 + 0.75 * 0.5f64.powi(k as i32);
    println!("simulator success rate {rate:.4} over {trials} runs ({aborted} aborts)");
    println!("expected for this adversary {expected:.4}; guaranteed floor {floor:.4}");
    assert!(rate >= floor - 0.02, "the reduction keeps its promise");
    Ok(())
}
