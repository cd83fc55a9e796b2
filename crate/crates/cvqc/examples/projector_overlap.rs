//! The projector overlap inequality behind the soundness argument:
//! Σ ‖A_i ψ‖² ≤ 1 + √(Σ_{i≠j} δ_ij), checked on random instances.
//!
//! With pairwise-orthogonal projectors the left side is at most 1; the
//! correction term pays for overlaps, measured by the anticommutator
//! norms δ_ij. Nothing here is sampled from the protocol — the point is
//! that the inequality itself never fails.

use cvqc::analysis::lemma3_check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cvqc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (dim, m) in [(4, 2), (8, 4), (16, 4), (32, 8)] {
        let report = lemma3_check(dim, m, 2000, &mut rng)?;
        println!(
            "dim {dim:>2}, m {m}: violations {}, max lhs {:.4}, min slack {:.4}",
            report.violations, report.max_lhs, report.min_slack
        );
    }
    Ok(())
}
