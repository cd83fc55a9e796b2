//! Trapdoor function families up close: evaluate, check, invert, and
//! extract claws on both backends.
//!
//! A claw-free pair hides two functions f_0, f_1 with a shared image. The
//! public key evaluates and checks; only the secret key can invert an
//! image point or produce the claw `(x_0, x_1)` with `f_0(x_0) = f_1(x_1)`.

use cvqc::funcfam::{gen, Backend, FamilyKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for backend in [Backend::Mock, Backend::ToyLwe] {
        for kind in [FamilyKind::Ntcf, FamilyKind::Ntif] {
            let pair = gen(backend, kind, 8, &mut rng);
            let pk = &pair.pk;
            println!(
                "{:?}/{:?}: domain {} bits, image {} bits",
                backend,
                kind,
                pk.domain_bits(),
                pk.image_bits()
            );

            let x = pk.sample_domain(&mut rng);
            let y = pk.eval(false, &x).unwrap();
            assert!(pk.chk(false, &x, &y), "chk accepts its own evaluation");

            match kind {
                FamilyKind::Ntcf => {
                    // Two-to-one: the trapdoor recovers both preimages.
                    let (x0, x1) = pair.sk.claw(&y).expect("every image has a claw");
                    assert_eq!(pk.eval(false, &x0).unwrap(), y);
                    assert_eq!(pk.eval(true, &x1).unwrap(), y);
                    println!("  claw at y={}: x0={} x1={}", y.to_text(), x0.to_text(), x1.to_text());
                }
                FamilyKind::Ntif => {
                    // Injective: the trapdoor names the unique preimage.
                    let (b, xr) = pair.sk.invert_pair(&y).expect("image point inverts");
                    assert!(!b);
                    assert_eq!(xr, x);
                    println!("  inverted y={} back to (0, {})", y.to_text(), x.to_text());
                }
            }
        }
    }
    println!("all backend/family combinations behaved");
}
