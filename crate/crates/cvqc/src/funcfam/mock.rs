//! Mock function-family backend: keyed bijections over small bitstrings.
//!
//! The bijection is a few rounds of invertible integer mixing (odd
//! multiplication, addition, xorshift) modulo `2^m`, keyed by constants drawn
//! at key generation. It is **not** cryptographic — the public key determines
//! the whole permutation, so anyone who parses key internals could compute
//! claws. Honest parties and modelled adversaries only ever use the public
//! evaluation API, which is what the simulations rely on.
//!
//! * Claw-free pair (two-to-one overall): `f(b, x) = P(x ⊕ b·Δ)` on `w`-bit
//!   strings, with a hidden nonzero shift `Δ`. Claws are exactly the pairs
//!   `(x, x ⊕ Δ)`, so every image has one claw: a perfect matching.
//! * Injective family: `f(b, x) = P(0 ∥ b ∥ x)` on `w + 2` bits. The leading
//!   zero makes the range a half-dense subset, so inversion can genuinely
//!   reject non-images.

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

/// Number of mixing rounds. Invertibility holds for any count; a handful of
/// rounds decorrelates inputs enough for a toy permutation.
const ROUNDS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Round {
    mul: u64,   // odd
    add: u64,
    shift: u32, // ≥ 1
}

/// Keyed bijection on `width`-bit integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixPerm {
    width: usize,
    rounds: [Round; ROUNDS],
}

/// Inverse of `x ^= x >> s` on a `width`-bit value.
fn inv_xorshift(y: u64, shift: u32, width: usize) -> u64 {
    let mut x = y;
    let mut done = shift as usize;
    while done < width {
        x = y ^ (x >> shift);
        done += shift as usize;
    }
    x
}

/// Inverse of an odd constant modulo 2^64 (hence modulo any smaller power of
/// two after masking), by Newton iteration.
fn inv_odd(c: u64) -> u64 {
    let mut inv = c;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(c.wrapping_mul(inv)));
    }
    inv
}

impl MixPerm {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Self {
        assert!((1..=32).contains(&width), "MixPerm supports 1..=32 bits");
        let mask = Self::mask_for(width);
        let max_shift = (width.max(2) - 1) as u32;
        let rounds = std::array::from_fn(|_| Round {
            mul: (rng.gen::<u64>() & mask) | 1,
            add: rng.gen::<u64>() & mask,
            shift: rng.gen_range(1..=max_shift),
        });
        MixPerm { width, rounds }
    }

    fn mask_for(width: usize) -> u64 {
        if width == 64 {
            u64::MAX
        } else {
            (1u64 << width) - 1
        }
    }

    fn mask(&self) -> u64 {
        Self::mask_for(self.width)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn apply(&self, x: u64) -> u64 {
        debug_assert!(x <= self.mask());
        let mask = self.mask();
        let mut t = x;
        for r in &self.rounds {
            t = t.wrapping_mul(r.mul) & mask;
            t = t.wrapping_add(r.add) & mask;
            t ^= t >> r.shift;
        }
        t
    }

    pub fn invert(&self, y: u64) -> u64 {
        debug_assert!(y <= self.mask());
        let mask = self.mask();
        let mut t = y;
        for r in self.rounds.iter().rev() {
            t = inv_xorshift(t, r.shift, self.width);
            t = t.wrapping_sub(r.add) & mask;
            t = t.wrapping_mul(inv_odd(r.mul)) & mask;
        }
        t
    }

    pub fn write(&self, w: &mut Writer) {
        w.put_u8(self.width as u8);
        for r in &self.rounds {
            w.put_u64(r.mul);
            w.put_u64(r.add);
            w.put_u32(r.shift);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self> {
        let width = r.get_u8()? as usize;
        if !(1..=32).contains(&width) {
            return Err(Error::Encoding(format!("bad permutation width {width}")));
        }
        let mut rounds = [Round { mul: 1, add: 0, shift: 1 }; ROUNDS];
        for round in &mut rounds {
            let mul = r.get_u64()?;
            let add = r.get_u64()?;
            let shift = r.get_u32()?;
            let mask = Self::mask_for(width);
            if mul & 1 == 0 || mul > mask || add > mask || shift == 0 || shift as usize >= width.max(2) {
                return Err(Error::Encoding("bad permutation round constants".into()));
            }
            *round = Round { mul, add, shift };
        }
        Ok(MixPerm { width, rounds })
    }
}

/// Claw-free mock: `f(b, x) = P(x ⊕ b·Δ)` over `w` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockNtcf {
    pub perm: MixPerm,
    pub delta: Bits,
}

impl MockNtcf {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Self {
        let perm = MixPerm::sample(rng, width);
        let delta = Bits::random_nonzero(rng, width);
        MockNtcf { perm, delta }
    }

    pub fn width(&self) -> usize {
        self.perm.width()
    }

    pub fn eval(&self, b: bool, x: &Bits) -> Result<Bits> {
        if x.len() != self.width() {
            return Err(Error::DimensionMismatch(format!(
                "preimage has {} bits, domain needs {}",
                x.len(),
                self.width()
            )));
        }
        let inp = if b { x.xor(&self.delta) } else { x.clone() };
        Ok(Bits::from_u64(self.perm.apply(inp.to_u64()), self.width()))
    }

    /// Branch-specific inversion; total for this backend (the permutation is
    /// onto all `w`-bit strings).
    pub fn invert(&self, b: bool, y: &Bits) -> Option<Bits> {
        if y.len() != self.width() {
            return None;
        }
        let x0 = Bits::from_u64(self.perm.invert(y.to_u64()), self.width());
        Some(if b { x0.xor(&self.delta) } else { x0 })
    }

    /// The claw of `y`: the pair `(x_0, x_1)` with `f(0, x_0) = f(1, x_1) = y`.
    pub fn claw(&self, y: &Bits) -> Option<(Bits, Bits)> {
        let x0 = self.invert(false, y)?;
        let x1 = x0.xor(&self.delta);
        Some((x0, x1))
    }
}

/// Injective mock: `f(b, x) = P(0 ∥ b ∥ x)` over `w + 2` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockNtif {
    pub perm: MixPerm,
    pub width: usize,
}

impl MockNtif {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Self {
        let perm = MixPerm::sample(rng, width + 2);
        MockNtif { perm, width }
    }

    pub fn image_bits(&self) -> usize {
        self.width + 2
    }

    pub fn eval(&self, b: bool, x: &Bits) -> Result<Bits> {
        if x.len() != self.width {
            return Err(Error::DimensionMismatch(format!(
                "preimage has {} bits, domain needs {}",
                x.len(),
                self.width
            )));
        }
        let z = ((b as u64) << self.width) | x.to_u64();
        Ok(Bits::from_u64(self.perm.apply(z), self.image_bits()))
    }

    /// Decodes `y` to the unique `(b, x)` preimage, or `None` when `y` is
    /// outside the (half-dense) range.
    pub fn invert_pair(&self, y: &Bits) -> Option<(bool, Bits)> {
        if y.len() != self.image_bits() {
            return None;
        }
        let z = self.perm.invert(y.to_u64());
        if z >> (self.width + 1) != 0 {
            return None;
        }
        let b = (z >> self.width) & 1 == 1;
        Some((b, Bits::from_u64(z & ((1u64 << self.width) - 1), self.width)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn mixperm_is_a_bijection_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for width in [1usize, 2, 3, 8, 11] {
            let p = MixPerm::sample(&mut rng, width);
            let mut seen = BTreeSet::new();
            for x in 0..(1u64 << width) {
                let y = p.apply(x);
                assert!(y < (1 << width));
                assert!(seen.insert(y), "collision at width {width}");
                assert_eq!(p.invert(y), x, "inverse failed at width {width}");
            }
        }
    }

    #[test]
    fn ntcf_claws_form_a_perfect_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = MockNtcf::sample(&mut rng, 8);
        // Every x satisfies f(0, x) = f(1, x ⊕ Δ)…
        for xv in 0..256u64 {
            let x = Bits::from_u64(xv, 8);
            let y = f.eval(false, &x).unwrap();
            assert_eq!(f.eval(true, &x.xor(&f.delta)).unwrap(), y);
        }
        // …and every y decodes to exactly one claw, consistent both ways.
        for yv in 0..256u64 {
            let y = Bits::from_u64(yv, 8);
            let (x0, x1) = f.claw(&y).unwrap();
            assert_eq!(f.eval(false, &x0).unwrap(), y);
            assert_eq!(f.eval(true, &x1).unwrap(), y);
            assert_eq!(x0.xor(&x1), f.delta);
            assert_eq!(f.invert(false, &y).unwrap(), x0);
            assert_eq!(f.invert(true, &y).unwrap(), x1);
        }
    }

    #[test]
    fn ntif_is_injective_with_sparse_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = MockNtif::sample(&mut rng, 8);
        let mut images = BTreeSet::new();
        for b in [false, true] {
            for xv in 0..256u64 {
                let x = Bits::from_u64(xv, 8);
                let y = g.eval(b, &x).unwrap();
                assert!(images.insert(y.clone()), "injectivity violated");
                assert_eq!(g.invert_pair(&y).unwrap(), (b, x));
            }
        }
        assert_eq!(images.len(), 512);
        // Exactly half of the 1024-point codomain is non-image and rejects.
        let rejects = (0..1024u64)
            .filter(|&yv| g.invert_pair(&Bits::from_u64(yv, 10)).is_none())
            .count();
        assert_eq!(rejects, 512);
    }

    #[test]
    fn width_one_family_still_works() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = MockNtcf::sample(&mut rng, 1);
        assert_eq!(f.delta.to_u64(), 1, "the only nonzero 1-bit shift is 1");
        let y = f.eval(false, &Bits::from_u64(0, 1)).unwrap();
        let (x0, x1) = f.claw(&y).unwrap();
        assert_eq!(x0.xor(&x1).to_u64(), 1);
    }

    #[test]
    fn malformed_inputs_error_or_reject() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = MockNtcf::sample(&mut rng, 8);
        assert!(f.eval(false, &Bits::zero(7)).is_err());
        assert!(f.invert(false, &Bits::zero(7)).is_none());
        let g = MockNtif::sample(&mut rng, 8);
        assert!(g.eval(true, &Bits::zero(9)).is_err());
        assert!(g.invert_pair(&Bits::zero(8)).is_none());
    }
}
