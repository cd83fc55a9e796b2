//! Trapdoor function families used to commit to qubits.
//!
//! Two family kinds exist, one per measurement basis:
//!
//! * [`FamilyKind::Ntcf`] — a *claw-free pair*: two injections `f(0,·)`,
//!   `f(1,·)` onto the same range, whose collisions (claws) are hidden from
//!   anyone without the trapdoor. Commits X-basis qubits.
//! * [`FamilyKind::Ntif`] — an *injective family*: `f(b, x)` globally
//!   injective, so an image pins down `(b, x)` exactly. Commits Z-basis
//!   qubits.
//!
//! Families are idealized: evaluation is deterministic (point mass, no noise
//! distributions), claw-free pairs have a perfect claw matching, and
//! inversion is exact with an explicit reject for non-images.
//!
//! Both toy backends ([`Backend::Mock`] and [`Backend::ToyLwe`]) are
//! **insecure by design** — their public keys mathematically determine the
//! trapdoor. Security is not the point; faithfulness of the interface is.
//! Soundness experiments stay meaningful because modelled classical provers
//! interact with keys only through [`PublicKey`]'s evaluation API.

mod mock;
mod toylwe;

pub use mock::{MixPerm, MockNtcf, MockNtif};
pub use toylwe::{encode_vec, LweNtcf, LweNtcfTrapdoor, LweNtif, MatQ, DEFAULT_Q};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

/// Which toy construction realizes the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Keyed bijections over bitstrings with a hidden XOR shift.
    Mock,
    /// Noiseless linear maps over `Z_q`.
    ToyLwe,
}

/// Claw-free (X basis) or injective (Z basis) family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Ntcf,
    Ntif,
}

impl FamilyKind {
    /// The measurement basis this kind commits: `true` = X (claw-free),
    /// `false` = Z (injective).
    pub fn for_basis(x_basis: bool) -> Self {
        if x_basis {
            FamilyKind::Ntcf
        } else {
            FamilyKind::Ntif
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PkInner {
    MockNtcf(MockNtcf),
    MockNtif(MockNtif),
    LweNtcf(LweNtcf),
    LweNtif(LweNtif),
}

/// Public evaluation key. This is everything honest provers and modelled
/// adversaries may touch: evaluate, check, and sample domain elements.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    inner: PkInner,
}

#[derive(Clone, Debug, PartialEq)]
enum SkExtra {
    Mock,
    LweNtcf(LweNtcfTrapdoor),
    LweNtif,
}

/// Trapdoor key: inverts images and reveals claws. Held by the verifier.
#[derive(Clone, Debug, PartialEq)]
pub struct SecretKey {
    pk: PublicKey,
    extra: SkExtra,
}

/// A generated `(pk, sk)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

impl PublicKey {
    pub fn backend(&self) -> Backend {
        match self.inner {
            PkInner::MockNtcf(_) | PkInner::MockNtif(_) => Backend::Mock,
            PkInner::LweNtcf(_) | PkInner::LweNtif(_) => Backend::ToyLwe,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self.inner {
            PkInner::MockNtcf(_) | PkInner::LweNtcf(_) => FamilyKind::Ntcf,
            PkInner::MockNtif(_) | PkInner::LweNtif(_) => FamilyKind::Ntif,
        }
    }

    /// Bit width of encoded domain elements `x`.
    pub fn domain_bits(&self) -> usize {
        match &self.inner {
            PkInner::MockNtcf(f) => f.width(),
            PkInner::MockNtif(g) => g.width,
            PkInner::LweNtcf(f) => 8 * f.n(),
            PkInner::LweNtif(g) => 8 * g.n(),
        }
    }

    /// Bit width of encoded images `y`.
    pub fn image_bits(&self) -> usize {
        match &self.inner {
            PkInner::MockNtcf(f) => f.width(),
            PkInner::MockNtif(g) => g.image_bits(),
            PkInner::LweNtcf(f) => 8 * f.n(),
            PkInner::LweNtif(g) => 8 * (g.n() + 1),
        }
    }

    /// Evaluates `f(b, x)`.
    pub fn eval(&self, b: bool, x: &Bits) -> Result<Bits> {
        match &self.inner {
            PkInner::MockNtcf(f) => f.eval(b, x),
            PkInner::MockNtif(g) => g.eval(b, x),
            PkInner::LweNtcf(f) => f.eval(b, x),
            PkInner::LweNtif(g) => g.eval(b, x),
        }
    }

    /// Verifies `f(b, x) = y`; malformed inputs simply fail the check.
    pub fn chk(&self, b: bool, x: &Bits, y: &Bits) -> bool {
        match self.eval(b, x) {
            Ok(img) => img == *y,
            Err(_) => false,
        }
    }

    /// Uniform sample from the domain, in encoded form.
    pub fn sample_domain<R: Rng + ?Sized>(&self, rng: &mut R) -> Bits {
        match &self.inner {
            PkInner::MockNtcf(f) => Bits::random(rng, f.width()),
            PkInner::MockNtif(g) => Bits::random(rng, g.width),
            PkInner::LweNtcf(f) => {
                let v: Vec<u16> = (0..f.n()).map(|_| rng.gen_range(0..f.q())).collect();
                encode_vec(&v)
            }
            PkInner::LweNtif(g) => {
                let v: Vec<u16> = (0..g.n()).map(|_| rng.gen_range(0..g.q())).collect();
                encode_vec(&v)
            }
        }
    }

    /// Canonical tagged encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-PK-v1");
        w.put_u8(match self.backend() {
            Backend::Mock => 0,
            Backend::ToyLwe => 1,
        });
        w.put_u8(match self.kind() {
            FamilyKind::Ntif => 0,
            FamilyKind::Ntcf => 1,
        });
        match &self.inner {
            PkInner::MockNtcf(f) => {
                f.perm.write(&mut w);
                w.put_bits(&f.delta);
            }
            PkInner::MockNtif(g) => {
                g.perm.write(&mut w);
                w.put_u8(g.width as u8);
            }
            PkInner::LweNtcf(f) => {
                f.a.write(&mut w);
                write_coord_vec(&mut w, &f.a_s);
            }
            PkInner::LweNtif(g) => {
                g.a.write(&mut w);
                write_coord_vec(&mut w, &g.u);
            }
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::tagged(bytes, "CVQC-PK-v1")?;
        let pk = read_pk_body(&mut r)?;
        r.done()?;
        Ok(pk)
    }
}

fn write_coord_vec(w: &mut Writer, v: &[u16]) {
    w.put_u32(v.len() as u32);
    for &c in v {
        w.put_u32(c as u32);
    }
}

fn read_coord_vec(r: &mut Reader, len: usize, q: u16) -> Result<Vec<u16>> {
    let n = r.get_u32()? as usize;
    if n != len {
        return Err(Error::Encoding("coordinate vector length mismatch".into()));
    }
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        let c = r.get_u32()?;
        if c >= q as u32 {
            return Err(Error::Encoding("coordinate out of range".into()));
        }
        v.push(c as u16);
    }
    Ok(v)
}

fn read_pk_body(r: &mut Reader) -> Result<PublicKey> {
    let backend = r.get_u8()?;
    let kind = r.get_u8()?;
    let inner = match (backend, kind) {
        (0, 1) => {
            let perm = MixPerm::read(r)?;
            let delta = r.get_bits()?;
            if delta.len() != perm.width() || delta.is_zero() {
                return Err(Error::Encoding("bad claw shift".into()));
            }
            PkInner::MockNtcf(MockNtcf { perm, delta })
        }
        (0, 0) => {
            let perm = MixPerm::read(r)?;
            let width = r.get_u8()? as usize;
            if perm.width() != width + 2 {
                return Err(Error::Encoding("permutation width must be domain width + 2".into()));
            }
            PkInner::MockNtif(MockNtif { perm, width })
        }
        (1, 1) => {
            let a = MatQ::read(r)?;
            if a.rows != a.cols {
                return Err(Error::Encoding("claw-free matrix must be square".into()));
            }
            let a_s = read_coord_vec(r, a.rows, a.q)?;
            PkInner::LweNtcf(LweNtcf { a, a_s })
        }
        (1, 0) => {
            let a = MatQ::read(r)?;
            if a.rows != a.cols + 1 {
                return Err(Error::Encoding("injective matrix must have n+1 rows".into()));
            }
            let u = read_coord_vec(r, a.rows, a.q)?;
            PkInner::LweNtif(LweNtif { a, u })
        }
        _ => return Err(Error::Encoding("unknown backend/kind bytes".into())),
    };
    Ok(PublicKey { inner })
}

impl SecretKey {
    /// The paired public key.
    pub fn public(&self) -> &PublicKey {
        &self.pk
    }

    pub fn kind(&self) -> FamilyKind {
        self.pk.kind()
    }

    /// Branch-specific inversion: the unique `x` with `f(b, x) = y`. Returns
    /// `None` when `y` is not an image under branch `b`.
    pub fn invert(&self, b: bool, y: &Bits) -> Option<Bits> {
        match (&self.pk.inner, &self.extra) {
            (PkInner::MockNtcf(f), _) => f.invert(b, y),
            (PkInner::MockNtif(g), _) => {
                let (bb, x) = g.invert_pair(y)?;
                (bb == b).then_some(x)
            }
            (PkInner::LweNtcf(f), SkExtra::LweNtcf(td)) => td.invert(f, b, y),
            (PkInner::LweNtif(g), _) => {
                let (bb, x) = g.invert_pair(y)?;
                (bb == b).then_some(x)
            }
            _ => None,
        }
    }

    /// Injective-family decode: the unique `(b, x)` with `f(b, x) = y`.
    /// `None` for non-images and for claw-free keys (which have no unique
    /// decode).
    pub fn invert_pair(&self, y: &Bits) -> Option<(bool, Bits)> {
        match &self.pk.inner {
            PkInner::MockNtif(g) => g.invert_pair(y),
            PkInner::LweNtif(g) => g.invert_pair(y),
            _ => None,
        }
    }

    /// Claw of `y` under a claw-free key: `(x_0, x_1)` with
    /// `f(0, x_0) = f(1, x_1) = y`. `None` for injective keys.
    pub fn claw(&self, y: &Bits) -> Option<(Bits, Bits)> {
        match (&self.pk.inner, &self.extra) {
            (PkInner::MockNtcf(f), _) => f.claw(y),
            (PkInner::LweNtcf(f), SkExtra::LweNtcf(td)) => td.claw(f, y),
            _ => None,
        }
    }

    /// Canonical tagged encoding (embeds the public key).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::tagged("CVQC-SK-v1");
        w.put_bytes(&self.pk.to_bytes());
        match &self.extra {
            SkExtra::Mock | SkExtra::LweNtif => w.put_u8(0),
            SkExtra::LweNtcf(td) => {
                w.put_u8(1);
                td.a_inv.write(&mut w);
                write_coord_vec(&mut w, &td.s);
            }
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::tagged(bytes, "CVQC-SK-v1")?;
        let pk_bytes = r.get_bytes()?;
        let pk = PublicKey::from_bytes(&pk_bytes)?;
        let has_trapdoor = r.get_u8()?;
        let extra = match (&pk.inner, has_trapdoor) {
            (PkInner::MockNtcf(_) | PkInner::MockNtif(_), 0) => SkExtra::Mock,
            (PkInner::LweNtif(_), 0) => SkExtra::LweNtif,
            (PkInner::LweNtcf(f), 1) => {
                let a_inv = MatQ::read(&mut r)?;
                let s = read_coord_vec(&mut r, f.n(), f.q())?;
                // The trapdoor must actually invert A and match A·s.
                if a_inv.rows != f.n() || a_inv.cols != f.n() || a_inv.q != f.q() {
                    return Err(Error::Encoding("trapdoor shape mismatch".into()));
                }
                for i in 0..f.n() {
                    let mut e = vec![0u16; f.n()];
                    e[i] = 1;
                    if f.a.mul_vec(&a_inv.mul_vec(&e)) != e {
                        return Err(Error::Encoding("trapdoor does not invert A".into()));
                    }
                }
                if f.a.mul_vec(&s) != f.a_s {
                    return Err(Error::Encoding("trapdoor shift mismatch".into()));
                }
                SkExtra::LweNtcf(LweNtcfTrapdoor { a_inv, s })
            }
            _ => return Err(Error::Encoding("trapdoor flag inconsistent with key".into())),
        };
        r.done()?;
        Ok(SecretKey { pk, extra })
    }
}

/// Maps the security parameter to toy sizes: mock keys use a domain width of
/// `λ` clamped to `[8, 24]` bits; toy-LWE keys use dimension `λ/8` clamped to
/// `[2, 4]` over `q = 251`.
pub fn gen<R: Rng + ?Sized>(backend: Backend, kind: FamilyKind, lambda: u32, rng: &mut R) -> KeyPair {
    match backend {
        Backend::Mock => mock_with_width(kind, (lambda as usize).clamp(8, 24), rng),
        Backend::ToyLwe => {
            let n = (lambda as usize / 8).clamp(2, 4);
            toylwe_with_dim(kind, n, DEFAULT_Q, rng)
        }
    }
}

/// Mock keys of an explicit domain width (1..=24 bits); small widths keep
/// exhaustive checks and full-register simulations tractable.
pub fn mock_with_width<R: Rng + ?Sized>(kind: FamilyKind, width: usize, rng: &mut R) -> KeyPair {
    assert!((1..=24).contains(&width), "mock domain width must be 1..=24");
    let inner = match kind {
        FamilyKind::Ntcf => PkInner::MockNtcf(MockNtcf::sample(rng, width)),
        FamilyKind::Ntif => PkInner::MockNtif(MockNtif::sample(rng, width)),
    };
    let pk = PublicKey { inner };
    let sk = SecretKey {
        pk: pk.clone(),
        extra: SkExtra::Mock,
    };
    KeyPair { pk, sk }
}

/// Toy-LWE keys of explicit dimension and modulus (prime, ≤ 251).
pub fn toylwe_with_dim<R: Rng + ?Sized>(kind: FamilyKind, n: usize, q: u16, rng: &mut R) -> KeyPair {
    match kind {
        FamilyKind::Ntcf => {
            let (f, td) = LweNtcf::sample(rng, n, q);
            let pk = PublicKey {
                inner: PkInner::LweNtcf(f),
            };
            let sk = SecretKey {
                pk: pk.clone(),
                extra: SkExtra::LweNtcf(td),
            };
            KeyPair { pk, sk }
        }
        FamilyKind::Ntif => {
            let g = LweNtif::sample(rng, n, q);
            let pk = PublicKey {
                inner: PkInner::LweNtif(g),
            };
            let sk = SecretKey {
                pk: pk.clone(),
                extra: SkExtra::LweNtif,
            };
            KeyPair { pk, sk }
        }
    }
}

/// Wraps a pinned claw-free toy-LWE key (tests with explicit matrices).
pub fn toylwe_ntcf_from_parts(a: MatQ, s: Vec<u16>) -> Result<KeyPair> {
    let (f, td) = LweNtcf::from_parts(a, s)?;
    let pk = PublicKey {
        inner: PkInner::LweNtcf(f),
    };
    let sk = SecretKey {
        pk: pk.clone(),
        extra: SkExtra::LweNtcf(td),
    };
    Ok(KeyPair { pk, sk })
}

/// One key per basis bit: `h_i = 1` gets a claw-free key, `h_i = 0` an
/// injective one.
pub fn gen_for_bases<R: Rng + ?Sized>(
    backend: Backend,
    lambda: u32,
    h: &Bits,
    rng: &mut R,
) -> Vec<KeyPair> {
    h.iter()
        .map(|x_basis| gen(backend, FamilyKind::for_basis(x_basis), lambda, rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_flavors(rng: &mut ChaCha8Rng) -> Vec<KeyPair> {
        vec![
            gen(Backend::Mock, FamilyKind::Ntcf, 8, rng),
            gen(Backend::Mock, FamilyKind::Ntif, 8, rng),
            gen(Backend::ToyLwe, FamilyKind::Ntcf, 16, rng),
            gen(Backend::ToyLwe, FamilyKind::Ntif, 16, rng),
        ]
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = all_flavors(&mut ChaCha8Rng::seed_from_u64(99));
        let b = all_flavors(&mut ChaCha8Rng::seed_from_u64(99));
        let c = all_flavors(&mut ChaCha8Rng::seed_from_u64(100));
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.pk.to_bytes(), y.pk.to_bytes());
            assert_eq!(x.sk.to_bytes(), y.sk.to_bytes());
        }
        assert!(a.iter().zip(&c).any(|(x, z)| x.pk.to_bytes() != z.pk.to_bytes()));
    }

    #[test]
    fn eval_chk_invert_round_trip_all_flavors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kp in all_flavors(&mut rng) {
            for _ in 0..50 {
                let b: bool = rng.gen();
                let x = kp.pk.sample_domain(&mut rng);
                assert_eq!(x.len(), kp.pk.domain_bits());
                let y = kp.pk.eval(b, &x).unwrap();
                assert_eq!(y.len(), kp.pk.image_bits());
                assert!(kp.pk.chk(b, &x, &y));
                assert!(!kp.pk.chk(!b, &x, &y), "branches never agree on one x");
                assert_eq!(kp.sk.invert(b, &y).unwrap(), x);
                match kp.pk.kind() {
                    FamilyKind::Ntcf => {
                        let (x0, x1) = kp.sk.claw(&y).unwrap();
                        assert_eq!(kp.pk.eval(false, &x0).unwrap(), y);
                        assert_eq!(kp.pk.eval(true, &x1).unwrap(), y);
                        assert!(kp.sk.invert_pair(&y).is_none());
                    }
                    FamilyKind::Ntif => {
                        assert_eq!(kp.sk.invert_pair(&y).unwrap(), (b, x.clone()));
                        assert!(kp.sk.claw(&y).is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn claw_branches_never_collide_for_ntcf() {
        // For claw-free keys the two branch preimages of one y must differ.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for kp in [
            gen(Backend::Mock, FamilyKind::Ntcf, 8, &mut rng),
            gen(Backend::ToyLwe, FamilyKind::Ntcf, 16, &mut rng),
        ] {
            for _ in 0..50 {
                let x = kp.pk.sample_domain(&mut rng);
                let y = kp.pk.eval(false, &x).unwrap();
                let (x0, x1) = kp.sk.claw(&y).unwrap();
                assert_ne!(x0, x1, "claw members must differ");
            }
        }
    }

    #[test]
    fn serialization_round_trips_and_rejects_corruption() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kp in all_flavors(&mut rng) {
            let pk2 = PublicKey::from_bytes(&kp.pk.to_bytes()).unwrap();
            assert_eq!(pk2, kp.pk);
            let sk2 = SecretKey::from_bytes(&kp.sk.to_bytes()).unwrap();
            assert_eq!(sk2, kp.sk);

            let mut bad = kp.pk.to_bytes();
            let last = bad.len() - 1;
            bad[last] ^= 0xff;
            // Either parse failure or a changed key; never a silent identical key.
            match PublicKey::from_bytes(&bad) {
                Ok(parsed) => assert_ne!(parsed, kp.pk),
                Err(_) => {}
            }
            assert!(PublicKey::from_bytes(&kp.pk.to_bytes()[..10]).is_err());
            assert!(SecretKey::from_bytes(&kp.pk.to_bytes()).is_err());
        }
    }

    #[test]
    fn bases_map_to_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = Bits::from_u64(0b1010, 4);
        let keys = gen_for_bases(Backend::Mock, 8, &h, &mut rng);
        let kinds: Vec<FamilyKind> = keys.iter().map(|k| k.pk.kind()).collect();
        assert_eq!(
            kinds,
            vec![FamilyKind::Ntcf, FamilyKind::Ntif, FamilyKind::Ntcf, FamilyKind::Ntif]
        );
        for k in &keys {
            assert_eq!(k.sk.public(), &k.pk);
        }
    }

    #[test]
    fn lambda_maps_to_clamped_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(gen(Backend::Mock, FamilyKind::Ntcf, 1, &mut rng).pk.domain_bits(), 8);
        assert_eq!(gen(Backend::Mock, FamilyKind::Ntcf, 16, &mut rng).pk.domain_bits(), 16);
        assert_eq!(gen(Backend::Mock, FamilyKind::Ntcf, 1000, &mut rng).pk.domain_bits(), 24);
        assert_eq!(gen(Backend::ToyLwe, FamilyKind::Ntcf, 16, &mut rng).pk.domain_bits(), 16);
        assert_eq!(gen(Backend::ToyLwe, FamilyKind::Ntif, 64, &mut rng).pk.domain_bits(), 32);
    }
}
