//! Toy LWE-shaped function-family backend: noiseless linear maps over `Z_q`.
//!
//! Preimages are vectors in `Z_q^n` (coordinates encoded one byte each, so
//! `q ≤ 251` keeps every coordinate in range). There is no error term, which
//! makes inversion exact linear algebra — and the construction completely
//! insecure. It exists to exercise a second key shape (vector domains whose
//! claw XOR runs over byte encodings) through the identical protocol paths.
//!
//! * Claw-free pair: `f(b, x) = A·x + b·(A·s) mod q` with invertible square
//!   `A`. Claws of `y` are `(A⁻¹y, A⁻¹y − s)`.
//! * Injective family: `g(b, x) = A·x + b·u mod q` with `A` of shape
//!   `(n+1)×n`, full column rank, and `u` outside the column space, so the
//!   two branches never collide and most of `Z_q^{n+1}` is non-image.

use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

/// Largest prime that keeps one coordinate per byte.
pub const DEFAULT_Q: u16 = 251;

fn is_prime(q: u16) -> bool {
    if q < 2 {
        return false;
    }
    (2..=((q as f64).sqrt() as u16)).all(|d| q % d != 0)
}

/// `a^(q-2) mod q`, the inverse of `a` modulo prime `q`.
fn inv_mod(a: u64, q: u64) -> u64 {
    let mut base = a % q;
    let mut exp = q - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Dense matrix over `Z_q`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatQ {
    pub rows: usize,
    pub cols: usize,
    pub q: u16,
    pub data: Vec<u16>,
}

impl MatQ {
    pub fn zero(rows: usize, cols: usize, q: u16) -> Self {
        MatQ {
            rows,
            cols,
            q,
            data: vec![0; rows * cols],
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, q: u16) -> Self {
        MatQ {
            rows,
            cols,
            q,
            data: (0..rows * cols).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    pub fn identity(n: usize, q: u16) -> Self {
        let mut m = Self::zero(n, n, q);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn mul_vec(&self, x: &[u16]) -> Vec<u16> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc += self[(r, c)] as u64 * x[c] as u64;
                }
                (acc % self.q as u64) as u16
            })
            .collect()
    }

    /// Row-reduces an augmented system `[self | y]` and returns the unique
    /// solution of `self · x = y`, `None` if inconsistent. Requires full
    /// column rank (checked by pivot count).
    pub fn solve(&self, y: &[u16]) -> Option<Vec<u16>> {
        assert_eq!(y.len(), self.rows);
        let q = self.q as u64;
        let (m, n) = (self.rows, self.cols);
        // Augmented working copy in u64.
        let mut w: Vec<Vec<u64>> = (0..m)
            .map(|r| {
                let mut row: Vec<u64> = (0..n).map(|c| self[(r, c)] as u64).collect();
                row.push(y[r] as u64);
                row
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..n {
            let Some(p) = (pivot_row..m).find(|&r| w[r][col] % q != 0) else {
                return None; // rank deficient: no unique solution
            };
            w.swap(pivot_row, p);
            let inv = inv_mod(w[pivot_row][col], q);
            for c in col..=n {
                w[pivot_row][c] = w[pivot_row][c] * inv % q;
            }
            for r in 0..m {
                if r != pivot_row && w[r][col] % q != 0 {
                    let f = w[r][col] % q;
                    for c in col..=n {
                        let sub = f * w[pivot_row][c] % q;
                        w[r][c] = (w[r][c] + q - sub) % q;
                    }
                }
            }
            pivot_row += 1;
        }
        // Consistency: rows below the pivots must have zero RHS.
        for r in pivot_row..m {
            if w[r][n] % q != 0 {
                return None;
            }
        }
        Some((0..n).map(|c| w[c][n] as u16).collect())
    }

    pub fn rank(&self) -> usize {
        let q = self.q as u64;
        let (m, n) = (self.rows, self.cols);
        let mut w: Vec<Vec<u64>> = (0..m)
            .map(|r| (0..n).map(|c| self[(r, c)] as u64).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..m).find(|&r| w[r][col] % q != 0) else {
                continue;
            };
            w.swap(rank, p);
            let inv = inv_mod(w[rank][col], q);
            for c in col..n {
                w[rank][c] = w[rank][c] * inv % q;
            }
            for r in 0..m {
                if r != rank && w[r][col] % q != 0 {
                    let f = w[r][col] % q;
                    for c in col..n {
                        let sub = f * w[rank][c] % q;
                        w[r][c] = (w[r][c] + q - sub) % q;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse of a square full-rank matrix.
    pub fn inverse(&self) -> Option<MatQ> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0u16; n];
            e[i] = 1;
            cols.push(self.solve(&e)?);
        }
        let mut inv = MatQ::zero(n, n, self.q);
        for (c, col) in cols.iter().enumerate() {
            for r in 0..n {
                inv[(r, c)] = col[r];
            }
        }
        Some(inv)
    }

    pub fn write(&self, w: &mut Writer) {
        w.put_u32(self.rows as u32);
        w.put_u32(self.cols as u32);
        w.put_u32(self.q as u32);
        for &v in &self.data {
            w.put_u32(v as u32);
        }
    }

    pub fn read(r: &mut Reader) -> Result<Self> {
        let rows = r.get_u32()? as usize;
        let cols = r.get_u32()? as usize;
        let q = r.get_u32()?;
        if rows == 0 || cols == 0 || rows > 16 || cols > 16 || q > DEFAULT_Q as u32 || !is_prime(q as u16) {
            return Err(Error::Encoding("bad matrix header".into()));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let v = r.get_u32()?;
            if v >= q {
                return Err(Error::Encoding("matrix entry out of range".into()));
            }
            data.push(v as u16);
        }
        Ok(MatQ {
            rows,
            cols,
            q: q as u16,
            data,
        })
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = u16;
    fn index(&self, (r, c): (usize, usize)) -> &u16 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u16 {
        &mut self.data[r * self.cols + c]
    }
}

fn add_vec(a: &[u16], b: &[u16], q: u16) -> Vec<u16> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u32 + y as u32) % q as u32) as u16)
        .collect()
}

fn sub_vec(a: &[u16], b: &[u16], q: u16) -> Vec<u16> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u32 + q as u32 - y as u32) % q as u32) as u16)
        .collect()
}

/// Encodes a `Z_q` vector as one byte per coordinate.
pub fn encode_vec(v: &[u16]) -> Bits {
    let bytes: Vec<u8> = v.iter().map(|&c| c as u8).collect();
    Bits::from_bytes(8 * v.len(), &bytes).expect("byte-aligned")
}

/// Decodes a byte-per-coordinate vector, checking coordinates against `q`.
pub fn decode_vec(bits: &Bits, len: usize, q: u16) -> Option<Vec<u16>> {
    if bits.len() != 8 * len {
        return None;
    }
    let mut out = Vec::with_capacity(len);
    for &byte in bits.as_bytes() {
        if byte as u16 >= q {
            return None;
        }
        out.push(byte as u16);
    }
    Some(out)
}

/// Claw-free toy-LWE pair. Public data: `(A, A·s)`; trapdoor: `(A⁻¹, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LweNtcf {
    pub a: MatQ,
    pub a_s: Vec<u16>,
}

/// Trapdoor half of [`LweNtcf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LweNtcfTrapdoor {
    pub a_inv: MatQ,
    pub s: Vec<u16>,
}

impl LweNtcf {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n: usize, q: u16) -> (Self, LweNtcfTrapdoor) {
        assert!(is_prime(q) && q <= DEFAULT_Q && n >= 1 && n <= 8);
        loop {
            let a = MatQ::random(rng, n, n, q);
            if a.rank() < n {
                continue;
            }
            let s: Vec<u16> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            if s.iter().all(|&c| c == 0) {
                continue; // a zero shift would collapse the two branches
            }
            let a_inv = a.inverse().expect("full rank");
            let a_s = a.mul_vec(&s);
            return (LweNtcf { a, a_s }, LweNtcfTrapdoor { a_inv, s });
        }
    }

    /// Builds from explicit parts (used by tests with pinned matrices).
    pub fn from_parts(a: MatQ, s: Vec<u16>) -> Result<(Self, LweNtcfTrapdoor)> {
        if a.rows != a.cols || a.rank() < a.rows {
            return Err(Error::InvalidInstance("A must be square and invertible".into()));
        }
        if s.len() != a.cols || s.iter().any(|&c| c >= a.q) || s.iter().all(|&c| c == 0) {
            return Err(Error::InvalidInstance("bad shift vector".into()));
        }
        let a_inv = a.inverse().expect("full rank");
        let a_s = a.mul_vec(&s);
        Ok((LweNtcf { a, a_s }, LweNtcfTrapdoor { a_inv, s }))
    }

    pub fn n(&self) -> usize {
        self.a.cols
    }

    pub fn q(&self) -> u16 {
        self.a.q
    }

    pub fn eval(&self, b: bool, x: &Bits) -> Result<Bits> {
        let xv = decode_vec(x, self.n(), self.q()).ok_or_else(|| {
            Error::DimensionMismatch("preimage is not a valid coordinate vector".into())
        })?;
        let mut y = self.a.mul_vec(&xv);
        if b {
            y = add_vec(&y, &self.a_s, self.q());
        }
        Ok(encode_vec(&y))
    }
}

impl LweNtcfTrapdoor {
    pub fn invert(&self, pk: &LweNtcf, b: bool, y: &Bits) -> Option<Bits> {
        let yv = decode_vec(y, pk.n(), pk.q())?;
        let mut x = self.a_inv.mul_vec(&yv);
        if b {
            x = sub_vec(&x, &self.s, pk.q());
        }
        Some(encode_vec(&x))
    }

    pub fn claw(&self, pk: &LweNtcf, y: &Bits) -> Option<(Bits, Bits)> {
        let x0 = self.invert(pk, false, y)?;
        let x1 = self.invert(pk, true, y)?;
        Some((x0, x1))
    }
}

/// Injective toy-LWE family. Public data: `(A, u)` with `u` outside the
/// column space of `A`; inversion solves the linear system per branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LweNtif {
    pub a: MatQ,
    pub u: Vec<u16>,
}

impl LweNtif {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n: usize, q: u16) -> Self {
        assert!(is_prime(q) && q <= DEFAULT_Q && n >= 1 && n <= 8);
        loop {
            let a = MatQ::random(rng, n + 1, n, q);
            if a.rank() < n {
                continue;
            }
            let u: Vec<u16> = (0..n + 1).map(|_| rng.gen_range(0..q)).collect();
            if a.solve(&u).is_some() {
                continue; // u must lie outside the column space
            }
            return LweNtif { a, u };
        }
    }

    pub fn n(&self) -> usize {
        self.a.cols
    }

    pub fn q(&self) -> u16 {
        self.a.q
    }

    pub fn eval(&self, b: bool, x: &Bits) -> Result<Bits> {
        let xv = decode_vec(x, self.n(), self.q()).ok_or_else(|| {
            Error::DimensionMismatch("preimage is not a valid coordinate vector".into())
        })?;
        let mut y = self.a.mul_vec(&xv);
        if b {
            y = add_vec(&y, &self.u, self.q());
        }
        Ok(encode_vec(&y))
    }

    /// Unique `(b, x)` with `g(b, x) = y`, or `None` for non-images.
    pub fn invert_pair(&self, y: &Bits) -> Option<(bool, Bits)> {
        let yv = decode_vec(y, self.n() + 1, self.q())?;
        if let Some(x) = self.a.solve(&yv) {
            return Some((false, encode_vec(&x)));
        }
        let shifted = sub_vec(&yv, &self.u, self.q());
        self.a.solve(&shifted).map(|x| (true, encode_vec(&x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solve_and_inverse_over_small_prime() {
        // A = [[1, 2], [3, 4]] mod 5; det = -2 = 3, invertible.
        let mut a = MatQ::zero(2, 2, 5);
        a[(0, 0)] = 1;
        a[(0, 1)] = 2;
        a[(1, 0)] = 3;
        a[(1, 1)] = 4;
        assert_eq!(a.rank(), 2);
        let x = a.solve(&[0, 1]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![0, 1]);
        let inv = a.inverse().unwrap();
        for (i, e) in [(0, [1u16, 0]), (1, [0, 1])] {
            let mut unit = vec![0u16; 2];
            unit[i] = 1;
            assert_eq!(a.mul_vec(&inv.mul_vec(&unit)), e.to_vec());
        }
    }

    #[test]
    fn pinned_identity_example() {
        // A = I, s = (1, 2), q = 5: f(1, (2,2)) = (3, 4) and the claw of
        // (3, 4) is ((3, 4), (2, 2)).
        let (pk, sk) = LweNtcf::from_parts(MatQ::identity(2, 5), vec![1, 2]).unwrap();
        let y = pk.eval(true, &encode_vec(&[2, 2])).unwrap();
        assert_eq!(y, encode_vec(&[3, 4]));
        let (x0, x1) = sk.claw(&pk, &y).unwrap();
        assert_eq!(x0, encode_vec(&[3, 4]));
        assert_eq!(x1, encode_vec(&[2, 2]));
    }

    #[test]
    fn ntcf_claw_property_on_random_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (pk, sk) = LweNtcf::sample(&mut rng, 3, DEFAULT_Q);
        for _ in 0..100 {
            let x: Vec<u16> = (0..3).map(|_| rng.gen_range(0..DEFAULT_Q)).collect();
            let y = pk.eval(false, &encode_vec(&x)).unwrap();
            let (x0, x1) = sk.claw(&pk, &y).unwrap();
            assert_eq!(x0, encode_vec(&x));
            assert_eq!(pk.eval(true, &x1).unwrap(), y);
            assert_eq!(sk.invert(&pk, true, &y).unwrap(), x1);
        }
    }

    #[test]
    fn ntif_inverts_images_and_rejects_non_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = LweNtif::sample(&mut rng, 2, 11);
        for b in [false, true] {
            for _ in 0..50 {
                let x: Vec<u16> = (0..2).map(|_| rng.gen_range(0..11)).collect();
                let y = g.eval(b, &encode_vec(&x)).unwrap();
                assert_eq!(g.invert_pair(&y).unwrap(), (b, encode_vec(&x)));
            }
        }
        // Images fill 2·q² = 242 of q³ = 1331 points; random probes must hit
        // at least one reject, and rejects must never panic.
        let mut rejected = 0;
        for _ in 0..50 {
            let y: Vec<u16> = (0..3).map(|_| rng.gen_range(0..11)).collect();
            if g.invert_pair(&encode_vec(&y)).is_none() {
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn coordinate_range_is_enforced() {
        let (pk, _) = LweNtcf::from_parts(MatQ::identity(2, 5), vec![1, 2]).unwrap();
        // Coordinate 7 ≥ q = 5.
        let bad = Bits::from_bytes(16, &[7, 0]).unwrap();
        assert!(pk.eval(false, &bad).is_err());
        let g_y_bad = Bits::from_bytes(16, &[7, 0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = LweNtif::sample(&mut rng, 1, 5);
        assert!(g.invert_pair(&g_y_bad).is_none());
    }
}
