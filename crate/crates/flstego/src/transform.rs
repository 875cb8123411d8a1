//! Fibonacci-Lucas torus transforms.
//!
//! A map is a 2x2 integer matrix acting on the N x N torus: a point (x, y)
//! moves to ((a*x + b*y) mod N, (c*x + d*y) mod N). The family is indexed
//! by a sequence position i, with rows taken from the Fibonacci and Lucas
//! sequences:
//!
//! ```text
//! FL(i) = | F_i  F_{i+1} |        F: 1, 1, 2, 3, 5, 8, 13, ...
//!         | L_i  L_{i+1} |        L: 2, 1, 3, 4, 7, 11, 18, ...
//! ```
//!
//! Note the Lucas indexing: the sequence starts 2, 1 here, so L_1 = 2 and
//! L_2 = 1. The determinant of FL(i) is exactly (-1)^i, a unit modulo any
//! N, so each map is a bijection on the torus and iterating it eventually
//! returns every pixel to its starting position. The smallest such
//! iteration count is the map's [`Period`].
//!
//! The classical Arnold cat map (1, 1; 1, 2) is available as a comparison
//! baseline under [`MapId::Arnold`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::Image;

/// Largest supported sequence index for map construction.
///
/// F_91 and L_91 are the largest terms a map with i = 90 needs, and both
/// still fit in 64 bits before reduction.
pub const MAX_MAP_INDEX: u32 = 90;

const MAX_SEQUENCE_INDEX: u32 = MAX_MAP_INDEX + 1;

/// n-th Fibonacci number with F_1 = 1, F_2 = 1.
pub fn fib(n: u32) -> Result<u64> {
    sequence(n, 1, 1)
}

/// n-th Lucas number with L_1 = 2, L_2 = 1.
pub fn lucas(n: u32) -> Result<u64> {
    sequence(n, 2, 1)
}

fn sequence(n: u32, first: u64, second: u64) -> Result<u64> {
    if n == 0 || n > MAX_SEQUENCE_INDEX {
        return Err(Error::SequenceIndex {
            index: n,
            max: MAX_SEQUENCE_INDEX,
        });
    }
    if n == 1 {
        return Ok(first);
    }
    let (mut prev, mut current) = (first, second);
    for _ in 2..n {
        let next = prev + current;
        prev = current;
        current = next;
    }
    Ok(current)
}

/// Which map of the family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapId {
    /// Fibonacci-Lucas map with sequence index i >= 1.
    Fl(u32),
    /// The Arnold cat map (1, 1; 1, 2), the fixed classical scrambler.
    Arnold,
}

impl MapId {
    fn validate(self) -> Result<()> {
        if let MapId::Fl(index) = self {
            if index == 0 || index > MAX_MAP_INDEX {
                return Err(Error::MapIndex {
                    index,
                    max: MAX_MAP_INDEX,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::Fl(i) => write!(f, "FL{i}"),
            MapId::Arnold => write!(f, "ARNOLD"),
        }
    }
}

impl FromStr for MapId {
    type Err = Error;

    /// Parses `FL<i>` or `ARNOLD`. Indices outside 1..=[`MAX_MAP_INDEX`]
    /// are syntactically valid but rejected as a domain error.
    fn from_str(s: &str) -> Result<Self> {
        if s == "ARNOLD" {
            return Ok(MapId::Arnold);
        }
        let digits = s
            .strip_prefix("FL")
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::Parse(format!("unrecognized map id `{s}`")))?;
        let index: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("map index `{digits}` is out of range")))?;
        let id = MapId::Fl(index);
        id.validate()?;
        Ok(id)
    }
}

/// 2x2 matrix with entries reduced modulo the torus size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mat2 {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Mat2 {
    const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    fn mul(self, rhs: Mat2, n: u64) -> Mat2 {
        Mat2 {
            a: (self.a * rhs.a % n + self.b * rhs.c % n) % n,
            b: (self.a * rhs.b % n + self.b * rhs.d % n) % n,
            c: (self.c * rhs.a % n + self.d * rhs.c % n) % n,
            d: (self.c * rhs.b % n + self.d * rhs.d % n) % n,
        }
    }

    fn pow(self, mut exp: u64, n: u64) -> Mat2 {
        let mut result = Mat2::IDENTITY;
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(base, n);
            }
            base = base.mul(base, n);
            exp >>= 1;
        }
        result
    }

    fn apply(self, x: u64, y: u64, n: u64) -> (u64, u64) {
        (
            (self.a * x % n + self.b * y % n) % n,
            (self.c * x % n + self.d * y % n) % n,
        )
    }

    fn det(self, n: u64) -> u64 {
        (self.a * self.d % n + n - self.b * self.c % n) % n
    }
}

/// A Fibonacci-Lucas (or Arnold) transform bound to a torus size.
///
/// Entries are reduced modulo N at construction; the map is a pixel
/// permutation on N x N images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlMap {
    id: MapId,
    modulus: u32,
    matrix: Mat2,
}

/// The order of a map: the smallest P >= 1 with M^P congruent to the
/// identity, so scrambling P times restores the original image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Period(u64);

impl Period {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FlMap {
    /// Constructs the map for `id` on the N x N torus, N = `modulus`.
    pub fn build(id: MapId, modulus: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Modulus { modulus });
        }
        id.validate()?;
        let n = u64::from(modulus);
        let matrix = match id {
            MapId::Fl(i) => Mat2 {
                a: fib(i)? % n,
                b: fib(i + 1)? % n,
                c: lucas(i)? % n,
                d: lucas(i + 1)? % n,
            },
            MapId::Arnold => Mat2 {
                a: 1 % n,
                b: 1 % n,
                c: 1 % n,
                d: 2 % n,
            },
        };
        Ok(FlMap {
            id,
            modulus,
            matrix,
        })
    }

    pub fn id(&self) -> MapId {
        self.id
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Matrix entries (a, b, c, d), already reduced modulo N.
    pub fn entries(&self) -> (u64, u64, u64, u64) {
        (self.matrix.a, self.matrix.b, self.matrix.c, self.matrix.d)
    }

    /// Determinant modulo N; always a unit, so the map is a bijection.
    pub fn determinant(&self) -> u64 {
        self.matrix.det(u64::from(self.modulus))
    }

    /// Image of a single torus point under one application of the map.
    pub fn apply_point(&self, x: u32, y: u32) -> Result<(u32, u32)> {
        if x >= self.modulus || y >= self.modulus {
            return Err(Error::PointOutOfRange {
                x,
                y,
                modulus: self.modulus,
            });
        }
        let n = u64::from(self.modulus);
        let (xp, yp) = self.matrix.apply(u64::from(x), u64::from(y), n);
        Ok((xp as u32, yp as u32))
    }

    /// Smallest P >= 1 with M^P congruent to the identity, found by
    /// successive modular multiplication. The group of invertible 2x2
    /// matrices mod N has fewer than N^4 elements, so a valid map must
    /// return to the identity within that many steps; hitting the cap
    /// means the matrix was not invertible in the first place.
    pub fn period(&self) -> Result<Period> {
        let n = u64::from(self.modulus);
        let cap = n.saturating_pow(4);
        let mut power = self.matrix;
        let mut count: u64 = 1;
        while power != Mat2::IDENTITY {
            if count >= cap {
                return Err(Error::PeriodCapExceeded { cap });
            }
            power = power.mul(self.matrix, n);
            count += 1;
        }
        Ok(Period(count))
    }

    /// Scrambles a square image by applying the pixel permutation
    /// `iterations` times: each pass moves the sample at (x, y) to
    /// (x', y') = M(x, y). Zero iterations returns an identical copy.
    ///
    /// Iterating the permutation t times is the permutation of M^t, so
    /// the matrix power is computed first and applied in a single pass;
    /// the result is identical to literal repeated application.
    pub fn scramble<T: Copy>(&self, img: &Image<T>, iterations: u64) -> Result<Image<T>> {
        self.check_side(img)?;
        let n = u64::from(self.modulus);
        Ok(self.permute(img, self.matrix.pow(iterations, n)))
    }

    /// Inverse of [`FlMap::scramble`] with the same iteration count:
    /// `unscramble(scramble(img, t), t)` returns `img`.
    pub fn unscramble<T: Copy>(&self, img: &Image<T>, iterations: u64) -> Result<Image<T>> {
        self.check_side(img)?;
        let n = u64::from(self.modulus);
        Ok(self.permute(img, self.inverse_matrix().pow(iterations, n)))
    }

    fn check_side<T>(&self, img: &Image<T>) -> Result<()> {
        if img.side() != self.modulus as usize {
            return Err(Error::SideMismatch {
                expected: self.modulus as usize,
                actual: img.side(),
            });
        }
        Ok(())
    }

    fn permute<T: Copy>(&self, img: &Image<T>, matrix: Mat2) -> Image<T> {
        let side = img.side();
        let n = side as u64;
        let src = img.data();
        // Every cell is written exactly once because the map is a bijection.
        let mut out = vec![src[0]; src.len()];
        for x in 0..side {
            for y in 0..side {
                let (xp, yp) = matrix.apply(x as u64, y as u64, n);
                out[xp as usize * side + yp as usize] = src[x * side + y];
            }
        }
        Image::from_raw(side, out)
    }

    fn inverse_matrix(&self) -> Mat2 {
        let n = u64::from(self.modulus);
        let det_inv = mod_inverse(self.matrix.det(n), n)
            .expect("map determinant is a unit by construction");
        Mat2 {
            a: self.matrix.d * det_inv % n,
            b: (n - self.matrix.b) % n * det_inv % n,
            c: (n - self.matrix.c) % n * det_inv % n,
            d: self.matrix.a * det_inv % n,
        }
    }

    #[cfg(test)]
    pub(crate) fn identity_for_tests(modulus: u32) -> FlMap {
        FlMap {
            id: MapId::Arnold,
            modulus,
            matrix: Mat2::IDENTITY,
        }
    }
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (i128::from(n), i128::from(a));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % i128::from(n) + i128::from(n)) % i128::from(n)) as u64)
}
