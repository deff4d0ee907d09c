//! Coefficient rings Z/p^e and localized affine charts.
//!
//! A chart fixes everything the rest of the crate computes over: a prime p,
//! a coefficient exponent e (the ring is Z/p^e with e = 1 or 2), the number
//! of coordinates n, and a denominator polynomial f. The chart with f = 1 is
//! affine n-space; otherwise functions are fractions g/f^m.
//!
//! e = 1 is the working field. e = 2 exists only so that commutators of lifts
//! can be divided by p; nothing sign- or center-related is defined there.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// The coefficient ring Z/p^e, e in {1, 2}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CoeffRing {
    p: u64,
    e: u8,
    modulus: u64,
}

impl CoeffRing {
    /// p is capped well below the exponent width: the center machinery
    /// multiplies monomial exponents by p, and binomial tables grow with the
    /// largest derivative order, so huge primes would only trade silent
    /// wraparound for out-of-memory.
    pub const MAX_P: u64 = 1 << 12;

    pub fn new(p: u64, e: u8) -> Result<Self> {
        if p >= Self::MAX_P {
            return Err(Error::InvalidChart(format!(
                "p = {p} is too large; this crate supports p < {}",
                Self::MAX_P
            )));
        }
        if p < 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e != 1 && e != 2 {
            return Err(Error::BadExponent(e));
        }
        let modulus = if e == 1 { p } else { p * p };
        Ok(CoeffRing { p, e, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u8 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn with_e(&self, e: u8) -> Result<CoeffRing> {
        CoeffRing::new(self.p, e)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.modulus && b < self.modulus);
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.modulus);
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Canonical residue of a signed integer.
    pub fn from_i64(&self, v: i64) -> u64 {
        let m = self.modulus as i128;
        (((v as i128 % m) + m) % m) as u64
    }

    /// Inverse of a unit (anything not divisible by p). None otherwise.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        // extended Euclid on (a, modulus)
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.modulus as i128;
        Some((((s0 % m) + m) % m) as u64)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug)]
struct ChartData {
    ring: CoeffRing,
    n: usize,
    f: Polynomial,
}

/// A localized affine chart: Spec (Z/p^e)[x_1..x_n]_f.
///
/// Cheap to clone (shared behind an Arc); equality compares contents.
#[derive(Clone, Debug)]
pub struct Chart(Arc<ChartData>);

impl Chart {
    /// Affine n-space over Z/p^e (denominator f = 1).
    pub fn affine(p: u64, e: u8, n: usize) -> Result<Chart> {
        let ring = CoeffRing::new(p, e)?;
        if n == 0 {
            return Err(Error::InvalidChart("need at least one coordinate".into()));
        }
        let f = Polynomial::one(ring, n);
        Ok(Chart(Arc::new(ChartData { ring, n, f })))
    }

    /// Chart localized at f. f = 1 gives the affine chart.
    pub fn localized(p: u64, e: u8, n: usize, f: Polynomial) -> Result<Chart> {
        let ring = CoeffRing::new(p, e)?;
        if n == 0 {
            return Err(Error::InvalidChart("need at least one coordinate".into()));
        }
        if f.ring() != ring || f.num_vars() != n {
            return Err(Error::InvalidChart(
                "denominator polynomial lives over a different ring".into(),
            ));
        }
        if f.is_zero() {
            return Err(Error::InvalidChart("denominator f must be nonzero".into()));
        }
        if e == 2 {
            // canonical-lift invariant: coefficients in {0..p-1}, so the
            // degree-lex leading coefficient is a unit and f stays nonzero mod p
            if f.coeffs().any(|c| c >= p) {
                return Err(Error::InvalidChart(
                    "for e = 2 the denominator must use canonical-lift coefficients in {0..p-1}"
                        .into(),
                ));
            }
            if f.coeffs().all(|c| c == 0) {
                return Err(Error::InvalidChart("denominator f is zero mod p".into()));
            }
        }
        Ok(Chart(Arc::new(ChartData { ring, n, f })))
    }

    pub fn ring(&self) -> CoeffRing {
        self.0.ring
    }

    pub fn p(&self) -> u64 {
        self.0.ring.p
    }

    pub fn e(&self) -> u8 {
        self.0.ring.e
    }

    pub fn num_vars(&self) -> usize {
        self.0.n
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.0.f
    }

    pub fn is_affine(&self) -> bool {
        self.0.f.is_one()
    }

    /// The same chart with the coefficient exponent changed. The denominator
    /// keeps its canonical-lift coefficients, which both exponents accept.
    pub fn with_e(&self, e: u8) -> Result<Chart> {
        if e == self.e() {
            return Ok(self.clone());
        }
        let ring = self.0.ring.with_e(e)?;
        let f = self.0.f.with_ring(ring);
        Chart::localized(self.p(), e, self.0.n, f)
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring
                && self.0.n == other.0.n
                && self.0.f.same_terms(&other.0.f))
    }
}

impl Eq for Chart {}

impl fmt::Display for Chart {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "p={} e={} n={} f={}",
            self.p(),
            self.e(),
            self.0.n,
            self.0.f
        )
    }
}
