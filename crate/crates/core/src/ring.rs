//! Coefficient contexts for the polynomial engine: exact rationals, prime
//! fields, and polynomial extensions of either. Operations take the context
//! by reference so the same generic code runs over every coefficient domain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::poly::Poly;
use crate::poly::{pexact_div, pgcd_domain};

pub trait Ring {
    type E: Clone + fmt::Debug + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn of_i64(&self, n: i64) -> Self::E;
}

/// Integral domain with exact division. `exact_div` requires b to divide a
/// and b to be nonzero; violations are internal bugs and panic.
pub trait Domain: Ring {
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// Domain with greatest common divisors (unique up to units).
pub trait GcdDomain: Domain {
    fn gcd(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

pub trait Field: GcdDomain {
    /// Multiplicative inverse of a nonzero element; panics on zero.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.mul(a, &self.inv(b))
    }
}

/// The field of rational numbers with arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn of_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Domain for Rationals {
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        assert!(!b.is_zero(), "exact division by zero");
        a / b
    }
}

impl GcdDomain for Rationals {
    fn gcd(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_zero() && b.is_zero() {
            BigRational::zero()
        } else {
            BigRational::one()
        }
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(a: &BigRational) -> bool {
    a.denom().is_one()
}

pub fn rational_to_string(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// x^e in a field, with negative exponents via inversion (panics on 0^-k).
pub fn field_pow<F: Field>(f: &F, x: &F::E, e: i64) -> F::E {
    let base = if e < 0 { f.inv(x) } else { x.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = f.one();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = f.mul(&acc, &sq);
        }
        sq = f.mul(&sq, &sq);
        e >>= 1;
    }
    acc
}

/// The prime field of integers modulo p; elements stored reduced in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Fails when p is not prime or does not fit in 32 bits (the trial
    /// division above is the primality check, so the modulus is capped).
    pub fn new(p: u64) -> Option<PrimeField> {
        (p < (1 << 32) && is_prime_u64(p)).then_some(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce_u64(&self, a: u64) -> u64 {
        a % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &a);
            }
            a = self.mul(&a, &a);
            e >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b; // < 2^63 for p < 2^62
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn of_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Domain for PrimeField {
    fn exact_div(&self, a: &u64, b: &u64) -> u64 {
        self.div(a, b)
    }
}

impl GcdDomain for PrimeField {
    fn gcd(&self, a: &u64, b: &u64) -> u64 {
        if *a == 0 && *b == 0 {
            0
        } else {
            self.one()
        }
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended euclid on (a, p)
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1, "p must be prime");
        s0.rem_euclid(self.p as i128) as u64
    }
}

/// Polynomials over a base context, as a context themselves; nesting gives
/// multivariate polynomials one variable at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PolyRing<R> {
    pub base: R,
}

impl<R> PolyRing<R> {
    pub fn over(base: R) -> Self {
        PolyRing { base }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type E = Poly<R::E>;
    fn zero(&self) -> Poly<R::E> {
        Poly::zero()
    }
    fn one(&self) -> Poly<R::E> {
        Poly::constant(&self.base, self.base.one())
    }
    fn add(&self, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
        crate::poly::padd(&self.base, a, b)
    }
    fn sub(&self, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
        crate::poly::psub(&self.base, a, b)
    }
    fn neg(&self, a: &Poly<R::E>) -> Poly<R::E> {
        crate::poly::pneg(&self.base, a)
    }
    fn mul(&self, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
        crate::poly::pmul(&self.base, a, b)
    }
    fn is_zero(&self, a: &Poly<R::E>) -> bool {
        a.is_zero()
    }
    fn of_i64(&self, n: i64) -> Poly<R::E> {
        Poly::constant(&self.base, self.base.of_i64(n))
    }
}

impl<R: GcdDomain> Domain for PolyRing<R> {
    fn exact_div(&self, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
        pexact_div(&self.base, a, b)
    }
}

impl<R: GcdDomain> GcdDomain for PolyRing<R> {
    fn gcd(&self, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
        pgcd_domain(&self.base, a, b)
    }
}
