//! Coefficient fields for elimination: the rationals and prime fields `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Field operations used by the elimination kernel.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + Send + Sync + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// `acc -= a * b`.
    fn sub_mul(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    fn from_i64(&self, x: i64) -> Self::Elem;
    /// Image of a rational number; `None` when the denominator is not invertible.
    fn from_rational(&self, q: &Rational) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn sub_mul(&self, acc: &mut Rational, a: &Rational, b: &Rational) {
        *acc -= a * b;
    }
    fn from_i64(&self, x: i64) -> Rational {
        Rational::from_integer(BigInt::from(x))
    }
    fn from_rational(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }
}

/// `Z/p` for a prime `p < 2^32`, elements stored reduced in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 32), "prime out of supported range");
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("reduced value fits")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
    fn sub_mul(&self, acc: &mut u64, a: &u64, b: &u64) {
        let prod = a * b % self.p;
        *acc = (*acc + self.p - prod) % self.p;
    }
    fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, q: &Rational) -> Option<u64> {
        let den = self.reduce_big(q.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(&self.reduce_big(q.numer()), &self.inv(&den)))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(2_147_483_649));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(1_000_000_007);
        let x = f.from_i64(-3);
        assert_eq!(f.add(&x, &3), 0);
        assert_eq!(f.mul(&f.inv(&x), &x), 1);
        let q = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.mul(&f.from_rational(&q).unwrap(), &2), 1);
        let bad = Rational::new(BigInt::from(1), BigInt::from(1_000_000_007u64));
        assert!(f.from_rational(&bad).is_none());
    }
}
