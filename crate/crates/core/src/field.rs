//! Arithmetic in prime fields small enough for `u64` symbols.

use crate::error::{Error, Result};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("field size {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// `<a, b>` over the field.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
    pub fn eval_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// Big-endian base-`q` digits of `x`, `len` of them.
pub fn digits(mut x: u64, q: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = x % q;
        x /= q;
    }
    out
}

/// Inverse of [`digits`].
pub fn from_digits(ds: &[u64], q: u64) -> u64 {
    ds.iter().fold(0, |acc, &d| acc * q + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&x| is_prime(x)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.dot(&[1, 2, 3], &[4, 0, 2]), 0);
        // 1 + 2x + x^2 at x = 3 -> 16 = 1 mod 5
        assert_eq!(f.eval_poly(&[1, 2, 1], 3), 1);
    }

    #[test]
    fn digit_roundtrip() {
        assert_eq!(digits(3, 2, 2), vec![1, 1]);
        assert_eq!(digits(5, 3, 3), vec![0, 1, 2]);
        for x in 0..81 {
            assert_eq!(from_digits(&digits(x, 3, 4), 3), x);
        }
    }
}
