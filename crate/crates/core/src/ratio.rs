//! Exact relative radii and probabilities.
//!
//! Radii are stored as `Ratio<u64>`; the absolute radius of a relative
//! radius `rho` at block length `n` is `floor(rho * n)`.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Ratio64 = Ratio<u64>;

/// `floor(rho * n)`.
pub fn abs_radius(rho: Ratio64, n: usize) -> usize {
    let num = *rho.numer() as u128 * n as u128;
    (num / *rho.denom() as u128) as usize
}

/// Whether `rho * n` is an integer.
pub fn radius_is_integral(rho: Ratio64, n: usize) -> bool {
    (*rho.numer() as u128 * n as u128).is_multiple_of(*rho.denom() as u128)
}

pub fn ratio(num: u64, den: u64) -> Ratio64 {
    Ratio::new(num, den)
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"0.25"`.
pub fn parse_ratio(s: &str) -> Result<Ratio64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| Error::input(format!("bad ratio `{s}`")))?;
        let b: u64 = b.trim().parse().map_err(|_| Error::input(format!("bad ratio `{s}`")))?;
        if b == 0 {
            return Err(Error::input(format!("zero denominator in `{s}`")));
        }
        return Ok(Ratio::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::input(format!("bad decimal `{s}`")));
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| Error::input(format!("bad decimal `{s}`")))?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().unwrap() };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(|| Error::input(format!("decimal `{s}` overflows")))?;
        return Ok(Ratio::new(num, den));
    }
    let a: u64 = s.parse().map_err(|_| Error::input(format!("bad ratio `{s}`")))?;
    Ok(Ratio::from_integer(a))
}

pub fn to_f64(r: Ratio64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big(r: Ratio64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for direct conversion
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d - 60).max(0) as usize;
        let scaled = (r.numer() << 64usize) / (r.denom() << shift);
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32 - 64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_radius() {
        assert_eq!(abs_radius(ratio(1, 3), 3), 1);
        assert_eq!(abs_radius(ratio(1, 3), 5), 1);
        assert_eq!(abs_radius(ratio(1, 2), 7), 3);
        assert!(radius_is_integral(ratio(1, 4), 8));
        assert!(!radius_is_integral(ratio(1, 3), 4));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_ratio("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_ratio("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_ratio("3").unwrap(), ratio(3, 1));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }
}
