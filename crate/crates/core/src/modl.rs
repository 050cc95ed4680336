//! Polynomials over `Z/l` for small odd primes `l`, including `l = 3`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::is_prime;

/// Validates an odd prime modulus.
pub fn check_ell(ell: u64) -> Result<()> {
    if ell == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    Ok(())
}

pub fn inv_mod(a: u64, ell: u64) -> Option<u64> {
    let a = a % ell;
    if a == 0 {
        return None;
    }
    Some(pow_mod(a, ell - 2, ell))
}

pub fn pow_mod(mut a: u64, mut e: u64, ell: u64) -> u64 {
    let mut r = 1 % ell;
    a %= ell;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % ell;
        }
        a = a * a % ell;
        e >>= 1;
    }
    r
}

/// Reduces a signed integer into `[0, ell)`.
pub fn reduce(v: i64, ell: u64) -> u64 {
    v.rem_euclid(ell as i64) as u64
}

/// A polynomial in `T` with coefficients in `Z/l`, constant term first.
/// Trailing zeros are kept so that the nominal degree `N` survives reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModPoly {
    pub ell: u64,
    pub coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(ell: u64, coeffs: Vec<u64>) -> ModPoly {
        let coeffs = coeffs.into_iter().map(|c| c % ell).collect();
        ModPoly { ell, coeffs }
    }

    /// Nominal degree (length minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn value_at_one(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, &c| (acc + c) % self.ell)
    }

    /// Formal derivative evaluated at `T = 1`.
    pub fn derivative_at_one(&self) -> u64 {
        self.coeffs
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &c)| (acc + (k as u64 % self.ell) * c) % self.ell)
    }

    /// Checks `T^N P(1/T) = sign * P(T)` with `N` the nominal degree.
    pub fn reciprocal_identity(&self, sign: i64) -> bool {
        let n = self.coeffs.len();
        let s = reduce(sign, self.ell);
        (0..n).all(|i| self.coeffs[n - 1 - i] == s * self.coeffs[i] % self.ell)
    }

    /// Human-readable form such as `1 + 2T + T^2`.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{c}T")?,
                (_, 1) => write!(f, "T^{k}")?,
                _ => write!(f, "{c}T^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
