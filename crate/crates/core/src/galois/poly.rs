use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::field::{Elem, Field};
use crate::error::{Error, Result};

/// Univariate polynomial over a [`Field`], coefficients low degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Clone)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Arc<Field>, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|&c| field.contains(c)));
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Polynomial whose coefficients are integers reduced into the prime subfield.
    pub fn from_ints(field: &Arc<Field>, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Polynomial from element encodings, rejecting out-of-range values.
    pub fn from_encodings(field: &Arc<Field>, coeffs: &[u64]) -> Result<Poly> {
        let c = coeffs.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, c))
    }

    pub fn zero(field: &Arc<Field>) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Arc<Field>) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Arc<Field>, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `t`.
    pub fn x(field: &Arc<Field>) -> Poly {
        Poly::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    pub fn monomial(field: &Arc<Field>, c: Elem, k: usize) -> Poly {
        let mut v = vec![Elem::ZERO; k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    /// `t - r`
    pub fn linear(field: &Arc<Field>, r: Elem) -> Poly {
        Poly::new(field, vec![field.neg(r), Elem::ONE])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Elem::ONE]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Elem::ONE)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub(crate) fn same_field(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &*self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(&self.field, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &*self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(&self.field, v)
    }

    pub fn neg(&self) -> Poly {
        let f = &*self.field;
        Poly::new(&self.field, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &*self.field;
        Poly::new(&self.field, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &*self.field;
        let mut v = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Poly::new(&self.field, v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor, like integer division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let f = &*self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            if c.is_zero() {
                continue;
            }
            q[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        (Poly::new(&self.field, q), Poly::new(&self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient of an exact division; the remainder must vanish.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        Ok(self.gcd_unchecked(other))
    }

    pub(crate) fn gcd_unchecked(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd_unchecked(other);
        Ok(self.exact_div(&g).mul(other).monic())
    }

    pub fn derivative(&self) -> Poly {
        let f = &*self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(c, f.from_int(k as i64)))
            .collect();
        Poly::new(&self.field, v)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &*self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Resultant `Res(self, other)`; for monic `self` this is the product of
    /// `other` over the roots of `self`.
    pub fn resultant(&self, other: &Poly) -> Result<Elem> {
        self.same_field(other)?;
        let f = &*self.field;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = Elem::ONE;
        loop {
            let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
                return Ok(Elem::ZERO);
            };
            if db == 0 {
                return Ok(f.mul(acc, f.pow(b.lead(), da as u128)));
            }
            if da == 0 {
                return Ok(f.mul(acc, f.pow(a.lead(), db as u128)));
            }
            // Res(a, b) = (-1)^{da db} Res(b, a); reduce the larger one.
            if da < db {
                if (da * db) % 2 == 1 {
                    acc = f.neg(acc);
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b);
            // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
            let Some(dr) = r.degree() else {
                return Ok(Elem::ZERO);
            };
            if (da * db) % 2 == 1 {
                acc = f.neg(acc);
            }
            acc = f.mul(acc, f.pow(b.lead(), (da - dr) as u128));
            a = b;
            b = r;
        }
    }

    /// `(k, self / pi^k)` with `k` the largest power of `pi` dividing `self`.
    pub fn valuation(&self, pi: &Poly) -> (usize, Poly) {
        debug_assert!(!pi.is_constant());
        if self.is_zero() {
            return (usize::MAX, self.clone());
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi);
            if !r.is_zero() {
                return (k, cur);
            }
            cur = q;
            k += 1;
        }
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(&self.field, c));
        }
        acc
    }

    /// Ordering used for deterministic listings: by degree, then by
    /// coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && *self.field == *other.field
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let show_c = c.0 != 1 || k == 0;
            let c = if self.field.is_prime_field() {
                c.to_string()
            } else {
                format!("[{}]", c.0)
            };
            match (k, show_c) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "{c}t")?,
                (1, false) => write!(f, "t")?,
                (_, true) => write!(f, "{c}t^{k}")?,
                (_, false) => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Polynomials serialize as arrays of coefficient encodings, low degree first.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.encodings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Arc<Field> {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = f5();
        let t2 = Poly::from_ints(&f, &[-1, -2, 1]);
        assert!(t2.gcd(&Poly::zero(&f)).unwrap() == t2.monic());
        let g = t2.gcd(&Poly::from_ints(&f, &[-2, 2])).unwrap();
        assert!(g.is_one());
        // t^5 - 1 and its derivative 5t^4 = 0 in characteristic 5
        let t5 = Poly::from_ints(&f, &[-1, 0, 0, 0, 0, 1]);
        assert!(t5.derivative().is_zero());
        let g = t5.gcd(&Poly::from_ints(&f, &[0, 0, 0, 0, 5])).unwrap();
        assert_eq!(g, t5);
        assert_eq!(g, Poly::from_ints(&f, &[-1, 1]).pow(5));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Poly::x(&f5());
        let b = Poly::x(&Field::new(7, 1).unwrap());
        assert!(matches!(a.gcd(&b), Err(Error::MixedFields)));
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = Field::new(7, 2).unwrap();
        let a = Poly::new(&f, vec![Elem(3), Elem(40), Elem(0), Elem(11), Elem(1)]);
        let b = Poly::new(&f, vec![Elem(5), Elem(2), Elem(9)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn resultant_is_product_over_roots() {
        let f = f5();
        // (t - 1)(t - 2) against t + 3: (1 + 3)(2 + 3) = 20 = 0
        let a = Poly::from_ints(&f, &[2, -3, 1]);
        assert_eq!(a.resultant(&Poly::from_ints(&f, &[3, 1])).unwrap(), Elem(0));
        // against t + 1: 2 * 3 = 6 = 1
        assert_eq!(a.resultant(&Poly::from_ints(&f, &[1, 1])).unwrap(), Elem(1));
        // against t^2 + 2: (1 + 2)(4 + 2) = 18 = 3
        assert_eq!(a.resultant(&Poly::from_ints(&f, &[2, 0, 1])).unwrap(), Elem(3));
        assert_eq!(Poly::from_ints(&f, &[2, 0, 1]).resultant(&a).unwrap(), Elem(3));
    }

    #[test]
    fn valuation_and_compose() {
        let f = f5();
        let pi = Poly::from_ints(&f, &[1, 1]);
        let g = pi.pow(3).mul(&Poly::from_ints(&f, &[2, 0, 1]));
        let (k, u) = g.valuation(&pi);
        assert_eq!(k, 3);
        assert_eq!(u, Poly::from_ints(&f, &[2, 0, 1]));
        let h = Poly::from_ints(&f, &[0, 0, 1]).compose(&pi);
        assert_eq!(h, pi.mul(&pi));
    }

    #[test]
    fn display_is_readable() {
        let f = f5();
        assert_eq!(Poly::from_ints(&f, &[4, 3, 1]).to_string(), "t^2 + 3t + 4");
        assert_eq!(Poly::zero(&f).to_string(), "0");
    }
}
