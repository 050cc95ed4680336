//! Truncated Euler product over the places of `P^1`, computed by counting
//! points on local minimal models in residue rings `F_Q[t]/pi`. Serves as an
//! oracle independent of the trace-sum and Newton pipeline.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::fibration::{Place, Reduction, TwistFamily};
use crate::galois::{Elem, Field, Poly};

/// Monic irreducible polynomials of degree `e` over `field`.
pub fn monic_irreducibles(field: &Arc<Field>, e: usize) -> Vec<Poly> {
    let q = field.size();
    let count = q.pow(e as u32);
    let mut out = Vec::new();
    for idx in 0..count {
        let mut c = Vec::with_capacity(e + 1);
        let mut v = idx;
        for _ in 0..e {
            c.push(Elem((v % q) as u32));
            v /= q;
        }
        c.push(Elem::ONE);
        let p = Poly::new(field, c);
        if p.is_irreducible() {
            out.push(p);
        }
    }
    out
}

/// Affine points of `y^2 = x^3 + a4 x + a6` over `F_Q[t]/pi`.
fn count_residue(pi: &Poly, a4: &Poly, a6: &Poly) -> i64 {
    let field = pi.field();
    let q = field.size();
    let e = pi.degree().unwrap();
    let size = q.pow(e as u32);
    let half = (size as u128 - 1) / 2;
    let a4 = a4.rem(pi);
    let a6 = a6.rem(pi);
    let mut n = 0i64;
    for idx in 0..size {
        let mut c = Vec::with_capacity(e);
        let mut v = idx;
        for _ in 0..e {
            c.push(Elem((v % q) as u32));
            v /= q;
        }
        let x = Poly::new(field, c);
        let rhs = x.mul(&x).mul(&x).add(&a4.mul(&x)).add(&a6).rem(pi);
        n += if rhs.is_zero() {
            1
        } else if rhs.pow_mod(half, pi).is_one() {
            2
        } else {
            0
        };
    }
    n
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
fn inverse_trunc(a: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for k in 1..len {
        let mut s = BigInt::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &inv[k - j];
        }
        inv[k] = -s;
    }
    inv
}

/// Local data of one place: degree, Frobenius trace and reduction.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub degree: usize,
    pub a: i64,
    pub reduction: Reduction,
}

fn local_factor(fam: &TwistFamily, place: &Place) -> Result<LocalFactor> {
    let report = fam.classify_place(place)?;
    let (c4, c6) = fam.local_short_model(place);
    let f = fam.field();
    let a4 = c4.scale(f.from_int(-27));
    let a6 = c6.scale(f.from_int(-54));
    let pi = match place {
        Place::Finite(pi) => pi.clone(),
        // residue field at infinity is F_Q; the model constants are already reduced
        Place::Infinity => Poly::x(f),
    };
    let size = f.size().pow(report.degree as u32) as i64;
    Ok(LocalFactor {
        degree: report.degree,
        a: size - count_residue(&pi, &a4, &a6),
        reduction: report.reduction,
    })
}

/// `prod_v L_v(T^{deg v})^{-1}` modulo `T^{upto + 1}` over the constant field.
pub fn euler_product(fam: &TwistFamily, constant: &Arc<Field>, upto: usize) -> Result<Vec<BigInt>> {
    let fam = fam.base_change(constant)?;
    let q = BigInt::from(constant.size());
    let len = upto + 1;
    let mut acc = vec![BigInt::zero(); len];
    acc[0] = BigInt::one();
    let mut places: Vec<Place> = vec![Place::Infinity];
    for e in 1..=upto {
        places.extend(monic_irreducibles(constant, e).into_iter().map(Place::Finite));
    }
    for place in places {
        let lf = local_factor(&fam, &place)?;
        let e = lf.degree;
        let mut poly = vec![BigInt::zero(); 2 * e + 1];
        poly[0] = BigInt::one();
        poly[e] = BigInt::from(-lf.a);
        if lf.reduction == Reduction::Good {
            poly[2 * e] = q.pow(e as u32);
        }
        acc = mul_trunc(&acc, &inverse_trunc(&poly, len), len);
    }
    Ok(acc)
}
