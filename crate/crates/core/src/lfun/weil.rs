use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{divide_by_one_minus, LPolynomial};
use crate::error::{Error, Result};

pub const WEIL_TOLERANCE: f64 = 1e-6;

const MAX_DEGREE: usize = 64;

/// True iff every inverse root `g` of `L` has `||g| - Q| < tol * Q`.
pub fn weil_check(l: &LPolynomial, tol: f64) -> Result<bool> {
    let q = l.q_big();
    let mut c = l.coeffs.clone();
    for r in [q.clone(), -q.clone()] {
        while let Some(next) = divide_by_one_minus(&c, &r) {
            c = next;
        }
    }
    if c.len() == 1 {
        return Ok(true);
    }
    if c.len() - 1 > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "root finding beyond degree {MAX_DEGREE}"
        )));
    }
    // monic polynomial in z = g / Q, highest degree first
    let m = c.len() - 1;
    let mut scale = BigInt::from(1);
    let mut desc = Vec::with_capacity(m + 1);
    for cj in &c {
        desc.push(BigRational::new(cj.clone(), scale.clone()));
        scale *= &q;
    }
    let sqf = squarefree_part(&desc);
    let coeffs: Vec<Complex64> = sqf
        .iter()
        .map(|r| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    if coeffs.iter().any(|z| !z.re.is_finite()) {
        return Ok(false);
    }
    let roots = durand_kerner(&coeffs);
    let worst = roots
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    Ok(worst < tol)
}

fn trim(p: &mut Vec<BigRational>) {
    while p.first().is_some_and(|c| c.is_zero()) {
        p.remove(0);
    }
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() && !r.is_empty() {
        let f = &r[0] / &b[0];
        for (i, bc) in b.iter().enumerate() {
            r[i] = &r[i] - &f * bc;
        }
        r.remove(0);
        trim(&mut r);
    }
    r
}

fn quotient(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let mut q = Vec::new();
    while r.len() >= b.len() {
        let f = &r[0] / &b[0];
        for (i, bc) in b.iter().enumerate() {
            r[i] = &r[i] - &f * bc;
        }
        r.remove(0);
        q.push(f);
    }
    q
}

/// `p / gcd(p, p')` over the rationals, monic, highest degree first.
fn squarefree_part(p: &[BigRational]) -> Vec<BigRational> {
    let n = p.len() - 1;
    let dp: Vec<BigRational> = p[..n]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(n - i)))
        .collect();
    let (mut a, mut b) = (p.to_vec(), dp);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    let mut s = quotient(p, &a);
    let lead = s[0].clone();
    for c in s.iter_mut() {
        *c = &*c / &lead;
    }
    s
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots of a monic polynomial (highest degree first).
fn durand_kerner(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(p, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    // Newton polish
    let dp: Vec<Complex64> = p[..n]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (n - i) as f64)
        .collect();
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = horner(&dp, *zi);
            if d.norm() == 0.0 {
                break;
            }
            *zi -= horner(p, *zi) / d;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(q: u64, v: &[i64]) -> LPolynomial {
        LPolynomial {
            q,
            coeffs: v.iter().map(|&x| BigInt::from(x)).collect(),
            eps: Some(1),
            provenance: super::super::Provenance {
                traces_used: vec![],
                fe_completed: false,
            },
        }
    }

    #[test]
    fn examples() {
        assert!(weil_check(&l(5, &[1]), WEIL_TOLERANCE).unwrap());
        assert!(weil_check(&l(5, &[1, -10, 25]), WEIL_TOLERANCE).unwrap());
        // (1 - T)(1 - 5T)
        assert!(!weil_check(&l(5, &[1, -6, 5]), WEIL_TOLERANCE).unwrap());
        // (1 + 3T + 25T^2)^2
        assert!(weil_check(&l(5, &[1, 6, 59, 150, 625]), WEIL_TOLERANCE).unwrap());
        // 1 + 25^2 T^4 over Q = 25
        assert!(weil_check(&l(25, &[1, 0, 0, 0, 390625]), WEIL_TOLERANCE).unwrap());
        // wrong weight: 1 + 5T^2 over Q = 5
        assert!(!weil_check(&l(5, &[1, 0, 5]), WEIL_TOLERANCE).unwrap());
    }
}
