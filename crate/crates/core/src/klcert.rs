//! Lefschetz and Katz-Lefschetz conditions on a twisting polynomial `f`,
//! decided by polynomial identities. Conditions relative to a curve use
//! the finite bad places `S` of that curve.
//!
//! (i)   f has `deg f` distinct zeros
//! (ii)  f' has `deg f - 1` distinct zeros with distinct images under f
//! (i')  the values f(s), s in S, are pairwise distinct
//! (ii') f(s) != 0 for s in S
//! (iii') f - f(s) has `deg f` distinct zeros for s in S

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration::{fd_poly, Place, TwistFamily};
use crate::galois::{Elem, Field, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Lefschetz,
    KatzLefschetz,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "i'")]
    IPrime,
    #[serde(rename = "ii'")]
    IiPrime,
    #[serde(rename = "iii'")]
    IiiPrime,
    #[serde(rename = "none")]
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `gcd(f, f')`, with its root when it is linear.
    RepeatedFactor { factor: Poly, root: Option<Elem> },
    /// `f'` has fewer distinct zeros than `deg f - 1`.
    CriticalDeficit { distinct: usize, expected: usize },
    /// Repeated factor of the critical-value polynomial.
    CollidingCriticalValues { factor: Poly },
    /// Common factor of the image polynomials of two places (one place may
    /// collide with itself).
    CollidingImages { first: Poly, second: Poly, common: Poly },
    /// `f` vanishes at a zero of `place`.
    VanishingImage { place: Poly },
    /// Some `f(s)`, s a zero of `place`, is a critical value.
    DeficientFiber { place: Poly, common: Poly },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KlCertificate {
    pub f: Poly,
    pub verdict: Verdict,
    pub condition: Condition,
    pub witness: Option<Witness>,
    /// Finite places checked against, empty for the plain Lefschetz test.
    pub places: Vec<Poly>,
}

impl KlCertificate {
    fn fail(f: &Poly, places: &[Poly], condition: Condition, witness: Witness) -> KlCertificate {
        KlCertificate {
            f: f.clone(),
            verdict: Verdict::Fail,
            condition,
            witness: Some(witness),
            places: places.to_vec(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    /// Recomputes the violation from the witness alone. True for passing
    /// certificates with no witness.
    pub fn reverify(&self) -> bool {
        let f = &self.f;
        let Some(w) = &self.witness else {
            return self.verdict != Verdict::Fail;
        };
        match w {
            Witness::RepeatedFactor { factor, root } => {
                !factor.is_constant()
                    && factor.divides(f)
                    && factor.divides(&f.derivative())
                    && root.is_none_or(|r| {
                        f.eval(r).is_zero() && f.derivative().eval(r).is_zero()
                    })
            }
            Witness::CriticalDeficit { distinct, expected } => {
                f.derivative().distinct_root_count().ok() == Some(*distinct) && distinct < expected
            }
            Witness::CollidingCriticalValues { factor } => f
                .critical_value_poly()
                .is_ok_and(|cv| {
                    !factor.is_constant() && factor.divides(&cv) && factor.divides(&cv.derivative())
                }),
            Witness::CollidingImages { first, second, common } => {
                let (Ok(p1), Ok(p2)) = (f.image_poly(first), f.image_poly(second)) else {
                    return false;
                };
                if common.is_constant() {
                    return false;
                }
                if first == second {
                    common.divides(&p1) && common.divides(&p1.derivative())
                } else {
                    common.divides(&p1) && common.divides(&p2)
                }
            }
            Witness::VanishingImage { place } => f
                .image_poly(place)
                .is_ok_and(|p| p.eval(Elem::ZERO).is_zero()),
            Witness::DeficientFiber { place, common } => {
                let (Ok(p), Ok(cv)) = (f.image_poly(place), f.critical_value_poly()) else {
                    return false;
                };
                !common.is_constant() && common.divides(&p) && common.divides(&cv)
            }
        }
    }
}

/// Conditions (i) and (ii).
pub fn is_lefschetz(f: &Poly) -> Result<KlCertificate> {
    let d = f
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidArgument("twisting polynomial must have degree >= 1".into()))?;
    let df = f.derivative();
    let g = f.gcd(&df)?;
    if !g.is_constant() || df.is_zero() {
        let factor = if df.is_zero() { f.monic() } else { g };
        let root = if factor.degree() == Some(1) {
            Some(factor.field().neg(factor.coeff(0)))
        } else {
            None
        };
        return Ok(KlCertificate::fail(f, &[], Condition::I, Witness::RepeatedFactor { factor, root }));
    }
    let distinct = df.distinct_root_count()?;
    if distinct != d - 1 {
        return Ok(KlCertificate::fail(
            f,
            &[],
            Condition::Ii,
            Witness::CriticalDeficit { distinct, expected: d - 1 },
        ));
    }
    if d >= 2 {
        let cv = f.critical_value_poly()?;
        let rep = cv.gcd(&cv.derivative())?;
        if !rep.is_constant() || (cv.derivative().is_zero() && !cv.is_constant()) {
            let factor = if rep.is_constant() { cv.monic() } else { rep };
            return Ok(KlCertificate::fail(
                f,
                &[],
                Condition::Ii,
                Witness::CollidingCriticalValues { factor },
            ));
        }
    }
    Ok(KlCertificate {
        f: f.clone(),
        verdict: Verdict::Lefschetz,
        condition: Condition::None,
        witness: None,
        places: Vec::new(),
    })
}

/// Lefschetz plus (i')-(iii') against the finite bad places of `fam`.
pub fn is_katz_lefschetz(f: &Poly, fam: &TwistFamily) -> Result<KlCertificate> {
    let places: Vec<Poly> = fam
        .bad_set()
        .into_iter()
        .filter_map(|r| match r.place {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        })
        .collect();
    is_katz_lefschetz_at(f, &places)
}

/// Katz-Lefschetz test relative to explicit monic irreducible places.
pub fn is_katz_lefschetz_at(f: &Poly, places: &[Poly]) -> Result<KlCertificate> {
    let mut cert = is_lefschetz(f)?;
    cert.places = places.to_vec();
    if !cert.passed() {
        return Ok(cert);
    }
    let images: Vec<Poly> = places
        .iter()
        .map(|pi| f.image_poly(pi))
        .collect::<Result<_>>()?;
    // (i')
    for (i, pi) in places.iter().enumerate() {
        let p = &images[i];
        let rep = p.gcd(&p.derivative())?;
        if !rep.is_constant() || (p.derivative().is_zero() && !p.is_constant()) {
            let common = if rep.is_constant() { p.monic() } else { rep };
            return Ok(KlCertificate::fail(
                f,
                places,
                Condition::IPrime,
                Witness::CollidingImages { first: pi.clone(), second: pi.clone(), common },
            ));
        }
        for (j, pj) in places.iter().enumerate().skip(i + 1) {
            let common = p.gcd(&images[j])?;
            if !common.is_constant() {
                return Ok(KlCertificate::fail(
                    f,
                    places,
                    Condition::IPrime,
                    Witness::CollidingImages { first: pi.clone(), second: pj.clone(), common },
                ));
            }
        }
    }
    // (ii')
    for (pi, p) in places.iter().zip(&images) {
        if p.eval(Elem::ZERO).is_zero() {
            return Ok(KlCertificate::fail(
                f,
                places,
                Condition::IiPrime,
                Witness::VanishingImage { place: pi.clone() },
            ));
        }
    }
    // (iii')
    if f.degree() >= Some(2) {
        let cv = f.critical_value_poly()?;
        for (pi, p) in places.iter().zip(&images) {
            let common = p.gcd(&cv)?;
            if !common.is_constant() {
                return Ok(KlCertificate::fail(
                    f,
                    places,
                    Condition::IiiPrime,
                    Witness::DeficientFiber { place: pi.clone(), common },
                ));
            }
        }
    }
    cert.verdict = Verdict::KatzLefschetz;
    Ok(cert)
}

/// `p` does not divide `d(d-1)(d+1)` and `gcd(p-1, d-1) = 1`.
pub fn lemma_predicate(p: u64, d: u64) -> bool {
    let coprime = num_integer::gcd(p - 1, d - 1) == 1;
    !d.is_multiple_of(p) && !(d - 1).is_multiple_of(p) && !(d + 1).is_multiple_of(p) && coprime
}

/// Certifies `f_d = t^d - dt - 1` against the Legendre curve over `F_p`.
pub fn certify_fd(p: u32, d: usize) -> Result<KlCertificate> {
    let f = Field::new(p, 1)?;
    let fam = TwistFamily::legendre(&f, Poly::one(&f))?;
    is_katz_lefschetz(&fd_poly(&f, d), &fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn f5() -> Arc<Field> {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn lefschetz_examples() {
        let f = f5();
        let c = is_lefschetz(&Poly::from_ints(&f, &[0, 0, 1])).unwrap();
        assert_eq!((c.verdict, c.condition), (Verdict::Fail, Condition::I));
        assert!(matches!(c.witness, Some(Witness::RepeatedFactor { root: Some(Elem(0)), .. })));
        assert!(c.reverify());
        let c = is_lefschetz(&fd_poly(&f, 2)).unwrap();
        assert_eq!(c.verdict, Verdict::Lefschetz);
        // p | d - 1: d = 6 over F_5, f' = 6t^5 - 6 = t^5 - 1 = (t - 1)^5
        let c = is_lefschetz(&fd_poly(&f, 6)).unwrap();
        assert_eq!((c.verdict, c.condition), (Verdict::Fail, Condition::Ii));
        assert!(c.reverify());
    }

    #[test]
    fn katz_lefschetz_examples() {
        let f = f5();
        let fam = TwistFamily::legendre(&f, Poly::one(&f)).unwrap();
        let c = is_katz_lefschetz(&fd_poly(&f, 2), &fam).unwrap();
        assert_eq!(c.verdict, Verdict::KatzLefschetz);
        assert_eq!(c.condition, Condition::None);
        // t^2 - t vanishes at 0
        let c = is_katz_lefschetz(&Poly::from_ints(&f, &[0, -1, 1]), &fam).unwrap();
        assert_eq!((c.verdict, c.condition), (Verdict::Fail, Condition::IiPrime));
        assert!(c.reverify());
        // p | d + 1: d = 4 gives f(0) = f(-1)
        let c = is_katz_lefschetz(&fd_poly(&f, 4), &fam).unwrap();
        assert_eq!((c.verdict, c.condition), (Verdict::Fail, Condition::IPrime));
        assert!(c.reverify());
    }

    #[test]
    fn lemma_examples() {
        assert!(lemma_predicate(5, 2));
        assert!(!lemma_predicate(5, 4));
        assert!(!lemma_predicate(5, 5));
        assert!(!lemma_predicate(7, 4));
    }

    #[test]
    fn lemma_truth_table_mod_10_for_p5() {
        let residues: std::collections::BTreeSet<u64> =
            (2..200).filter(|&d| lemma_predicate(5, d)).map(|d| d % 10).collect();
        assert_eq!(residues.into_iter().collect::<Vec<_>>(), vec![2, 8]);
    }

    /// Splitting field degree from the distinct-degree factorization.
    fn splitting_degree(f: &Poly) -> u32 {
        let mut l = 1usize;
        for (_, d) in f.radical().unwrap().distinct_degree_factors() {
            l = num_integer::lcm(l, d);
        }
        l as u32
    }

    /// Conditions (i) and (ii) by exhaustive evaluation in a splitting field.
    fn brute_lefschetz(f: &Poly) -> bool {
        let field = f.field();
        let d = f.degree().unwrap();
        let df = f.derivative();
        if df.is_zero() {
            return false;
        }
        let roots_in_splitting_field = |g: &Poly| {
            let big = Field::new(field.characteristic(), splitting_degree(g)).unwrap();
            let emb = crate::galois::Embedding::new(field, &big).unwrap();
            let gb = emb.apply_poly(g);
            let roots: Vec<Elem> = big.elements().filter(|&x| gb.eval(x).is_zero()).collect();
            (roots, emb)
        };
        let (roots, _) = roots_in_splitting_field(f);
        let (crit, emb) = roots_in_splitting_field(&df);
        let fb = emb.apply_poly(f);
        let mut values: Vec<Elem> = crit.iter().map(|&b| fb.eval(b)).collect();
        values.sort();
        values.dedup();
        roots.len() == d && crit.len() == d - 1 && values.len() == d - 1
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn lefschetz_agrees_with_brute_force(
            p in prop::sample::select(vec![5u32, 7]),
            coeffs in prop::collection::vec(0i64..7, 2..=7),
        ) {
            let field = Field::new(p, 1).unwrap();
            let mut c = coeffs.clone();
            *c.last_mut().unwrap() = 1;
            let f = Poly::from_ints(&field, &c);
            let cert = is_lefschetz(&f).unwrap();
            prop_assert_eq!(cert.passed(), brute_lefschetz(&f));
            prop_assert!(cert.reverify());
        }
    }
}
