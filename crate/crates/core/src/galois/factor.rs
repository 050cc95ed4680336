//! Squarefree decomposition, Cantor-Zassenhaus factorization, root finding,
//! subfield embeddings and the image polynomials used by the Lefschetz checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{prime_factors, Elem, Field};
use super::linalg::charpoly;
use super::poly::Poly;
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x7477_6973_746c_6162;

impl Poly {
    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field().size() as u128;
        let x = Poly::x(self.field());
        // x^{q^k} mod f for k = 0..=n
        let mut powers = Vec::with_capacity(n + 1);
        let mut cur = x.rem(&f);
        powers.push(cur.clone());
        for _ in 0..n {
            cur = cur.pow_mod(q, &f);
            powers.push(cur.clone());
        }
        if powers[n] != x.rem(&f) {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let k = n / r as usize;
            f.gcd_unchecked(&powers[k].sub(&x)).is_one()
        })
    }

    /// True iff `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.gcd_unchecked(&self.derivative()).is_constant())
    }

    /// Coefficient-wise `p`-th root of a polynomial in `t^p`.
    fn pth_root(&self) -> Poly {
        let field = self.field();
        let p = field.characteristic() as usize;
        let e = (field.size() / field.characteristic() as u64) as u128;
        let v = self
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&c| field.pow(c, e))
            .collect();
        Poly::new(field, v)
    }

    /// Squarefree decomposition `f = lc * prod g_i^{m_i}` with monic `g_i`.
    /// Entries need not be pairwise coprime when some multiplicity is
    /// divisible by the characteristic.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.field().characteristic();
        let mut out = Vec::new();
        let f = self.monic();
        if f.is_constant() {
            return Ok(out);
        }
        let mut c = f.gcd_unchecked(&f.derivative());
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd_unchecked(&c);
            let fac = w.exact_div(&y);
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.exact_div(&w);
            i += 1;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_decomposition()? {
                out.push((g, m * p));
            }
        }
        Ok(out)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Result<Poly> {
        let mut acc = Poly::one(self.field());
        for (g, _) in self.squarefree_decomposition()? {
            acc = acc.lcm(&g)?;
        }
        Ok(acc)
    }

    /// Number of distinct roots in the algebraic closure.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.radical()?.degree().unwrap_or(0))
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    pub fn distinct_degree_factors(&self) -> Vec<(Poly, usize)> {
        let q = self.field().size() as u128;
        let x = Poly::x(self.field());
        let mut out = Vec::new();
        let mut f = self.monic();
        let mut h = x.clone();
        let mut k = 0;
        while f.degree().unwrap_or(0) >= 2 * (k + 1) {
            k += 1;
            h = h.pow_mod(q, &f);
            let g = f.gcd_unchecked(&h.sub(&x));
            if !g.is_one() {
                f = f.exact_div(&g);
                h = h.rem(&f);
                out.push((g, k));
            }
        }
        if let Some(d) = f.degree().filter(|&d| d > 0) {
            out.push((f, d));
        }
        out
    }

    /// Splits a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree_factors(&self, d: usize) -> Vec<Poly> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ d as u64);
        let mut out = Vec::new();
        equal_degree_split(&self.monic(), d, &mut rng, &mut out);
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted canonically.
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        let mut all: Vec<(Poly, u32)> = Vec::new();
        for (sqf, m) in self.squarefree_decomposition()? {
            for (block, d) in sqf.distinct_degree_factors() {
                for g in block.equal_degree_factors(d) {
                    match all.iter_mut().find(|(h, _)| *h == g) {
                        Some(entry) => entry.1 += m,
                        None => all.push((g, m)),
                    }
                }
            }
        }
        all.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(all)
    }

    /// Distinct roots in the coefficient field, sorted by encoding.
    pub fn roots(&self) -> Vec<Elem> {
        if self.is_constant() {
            return Vec::new();
        }
        let f = self.monic();
        let x = Poly::x(self.field());
        let xq = x.pow_mod(self.field().size() as u128, &f);
        let split = f.gcd_unchecked(&xq.sub(&x));
        let mut roots: Vec<Elem> = split
            .equal_degree_factors(1)
            .into_iter()
            .map(|l| self.field().neg(l.coeff(0)))
            .collect();
        roots.sort();
        roots
    }

    /// Distinct roots in an extension `target` of the coefficient field.
    pub fn roots_in(&self, target: &Arc<Field>) -> Result<Vec<Elem>> {
        let emb = Embedding::new(self.field(), target)?;
        Ok(emb.apply_poly(self).roots())
    }

    /// Monic polynomial whose roots are `self(s)` over the roots `s` of the
    /// monic `modulus`, with multiplicity: the characteristic polynomial of
    /// multiplication by `self` on `F[t]/(modulus)`.
    pub fn image_poly(&self, modulus: &Poly) -> Result<Poly> {
        self.same_field(modulus)?;
        let m = modulus.monic();
        let Some(n) = m.degree().filter(|&n| n > 0) else {
            return Ok(Poly::one(self.field()));
        };
        let g = self.rem(&m);
        let mut mat = vec![vec![Elem::ZERO; n]; n];
        let mut col = g.clone();
        for j in 0..n {
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = col.mul(&Poly::x(self.field())).rem(&m);
        }
        Ok(charpoly(self.field(), &mat))
    }

    /// Polynomial in `y` whose roots (with multiplicity) are the values of
    /// `self` at the roots of its derivative.
    pub fn critical_value_poly(&self) -> Result<Poly> {
        if self.is_constant() {
            return Err(Error::InvalidArgument("critical values of a constant".into()));
        }
        let d = self.derivative();
        if d.is_zero() {
            return Err(Error::Inseparable);
        }
        self.image_poly(&d.monic())
    }
}

fn equal_degree_split(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field().clone();
    let q = field.size() as u128;
    loop {
        let a = Poly::new(
            &field,
            (0..n).map(|_| Elem(rng.gen_range(0..field.size() as u32))).collect(),
        );
        if a.is_constant() {
            continue;
        }
        // a^{(q^d - 1)/2} = (a^{1 + q + ... + q^{d-1}})^{(q-1)/2}
        let mut norm = a.rem(f);
        let mut frob = norm.clone();
        for _ in 1..d {
            frob = frob.pow_mod(q, f);
            norm = norm.mul(&frob).rem(f);
        }
        let b = norm.pow_mod((q - 1) / 2, f);
        let g = f.gcd_unchecked(&b.sub(&Poly::one(&field)));
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.exact_div(&g);
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&h.monic(), d, rng, out);
            return;
        }
    }
}

/// A field homomorphism `F_{p^m} -> F_{p^n}` fixed by the image of the
/// generator of the source's power basis (the smallest root of its modulus).
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<Field>,
    target: Arc<Field>,
    basis: Vec<Elem>,
}

impl Embedding {
    pub fn new(source: &Arc<Field>, target: &Arc<Field>) -> Result<Embedding> {
        if source.characteristic() != target.characteristic() {
            return Err(Error::MixedFields);
        }
        let (m, n) = (source.degree(), target.degree());
        if n % m != 0 {
            return Err(Error::NotASubfield { m, n });
        }
        let basis = if **source == **target {
            let mut b = Vec::with_capacity(m as usize);
            for i in 0..m {
                let mut digits = vec![0; m as usize];
                digits[i as usize] = 1;
                b.push(source.from_digits(&digits));
            }
            b
        } else if m == 1 {
            vec![Elem::ONE]
        } else {
            // Prime-field coefficients have the same encoding in every field.
            let modulus = Poly::new(target, source.modulus().iter().map(|&c| Elem(c)).collect());
            let beta = *modulus
                .roots()
                .first()
                .expect("modulus splits in an extension of degree divisible by m");
            let mut b = Vec::with_capacity(m as usize);
            let mut cur = Elem::ONE;
            for _ in 0..m {
                b.push(cur);
                cur = target.mul(cur, beta);
            }
            b
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            basis,
        })
    }

    pub fn source(&self) -> &Arc<Field> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Field> {
        &self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        if self.source.is_prime_field() {
            return x;
        }
        let t = &*self.target;
        self.source
            .digits(x)
            .into_iter()
            .zip(&self.basis)
            .fold(Elem::ZERO, |acc, (d, &b)| t.add(acc, t.mul(t.from_int(d as i64), b)))
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        Poly::new(&self.target, f.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Arc<Field> {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        let f = f5();
        assert!(!Poly::from_ints(&f, &[0, 0, 1]).is_squarefree().unwrap());
        assert!(Poly::from_ints(&f, &[-1, -2, 1]).is_squarefree().unwrap());
        // t^5 - 5t - 1 = t^5 - 1 = (t - 1)^5 in characteristic 5
        assert!(!Poly::from_ints(&f, &[-1, -5, 0, 0, 0, 1]).is_squarefree().unwrap());
        assert!(matches!(Poly::zero(&f).is_squarefree(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn distinct_root_count_examples() {
        let f = f5();
        assert_eq!(Poly::from_ints(&f, &[0, 0, 0, 1]).distinct_root_count().unwrap(), 1);
        assert_eq!(Poly::from_ints(&f, &[-2, 2]).distinct_root_count().unwrap(), 1);
        // inseparable case: (t - 1)^5 has one distinct root
        assert_eq!(Poly::from_ints(&f, &[-1, 0, 0, 0, 0, 1]).distinct_root_count().unwrap(), 1);
        // f_d' = d (t^{d-1} - 1) has d - 1 distinct roots when p does not divide d(d-1)
        for (p, d) in [(5u32, 2i64), (5, 3), (7, 4), (11, 6), (13, 12)] {
            let f = Field::new(p, 1).unwrap();
            let mut c = vec![0i64; d as usize + 1];
            c[0] = -1;
            c[1] = -d;
            c[d as usize] = 1;
            let fd = Poly::from_ints(&f, &c);
            assert_eq!(fd.derivative().distinct_root_count().unwrap(), d as usize - 1);
        }
    }

    #[test]
    fn critical_value_examples() {
        let f = f5();
        let cv = Poly::from_ints(&f, &[0, 0, 1]).critical_value_poly().unwrap();
        assert_eq!(cv.roots(), vec![Elem(0)]);
        let cv = Poly::from_ints(&f, &[-1, -2, 1]).critical_value_poly().unwrap();
        assert_eq!(cv, Poly::from_ints(&f, &[-3, 1]));
        assert!(matches!(
            Poly::from_ints(&f, &[1, 0, 0, 0, 0, 1]).critical_value_poly(),
            Err(Error::Inseparable)
        ));
    }

    #[test]
    fn critical_values_of_fd_are_mu_times_one_minus_d_minus_one() {
        for (p, d) in [(5u32, 2usize), (7, 2), (11, 4), (13, 6)] {
            let f = Field::new(p, 1).unwrap();
            let mut c = vec![0i64; d + 1];
            c[0] = -1;
            c[1] = -(d as i64);
            c[d] = 1;
            let fd = Poly::from_ints(&f, &c);
            let cv = fd.critical_value_poly().unwrap();
            // expected: prod over mu^{d-1} = 1 of (y - (mu(1 - d) - 1)), computed as the
            // image of t^{d-1} - 1 under y = (1 - d) t - 1
            let mut unity = vec![0i64; d];
            unity[0] = -1;
            unity[d - 1] = 1;
            let expected = Poly::from_ints(&f, &[-1, 1 - d as i64]).image_poly(&Poly::from_ints(&f, &unity)).unwrap();
            assert_eq!(cv, expected);
            assert!(cv.is_squarefree().unwrap());
        }
    }

    #[test]
    fn roots_examples() {
        let f = f5();
        assert_eq!(Poly::from_ints(&f, &[1, 0, 1]).roots(), vec![Elem(2), Elem(3)]);
        assert!(Poly::from_ints(&f, &[2, 0, 1]).roots().is_empty());
        let fermat = Poly::from_ints(&f, &[0, -1, 0, 0, 0, 1]);
        assert_eq!(fermat.roots(), f.elements().collect::<Vec<_>>());
        let f25 = Field::new(5, 2).unwrap();
        assert_eq!(Poly::from_ints(&f, &[2, 0, 1]).roots_in(&f25).unwrap().len(), 2);
    }

    #[test]
    fn factorization_reassembles() {
        let f = Field::new(7, 1).unwrap();
        let a = Poly::from_ints(&f, &[1, 1]).pow(7).mul(&Poly::from_ints(&f, &[3, 0, 1]).pow(2));
        let a = a.mul(&Poly::from_ints(&f, &[2, 1, 0, 1]));
        let fac = a.factor().unwrap();
        let mut prod = Poly::one(&f);
        for (g, m) in &fac {
            assert!(g.is_irreducible());
            prod = prod.mul(&g.pow(*m as u64));
        }
        assert_eq!(prod, a.monic());
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f5 = f5();
        let f25 = Field::new(5, 2).unwrap();
        let e = Embedding::new(&f5, &f25).unwrap();
        assert_eq!(e.apply(Elem::ZERO), Elem::ZERO);
        assert_eq!(e.apply(Elem::ONE), Elem::ONE);
        for a in f5.elements() {
            for b in f5.elements() {
                assert_eq!(e.apply(f5.mul(a, b)), f25.mul(e.apply(a), e.apply(b)));
            }
        }
        let f625 = Field::new(5, 4).unwrap();
        let e = Embedding::new(&f25, &f625).unwrap();
        let mut images: Vec<Elem> = f25.elements().map(|a| e.apply(a)).collect();
        for a in f25.elements() {
            assert_eq!(e.apply(f25.frobenius(a)), f625.frobenius(e.apply(a)));
            for b in f25.elements().step_by(3) {
                assert_eq!(e.apply(f25.mul(a, b)), f625.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f25.add(a, b)), f625.add(e.apply(a), e.apply(b)));
            }
        }
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 25);
        assert!(matches!(
            Embedding::new(&f25, &Field::new(5, 3).unwrap()),
            Err(Error::NotASubfield { m: 2, n: 3 })
        ));
    }

    /// Distinct roots in the closure via Moebius inversion over F_{p^k}, k <= deg.
    fn brute_distinct_roots(f: &Poly) -> usize {
        let p = f.field().characteristic();
        let deg = f.degree().unwrap();
        let mut in_field = vec![0i64; deg + 1];
        for k in 1..=deg {
            let big = Field::new(p, k as u32).unwrap();
            let g = Embedding::new(f.field(), &big).unwrap().apply_poly(f);
            in_field[k] = big.elements().filter(|&x| g.eval(x).is_zero()).count() as i64;
        }
        let mobius = |n: usize| -> i64 {
            let fs = prime_factors(n as u64);
            if fs.iter().any(|&r| (n as u64).is_multiple_of(r * r)) {
                0
            } else if fs.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        };
        (1..=deg)
            .map(|e| (1..=e).filter(|k| e % k == 0).map(|k| mobius(e / k) * in_field[k]).sum::<i64>())
            .sum::<i64>() as usize
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn gcd_divides_and_degrees_add_up(
            a in proptest::collection::vec(0i64..5, 1..9),
            b in proptest::collection::vec(0i64..5, 1..9),
        ) {
            let f = f5();
            let (a, b) = (Poly::from_ints(&f, &a), Poly::from_ints(&f, &b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = a.gcd(&b).unwrap();
            prop_assert!(g.divides(&a) && g.divides(&b));
            let l = a.lcm(&b).unwrap();
            prop_assert_eq!(
                g.degree().unwrap() + l.degree().unwrap(),
                a.degree().unwrap() + b.degree().unwrap()
            );
        }

        #[test]
        fn distinct_root_count_matches_enumeration(
            c in proptest::collection::vec(0i64..5, 2..7),
            p in prop_oneof![Just(5u32), Just(7u32)],
        ) {
            let f = Field::new(p, 1).unwrap();
            let mut v = c.clone();
            v.push(1);
            let poly = Poly::from_ints(&f, &v);
            prop_assert_eq!(poly.distinct_root_count().unwrap(), brute_distinct_roots(&poly));
        }
    }
}
