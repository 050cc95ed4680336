//! Exact L-polynomials `L(E/F_Q(t), T)` from fiberwise trace sums.
//!
//! Conventions: `b_m = sum over t in P^1(F_{Q^m}) of a_t` with
//! `a_t = Q^m + 1 - #E_t(F_{Q^m})`, and `log L(T) = sum_m b_m T^m / m`.
//! So `b_m` is minus the m-th power sum of the inverse roots of `L`.

pub mod euler;
mod weil;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration::{Kernel, TwistFamily};
use crate::galois::Field;
use crate::modl::{self, ModPoly};

pub use weil::{weil_check, WEIL_TOLERANCE};

/// Trace sums `b_1..b_M` over a constant field of size `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceVector {
    pub q: u64,
    pub traces: Vec<i64>,
}

/// `(Q^m + 1)(floor(2 sqrt(Q^m)) + 1)`.
pub fn trace_bound(qm: u64) -> i64 {
    let s = (qm as f64).sqrt().floor() as u64;
    // exact floor(2 sqrt(qm)) = floor(sqrt(4 qm))
    let mut r = (2 * s).saturating_sub(1);
    while (r + 1) * (r + 1) <= 4 * qm {
        r += 1;
    }
    (qm as i64 + 1) * (r as i64 + 1)
}

/// `F_{Q^m}` for the constant field `F_Q`.
pub fn extension(constant: &Arc<Field>, m: usize) -> Result<Arc<Field>> {
    Field::new(constant.characteristic(), constant.degree() * m as u32)
}

/// Exact `sum of a_t over P^1(field)`.
pub fn trace_sum(fam: &TwistFamily, field: &Arc<Field>) -> Result<i64> {
    trace_sum_with(fam, field, Kernel::CharacterSum)
}

pub fn trace_sum_with(fam: &TwistFamily, field: &Arc<Field>, kernel: Kernel) -> Result<i64> {
    Ok(fam.fibers(field, kernel)?.trace_sum())
}

/// Coefficients `c_0..c_upto` of `exp(sum b_m T^m / m)`.
pub fn newton_coefficients(traces: &[i64], upto: usize) -> Result<Vec<BigInt>> {
    if traces.len() < upto {
        return Err(Error::InvalidArgument(format!(
            "need {upto} traces, have {}",
            traces.len()
        )));
    }
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=upto {
        let mut s = BigInt::zero();
        for j in 1..=k {
            s += BigInt::from(traces[j - 1]) * &c[k - j];
        }
        let (q, r) = s.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::CountingInconsistency(format!(
                "{k} does not divide {s} at coefficient {k}"
            )));
        }
        c.push(q);
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    Complete { coeffs: Vec<BigInt>, eps: i8 },
    NeedsMore(usize),
}

/// Completes `c_0..c_k` to degree `n` through `c_{N-j} = eps Q^{N-2j} c_j`.
pub fn complete_by_fe(partial: &[BigInt], n: usize, q: u64) -> Result<Completion> {
    let k = partial.len().checked_sub(1).ok_or_else(|| {
        Error::InvalidArgument("no coefficients given".into())
    })?;
    if k < n.div_ceil(2) {
        return Err(Error::InvalidArgument(format!(
            "need coefficients through {}, have {k}",
            n.div_ceil(2)
        )));
    }
    let q = BigInt::from(q);
    let known = k.min(n);
    let mut eps: Option<i8> = None;
    // pairs (j, N - j) with both known, from the middle outward
    let lo = n - known;
    for j in (lo..=n / 2).rev() {
        let cj = &partial[j];
        let cnj = &partial[n - j];
        let scale = q.pow((n - 2 * j) as u32);
        let e = if cj.is_zero() {
            if !cnj.is_zero() {
                return Err(Error::InconsistentSign(format!(
                    "c_{j} = 0 but c_{} = {cnj}",
                    n - j
                )));
            }
            continue;
        } else if *cnj == &scale * cj {
            1
        } else if *cnj == -(&scale * cj) {
            -1
        } else {
            return Err(Error::InconsistentSign(format!(
                "c_{} = {cnj} is not +-Q^{} c_{j} = {}",
                n - j,
                n - 2 * j,
                &scale * cj
            )));
        };
        match eps {
            Some(prev) if prev != e => {
                return Err(Error::InconsistentSign(format!(
                    "pair {j} gives {e}, an earlier pair gave {prev}"
                )))
            }
            _ => eps = Some(e),
        }
    }
    let Some(eps) = eps else {
        return Ok(Completion::NeedsMore(k + 1));
    };
    if partial[known + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InconsistentSign(format!(
            "nonzero coefficient beyond degree {n}"
        )));
    }
    let mut coeffs: Vec<BigInt> = partial[..=known].to_vec();
    for i in known + 1..=n {
        let j = n - i;
        let v = q.pow((n - 2 * j) as u32) * &partial[j];
        coeffs.push(if eps == 1 { v } else { -v });
    }
    Ok(Completion::Complete { coeffs, eps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// `b_1..b_M` as computed.
    pub traces_used: Vec<i64>,
    /// Whether any coefficient came from the functional equation.
    pub fe_completed: bool,
}

/// An exact L-polynomial with its functional-equation sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "LPolynomialJson", try_from = "LPolynomialJson")]
pub struct LPolynomial {
    pub q: u64,
    pub coeffs: Vec<BigInt>,
    /// `None` only for unvalidated partial data.
    pub eps: Option<i8>,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct LPolynomialJson {
    #[serde(rename = "Q")]
    q: u64,
    #[serde(rename = "N")]
    n: usize,
    eps: Option<i8>,
    coeffs: Vec<String>,
    traces_used: Vec<i64>,
    fe_completed: bool,
}

impl From<LPolynomial> for LPolynomialJson {
    fn from(l: LPolynomial) -> Self {
        LPolynomialJson {
            q: l.q,
            n: l.degree(),
            eps: l.eps,
            coeffs: l.coeffs.iter().map(|c| c.to_string()).collect(),
            traces_used: l.provenance.traces_used,
            fe_completed: l.provenance.fe_completed,
        }
    }
}

impl TryFrom<LPolynomialJson> for LPolynomial {
    type Error = String;
    fn try_from(j: LPolynomialJson) -> std::result::Result<Self, String> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| format!("bad coefficient {s:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coeffs.len() != j.n + 1 {
            return Err(format!("N = {} but {} coefficients", j.n, coeffs.len()));
        }
        Ok(LPolynomial {
            q: j.q,
            coeffs,
            eps: j.eps,
            provenance: Provenance {
                traces_used: j.traces_used,
                fe_completed: j.fe_completed,
            },
        })
    }
}

impl LPolynomial {
    /// Builds and validates an L-polynomial from explicit coefficients.
    pub fn from_coefficients(q: u64, coeffs: Vec<BigInt>, eps: i8) -> Result<LPolynomial> {
        let l = LPolynomial {
            q,
            coeffs,
            eps: Some(eps),
            provenance: Provenance {
                traces_used: Vec::new(),
                fe_completed: false,
            },
        };
        l.validate()?;
        Ok(l)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eps(&self) -> i8 {
        self.eps.expect("validated L-polynomial has a sign")
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    /// Checks `c_0 = 1`, the exact functional equation, `c_N = eps Q^N`,
    /// and purity of the inverse roots.
    pub fn validate(&self) -> Result<()> {
        if self.coeffs.is_empty() || !self.coeffs[0].is_one() {
            return Err(Error::Validation("L-polynomial has c_0 != 1".into()));
        }
        let eps = match self.eps {
            Some(e @ (1 | -1)) => e,
            other => return Err(Error::Validation(format!("L-polynomial sign {other:?} is not +-1"))),
        };
        let n = self.degree();
        let q = self.q_big();
        for j in 0..=n {
            let rhs = q.pow((n as i64 - 2 * j as i64).unsigned_abs() as u32);
            let ok = if 2 * j <= n {
                self.coeffs[n - j] == BigInt::from(eps) * rhs * &self.coeffs[j]
            } else {
                // c_{N-j} Q^{2j-N} = eps c_j
                &self.coeffs[n - j] * rhs == BigInt::from(eps) * &self.coeffs[j]
            };
            if !ok {
                return Err(Error::Validation(format!("L-polynomial functional equation fails at j = {j}")));
            }
        }
        if !weil_check(self, WEIL_TOLERANCE)? {
            return Err(Error::Validation("L-polynomial has inverse roots off the circle |z| = Q".into()));
        }
        Ok(())
    }

    /// Multiplicity of the inverse root `Q`, by repeated exact division by `1 - QT`.
    pub fn analytic_rank(&self) -> usize {
        let q = self.q_big();
        let mut cur = self.coeffs.clone();
        let mut r = 0;
        while let Some(next) = divide_by_one_minus(&cur, &q) {
            cur = next;
            r += 1;
        }
        r
    }

    /// `P(T) = L(T/Q)` reduced mod `ell`: coefficients `c_j Q^{-j}`.
    pub fn unitarize_mod_ell(&self, ell: u64) -> Result<ModPoly> {
        modl::check_ell(ell)?;
        let qinv = modl::inv_mod(self.q, ell).ok_or_else(|| {
            Error::InvalidArgument(format!("ell = {ell} divides Q = {}", self.q))
        })?;
        let big_ell = BigInt::from(ell);
        let mut scale = 1u64;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let r = c.mod_floor(&big_ell).to_u64().unwrap();
            out.push(r * scale % ell);
            scale = scale * qinv % ell;
        }
        Ok(ModPoly::new(ell, out))
    }

    /// `det(-A)` of the orthogonal Frobenius: the unitarized polynomial
    /// satisfies `T^N P(1/T) = eps P(T)`.
    pub fn det_minus_frobenius(&self) -> i8 {
        self.eps()
    }

    /// `det(A) = (-1)^N eps`.
    pub fn det_frobenius(&self) -> i8 {
        if self.degree().is_multiple_of(2) {
            self.eps()
        } else {
            -self.eps()
        }
    }
}

/// `L / (1 - rT)` when exact.
pub(crate) fn divide_by_one_minus(l: &[BigInt], r: &BigInt) -> Option<Vec<BigInt>> {
    if l.len() < 2 {
        return None;
    }
    let mut m: Vec<BigInt> = Vec::with_capacity(l.len() - 1);
    let mut prev = BigInt::zero();
    for c in &l[..l.len() - 1] {
        let v = c + r * &prev;
        m.push(v.clone());
        prev = v;
    }
    let last = &l[l.len() - 1] + r * &prev;
    last.is_zero().then_some(m)
}

/// Character evaluations needed for traces `1..=m_max` over `F_Q`.
pub fn work_estimate(q: u64, m_max: usize) -> f64 {
    (1..=m_max)
        .map(|m| {
            let qm = (q as f64).powi(m as i32);
            (qm + 1.0) * qm
        })
        .sum()
}

/// Computes `L(E/F_Q(t), T)` where `F_Q` is `constant`, an extension of the
/// family's field.
pub fn l_polynomial(fam: &TwistFamily, constant: &Arc<Field>) -> Result<LPolynomial> {
    l_polynomial_with(fam, constant, Kernel::CharacterSum)
}

pub fn l_polynomial_with(fam: &TwistFamily, constant: &Arc<Field>, kernel: Kernel) -> Result<LPolynomial> {
    let n = fam.l_degree()?;
    let q = constant.size();
    let mut traces: Vec<i64> = Vec::new();
    let mut want = n.div_ceil(2);
    loop {
        while traces.len() < want {
            let m = traces.len() + 1;
            let ext = extension(constant, m)?;
            let b = trace_sum_with(fam, &ext, kernel)?;
            if b.abs() > trace_bound(ext.size()) {
                return Err(Error::CountingInconsistency(format!(
                    "|b_{m}| = {} exceeds the Hasse-type bound",
                    b.abs()
                )));
            }
            traces.push(b);
        }
        let partial = newton_coefficients(&traces, want)?;
        match complete_by_fe(&partial, n, q)? {
            Completion::Complete { coeffs, eps } => {
                let l = LPolynomial {
                    q,
                    coeffs,
                    eps: Some(eps),
                    provenance: Provenance {
                        traces_used: traces.clone(),
                        fe_completed: want < n,
                    },
                };
                l.validate()?;
                return Ok(l);
            }
            Completion::NeedsMore(m) => {
                if m > n {
                    return Err(Error::InconsistentSign("sign undetermined at full degree".into()));
                }
                want = m;
            }
        }
    }
}

/// Candidate degrees consistent with the traces `b_1..b_M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProbe {
    #[serde(rename = "Q")]
    pub q: u64,
    pub conductor_degree: usize,
    pub classified_n: Option<usize>,
    pub traces: Vec<i64>,
    /// `(N, eps)` pairs whose completion is consistent and pure.
    pub consistent: Vec<(usize, i8)>,
}

/// Fits `N` by extending traces to `m_max` and testing every degree up to
/// `2 m_max` for FE consistency and purity.
pub fn probe_degree(fam: &TwistFamily, constant: &Arc<Field>, m_max: usize) -> Result<DegreeProbe> {
    let q = constant.size();
    let mut traces = Vec::new();
    for m in 1..=m_max {
        traces.push(trace_sum(fam, &extension(constant, m)?)?);
    }
    let coeffs = newton_coefficients(&traces, m_max)?;
    let mut consistent = Vec::new();
    for n in 0..=2 * m_max {
        let Ok(Completion::Complete { coeffs: full, eps }) = complete_by_fe(&coeffs[..=m_max.min(n)], n, q) else {
            continue;
        };
        // every known coefficient past N must vanish
        if coeffs.iter().skip(n + 1).any(|c| !c.is_zero()) {
            continue;
        }
        let l = LPolynomial {
            q,
            coeffs: full,
            eps: Some(eps),
            provenance: Provenance {
                traces_used: traces.clone(),
                fe_completed: true,
            },
        };
        if l.validate().is_ok() {
            consistent.push((n, eps));
        }
    }
    Ok(DegreeProbe {
        q,
        conductor_degree: fam.conductor_degree(),
        classified_n: fam.l_degree().ok(),
        traces,
        consistent,
    })
}

/// `|c_j| <= binom(N, j) Q^j` for every coefficient.
pub fn coefficient_bound_holds(l: &LPolynomial) -> bool {
    let n = l.degree();
    let q = l.q_big();
    let mut binom = BigInt::one();
    for (j, c) in l.coeffs.iter().enumerate() {
        if c.abs() > &binom * q.pow(j as u32) {
            return false;
        }
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{Elem, Poly};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn newton_examples() {
        assert_eq!(newton_coefficients(&[0, 0, 0], 3).unwrap(), big(&[1, 0, 0, 0]));
        assert_eq!(newton_coefficients(&[7], 1).unwrap(), big(&[1, 7]));
        // inverse roots {2, 3}: power sums 5, 13 enter with a minus sign
        assert_eq!(newton_coefficients(&[-5, -13], 2).unwrap(), big(&[1, -5, 6]));
        // the positive power sums give exp(5T + 13T^2/2), not a polynomial with roots 2, 3
        assert_eq!(newton_coefficients(&[5, 13], 2).unwrap(), big(&[1, 5, 19]));
        assert!(matches!(
            newton_coefficients(&[1, 0], 2),
            Err(Error::CountingInconsistency(_))
        ));
    }

    #[test]
    fn newton_round_trip_from_chosen_roots() {
        // L = (1 - 3T)(1 + 2T + 9T^2)(1 + 3T), closed under g -> 9/g with Q = 3
        let l = big(&[1, 2, 9]);
        let mut full = vec![BigInt::one()];
        for f in [big(&[1, -3]), l, big(&[1, 3])] {
            let mut out = vec![BigInt::zero(); full.len() + f.len() - 1];
            for (i, a) in full.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            full = out;
        }
        // power sums from log derivative: b_m = -sum gamma^m
        let n = full.len() - 1;
        let mut b = vec![0i64; n];
        for m in 1..=n {
            // m c_m = sum_{j=1}^m b_j c_{m-j}
            let mut s = BigInt::from(m as i64) * &full[m];
            for j in 1..m {
                s -= BigInt::from(b[j - 1]) * &full[m - j];
            }
            b[m - 1] = s.to_i64().unwrap();
        }
        assert_eq!(newton_coefficients(&b, n).unwrap(), full);
    }

    #[test]
    fn completion_examples() {
        let c = big(&[1, 0, 7]);
        assert_eq!(
            complete_by_fe(&c, 4, 5).unwrap(),
            Completion::Complete { coeffs: big(&[1, 0, 7, 0, 625]), eps: 1 }
        );
        assert_eq!(complete_by_fe(&big(&[1, 0]), 2, 5).unwrap(), Completion::NeedsMore(2));
        assert_eq!(
            complete_by_fe(&big(&[1]), 0, 5).unwrap(),
            Completion::Complete { coeffs: big(&[1]), eps: 1 }
        );
        assert_eq!(
            complete_by_fe(&big(&[1, 0, -25]), 2, 5).unwrap(),
            Completion::Complete { coeffs: big(&[1, 0, -25]), eps: -1 }
        );
        // N odd: c_1 = 2 with pair (1, 2) giving c_2 = eps Q c_1
        assert_eq!(
            complete_by_fe(&big(&[1, 2, -10]), 3, 5).unwrap(),
            Completion::Complete { coeffs: big(&[1, 2, -10, -125]), eps: -1 }
        );
        assert!(matches!(complete_by_fe(&big(&[1, 2, 11]), 3, 5), Err(Error::InconsistentSign(_))));
        assert!(matches!(complete_by_fe(&big(&[1, 1]), 4, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn unitarization_examples() {
        let one = LPolynomial::from_coefficients(5, big(&[1]), 1).unwrap();
        assert_eq!(one.unitarize_mod_ell(3).unwrap().coeffs, vec![1]);
        let lin = LPolynomial::from_coefficients(5, big(&[1, -5]), -1).unwrap();
        for ell in [3, 7, 11] {
            assert_eq!(lin.unitarize_mod_ell(ell).unwrap(), ModPoly::new(ell, vec![1, ell - 1]));
        }
        assert!(lin.unitarize_mod_ell(5).is_err());
        assert!(lin.unitarize_mod_ell(2).is_err());
        // det(-A) of 1 - T is the sign -1
        assert!(lin.unitarize_mod_ell(3).unwrap().reciprocal_identity(lin.det_minus_frobenius() as i64));
        let l = LPolynomial::from_coefficients(5, big(&[1, 10, 25]), 1).unwrap();
        assert_eq!(l.unitarize_mod_ell(3).unwrap().coeffs[1], 2);
    }

    #[test]
    fn analytic_rank_examples() {
        let q = 7;
        let r = |v: &[i64], e| LPolynomial::from_coefficients(q, big(v), e).unwrap().analytic_rank();
        assert_eq!(r(&[1], 1), 0);
        assert_eq!(r(&[1, -14, 49], 1), 2);
        assert_eq!(r(&[1, 0, -49], -1), 1);
    }

    #[test]
    fn trace_bounds() {
        assert_eq!(trace_bound(5), 30);
        assert_eq!(trace_bound(4), 25);
    }

    #[test]
    fn legendre_base_has_trivial_l() {
        let f5 = Field::new(5, 1).unwrap();
        let fam = TwistFamily::legendre(&f5, Poly::one(&f5)).unwrap();
        assert_eq!(trace_sum(&fam, &f5).unwrap(), 0);
        assert_eq!(trace_sum(&fam, &Field::new(5, 2).unwrap()).unwrap(), 0);
        let l = l_polynomial(&fam, &f5).unwrap();
        assert_eq!(l.coeffs, big(&[1]));
        assert_eq!(l.eps, Some(1));
    }

    #[test]
    fn e20_over_f5_is_pure_of_degree_4() {
        let f5 = Field::new(5, 1).unwrap();
        let fam = TwistFamily::twisted_legendre(&f5, 2, Elem(0)).unwrap();
        let l = l_polynomial(&fam, &f5).unwrap();
        assert_eq!(l.degree(), 4);
        assert_eq!(l.coeffs[4], BigInt::from(l.eps()) * BigInt::from(625));
        // direct counting reproduces the same polynomial
        assert_eq!(l_polynomial_with(&fam, &f5, Kernel::Direct).unwrap(), l);
        assert!(coefficient_bound_holds(&l));
    }

    #[test]
    fn json_round_trip() {
        let l = LPolynomial::from_coefficients(5, big(&[1, 0, -25]), -1).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"Q":5,"N":2,"eps":-1,"coeffs":["1","0","-25"],"traces_used":[],"fe_completed":false}"#);
        let back: LPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn probe_recovers_the_classified_degree() {
        let f5 = Field::new(5, 1).unwrap();
        let fam = TwistFamily::twisted_legendre(&f5, 2, Elem(0)).unwrap();
        let probe = probe_degree(&fam, &f5, 3).unwrap();
        assert_eq!(probe.classified_n, Some(4));
        assert!(probe.consistent.iter().any(|&(n, _)| n == 4));
    }
}
