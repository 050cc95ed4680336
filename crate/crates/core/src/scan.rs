//! Rank statistics over the twisted Legendre families
//! `E_{d,alpha}: (f_d(t) - alpha) y^2 = x(x+1)(x-t)`, `alpha in U_{f_d}(F_{p^n})`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration::{fd_poly, TwistFamily};
use crate::galois::{Elem, Embedding, Field, Poly};
use crate::klcert;
use crate::lfun::{self, LPolynomial};
use crate::ortho::{classify_charpoly, ev_density, OrthoCensus, Stratum};

/// Refuse scans above this many character evaluations unless forced.
pub const DEFAULT_BUDGET: f64 = 1e10;

pub fn analytic_rank(l: &LPolynomial) -> usize {
    l.analytic_rank()
}

/// `r > (1 - eps)/2`, after checking `r = (1 - eps)/2 mod 2`.
pub fn has_extra_vanishing(rank: usize, eps: i8) -> Result<bool> {
    let forced = usize::from(eps == -1);
    if rank % 2 != forced {
        return Err(Error::ParityViolation { rank, sign: eps as i32 });
    }
    Ok(rank > forced)
}

fn ratio_string(r: Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Reduction of one twist's unitarized L-polynomial mod `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModEll {
    pub charpoly: Vec<u64>,
    /// `det A = (-1)^N eps` reduced mod `l`.
    pub det: u64,
    pub stratum: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRecord {
    /// Encoding of `alpha` in the constant field.
    pub alpha: u32,
    #[serde(rename = "L")]
    pub l: LPolynomial,
    pub rank: usize,
    pub eps: i8,
    pub extra_vanishing: bool,
    /// `r - (1 - eps)/2`.
    pub beta: usize,
    pub mod_ell: BTreeMap<u64, ModEll>,
}

impl TwistRecord {
    pub fn new(alpha: Elem, l: LPolynomial, ells: &[u64]) -> Result<TwistRecord> {
        let rank = l.analytic_rank();
        let eps = l.eps();
        if rank > l.degree() {
            return Err(Error::Validation(format!("rank {rank} exceeds degree {}", l.degree())));
        }
        let extra = has_extra_vanishing(rank, eps)?;
        let mut mod_ell = BTreeMap::new();
        for &ell in ells {
            let p = l.unitarize_mod_ell(ell)?;
            if !p.reciprocal_identity(l.det_minus_frobenius() as i64) {
                return Err(Error::Validation(format!(
                    "mod-{ell} reduction breaks the orthogonal functional equation"
                )));
            }
            let det = crate::modl::reduce(l.det_frobenius() as i64, ell);
            let stratum = classify_charpoly(&p, det as i64);
            mod_ell.insert(ell, ModEll { charpoly: p.coeffs, det, stratum });
        }
        Ok(TwistRecord {
            alpha: alpha.0,
            l,
            rank,
            eps,
            extra_vanishing: extra,
            beta: rank - usize::from(eps == -1),
            mod_ell,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllTable {
    /// Characteristic polynomial (comma-joined coefficients) to twist count.
    pub classes: BTreeMap<String, u64>,
    pub extra_vanishing: u64,
    pub frequency: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCounts {
    pub plus: u64,
    pub minus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyStats {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub degree: usize,
    pub u_size: usize,
    /// Twists with extra vanishing.
    pub v_n: u64,
    pub rank_histogram: BTreeMap<usize, u64>,
    pub eps_distribution: SignCounts,
    pub average_rank: String,
    /// `1/(2(d^2+1))`.
    pub predicted_c_family: String,
    /// `1/(2N^2 - 2N + 1)`.
    pub predicted_c_orthogonal: String,
    pub per_ell: BTreeMap<u64, EllTable>,
    pub records: Vec<TwistRecord>,
}

impl FamilyStats {
    /// Aggregates records in the order given (callers sort by `alpha`).
    pub fn from_records(p: u32, n: u32, d: usize, degree: usize, records: Vec<TwistRecord>) -> FamilyStats {
        let mut hist = BTreeMap::new();
        let mut eps = SignCounts::default();
        let mut v_n = 0;
        let mut rank_sum = 0u64;
        let mut per_ell: BTreeMap<u64, EllTable> = BTreeMap::new();
        for r in &records {
            *hist.entry(r.rank).or_insert(0) += 1;
            if r.eps == 1 {
                eps.plus += 1;
            } else {
                eps.minus += 1;
            }
            v_n += u64::from(r.extra_vanishing);
            rank_sum += r.rank as u64;
            for (&ell, m) in &r.mod_ell {
                let t = per_ell.entry(ell).or_default();
                let key = m.charpoly.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                *t.classes.entry(key).or_insert(0) += 1;
                t.extra_vanishing += u64::from(m.stratum != Stratum::None);
            }
        }
        let count = records.len() as u64;
        for t in per_ell.values_mut() {
            t.frequency = ratio_string(Ratio::new(t.extra_vanishing, count.max(1)));
        }
        let n2 = degree as u64;
        FamilyStats {
            p,
            n,
            d,
            degree,
            u_size: records.len(),
            v_n,
            rank_histogram: hist,
            eps_distribution: eps,
            average_rank: ratio_string(Ratio::new(rank_sum, count.max(1))),
            predicted_c_family: ratio_string(Ratio::new(1, 2 * (d as u64 * d as u64 + 1))),
            predicted_c_orthogonal: ratio_string(Ratio::new(1, 2 * n2 * n2 - 2 * n2 + 1)),
            per_ell,
            records,
        }
    }

    /// Conservation checks between the histogram, signs and records.
    pub fn check(&self) -> Result<()> {
        let total: u64 = self.rank_histogram.values().sum();
        if total as usize != self.u_size || self.records.len() != self.u_size {
            return Err(Error::Validation("rank histogram does not sum to |U|".into()));
        }
        if self.eps_distribution.plus + self.eps_distribution.minus != total {
            return Err(Error::Validation("sign counts do not sum to |U|".into()));
        }
        let high: u64 = self.rank_histogram.range(2..).map(|(_, c)| c).sum();
        if high != self.v_n {
            return Err(Error::Validation("V_n disagrees with the rank histogram".into()));
        }
        Ok(())
    }
}

/// `U_f(F)`: parameters outside the critical values of `f` and `f(S)`,
/// enumerated from the root set of `cv(f) * prod P_s`.
pub fn u_by_value_polynomial(f: &Poly, places: &[Poly], field: &Arc<Field>) -> Result<Vec<Elem>> {
    let mut v = f.critical_value_poly()?;
    for pi in places {
        v = v.mul(&f.image_poly(pi)?);
    }
    let v = Embedding::new(f.field(), field)?.apply_poly(&v);
    Ok(field.elements().filter(|&a| !v.eval(a).is_zero()).collect())
}

/// `U_f(F)`: `f - alpha` squarefree and `alpha` distinct from every `f(s)`.
pub fn u_by_squarefree_fibers(f: &Poly, places: &[Poly], field: &Arc<Field>) -> Result<Vec<Elem>> {
    let emb = Embedding::new(f.field(), field)?;
    let fe = emb.apply_poly(f);
    // images f(s) for every geometric point of S, in a common extension
    let mut images: Vec<(Arc<Field>, Embedding, Vec<Elem>)> = Vec::new();
    for pi in places {
        let e = pi.degree().unwrap() as u32;
        let l = num_integer::lcm(e, field.degree());
        let big = Field::new(field.characteristic(), l)?;
        let fb = Embedding::new(f.field(), &big)?.apply_poly(f);
        let vals = pi.roots_in(&big)?.into_iter().map(|s| fb.eval(s)).collect();
        images.push((big.clone(), Embedding::new(field, &big)?, vals));
    }
    let mut out = Vec::new();
    for a in field.elements() {
        let g = fe.sub(&Poly::constant(field, a));
        if !g.is_squarefree()? {
            continue;
        }
        if images.iter().any(|(_, e, vals)| vals.contains(&e.apply(a))) {
            continue;
        }
        out.push(a);
    }
    Ok(out)
}

/// Finite bad places of the Legendre curve over `base`.
fn legendre_places(base: &Arc<Field>) -> Result<Vec<Poly>> {
    TwistFamily::legendre(base, Poly::one(base))?.base_bad_places()
}

/// `U_{f_d}(F_{p^n})` with both enumerations asserted equal.
pub fn parameter_set(p: u32, d: usize, n: u32) -> Result<Vec<Elem>> {
    let base = Field::new(p, 1)?;
    let field = Field::new(p, n)?;
    let f = fd_poly(&base, d);
    let places = legendre_places(&base)?;
    let a = u_by_value_polynomial(&f, &places, &field)?;
    let b = u_by_squarefree_fibers(&f, &places, &field)?;
    if a != b {
        return Err(Error::Validation(format!(
            "parameter sets disagree: {} versus {} elements",
            a.len(),
            b.len()
        )));
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub ells: Vec<u64>,
    pub budget: f64,
    pub force: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            ells: Vec::new(),
            budget: DEFAULT_BUDGET,
            force: false,
        }
    }
}

/// Character evaluations a scan would need.
pub fn scan_work_estimate(p: u32, d: usize, n: u32, u_size: usize) -> f64 {
    let q = (p as u64).pow(n);
    u_size as f64 * lfun::work_estimate(q, d)
}

pub fn scan_family(p: u32, d: usize, n: u32, opts: &ScanOptions) -> Result<FamilyStats> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let cert = klcert::certify_fd(p, d)?;
    if !cert.passed() || cert.verdict != klcert::Verdict::KatzLefschetz {
        return Err(Error::InvalidArgument(format!(
            "f_{d} is not of Katz-Lefschetz type over F_{p}: condition {:?} fails",
            cert.condition
        )));
    }
    let q = (p as u64).pow(n);
    for &ell in &opts.ells {
        crate::modl::check_ell(ell)?;
        if q.is_multiple_of(ell) {
            return Err(Error::InvalidArgument(format!("ell = {ell} divides Q = {q}")));
        }
    }
    let field = Field::new(p, n)?;
    let u = parameter_set(p, d, n)?;
    let estimate = scan_work_estimate(p, d, n, u.len());
    if estimate > opts.budget && !opts.force {
        return Err(Error::BudgetExceeded { estimate, budget: opts.budget });
    }
    let degree = 2 * d;
    let records: Vec<TwistRecord> = u
        .par_iter()
        .map(|&alpha| -> Result<TwistRecord> {
            let fam = TwistFamily::twisted_legendre(&field, d, alpha)?;
            let l = lfun::l_polynomial(&fam, &field)?;
            if l.degree() != degree {
                return Err(Error::Validation(format!(
                    "alpha = {}: degree {} instead of {degree}",
                    alpha.0,
                    l.degree()
                )));
            }
            TwistRecord::new(alpha, l, &opts.ells)
        })
        .collect::<Result<_>>()?;
    let stats = FamilyStats::from_records(p, n, d, degree, records);
    stats.check()?;
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageRankReport {
    pub twists: usize,
    pub average_rank: String,
    pub average_rank_value: f64,
    /// Average of `(1 - eps)/2`.
    pub average_forced: String,
    pub sum_beta: u64,
    pub deviation_from_half: f64,
}

pub fn average_rank_report(stats: &FamilyStats) -> AverageRankReport {
    let count = stats.records.len() as u64;
    let ranks: u64 = stats.records.iter().map(|r| r.rank as u64).sum();
    let forced: u64 = stats.records.iter().map(|r| u64::from(r.eps == -1)).sum();
    let beta: u64 = stats.records.iter().map(|r| r.beta as u64).sum();
    let avg = Ratio::new(ranks, count.max(1));
    AverageRankReport {
        twists: stats.records.len(),
        average_rank: ratio_string(avg),
        average_rank_value: ratio_f64(avg),
        average_forced: ratio_string(Ratio::new(forced, count.max(1))),
        sum_beta: beta,
        deviation_from_half: (ratio_f64(avg) - 0.5).abs(),
    }
}

pub const CHEBOTAREV_CAVEAT: &str = "full monodromy, and hence the density prediction, is only \
guaranteed for d >= max(146, 2|S|); at this degree the comparison is descriptive";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebotarevReport {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    #[serde(rename = "N")]
    pub degree: usize,
    pub ell: u64,
    pub twists: usize,
    pub empirical_count: u64,
    pub empirical_frequency: String,
    pub empirical_value: f64,
    pub census_order: u64,
    pub census_ev: u64,
    pub predicted_density: String,
    pub predicted_value: f64,
    pub caveat: String,
}

pub fn chebotarev_compare(stats: &FamilyStats, census: &OrthoCensus, ell: u64) -> Result<ChebotarevReport> {
    if stats.degree != census.n {
        return Err(Error::DegreeMismatch { stats: stats.degree, census: census.n });
    }
    if census.ell != ell {
        return Err(Error::InvalidArgument(format!("census is over F_{}, not F_{ell}", census.ell)));
    }
    let twists = stats.records.len();
    let mut count = 0u64;
    for r in &stats.records {
        let m = r.mod_ell.get(&ell).ok_or_else(|| {
            Error::InvalidArgument(format!("scan carries no mod-{ell} data"))
        })?;
        count += u64::from(m.stratum != Stratum::None);
    }
    let emp = Ratio::new(count, (twists as u64).max(1));
    let density = ev_density(census);
    Ok(ChebotarevReport {
        p: stats.p,
        n: stats.n,
        d: stats.d,
        degree: stats.degree,
        ell,
        twists,
        empirical_count: count,
        empirical_frequency: ratio_string(emp),
        empirical_value: ratio_f64(emp),
        census_order: census.order,
        census_ev: census.ev.total,
        predicted_density: ratio_string(density.ratio()),
        predicted_value: density.value,
        caveat: CHEBOTAREV_CAVEAT.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn l(q: u64, v: &[i64], eps: i8) -> LPolynomial {
        LPolynomial::from_coefficients(q, v.iter().map(|&x| BigInt::from(x)).collect(), eps).unwrap()
    }

    #[test]
    fn extra_vanishing_examples() {
        assert!(!has_extra_vanishing(0, 1).unwrap());
        assert!(!has_extra_vanishing(1, -1).unwrap());
        assert!(has_extra_vanishing(2, 1).unwrap());
        assert!(matches!(has_extra_vanishing(1, 1), Err(Error::ParityViolation { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(analytic_rank(&l(5, &[1], 1)), 0);
        assert_eq!(analytic_rank(&l(5, &[1, -10, 25], 1)), 2);
        assert_eq!(analytic_rank(&l(5, &[1, 0, -25], -1)), 1);
    }

    #[test]
    fn parameter_sets() {
        let u = parameter_set(5, 2, 1).unwrap();
        assert_eq!(u, vec![Elem(0), Elem(1)]);
        assert_eq!(parameter_set(5, 2, 2).unwrap().len(), 22);
        assert_eq!(parameter_set(7, 2, 1).unwrap().len(), 4);
    }

    #[test]
    fn small_scan() {
        let stats = scan_family(5, 2, 1, &ScanOptions { ells: vec![3], ..Default::default() }).unwrap();
        assert_eq!(stats.u_size, 2);
        assert_eq!(stats.rank_histogram.values().sum::<u64>(), 2);
        assert_eq!(stats.predicted_c_family, "1/10");
        assert_eq!(stats.predicted_c_orthogonal, "1/25");
        for r in &stats.records {
            assert_eq!(r.rank % 2, usize::from(r.eps == -1));
        }
    }

    #[test]
    fn invalid_degree_and_budget() {
        assert!(matches!(scan_family(5, 4, 1, &ScanOptions::default()), Err(Error::InvalidArgument(_))));
        let tight = ScanOptions { budget: 10.0, ..Default::default() };
        assert!(matches!(scan_family(5, 2, 1, &tight), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn average_report_examples() {
        let mk = |v: &[i64], e| TwistRecord::new(Elem(0), l(5, v, e), &[]).unwrap();
        let s = FamilyStats::from_records(5, 1, 2, 2, vec![mk(&[1, 0, 25], 1), mk(&[1, 2, 25], 1)]);
        let r = average_rank_report(&s);
        assert_eq!((r.average_rank.as_str(), r.sum_beta), ("0", 0));
        let s = FamilyStats::from_records(5, 1, 2, 2, vec![mk(&[1, 0, 25], 1), mk(&[1, 0, -25], -1)]);
        let r = average_rank_report(&s);
        assert_eq!((r.average_rank.as_str(), r.sum_beta), ("1/2", 0));
        assert_eq!(r.deviation_from_half, 0.0);
        let s = FamilyStats::from_records(5, 1, 2, 2, vec![mk(&[1, -10, 25], 1)]);
        assert_eq!(average_rank_report(&s).sum_beta, 2);
    }

    #[test]
    fn chebotarev_on_empty_family() {
        let census = crate::ortho::enumerate_group(2, 3, None, false).unwrap();
        let s = FamilyStats::from_records(5, 1, 1, 2, vec![]);
        let rep = chebotarev_compare(&s, &census, 3).unwrap();
        assert_eq!(rep.empirical_frequency, "0");
        assert_eq!(rep.predicted_density, ratio_string(ev_density(&census).ratio()));
        let s4 = FamilyStats::from_records(5, 1, 2, 4, vec![]);
        assert!(matches!(chebotarev_compare(&s4, &census, 3), Err(Error::DegreeMismatch { .. })));
    }
}
