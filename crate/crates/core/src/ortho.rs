//! Exhaustive censuses of finite orthogonal groups `O(N, F_l)`.
//!
//! Matrices are enumerated column by column: a partial matrix survives only
//! while its columns satisfy `a_i^T G a_j = G_ij`. Every matrix with
//! `A^T G A = G` is reached, every other matrix is rejected at the first
//! failing column, so the count equals that of testing all `l^{N^2}`
//! matrices.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modl::{self, ModPoly};

pub type Matrix = Vec<Vec<u64>>;

/// Upper bound on `l^{N^2}` for a census.
pub const WORK_BOUND: f64 = 1e8;

/// A nondegenerate symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Form {
    pub gram: Matrix,
}

impl Form {
    pub fn identity(n: usize) -> Form {
        Form {
            gram: (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    fn check(&self, ell: u64) -> Result<Form> {
        let n = self.dim();
        if self.gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("Gram matrix is not square".into()));
        }
        let g: Matrix = self.gram.iter().map(|r| r.iter().map(|&v| v % ell).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                if g[i][j] != g[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
                }
            }
        }
        if determinant(&g, ell) == 0 {
            return Err(Error::DegenerateForm);
        }
        Ok(Form { gram: g })
    }

    fn pair(&self, x: &[u64], y: &[u64], ell: u64) -> u64 {
        let n = self.dim();
        let mut s = 0u64;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut t = 0u64;
            for j in 0..n {
                t += self.gram[i][j] * y[j];
            }
            s += x[i] * (t % ell);
        }
        s % ell
    }

    /// Whether `A^T G A = G`.
    pub fn preserves(&self, a: &Matrix, ell: u64) -> bool {
        let n = self.dim();
        let cols: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| a[i][j] % ell).collect()).collect();
        (0..n).all(|i| (0..n).all(|j| self.pair(&cols[i], &cols[j], ell) == self.gram[i][j] % ell))
    }
}

/// Determinant mod `ell` by Gaussian elimination.
pub fn determinant(m: &Matrix, ell: u64) -> u64 {
    let n = m.len();
    let mut a: Matrix = m.iter().map(|r| r.iter().map(|&v| v % ell).collect()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = (ell - det) % ell;
        }
        det = det * a[c][c] % ell;
        let inv = modl::inv_mod(a[c][c], ell).unwrap();
        for r in c + 1..n {
            let f = a[r][c] * inv % ell;
            if f == 0 {
                continue;
            }
            for k in c..n {
                a[r][k] = (a[r][k] + ell - f * a[c][k] % ell) % ell;
            }
        }
    }
    det
}

/// `det(1 - TA)` as a polynomial of nominal degree `N`.
pub fn charpoly(a: &Matrix, ell: u64) -> ModPoly {
    let n = a.len();
    let mut e = vec![0u64; n + 1];
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let minor: Matrix = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
        let k = idx.len();
        e[k] = (e[k] + determinant(&minor, ell)) % ell;
    }
    let coeffs = e
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v } else { (ell - v) % ell })
        .collect();
    ModPoly::new(ell, coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stratum {
    #[serde(rename = "NONE")]
    None,
    #[serde(rename = "O_1")]
    O1,
    #[serde(rename = "O_2")]
    O2,
}

impl Stratum {
    pub fn as_str(self) -> &'static str {
        match self {
            Stratum::None => "NONE",
            Stratum::O1 => "O_1",
            Stratum::O2 => "O_2",
        }
    }
}

/// Stratum of an orthogonal element from `P(T) = det(1 - TA)` and `det A`.
/// `N` odd: `O_1` is `det A = -1, P(1) = 0`; `O_2` is `det A = 1, P'(1) = 0`.
/// `N` even: the determinant conditions swap.
pub fn classify_charpoly(p: &ModPoly, det: i64) -> Stratum {
    let n = p.degree();
    let det = modl::reduce(det, p.ell);
    let plus = det == 1;
    let (first, second) = if n % 2 == 1 { (!plus, plus) } else { (plus, !plus) };
    if first && p.value_at_one() == 0 {
        Stratum::O1
    } else if second && p.value_at_one() == 0 && p.derivative_at_one() == 0 {
        Stratum::O2
    } else {
        Stratum::None
    }
}

pub fn classify_extra_vanishing(a: &Matrix, form: &Form, ell: u64) -> Result<Stratum> {
    modl::check_ell(ell)?;
    let form = form.check(ell)?;
    if a.len() != form.dim() || !form.preserves(a, ell) {
        return Err(Error::NotOrthogonal);
    }
    let det = determinant(a, ell);
    Ok(classify_charpoly(&charpoly(a, ell), det as i64))
}

/// `T^N P(1/T) = det(-A) P(T)` for a single matrix.
pub fn charpoly_fe_verify(a: &Matrix, ell: u64) -> bool {
    let n = a.len();
    let det = determinant(a, ell);
    let det_minus = if n.is_multiple_of(2) { det } else { (ell - det) % ell };
    charpoly(a, ell).reciprocal_identity(det_minus as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    /// Coefficients of `det(1 - TA)`, constant term first.
    pub charpoly: Vec<u64>,
    pub display: String,
    pub det: u64,
    pub stratum: Stratum,
    pub count: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvCounts {
    pub total: u64,
    pub det_plus: u64,
    pub det_minus: u64,
    pub o1: u64,
    pub o2: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoCensus {
    #[serde(rename = "N")]
    pub n: usize,
    pub ell: u64,
    pub gram: Matrix,
    pub order: u64,
    pub so_order: u64,
    pub ev: EvCounts,
    /// Elements with `det(-A) = -1`.
    pub forced_checked: u64,
    /// Of those, elements with `P(1) != 0`.
    pub forced_violations: u64,
    /// Elements whose characteristic polynomial breaks the reciprocal identity.
    pub fe_violations: u64,
    pub classes: Vec<ClassCount>,
    /// `|O^ev| / |O|` and `l` times it.
    pub density: EvDensity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Matrix>>,
}

#[derive(Default)]
struct Partial {
    order: u64,
    so: u64,
    ev: EvCounts,
    forced_checked: u64,
    forced_violations: u64,
    fe_violations: u64,
    classes: BTreeMap<(Vec<u64>, u64), (Stratum, u64)>,
    elements: Vec<Matrix>,
}

impl Partial {
    fn record(&mut self, a: Matrix, ell: u64, keep: bool) {
        let n = a.len();
        let p = charpoly(&a, ell);
        let det = determinant(&a, ell);
        let det_minus = if n.is_multiple_of(2) { det } else { (ell - det) % ell };
        self.order += 1;
        if det == 1 {
            self.so += 1;
        }
        if !p.reciprocal_identity(det_minus as i64) {
            self.fe_violations += 1;
        }
        if det_minus == ell - 1 {
            self.forced_checked += 1;
            if p.value_at_one() != 0 {
                self.forced_violations += 1;
            }
        }
        let s = classify_charpoly(&p, det as i64);
        if s != Stratum::None {
            self.ev.total += 1;
            if det == 1 {
                self.ev.det_plus += 1;
            } else {
                self.ev.det_minus += 1;
            }
            match s {
                Stratum::O1 => self.ev.o1 += 1,
                _ => self.ev.o2 += 1,
            }
        }
        self.classes.entry((p.coeffs, det)).or_insert((s, 0)).1 += 1;
        if keep {
            self.elements.push(a);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.order += other.order;
        self.so += other.so;
        self.ev.total += other.ev.total;
        self.ev.det_plus += other.ev.det_plus;
        self.ev.det_minus += other.ev.det_minus;
        self.ev.o1 += other.ev.o1;
        self.ev.o2 += other.ev.o2;
        self.forced_checked += other.forced_checked;
        self.forced_violations += other.forced_violations;
        self.fe_violations += other.fe_violations;
        for (k, (s, c)) in other.classes {
            self.classes.entry(k).or_insert((s, 0)).1 += c;
        }
        self.elements.extend(other.elements);
        self
    }
}

fn vectors(n: usize, ell: u64) -> Vec<Vec<u64>> {
    let total = ell.pow(n as u32);
    (0..total)
        .map(|mut v| {
            (0..n)
                .map(|_| {
                    let d = v % ell;
                    v /= ell;
                    d
                })
                .collect()
        })
        .collect()
}

fn extend(form: &Form, ell: u64, all: &[Vec<u64>], cols: &mut Vec<Vec<u64>>, out: &mut Partial, keep: bool) {
    let n = form.dim();
    let j = cols.len();
    if j == n {
        let a: Matrix = (0..n).map(|i| (0..n).map(|c| cols[c][i]).collect()).collect();
        out.record(a, ell, keep);
        return;
    }
    for v in all {
        if form.pair(v, v, ell) != form.gram[j][j] {
            continue;
        }
        if (0..j).all(|i| form.pair(&cols[i], v, ell) == form.gram[i][j]) {
            cols.push(v.clone());
            extend(form, ell, all, cols, out, keep);
            cols.pop();
        }
    }
}

/// Exhaustive census of `O(N, F_l)` for the given form.
pub fn enumerate_group(n: usize, ell: u64, form: Option<&Form>, keep_elements: bool) -> Result<OrthoCensus> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("N = {n} outside 1..=4")));
    }
    modl::check_ell(ell)?;
    let work = (ell as f64).powi((n * n) as i32);
    if work > WORK_BOUND {
        return Err(Error::BudgetExceeded { estimate: work, budget: WORK_BOUND });
    }
    let form = match form {
        Some(f) if f.dim() != n => {
            return Err(Error::InvalidArgument(format!("form has dimension {}, not {n}", f.dim())))
        }
        Some(f) => f.check(ell)?,
        None => Form::identity(n),
    };
    let all = vectors(n, ell);
    let firsts: Vec<&Vec<u64>> = all.iter().filter(|v| form.pair(v, v, ell) == form.gram[0][0]).collect();
    let parts: Vec<Partial> = firsts
        .par_iter()
        .map(|v| {
            let mut p = Partial::default();
            let mut cols = vec![(*v).clone()];
            extend(&form, ell, &all, &mut cols, &mut p, keep_elements);
            p
        })
        .collect();
    let total = parts.into_iter().fold(Partial::default(), Partial::merge);
    let classes = total
        .classes
        .into_iter()
        .map(|((coeffs, det), (stratum, count))| {
            let p = ModPoly::new(ell, coeffs);
            ClassCount {
                display: p.to_string(),
                charpoly: p.coeffs,
                det,
                stratum,
                count,
            }
        })
        .collect();
    let density = density_of(total.ev.total, total.order, ell);
    Ok(OrthoCensus {
        n,
        ell,
        gram: form.gram,
        order: total.order,
        so_order: total.so,
        ev: total.ev,
        forced_checked: total.forced_checked,
        forced_violations: total.forced_violations,
        fe_violations: total.fe_violations,
        classes,
        density,
        elements: keep_elements.then_some(total.elements),
    })
}

/// Exact `|O^ev| / |O|` and `l` times it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvDensity {
    pub numerator: String,
    pub denominator: String,
    pub scaled_numerator: String,
    pub scaled_denominator: String,
    pub value: f64,
    pub scaled_value: f64,
}

impl EvDensity {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.numerator.parse().unwrap(), self.denominator.parse().unwrap())
    }

    pub fn scaled(&self) -> Ratio<u64> {
        Ratio::new(
            self.scaled_numerator.parse().unwrap(),
            self.scaled_denominator.parse().unwrap(),
        )
    }
}

pub fn ev_density(census: &OrthoCensus) -> EvDensity {
    density_of(census.ev.total, census.order, census.ell)
}

fn density_of(ev: u64, order: u64, ell: u64) -> EvDensity {
    let d = Ratio::new(ev, order);
    let s = d * ell;
    EvDensity {
        numerator: d.numer().to_string(),
        denominator: d.denom().to_string(),
        scaled_numerator: s.numer().to_string(),
        scaled_denominator: s.denom().to_string(),
        value: *d.numer() as f64 / *d.denom() as f64,
        scaled_value: *s.numer() as f64 / *s.denom() as f64,
    }
}

/// Characteristic polynomial frequency table.
pub fn class_counts(census: &OrthoCensus) -> BTreeMap<Vec<u64>, u64> {
    let mut out = BTreeMap::new();
    for c in &census.classes {
        *out.entry(c.charpoly.clone()).or_insert(0) += c.count;
    }
    out
}

/// Checks the reciprocal identity on every stored element, or falls back to
/// the violation counter of a streaming census.
pub fn census_fe_verify(census: &OrthoCensus) -> bool {
    match &census.elements {
        Some(els) => els.iter().all(|a| charpoly_fe_verify(a, census.ell)),
        None => census.fe_violations == 0,
    }
}
