//! Elliptic fibrations `y^2 = x^3 + a(t)x^2 + b(t)x + c(t)` over `F_q(t)` and
//! their quadratic twists by `g(t)`.
//!
//! The twisted curve `g y^2 = cubic` is handled through the integral model
//! `y^2 = x^3 + g a x^2 + g^2 b x + g^3 c`, whose invariants are
//! `(g^2 c4, g^3 c6, g^6 disc)`. Every place of `P^1` is classified from a
//! minimal short model `y^2 = x^3 - 27 c4 x - 54 c6` (valid since `p >= 5`).
//! The place at infinity is read off through `t = 1/u`: a model of weight `k`
//! has `v_inf(c4) = 4k - deg c4`, and so on.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::galois::{Elem, Embedding, Field, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// A monic irreducible polynomial over the constant field.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    fn canonical_cmp(&self, other: &Place) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Finite(p) => p.serialize(s),
            Place::Infinity => s.serialize_str("INFINITY"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reduction {
    Good,
    #[serde(rename = "SPLIT_MULT")]
    SplitMultiplicative,
    #[serde(rename = "NONSPLIT_MULT")]
    NonsplitMultiplicative,
    Additive,
}

impl Reduction {
    pub fn conductor_exponent(self) -> u8 {
        match self {
            Reduction::Good => 0,
            Reduction::SplitMultiplicative | Reduction::NonsplitMultiplicative => 1,
            Reduction::Additive => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceReport {
    pub place: Place,
    pub reduction: Reduction,
    pub exponent: u8,
    pub degree: usize,
    /// Additive with `v(j) < 0`: the fiber becomes multiplicative after a
    /// quadratic base change (Kodaira type `I_n^*`).
    pub potentially_multiplicative: bool,
}

/// Local data of a model minimal at one place.
#[derive(Clone, Debug)]
enum LocalModel {
    Finite { pi: Poly, c4: Poly, c6: Poly },
    Infinity { c4: Elem, c6: Elem },
}

#[derive(Clone, Debug)]
struct LocalData {
    report: PlaceReport,
    model: LocalModel,
}

/// A base fibration together with a squarefree (or constant) twisting polynomial.
#[derive(Clone, Debug)]
pub struct TwistFamily {
    field: Arc<Field>,
    a: Poly,
    b: Poly,
    c: Poly,
    g: Poly,
    c4: Poly,
    c6: Poly,
    disc: Poly,
    locals: Vec<LocalData>,
}

/// Serialized family description: `{p, a, b, c, g}` with coefficient arrays
/// low degree first. An optional `n` puts the family over `F_{p^n}`, in which
/// case coefficients are element encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub p: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub n: u32,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    #[serde(default = "unit_poly")]
    pub g: Vec<i64>,
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

fn unit_poly() -> Vec<i64> {
    vec![1]
}

/// Invariants `(c4, c6, disc)` of `y^2 = x^3 + a x^2 + b x + c`.
pub fn invariants(a: &Poly, b: &Poly, c: &Poly) -> (Poly, Poly, Poly) {
    let f = a.field();
    let k = |v: i64| Poly::from_ints(f, &[v]);
    // b2 = 4a, b4 = 2b, b6 = 4c, b8 = 4ac - b^2
    let b2 = a.mul(&k(4));
    let b4 = b.mul(&k(2));
    let b6 = c.mul(&k(4));
    let b8 = a.mul(c).mul(&k(4)).sub(&b.mul(b));
    let c4 = b2.mul(&b2).sub(&b4.mul(&k(24)));
    let c6 = b2
        .mul(&b2)
        .mul(&b2)
        .neg()
        .add(&b2.mul(&b4).mul(&k(36)))
        .sub(&b6.mul(&k(216)));
    let disc = b2
        .mul(&b2)
        .mul(&b8)
        .neg()
        .sub(&b4.mul(&b4).mul(&b4).mul(&k(8)))
        .sub(&b6.mul(&b6).mul(&k(27)))
        .add(&b2.mul(&b4).mul(&b6).mul(&k(9)));
    (c4, c6, disc)
}

/// `f_d = t^d - d t - 1`.
pub fn fd_poly(field: &Arc<Field>, d: usize) -> Poly {
    let mut c = vec![0i64; d + 1];
    c[d] = 1;
    c[1] -= d as i64;
    c[0] -= 1;
    Poly::from_ints(field, &c)
}

/// Coefficients `(a, b, c)` of the Legendre-type curve `y^2 = x(x+1)(x-t)`.
pub fn legendre_coefficients(field: &Arc<Field>) -> (Poly, Poly, Poly) {
    (
        Poly::from_ints(field, &[1, -1]),
        Poly::from_ints(field, &[0, -1]),
        Poly::zero(field),
    )
}

fn quadratic_character_of_norm(pi: &Poly, u: &Poly) -> i8 {
    let f = pi.field();
    let norm = pi.resultant(u).expect("same field");
    f.quadratic_character(norm)
}

impl TwistFamily {
    pub fn new(a: Poly, b: Poly, c: Poly, g: Poly) -> Result<TwistFamily> {
        a.same_field(&b)?;
        a.same_field(&c)?;
        a.same_field(&g)?;
        let field = a.field().clone();
        if g.is_zero() {
            return Err(Error::InvalidArgument("twisting polynomial is zero".into()));
        }
        if !g.is_constant() && !g.is_squarefree()? {
            return Err(Error::NotSquarefree);
        }
        let (c4, c6, disc) = invariants(&a, &b, &c);
        if disc.is_zero() {
            return Err(Error::SingularFiber);
        }
        // j = c4^3 / disc is constant iff c4^3 is a scalar multiple of disc
        let c4_cubed = c4.mul(&c4).mul(&c4);
        if c4.is_zero() || c4_cubed.monic() == disc.monic() {
            return Err(Error::ConstantJInvariant);
        }
        let mut fam = TwistFamily {
            field,
            a,
            b,
            c,
            g,
            c4,
            c6,
            disc,
            locals: Vec::new(),
        };
        fam.locals = fam.classify_all()?;
        Ok(fam)
    }

    /// The Legendre-type curve twisted by `g`.
    pub fn legendre(field: &Arc<Field>, g: Poly) -> Result<TwistFamily> {
        let (a, b, c) = legendre_coefficients(field);
        TwistFamily::new(a, b, c, g)
    }

    /// `E_{d,alpha}: (f_d(t) - alpha) y^2 = x(x+1)(x-t)` over `field`.
    pub fn twisted_legendre(field: &Arc<Field>, d: usize, alpha: Elem) -> Result<TwistFamily> {
        let g = fd_poly(field, d).sub(&Poly::constant(field, alpha));
        TwistFamily::legendre(field, g)
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<TwistFamily> {
        let field = Field::new(spec.p, spec.n)?;
        let conv = |v: &[i64]| -> Result<Poly> {
            if spec.n == 1 {
                Ok(Poly::from_ints(&field, v))
            } else {
                let enc: Vec<u64> = v
                    .iter()
                    .map(|&x| u64::try_from(x).map_err(|_| Error::InvalidArgument("negative element encoding".into())))
                    .collect::<Result<_>>()?;
                Poly::from_encodings(&field, &enc)
            }
        };
        TwistFamily::new(conv(&spec.a)?, conv(&spec.b)?, conv(&spec.c)?, conv(&spec.g)?)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn base_coefficients(&self) -> (&Poly, &Poly, &Poly) {
        (&self.a, &self.b, &self.c)
    }

    pub fn twist(&self) -> &Poly {
        &self.g
    }

    /// Discriminant of the untwisted base model.
    pub fn discriminant(&self) -> &Poly {
        &self.disc
    }

    pub fn c4(&self) -> &Poly {
        &self.c4
    }

    pub fn c6(&self) -> &Poly {
        &self.c6
    }

    /// Invariants of the twisted integral model.
    fn twisted_invariants(&self) -> (Poly, Poly, Poly) {
        let g2 = self.g.mul(&self.g);
        let g3 = g2.mul(&self.g);
        let g6 = g3.mul(&g3);
        (g2.mul(&self.c4), g3.mul(&self.c6), g6.mul(&self.disc))
    }

    fn classify_all(&self) -> Result<Vec<LocalData>> {
        let (c4, c6, disc) = self.twisted_invariants();
        let mut out = Vec::new();
        for (pi, _) in self.g.mul(&self.disc).factor()? {
            out.push(classify_finite(&pi, &c4, &c6, &disc));
        }
        out.push(classify_infinity(&c4, &c6, &disc));
        out.sort_by(|x, y| {
            x.report
                .place
                .canonical_cmp(&y.report.place)
        });
        Ok(out)
    }

    /// Reduction type and conductor exponent at `place`.
    pub fn classify_place(&self, place: &Place) -> Result<PlaceReport> {
        if let Place::Finite(pi) = place {
            pi.same_field(&self.g)?;
            if !pi.is_monic() || !pi.is_irreducible() {
                return Err(Error::ReduciblePlace);
            }
        }
        if let Some(l) = self.locals.iter().find(|l| l.report.place == *place) {
            return Ok(l.report.clone());
        }
        Ok(PlaceReport {
            place: place.clone(),
            reduction: Reduction::Good,
            exponent: 0,
            degree: place.degree(),
            potentially_multiplicative: false,
        })
    }

    /// Places of bad reduction: by degree, then coefficients, infinity last.
    pub fn bad_set(&self) -> Vec<PlaceReport> {
        self.locals
            .iter()
            .filter(|l| l.report.exponent > 0)
            .map(|l| l.report.clone())
            .collect()
    }

    /// `(c4, c6)` of a short model minimal at `place`. At infinity these are
    /// constants, the values at `u = 1/t = 0`.
    pub fn local_short_model(&self, place: &Place) -> (Poly, Poly) {
        for l in &self.locals {
            if l.report.place == *place {
                return match &l.model {
                    LocalModel::Finite { c4, c6, .. } => (c4.clone(), c6.clone()),
                    LocalModel::Infinity { c4, c6 } => {
                        (Poly::constant(&self.field, *c4), Poly::constant(&self.field, *c6))
                    }
                };
            }
        }
        let (c4, c6, _) = self.twisted_invariants();
        (c4, c6)
    }

    /// Finite places of bad reduction of the base curve (ignoring the twist).
    pub fn base_bad_places(&self) -> Result<Vec<Poly>> {
        let base = TwistFamily::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            Poly::one(&self.field),
        )?;
        Ok(base
            .bad_set()
            .into_iter()
            .filter_map(|r| match r.place {
                Place::Finite(p) => Some(p),
                Place::Infinity => None,
            })
            .collect())
    }

    /// `sum over places of exponent * degree`, infinity included.
    pub fn conductor_degree(&self) -> usize {
        self.locals
            .iter()
            .map(|l| l.report.exponent as usize * l.report.degree)
            .sum()
    }

    /// Degree of the L-polynomial over `P^1`: conductor degree minus 4.
    pub fn l_degree(&self) -> Result<usize> {
        let c = self.conductor_degree() as i64;
        usize::try_from(c - 4).map_err(|_| Error::NegativeDegree(c - 4, c))
    }

    /// The same family with coefficients moved into an extension field.
    pub fn base_change(&self, target: &Arc<Field>) -> Result<TwistFamily> {
        if **target == *self.field {
            return Ok(self.clone());
        }
        let e = Embedding::new(&self.field, target)?;
        TwistFamily::new(
            e.apply_poly(&self.a),
            e.apply_poly(&self.b),
            e.apply_poly(&self.c),
            e.apply_poly(&self.g),
        )
    }

    /// Fiber evaluator over an extension `field` of the constant field.
    pub fn fibers(&self, field: &Arc<Field>, kernel: Kernel) -> Result<FiberCounter> {
        FiberCounter::new(self, field, kernel)
    }

    /// Frobenius trace of the fiber at `t0` over `field`.
    pub fn fiber_a_value(&self, field: &Arc<Field>, t0: FiberPoint) -> Result<i64> {
        Ok(self.fibers(field, Kernel::CharacterSum)?.a_value(t0))
    }
}

fn classify_finite(pi: &Poly, c4: &Poly, c6: &Poly, disc: &Poly) -> LocalData {
    let (v4, u4) = c4.valuation(pi);
    let (v6, u6) = c6.valuation(pi);
    let (vd, _) = disc.valuation(pi);
    let k = (v4 / 4).min(if c6.is_zero() { usize::MAX } else { v6 / 6 });
    let min_c4 = u4.mul(&pi.pow((v4 - 4 * k) as u64));
    let min_c6 = if c6.is_zero() {
        u6
    } else {
        u6.mul(&pi.pow((v6 - 6 * k) as u64))
    };
    let v4 = v4 - 4 * k;
    let vd = vd - 12 * k;
    let reduction = if vd == 0 {
        Reduction::Good
    } else if v4 == 0 {
        if quadratic_character_of_norm(pi, &min_c6.neg()) == 1 {
            Reduction::SplitMultiplicative
        } else {
            Reduction::NonsplitMultiplicative
        }
    } else {
        Reduction::Additive
    };
    let report = PlaceReport {
        place: Place::Finite(pi.clone()),
        reduction,
        exponent: reduction.conductor_exponent(),
        degree: pi.degree().unwrap(),
        potentially_multiplicative: reduction == Reduction::Additive && 3 * v4 < vd,
    };
    LocalData {
        report,
        model: LocalModel::Finite {
            pi: pi.clone(),
            c4: min_c4,
            c6: min_c6,
        },
    }
}

fn classify_infinity(c4: &Poly, c6: &Poly, disc: &Poly) -> LocalData {
    let d4 = c4.degree().unwrap();
    let dd = disc.degree().unwrap();
    let mut k = d4.div_ceil(4);
    if let Some(d6) = c6.degree() {
        k = k.max(d6.div_ceil(6));
    }
    let v4 = 4 * k - d4;
    let vd = 12 * k - dd;
    let at_zero_c4 = c4.coeff(4 * k);
    let at_zero_c6 = c6.coeff(6 * k);
    let field = c4.field();
    let reduction = if vd == 0 {
        Reduction::Good
    } else if v4 == 0 {
        if field.quadratic_character(field.neg(at_zero_c6)) == 1 {
            Reduction::SplitMultiplicative
        } else {
            Reduction::NonsplitMultiplicative
        }
    } else {
        Reduction::Additive
    };
    LocalData {
        report: PlaceReport {
            place: Place::Infinity,
            reduction,
            exponent: reduction.conductor_exponent(),
            degree: 1,
            potentially_multiplicative: reduction == Reduction::Additive && 3 * v4 < vd,
        },
        model: LocalModel::Infinity {
            c4: at_zero_c4,
            c6: at_zero_c6,
        },
    }
}

/// A point of `P^1` over some extension field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberPoint {
    Finite(Elem),
    Infinity,
}

/// How good fibers are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Kernel {
    /// `a = -chi(g(t0)) sum_x chi(cubic(x))`.
    #[default]
    CharacterSum,
    /// Naive enumeration of `(x, y)` on the reduced minimal model.
    Direct,
}

#[derive(Clone, Debug)]
enum LocalFiber {
    /// Short minimal model coefficients, polynomial in `t`.
    Finite {
        pi: Poly,
        c4: Poly,
        c6: Poly,
        reduction: Reduction,
    },
    Infinity {
        c4: Elem,
        c6: Elem,
        reduction: Reduction,
    },
}

/// Fields up to this size get a shared table of untwisted sums.
pub const BASE_TABLE_LIMIT: u64 = 1 << 20;

/// Evaluates fiber traces of a family over one extension of its constant field.
pub struct FiberCounter {
    field: Arc<Field>,
    a: Poly,
    b: Poly,
    c: Poly,
    g: Poly,
    bad_locus: Poly,
    locals: Vec<LocalFiber>,
    kernel: Kernel,
    /// `sum_x chi(x^3 + a(t)x^2 + b(t)x + c(t))` indexed by `t`, shared by all twists.
    base_sums: Option<Arc<Vec<i64>>>,
}

type BaseKey = (u32, u32, Vec<u32>, [Vec<u32>; 3]);

const BASE_CACHE_LIMIT: usize = 16;

fn base_cache() -> &'static Mutex<HashMap<BaseKey, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<BaseKey, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Drops the shared character-sum tables.
pub fn clear_sum_cache() {
    base_cache().lock().unwrap().clear();
}

/// Untwisted character sums at every `t` of `field`, computed once per
/// Frobenius orbit over the field of definition of the coefficients.
fn base_sums(field: &Arc<Field>, a: &Poly, b: &Poly, c: &Poly) -> Arc<Vec<i64>> {
    let key: BaseKey = (
        field.characteristic(),
        field.degree(),
        field.modulus().to_vec(),
        [a.encodings(), b.encodings(), c.encodings()],
    );
    if let Some(v) = base_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let f = &**field;
    // smallest r with every coefficient fixed by x -> x^{p^r}
    let coeffs: Vec<Elem> = [a, b, c].iter().flat_map(|p| p.coeffs().to_vec()).collect();
    let frob_r = |x: Elem, r: u32| (0..r).fold(x, |y, _| f.frobenius(y));
    let n = f.degree();
    let r = (1..=n)
        .filter(|r| n.is_multiple_of(*r))
        .find(|&r| coeffs.iter().all(|&x| frob_r(x, r) == x))
        .unwrap_or(n);
    let size = f.size() as u32;
    let reps: Vec<(u32, i64)> = (0..size)
        .into_par_iter()
        .with_min_len(256)
        .filter_map(|t| {
            let t = Elem(t);
            let mut y = frob_r(t, r);
            while y != t {
                if y < t {
                    return None;
                }
                y = frob_r(y, r);
            }
            Some((t.0, f.cubic_character_sum(a.eval(t), b.eval(t), c.eval(t))))
        })
        .collect();
    let mut sums = vec![0i64; size as usize];
    for (t, v) in reps {
        let mut y = Elem(t);
        loop {
            sums[y.0 as usize] = v;
            y = frob_r(y, r);
            if y.0 == t {
                break;
            }
        }
    }
    let sums = Arc::new(sums);
    let mut cache = base_cache().lock().unwrap();
    if cache.len() >= BASE_CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, sums.clone());
    sums
}

impl FiberCounter {
    fn new(fam: &TwistFamily, field: &Arc<Field>, kernel: Kernel) -> Result<FiberCounter> {
        let e = Embedding::new(&fam.field, field)?;
        let locals = fam
            .locals
            .iter()
            .map(|l| match &l.model {
                LocalModel::Finite { pi, c4, c6 } => LocalFiber::Finite {
                    pi: e.apply_poly(pi),
                    c4: e.apply_poly(c4),
                    c6: e.apply_poly(c6),
                    reduction: l.report.reduction,
                },
                LocalModel::Infinity { c4, c6 } => LocalFiber::Infinity {
                    c4: e.apply(*c4),
                    c6: e.apply(*c6),
                    reduction: l.report.reduction,
                },
            })
            .collect();
        let (a, b, c) = (e.apply_poly(&fam.a), e.apply_poly(&fam.b), e.apply_poly(&fam.c));
        let base_sums = (kernel == Kernel::CharacterSum && field.size() <= BASE_TABLE_LIMIT)
            .then(|| base_sums(field, &a, &b, &c));
        Ok(FiberCounter {
            field: field.clone(),
            a,
            b,
            c,
            g: e.apply_poly(&fam.g),
            bad_locus: e.apply_poly(&fam.g.mul(&fam.disc)),
            locals,
            kernel,
            base_sums,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn a_value(&self, t0: FiberPoint) -> i64 {
        let f = &*self.field;
        match t0 {
            FiberPoint::Finite(t) if !self.bad_locus.eval(t).is_zero() => {
                let gt = self.g.eval(t);
                let abc = || (self.a.eval(t), self.b.eval(t), self.c.eval(t));
                match self.kernel {
                    Kernel::CharacterSum => {
                        let sum = match &self.base_sums {
                            Some(v) => v[t.0 as usize],
                            None => {
                                let (at, bt, ct) = abc();
                                f.cubic_character_sum(at, bt, ct)
                            }
                        };
                        -(f.quadratic_character(gt) as i64) * sum
                    }
                    Kernel::Direct => {
                        let (at, bt, ct) = abc();
                        let g2 = f.mul(gt, gt);
                        let coeffs = [f.mul(f.mul(g2, gt), ct), f.mul(g2, bt), f.mul(gt, at)];
                        f.size() as i64 - count_affine(f, coeffs)
                    }
                }
            }
            FiberPoint::Finite(t) => {
                let local = self
                    .locals
                    .iter()
                    .find(|l| matches!(l, LocalFiber::Finite { pi, .. } if pi.eval(t).is_zero()))
                    .expect("every zero of g * disc lies on a candidate place");
                let LocalFiber::Finite { c4, c6, reduction, .. } = local else {
                    unreachable!()
                };
                self.local_a_value(c4.eval(t), c6.eval(t), *reduction)
            }
            FiberPoint::Infinity => {
                let local = self
                    .locals
                    .iter()
                    .find(|l| matches!(l, LocalFiber::Infinity { .. }))
                    .expect("infinity is always classified");
                let LocalFiber::Infinity { c4, c6, reduction } = local else {
                    unreachable!()
                };
                self.local_a_value(*c4, *c6, *reduction)
            }
        }
    }

    fn local_a_value(&self, c4: Elem, c6: Elem, reduction: Reduction) -> i64 {
        let f = &*self.field;
        let a4 = f.mul(f.from_int(-27), c4);
        let a6 = f.mul(f.from_int(-54), c6);
        if self.kernel == Kernel::Direct {
            return f.size() as i64 - count_affine(f, [a6, a4, Elem::ZERO]);
        }
        match reduction {
            Reduction::Good => -f.cubic_character_sum(Elem::ZERO, a4, a6),
            Reduction::SplitMultiplicative | Reduction::NonsplitMultiplicative => {
                f.quadratic_character(f.neg(c6)) as i64
            }
            Reduction::Additive => 0,
        }
    }

    /// `sum of a_t over every point of P^1(field)`, parallel over fibers.
    pub fn trace_sum(&self) -> i64 {
        let size = self.field.size() as u32;
        let finite: i64 = (0..size)
            .into_par_iter()
            .with_min_len(64)
            .map(|t| self.a_value(FiberPoint::Finite(Elem(t))))
            .sum();
        finite + self.a_value(FiberPoint::Infinity)
    }
}

/// Number of affine solutions of `y^2 = x^3 + c[2] x^2 + c[1] x + c[0]`.
fn count_affine(f: &Field, c: [Elem; 3]) -> i64 {
    let mut n = 0i64;
    for x in f.elements() {
        let rhs = f.add(f.mul(f.add(f.mul(f.add(x, c[2]), x), c[1]), x), c[0]);
        for y in f.elements() {
            if f.mul(y, y) == rhs {
                n += 1;
            }
        }
    }
    n
}
