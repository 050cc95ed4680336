use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Fields up to this size get log/antilog/Zech tables.
pub const TABLE_LIMIT: u64 = 1 << 22;

const MAX_DEGREE: usize = 24;

/// An element of some `F_{p^n}`, stored as the base-`p` integer whose digits
/// are its coordinates in the power basis `1, x, ..., x^{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sentinel used in the log domain for the zero element.
pub(crate) const LOG_ZERO: u32 = u32::MAX;

pub(crate) struct Tables {
    /// `log[e]` for nonzero `e`; `LOG_ZERO` at index 0.
    pub log: Vec<u32>,
    pub exp: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, `LOG_ZERO` when `1 + g^k = 0`.
    pub zech: Vec<u32>,
    pub order: u32,
}

impl Tables {
    #[inline]
    pub fn log_add(&self, u: u32, v: u32) -> u32 {
        if u == LOG_ZERO {
            return v;
        }
        if v == LOG_ZERO {
            return u;
        }
        let d = if v >= u { v - u } else { v + self.order - u };
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            let s = u as u64 + z as u64;
            (s % self.order as u64) as u32
        }
    }

    #[inline]
    pub fn log_mul(&self, u: u32, v: u32) -> u32 {
        if u == LOG_ZERO || v == LOG_ZERO {
            LOG_ZERO
        } else {
            let s = u + v;
            if s >= self.order {
                s - self.order
            } else {
                s
            }
        }
    }
}

/// The finite field `F_{p^n}` with an explicit monic irreducible modulus.
pub struct Field {
    p: u32,
    n: u32,
    size: u64,
    modulus: Vec<u32>,
    tables: OnceLock<Option<Tables>>,
}

/// Serialized form: `{p, n, modulus}` with the modulus low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

type FieldCache = Mutex<HashMap<(u32, u32), Arc<Field>>>;

fn field_cache() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds `F_{p^n}` with the smallest monic irreducible modulus under the
    /// base-`p` encoding of its non-leading coefficients. Results are cached.
    pub fn new(p: u32, n: u32) -> Result<Arc<Field>> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p < 5 {
            return Err(Error::UnsupportedCharacteristic(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let size = (p as u64)
            .checked_pow(n)
            .filter(|&s| s <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{n} does not fit in 32 bits")))?;
        if n as usize > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("extension degree {n} too large")));
        }
        if let Some(f) = field_cache().lock().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, n)?
        };
        let field = Arc::new(Field {
            p,
            n,
            size,
            modulus,
            tables: OnceLock::new(),
        });
        field_cache()
            .lock()
            .unwrap()
            .entry((p, n))
            .or_insert_with(|| field.clone());
        Ok(field)
    }

    /// Builds `F_{p^n}` from a caller-supplied modulus, checking irreducibility.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Arc<Field>> {
        let n = modulus.len().saturating_sub(1) as u32;
        let default = Field::new(p, n)?;
        if default.modulus == modulus {
            return Ok(default);
        }
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument("modulus must be monic with reduced coefficients".into()));
        }
        let prime = Field::new(p, 1)?;
        let poly = Poly::new(&prime, modulus.iter().map(|&c| Elem(c)).collect());
        if !poly.is_irreducible() {
            return Err(Error::InvalidArgument("modulus is reducible".into()));
        }
        Ok(Arc::new(Field {
            p,
            n,
            size: default.size,
            modulus: modulus.to_vec(),
            tables: OnceLock::new(),
        }))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Arc<Field>> {
        if d.modulus.len() != d.n as usize + 1 {
            return Err(Error::InvalidArgument("modulus length must be n + 1".into()));
        }
        Field::with_modulus(d.p, &d.modulus)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn prime_field(&self) -> Arc<Field> {
        Field::new(self.p, 1).expect("prime subfield of a valid field")
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size as u32).map(Elem)
    }

    pub fn contains(&self, e: Elem) -> bool {
        (e.0 as u64) < self.size
    }

    /// Checked conversion from the integer encoding.
    pub fn elem(&self, v: u64) -> Result<Elem> {
        if v < self.size {
            Ok(Elem(v as u32))
        } else {
            Err(Error::InvalidArgument(format!("{v} is not an element of a field with {} elements", self.size)))
        }
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let mut v = 0u64;
        for &d in digits.iter().take(self.n as usize).rev() {
            v = v * self.p as u64 + (d % self.p) as u64;
        }
        Elem(v as u32)
    }

    pub fn digits(&self, e: Elem) -> Vec<u32> {
        let mut out = vec![0; self.n as usize];
        let mut v = e.0;
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn digit_array(&self, e: Elem, out: &mut [u32; MAX_DEGREE]) {
        let mut v = e.0;
        for d in out.iter_mut().take(self.n as usize) {
            *d = v % self.p;
            v /= self.p;
        }
    }

    fn pack(&self, digits: &[u32]) -> Elem {
        let mut v = 0u32;
        for &d in digits[..self.n as usize].iter().rev() {
            v = v * self.p + d;
        }
        Elem(v)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        if self.n == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        let mut place = 1u32;
        for i in 0..self.n {
            let s = x % p + y % p;
            let s = if s >= p { s - p } else { s };
            out += s * place;
            x /= p;
            y /= p;
            if i + 1 < self.n {
                place *= p;
            }
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p;
        if self.n == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut d = [0u32; MAX_DEGREE];
        self.digit_array(a, &mut d);
        for x in d.iter_mut().take(self.n as usize) {
            *x = (p - *x) % p;
        }
        self.pack(&d)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = self.tables() {
            let l = t.log_mul(t.log[a.0 as usize], t.log[b.0 as usize]);
            return Elem(t.exp[l as usize]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let n = self.n as usize;
        let p = self.p as u64;
        let mut x = [0u32; MAX_DEGREE];
        let mut y = [0u32; MAX_DEGREE];
        self.digit_array(a, &mut x);
        self.digit_array(b, &mut y);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let m = self.modulus[i] as u64;
                prod[k - n + i] = (prod[k - n + i] + (p - m) * c) % p;
            }
        }
        let digits: Vec<u32> = prod[..n].iter().map(|&d| d as u32).collect();
        self.pack(&digits)
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut e: u128) -> Elem {
        if let Some(t) = self.tables() {
            if a.is_zero() {
                return if e == 0 { Elem::ONE } else { Elem::ZERO };
            }
            let l = t.log[a.0 as usize] as u128;
            let r = (l * (e % t.order as u128)) % t.order as u128;
            return Elem(t.exp[r as usize]);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = self.tables() {
            let l = t.log[a.0 as usize];
            let r = if l == 0 { 0 } else { t.order - l };
            return Some(Elem(t.exp[r as usize]));
        }
        Some(self.pow(a, (self.size - 2) as u128))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u128)
    }

    /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, a: Elem) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if let Some(t) = self.tables() {
            return if t.log[a.0 as usize] % 2 == 0 { 1 } else { -1 };
        }
        let r = self.pow(a, ((self.size - 1) / 2) as u128);
        if r == Elem::ONE {
            1
        } else {
            -1
        }
    }

    pub(crate) fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| (self.size <= TABLE_LIMIT).then(|| self.build_tables()))
            .as_ref()
    }

    fn build_tables(&self) -> Tables {
        let order = (self.size - 1) as u32;
        let factors = prime_factors(order as u64);
        let generator = (1..self.size as u32)
            .map(Elem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_untabled(g, (order as u64 / r) as u128) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![LOG_ZERO; self.size as usize];
        let mut cur = Elem::ONE;
        for k in 0..order {
            exp.push(cur.0);
            log[cur.0 as usize] = k;
            cur = self.mul_untabled(cur, generator);
        }
        let zech = (0..order)
            .map(|k| {
                let s = self.add(Elem::ONE, Elem(exp[k as usize]));
                log[s.0 as usize]
            })
            .collect();
        Tables { log, exp, zech, order }
    }

    fn mul_untabled(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            Elem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
        } else if a.is_zero() || b.is_zero() {
            Elem::ZERO
        } else {
            self.mul_slow(a, b)
        }
    }

    fn pow_untabled(&self, a: Elem, mut e: u128) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_untabled(acc, base);
            }
            base = self.mul_untabled(base, base);
            e >>= 1;
        }
        acc
    }

    /// `sum_x chi(x^3 + a x^2 + b x + c)` over every `x` in the field.
    pub fn cubic_character_sum(&self, a: Elem, b: Elem, c: Elem) -> i64 {
        match self.tables() {
            Some(t) => {
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let lc = t.log[c.0 as usize];
                let mut sum: i64 = match lc {
                    LOG_ZERO => 0,
                    l if l % 2 == 0 => 1,
                    _ => -1,
                };
                for lx in 0..t.order {
                    let mut s = t.log_add(lx, la);
                    s = t.log_mul(s, lx);
                    s = t.log_add(s, lb);
                    s = t.log_mul(s, lx);
                    s = t.log_add(s, lc);
                    if s != LOG_ZERO {
                        sum += 1 - 2 * (s & 1) as i64;
                    }
                }
                sum
            }
            None => self
                .elements()
                .map(|x| {
                    let h = self.add(self.mul(self.add(self.mul(self.add(x, a), x), b), x), c);
                    self.quadratic_character(h) as i64
                })
                .sum(),
        }
    }
}

fn smallest_irreducible(p: u32, n: u32) -> Result<Vec<u32>> {
    let prime = Field::new(p, 1)?;
    let count = (p as u64).pow(n);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut v = code;
        for _ in 0..n {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let poly = Poly::new(&prime, coeffs.iter().map(|&c| Elem(c)).collect());
        if poly.is_irreducible() {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.n, self.modulus)
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}
