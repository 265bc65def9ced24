//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored as the base-p integer `c0 + c1*p + ... + c_{m-1}*p^{m-1}`
//! of their coordinates in the power basis of the modulus root. That integer is
//! also the canonical enumeration order of the field. Fields with at most
//! 2^16 elements multiply through log/antilog tables; larger fields fall back
//! to schoolbook multiplication with reduction by the modulus. Both paths are
//! always available so they can be cross-checked.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

/// Largest field order that gets log/antilog tables.
pub const TABLE_THRESHOLD: u64 = 1 << 16;

/// Largest odd-characteristic extension field that also gets an addition table.
const ADD_TABLE_THRESHOLD: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} does not fit in 32 bits")]
    TooLarge { p: u64, m: u32 },
    #[error("modulus must have {expected} coefficients (c0..c_m), got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is out of range for the prime field")]
    ModulusCoefficient(u32),
    #[error("modulus is reducible over GF({0})")]
    Reducible(u32),
    #[error("coordinate {value} out of range [0, {p})")]
    Coordinate { value: u64, p: u32 },
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("bad field notation {0:?} (expected \"p\" or \"p^m\")")]
    Notation(String),
    #[error("bad field element {0:?}")]
    ElementSyntax(String),
}

/// A field element in its integer encoding. Only meaningful together with the
/// [`FieldSpec`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    // exp has 2(q-1) entries so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

#[derive(Debug)]
struct FieldInner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// GF(p^m) with an explicit monic irreducible modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("m", &self.m())
            .field("modulus", &self.modulus())
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^m). Without an explicit modulus the canonical one is used:
    /// `X^m + r(X)` where `r` has the smallest integer encoding among all
    /// choices giving an irreducible polynomial.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(GfError::TooLarge { p, m })?;
        let p = p as u32;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 {
                    return Err(GfError::ModulusLength {
                        expected: m as usize + 1,
                        got: c.len(),
                    });
                }
                if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                    return Err(GfError::ModulusCoefficient(bad));
                }
                if c[m as usize] != 1 {
                    return Err(GfError::NotMonic);
                }
                if !fp_poly::is_irreducible(c, p) {
                    return Err(GfError::Reducible(p));
                }
                c.to_vec()
            }
            None => canonical_modulus(p, m, q as u32),
        };
        let mut inner = FieldInner {
            p,
            m,
            q: q as u32,
            modulus,
            tables: None,
        };
        if q <= TABLE_THRESHOLD {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    /// Parses `"p"` or `"p^m"`, with an optional modulus override given as
    /// `"c0,c1,...,cm"`.
    pub fn from_notation(text: &str, modulus: Option<&str>) -> Result<Self, GfError> {
        let bad = || GfError::Notation(text.to_string());
        let (p, m) = match text.trim().split_once('^') {
            Some((p, m)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                m.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (text.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        let modulus = modulus
            .map(|s| {
                s.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| GfError::Notation(s.to_string()))
            })
            .transpose()?;
        FieldSpec::new(p, m, modulus.as_deref())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.inner.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first, length m+1.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.inner.tables.is_some()
    }

    /// `"p^m"`, or `"p"` for prime fields.
    pub fn notation(&self) -> String {
        if self.m() == 1 {
            self.p().to_string()
        } else {
            format!("{}^{}", self.p(), self.m())
        }
    }

    /// All q elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(Elem)
    }

    /// Integer k embedded in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p() as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Elem, GfError> {
        if coords.len() != self.m() as usize {
            return Err(GfError::CoordinateCount {
                expected: self.m() as usize,
                got: coords.len(),
            });
        }
        let mut v = 0u32;
        for &c in coords.iter().rev() {
            if c >= self.p() {
                return Err(GfError::Coordinate {
                    value: c as u64,
                    p: self.p(),
                });
            }
            v = v * self.p() + c;
        }
        Ok(Elem(v))
    }

    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let p = self.p();
        let mut v = a.0;
        (0..self.m())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    pub fn in_prime_subfield(&self, a: Elem) -> bool {
        a.0 < self.p()
    }

    /// Wraps an encoded value as a checked [`FieldElement`].
    pub fn element(&self, a: Elem) -> FieldElement {
        debug_assert!(a.0 < self.q());
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        if f.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if f.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return Elem((s % f.p as u64) as u32);
        }
        if let Some(add) = f.tables.as_ref().and_then(|t| t.add.as_ref()) {
            return Elem(add[(a.0 * f.q + b.0) as usize]);
        }
        self.add_digits(a, b)
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p();
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.m() {
            out += ((x % p + y % p) % p) * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p();
        if p == 2 {
            return a;
        }
        if self.m() == 1 {
            return Elem((p - a.0) % p);
        }
        let mut x = a.0;
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.m() {
            out += ((p - x % p) % p) * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.inner.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_poly(a, b),
        }
    }

    /// Multiplication by polynomial arithmetic modulo the modulus, bypassing
    /// any tables.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.inner;
        let p = f.p as u64;
        let m = f.m as usize;
        if m == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let x = self.coords(a);
        let y = self.coords(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // X^m = -(c0 + c1 X + ... + c_{m-1} X^{m-1})
        for k in (m..2 * m - 1).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &c) in f.modulus[..m].iter().enumerate() {
                let idx = k - m + j;
                prod[idx] = (prod[idx] + (p - top) * c as u64) % p;
            }
        }
        let coords: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.from_coords(&coords)
            .expect("reduced coordinates are in range")
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.inner.tables {
            let order = (self.q() - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
            return Elem(t.exp[l as usize]);
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

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(match &self.inner.tables {
            Some(t) => {
                let order = self.q() - 1;
                Elem(t.exp[((order - t.log[a.0 as usize]) % order) as usize])
            }
            None => self.pow(a, self.q() as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `[c0,...,c_{m-1}]`, or a bare integer for prime fields.
    pub fn render(&self, a: Elem) -> String {
        if self.m() == 1 {
            return a.0.to_string();
        }
        let parts: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Inverse of [`render`](Self::render). Bare integers are embedded in the
    /// prime subfield.
    pub fn parse_element(&self, text: &str) -> Result<Elem, GfError> {
        let t = text.trim();
        let bad = || GfError::ElementSyntax(text.to_string());
        if let Some(body) = t.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(bad)?;
            let coords = body
                .split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&c) = coords.iter().find(|&&c| c >= self.p() as u64) {
                return Err(GfError::Coordinate {
                    value: c,
                    p: self.p(),
                });
            }
            let coords: Vec<u32> = coords.into_iter().map(|c| c as u32).collect();
            self.from_coords(&coords)
        } else {
            let k: i64 = t.parse().map_err(|_| bad())?;
            Ok(self.from_int(k))
        }
    }
}

fn canonical_modulus(p: u32, m: u32, q: u32) -> Vec<u32> {
    (0..q)
        .map(|r| {
            let mut c = Vec::with_capacity(m as usize + 1);
            let mut v = r;
            for _ in 0..m {
                c.push(v % p);
                v /= p;
            }
            c.push(1);
            c
        })
        .find(|c| fp_poly::is_irreducible(c, p))
        .expect("an irreducible polynomial of every degree exists")
}

fn build_tables(f: &FieldInner) -> Tables {
    let spec = FieldSpec {
        inner: Arc::new(FieldInner {
            p: f.p,
            m: f.m,
            q: f.q,
            modulus: f.modulus.clone(),
            tables: None,
        }),
    };
    let order = (f.q - 1) as usize;
    let mut exp = vec![0u32; 2 * order.max(1)];
    let mut log = vec![0u32; f.q as usize];
    for g in 1..f.q {
        let g = Elem(g);
        let mut x = Elem::ONE;
        let mut ok = true;
        for k in 0..order {
            if k > 0 && x == Elem::ONE {
                ok = false;
                break;
            }
            exp[k] = x.0;
            log[x.0 as usize] = k as u32;
            x = spec.mul_poly(x, g);
        }
        if ok && x == Elem::ONE {
            break;
        }
    }
    for k in order..2 * order {
        exp[k] = exp[k - order];
    }
    let add = (f.p != 2 && f.m > 1 && f.q <= ADD_TABLE_THRESHOLD).then(|| {
        let mut t = Vec::with_capacity((f.q * f.q) as usize);
        for a in 0..f.q {
            for b in 0..f.q {
                t.push(spec.add_digits(Elem(a), Elem(b)).0);
            }
        }
        t
    });
    Tables { exp, log, add }
}

/// Dense polynomials over GF(p), constant term first, used only to test
/// moduli for irreducibility.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while a.len() > db {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            for (j, &bj) in b.iter().enumerate() {
                let idx = da - db + j;
                a[idx] = (a[idx] + (p - c) * bj) % p;
            }
            a = trim(a);
        }
        a
    }

    fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, f, p)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// X^(p^k) mod f by repeated p-th powering.
    fn frobenius_power(k: u32, f: &[u64], p: u64) -> Vec<u64> {
        let mut x = rem(&[0, 1], f, p);
        for _ in 0..k {
            let mut acc = vec![1u64];
            let mut base = x.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base, f, p);
                }
                base = mul_mod(&base, &base, f, p);
                e >>= 1;
            }
            x = acc;
        }
        x
    }

    fn minus_x(a: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        if a.len() < 2 {
            a.resize(2, 0);
        }
        a[1] = (a[1] + p - 1) % p;
        trim(a)
    }

    fn prime_factors(mut n: u32) -> Vec<u32> {
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

    /// Rabin's test for a monic polynomial of degree m >= 1.
    pub fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
        let p = p as u64;
        let f: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
        let m = (f.len() - 1) as u32;
        if m == 1 {
            return true;
        }
        if !minus_x(&frobenius_power(m, &f, p), p).is_empty() {
            return false;
        }
        prime_factors(m).into_iter().all(|r| {
            let h = minus_x(&frobenius_power(m / r, &f, p), p);
            gcd(&f, &h, p).len() == 1
        })
    }
}

/// A field element bundled with its field, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self, GfError> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.render(self.value))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }
}
