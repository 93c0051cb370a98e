//! Prime-power finite fields GF(p^s) in a polynomial basis.
//!
//! Elements are encoded as the integer `sum c_i p^i` of their coordinates in
//! the basis `1, x, ..., x^(s-1)`. Every element carries a tag derived from
//! its field parameters, so operands from different fields are caught.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("modulus must have {expected} coefficients, got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is not reduced mod p")]
    BadCoefficient(u32),
    #[error("modulus is reducible over GF(p)")]
    Reducible,
    #[error("encoding {value} is out of range for GF({q})")]
    OutOfRange { value: i64, q: u32 },
    #[error("operands belong to different fields")]
    CrossField,
    #[error("division by zero")]
    DivisionByZero,
}

/// Serializable description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one_u32")]
    pub s: u32,
    /// `s + 1` coefficients, constant term first. Chosen canonically when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug)]
struct FieldInner {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    /// For p = 2: the modulus as a bit mask including x^s.
    mod_bits: u32,
    tag: u32,
}

/// Shared handle to a field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<FieldInner>,
}

/// One element of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u32,
    tag: u32,
}

impl FieldElem {
    /// Integer encoding of the element.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binary and unary operations accepted by [`FieldCtx::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Negation of the first operand; the second is ignored.
    Neg,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.s == other.inner.s
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.inner.p, self.inner.s, self.inner.modulus)
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

fn fnv_tag(p: u32, s: u32, modulus: &[u32]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    let mut feed = |x: u32| {
        for b in x.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    };
    feed(p);
    feed(s);
    for &c in modulus {
        feed(c);
    }
    h
}

// Polynomials over GF(p) as coefficient vectors, constant first, used only
// for modulus validation and search.
fn prime_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db] as u64, (p - 2) as u64, p as u64) as u32;
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let f = (top as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = (f as u64 * bc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Trial division by every monic polynomial of degree at most deg/2.
fn is_irreducible_prime_poly(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for e in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = e;
            for _ in 0..d {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if prime_poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^s). With `modulus = None` the first monic irreducible
    /// polynomial of degree `s` is chosen, scanning the lower coefficients by
    /// ascending integer encoding.
    pub fn new(p: u32, s: u32, modulus: Option<Vec<u32>>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if s == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(s).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let modulus = match (s, modulus) {
            (1, _) => vec![0, 1],
            (_, Some(m)) => {
                if m.len() != s as usize + 1 {
                    return Err(FieldError::ModulusLength { expected: s as usize + 1, got: m.len() });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(FieldError::BadCoefficient(c));
                }
                if m[s as usize] != 1 {
                    return Err(FieldError::NotMonic);
                }
                if !is_irreducible_prime_poly(&m, p) {
                    return Err(FieldError::Reducible);
                }
                m
            }
            (_, None) => Self::default_modulus(p, s),
        };
        let mod_bits = if p == 2 {
            modulus.iter().enumerate().fold(0u32, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let tag = fnv_tag(p, s, &modulus);
        Ok(FieldCtx {
            inner: Arc::new(FieldInner { p, s, q: q as u32, modulus, mod_bits, tag }),
        })
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        Self::new(spec.p, spec.s, spec.modulus.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p(),
            s: self.s(),
            modulus: if self.s() == 1 { None } else { Some(self.inner.modulus.clone()) },
        }
    }

    fn default_modulus(p: u32, s: u32) -> Vec<u32> {
        let count = (p as u64).pow(s);
        for e in 0..count {
            let mut m = Vec::with_capacity(s as usize + 1);
            let mut x = e;
            for _ in 0..s {
                m.push((x % p as u64) as u32);
                x /= p as u64;
            }
            m.push(1);
            if is_irreducible_prime_poly(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn s(&self) -> u32 {
        self.inner.s
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn tag(&self) -> u32 {
        self.inner.tag
    }

    /// Whether `a` was produced by this field.
    pub fn owns(&self, a: FieldElem) -> bool {
        a.tag == self.inner.tag
    }

    pub fn elem(&self, value: i64) -> Result<FieldElem, FieldError> {
        if value < 0 || value >= self.q() as i64 {
            return Err(FieldError::OutOfRange { value, q: self.q() });
        }
        Ok(self.wrap(value as u32))
    }

    /// Image of an integer under the prime-subfield embedding.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.wrap(n.rem_euclid(self.p() as i64) as u32)
    }

    pub(crate) fn wrap(&self, value: u32) -> FieldElem {
        debug_assert!(value < self.q());
        FieldElem { value, tag: self.inner.tag }
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q()).map(move |v| self.wrap(v))
    }

    /// Basis coordinates of `a`, constant first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let p = self.p();
        let mut v = a.value;
        (0..self.s())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        if coeffs.len() > self.s() as usize {
            return Err(FieldError::ModulusLength { expected: self.s() as usize, got: coeffs.len() });
        }
        let p = self.p();
        let mut v: u32 = 0;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(FieldError::BadCoefficient(c));
            }
            v = v * p + c;
        }
        Ok(self.wrap(v))
    }

    fn check(&self, a: FieldElem) {
        assert!(a.tag == self.inner.tag, "{}", FieldError::CrossField);
    }

    // Raw arithmetic on encodings. Callers guarantee operands are < q.

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let f = &*self.inner;
        if f.s == 1 {
            let r = a + b;
            if r >= f.p { r - f.p } else { r }
        } else if f.p == 2 {
            a ^ b
        } else {
            let (mut x, mut y, mut r, mut w) = (a, b, 0u32, 1u32);
            for _ in 0..f.s {
                r += ((x % f.p + y % f.p) % f.p) * w;
                x /= f.p;
                y /= f.p;
                w *= f.p;
            }
            r
        }
    }

    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let f = &*self.inner;
        if f.p == 2 || a == 0 {
            a
        } else if f.s == 1 {
            f.p - a
        } else {
            let (mut x, mut r, mut w) = (a, 0u32, 1u32);
            for _ in 0..f.s {
                r += ((f.p - x % f.p) % f.p) * w;
                x /= f.p;
                w *= f.p;
            }
            r
        }
    }

    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let f = &*self.inner;
        if a == 0 || b == 0 {
            return 0;
        }
        if f.s == 1 {
            return ((a as u64 * b as u64) % f.p as u64) as u32;
        }
        if f.p == 2 {
            let top = 1u32 << f.s;
            let (mut x, mut y, mut r) = (a, b, 0u32);
            while y != 0 {
                if y & 1 == 1 {
                    r ^= x;
                }
                y >>= 1;
                x <<= 1;
                if x & top != 0 {
                    x ^= f.mod_bits;
                }
            }
            return r;
        }
        let s = f.s as usize;
        let p = f.p;
        let mut da = [0u32; 16];
        let mut db = [0u32; 16];
        let (mut x, mut y) = (a, b);
        for i in 0..s {
            da[i] = x % p;
            db[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u32; 32];
        for i in 0..s {
            if da[i] == 0 {
                continue;
            }
            for j in 0..s {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (s..2 * s - 1).rev() {
            let c = prod[i];
            if c != 0 {
                for j in 0..s {
                    let m = f.modulus[j];
                    prod[i - s + j] = (prod[i - s + j] + (p - m) % p * c) % p;
                }
                prod[i] = 0;
            }
        }
        let mut r = 0u32;
        for i in (0..s).rev() {
            r = r * p + prod[i];
        }
        r
    }

    pub(crate) fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(r, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        r
    }

    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else if self.s() == 1 {
            let p = self.p() as i64;
            let (mut r0, mut r1, mut t0, mut t1) = (p, a as i64, 0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            Some(t0.rem_euclid(p) as u32)
        } else {
            Some(self.pow_raw(a, self.q() as u64 - 2))
        }
    }

    // Checked element arithmetic. Mixing fields is a hard error (panic);
    // use [`FieldCtx::arith`] for a fallible variant.

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        self.wrap(self.add_raw(a.value, b.value))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        self.wrap(self.sub_raw(a.value, b.value))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        self.wrap(self.mul_raw(a.value, b.value))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.check(a);
        self.wrap(self.neg_raw(a.value))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a);
        self.inv_raw(a.value).map(|v| self.wrap(v)).ok_or(FieldError::DivisionByZero)
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a);
        let bi = self.inv(b)?;
        Ok(self.wrap(self.mul_raw(a.value, bi.value)))
    }

    /// `a^e`; negative exponents require `a != 0`.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem, FieldError> {
        self.check(a);
        if e >= 0 {
            Ok(self.wrap(self.pow_raw(a.value, e as u64)))
        } else {
            let ai = self.inv(a)?;
            Ok(self.wrap(self.pow_raw(ai.value, e.unsigned_abs())))
        }
    }

    pub fn arith(&self, op: ArithOp, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        if !self.owns(a) || (!matches!(op, ArithOp::Neg | ArithOp::Inv) && !self.owns(b)) {
            return Err(FieldError::CrossField);
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElem) -> Result<u64, FieldError> {
        self.check(a);
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(order_in_group(self.q() as u64 - 1, |e| self.pow_raw(a.value, e) == 1))
    }

    /// Smallest-encoding generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.q() as u64 - 1;
        let factors = prime_factors(n);
        (1..self.q())
            .find(|&v| factors.iter().all(|&r| self.pow_raw(v, n / r) != 1))
            .map(|v| self.wrap(v))
            .expect("multiplicative group is cyclic")
    }

    /// Whether `x^2 + a x + b` is irreducible over this field with a root of
    /// multiplicative order `q^2 - 1` in the quadratic extension it defines.
    pub fn primitive_quadratic_check(&self, a: FieldElem, b: FieldElem) -> bool {
        self.check(a);
        self.check(b);
        if b.is_zero() {
            return false;
        }
        let (a, b) = (a.value, b.value);
        let has_root = (0..self.q()).any(|x| {
            let v = self.add_raw(self.mul_raw(x, self.add_raw(x, a)), b);
            v == 0
        });
        if has_root {
            return false;
        }
        let ext = QuadExt { f: self, a, b };
        let n = (self.q() as u64).pow(2) - 1;
        let root = (0, 1);
        if ext.pow(root, n) != (1, 0) {
            return false;
        }
        prime_factors(n).iter().all(|&r| ext.pow(root, n / r) != (1, 0))
    }

    /// First `(a, b)` with `x^2 + a x + b` primitive, scanning `a` then `b` by encoding.
    pub fn primitive_quadratic_search(&self) -> (FieldElem, FieldElem) {
        for a in self.elements() {
            for b in self.elements().skip(1) {
                if self.primitive_quadratic_check(a, b) {
                    return (a, b);
                }
            }
        }
        unreachable!("primitive quadratics exist over every finite field")
    }
}

/// Smallest divisor `e` of `n` with `is_one(e)`, assuming `is_one(n)`.
fn order_in_group(n: u64, is_one: impl Fn(u64) -> bool) -> u64 {
    let mut divs: Vec<u64> = (1..=((n as f64).sqrt() as u64 + 1))
        .filter(|d| *d > 0 && n.is_multiple_of(*d))
        .flat_map(|d| [d, n / d])
        .collect();
    divs.sort_unstable();
    divs.dedup();
    divs.into_iter().find(|&e| is_one(e)).unwrap_or(n)
}

/// GF(q)[X] / (X^2 + aX + b) with elements `(c0, c1) = c0 + c1 X`.
struct QuadExt<'a> {
    f: &'a FieldCtx,
    a: u32,
    b: u32,
}

impl QuadExt<'_> {
    fn mul(&self, u: (u32, u32), v: (u32, u32)) -> (u32, u32) {
        let f = self.f;
        let c0 = f.mul_raw(u.0, v.0);
        let c1 = f.add_raw(f.mul_raw(u.0, v.1), f.mul_raw(u.1, v.0));
        let c2 = f.mul_raw(u.1, v.1);
        // X^2 = -aX - b
        (f.sub_raw(c0, f.mul_raw(c2, self.b)), f.sub_raw(c1, f.mul_raw(c2, self.a)))
    }

    fn pow(&self, mut base: (u32, u32), mut e: u64) -> (u32, u32) {
        let mut r = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}
