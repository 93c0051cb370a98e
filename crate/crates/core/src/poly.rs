//! Univariate polynomials over a [`FieldCtx`].

use std::fmt;

use crate::field::{FieldCtx, FieldElem, FieldError};

/// Dense polynomial, constant term first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldCtx,
    c: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub(crate) fn from_raw(field: &FieldCtx, mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn new(field: &FieldCtx, coeffs: &[FieldElem]) -> Result<Self, FieldError> {
        if coeffs.iter().any(|&a| !field.owns(a)) {
            return Err(FieldError::CrossField);
        }
        Ok(Self::from_raw(field, coeffs.iter().map(|a| a.value()).collect()))
    }

    pub fn zero(field: &FieldCtx) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &FieldCtx) -> Self {
        Self::from_raw(field, vec![1])
    }

    pub fn constant(field: &FieldCtx, a: FieldElem) -> Self {
        Self::from_raw(field, vec![a.value()])
    }

    /// The monomial `x`.
    pub fn x(field: &FieldCtx) -> Self {
        Self::from_raw(field, vec![0, 1])
    }

    /// `x - a`.
    pub fn linear(field: &FieldCtx, a: FieldElem) -> Self {
        Self::from_raw(field, vec![field.neg(a).value(), 1])
    }

    /// `prod (x - a)` over `roots`.
    pub fn from_roots(field: &FieldCtx, roots: &[FieldElem]) -> Self {
        roots.iter().fold(Self::one(field), |acc, &a| acc.mul(&Self::linear(field, a)))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.field.wrap(self.c.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> Vec<FieldElem> {
        self.c.iter().map(|&v| self.field.wrap(v)).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.c
    }

    pub fn leading(&self) -> FieldElem {
        self.field.wrap(self.c.last().copied().unwrap_or(0))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| f.add_raw(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0)))
            .collect();
        Self::from_raw(f, c)
    }

    pub fn neg(&self) -> Poly {
        Self::from_raw(&self.field, self.c.iter().map(|&v| self.field.neg_raw(v)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: FieldElem) -> Poly {
        let f = &self.field;
        Self::from_raw(f, self.c.iter().map(|&v| f.mul_raw(v, a.value())).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u32; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add_raw(c[i + j], f.mul_raw(a, b));
            }
        }
        Self::from_raw(f, c)
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Self::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), FieldError> {
        let f = &self.field;
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let li = f.inv_raw(*d.c.last().unwrap()).unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut qt = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let top = r[i];
            if top == 0 {
                continue;
            }
            let m = f.mul_raw(top, li);
            qt[i - dd] = m;
            for (j, &dc) in d.c.iter().enumerate() {
                r[i - dd + j] = f.sub_raw(r[i - dd + j], f.mul_raw(m, dc));
            }
        }
        Ok((Self::from_raw(f, qt), Self::from_raw(f, r)))
    }

    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => self.scale(self.field.wrap(self.field.inv_raw(l).unwrap())),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        let xv = x.value();
        let v = self.c.iter().rev().fold(0u32, |acc, &c| f.add_raw(f.mul_raw(acc, xv), c));
        f.wrap(v)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: FieldElem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear(&self.field, a);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (qt, r) = p.divrem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                return m;
            }
            p = qt;
            m += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &FieldCtx, c: &[i64]) -> Poly {
        Poly::from_raw(f, c.iter().map(|&v| f.from_int(v).value()).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let f = FieldCtx::prime(7).unwrap();
        let a = p(&f, &[3, 0, 2, 5, 1]);
        let b = p(&f, &[1, 4, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = FieldCtx::prime(5).unwrap();
        let common = p(&f, &[2, 1]);
        let a = common.mul(&p(&f, &[1, 1]));
        let b = common.mul(&p(&f, &[3, 0, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn from_roots_vanishes_on_roots() {
        let f = FieldCtx::prime(11).unwrap();
        let roots: Vec<_> = [1, 4, 9].iter().map(|&v| f.from_int(v)).collect();
        let h = Poly::from_roots(&f, &roots);
        assert_eq!(h.degree(), Some(3));
        for r in roots {
            assert!(h.eval(r).is_zero());
            assert_eq!(h.root_multiplicity(r), 1);
        }
        assert!(!h.eval(f.from_int(2)).is_zero());
    }
}
