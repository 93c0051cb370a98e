use std::collections::BTreeMap;
use std::fmt;

use super::{GroupError, GroupTable, Mobius, ProjPoint};
use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::poly::Poly;

/// Element of F_q(x) as a reduced fraction with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num.raw(), self.den.raw())
    }
}

/// Valuations at the rational places where a function has a zero or pole.
/// `residual_degree` accounts for places of higher degree, so the total is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSupport {
    pub rational: BTreeMap<ProjPoint, i64>,
    pub residual_degree: i64,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, GroupError> {
        if num.field() != den.field() {
            return Err(FieldError::CrossField.into());
        }
        if den.is_zero() {
            return Err(FieldError::DivisionByZero.into());
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(&field) });
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g)?;
        let (mut d, _) = den.divrem(&g)?;
        let lead = field.inv(d.leading())?;
        n = n.scale(lead);
        d = d.scale(lead);
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn x(field: &FieldCtx) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn constant(field: &FieldCtx, a: FieldElem) -> Self {
        Self::from_poly(Poly::constant(field, a))
    }

    pub fn one(field: &FieldCtx) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn field(&self) -> &FieldCtx {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Degree as a map to the projective line: `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(n, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self, GroupError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.field()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, a: FieldElem) -> Self {
        Self::new(self.num.scale(a), self.den.clone()).expect("nonzero denominator")
    }

    /// `h(self)` for a polynomial `h`.
    pub fn substitute_into(&self, h: &Poly) -> Self {
        let f = self.field();
        h.coeffs()
            .iter()
            .rev()
            .fold(Self::from_poly(Poly::zero(f)), |acc, &c| acc.mul(self).add(&Self::constant(f, c)))
    }

    /// `sigma(f) = f((a x + b)/(c x + d))`.
    pub fn apply(&self, sigma: &Mobius) -> Result<Self, GroupError> {
        let f = self.field();
        if sigma.field() != f {
            return Err(FieldError::CrossField.into());
        }
        let [a, b, c, d] = sigma.entries();
        let top = Poly::new(f, &[b, a])?;
        let bottom = Poly::new(f, &[d, c])?;
        // p((ax+b)/(cx+d)) * (cx+d)^deg p, as a polynomial.
        let homogenize = |p: &Poly| -> (Poly, usize) {
            let Some(deg) = p.degree() else {
                return (Poly::zero(f), 0);
            };
            let mut acc = Poly::zero(f);
            for (i, coef) in p.coeffs().iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let term = top.pow(i).mul(&bottom.pow(deg - i)).scale(*coef);
                acc = acc.add(&term);
            }
            (acc, deg)
        };
        let (n, dn) = homogenize(&self.num);
        let (m, dm) = homogenize(&self.den);
        if dn >= dm {
            Self::new(n, m.mul(&bottom.pow(dn - dm)))
        } else {
            Self::new(n.mul(&bottom.pow(dm - dn)), m)
        }
    }

    pub fn valuation(&self, p: ProjPoint) -> Result<i64, GroupError> {
        if self.is_zero() {
            return Err(GroupError::Invalid("valuation of the zero function".into()));
        }
        Ok(match p {
            ProjPoint::Finite(b) => self.num.root_multiplicity(b) as i64 - self.den.root_multiplicity(b) as i64,
            ProjPoint::Infinity => self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64,
        })
    }

    /// Value of `pi^budget * f` at `p`, where `pi` is the uniformizer
    /// `x - b` at a finite point and `1/x` at infinity. With `budget = 0`
    /// this is ordinary evaluation at a point where `f` is regular.
    pub fn eval(&self, p: ProjPoint, pole_budget: u32) -> Result<FieldElem, GroupError> {
        let f = self.field();
        if self.is_zero() {
            return Ok(f.zero());
        }
        let v = self.valuation(p)?;
        let shifted = v + pole_budget as i64;
        if shifted < 0 {
            return Err(GroupError::PoleTooLarge { point: p.to_string(), order: -v, budget: pole_budget });
        }
        if shifted > 0 {
            return Ok(f.zero());
        }
        match p {
            ProjPoint::Infinity => Ok(f.div(self.num.leading(), self.den.leading())?),
            ProjPoint::Finite(b) => {
                let lin = Poly::linear(f, b);
                let strip = |mut q: Poly| {
                    loop {
                        let (qt, r) = q.divrem(&lin).expect("nonzero divisor");
                        if !r.is_zero() {
                            return q;
                        }
                        q = qt;
                    }
                };
                let n = strip(self.num.clone());
                let d = strip(self.den.clone());
                Ok(f.div(n.eval(b), d.eval(b))?)
            }
        }
    }

    pub fn divisor_support(&self) -> Result<DivisorSupport, GroupError> {
        if self.is_zero() {
            return Err(GroupError::Invalid("divisor of the zero function".into()));
        }
        let mut rational = BTreeMap::new();
        let mut total = 0i64;
        for p in ProjPoint::all(self.field()) {
            let v = self.valuation(p)?;
            if v != 0 {
                rational.insert(p, v);
                total += v;
            }
        }
        Ok(DivisorSupport { rational, residual_degree: -total })
    }
}

/// A generator `z` of the fixed field of `h`, with `[F_q(x) : F_q(z)] = |h|`.
///
/// Candidates are tried in order: the power sums `sum sigma(x)^i` for
/// `i = 1, 2, 3`, the norm `prod sigma(x)`, then the remaining elementary
/// symmetric functions of the orbit `{sigma(x)}`. One of the latter always
/// works, since a non-constant coefficient of the minimal polynomial of `x`
/// over the fixed field generates it.
pub fn fixed_field_generator(h: &GroupTable) -> Result<RationalFunction, GroupError> {
    let f = h.field();
    let x = RationalFunction::x(f);
    let images: Vec<RationalFunction> = h.elements().iter().map(|s| x.apply(s)).collect::<Result<_, _>>()?;
    let order = images.len();

    let power_sum = |e: usize| {
        images.iter().fold(RationalFunction::from_poly(Poly::zero(f)), |acc, g| acc.add(&g.pow(e)))
    };
    // Coefficients of prod (T - g) over the orbit, lowest degree first.
    let mut elem_sym = vec![RationalFunction::one(f)];
    for g in &images {
        let mut next = vec![RationalFunction::from_poly(Poly::zero(f)); elem_sym.len() + 1];
        for (i, c) in elem_sym.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(g));
        }
        elem_sym = next;
    }
    let norm = if order.is_multiple_of(2) { elem_sym[0].clone() } else { elem_sym[0].neg() };
    let mut candidates: Vec<RationalFunction> = vec![power_sum(1), power_sum(2), power_sum(3), norm];
    candidates.extend(elem_sym[1..order].iter().cloned());

    for z in candidates {
        if z.degree() != order {
            continue;
        }
        let fixed = h.elements().iter().all(|s| z.apply(s).is_ok_and(|w| w == z));
        if fixed {
            return Ok(z);
        }
    }
    Err(GroupError::Invalid("no fixed-field generator found".into()))
}
