use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::field::{FieldCtx, FieldElem, FieldError};

/// A rational place of the projective line: a finite point or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.value().cmp(&b.value()),
            (ProjPoint::Finite(_), ProjPoint::Infinity) => Ordering::Less,
            (ProjPoint::Infinity, ProjPoint::Finite(_)) => Ordering::Greater,
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(a) => write!(f, "P{}", a.value()),
            ProjPoint::Infinity => write!(f, "Pinf"),
        }
    }
}

/// JSON form of a point: an element encoding, or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Finite(i64),
    Named(String),
}

impl ProjPoint {
    pub fn to_json(self) -> PointJson {
        match self {
            ProjPoint::Finite(a) => PointJson::Finite(a.value() as i64),
            ProjPoint::Infinity => PointJson::Named("inf".into()),
        }
    }

    pub fn from_json(field: &FieldCtx, j: &PointJson) -> Result<Self, GroupError> {
        match j {
            PointJson::Finite(v) => Ok(ProjPoint::Finite(field.elem(*v)?)),
            PointJson::Named(s) if s == "inf" => Ok(ProjPoint::Infinity),
            PointJson::Named(s) => Err(GroupError::Invalid(format!("unknown point {s:?}"))),
        }
    }

    /// Every point, finite points by ascending encoding and then infinity.
    pub fn all(field: &FieldCtx) -> Vec<ProjPoint> {
        field.elements().map(ProjPoint::Finite).chain([ProjPoint::Infinity]).collect()
    }

    pub fn finite(self) -> Option<FieldElem> {
        match self {
            ProjPoint::Finite(a) => Some(a),
            ProjPoint::Infinity => None,
        }
    }
}

/// Element of PGL(2, q) acting on F_q(x) by `x -> (a x + b)/(c x + d)`,
/// stored with its first nonzero row-major entry equal to 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Mobius {
    field: FieldCtx,
    m: [u32; 4],
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mobius{:?}", self.m)
    }
}

impl Ord for Mobius {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m.cmp(&other.m)
    }
}

impl PartialOrd for Mobius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mobius {
    pub fn new(field: &FieldCtx, a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self, GroupError> {
        if [a, b, c, d].iter().any(|&e| !field.owns(e)) {
            return Err(FieldError::CrossField.into());
        }
        Self::from_raw(field, [a.value(), b.value(), c.value(), d.value()])
    }

    pub(crate) fn from_raw(field: &FieldCtx, m: [u32; 4]) -> Result<Self, GroupError> {
        let det = field.sub_raw(field.mul_raw(m[0], m[3]), field.mul_raw(m[1], m[2]));
        if det == 0 {
            return Err(GroupError::Singular);
        }
        let lead = *m.iter().find(|&&v| v != 0).unwrap();
        let inv = field.inv_raw(lead).unwrap();
        Ok(Mobius { field: field.clone(), m: m.map(|v| field.mul_raw(v, inv)) })
    }

    pub fn from_values(field: &FieldCtx, m: [[i64; 2]; 2]) -> Result<Self, GroupError> {
        let e = |v: i64| field.elem(v);
        Self::new(field, e(m[0][0])?, e(m[0][1])?, e(m[1][0])?, e(m[1][1])?)
    }

    pub fn to_values(&self) -> [[i64; 2]; 2] {
        let m = self.m.map(|v| v as i64);
        [[m[0], m[1]], [m[2], m[3]]]
    }

    pub fn identity(field: &FieldCtx) -> Self {
        Mobius { field: field.clone(), m: [1, 0, 0, 1] }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Entries `(a, b, c, d)` of the canonical matrix.
    pub fn entries(&self) -> [FieldElem; 4] {
        self.m.map(|v| self.field.wrap(v))
    }

    pub(crate) fn raw(&self) -> [u32; 4] {
        self.m
    }

    pub fn is_identity(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }

    fn matmul(&self, l: &[u32; 4], r: &[u32; 4]) -> [u32; 4] {
        let f = &self.field;
        let dot = |x: u32, y: u32, z: u32, w: u32| f.add_raw(f.mul_raw(x, y), f.mul_raw(z, w));
        [
            dot(l[0], r[0], l[1], r[2]),
            dot(l[0], r[1], l[1], r[3]),
            dot(l[2], r[0], l[3], r[2]),
            dot(l[2], r[1], l[3], r[3]),
        ]
    }

    /// `self ∘ other` as field automorphisms, so that
    /// `(self ∘ other)(f) = self(other(f))`. Its matrix is `M_other · M_self`.
    pub fn compose(&self, other: &Mobius) -> Result<Mobius, GroupError> {
        if self.field != other.field {
            return Err(FieldError::CrossField.into());
        }
        Self::from_raw(&self.field, self.matmul(&other.m, &self.m))
    }

    pub fn inverse(&self) -> Mobius {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        Self::from_raw(f, [d, f.neg_raw(b), f.neg_raw(c), a]).expect("inverse of an invertible matrix")
    }

    pub fn pow(&self, e: u64) -> Mobius {
        let mut r = Self::identity(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.compose(&base).unwrap();
            }
            base = base.compose(&base).unwrap();
            e >>= 1;
        }
        r
    }

    /// Order in PGL(2, q), found by stepping through powers.
    pub fn order(&self) -> u64 {
        let mut cur = self.clone();
        let mut k = 1;
        while !cur.is_identity() {
            cur = cur.compose(self).unwrap();
            k += 1;
        }
        k
    }

    /// The place `sigma(P)` for the automorphism `sigma = self`, which is the
    /// image of `P` under the inverse Möbius map `t -> (d t - b)/(a - c t)`.
    pub fn place_image(&self, p: ProjPoint) -> ProjPoint {
        let f = &self.field;
        let [a, b, c, d] = self.m;
        let (num, den) = match p {
            ProjPoint::Finite(x) => {
                let x = x.value();
                (f.sub_raw(f.mul_raw(d, x), b), f.sub_raw(a, f.mul_raw(c, x)))
            }
            ProjPoint::Infinity => (d, f.neg_raw(c)),
        };
        if den == 0 {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(f.wrap(f.mul_raw(num, f.inv_raw(den).unwrap())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mob(f: &FieldCtx, m: [[i64; 2]; 2]) -> Mobius {
        let g = |v: i64| f.from_int(v);
        Mobius::new(f, g(m[0][0]), g(m[0][1]), g(m[1][0]), g(m[1][1])).unwrap()
    }

    #[test]
    fn canonical_form_scales_first_nonzero() {
        let f = FieldCtx::prime(7).unwrap();
        let m = mob(&f, [[0, 3], [6, 2]]);
        assert_eq!(m.to_values(), [[0, 1], [2, 3]]);
        assert_eq!(mob(&f, [[2, 0], [0, 2]]), Mobius::identity(&f));
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = FieldCtx::prime(5).unwrap();
        let g = |v: i64| f.from_int(v);
        assert_eq!(Mobius::new(&f, g(1), g(2), g(2), g(4)).unwrap_err(), GroupError::Singular);
    }

    #[test]
    fn place_image_respects_composition() {
        let f = FieldCtx::prime(11).unwrap();
        let s = mob(&f, [[2, 5], [1, 3]]);
        let t = mob(&f, [[0, 1], [4, 7]]);
        let st = s.compose(&t).unwrap();
        for p in ProjPoint::all(&f) {
            assert_eq!(st.place_image(p), s.place_image(t.place_image(p)));
        }
    }

    #[test]
    fn inverse_and_order() {
        let f = FieldCtx::prime(13).unwrap();
        let s = mob(&f, [[3, 1], [1, 0]]);
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
        let k = s.order();
        assert!(s.pow(k).is_identity());
        assert!((1..k).all(|e| !s.pow(e).is_identity()));
    }

    #[test]
    fn point_order_puts_infinity_last() {
        let f = FieldCtx::prime(3).unwrap();
        let pts = ProjPoint::all(&f);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[3], ProjPoint::Infinity);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(sorted, pts);
    }
}
