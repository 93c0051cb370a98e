//! Generalized Reed-Solomon codes.

use serde::{Deserialize, Serialize};

use crate::code::{CodeError, LinearCode};
use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::matrix::MatQ;
use crate::poly::Poly;

/// `GRS_k(locators; multipliers)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrsSpec {
    pub locators: Vec<FieldElem>,
    pub multipliers: Vec<FieldElem>,
    pub k: usize,
}

/// Serialized [`GrsSpec`] using integer encodings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsJson {
    pub locators: Vec<i64>,
    pub multipliers: Vec<i64>,
    pub k: usize,
}

impl GrsSpec {
    pub fn validate(&self, field: &FieldCtx) -> Result<(), CodeError> {
        let n = self.locators.len();
        if self.multipliers.len() != n {
            return Err(CodeError::Invalid("locator and multiplier lengths differ".into()));
        }
        if self.k == 0 || self.k > n {
            return Err(CodeError::Invalid(format!("need 1 <= k <= n, got k = {}, n = {n}", self.k)));
        }
        if self.locators.iter().chain(&self.multipliers).any(|&a| !field.owns(a)) {
            return Err(FieldError::CrossField.into());
        }
        let mut sorted = self.locators.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CodeError::Invalid("locators must be distinct".into()));
        }
        if self.multipliers.iter().any(|a| a.is_zero()) {
            return Err(CodeError::Invalid("multipliers must be nonzero".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> GrsJson {
        GrsJson {
            locators: self.locators.iter().map(|a| a.value() as i64).collect(),
            multipliers: self.multipliers.iter().map(|a| a.value() as i64).collect(),
            k: self.k,
        }
    }

    pub fn from_json(field: &FieldCtx, j: &GrsJson) -> Result<Self, CodeError> {
        let conv = |v: &[i64]| v.iter().map(|&x| field.elem(x)).collect::<Result<Vec<_>, _>>();
        let spec = GrsSpec { locators: conv(&j.locators)?, multipliers: conv(&j.multipliers)?, k: j.k };
        spec.validate(field)?;
        Ok(spec)
    }
}

/// The code generated by `V_k(locators; multipliers)`.
pub fn grs_code(field: &FieldCtx, spec: &GrsSpec, labels: Option<Vec<String>>) -> Result<LinearCode, CodeError> {
    spec.validate(field)?;
    let g = MatQ::vandermonde(field, spec.k, &spec.locators, Some(&spec.multipliers))?;
    LinearCode::from_generator(g, labels)
}

/// `prod_{a in roots} (x - a)`.
pub fn annihilator(field: &FieldCtx, roots: &[FieldElem]) -> Poly {
    Poly::from_roots(field, roots)
}

/// Multipliers `v`, normalized with `v_0 = 1`, such that `GRS_k(locators; v)`
/// has parity-check matrix `V_{n-k}(locators)`. The restriction of that
/// parity matrix to `gamma` is then the plain Vandermonde matrix on those
/// locators.
pub fn grs_dual_prescribed(
    field: &FieldCtx,
    locators: &[FieldElem],
    k: usize,
    gamma: &[usize],
) -> Result<Vec<FieldElem>, CodeError> {
    let n = locators.len();
    if k == 0 || k > n {
        return Err(CodeError::Invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if let Some(&g) = gamma.iter().find(|&&g| g >= n) {
        return Err(CodeError::Invalid(format!("gamma index {g} out of range")));
    }
    let ones = vec![field.one(); n];
    GrsSpec { locators: locators.to_vec(), multipliers: ones, k }.validate(field)?;
    // v must satisfy sum_j v_j a_j^e = 0 for every e < n - 1.
    let kern = MatQ::vandermonde(field, n - 1, locators, None)?.kernel();
    if kern.rows() != 1 {
        return Err(CodeError::Invalid("Vandermonde kernel is not one-dimensional".into()));
    }
    let raw = kern.row(0);
    let scale = field.inv(raw[0])?;
    let v: Vec<FieldElem> = raw.iter().map(|&a| field.mul(a, scale)).collect();
    if v.iter().any(|a| a.is_zero()) {
        return Err(CodeError::Invalid("dual multipliers contain a zero".into()));
    }
    let g = MatQ::vandermonde(field, k, locators, Some(&v))?;
    let h = MatQ::vandermonde(field, n - k, locators, None)?;
    if !g.mul(&h.transpose())?.is_zero() {
        return Err(CodeError::Invalid("prescribed parity check failed".into()));
    }
    Ok(v)
}
