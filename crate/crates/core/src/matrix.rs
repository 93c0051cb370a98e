//! Dense matrices over GF(q).

use std::fmt;

use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major matrix whose entries all live in one field.
#[derive(Clone, PartialEq, Eq)]
pub struct MatQ {
    field: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row_raw(i))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: MatQ,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatQ {
    pub fn zeros(field: &FieldCtx, rows: usize, cols: usize) -> Self {
        MatQ { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub(crate) fn from_raw(field: &FieldCtx, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MatQ { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from rows of equal length; `cols` fixes the width when
    /// there are no rows.
    pub fn from_rows(field: &FieldCtx, rows: &[Vec<FieldElem>], cols: usize) -> Result<Self, MatError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatError::Shape(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for &a in r {
                if !field.owns(a) {
                    return Err(FieldError::CrossField.into());
                }
                data.push(a.value());
            }
        }
        Ok(MatQ { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Builds a matrix from integer encodings (the JSON representation).
    pub fn from_values(field: &FieldCtx, rows: &[Vec<i64>], cols: usize) -> Result<Self, MatError> {
        let conv: Result<Vec<Vec<FieldElem>>, FieldError> =
            rows.iter().map(|r| r.iter().map(|&v| field.elem(v)).collect()).collect();
        Self::from_rows(field, &conv?, cols)
    }

    pub fn to_values(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row_raw(i).iter().map(|&v| v as i64).collect()).collect()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.field.wrap(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, a: FieldElem) {
        assert!(self.field.owns(a), "{}", FieldError::CrossField);
        self.data[i * self.cols + j] = a.value();
    }

    pub(crate) fn raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub(crate) fn row_raw(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> Vec<FieldElem> {
        self.row_raw(i).iter().map(|&v| self.field.wrap(v)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn same_field(&self, o: &MatQ) -> Result<(), MatError> {
        if self.field != o.field {
            return Err(FieldError::CrossField.into());
        }
        Ok(())
    }

    pub fn mul(&self, o: &MatQ) -> Result<MatQ, MatError> {
        self.same_field(o)?;
        if self.cols != o.rows {
            return Err(MatError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.raw(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add_raw(out.raw(i, j), f.mul_raw(a, o.raw(l, j)));
                    out.set_raw(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>, MatError> {
        if v.len() != self.rows {
            return Err(MatError::Shape(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        if v.iter().any(|&a| !self.field.owns(a)) {
            return Err(FieldError::CrossField.into());
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add_raw(*o, f.mul_raw(a.value(), self.raw(i, j)));
            }
        }
        Ok(out.into_iter().map(|x| f.wrap(x)).collect())
    }

    pub fn transpose(&self) -> MatQ {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_raw(j, i, self.raw(i, j));
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> MatQ {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set_raw(i, jj, self.raw(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> MatQ {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row_raw(i));
        }
        Self::from_raw(&self.field, rows.len(), self.cols, data)
    }

    pub fn vstack(&self, o: &MatQ) -> Result<MatQ, MatError> {
        self.same_field(o)?;
        if self.cols != o.cols {
            return Err(MatError::Shape(format!("vstack of widths {} and {}", self.cols, o.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Ok(Self::from_raw(&self.field, self.rows + o.rows, self.cols, data))
    }

    pub fn hstack(&self, o: &MatQ) -> Result<MatQ, MatError> {
        self.same_field(o)?;
        if self.rows != o.rows {
            return Err(MatError::Shape(format!("hstack of heights {} and {}", self.rows, o.rows)));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + o.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row_raw(i));
            data.extend_from_slice(o.row_raw(i));
        }
        Ok(Self::from_raw(&self.field, self.rows, self.cols + o.cols, data))
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.raw(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv_raw(m.raw(r, c)).unwrap();
            for j in c..m.cols {
                let v = f.mul_raw(m.raw(r, j), inv);
                m.set_raw(r, j, v);
            }
            for i in 0..m.rows {
                let factor = m.raw(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub_raw(m.raw(i, j), f.mul_raw(factor, m.raw(r, j)));
                    m.set_raw(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self * x = b`; `Ok(None)` when inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>, MatError> {
        if b.len() != self.rows {
            return Err(MatError::Shape(format!("rhs of length {} against {} rows", b.len(), self.rows)));
        }
        let col = Self::from_rows(&self.field, &b.iter().map(|&a| vec![a]).collect::<Vec<_>>(), 1)?;
        let aug = self.hstack(&col)?.rref();
        if aug.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in aug.pivots.iter().enumerate() {
            x[c] = aug.matrix.get(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn invert(&self) -> Result<MatQ, MatError> {
        if self.rows != self.cols {
            return Err(MatError::Shape(format!("cannot invert {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?.rref();
        if aug.rank < n || aug.pivots.get(n - 1).is_some_and(|&c| c >= n) {
            return Err(MatError::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.matrix.select_columns(&cols))
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per row.
    pub fn kernel(&self) -> MatQ {
        let f = &self.field;
        let rr = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rr.pivots.contains(c)).collect();
        let mut out = Self::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set_raw(k, fc, 1);
            for (r, &pc) in rr.pivots.iter().enumerate() {
                out.set_raw(k, pc, f.neg_raw(rr.matrix.raw(r, fc)));
            }
        }
        out
    }

    /// Generalized Vandermonde matrix with entry `(i, j) = v_j * a_j^i`, `i < k`.
    pub fn vandermonde(
        field: &FieldCtx,
        k: usize,
        locators: &[FieldElem],
        multipliers: Option<&[FieldElem]>,
    ) -> Result<MatQ, MatError> {
        if let Some(v) = multipliers {
            if v.len() != locators.len() {
                return Err(MatError::Shape("locator and multiplier lengths differ".into()));
            }
        }
        let n = locators.len();
        let mut m = Self::zeros(field, k, n);
        for j in 0..n {
            let a = locators[j];
            if !field.owns(a) {
                return Err(FieldError::CrossField.into());
            }
            let mut cur = multipliers.map_or(1, |v| v[j].value());
            for i in 0..k {
                m.set_raw(i, j, cur);
                cur = field.mul_raw(cur, a.value());
            }
        }
        Ok(m)
    }
}
