//! Linear codes, minimum distance, and locality checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError};
use crate::matrix::{MatError, MatQ};

/// Largest `q^k` explored by message enumeration.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;
/// Largest number of column subsets explored by the parity-subset strategy.
pub const SUBSET_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code: {0}")]
    Invalid(String),
    #[error("distance check infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Strategy for [`LinearCode::min_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceStrategy {
    /// Enumerate all codewords, normalized so the first nonzero message entry is 1.
    Enumerate,
    /// Smallest linearly dependent set of parity-check columns.
    ParitySubsets,
    /// Enumeration when `q^k` is small, parity subsets otherwise.
    Auto,
}

/// An `[n, k]` linear code with both a generator and a parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: MatQ,
    parity: MatQ,
    labels: Vec<String>,
}

/// Cover of the coordinates by local groups for an `(r, delta)` locality claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityCertificate {
    pub r: usize,
    pub delta: usize,
    pub groups: Vec<Vec<usize>>,
}

/// Serialized form of a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    pub k: usize,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<Vec<i64>>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}

impl LinearCode {
    /// Code spanned by the rows of a full-row-rank generator.
    pub fn from_generator(generator: MatQ, labels: Option<Vec<String>>) -> Result<Self, CodeError> {
        let n = generator.cols();
        if generator.rows() == 0 {
            return Err(CodeError::Invalid("dimension must be at least 1".into()));
        }
        if generator.rank() != generator.rows() {
            return Err(CodeError::Invalid("generator rows are linearly dependent".into()));
        }
        let parity = generator.kernel();
        Self::assemble(generator, parity, labels.unwrap_or_else(|| default_labels(n)))
    }

    /// Code spanned by the rows of `m`, which may be rank deficient.
    pub fn from_spanning_rows(m: &MatQ, labels: Option<Vec<String>>) -> Result<Self, CodeError> {
        let rr = m.rref();
        let basis = rr.matrix.select_rows(&(0..rr.rank).collect::<Vec<_>>());
        Self::from_generator(basis, labels)
    }

    /// Code defined as the null space of `parity`.
    pub fn from_parity(parity: MatQ, labels: Option<Vec<String>>) -> Result<Self, CodeError> {
        let n = parity.cols();
        let generator = parity.kernel();
        if generator.rows() == 0 {
            return Err(CodeError::Invalid("parity checks leave only the zero code".into()));
        }
        let rr = parity.rref();
        let parity = rr.matrix.select_rows(&(0..rr.rank).collect::<Vec<_>>());
        Self::assemble(generator, parity, labels.unwrap_or_else(|| default_labels(n)))
    }

    fn assemble(generator: MatQ, parity: MatQ, labels: Vec<String>) -> Result<Self, CodeError> {
        let n = generator.cols();
        if labels.len() != n {
            return Err(CodeError::Invalid(format!("{} labels for length {n}", labels.len())));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(CodeError::Invalid(format!("duplicate coordinate label {l}")));
        }
        if !generator.mul(&parity.transpose())?.is_zero() {
            return Err(CodeError::Invalid("generator and parity are not orthogonal".into()));
        }
        if generator.rows() + parity.rows() != n {
            return Err(CodeError::Invalid("generator and parity ranks do not sum to n".into()));
        }
        Ok(LinearCode { generator, parity, labels })
    }

    pub fn from_json(field: &FieldCtx, j: &CodeJson) -> Result<Self, CodeError> {
        let labels = Some(j.labels.clone());
        let code = match (&j.generator, &j.parity) {
            (Some(g), Some(h)) => {
                let g = MatQ::from_values(field, g, j.n)?;
                let h = MatQ::from_values(field, h, j.n)?;
                if g.rank() != g.rows() || h.rank() != h.rows() {
                    return Err(CodeError::Invalid("stored matrices are rank deficient".into()));
                }
                Self::assemble(g, h, j.labels.clone())?
            }
            (Some(g), None) => Self::from_generator(MatQ::from_values(field, g, j.n)?, labels)?,
            (None, Some(h)) => Self::from_parity(MatQ::from_values(field, h, j.n)?, labels)?,
            (None, None) => return Err(CodeError::Invalid("code has neither generator nor parity".into())),
        };
        if code.n() != j.n || code.k() != j.k {
            return Err(CodeError::Invalid(format!(
                "declared [{}, {}] but matrices give [{}, {}]",
                j.n,
                j.k,
                code.n(),
                code.k()
            )));
        }
        Ok(code)
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            n: self.n(),
            k: self.k(),
            labels: self.labels.clone(),
            generator: Some(self.generator.to_values()),
            parity: Some(self.parity.to_values()),
        }
    }

    pub fn field(&self) -> &FieldCtx {
        self.generator.field()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &MatQ {
        &self.generator
    }

    pub fn parity(&self) -> &MatQ {
        &self.parity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, CodeError> {
        let (g, h) = (self.generator, self.parity);
        self = Self::assemble(g, h, labels)?;
        Ok(self)
    }

    /// The dual code; its generator is this code's parity-check matrix.
    pub fn dual(&self) -> Result<Self, CodeError> {
        Self::assemble(self.parity.clone(), self.generator.clone(), self.labels.clone())
    }

    pub fn encode(&self, message: &[FieldElem]) -> Result<Vec<FieldElem>, CodeError> {
        Ok(self.generator.left_mul(message)?)
    }

    pub fn is_codeword(&self, word: &[FieldElem]) -> Result<bool, CodeError> {
        if word.len() != self.n() {
            return Err(CodeError::Invalid(format!("word of length {} for n = {}", word.len(), self.n())));
        }
        Ok(self.parity.transpose().left_mul(word)?.iter().all(|a| a.is_zero()))
    }

    /// Keeps the listed coordinates, in the order given.
    pub fn puncture(&self, coords: &[usize]) -> Result<Self, CodeError> {
        if let Some(&c) = coords.iter().find(|&&c| c >= self.n()) {
            return Err(CodeError::Invalid(format!("coordinate {c} out of range")));
        }
        let labels = coords.iter().map(|&c| self.labels[c].clone()).collect();
        Self::from_spanning_rows(&self.generator.select_columns(coords), Some(labels))
    }

    /// Dimension of the code restricted to `coords`.
    pub fn restricted_dim(&self, coords: &[usize]) -> usize {
        self.generator.select_columns(coords).rank()
    }

    pub fn min_distance(&self, strategy: DistanceStrategy) -> Result<usize, CodeError> {
        match strategy {
            DistanceStrategy::Enumerate => self.distance_by_enumeration(),
            DistanceStrategy::ParitySubsets => self.distance_by_subsets(),
            DistanceStrategy::Auto => {
                let q = self.field().q() as u64;
                let small = q.checked_pow(self.k() as u32).is_some_and(|c| c <= 100_000);
                if small {
                    self.distance_by_enumeration()
                } else {
                    self.distance_by_subsets()
                }
            }
        }
    }

    fn distance_by_enumeration(&self) -> Result<usize, CodeError> {
        let f = self.field();
        let (q, k, n) = (f.q(), self.k(), self.n());
        let total = (q as u64).checked_pow(k as u32).filter(|&c| c <= ENUMERATION_BUDGET);
        if total.is_none() {
            return Err(CodeError::Infeasible(format!("q^k = {q}^{k} exceeds the enumeration budget")));
        }
        let g = &self.generator;
        let mut best = n;
        // Messages whose first nonzero entry (at position `lead`) is 1.
        for lead in 0..k {
            let mut digits = vec![0u32; k - lead - 1];
            let mut word: Vec<u32> = g.row_raw(lead).to_vec();
            loop {
                let w = word.iter().filter(|&&v| v != 0).count();
                best = best.min(w);
                // Increment the mixed-radix counter and update the word in place.
                let mut pos = 0;
                loop {
                    if pos == digits.len() {
                        break;
                    }
                    let row = g.row_raw(lead + 1 + pos);
                    let old = digits[pos];
                    let new = if old + 1 == q { 0 } else { old + 1 };
                    let delta = f.sub_raw(new, old);
                    for (x, &r) in word.iter_mut().zip(row) {
                        *x = f.add_raw(*x, f.mul_raw(delta, r));
                    }
                    digits[pos] = new;
                    if new != 0 {
                        break;
                    }
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
        }
        Ok(best)
    }

    fn distance_by_subsets(&self) -> Result<usize, CodeError> {
        let h = &self.parity;
        let mut budget = SUBSET_BUDGET;
        for w in 1..=h.rows() {
            if find_dependent_columns(h, w, &mut budget)?.is_some() {
                return Ok(w);
            }
        }
        Ok(h.rows() + 1)
    }

    /// Whether the minimum distance is at least `d`, checking only
    /// column subsets of size below `d`.
    pub fn distance_at_least(&self, d: usize) -> Result<bool, CodeError> {
        if d <= 1 {
            return Ok(true);
        }
        if d - 1 > self.parity.rows() {
            return Ok(false);
        }
        let mut budget = SUBSET_BUDGET;
        for w in 1..d {
            if find_dependent_columns(&self.parity, w, &mut budget)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_mds(&self) -> Result<bool, CodeError> {
        self.distance_at_least(self.n() - self.k() + 1)
    }

    /// Whether every group has size at most `r + delta - 1`, the groups cover
    /// all coordinates, and each restricted code has distance at least `delta`.
    pub fn check_locality(&self, cert: &LocalityCertificate) -> Result<bool, CodeError> {
        cert.validate(self.n())?;
        for g in &cert.groups {
            if g.len() > cert.r + cert.delta - 1 {
                return Ok(false);
            }
            if !self.puncture(g)?.distance_at_least(cert.delta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_optimal_lrc(&self, cert: &LocalityCertificate) -> Result<bool, CodeError> {
        if !self.check_locality(cert)? {
            return Ok(false);
        }
        let bound = singleton_lrc_bound(self.n(), self.k(), cert.r, cert.delta)?;
        if bound < 1 {
            return Ok(false);
        }
        // Any code with this locality has distance at most the bound.
        self.distance_at_least(bound as usize)
    }
}

impl LocalityCertificate {
    pub fn validate(&self, n: usize) -> Result<(), CodeError> {
        if self.r == 0 || self.delta < 2 {
            return Err(CodeError::Invalid("locality needs r >= 1 and delta >= 2".into()));
        }
        let mut covered = vec![false; n];
        for g in &self.groups {
            for &c in g {
                if c >= n {
                    return Err(CodeError::Invalid(format!("group coordinate {c} out of range")));
                }
                covered[c] = true;
            }
        }
        if let Some(c) = covered.iter().position(|&x| !x) {
            return Err(CodeError::Invalid(format!("coordinate {c} is in no group")));
        }
        Ok(())
    }
}

/// `n - k + 1 - (ceil(k / r) - 1)(delta - 1)`.
pub fn singleton_lrc_bound(n: usize, k: usize, r: usize, delta: usize) -> Result<i64, CodeError> {
    if k == 0 || k > n || r == 0 || delta < 2 {
        return Err(CodeError::Invalid(format!("bound needs 1 <= k <= n, r >= 1, delta >= 2 (n={n}, k={k}, r={r}, delta={delta})")));
    }
    let (n, k, r, delta) = (n as i64, k as i64, r as i64, delta as i64);
    Ok(n - k + 1 - ((k + r - 1) / r - 1) * (delta - 1))
}

/// A linearly dependent set of at most `w` columns of `h`, searching subsets
/// in lexicographic order. Each visited prefix is charged against `budget`.
pub fn find_dependent_columns(h: &MatQ, w: usize, budget: &mut u64) -> Result<Option<Vec<usize>>, CodeError> {
    let n = h.cols();
    if w == 0 || w > n {
        return Ok(None);
    }
    let mut search = SubsetSearch {
        h,
        f: h.field(),
        basis: Vec::new(),
        chosen: Vec::new(),
        budget,
    };
    Ok(search.dfs(0, w)?.then(|| search.chosen.clone()))
}

struct SubsetSearch<'a> {
    h: &'a MatQ,
    f: &'a FieldCtx,
    /// Echelon vectors for the chosen columns with their pivot index.
    basis: Vec<(Vec<u32>, usize)>,
    chosen: Vec<usize>,
    budget: &'a mut u64,
}

impl SubsetSearch<'_> {
    /// Reduces column `c` against the current basis; `None` when dependent.
    fn reduce(&self, c: usize) -> Option<(Vec<u32>, usize)> {
        let f = self.f;
        let mut v: Vec<u32> = (0..self.h.rows()).map(|i| self.h.raw(i, c)).collect();
        for (b, piv) in &self.basis {
            let factor = v[*piv];
            if factor != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.sub_raw(*x, f.mul_raw(factor, y));
                }
            }
        }
        let piv = v.iter().position(|&x| x != 0)?;
        let inv = f.inv_raw(v[piv]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul_raw(*x, inv);
        }
        Some((v, piv))
    }

    fn dfs(&mut self, start: usize, w: usize) -> Result<bool, CodeError> {
        let n = self.h.cols();
        let need = w - self.chosen.len();
        for c in start..=(n - need) {
            if *self.budget == 0 {
                return Err(CodeError::Infeasible("column-subset budget exhausted".into()));
            }
            *self.budget -= 1;
            self.chosen.push(c);
            match self.reduce(c) {
                None => return Ok(true),
                Some(b) => {
                    if need > 1 {
                        self.basis.push(b);
                        if self.dfs(c + 1, w)? {
                            return Ok(true);
                        }
                        self.basis.pop();
                    }
                }
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}
