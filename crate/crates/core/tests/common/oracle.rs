//! Table-driven GF(p^s) arithmetic built from scratch, used to cross-check
//! the library's fields and matrices.

use mergeconv::field::FieldCtx;
use mergeconv::matrix::MatQ;

pub struct Oracle {
    pub q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
}

fn digits(v: u32, p: u32, s: usize) -> Vec<u32> {
    let mut v = v;
    (0..s)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Oracle {
    /// `modulus` is monic of degree `s`, constant coefficient first.
    pub fn new(p: u32, s: usize, modulus: &[u32]) -> Self {
        let q = (p as usize).pow(s as u32);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q as u32 {
            let da = digits(a, p, s);
            for b in 0..q as u32 {
                let db = digits(b, p, s);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * q + b as usize] = undigits(&sum, p);
                // Schoolbook product, then reduce by the monic modulus.
                let mut prod = vec![0u32; 2 * s];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (s..2 * s).rev() {
                    let c = prod[top];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(s) {
                            let idx = top - s + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[top] = 0;
                    }
                }
                mul[a as usize * q + b as usize] = undigits(&prod[..s], p);
            }
        }
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = (1..q as u32).find(|&b| mul[a * q + b as usize] == 1).expect("field has inverses");
        }
        let neg = (0..q).map(|a| (0..q as u32).find(|&b| add[a * q + b as usize] == 0).unwrap()).collect();
        Oracle { q, add, mul, inv, neg }
    }

    pub fn of(f: &FieldCtx) -> Self {
        Self::new(f.p(), f.s() as usize, f.modulus())
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert_ne!(a, 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, e: usize) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn dot(&self, x: &[u32], y: &[u32]) -> u32 {
        x.iter().zip(y).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// Rank by Gaussian elimination on a copy of `rows`.
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, piv);
            let scale = self.inv(m[rank][c]);
            let pivot: Vec<u32> = m[rank].iter().map(|&v| self.mul(v, scale)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let factor = self.neg(row[c]);
                    for (x, &pv) in row.iter_mut().zip(&pivot) {
                        *x = self.add(*x, self.mul(factor, pv));
                    }
                }
            }
            m[rank] = pivot;
            rank += 1;
        }
        rank
    }

    /// `a * b^T` for row-major matrices.
    pub fn mul_transpose(&self, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
        a.iter().map(|x| b.iter().map(|y| self.dot(x, y)).collect()).collect()
    }
}

pub fn raw(m: &MatQ) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|a| a.value()).collect()).collect()
}

pub fn columns(m: &[Vec<u32>], cols: &[usize]) -> Vec<Vec<u32>> {
    m.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect()
}
