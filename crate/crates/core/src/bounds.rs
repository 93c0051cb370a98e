//! Lower bounds on conversion access cost and the constructive lemma behind them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{singleton_lrc_bound, CodeError, LinearCode, LocalityCertificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialDims {
    pub n: usize,
    pub k: usize,
}

/// Parameters of a `t`-way merge: initial `[n_i, k_i]` codes into a final
/// `[n_F, k_F, d_F]` code with `(r, delta)` locality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeParams {
    pub initial: Vec<InitialDims>,
    pub n_final: usize,
    pub k_final: usize,
    pub d_final: usize,
    /// Locality; defaults to `k_final`, which makes `delta = 2` describe an MDS code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default = "default_delta")]
    pub delta: usize,
}

fn default_delta() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerInitialBound {
    pub delta_tilde: i64,
    pub read_floor: i64,
    pub unchanged_ceiling: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub min_write: i64,
    pub min_read: i64,
    pub min_total: i64,
    pub per_initial: Vec<PerInitialBound>,
    /// Read cost of re-encoding from scratch, `sum k_i`.
    pub default_read: i64,
    pub default_read_optimal: bool,
}

impl MergeParams {
    pub fn t(&self) -> usize {
        self.initial.len()
    }

    pub fn locality(&self) -> usize {
        self.r.unwrap_or(self.k_final)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let bad = |m: String| Err(BoundsError::Invalid(m));
        if self.initial.is_empty() {
            return bad("at least one initial code is required".into());
        }
        for (i, d) in self.initial.iter().enumerate() {
            if d.k == 0 || d.k > d.n {
                return bad(format!("initial {i}: need 1 <= k <= n, got [{}, {}]", d.n, d.k));
            }
        }
        let sum: usize = self.initial.iter().map(|d| d.k).sum();
        if sum != self.k_final {
            return bad(format!("initial dimensions sum to {sum}, final dimension is {}", self.k_final));
        }
        if self.k_final > self.n_final {
            return bad(format!("final k = {} exceeds n = {}", self.k_final, self.n_final));
        }
        if self.d_final == 0 || self.d_final > self.n_final - self.k_final + 1 {
            return bad(format!("final distance {} violates the Singleton bound", self.d_final));
        }
        if self.locality() == 0 || self.delta < 2 {
            return bad("locality needs r >= 1 and delta >= 2".into());
        }
        Ok(())
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `max(0, ceil((k_F - k_i)/r) - 1)`. The clamp only matters when
/// `k_i = k_F`, where no other initial code contributes.
fn locality_groups(k_final: usize, k_i: usize, r: usize) -> i64 {
    (ceil_div(k_final as i64 - k_i as i64, r as i64) - 1).max(0)
}

/// Upper bound on the number of unchanged symbols from one initial code.
pub fn unchanged_upper(k_i: usize, n_final: usize, k_final: usize, d_final: usize, r: usize, delta: usize) -> i64 {
    k_i as i64 + n_final as i64 - k_final as i64 - d_final as i64 + 1
        - locality_groups(k_final, k_i, r) * (delta as i64 - 1)
}

/// Lower bound on reads from one initial code when `unchanged_not_read`
/// of its unchanged symbols are not read.
pub fn read_lower(
    k: usize,
    unchanged_not_read: usize,
    d_final: usize,
    n_initial: usize,
    r: usize,
    delta: usize,
) -> i64 {
    let dlt = unchanged_not_read as i64 - d_final as i64 + 1;
    read_floor(k, dlt, d_final, n_initial, r, delta)
}

fn read_floor(k: usize, dlt: i64, d_final: usize, n_initial: usize, r: usize, delta: usize) -> i64 {
    if dlt > 0 && d_final + k <= n_initial + 1 {
        k as i64 - dlt + (delta as i64 - 1) * (dlt / (r + delta - 1) as i64)
    } else {
        k as i64
    }
}

/// Write and read lower bounds for a general merge.
pub fn total_lower(p: &MergeParams) -> Result<BoundReport, BoundsError> {
    p.validate()?;
    let (t, nf, kf, df) = (p.t() as i64, p.n_final as i64, p.k_final as i64, p.d_final as i64);
    let (r, delta) = (p.locality(), p.delta);
    let dm1 = delta as i64 - 1;
    let groups: i64 = p.initial.iter().map(|d| locality_groups(p.k_final, d.k, r)).sum();
    let min_write = -(t - 1) * nf + (t - 1) * kf + t * df - t + groups * dm1;

    let mut per_initial = Vec::with_capacity(p.t());
    for d in &p.initial {
        let ceiling = unchanged_upper(d.k, p.n_final, p.k_final, p.d_final, r, delta);
        let delta_tilde = ceiling - df + 1;
        let floor = read_floor(d.k, delta_tilde, p.d_final, d.n, r, delta);
        per_initial.push(PerInitialBound { delta_tilde, read_floor: floor, unchanged_ceiling: ceiling });
    }
    Ok(report(p, min_write, per_initial))
}

fn report(p: &MergeParams, min_write: i64, per_initial: Vec<PerInitialBound>) -> BoundReport {
    let min_read: i64 = per_initial.iter().map(|b| b.read_floor).sum();
    let default_read = p.k_final as i64;
    BoundReport {
        min_write,
        min_read,
        min_total: min_write + min_read,
        per_initial,
        default_read,
        default_read_optimal: min_read == default_read,
    }
}

/// Bounds for merging MDS codes into an MDS code, with `l = n - k`.
pub fn mds_merge_lower(p: &MergeParams) -> Result<BoundReport, BoundsError> {
    p.validate()?;
    let l_final = p.n_final - p.k_final;
    if p.d_final != l_final + 1 {
        return Err(BoundsError::Invalid("final code must be MDS".into()));
    }
    let per_initial = p
        .initial
        .iter()
        .map(|d| {
            let l_i = d.n - d.k;
            let floor = if l_final <= d.k.min(l_i) { l_final } else { d.k };
            PerInitialBound {
                delta_tilde: d.k as i64 - l_final as i64,
                read_floor: floor as i64,
                unchanged_ceiling: d.k as i64,
            }
        })
        .collect();
    Ok(report(p, l_final as i64, per_initial))
}

/// Bounds for merging into an optimal `(r, delta)`-LRC whose initial
/// dimensions are `r k_i`.
///
/// The read bound uses the closed form `r * min(k_i, l)` with
/// `l = n_F/(r + delta - 1) - sum k_i` when `r + delta - 1` divides `n_F`,
/// and the exact general expression otherwise.
pub fn rdel_lower(p: &MergeParams) -> Result<BoundReport, BoundsError> {
    p.validate()?;
    let (r, delta) = (p.locality(), p.delta);
    if p.initial.iter().any(|d| d.k % r != 0) {
        return Err(BoundsError::Invalid(format!("initial dimensions must be multiples of r = {r}")));
    }
    let opt = singleton_lrc_bound(p.n_final, p.k_final, r, delta)?;
    if p.d_final as i64 != opt {
        return Err(BoundsError::Invalid(format!("final distance {} is not the optimal {opt}", p.d_final)));
    }
    let general = total_lower(p)?;
    let blocks = r + delta - 1;
    let ksum = p.k_final / r;
    let min_write = p.n_final as i64 - (blocks * ksum) as i64;
    if !p.n_final.is_multiple_of(blocks) {
        return Ok(BoundReport { min_write, ..general });
    }
    let l = (p.n_final / blocks) as i64 - ksum as i64;
    let per_initial = p
        .initial
        .iter()
        .zip(general.per_initial)
        .map(|(d, b)| {
            let ki = (d.k / r) as i64;
            let floor = if ki > l && p.d_final + d.k <= d.n + 1 { r as i64 * l } else { r as i64 * ki };
            PerInitialBound { read_floor: floor, ..b }
        })
        .collect();
    Ok(report(p, min_write, per_initial))
}

/// Given a code with locality certificate and a coordinate set `s` of size
/// at least `big_delta`, returns `(A, T)` with `A ⊆ S ∩ T`,
/// `|S ∩ T| <= big_delta`, `|A| = (delta-1) floor(big_delta/(r+delta-1))`,
/// and `C|_T` generated by `C|_{T \ A}`.
pub fn lemma_at_construct(
    code: &LinearCode,
    cert: &LocalityCertificate,
    s: &[usize],
    big_delta: usize,
) -> Result<(Vec<usize>, Vec<usize>), BoundsError> {
    cert.validate(code.n())?;
    let mut sset: Vec<usize> = s.to_vec();
    sset.sort_unstable();
    sset.dedup();
    if sset.len() < big_delta {
        return Err(BoundsError::Invalid(format!("|S| = {} is below Delta = {big_delta}", sset.len())));
    }
    if let Some(&c) = sset.iter().find(|&&c| c >= code.n()) {
        return Err(BoundsError::Invalid(format!("coordinate {c} out of range")));
    }
    let dm1 = cert.delta - 1;
    let block = cert.r + dm1;
    let f = big_delta / block;
    let target = dm1 * f;

    // Q_j: first delta-1 elements of S_j not in earlier S_i.
    let mut seen: Vec<bool> = vec![false; code.n()];
    let mut q: Vec<Vec<usize>> = Vec::with_capacity(cert.groups.len());
    for g in &cert.groups {
        let mut sj: Vec<usize> = g.iter().copied().filter(|c| sset.binary_search(c).is_ok()).collect();
        sj.sort_unstable();
        let qj: Vec<usize> = sj.iter().copied().filter(|&c| !seen[c]).take(dm1).collect();
        for &c in &sj {
            seen[c] = true;
        }
        q.push(qj);
    }
    let full: Vec<usize> = (0..q.len()).filter(|&j| q[j].len() == dm1).collect();
    let partial: Vec<usize> = (0..q.len()).filter(|&j| q[j].len() < dm1 && !q[j].is_empty()).collect();

    let mut a: Vec<usize> = Vec::new();
    let mut t: Vec<usize> = Vec::new();
    if full.len() >= f {
        for &j in &full[..f] {
            a.extend(&q[j]);
            t.extend(&cert.groups[j]);
        }
    } else {
        for &j in &full {
            a.extend(&q[j]);
            t.extend(&cert.groups[j]);
        }
        for &j in &partial {
            let need = target - a.len();
            if need == 0 {
                break;
            }
            if q[j].len() <= need {
                a.extend(&q[j]);
                t.extend(&cert.groups[j]);
            } else {
                let part = &q[j][..need];
                a.extend(part);
                t.extend(cert.groups[j].iter().copied().filter(|c| !q[j].contains(c) || part.contains(c)));
            }
        }
        if a.len() != target {
            return Err(BoundsError::Invalid("certificate groups cannot supply enough recoverable symbols".into()));
        }
    }
    a.sort_unstable();
    a.dedup();
    t.sort_unstable();
    t.dedup();

    let st = t.iter().filter(|c| sset.binary_search(c).is_ok()).count();
    let t_minus_a: Vec<usize> = t.iter().copied().filter(|c| a.binary_search(c).is_err()).collect();
    if st > big_delta || code.restricted_dim(&t) != code.restricted_dim(&t_minus_a) {
        return Err(BoundsError::Invalid("constructed sets fail the lemma's postconditions".into()));
    }
    Ok((a, t))
}
