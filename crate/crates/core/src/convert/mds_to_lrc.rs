use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    Component, ConstructionKind, ConversionPlan, ConvertError, ConvertibleCode, Family, Term, UnchangedPair,
    WrittenSymbol,
};
use crate::bounds::{InitialDims, MergeParams};
use crate::code::{LinearCode, LocalityCertificate};
use crate::field::{FieldCtx, FieldElem};
use crate::grs::{grs_code, grs_dual_prescribed, GrsSpec};
use crate::matrix::MatQ;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsToLrcParams {
    /// Initial codes per repair group.
    pub s: usize,
    /// Extra information symbols per repair group, so `r = s k_I + a`.
    pub a: usize,
    /// Number of repair groups.
    pub t_prime: usize,
    pub delta: usize,
    pub k_i: usize,
    /// Lengths of the `s t'` initial codes.
    pub n_i: Vec<usize>,
}

impl MdsToLrcParams {
    pub fn t(&self) -> usize {
        self.s * self.t_prime
    }

    pub fn r(&self) -> usize {
        self.s * self.k_i + self.a
    }

    pub fn d_final(&self) -> usize {
        self.a * self.t_prime + self.delta
    }

    pub fn n_final(&self) -> usize {
        self.t_prime * (self.r() + self.delta - 1)
    }

    fn validate(&self, q: usize) -> Result<(), ConvertError> {
        let bad = |m: String| Err(ConvertError::Invalid(m));
        if self.s < 2 || self.a < 1 || self.t_prime < 1 || self.delta < 2 {
            return bad("need s >= 2, a >= 1, t' >= 1, delta >= 2".into());
        }
        if self.k_i < self.delta + self.a * self.t_prime {
            return bad(format!("a t' = {} exceeds k_I - delta", self.a * self.t_prime));
        }
        if self.t_prime * (self.s * self.k_i + self.a) + self.delta - 1 > q {
            return bad("not enough field elements for the final locators".into());
        }
        if self.n_i.len() != self.t() {
            return bad(format!("expected {} initial lengths, got {}", self.t(), self.n_i.len()));
        }
        let lo = self.k_i + self.d_final() - 1;
        if let Some(n) = self.n_i.iter().find(|&&n| n < lo || n > q) {
            return bad(format!("initial length {n} outside {lo}..={q}"));
        }
        Ok(())
    }
}

/// Merges `s t'` MDS codes into an `(r, delta)`-LRC with `t'` repair groups,
/// keeping every information symbol in place and reading `d_F - 1` symbols
/// from each initial code.
pub fn build_mds_to_lrc(field: &FieldCtx, p: &MdsToLrcParams) -> Result<ConvertibleCode, ConvertError> {
    let q = field.q() as usize;
    p.validate(q)?;
    let (s, a, tp, delta, ki) = (p.s, p.a, p.t_prime, p.delta, p.k_i);
    let t = p.t();
    let r = p.r();
    let d_f = p.d_final();
    let blk = r + delta - 1;
    let el = |i: usize| field.elem(i as i64).expect("index below q");

    let alpha = |i: usize, j: usize| el(i * ki + j);
    let beta = |ip: usize, jp: usize| el(t * ki + ip * a + jp);
    let gamma = |m: usize| el(t * ki + tp * a + m);

    // Final coordinates: per block, the alphas of its s initial codes, then betas, then gammas.
    let mut locators = Vec::with_capacity(p.n_final());
    let mut labels = Vec::with_capacity(p.n_final());
    let mut u_coord = vec![vec![0usize; ki]; t];
    let mut w_coords = Vec::new();
    for ip in 0..tp {
        for u in 0..s {
            let i = ip * s + u;
            for j in 0..ki {
                u_coord[i][j] = locators.len();
                locators.push(alpha(i, j));
                labels.push(format!("i{}/a{j}", i + 1));
            }
        }
        for jp in 0..a {
            w_coords.push(locators.len());
            locators.push(beta(ip, jp));
            labels.push(format!("f/b{ip}.{jp}"));
        }
        for m in 0..delta - 1 {
            w_coords.push(locators.len());
            locators.push(gamma(m));
            labels.push(format!("f/g{ip}.{m}"));
        }
    }
    let n_f = locators.len();

    // Local rows: powers 0..delta-2 on each block. Global rows: powers delta-1..a t'+delta-2.
    let global = a * tp;
    let rows_f = tp * (delta - 1) + global;
    let mut hf = MatQ::zeros(field, rows_f, n_f);
    for c in 0..n_f {
        let b = c / blk;
        let x = locators[c];
        for e in 0..delta - 1 {
            hf.set(b * (delta - 1) + e, c, field.pow(x, e as i64)?);
        }
        for e in 0..global {
            hf.set(tp * (delta - 1) + e, c, field.pow(x, (delta - 1 + e) as i64)?);
        }
    }
    let final_code = LinearCode::from_parity(hf.clone(), Some(labels))?;
    let hw_t = hf.select_columns(&w_coords).transpose();
    let hw_t_inv = hw_t.invert().map_err(|_| ConvertError::Construction("parity restricted to W is singular".into()))?;

    let mut initial = Vec::with_capacity(t);
    let mut fused = Vec::with_capacity(t);
    for i in 0..t {
        let alphas: Vec<FieldElem> = (0..ki).map(|j| alpha(i, j)).collect();
        let xi: Vec<FieldElem> = field.elements().filter(|e| !alphas.contains(e)).take(p.n_i[i] - ki).collect();
        let prescribed: Vec<FieldElem> = alphas.iter().chain(&xi[..d_f - 1]).copied().collect();
        let gamma_idx: Vec<usize> = (0..ki).collect();
        let mut v = grs_dual_prescribed(field, &prescribed, ki, &gamma_idx)?;
        v.resize(p.n_i[i], field.one());
        let locs: Vec<FieldElem> = alphas.iter().chain(&xi).copied().collect();
        let labels = (0..ki)
            .map(|j| format!("i{}/a{j}", i + 1))
            .chain((0..xi.len()).map(|m| format!("i{}/x{m}", i + 1)))
            .collect();
        initial.push(grs_code(field, &GrsSpec { locators: locs, multipliers: v, k: ki }, Some(labels))?);

        // Row m of the punctured parity maps to the local row of block i / s, or a global row.
        let hbar = MatQ::vandermonde(field, d_f - 1, &prescribed, None)?;
        let mut embed = MatQ::zeros(field, d_f - 1, rows_f);
        for m in 0..d_f - 1 {
            let row = if m < delta - 1 { (i / s) * (delta - 1) + m } else { tp * (delta - 1) + m - (delta - 1) };
            embed.set(m, row, field.one());
        }
        let r_cols: Vec<usize> = (ki..ki + d_f - 1).collect();
        let phi = hbar.select_columns(&r_cols).transpose().mul(&embed)?.mul(&hw_t_inv)?;
        fused.push(phi);
    }

    let mut written: Vec<WrittenSymbol> = w_coords.iter().map(|&c| WrittenSymbol { final_coord: c, terms: Vec::new() }).collect();
    for (i, phi) in fused.iter().enumerate() {
        for m in 0..d_f - 1 {
            for (w, sym) in written.iter_mut().enumerate() {
                let coeff = phi.get(m, w);
                if !coeff.is_zero() {
                    sym.terms.push(Term { initial: i, coord: ki + m, coeff });
                }
            }
        }
    }
    for sym in written.iter_mut() {
        sym.terms.sort_by_key(|term| (term.initial, term.coord));
    }
    let unchanged = (0..t)
        .map(|i| (0..ki).map(|j| UnchangedPair { initial_coord: j, final_coord: u_coord[i][j] }).collect())
        .collect();
    let plan = ConversionPlan { unchanged, written, recipes: Vec::new() };

    let cert = LocalityCertificate { r, delta, groups: (0..tp).map(|b| (b * blk..(b + 1) * blk).collect()).collect() };
    let params = MergeParams {
        initial: p.n_i.iter().map(|&n| InitialDims { n, k: ki }).collect(),
        n_final: n_f,
        k_final: t * ki,
        d_final: d_f,
        r: Some(r),
        delta,
    };
    let vals = |v: &[FieldElem]| v.iter().map(|e| e.value()).collect::<Vec<_>>();
    let provenance = json!({
        "final_locators": vals(&locators),
        "written_coords": w_coords,
        "parity_w_transpose_inverse": hw_t_inv.to_values(),
        "fused": fused.iter().map(|m| m.to_values()).collect::<Vec<_>>(),
    });
    let cc = ConvertibleCode {
        kind: ConstructionKind::MdsToLrc,
        initial: initial.into_iter().map(|code| Component { code, family: Family::Mds }).collect(),
        final_code: Component { code: final_code, family: Family::Lrc { cert } },
        plan,
        params,
        provenance,
    };
    cc.validate()?;
    Ok(cc)
}
