use serde::{Deserialize, Serialize};

use super::{ConvertError, ConvertibleCode};
use crate::field::FieldElem;

/// Every symbol touched by a conversion, in access order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AccessTrace {
    /// `(initial, coordinate)` pairs fetched from storage.
    pub reads: Vec<(usize, usize)>,
    /// Final coordinates written.
    pub writes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessReport {
    /// Symbols fetched from storage.
    pub read_cost: usize,
    pub write_cost: usize,
    /// Sum over written symbols of the initial symbols each one combines.
    pub per_symbol_read: usize,
    /// Distinct initial symbols used by written symbols, before local reconstruction.
    pub used_symbols: usize,
    pub unchanged: Vec<usize>,
    pub trace: AccessTrace,
}

impl AccessReport {
    pub fn of(cc: &ConvertibleCode) -> Self {
        let t = cc.t();
        let stored = cc.plan.storage_reads(t);
        let reads: Vec<(usize, usize)> = stored.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&c| (i, c))).collect();
        let writes = cc.plan.written_coords();
        AccessReport {
            read_cost: reads.len(),
            write_cost: writes.len(),
            per_symbol_read: cc.plan.written.iter().map(|w| w.terms.len()).sum(),
            used_symbols: cc.plan.read_sets(t).iter().map(Vec::len).sum(),
            unchanged: cc.plan.unchanged.iter().map(Vec::len).collect(),
            trace: AccessTrace { reads, writes },
        }
    }
}

/// Final word produced by the plan, without membership checks.
pub(crate) fn apply_plan(cc: &ConvertibleCode, words: &[Vec<FieldElem>]) -> Vec<FieldElem> {
    let f = cc.field();
    let mut used: Vec<Vec<FieldElem>> = words.to_vec();
    for rec in &cc.plan.recipes {
        let w = &words[rec.initial];
        used[rec.initial][rec.target] = rec.sources.iter().fold(f.zero(), |acc, &(c, a)| f.add(acc, f.mul(a, w[c])));
    }
    let mut out = vec![f.zero(); cc.final_code.code.n()];
    for (i, pairs) in cc.plan.unchanged.iter().enumerate() {
        for p in pairs {
            out[p.final_coord] = words[i][p.initial_coord];
        }
    }
    for w in &cc.plan.written {
        out[w.final_coord] = w.terms.iter().fold(f.zero(), |acc, t| f.add(acc, f.mul(t.coeff, used[t.initial][t.coord])));
    }
    out
}

/// Converts one codeword per initial code into a codeword of the final code.
pub fn execute(cc: &ConvertibleCode, codewords: &[Vec<FieldElem>]) -> Result<(Vec<FieldElem>, AccessReport), ConvertError> {
    if codewords.len() != cc.t() {
        return Err(ConvertError::PlanMismatch(format!("expected {} codewords, got {}", cc.t(), codewords.len())));
    }
    for (i, (w, comp)) in codewords.iter().zip(&cc.initial).enumerate() {
        if w.len() != comp.code.n() {
            return Err(ConvertError::PlanMismatch(format!("codeword {i} has length {}, expected {}", w.len(), comp.code.n())));
        }
        if !comp.code.is_codeword(w)? {
            return Err(ConvertError::NotACodeword(i));
        }
    }
    let out = apply_plan(cc, codewords);
    if !cc.final_code.code.is_codeword(&out)? {
        return Err(ConvertError::FinalMembership);
    }
    Ok((out, AccessReport::of(cc)))
}
