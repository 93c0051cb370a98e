use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::execute::apply_plan;
use super::{AccessReport, Component, ConvertError, ConvertibleCode, Family};
use crate::bounds::{total_lower, BoundReport};
use crate::field::FieldElem;
use crate::matrix::MatQ;

pub const RANDOM_TRIALS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub role: String,
    pub family: String,
    /// `None` when the distance check ran out of budget.
    pub optimal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Rank of the map from all messages to final codewords.
    pub message_rank: usize,
    pub bijective: bool,
    pub trials: usize,
    pub unchanged_identity: bool,
    pub membership: bool,
    pub components: Vec<ComponentCheck>,
    pub access: AccessReport,
    pub bounds: BoundReport,
    pub write_meets_floor: bool,
    pub read_meets_floor: bool,
    pub access_optimal: bool,
    pub default_read: usize,
    pub default_write: usize,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_component(role: String, c: &Component) -> ComponentCheck {
    let (family, result) = match &c.family {
        Family::Mds => ("mds".to_string(), c.code.is_mds()),
        Family::Lrc { cert } => (format!("lrc(r={}, delta={})", cert.r, cert.delta), c.code.is_optimal_lrc(cert)),
    };
    match result {
        Ok(b) => ComponentCheck { role, family, optimal: Some(b), note: None },
        Err(e) => ComponentCheck { role, family, optimal: None, note: Some(e.to_string()) },
    }
}

/// Checks a convertible code end to end. Failed checks are collected in the
/// report; only malformed input returns an error.
pub fn verify_convertible(cc: &ConvertibleCode, seed: u64) -> Result<VerificationReport, ConvertError> {
    cc.validate()?;
    let f = cc.field();
    let t = cc.t();
    let mut failures = Vec::new();
    let mut membership = true;

    let zero_words: Vec<Vec<FieldElem>> = cc.initial.iter().map(|c| vec![f.zero(); c.code.n()]).collect();
    let k_final = cc.final_code.code.k();
    let mut images = MatQ::zeros(f, k_final, cc.final_code.code.n());
    let mut row = 0;
    for (i, comp) in cc.initial.iter().enumerate() {
        for m in 0..comp.code.k() {
            let mut words = zero_words.clone();
            words[i] = comp.code.generator().row(m);
            let out = apply_plan(cc, &words);
            membership &= cc.final_code.code.is_codeword(&out)?;
            for (c, v) in out.into_iter().enumerate() {
                images.set(row, c, v);
            }
            row += 1;
        }
    }
    let message_rank = images.rank();
    let bijective = message_rank == k_final;
    if !bijective {
        failures.push(format!("message map has rank {message_rank}, expected {k_final}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = f.q() as i64;
    let mut unchanged_identity = true;
    for _ in 0..RANDOM_TRIALS {
        let mut words = Vec::with_capacity(t);
        for comp in &cc.initial {
            let msg: Vec<FieldElem> = (0..comp.code.k()).map(|_| f.elem(rng.gen_range(0..q)).unwrap()).collect();
            words.push(comp.code.encode(&msg)?);
        }
        let out = apply_plan(cc, &words);
        membership &= cc.final_code.code.is_codeword(&out)?;
        for (i, pairs) in cc.plan.unchanged.iter().enumerate() {
            unchanged_identity &= pairs.iter().all(|p| out[p.final_coord] == words[i][p.initial_coord]);
        }
    }
    if !membership {
        failures.push("converted words fail the final parity check".into());
    }
    if !unchanged_identity {
        failures.push("unchanged symbols differ from their initial values".into());
    }

    let mut components: Vec<ComponentCheck> =
        cc.initial.iter().enumerate().map(|(i, c)| check_component(format!("initial {}", i + 1), c)).collect();
    components.push(check_component("final".into(), &cc.final_code));
    for c in &components {
        match c.optimal {
            Some(true) => {}
            Some(false) => failures.push(format!("{} code is not an optimal {}", c.role, c.family)),
            None => failures.push(format!("{} code: {}", c.role, c.note.as_deref().unwrap_or("check infeasible"))),
        }
    }

    let access = AccessReport::of(cc);
    let bounds = total_lower(&cc.params)?;
    let write_meets_floor = access.write_cost as i64 == bounds.min_write;
    let read_meets_floor = access.read_cost as i64 == bounds.min_read;
    if (access.write_cost as i64) < bounds.min_write || (access.read_cost as i64) < bounds.min_read {
        failures.push("measured cost is below a proven lower bound".into());
    }
    let unchanged_total: usize = access.unchanged.iter().sum();
    let access_optimal = failures.is_empty() && write_meets_floor && read_meets_floor;
    Ok(VerificationReport {
        message_rank,
        bijective,
        trials: RANDOM_TRIALS,
        unchanged_identity,
        membership,
        components,
        access,
        bounds,
        write_meets_floor,
        read_meets_floor,
        access_optimal,
        default_read: k_final,
        default_write: cc.final_code.code.n() - unchanged_total,
        failures,
    })
}
