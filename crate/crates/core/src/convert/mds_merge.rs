use serde::{Deserialize, Serialize};
use serde_json::json;

use super::engine::{materialize, pole_shift, vanishing, AgInitial, AgLayout, Place};
use super::{Component, ConstructionKind, ConvertError, ConvertibleCode, Family};
use crate::bounds::{InitialDims, MergeParams};
use crate::field::FieldCtx;
use crate::pgl::{GroupTable, ProjPoint, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsMergeParams {
    pub k: usize,
    pub t: usize,
    pub l_prime: usize,
    /// Dimensions of the individual initial codes, each at most `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_initial_dims: Option<Vec<usize>>,
    /// Put the orbit of infinity in the redundancy block, using pole-order evaluation there.
    #[serde(default)]
    pub evaluate_at_pole: bool,
}

/// MDS merge from a group `g` of order `l`: `t` initial `[k_j + l', k_j]`
/// codes merge into a `[sum k_j + l, sum k_j]` code, reading `t * l` symbols
/// and writing `l`.
pub fn build_mds_merge(field: &FieldCtx, g: &GroupTable, p: &MdsMergeParams) -> Result<ConvertibleCode, ConvertError> {
    let invalid = |m: String| Err(ConvertError::Invalid(m));
    if g.field() != field {
        return invalid("group is defined over a different field".into());
    }
    let l = g.order();
    let q = field.q() as usize;
    let (k, t, lp) = (p.k, p.t, p.l_prime);
    if k == 0 || t == 0 {
        return invalid("k and t must be positive".into());
    }
    if t > l {
        return invalid(format!("t = {t} exceeds the group order {l}"));
    }
    if l > k || l > lp {
        return invalid(format!("need l <= min(k, l'), got l = {l}, k = {k}, l' = {lp}"));
    }
    if k + lp > q + 1 {
        return invalid(format!("k + l' = {} exceeds q + 1 = {}", k + lp, q + 1));
    }
    let dims = p.per_initial_dims.clone().unwrap_or_else(|| vec![k; t]);
    if dims.len() != t || dims.iter().any(|&d| d == 0 || d > k) {
        return invalid(format!("per-initial dimensions must be {t} values in 1..={k}"));
    }

    let split = g.split_structure();
    let inf_orbit = split.free_orbits.iter().position(|o| o.contains(&ProjPoint::Infinity));
    let (b_idx, rows): (usize, Vec<usize>) = if p.evaluate_at_pole {
        let b = inf_orbit.ok_or_else(|| ConvertError::Invalid("infinity is not in a free orbit".into()))?;
        let others: Vec<usize> = (0..split.free_orbits.len()).filter(|&i| i != b).collect();
        if others.len() < k {
            return Err(ConvertError::InsufficientOrbits { need: k + 1, have: others.len() + 1 });
        }
        (b, others[..k].to_vec())
    } else {
        let usable: Vec<usize> = (0..split.free_orbits.len()).filter(|&i| Some(i) != inf_orbit).collect();
        if usable.len() < k + 1 {
            return Err(ConvertError::InsufficientOrbits { need: k + 1, have: usable.len() });
        }
        (usable[0], usable[1..=k].to_vec())
    };
    let orbits = &split.free_orbits;
    let b_orbit = &orbits[b_idx];
    let reps: Vec<ProjPoint> = rows.iter().map(|&i| orbits[i][0]).collect();

    let mut taken: Vec<ProjPoint> = reps.iter().chain(b_orbit.iter()).copied().collect();
    taken.sort();
    let b_prime: Vec<ProjPoint> = field
        .elements()
        .map(ProjPoint::Finite)
        .filter(|pt| taken.binary_search(pt).is_err())
        .take(lp - l)
        .collect();
    if b_prime.len() < lp - l {
        return invalid(format!("not enough points for {} extra redundancy symbols", lp - l));
    }

    let sigmas: Vec<_> = g.elements()[..t].to_vec();
    let k_final: usize = dims.iter().sum();
    // Initial j keeps the last dims[j] rows.
    let used_rows = |j: usize| k - dims[j]..k;

    let mut final_places: Vec<Place> = Vec::new();
    let mut final_labels = Vec::new();
    let mut unchanged = Vec::new();
    let mut a_points: Vec<Vec<ProjPoint>> = Vec::new();
    for j in 0..t {
        let mut pts = Vec::new();
        for (c, row) in used_rows(j).enumerate() {
            let pt = orbits[rows[row]][j];
            unchanged.push((j, c, final_places.len()));
            final_places.push((pt, 0));
            final_labels.push(format!("i{}/{}", j + 1, reps[row]));
            pts.push(pt);
        }
        a_points.push(pts);
    }
    let budget_at = |pt: ProjPoint, b: usize| if pt == ProjPoint::Infinity { b as u32 } else { 0 };
    for &pt in b_orbit {
        final_places.push((pt, budget_at(pt, k_final - 1)));
        final_labels.push(format!("f/{pt}"));
    }

    let x = RationalFunction::x(field);
    let mut initials = Vec::with_capacity(t);
    for j in 0..t {
        let kj = dims[j];
        let pts: Vec<ProjPoint> = used_rows(j).map(|r| reps[r]).chain(b_orbit.iter().copied()).chain(b_prime.iter().copied()).collect();
        let places: Vec<Place> = pts.iter().map(|&pt| (pt, budget_at(pt, kj - 1))).collect();
        let labels = pts.iter().map(|pt| format!("i{}/{pt}", j + 1)).collect();
        let others: Vec<ProjPoint> = a_points.iter().enumerate().filter(|&(i, _)| i != j).flat_map(|(_, v)| v.iter().copied()).collect();
        let multiplier = pole_shift(field, &sigmas[j]).pow(kj - 1).mul(&vanishing(field, &others)?);
        initials.push(AgInitial {
            basis: (0..kj).map(|m| x.pow(m)).collect(),
            places,
            labels,
            sigma: sigmas[j].clone(),
            multiplier,
        });
    }

    let layout = AgLayout { initials, final_places, final_labels, unchanged };
    let out = materialize(field, &layout)?;
    let params = MergeParams {
        initial: dims.iter().map(|&d| InitialDims { n: d + lp, k: d }).collect(),
        n_final: k_final + l,
        k_final,
        d_final: l + 1,
        r: None,
        delta: 2,
    };
    let pts = |v: &[ProjPoint]| v.iter().map(|pt| pt.to_json()).collect::<Vec<_>>();
    let provenance = json!({
        "group": g.elements().iter().map(|s| s.to_values()).collect::<Vec<_>>(),
        "sigma": sigmas.iter().map(|s| s.to_values()).collect::<Vec<_>>(),
        "redundancy_orbit": pts(b_orbit),
        "information_orbits": rows.iter().map(|&i| pts(&orbits[i])).collect::<Vec<_>>(),
        "extra_points": pts(&b_prime),
        "evaluate_at_pole": p.evaluate_at_pole,
        "per_initial_dims": dims,
    });
    let cc = ConvertibleCode {
        kind: ConstructionKind::MdsMerge,
        initial: out.initial.into_iter().map(|code| Component { code, family: Family::Mds }).collect(),
        final_code: Component { code: out.final_code, family: Family::Mds },
        plan: out.plan,
        params,
        provenance,
    };
    cc.validate()?;
    Ok(cc)
}
