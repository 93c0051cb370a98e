use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::engine::{materialize, pole_shift, AgInitial, AgLayout, Place};
use super::{Component, ConstructionKind, ConvertError, ConvertibleCode, Family, LocalRecipe};
use crate::bounds::{InitialDims, MergeParams};
use crate::code::LocalityCertificate;
use crate::field::FieldCtx;
use crate::pgl::{fixed_field_generator, GroupTable, Mobius, ProjPoint, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrcMergeParams {
    pub k: usize,
    pub t: usize,
    pub l_prime: usize,
    #[serde(default = "default_delta")]
    pub delta: usize,
}

fn default_delta() -> usize {
    2
}

/// What a pair `H <= G` supports before any code is built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrcCensus {
    pub r: usize,
    pub delta: usize,
    /// Index `[G : H]`.
    pub l: usize,
    pub normal: bool,
    /// Free `G`-orbits not meeting the poles of the fixed-field generator.
    pub usable_orbits: usize,
    /// Largest `k` with enough orbits, or `None` when not even `k = 1` fits.
    pub max_k: Option<usize>,
    /// `r = 1`: every repair group is a repetition code.
    pub degenerate_locality: bool,
}

fn usable_orbits(g: &GroupTable) -> Vec<Vec<ProjPoint>> {
    g.split_structure()
        .free_orbits
        .into_iter()
        .filter(|o| !o.contains(&ProjPoint::Infinity))
        .collect()
}

pub fn lrc_census(g: &GroupTable, h: &GroupTable, delta: usize) -> Result<LrcCensus, ConvertError> {
    if !h.is_subgroup_of(g) {
        return Err(crate::pgl::GroupError::NotSubgroup.into());
    }
    if delta < 2 || h.order() < delta {
        return Err(ConvertError::Invalid(format!("need 2 <= delta <= |H| = {}, got {delta}", h.order())));
    }
    let usable = usable_orbits(g).len();
    let r = h.order() + 1 - delta;
    Ok(LrcCensus {
        r,
        delta,
        l: g.order() / h.order(),
        normal: h.is_normal_in(g),
        usable_orbits: usable,
        max_k: usable.checked_sub(1).filter(|&k| k > 0),
        degenerate_locality: r == 1,
    })
}

/// `(r, delta)`-LRC merge from `H <= G`: `t` initial
/// `[(k + l')(r + delta - 1), k r]` codes merge into a
/// `[(k t + l)(r + delta - 1), k t r]` code, where `l = [G : H]`.
pub fn build_lrc_merge(
    field: &FieldCtx,
    g: &GroupTable,
    h: &GroupTable,
    p: &LrcMergeParams,
) -> Result<ConvertibleCode, ConvertError> {
    let invalid = |m: String| Err(ConvertError::Invalid(m));
    if g.field() != field || h.field() != field {
        return invalid("groups are defined over a different field".into());
    }
    let census = lrc_census(g, h, p.delta)?;
    if !census.normal {
        return invalid("H must be normal in G".into());
    }
    let (k, t, lp, delta) = (p.k, p.t, p.l_prime, p.delta);
    let (r, l) = (census.r, census.l);
    let blk = h.order();
    let q = field.q() as usize;
    if k == 0 || t == 0 {
        return invalid("k and t must be positive".into());
    }
    if t > l {
        return invalid(format!("t = {t} exceeds the index l = {l}"));
    }
    if l > k || l > lp {
        return invalid(format!("need l <= min(k, l'), got l = {l}, k = {k}, l' = {lp}"));
    }
    if (k + lp) * blk + 2 * blk > q + 3 {
        return invalid(format!("(k + l')(r + delta - 1) = {} exceeds q + 3 - 2(r + delta - 1)", (k + lp) * blk));
    }
    let orbits = usable_orbits(g);
    if orbits.len() < k + 1 {
        return Err(ConvertError::InsufficientOrbits { need: k + 1, have: orbits.len() });
    }

    let z = fixed_field_generator(h)?;
    let pole_locus: BTreeSet<ProjPoint> = h.orbit(ProjPoint::Infinity).into_iter().collect();
    let support = z.divisor_support()?;
    let poles: BTreeSet<ProjPoint> = support.rational.iter().filter(|(_, &v)| v < 0).map(|(&pt, _)| pt).collect();
    if poles != pole_locus {
        return Err(ConvertError::Construction("fixed-field generator has unexpected poles".into()));
    }

    let sigmas: Vec<Mobius> = g.left_coset_reps(h)?;
    // block(o, j) = sigma_j(H . rep_o), listed in H order.
    let block = |o: &[ProjPoint], j: usize| -> Vec<ProjPoint> {
        h.elements().iter().map(|s| sigmas[j].place_image(s.place_image(o[0]))).collect()
    };
    let b_orbit = &orbits[0];
    let rows = &orbits[1..=k];
    let mut spare: Vec<Vec<ProjPoint>> = orbits[k + 1..].iter().flat_map(|o| (0..l).map(|j| block(o, j))).collect();
    spare.extend(rows.iter().flat_map(|o| (1..l).map(|j| block(o, j))));
    if spare.len() < lp - l {
        return invalid(format!("not enough spare blocks for l' - l = {}", lp - l));
    }
    let b_prime = &spare[..lp - l];

    let z_at = |pt: ProjPoint| z.eval(pt, 0);
    let mut final_places: Vec<Place> = Vec::new();
    let mut final_labels = Vec::new();
    let mut unchanged = Vec::new();
    let mut a_points: Vec<Vec<ProjPoint>> = Vec::new();
    for j in 0..t {
        let mut pts = Vec::new();
        let mut c = 0;
        for o in rows {
            for (pt, base) in block(o, j).into_iter().zip(block(o, 0)) {
                unchanged.push((j, c, final_places.len()));
                final_places.push((pt, 0));
                final_labels.push(format!("i{}/{base}", j + 1));
                pts.push(pt);
                c += 1;
            }
        }
        a_points.push(pts);
    }
    let b_blocks: Vec<Vec<ProjPoint>> = (0..l).map(|j| block(b_orbit, j)).collect();
    for pt in b_blocks.iter().flatten() {
        final_places.push((*pt, 0));
        final_labels.push(format!("f/{pt}"));
    }

    let x = RationalFunction::x(field);
    let basis: Vec<RationalFunction> = (0..k).flat_map(|b| (0..r).map(move |a| (a, b))).map(|(a, b)| x.pow(a).mul(&z.pow(b))).collect();
    let initial_points: Vec<ProjPoint> = rows
        .iter()
        .map(|o| block(o, 0))
        .chain(b_blocks.iter().cloned())
        .chain(b_prime.iter().cloned())
        .flatten()
        .collect();
    let mut initials = Vec::with_capacity(t);
    for j in 0..t {
        let mut zvals = BTreeSet::new();
        for (i, pts) in a_points.iter().enumerate() {
            if i != j {
                for &pt in pts {
                    zvals.insert(z_at(pt)?.value());
                }
            }
        }
        let mut hz = RationalFunction::one(field);
        for v in zvals {
            let c = RationalFunction::constant(field, field.elem(v as i64)?);
            hz = hz.mul(&z.sub(&c));
        }
        let image_inf = sigmas[j].place_image(ProjPoint::Infinity);
        let g2 = if pole_locus.contains(&image_inf) {
            RationalFunction::one(field)
        } else {
            z.sub(&RationalFunction::constant(field, z_at(image_inf)?))
        };
        let multiplier = pole_shift(field, &sigmas[j]).pow(r - 1).mul(&g2.pow(k - 1)).mul(&hz);
        initials.push(AgInitial {
            basis: basis.clone(),
            places: initial_points.iter().map(|&pt| (pt, 0)).collect(),
            labels: initial_points.iter().map(|pt| format!("i{}/{pt}", j + 1)).collect(),
            sigma: sigmas[j].clone(),
            multiplier,
        });
    }

    let layout = AgLayout { initials, final_places, final_labels, unchanged };
    let mut out = materialize(field, &layout)?;

    let n_i = (k + lp) * blk;
    let groups = |n: usize| (0..n / blk).map(|b| (b * blk..(b + 1) * blk).collect()).collect();
    let init_cert = LocalityCertificate { r, delta, groups: groups(n_i) };
    let n_f = (k * t + l) * blk;
    let final_cert = LocalityCertificate { r, delta, groups: groups(n_f) };

    // Read the first r symbols of each redundancy block and rebuild the rest locally.
    let b_start = k * blk;
    for (j, code) in out.initial.iter().enumerate() {
        let gen = code.generator();
        for b in 0..l {
            let start = b_start + b * blk;
            let src: Vec<usize> = (start..start + r).collect();
            let sub = gen.select_columns(&src);
            for target in start + r..start + blk {
                let coeffs = sub
                    .solve(&gen.column(target))?
                    .ok_or_else(|| ConvertError::Construction(format!("block of initial {j} is not locally repairable")))?;
                let sources = src.iter().copied().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect();
                out.plan.recipes.push(LocalRecipe { initial: j, target, sources });
            }
        }
    }

    let params = MergeParams {
        initial: vec![InitialDims { n: n_i, k: k * r }; t],
        n_final: n_f,
        k_final: k * t * r,
        d_final: l * blk + delta,
        r: Some(r),
        delta,
    };
    let pts = |v: &[ProjPoint]| v.iter().map(|pt| pt.to_json()).collect::<Vec<_>>();
    let provenance = json!({
        "group": g.elements().iter().map(|s| s.to_values()).collect::<Vec<_>>(),
        "subgroup": h.elements().iter().map(|s| s.to_values()).collect::<Vec<_>>(),
        "sigma": sigmas.iter().map(|s| s.to_values()).collect::<Vec<_>>(),
        "z": { "num": z.num().coeffs().iter().map(|c| c.value()).collect::<Vec<_>>(),
               "den": z.den().coeffs().iter().map(|c| c.value()).collect::<Vec<_>>() },
        "redundancy_orbit": pts(b_orbit),
        "information_orbits": rows.iter().map(|o| pts(o)).collect::<Vec<_>>(),
        "extra_blocks": b_prime.iter().map(|b| pts(b)).collect::<Vec<_>>(),
        "degenerate_locality": census.degenerate_locality,
    });
    let cc = ConvertibleCode {
        kind: ConstructionKind::LrcMerge,
        initial: out
            .initial
            .into_iter()
            .map(|code| Component { code, family: Family::Lrc { cert: init_cert.clone() } })
            .collect(),
        final_code: Component { code: out.final_code, family: Family::Lrc { cert: final_cert } },
        plan: out.plan,
        params,
        provenance,
    };
    cc.validate()?;
    Ok(cc)
}
