//! Turns function-field data (bases, places, automorphisms, multipliers) into
//! explicit generator matrices and a conversion plan.

use std::collections::HashMap;

use super::{ConversionPlan, ConvertError, Term, UnchangedPair, WrittenSymbol};
use crate::code::LinearCode;
use crate::field::{FieldCtx, FieldElem};
use crate::matrix::MatQ;
use crate::pgl::{Mobius, ProjPoint, RationalFunction};
use crate::poly::Poly;

/// An evaluation point together with the pole order allowed there.
pub(crate) type Place = (ProjPoint, u32);

pub(crate) struct AgInitial {
    pub basis: Vec<RationalFunction>,
    pub places: Vec<Place>,
    pub labels: Vec<String>,
    pub sigma: Mobius,
    pub multiplier: RationalFunction,
}

pub(crate) struct AgLayout {
    pub initials: Vec<AgInitial>,
    pub final_places: Vec<Place>,
    pub final_labels: Vec<String>,
    /// `(initial, initial coordinate, final coordinate)` for every unchanged symbol.
    pub unchanged: Vec<(usize, usize, usize)>,
}

pub(crate) struct AgOutput {
    pub initial: Vec<LinearCode>,
    pub final_code: LinearCode,
    pub plan: ConversionPlan,
}

fn evaluate(field: &FieldCtx, funcs: &[RationalFunction], places: &[Place]) -> Result<MatQ, ConvertError> {
    let mut m = MatQ::zeros(field, funcs.len(), places.len());
    for (i, f) in funcs.iter().enumerate() {
        for (j, &(p, budget)) in places.iter().enumerate() {
            m.set(i, j, f.eval(p, budget)?);
        }
    }
    Ok(m)
}

/// Scalar `lambda` with `col = lambda * base`, if one exists.
fn proportion(field: &FieldCtx, col: &[FieldElem], base: &[FieldElem]) -> Option<FieldElem> {
    let i = base.iter().position(|b| !b.is_zero())?;
    let lambda = field.div(col[i], base[i]).ok()?;
    col.iter().zip(base).all(|(&c, &b)| c == field.mul(lambda, b)).then_some(lambda)
}

pub(crate) fn materialize(field: &FieldCtx, layout: &AgLayout) -> Result<AgOutput, ConvertError> {
    let t = layout.initials.len();
    let mut initial = Vec::with_capacity(t);
    for (j, ini) in layout.initials.iter().enumerate() {
        let g = evaluate(field, &ini.basis, &ini.places)?;
        let code = LinearCode::from_generator(g, Some(ini.labels.clone()))
            .map_err(|e| ConvertError::Construction(format!("initial code {j}: {e}")))?;
        initial.push(code);
    }

    let mut final_funcs = Vec::new();
    let mut offsets = Vec::with_capacity(t);
    for ini in &layout.initials {
        offsets.push(final_funcs.len());
        for b in &ini.basis {
            final_funcs.push(ini.multiplier.mul(&b.apply(&ini.sigma)?));
        }
    }
    let mut raw = evaluate(field, &final_funcs, &layout.final_places)?;
    let nf = layout.final_places.len();
    let block = |m: &MatQ, j: usize, col: usize| -> Vec<FieldElem> {
        (offsets[j]..offsets[j] + initial[j].k()).map(|r| m.get(r, col)).collect()
    };

    let mut unchanged_at: HashMap<usize, (usize, usize)> = HashMap::new();
    for &(j, c, f) in &layout.unchanged {
        unchanged_at.insert(f, (j, c));
    }
    let place_index: Vec<HashMap<ProjPoint, usize>> = layout
        .initials
        .iter()
        .map(|ini| ini.places.iter().enumerate().map(|(i, &(p, _))| (p, i)).collect())
        .collect();

    let mut unchanged = vec![Vec::new(); t];
    let mut written = Vec::new();
    for f in 0..nf {
        if let Some(&(j, c)) = unchanged_at.get(&f) {
            let base = initial[j].generator().column(c);
            let lambda = proportion(field, &block(&raw, j, f), &base)
                .filter(|l| !l.is_zero())
                .ok_or_else(|| ConvertError::Construction(format!("final column {f} is not a copy of initial {j}")))?;
            if (0..t).any(|i| i != j && block(&raw, i, f).iter().any(|v| !v.is_zero())) {
                return Err(ConvertError::Construction(format!("final column {f} mixes initial codes")));
            }
            let u = field.inv(lambda)?;
            for r in 0..raw.rows() {
                raw.set(r, f, field.mul(u, raw.get(r, f)));
            }
            unchanged[j].push(UnchangedPair { initial_coord: c, final_coord: f });
            continue;
        }
        let p = layout.final_places[f].0;
        let mut terms = Vec::new();
        for (j, ini) in layout.initials.iter().enumerate() {
            let col = block(&raw, j, f);
            if col.iter().all(|v| v.is_zero()) {
                continue;
            }
            let src = ini.sigma.inverse().place_image(p);
            let c = *place_index[j]
                .get(&src)
                .ok_or_else(|| ConvertError::Construction(format!("place {src} missing from initial {j}")))?;
            let mu = proportion(field, &col, &initial[j].generator().column(c))
                .ok_or_else(|| ConvertError::Construction(format!("final column {f} is not a multiple of initial {j} column {c}")))?;
            terms.push(Term { initial: j, coord: c, coeff: mu });
        }
        written.push(WrittenSymbol { final_coord: f, terms });
    }

    let final_code = LinearCode::from_generator(raw, Some(layout.final_labels.clone()))
        .map_err(|e| ConvertError::Construction(format!("final code: {e}")))?;
    Ok(AgOutput { initial, final_code, plan: ConversionPlan { unchanged, written, recipes: Vec::new() } })
}

/// `prod (x - a)` over the finite points, as a rational function.
pub(crate) fn vanishing(field: &FieldCtx, points: &[ProjPoint]) -> Result<RationalFunction, ConvertError> {
    let mut acc = RationalFunction::one(field);
    for p in points {
        let a = p
            .finite()
            .ok_or_else(|| ConvertError::Construction("multiplier would vanish at infinity".into()))?;
        acc = acc.mul(&RationalFunction::from_poly(Poly::linear(field, a)));
    }
    Ok(acc)
}

/// `x - sigma(inf)` when `sigma(inf)` is finite, else 1.
pub(crate) fn pole_shift(field: &FieldCtx, sigma: &Mobius) -> RationalFunction {
    match sigma.place_image(ProjPoint::Infinity) {
        ProjPoint::Finite(b) => RationalFunction::from_poly(Poly::linear(field, b)),
        ProjPoint::Infinity => RationalFunction::one(field),
    }
}
