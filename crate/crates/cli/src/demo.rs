//! End-to-end reproduction of the GF(23) MDS merge example.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use mergeconv::convert::{build_mds_merge, execute, verify_convertible, MdsMergeParams};
use mergeconv::field::FieldCtx;
use mergeconv::pgl::{fixed_field_generator, singer_generator, subgroup_cyclic_qplus1, Mobius, ProjPoint};

use crate::CliError;

/// Orbits of the order-4 group, as recorded; `-1` stands for infinity.
pub const RECORDED_ORBITS: [[i64; 4]; 6] = [
    [-1, 9, 14, 19],
    [20, 5, 6, 4],
    [2, 16, 18, 13],
    [21, 7, 17, 11],
    [12, 3, 15, 10],
    [0, 8, 1, 22],
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub item: &'static str,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub checks: Vec<Check>,
    /// Items whose actual value differs from the recorded one.
    pub diff: Vec<&'static str>,
}

fn orbit_sets(orbits: &[Vec<ProjPoint>]) -> BTreeSet<BTreeSet<i64>> {
    orbits
        .iter()
        .map(|o| o.iter().map(|p| p.finite().map_or(-1, |a| a.value() as i64)).collect())
        .collect()
}

pub fn mdsexa(seed: u64) -> Result<DemoReport, CliError> {
    let err = |e: &dyn std::fmt::Display| CliError::Validation(e.to_string());
    let f = FieldCtx::prime(23).map_err(|e| err(&e))?;
    let (a, b) = (f.from_int(-2), f.from_int(5));
    let mut checks = Vec::new();
    let mut check = |item, expected: Value, actual: Value| checks.push(Check { item, expected, actual });

    check("quadratic x^2-2x+5 is primitive", json!(true), json!(f.primitive_quadratic_check(a, b)));
    let eta = singer_generator(&f, Some((a, b))).map_err(|e| err(&e))?;
    check("order of eta", json!(24), json!(eta.order()));
    let eta6 = Mobius::from_values(&f, [[3, 22], [5, 1]]).map_err(|e| err(&e))?;
    check("eta^6 is (3x-1)/(5x+1)", json!(true), json!(eta.pow(6) == eta6));

    let g = subgroup_cyclic_qplus1(&f, 4, Some((a, b))).map_err(|e| err(&e))?;
    let split = g.split_structure();
    let recorded: BTreeSet<BTreeSet<i64>> = RECORDED_ORBITS.iter().map(|o| o.iter().copied().collect()).collect();
    check("orbits of <eta^6>", json!(recorded), json!(orbit_sets(&split.free_orbits)));

    let z = fixed_field_generator(&g).map_err(|e| err(&e))?;
    let coeffs = |p: &mergeconv::poly::Poly| p.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>();
    check(
        "z numerator, constant first",
        json!([7, 4, 8, 0, 1]),
        json!(coeffs(z.num())),
    );
    check("z denominator, constant first", json!([21, 11, 4, 1]), json!(coeffs(z.den())));

    let params = MdsMergeParams { k: 5, t: 4, l_prime: 4, per_initial_dims: Some(vec![5, 5, 5, 4]), evaluate_at_pole: true };
    let cc = build_mds_merge(&f, &g, &params)?;
    let words: Vec<_> = cc
        .initial
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let msg: Vec<_> = (0..c.code.k()).map(|m| f.from_int((seed as i64 + 3 * i as i64 + m as i64 * m as i64) % 23)).collect();
            c.code.encode(&msg)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| err(&e))?;
    let (_, access) = execute(&cc, &words)?;
    check("write cost", json!(4), json!(access.write_cost));
    check("read cost", json!(16), json!(access.read_cost));
    let per: BTreeSet<usize> = cc.plan.written.iter().map(|w| w.terms.len()).collect();
    check("reads per written symbol", json!([4]), json!(per));
    let rep = verify_convertible(&cc, seed)?;
    check("access optimal", json!(true), json!(rep.access_optimal));

    let diff = checks.iter().filter(|c| c.expected != c.actual).map(|c| c.item).collect();
    Ok(DemoReport { checks, diff })
}
