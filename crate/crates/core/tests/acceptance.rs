//! Acceptance gate. Prints one line per criterion and exits non-zero if any fails.

mod common;

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt::Debug;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::oracle::{columns, raw, Oracle};
use common::props::{self, zoo_cached};
use common::{all_subsets, field, rng, Q_SET};
use mergeconv::bounds::{mds_merge_lower, rdel_lower, total_lower, unchanged_upper, InitialDims, MergeParams};
use mergeconv::code::singleton_lrc_bound;
use mergeconv::convert::{execute, verify_convertible, AccessReport, ConvertibleCode, Family};
use mergeconv::pgl::{fixed_field_generator, singer_generator, subgroup_cyclic_qplus1};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseResult, TestRng, TestRunner};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + Debug>(what: &str, actual: T, expected: T) -> Result<(), String> {
    ensure(actual == expected, || format!("{what}: expected {expected:?}, got {actual:?}"))
}

fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed < limit => (true, d),
        Ok(d) => (false, format!("{d}; too slow")),
        Err(e) => (false, e),
    };
    println!(
        "{} criterion {id}: {title} [{detail}] ({:.2}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn cert_of(family: &Family) -> Result<mergeconv::code::LocalityCertificate, String> {
    match family {
        Family::Lrc { cert } => Ok(cert.clone()),
        Family::Mds => Err("expected an LRC component".into()),
    }
}

/// Every `w`-subset of parity columns has full rank `w`, by the oracle.
fn columns_independent(cc_field: &mergeconv::field::FieldCtx, h: &mergeconv::matrix::MatQ, w: usize) -> (bool, usize) {
    let o = Oracle::of(cc_field);
    let h = raw(h);
    let mut count = 0;
    let ok = all_subsets(h[0].len(), w, |s| {
        count += 1;
        o.rank(&columns(&h, s)) == w
    });
    (ok, count)
}

fn mdsexa() -> Check {
    let f = field(23);
    let (a, b) = (f.from_int(-2), f.from_int(5));
    ensure(f.primitive_quadratic_check(a, b), || "x^2-2x+5 is not primitive".into())?;
    let eta = singer_generator(&f, Some((a, b))).map_err(|e| e.to_string())?;
    let first_identity = (1..=24).find(|&e| eta.pow(e).is_identity());
    eq("order of eta", first_identity, Some(24))?;

    let g = subgroup_cyclic_qplus1(&f, 4, Some((a, b))).map_err(|e| e.to_string())?;
    let recorded: BTreeSet<BTreeSet<i64>> = [
        [-1, 9, 14, 19],
        [20, 5, 6, 4],
        [2, 16, 18, 13],
        [21, 7, 17, 11],
        [12, 3, 15, 10],
        [0, 8, 1, 22],
    ]
    .iter()
    .map(|o| o.iter().copied().collect())
    .collect();
    let orbits: BTreeSet<BTreeSet<i64>> = g
        .split_structure()
        .free_orbits
        .iter()
        .map(|o| o.iter().map(|p| p.finite().map_or(-1, |x| x.value() as i64)).collect())
        .collect();
    eq("orbits", orbits, recorded)?;

    let z = fixed_field_generator(&g).map_err(|e| e.to_string())?;
    let vals = |p: &mergeconv::poly::Poly| p.coeffs().iter().map(|c| c.value()).collect::<Vec<_>>();
    eq("z numerator", vals(z.num()), vec![7, 4, 8, 0, 1])?;
    eq("z denominator", vals(z.den()), vec![21, 11, 4, 1])?;

    let cc = common::mdsexa();
    let (_, words) = common::encode_random(&cc, 1);
    let (_, access) = execute(&cc, &words).map_err(|e| e.to_string())?;
    eq("(write, read)", (access.write_cost, access.read_cost), (4, 16))?;
    let per: BTreeSet<usize> = cc.plan.written.iter().map(|w| w.terms.len()).collect();
    eq("reads per written symbol", per, BTreeSet::from([4]))?;
    let rep = verify_convertible(&cc, 1).map_err(|e| e.to_string())?;
    ensure(rep.access_optimal, || format!("not access optimal: {:?}", rep.failures))?;
    Ok("orbits, z, write 4, read 16, 4 reads per written symbol, access optimal".into())
}

fn mds_family() -> Check {
    let mut total_checks = 0;
    for t in 2..=4 {
        let cc = common::mds_family(t);
        let code = &cc.final_code.code;
        eq("final shape", (code.n(), code.k()), (5 * t + 4, 5 * t))?;
        let (ok, count) = columns_independent(code.field(), code.parity(), 4);
        ensure(ok, || format!("t={t}: a 4-column parity subset is singular"))?;
        ensure(code.is_mds().map_err(|e| e.to_string())?, || format!("t={t}: is_mds false"))?;
        total_checks += count;
        let access = AccessReport::of(&cc);
        eq("(read, write)", (access.read_cost, access.write_cost), (4 * t, 4))?;
        let bound = mds_merge_lower(&cc.params).map_err(|e| e.to_string())?;
        eq("bound (read, write)", (bound.min_read, bound.min_write), (4 * t as i64, 4))?;
    }
    Ok(format!("t = 2, 3, 4 MDS by {total_checks} 4-column rank checks; (read, write) = (4t, 4) = bound"))
}

fn lrc_merge() -> Check {
    let cc = common::dihedral_lrc();
    for (i, c) in cc.initial.iter().enumerate() {
        eq("initial shape", (c.code.n(), c.code.k()), (12, 4))?;
        let cert = cert_of(&c.family)?;
        ensure(c.code.is_optimal_lrc(&cert).map_err(|e| e.to_string())?, || format!("initial {i} not optimal"))?;
    }
    let code = &cc.final_code.code;
    eq("final shape", (code.n(), code.k()), (18, 8))?;
    let cert = cert_of(&cc.final_code.family)?;
    eq("(r, delta)", (cert.r, cert.delta), (2, 2))?;
    ensure(code.is_optimal_lrc(&cert).map_err(|e| e.to_string())?, || "final not optimal".into())?;
    eq("parity shape", (code.parity().rows(), code.parity().cols()), (10, 18))?;
    eq("distance bound", singleton_lrc_bound(18, 8, 2, 2).map_err(|e| e.to_string())?, 8)?;
    let (ok, count) = columns_independent(code.field(), code.parity(), 7);
    ensure(ok, || "a 7-column parity subset is singular".into())?;
    eq("7-subsets checked", count, 31824)?;
    let access = AccessReport::of(&cc);
    let (t, r, l, delta) = (2, 2, 2, 2);
    eq("(reads, writes)", (access.read_cost, access.write_cost), (t * r * l, l * (r + delta - 1)))?;
    let bound = rdel_lower(&cc.params).map_err(|e| e.to_string())?;
    eq("bound (read, write)", (bound.min_read, bound.min_write), (8, 6))?;
    Ok("[12,4] and [18,8] optimal LRCs, d = 8 by 31824 rank checks, (8, 6) = bound".into())
}

fn mds_to_lrc() -> Check {
    let cc = common::mds_to_lrc();
    let code = &cc.final_code.code;
    eq("final shape", (code.n(), code.k()), (20, 16))?;
    let (ok, count) = columns_independent(code.field(), code.parity(), 3);
    ensure(ok, || "a 3-column parity subset is singular".into())?;
    eq("3-subsets checked", count, 1140)?;
    let cert = cert_of(&cc.final_code.family)?;
    eq("r", cert.r, 9)?;
    eq("distance bound", singleton_lrc_bound(20, 16, 9, 2).map_err(|e| e.to_string())?, 4)?;
    ensure(code.is_optimal_lrc(&cert).map_err(|e| e.to_string())?, || "final not optimal".into())?;

    let w = cc.plan.written_coords();
    let hw = code.parity().select_columns(&w);
    eq("H|_W shape", (hw.rows(), hw.cols()), (4, 4))?;
    eq("H|_W rank", Oracle::of(code.field()).rank(&raw(&hw)), 4)?;
    ensure(hw.invert().is_ok(), || "H|_W not invertible".into())?;

    let bounds = total_lower(&cc.params).map_err(|e| e.to_string())?;
    let reads = cc.plan.read_sets(cc.t());
    for i in 0..cc.t() {
        eq("|U_i|", cc.plan.unchanged[i].len() as i64, unchanged_upper(4, 20, 16, 4, 9, 2))?;
        eq("|U_i| value", cc.plan.unchanged[i].len(), 4)?;
        eq("|R_i|", reads[i].len() as i64, bounds.per_initial[i].read_floor)?;
        eq("|R_i| value", reads[i].len(), 3)?;
    }
    let access = AccessReport::of(&cc);
    eq("(read, write)", (access.read_cost, access.write_cost), (12, 4))?;
    Ok("[20,16] d = 4 by 1140 rank checks, r = 9 optimal, |U_i| = 4, |R_i| = 3, (12, 4)".into())
}

fn bound_reduction() -> Check {
    let mut r = rng(20);
    for case in 0..500 {
        let init: Vec<InitialDims> = (0..r.gen_range(1..=6))
            .map(|_| {
                let k = r.gen_range(1..=10);
                InitialDims { n: k + r.gen_range(0..=10), k }
            })
            .collect();
        let k_final: usize = init.iter().map(|d| d.k).sum();
        let l_final = r.gen_range(1..=10);
        let p = MergeParams {
            initial: init,
            n_final: k_final + l_final,
            k_final,
            d_final: l_final + 1,
            r: Some(k_final),
            delta: 2,
        };
        let total = total_lower(&p).map_err(|e| format!("case {case}: {e}"))?;
        let mds = mds_merge_lower(&p).map_err(|e| format!("case {case}: {e}"))?;
        ensure(total == mds, || format!("case {case}: {p:?} gives {total:?} vs {mds:?}"))?;
    }
    Ok("500 random parameter sets, reports identical".into())
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    cases: u32,
    seen: &RefCell<BTreeSet<u32>>,
    body: impl Fn(S::Value) -> props::Outcome,
) -> Result<(), String>
where
    S::Value: Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config.clone(), TestRng::deterministic_rng(config.rng_algorithm));
    runner
        .run(&strategy, |v| -> TestCaseResult {
            seen.borrow_mut().insert(body(v)?);
            Ok(())
        })
        .map_err(|e| format!("{name}: {e}"))
}

fn property_suites(seen: &RefCell<BTreeSet<u32>>) -> Check {
    run_property("action contract", props::q_and_seed(), 500, seen, props::action_contract)?;
    run_property("G H^T = 0", props::q_and_seed(), 100, seen, props::generator_parity_orthogonal)?;
    run_property("restricted dimension", props::small_q_and_seed(), 200, seen, props::restricted_dimension)?;
    run_property("lemma postconditions", props::q_and_seed(), 100, seen, props::lemma_postconditions)?;
    run_property("dual multipliers", props::q_and_seed(), 100, seen, props::dual_multipliers)?;
    run_property("unchanged identity", props::zoo_and_seed(), 100, seen, props::unchanged_identity)?;

    // G H^T = 0 on every component of every construction, not just sampled ones.
    let mut kinds = BTreeSet::new();
    for (q, cc) in zoo_cached() {
        orthogonal_everywhere(*q, cc)?;
        kinds.insert(format!("{:?}", cc.kind));
    }
    eq("construction kinds exercised", kinds.len(), 3)?;
    Ok("six suites, 100 to 500 cases each".into())
}

fn orthogonal_everywhere(q: u32, cc: &ConvertibleCode) -> Result<(), String> {
    let o = Oracle::of(cc.field());
    for c in cc.initial.iter().chain(std::iter::once(&cc.final_code)) {
        let prod = o.mul_transpose(&raw(c.code.generator()), &raw(c.code.parity()));
        ensure(prod.iter().flatten().all(|&v| v == 0), || format!("q={q}: G H^T != 0"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= criterion(1, "GF(23) merge example", Duration::from_secs(5), mdsexa);
    ok &= criterion(2, "MDS merge family q=23", Duration::from_secs(30), mds_family);
    ok &= criterion(3, "LRC merge q=32", Duration::from_secs(60), lrc_merge);
    ok &= criterion(4, "MDS to LRC q=23", Duration::from_secs(10), mds_to_lrc);
    ok &= criterion(5, "bound reduction", Duration::from_secs(5), bound_reduction);

    let seen = RefCell::new(BTreeSet::new());
    let start = Instant::now();
    ok &= criterion(6, "property suites", Duration::from_secs(600), || property_suites(&seen));

    let covered = seen.into_inner();
    let missing: Vec<u32> = Q_SET.iter().copied().filter(|q| !covered.contains(q)).collect();
    if missing.is_empty() {
        println!(
            "EXCLUDED criterion 7: large-parameter claims are outside desk-scale verification; \
             property suites covered q in {covered:?} ({:.2}s)",
            start.elapsed().as_secs_f64()
        );
    } else {
        println!("FAIL criterion 7: property suites never reached q in {missing:?}");
        ok = false;
    }

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
