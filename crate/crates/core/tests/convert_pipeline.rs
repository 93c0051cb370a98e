use mergeconv::convert::{
    build_lrc_merge, build_mds_merge, build_mds_to_lrc, execute, verify_convertible, ConvertError, ConvertibleCode,
    LrcMergeParams, MdsMergeParams, MdsToLrcParams,
};
use mergeconv::field::{FieldCtx, FieldElem};
use mergeconv::pgl::{subgroup_cyclic_qplus1, subgroup_dihedral, DihedralKind, GroupTable, Mobius};

fn mdsexa() -> ConvertibleCode {
    let f = FieldCtx::prime(23).unwrap();
    let g = subgroup_cyclic_qplus1(&f, 4, Some((f.from_int(-2), f.from_int(5)))).unwrap();
    let p = MdsMergeParams { k: 5, t: 4, l_prime: 4, per_initial_dims: Some(vec![5, 5, 5, 4]), evaluate_at_pole: true };
    build_mds_merge(&f, &g, &p).unwrap()
}

fn dihedral_lrc() -> ConvertibleCode {
    let f = FieldCtx::new(2, 5, None).unwrap();
    let g = subgroup_dihedral(&f, 3, DihedralKind::QPlus, None).unwrap();
    let rot: Vec<Mobius> = g.elements().iter().filter(|s| s.order() == 3).cloned().collect();
    let h = GroupTable::generate(&f, &rot[..1]).unwrap();
    build_lrc_merge(&f, &g, &h, &LrcMergeParams { k: 2, t: 2, l_prime: 2, delta: 2 }).unwrap()
}

fn mds_to_lrc() -> ConvertibleCode {
    let f = FieldCtx::prime(23).unwrap();
    build_mds_to_lrc(&f, &MdsToLrcParams { s: 2, a: 1, t_prime: 2, delta: 2, k_i: 4, n_i: vec![9; 4] }).unwrap()
}

fn messages(cc: &ConvertibleCode, seed: i64) -> Vec<Vec<FieldElem>> {
    let f = cc.field();
    cc.initial
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let msg: Vec<FieldElem> = (0..c.code.k()).map(|m| f.from_int(seed * 31 + (i * 7 + m * m) as i64)).collect();
            c.code.encode(&msg).unwrap()
        })
        .collect()
}

#[test]
fn flagship_instances_are_access_optimal() {
    for (cc, costs) in [(mdsexa(), (16, 4)), (dihedral_lrc(), (8, 6)), (mds_to_lrc(), (12, 4))] {
        let rep = verify_convertible(&cc, 7).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.access_optimal);
        assert_eq!((rep.access.read_cost, rep.access.write_cost), costs);
    }
}

#[test]
fn execute_reports_costs_and_keeps_unchanged_symbols() {
    let cc = mdsexa();
    let words = messages(&cc, 3);
    let (out, rep) = execute(&cc, &words).unwrap();
    assert_eq!((rep.write_cost, rep.read_cost, rep.per_symbol_read), (4, 16, 16));
    for (i, pairs) in cc.plan.unchanged.iter().enumerate() {
        for p in pairs {
            assert_eq!(out[p.final_coord], words[i][p.initial_coord]);
        }
    }
}

#[test]
fn zero_input_gives_zero_output() {
    let cc = dihedral_lrc();
    let words: Vec<Vec<FieldElem>> = cc.initial.iter().map(|c| vec![cc.field().zero(); c.code.n()]).collect();
    let (out, rep) = execute(&cc, &words).unwrap();
    assert!(out.iter().all(|v| v.is_zero()));
    assert_eq!((rep.read_cost, rep.write_cost, rep.per_symbol_read), (8, 6, 12));
}

#[test]
fn non_codeword_input_is_rejected() {
    let cc = mds_to_lrc();
    let mut words = messages(&cc, 1);
    let f = cc.field().clone();
    words[2][0] = f.add(words[2][0], f.one());
    assert_eq!(execute(&cc, &words).unwrap_err(), ConvertError::NotACodeword(2));
}

#[test]
fn corrupted_coefficient_is_caught() {
    let mut cc = mdsexa();
    let f = cc.field().clone();
    let term = &mut cc.plan.written[1].terms[0];
    term.coeff = f.add(term.coeff, f.one());
    if term.coeff.is_zero() {
        term.coeff = f.from_int(2);
    }
    let rep = verify_convertible(&cc, 1).unwrap();
    assert!(!rep.membership);
    assert!(!rep.access_optimal);
    let words = messages(&cc, 5);
    assert_eq!(execute(&cc, &words).unwrap_err(), ConvertError::FinalMembership);
}

#[test]
fn bundle_json_round_trip() {
    for cc in [mdsexa(), dihedral_lrc(), mds_to_lrc()] {
        let text = serde_json::to_string(&cc.to_json()).unwrap();
        let back = ConvertibleCode::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, cc);
    }
}
