//! Shared fixtures, an independent arithmetic oracle, and property bodies
//! used by both the proptest suites and the acceptance gate.
#![allow(dead_code)]

pub mod oracle;
pub mod props;

use mergeconv::convert::{
    build_lrc_merge, build_mds_merge, build_mds_to_lrc, ConvertibleCode, LrcMergeParams, MdsMergeParams,
    MdsToLrcParams,
};
use mergeconv::field::{FieldCtx, FieldElem};
use mergeconv::pgl::{subgroup_cyclic_qplus1, subgroup_dihedral, DihedralKind, GroupTable, Mobius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Field orders the property suites sweep.
pub const Q_SET: [u32; 7] = [5, 7, 8, 16, 23, 32, 37];

pub fn field(q: u32) -> FieldCtx {
    match q {
        8 => FieldCtx::new(2, 3, None),
        16 => FieldCtx::new(2, 4, None),
        32 => FieldCtx::new(2, 5, None),
        p => FieldCtx::prime(p),
    }
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem(f: &FieldCtx, rng: &mut ChaCha8Rng) -> FieldElem {
    f.elem(rng.gen_range(0..f.q() as i64)).unwrap()
}

pub fn random_nonzero(f: &FieldCtx, rng: &mut ChaCha8Rng) -> FieldElem {
    f.elem(rng.gen_range(1..f.q() as i64)).unwrap()
}

/// `n` distinct field elements in random order.
pub fn distinct(f: &FieldCtx, n: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElem> {
    let mut all: Vec<FieldElem> = f.elements().collect();
    for i in 0..n {
        let j = rng.gen_range(i..all.len());
        all.swap(i, j);
    }
    all.truncate(n);
    all
}

/// Random subset of `0..n`, ascending.
pub fn subset(n: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    idx.truncate(size);
    idx.sort_unstable();
    idx
}

pub fn random_mobius(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Mobius {
    loop {
        let e: Vec<FieldElem> = (0..4).map(|_| random_elem(f, rng)).collect();
        if let Ok(m) = Mobius::new(f, e[0], e[1], e[2], e[3]) {
            return m;
        }
    }
}

/// Random messages for every initial code and their codewords.
pub fn encode_random(cc: &ConvertibleCode, seed: u64) -> (Vec<Vec<FieldElem>>, Vec<Vec<FieldElem>>) {
    let f = cc.field().clone();
    let mut r = rng(seed);
    let msgs: Vec<Vec<FieldElem>> =
        cc.initial.iter().map(|c| (0..c.code.k()).map(|_| random_elem(&f, &mut r)).collect()).collect();
    let words = cc.initial.iter().zip(&msgs).map(|(c, m)| c.code.encode(m).unwrap()).collect();
    (msgs, words)
}

pub fn mdsexa() -> ConvertibleCode {
    let f = FieldCtx::prime(23).unwrap();
    let g = subgroup_cyclic_qplus1(&f, 4, Some((f.from_int(-2), f.from_int(5)))).unwrap();
    let p = MdsMergeParams { k: 5, t: 4, l_prime: 4, per_initial_dims: Some(vec![5, 5, 5, 4]), evaluate_at_pole: true };
    build_mds_merge(&f, &g, &p).unwrap()
}

pub fn mds_family(t: usize) -> ConvertibleCode {
    let f = FieldCtx::prime(23).unwrap();
    let g = subgroup_cyclic_qplus1(&f, 4, Some((f.from_int(-2), f.from_int(5)))).unwrap();
    let p = MdsMergeParams { k: 5, t, l_prime: 4, per_initial_dims: None, evaluate_at_pole: true };
    build_mds_merge(&f, &g, &p).unwrap()
}

/// Order-3 rotation subgroup of the order-6 dihedral group over GF(32).
pub fn dihedral_pair() -> (FieldCtx, GroupTable, GroupTable) {
    let f = field(32);
    let g = subgroup_dihedral(&f, 3, DihedralKind::QPlus, None).unwrap();
    let rot: Vec<Mobius> = g.elements().iter().filter(|s| s.order() == 3).cloned().collect();
    let h = GroupTable::generate(&f, &rot[..1]).unwrap();
    (f, g, h)
}

pub fn dihedral_lrc() -> ConvertibleCode {
    let (f, g, h) = dihedral_pair();
    build_lrc_merge(&f, &g, &h, &LrcMergeParams { k: 2, t: 2, l_prime: 2, delta: 2 }).unwrap()
}

pub fn mds_to_lrc() -> ConvertibleCode {
    build_mds_to_lrc(&field(23), &MdsToLrcParams { s: 2, a: 1, t_prime: 2, delta: 2, k_i: 4, n_i: vec![9; 4] }).unwrap()
}

fn mds_merge_at(q: u32, d: u64, k: usize, t: usize) -> ConvertibleCode {
    let f = field(q);
    let g = subgroup_cyclic_qplus1(&f, d, None).unwrap();
    let p = MdsMergeParams { k, t, l_prime: d as usize, per_initial_dims: None, evaluate_at_pole: true };
    build_mds_merge(&f, &g, &p).unwrap()
}

fn mds_to_lrc_at(q: u32, p: MdsToLrcParams) -> ConvertibleCode {
    build_mds_to_lrc(&field(q), &p).unwrap()
}

/// Convertible codes of all three kinds spread over [`Q_SET`].
pub fn zoo() -> Vec<(u32, ConvertibleCode)> {
    vec![
        (5, mds_merge_at(5, 2, 2, 2)),
        (7, mds_merge_at(7, 2, 3, 2)),
        (8, mds_to_lrc_at(8, MdsToLrcParams { s: 2, a: 1, t_prime: 1, delta: 2, k_i: 3, n_i: vec![5; 2] })),
        (16, mds_to_lrc_at(16, MdsToLrcParams { s: 2, a: 2, t_prime: 1, delta: 2, k_i: 4, n_i: vec![7; 2] })),
        (23, mdsexa()),
        (23, mds_to_lrc()),
        (32, dihedral_lrc()),
        (32, mds_merge_at(32, 3, 4, 3)),
        (37, mds_merge_at(37, 2, 5, 2)),
        (37, mds_to_lrc_at(37, MdsToLrcParams { s: 2, a: 2, t_prime: 2, delta: 2, k_i: 6, n_i: vec![11; 4] })),
    ]
}

/// Calls `f` on every `w`-subset of `0..n` in lexicographic order; stops
/// early and returns `false` as soon as `f` does.
pub fn all_subsets(n: usize, w: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if w > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = w;
        while i > 0 && idx[i - 1] == n - w + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
