//! Property bodies. Each returns the field order it exercised so callers
//! can track coverage of [`Q_SET`](super::Q_SET).

use std::sync::OnceLock;

use mergeconv::bounds::lemma_at_construct;
use mergeconv::code::{DistanceStrategy, LinearCode, LocalityCertificate};
use mergeconv::convert::{execute, ConvertibleCode, Family};
use mergeconv::field::FieldElem;
use mergeconv::grs::{grs_code, grs_dual_prescribed, GrsSpec};
use mergeconv::matrix::MatQ;
use mergeconv::pgl::{ProjPoint, RationalFunction};
use mergeconv::poly::Poly;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::Rng;

use super::oracle::{columns, raw, Oracle};
use super::{distinct, field, random_elem, random_mobius, random_nonzero, rng, subset, zoo, Q_SET};

pub type Outcome = Result<u32, TestCaseError>;

pub fn zoo_cached() -> &'static [(u32, ConvertibleCode)] {
    static ZOO: OnceLock<Vec<(u32, ConvertibleCode)>> = OnceLock::new();
    ZOO.get_or_init(zoo)
}

pub fn q_and_seed() -> impl Strategy<Value = (u32, u64)> {
    (prop::sample::select(Q_SET.to_vec()), any::<u64>())
}

pub fn small_q_and_seed() -> impl Strategy<Value = (u32, u64)> {
    (prop::sample::select(vec![5u32, 7]), any::<u64>())
}

pub fn zoo_and_seed() -> impl Strategy<Value = (usize, u64)> {
    (0..zoo_cached().len(), any::<u64>())
}

fn random_poly(f: &mergeconv::field::FieldCtx, r: &mut rand_chacha::ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = r.gen_range(0..=max_deg);
    let coeffs: Vec<FieldElem> = (0..=deg).map(|_| random_elem(f, r)).collect();
    Poly::new(f, &coeffs).unwrap()
}

/// `sigma(f)(sigma(P)) = f(P)` and compatibility of place images with composition.
pub fn action_contract((q, seed): (u32, u64)) -> Outcome {
    let f = field(q);
    let mut r = rng(seed);
    let (sigma, tau) = (random_mobius(&f, &mut r), random_mobius(&f, &mut r));
    let points = ProjPoint::all(&f);
    let p = points[r.gen_range(0..points.len())];
    let fun = loop {
        let den = random_poly(&f, &mut r, 3);
        if den.is_zero() {
            continue;
        }
        let cand = RationalFunction::new(random_poly(&f, &mut r, 3), den).unwrap();
        if cand.is_zero() || cand.valuation(p).unwrap() >= 0 {
            break cand;
        }
    };
    let moved = fun.apply(&sigma).unwrap();
    prop_assert_eq!(moved.eval(sigma.place_image(p), 0).unwrap(), fun.eval(p, 0).unwrap());
    let composed = sigma.compose(&tau).unwrap();
    prop_assert_eq!(composed.place_image(p), sigma.place_image(tau.place_image(p)));
    Ok(q)
}

fn assert_orthogonal(o: &Oracle, code: &LinearCode) -> Result<(), TestCaseError> {
    let (g, h) = (raw(code.generator()), raw(code.parity()));
    prop_assert_eq!(g.len(), code.k());
    prop_assert_eq!(o.rank(&g), code.k());
    if !h.is_empty() {
        prop_assert_eq!(o.rank(&h), code.n() - code.k());
        prop_assert!(o.mul_transpose(&g, &h).iter().flatten().all(|&v| v == 0));
    }
    Ok(())
}

/// `G H^T = 0` on a random GRS code and on one constructed convertible code.
pub fn generator_parity_orthogonal((q, seed): (u32, u64)) -> Outcome {
    let f = field(q);
    let o = Oracle::of(&f);
    let mut r = rng(seed);
    let n = r.gen_range(1..=(q as usize).min(12));
    let k = r.gen_range(1..=n);
    let spec =
        GrsSpec { locators: distinct(&f, n, &mut r), multipliers: (0..n).map(|_| random_nonzero(&f, &mut r)).collect(), k };
    assert_orthogonal(&o, &grs_code(&f, &spec, None).unwrap())?;

    let entries: Vec<&ConvertibleCode> = zoo_cached().iter().filter(|(zq, _)| *zq == q).map(|(_, c)| c).collect();
    let cc = entries[r.gen_range(0..entries.len())];
    for c in cc.initial.iter().chain(std::iter::once(&cc.final_code)) {
        assert_orthogonal(&o, &c.code)?;
    }
    Ok(q)
}

/// A random full-rank `k x n` generator.
fn random_code(f: &mergeconv::field::FieldCtx, r: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> LinearCode {
    loop {
        let rows: Vec<Vec<FieldElem>> = (0..k).map(|_| (0..n).map(|_| random_elem(f, r)).collect()).collect();
        let m = MatQ::from_rows(f, &rows, n).unwrap();
        if m.rank() == k {
            return LinearCode::from_generator(m, None).unwrap();
        }
    }
}

/// Any `n - d + 1` coordinates carry the full dimension.
pub fn restricted_dimension((q, seed): (u32, u64)) -> Outcome {
    let f = field(q);
    let o = Oracle::of(&f);
    let mut r = rng(seed);
    let n = r.gen_range(2..=10);
    let k = r.gen_range(1..=n.min(4));
    let code = random_code(&f, &mut r, n, k);
    let d = code.min_distance(DistanceStrategy::Enumerate).unwrap();
    prop_assert_eq!(d, code.min_distance(DistanceStrategy::ParitySubsets).unwrap());
    let size = r.gen_range(n - d + 1..=n);
    let gamma = subset(n, size, &mut r);
    prop_assert_eq!(code.restricted_dim(&gamma), k);
    prop_assert_eq!(o.rank(&columns(&raw(code.generator()), &gamma)), k);
    Ok(q)
}

/// A code of length at most 20 over `GF(q)` with a locality certificate.
fn certified_code(q: u32, r: &mut rand_chacha::ChaCha8Rng) -> (LinearCode, LocalityCertificate) {
    let mut pool: Vec<(LinearCode, LocalityCertificate)> = Vec::new();
    for (zq, cc) in zoo_cached() {
        if *zq != q {
            continue;
        }
        for c in cc.initial.iter().chain(std::iter::once(&cc.final_code)) {
            let (n, k) = (c.code.n(), c.code.k());
            let cert = match &c.family {
                Family::Lrc { cert } => cert.clone(),
                Family::Mds if n > k => LocalityCertificate { r: k, delta: n - k + 1, groups: vec![(0..n).collect()] },
                Family::Mds => continue,
            };
            if n <= 20 {
                pool.push((c.code.clone(), cert));
            }
        }
    }
    let f = field(q);
    let n = r.gen_range(2..=(q as usize).min(20));
    let k = r.gen_range(1..n);
    let spec = GrsSpec { locators: distinct(&f, n, r), multipliers: vec![f.one(); n], k };
    pool.push((
        grs_code(&f, &spec, None).unwrap(),
        LocalityCertificate { r: k, delta: n - k + 1, groups: vec![(0..n).collect()] },
    ));
    pool.swap_remove(r.gen_range(0..pool.len()))
}

/// Postconditions of the constructive lemma: `A ⊆ S ∩ T`, `|S ∩ T| <= Δ`,
/// the size of `A`, and `C|_T` spanned by `C|_{T \ A}`.
pub fn lemma_postconditions((q, seed): (u32, u64)) -> Outcome {
    let f = field(q);
    let o = Oracle::of(&f);
    let mut r = rng(seed);
    let (code, cert) = certified_code(q, &mut r);
    let n = code.n();
    let s = subset(n, r.gen_range(1..=n), &mut r);
    let big_delta = r.gen_range(1..=s.len());
    let (a, t) = lemma_at_construct(&code, &cert, &s, big_delta)
        .map_err(|e| TestCaseError::fail(format!("n={n} S={s:?} Delta={big_delta}: {e}")))?;
    let s_and_t: Vec<usize> = t.iter().copied().filter(|c| s.contains(c)).collect();
    prop_assert!(a.iter().all(|c| s_and_t.contains(c)));
    prop_assert!(s_and_t.len() <= big_delta);
    prop_assert_eq!(a.len(), (cert.delta - 1) * (big_delta / (cert.r + cert.delta - 1)));
    let g = raw(code.generator());
    let t_minus_a: Vec<usize> = t.iter().copied().filter(|c| !a.contains(c)).collect();
    prop_assert_eq!(o.rank(&columns(&g, &t)), o.rank(&columns(&g, &t_minus_a)));
    Ok(q)
}

/// `V_k(alpha; v) V_{n-k}(alpha)^T = 0` for the prescribed dual multipliers.
pub fn dual_multipliers((q, seed): (u32, u64)) -> Outcome {
    let f = field(q);
    let o = Oracle::of(&f);
    let mut r = rng(seed);
    let n = r.gen_range(2..=(q as usize).min(10));
    let k = r.gen_range(1..=n);
    let alpha = distinct(&f, n, &mut r);
    let v = grs_dual_prescribed(&f, &alpha, k, &[]).unwrap();
    prop_assert_eq!(v[0], f.one());
    prop_assert!(v.iter().all(|x| !x.is_zero()));
    let a: Vec<u32> = alpha.iter().map(|x| x.value()).collect();
    let g: Vec<Vec<u32>> = (0..k).map(|i| a.iter().zip(&v).map(|(&x, y)| o.mul(y.value(), o.pow(x, i))).collect()).collect();
    let h: Vec<Vec<u32>> = (0..n - k).map(|i| a.iter().map(|&x| o.pow(x, i)).collect()).collect();
    prop_assert!(o.mul_transpose(&g, &h).iter().flatten().all(|&x| x == 0));
    Ok(q)
}

/// Unchanged symbols keep their values and the output is a final codeword.
pub fn unchanged_identity((idx, seed): (usize, u64)) -> Outcome {
    let (q, cc) = &zoo_cached()[idx];
    let o = Oracle::of(cc.field());
    let (_, words) = super::encode_random(cc, seed);
    let (out, _) = execute(cc, &words).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (i, pairs) in cc.plan.unchanged.iter().enumerate() {
        for p in pairs {
            prop_assert_eq!(out[p.final_coord], words[i][p.initial_coord]);
        }
    }
    let word: Vec<Vec<u32>> = vec![out.iter().map(|x| x.value()).collect()];
    let h = raw(cc.final_code.code.parity());
    prop_assert!(o.mul_transpose(&h, &word).iter().flatten().all(|&x| x == 0));
    Ok(*q)
}
