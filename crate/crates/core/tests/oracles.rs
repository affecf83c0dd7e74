//! Independent formulas checked against the library's computations.

use ffmzv::laurent::{theta_floor, LaurentL, RationalK};
use ffmzv::motives::{unit_point, PeriodSystem};
use ffmzv::relations::{find_linear_relations, rational_reconstruct, RelationQuery};
use ffmzv::scalars::{FieldDesc, Fq, PolyTheta};
use ffmzv::specials::at_poly::{at_polynomial, verify_at_identity};
use ffmzv::specials::power_sum::power_sum_expansion;
use ffmzv::specials::{carlitz_d, carlitz_gamma, cmpl_eval, mzv_bruteforce, mzv_fast, power_sum, Index};
use ffmzv::tate::{carlitz_pi, omega_at_theta, KtPoly};

fn field(q: u64) -> FieldDesc {
    FieldDesc::with_order(q).unwrap()
}

fn idx(s: &str) -> Index {
    s.parse().unwrap()
}

fn theta(f: &FieldDesc) -> PolyTheta {
    PolyTheta::theta(f)
}

/// l_d = prod_{i=1}^{d} (theta - theta^(q^i)), built from scratch.
fn ell(f: &FieldDesc, d: usize) -> PolyTheta {
    let q = f.q() as usize;
    let mut acc = PolyTheta::one(f);
    let mut qi = 1;
    for _ in 0..d {
        qi *= q;
        let factor = theta(f).sub(&PolyTheta::monomial(f, f.one(), qi)).unwrap();
        acc = acc.mul(&factor).unwrap();
    }
    acc
}

/// D_i = prod_{j=0}^{i-1} (theta^(q^i) - theta^(q^j)).
fn d_poly(f: &FieldDesc, i: usize) -> PolyTheta {
    let q = f.q() as usize;
    let qi = q.pow(i as u32);
    let mut acc = PolyTheta::one(f);
    for j in 0..i {
        let factor = PolyTheta::monomial(f, f.one(), qi).sub(&PolyTheta::monomial(f, f.one(), q.pow(j as u32))).unwrap();
        acc = acc.mul(&factor).unwrap();
    }
    acc
}

fn inv_poly_power(p: &PolyTheta, n: u32, floor: i64) -> LaurentL {
    LaurentL::from_poly(&p.pow(n as u64)).inv_to(Some(floor)).unwrap()
}

#[test]
fn carlitz_d_matches_product_formula() {
    for q in [2, 3, 4, 5] {
        let f = field(q);
        for i in 0..4 {
            assert_eq!(carlitz_d(&f, i).unwrap(), d_poly(&f, i), "q = {q}, i = {i}");
        }
    }
}

#[test]
fn small_power_sums_are_reciprocal_ell_powers() {
    // S_d(n) = 1 / l_d^n for 1 <= n <= q.
    for q in [2, 3, 4] {
        let f = field(q);
        let floor = theta_floor(f.q(), 30);
        for d in 0..=3 {
            for n in 1..=q as u32 {
                let expected = inv_poly_power(&ell(&f, d), n, floor);
                let got = power_sum(&f, d, n, 30, 1 << 22).unwrap();
                assert!(got.agrees_with(&expected), "q = {q}, d = {d}, n = {n}");
                let expanded = power_sum_expansion(&f, d, n, 30).unwrap();
                assert!(expanded.agrees_with(&expected), "expansion q = {q}, d = {d}, n = {n}");
            }
        }
    }
}

#[test]
fn zeta_one_is_sum_of_reciprocal_ells() {
    for q in [2, 3, 4] {
        let f = field(q);
        let n = 40;
        let floor = theta_floor(f.q(), n);
        let mut expected = LaurentL::zero(&f);
        for d in 0..6 {
            expected = expected.add(&inv_poly_power(&ell(&f, d), 1, floor)).unwrap();
        }
        let expected = expected.truncate(floor).unwrap();
        assert!(mzv_fast(&f, &idx("1"), n).unwrap().agrees_with(&expected), "q = {q}");
    }
}

/// e_C(x) = sum_i x^(q^i) / D_i down to theta-precision `n`.
fn carlitz_exp(f: &FieldDesc, x: &LaurentL, n: i64) -> LaurentL {
    let floor = theta_floor(f.q(), n);
    let mut sum = LaurentL::zero(f);
    let mut power = x.clone();
    for i in 0..6 {
        let term = power.mul(&inv_poly_power(&d_poly(f, i), 1, floor - 2 * power.top().unwrap())).unwrap();
        sum = sum.add(&term.truncate(floor).unwrap()).unwrap();
        power = power.pow(f.q() as i64).unwrap();
    }
    sum.truncate(floor).unwrap()
}

#[test]
fn carlitz_exponential_vanishes_at_pi() {
    for q in [2, 3, 4] {
        let f = field(q);
        let pi = carlitz_pi(&f, 50).unwrap();
        assert!(carlitz_exp(&f, &pi, 40).is_zero(), "q = {q}");
        let shifted = pi.add(&LaurentL::one(&f)).unwrap();
        assert!(!carlitz_exp(&f, &shifted, 40).is_zero(), "q = {q}: e_C(1) must not vanish");
    }
}

#[test]
fn omega_at_theta_inverts_pi_for_many_fields() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let f = field(q);
        let n = 20;
        let prod = omega_at_theta(&f, n + 2).unwrap().mul(&carlitz_pi(&f, n + 2).unwrap()).unwrap();
        assert!(prod.truncate(theta_floor(f.q(), n)).unwrap().agrees_with(&LaurentL::one(&f)), "q = {q}");
    }
}

/// Li_(n1, n2)(z1, z2) by the nested definition over i1 > i2 >= 0.
fn depth_two_polylog(f: &FieldDesc, n: (u32, u32), z: (&RationalK, &RationalK), prec: i64, levels: u32) -> LaurentL {
    let q = f.q() as i64;
    let floor = theta_floor(f.q(), prec);
    let work = floor - 40;
    let term = |z: &RationalK, i: u32, k: u32| -> LaurentL {
        let zp = z.pow(q.pow(i)).unwrap().to_laurent(work).unwrap();
        zp.mul(&inv_poly_power(&ell(f, i as usize), k, work)).unwrap()
    };
    let mut acc = LaurentL::zero(f);
    for i1 in 1..levels {
        for i2 in 0..i1 {
            let t = term(z.0, i1, n.0).mul(&term(z.1, i2, n.1)).unwrap();
            acc = acc.add(&t.clip(work)).unwrap();
        }
    }
    acc.truncate(floor).unwrap()
}

#[test]
fn polylogarithms_match_nested_sums() {
    for q in [2, 3] {
        let f = field(q);
        let one = RationalK::one(&f);
        let th = RationalK::theta(&f);
        let inv_th1 = RationalK::new(PolyTheta::one(&f), theta(&f).add(&PolyTheta::one(&f)).unwrap()).unwrap();
        for (n, z) in [((1, 1), (&one, &one)), ((1, 2), (&one, &th)), ((2, 1), (&inv_th1, &one))] {
            let expected = depth_two_polylog(&f, n, z, 20, 5);
            let nu = Index::new(vec![n.0, n.1]).unwrap();
            let got = cmpl_eval(&f, &nu, &[z.0.clone(), z.1.clone()], 20).unwrap();
            assert!(got.agrees_with(&expected), "q = {q}, n = {n:?}");
        }
    }
}

#[test]
fn carlitz_logarithm_at_one_is_zeta_one() {
    for q in [2, 3, 4, 5] {
        let f = field(q);
        let li = cmpl_eval(&f, &idx("1"), &[RationalK::one(&f)], 30).unwrap();
        assert!(li.agrees_with(&mzv_fast(&f, &idx("1"), 30).unwrap()), "q = {q}");
    }
}

#[test]
fn fast_and_enumerated_multizeta_agree_beyond_small_fields() {
    for (q, n) in [(4u64, 8i64), (5, 6), (8, 4), (9, 4)] {
        let f = field(q);
        for nu in ["1", "2,1", "1,2", "3,1,1"] {
            let nu = idx(nu);
            let fast = mzv_fast(&f, &nu, n).unwrap();
            let brute = mzv_bruteforce(&f, &nu, n, 1 << 22).unwrap();
            assert_eq!(fast.first_difference(&brute), None, "q = {q}, {nu}");
        }
    }
}

#[test]
fn char_two_squares() {
    let f = field(2);
    for nu in ["1", "1,2", "3"] {
        let nu = idx(nu);
        let sq = mzv_fast(&f, &nu, 30).unwrap().square().unwrap();
        assert!(mzv_fast(&f, &nu.scaled(2), 30).unwrap().agrees_with(&sq), "{nu}");
    }
}

#[test]
fn carlitz_even_ratio_is_reciprocal_ell_one_up_to_sign() {
    // zeta(q - 1) / pi^(q - 1) is a unit multiple of 1 / l_1.
    for q in [2, 3, 4, 5] {
        let f = field(q);
        let n = 40;
        let ratio = mzv_fast(&f, &Index::new(vec![q as u32 - 1]).unwrap(), n + 5)
            .unwrap()
            .div(&carlitz_pi(&f, n + 5).unwrap().pow(q as i64 - 1).unwrap())
            .unwrap()
            .mul(&LaurentL::from_poly(&ell(&f, 1)))
            .unwrap()
            .truncate(theta_floor(f.q(), n) + 2 * (q as i64 - 1))
            .unwrap();
        let (e, c) = ratio.leading().unwrap();
        assert_eq!(e, 0, "q = {q}");
        assert!(ratio.agrees_with(&LaurentL::constant(&f, c)), "q = {q}: {ratio}");
        assert!(c == f.one() || c == f.neg(f.one()));
    }
}

#[test]
fn relation_examples() {
    let f = field(3);
    let th1 = theta(&f).add(&PolyTheta::one(&f)).unwrap();
    let v = RationalK::new(PolyTheta::one(&f), th1.clone()).unwrap().to_laurent(-80).unwrap();
    let basis = find_linear_relations(&RelationQuery::new(vec![LaurentL::one(&f), v], 1)).unwrap();
    assert_eq!(basis.relations, vec![vec![PolyTheta::one(&f).neg(), th1]]);

    let f = field(2);
    let z2 = mzv_fast(&f, &idx("2"), 40).unwrap();
    let z11 = mzv_fast(&f, &idx("1"), 40).unwrap().square().unwrap();
    let basis = find_linear_relations(&RelationQuery::new(vec![z2, z11], 0)).unwrap();
    assert_eq!(basis.relations, vec![vec![PolyTheta::one(&f), PolyTheta::one(&f)]]);

    let num = PolyTheta::new(&f, vec![Fq(1), Fq(0), Fq(1)]);
    let den = PolyTheta::new(&f, vec![Fq(1), Fq(1), Fq(0), Fq(1)]);
    let x = RationalK::new(num, den).unwrap();
    assert_eq!(rational_reconstruct(&x.to_laurent(-60).unwrap(), 3, 20).unwrap().value, Some(x));
}

#[test]
fn period_matrix_matches_polylogarithms() {
    // Psi(theta) below the diagonal is pi^(-w_j) Li_(nu_ij)(1, ..., 1).
    let f = field(3);
    let nu = idx("1,5");
    let sys = PeriodSystem::build(&f, &nu, &unit_point(&f, 2), 2, 10).unwrap();
    let n = 30;
    let periods = sys.period_matrix(n).unwrap();
    let weights = nu.tail_weights();
    let pi = carlitz_pi(&f, n + 20).unwrap();
    for i in 1..3 {
        for j in 0..i {
            let part = Index::new(nu.parts()[j..i].to_vec()).unwrap();
            let li = cmpl_eval(&f, &part, &vec![RationalK::one(&f); i - j], n + 20).unwrap();
            let expected = li.div(&pi.pow(weights[j] as i64).unwrap()).unwrap().truncate(theta_floor(f.q(), n)).unwrap();
            assert!(periods[i][j].agrees_with(&expected), "entry ({}, {})", i + 1, j + 1);
        }
    }
}

#[test]
fn anderson_thakur_polynomials_pass_their_identity() {
    for (q, n) in [(2u64, 3u32), (2, 4), (2, 5), (3, 4), (3, 5)] {
        let f = field(q);
        let h = at_polynomial(&f, n, 12).unwrap();
        assert!(verify_at_identity(&f, n, &h, 14).unwrap(), "q = {q}, n = {n}");
        assert!(!verify_at_identity(&f, n, &h.add(&KtPoly::t(&f)).unwrap(), 14).unwrap());
        assert!(!carlitz_gamma(&f, n as u64).unwrap().is_one());
    }
}
