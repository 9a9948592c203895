use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use tripillai_core::arith::{Ball, Precision};
use tripillai_core::baker::{bl_upper, guzman_luca, matveev_lower, BLInstance, MatveevInstance};
use tripillai_core::cfrac::{cf_expand, legendre_floor, parse_mu};
use tripillai_core::exec::Exec;
use tripillai_core::lattice::{closest_distance_sq, coordinates, lattice_gap, lll_reduce, Lattice};
use tripillai_core::padic::{exact_nu_diff, scan_residues, smin_table, SminRow};
use tripillai_core::search::{count_representations, pow23, CountOptions, SearchBox, Sign};
use tripillai_core::trib::{period_mod, trib, trib_matrix, trib_mod};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn ball(s: &str) -> Ball {
    Ball::from_decimal(s, 128).unwrap()
}

fn basis3() -> impl Strategy<Value = Lattice> {
    prop::collection::vec(-40i64..=40, 9)
        .prop_map(|v| Lattice::from_columns_i64(&[&v[0..3], &v[3..6], &v[6..9]]).unwrap())
        .prop_filter("full rank", |l| !l.det().is_zero())
}

fn small_basis(k: usize) -> impl Strategy<Value = Lattice> {
    prop::collection::vec(-6i64..=6, k * k)
        .prop_map(move |v| {
            let cols: Vec<&[i64]> = v.chunks(k).collect();
            Lattice::from_columns_i64(&cols).unwrap()
        })
        .prop_filter("full rank", |l| !l.det().is_zero())
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn dist_sq(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Exact distance by scanning every integer point within the Babai
/// distance of `v` and testing membership through the coordinates.
fn brute_distance_sq(lat: &Lattice, v: &[BigInt]) -> BigInt {
    let z = coordinates(lat, v).unwrap();
    let k = lat.rank();
    let rounded: Vec<BigInt> = z.iter().map(|c| c.round().to_integer()).collect();
    let babai: Vec<BigInt> = (0..k).map(|i| (0..k).map(|j| &lat.basis[j][i] * &rounded[j]).sum()).collect();
    let mut best = dist_sq(&babai, v);
    let r: i64 = best.sqrt().try_into().unwrap();
    let v64: Vec<i64> = v.iter().map(|x| x.try_into().unwrap()).collect();
    let mut w = vec![0i64; k];
    fn walk(i: usize, w: &mut Vec<i64>, v: &[i64], r: i64, lat: &Lattice, best: &mut BigInt) {
        if i == w.len() {
            let wb = big_vec(w);
            let vb = big_vec(v);
            let d = dist_sq(&wb, &vb);
            if d < *best && coordinates(lat, &wb).unwrap().iter().all(|c| c.is_integer()) {
                *best = d;
            }
            return;
        }
        for t in v[i] - r..=v[i] + r {
            w[i] = t;
            walk(i + 1, w, v, r, lat, best);
        }
    }
    walk(0, &mut w, &v64, r, lat, &mut best);
    best
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn matveev_grows_with_b(b in 3u64..1_000_000, extra in 1u64..1_000_000, a in 1u32..50) {
        let inst = |b: u64| MatveevInstance { t: 3, d: 3, b: b.into(), a: vec![ball("0.5"), Ball::exact_int(a), ball("1.9")] };
        let lo = matveev_lower(&inst(b), 128).unwrap();
        let hi = matveev_lower(&inst(b + extra), 128).unwrap();
        prop_assert!(lo.certainly_lt(&hi));
    }

    #[test]
    fn bl_grows_with_exponents(b1 in 1u64..1_000_000_000, extra in 1u64..1_000_000_000, b2 in 1u64..1000) {
        let inst = |b1: u64| BLInstance { p: 2, g: 3, d: 6, h1: ball("2.5"), h2: ball("0.7"), b1: b1.into(), b2: b2.into() };
        let lo = bl_upper(&inst(b1), 128).unwrap();
        let hi = bl_upper(&inst(b1 + extra), 128).unwrap();
        prop_assert!(lo.certainly_le(&hi));
    }

    #[test]
    fn guzman_luca_dominates(m in 1u32..=4, mant in 1u32..10, exp in 10u32..40) {
        let t = Ball::from_decimal(&format!("{mant}e{exp}"), 128).unwrap();
        let z = guzman_luca(m, &t).unwrap();
        // z / (log z)^m >= T, so every solution of the inequality lies below z
        let ratio = z.div(&z.ln().unwrap().pow_u(m as u64)).unwrap();
        prop_assert!(t.certainly_le(&ratio));
    }

    #[test]
    fn trib_paths_agree(n in 0u64..400, m in 2u64..10_000) {
        let t = trib(n);
        prop_assert_eq!(&t, &trib_matrix(n));
        prop_assert_eq!(BigInt::from(trib_mod(n, m)), t % m);
    }

    #[test]
    fn period_returns_the_seed(k in 1u32..=9) {
        let m = 1u64 << k;
        let per = period_mod(m).unwrap();
        for n in 0..3 {
            prop_assert_eq!(trib_mod(n + per, m), trib_mod(n, m));
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn lll_invariants_on_3x3(lat in basis3()) {
        let red = lll_reduce(&lat).unwrap();
        prop_assert!(red.is_lll_reduced());
        prop_assert_eq!(red.det().abs(), lat.det().abs());
        for b in &red.basis {
            prop_assert!(coordinates(&lat, b).unwrap().iter().all(|c| c.is_integer()));
        }
        for b in &lat.basis {
            prop_assert!(coordinates(&red, b).unwrap().iter().all(|c| c.is_integer()));
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn cvp_matches_brute_force(lat in small_basis(3), v in prop::collection::vec(-20i64..=20, 3)) {
        let red = lll_reduce(&lat).unwrap();
        let v = big_vec(&v);
        let got = closest_distance_sq(&red, &v).unwrap();
        prop_assert_eq!(got, BigRational::from_integer(brute_distance_sq(&red, &v)));
    }

    #[test]
    fn lemma_gap_never_exceeds_distance(lat in small_basis(3), v in prop::collection::vec(-50i64..=50, 3)) {
        let red = lll_reduce(&lat).unwrap();
        let v = big_vec(&v);
        let gap = lattice_gap(&red, &v).unwrap();
        if !gap.v_in_lattice {
            prop_assert!(gap.c2_sq <= closest_distance_sq(&red, &v).unwrap());
        }
    }

    #[test]
    fn cf_of_square_roots(k in 2u64..5000, m_exp in 3u32..30) {
        prop_assume!(k.sqrt() * k.sqrt() != k);
        let m = num_traits::pow(BigInt::from(10), m_exp as usize);
        let mu = parse_mu(&format!("sqrt{k}")).unwrap();
        let e = cf_expand("sqrt", &mu, &m, Precision::default()).unwrap();
        prop_assert_eq!(&e.partial_quotients[0], &BigInt::from(k.sqrt()));
        prop_assert!(e.convergent_identity_holds());
        prop_assert!(e.legendre_certified(&mu).unwrap());
        let n = e.index_beyond(&m).unwrap();
        prop_assert!(n == 0 || e.convergents[n - 1].1 <= m);
        let a = legendre_floor(&e, &m).unwrap();
        // quotients of sqrt k are bounded by 2 floor(sqrt k)
        prop_assert!(a <= BigInt::from(2 * k.sqrt()));
    }
}

const ORACLE_D: u64 = 40;
const ORACLE_CAP: u64 = 100_000;

fn oracle_rows() -> &'static [SminRow] {
    static ROWS: OnceLock<Vec<SminRow>> = OnceLock::new();
    ROWS.get_or_init(|| smin_table(2, ORACLE_D, &BigInt::from(ORACLE_CAP), 128, Exec::default()).unwrap())
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn exact_valuation_within_bound(n in 0u64..=ORACLE_CAP, d in 1u64..=ORACLE_D) {
        prop_assume!(n != 1);
        let row = &oracle_rows()[d as usize - 1];
        let v = exact_nu_diff(n, d, 2).unwrap();
        prop_assert!(v <= row.bound, "n = {}, d = {}, nu = {}, bound = {}", n, d, v, row.bound);
    }

    #[test]
    fn high_valuation_lands_in_a_scanned_class(n in 2u64..20_000, d in 1u64..=60, p in prop::sample::select(vec![2u32, 3])) {
        let k0 = if p == 2 { 8 } else { 4 };
        let v = exact_nu_diff(n, d, p).unwrap();
        if v >= k0 {
            let period = period_mod((p as u64).pow(k0)).unwrap();
            let n0 = (n - 1) % period + 1;
            prop_assert!(scan_residues(d, p, k0).unwrap().contains(&n0));
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn search_is_deterministic_and_exact(n_max in 2u64..60, x_max in 0u64..60, y_max in 0u64..40, threads in 2usize..5) {
        let bx = SearchBox { n_max, x_max, y_max, sign: Sign::All, min_reps: 2 };
        let seq = count_representations(&bx, &CountOptions { exec: Exec::Sequential, ..Default::default() }).unwrap().0;
        let par = count_representations(&bx, &CountOptions { exec: Exec::Parallel { threads }, ..Default::default() }).unwrap().0;
        prop_assert_eq!(&seq, &par);
        for r in &seq {
            prop_assert!(r.reps.len() >= 2);
            for rep in &r.reps {
                prop_assert_eq!(&r.c, &(trib(rep.n) - pow23(rep.x, rep.y)));
            }
        }
    }
}
