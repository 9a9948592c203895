//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 2 (the full reduced boxes) takes hours; set TRIPILLAI_FULL=1 to
//! include it. Two items are known not to hold as stated and are reported as
//! FAIL while their actual values are pinned: the 2-adic cap for c >= 1 and
//! the (4, 3) pair of the gamma check.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tripillai_core::arith::Precision;
use tripillai_core::baker::{bound_chain, find};
use tripillai_core::cfrac::{cf_expand, legendre_floor, parse_mu};
use tripillai_core::exec::Exec;
use tripillai_core::lattice::{coordinates, lll_reduce, pow10, Lattice};
use tripillai_core::padic::{exact_nu_diff, scan_residues, smin_bound, ResidueTable, SminReport};
use tripillai_core::pipeline::{decimal_int_ceil, reduce, ReduceConfig};
use tripillai_core::search::{smoothness_scan, verify_scenario, CountOptions, SearchBox};
use tripillai_core::sextic::gamma_lemma_check;
use tripillai_core::trib::{binet_residual_check, growth_check, trib_mod_table};
use tripillai_core::Scenario;

const DESK_LIMIT: Duration = Duration::from_secs(600);
const SMOOTH_LIMIT: Duration = Duration::from_secs(30);
const CHAIN_TOL: f64 = 0.05;
const CHAIN_LIMIT: Duration = Duration::from_secs(10);
const CF_M_EXP: u32 = 48;
const CF_EXPECTED_A: u64 = 55;
const SCAN_K0: u32 = 8;
const SCAN_D_MAX: u64 = 285;
const NONEMPTY_2ADIC: usize = 214;
const POSITIVE_CAP_LT: u32 = 128;
const NEGATIVE_CAP_LE: u32 = 152;
const ORACLE_SAMPLES: usize = 1000;
const ORACLE_N_MAX: u64 = 100_000;
const SWEEP_N_MAX: u64 = 2000;
const LLL_BASES: usize = 100;

struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        println!("criterion {id:<3} {}  {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.unexpected.push(id.to_string());
        }
    }

    /// A criterion that cannot hold as stated: printed as FAIL, and the run
    /// only breaks if the observed value drifts from the pinned one.
    fn known_fail(&mut self, id: &str, ok: bool, pinned: bool, detail: String) {
        println!("criterion {id:<3} {}  {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok && !pinned {
            self.unexpected.push(format!("{id} (value moved)"));
        }
    }
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let mut parts = vec![];
    let mut ok = true;
    for s in Scenario::ALL {
        let bx = if s == Scenario::Zero { SearchBox::reduced(s) } else { SearchBox::desk(s) };
        let c = verify_scenario(s, &bx, &CountOptions::default()).expect("search runs");
        ok &= c.passed && c.found.len() == c.found.iter().filter(|f| f.reps.len() >= bx.min_reps).count();
        parts.push(format!("{s}: {} records", c.found.len()));
    }
    let t = start.elapsed();
    r.line("1", ok && t < DESK_LIMIT, format!("desk search {} in {:.1} s", parts.join(", "), t.as_secs_f64()));
}

fn criterion_2(r: &mut Report) {
    if std::env::var("TRIPILLAI_FULL").map_or(true, |v| v != "1") {
        println!("criterion 2   SKIP  full reduced boxes (set TRIPILLAI_FULL=1)");
        return;
    }
    let mut ok = true;
    for s in Scenario::ALL {
        let c = verify_scenario(s, &SearchBox::reduced(s), &CountOptions::default()).expect("search runs");
        ok &= c.passed;
    }
    r.line("2", ok, "full reduced boxes".into());
}

fn criterion_3(r: &mut Report) {
    let start = Instant::now();
    let ns: Vec<u64> = smoothness_scan(10_000).iter().map(|p| p.n).collect();
    let t = start.elapsed();
    r.line("3", ns == [1, 2, 3, 4, 7, 9] && t < SMOOTH_LIMIT, format!("smooth T_n at n = {ns:?} in {:.3} s", t.as_secs_f64()));
}

/// First return of the state (T_k, T_k+1, T_k+2) mod m to the seed.
fn cycle_scan(m: u64, limit: usize) -> Option<usize> {
    let t = trib_mod_table(limit + 3, m);
    (1..=limit).find(|&k| t[k..k + 3] == t[0..3])
}

fn criterion_4(r: &mut Report) {
    let mut ok = true;
    for k in 1..=10u32 {
        let want = 1usize << (k + 1);
        ok &= cycle_scan(1 << k, 2 * want) == Some(want);
    }
    for k in 0..=5u32 {
        let want = 13 * 3usize.pow(k);
        ok &= cycle_scan(3u64.pow(k + 1), 2 * want) == Some(want);
    }
    r.line("4", ok, "period 2^(k+1) mod 2^k (k <= 10) and 13*3^k mod 3^(k+1) (k <= 5)".into());
}

fn criterion_5(r: &mut Report) {
    let targets = [
        (Scenario::Positive, "n_minus_n1", 9.6e15),
        (Scenario::Positive, "x_minus_x1", 8.5e30),
        (Scenario::Positive, "x_min", 1e22),
        (Scenario::Positive, "n_bound", 1.2e37),
        (Scenario::Negative, "x_minus_x1", 5.55e15),
        (Scenario::Negative, "n_minus_n1", 2e15),
        (Scenario::Negative, "x_min", 2e21),
        (Scenario::Negative, "n_bound", 6.1e29),
    ];
    let start = Instant::now();
    let pos = bound_chain(Scenario::Positive).expect("chain");
    let neg = bound_chain(Scenario::Negative).expect("chain");
    let t = start.elapsed();
    // One-sided: a derived constant may undercut the published one (which
    // is then carried downstream) but may not exceed it by more than 5%.
    let mut worst: f64 = 0.0;
    let mut tighter = vec![];
    for (s, id, want) in targets {
        let chain = if s == Scenario::Positive { &pos } else { &neg };
        let v: f64 = find(chain, id).expect("link").value.parse().expect("decimal");
        worst = worst.max(v / want - 1.0);
        if v < want * (1.0 - CHAIN_TOL) {
            tighter.push(format!("{s} {id} {v:.4e}"));
        }
    }
    r.line(
        "5",
        worst <= CHAIN_TOL && t < CHAIN_LIMIT,
        format!(
            "8 chain constants, largest excess {:.2}% in {:.2} s; below by more than 5%: {}",
            100.0 * worst.max(0.0),
            t.as_secs_f64(),
            if tighter.is_empty() { "none".into() } else { tighter.join(", ") }
        ),
    );
}

fn criterion_6(r: &mut Report) -> u64 {
    let limits = [
        (Scenario::Positive, "n_minus_n1", 300),
        (Scenario::Positive, "x_minus_x1", 185),
        (Scenario::Negative, "x_minus_x1", 150),
        (Scenario::Negative, "n_minus_n1", 440),
    ];
    let mut ok = true;
    let mut parts = vec![];
    let mut positive_d_max = 0;
    for s in [Scenario::Positive, Scenario::Negative] {
        let rep = reduce(s, &ReduceConfig::default()).expect("reduction");
        if s == Scenario::Positive {
            positive_d_max = rep.d_max;
        }
        for st in &rep.stages {
            let (_, _, lim) = limits.iter().find(|(ls, id, _)| *ls == s && *id == st.id).expect("stage has a limit");
            ok &= st.bound <= *lim;
            parts.push(format!("{s} {} {} <= {lim}", st.id, st.bound));
        }
    }
    r.line("6", ok, parts.join(", "));
    positive_d_max
}

fn criterion_7(r: &mut Report) {
    let m = pow10(CF_M_EXP);
    let e = cf_expand("log3/log2", &parse_mu("log3/log2").unwrap(), &m, Precision::default()).expect("expansion");
    let a = legendre_floor(&e, &m).expect("threshold reached");
    r.line("7", a == BigInt::from(CF_EXPECTED_A), format!("a(1e{CF_M_EXP}) = {a} for log3/log2"));
}

fn criterion_8a(r: &mut Report) {
    let scan = scan_residues(9, 2, SCAN_K0).expect("scan");
    let table = ResidueTable::new(2, SCAN_K0, SCAN_D_MAX).expect("table");
    let nonempty = (1..=SCAN_D_MAX).filter(|&d| !table.scan(d).is_empty()).count();
    r.line(
        "8a",
        scan.contains(&167) && nonempty == NONEMPTY_2ADIC,
        format!("scan(9, 2, 8) = {scan:?}; {nonempty} of d <= {SCAN_D_MAX} nonempty"),
    );
}

fn smin(d_max: u64, n_cap: &str) -> SminReport {
    smin_bound(d_max, &decimal_int_ceil(n_cap).unwrap(), Exec::default()).expect("p-adic bound")
}

fn criterion_8b(r: &mut Report, positive: &SminReport) {
    let negative = smin(417, "6.1e29");
    let (px, py) = (positive.x_min_bound, positive.y_min_bound);
    let (nx, ny) = (negative.x_min_bound, negative.y_min_bound);
    let neg_ok = nx <= NEGATIVE_CAP_LE && ny <= NEGATIVE_CAP_LE;
    let pos_ok = px < POSITIVE_CAP_LT && py < POSITIVE_CAP_LT;
    // The 2-adic cap for c >= 1 is 133 (d = 224); see the notes in the README.
    let pinned = neg_ok && (px, py) == (133, 84);
    r.known_fail(
        "8b",
        pos_ok && neg_ok,
        pinned,
        format!("c >= 1: ({px}, {py}) vs < {POSITIVE_CAP_LT}; c <= -1: ({nx}, {ny}) vs <= {NEGATIVE_CAP_LE}"),
    );
}

/// T_n mod 2^256 for n <= len, by iteration.
fn trib_low_bits(len: usize) -> Vec<BigUint> {
    let mask = (BigUint::one() << 256u32) - 1u32;
    let mut out = Vec::with_capacity(len + 1);
    let (mut a, mut b, mut c) = (BigUint::zero(), BigUint::one(), BigUint::one());
    for _ in 0..=len {
        out.push(a.clone());
        let next = (&a + &b + &c) & &mask;
        (a, b, c) = (b, c, next);
    }
    out
}

fn criterion_8c(r: &mut Report, positive: &SminReport) {
    let low = trib_low_bits((ORACLE_N_MAX + SCAN_D_MAX) as usize);
    let modulus = BigInt::one() << 256u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7121);
    let mut worst_margin = i64::MAX;
    let mut ok = true;
    for _ in 0..ORACLE_SAMPLES {
        // n = 1 repeats n = 2 with d shifted by one, and is excluded
        let n = match rng.gen_range(0..=ORACLE_N_MAX) {
            1 => 2,
            v => v,
        };
        let d = rng.gen_range(1..=SCAN_D_MAX);
        let diff = (BigInt::from(low[(n + d) as usize].clone()) - BigInt::from(low[n as usize].clone())) % &modulus;
        let nu = match diff.trailing_zeros() {
            Some(v) => v as u32,
            None => exact_nu_diff(n, d, 2).expect("nonzero difference"),
        };
        let bound = positive.rows.iter().find(|row| row.p == 2 && row.d == d).expect("row").bound;
        ok &= nu <= bound;
        worst_margin = worst_margin.min(bound as i64 - nu as i64);
    }
    r.line("8c", ok, format!("{ORACLE_SAMPLES} random (n, d): exact nu_2 within the per-d cap, least margin {worst_margin}"));
}

fn random_basis(rng: &mut ChaCha8Rng) -> Lattice {
    loop {
        let v: Vec<i64> = (0..9).map(|_| rng.gen_range(-1000..=1000)).collect();
        let l = Lattice::from_columns_i64(&[&v[0..3], &v[3..6], &v[6..9]]).unwrap();
        if !l.det().is_zero() {
            return l;
        }
    }
}

fn criterion_9(r: &mut Report) {
    let binet = binet_residual_check(SWEEP_N_MAX, Precision::default()).expect("sweep");
    let growth = growth_check(SWEEP_N_MAX, Precision::default()).expect("sweep");
    r.line("9a", binet.passed && growth.passed(), format!("Binet residual and growth window for n <= {SWEEP_N_MAX}"));

    let g = gamma_lemma_check();
    let equal: Vec<(u32, u32)> = g.pairs.iter().filter(|p| p.equal).map(|p| (p.u, p.v)).collect();
    r.known_fail(
        "9b",
        g.passed && g.pairs.len() == 18,
        g.pairs.len() == 18 && equal == [(4, 3)],
        format!("{} gamma pairs, equalities at {equal:?}", g.pairs.len()),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x111);
    let mut ok = true;
    for _ in 0..LLL_BASES {
        let l = random_basis(&mut rng);
        let red = lll_reduce(&l).expect("reduction");
        ok &= red.is_lll_reduced() && red.det().magnitude() == l.det().magnitude();
        ok &= red.basis.iter().all(|b| coordinates(&l, b).unwrap().iter().all(|c| c.is_integer()));
    }
    r.line("9c", ok, format!("LLL invariants on {LLL_BASES} random 3x3 bases"));
}

fn main() -> ExitCode {
    let mut r = Report { unexpected: vec![] };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    let d_max = criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8a(&mut r);
    let positive = smin(SCAN_D_MAX, "1.2e37");
    println!("              (reduced range for c >= 1 is d <= {d_max}; caps above use d <= {SCAN_D_MAX})");
    criterion_8b(&mut r, &positive);
    criterion_8c(&mut r, &positive);
    criterion_9(&mut r);
    if r.unexpected.is_empty() {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {:?}", r.unexpected);
        ExitCode::FAILURE
    }
}
