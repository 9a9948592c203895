//! Tribonacci numbers: exact values, residues, periods and the certified
//! analytic facts (Binet residual, growth between powers of alpha).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{refine_root, ArithError, Ball, PolyZ, Precision, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TribError {
    #[error("period scan overflow for modulus {0}")]
    PeriodScanOverflow(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Exact `T_n` by iteration.
pub fn trib(n: u64) -> BigInt {
    let (mut a, mut b, mut c) = (BigInt::zero(), BigInt::one(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b + &c;
        a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
    }
    a
}

type Mat3 = [[BigInt; 3]; 3];

fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &x[i][k] * &y[k][j]).sum()))
}

/// Exact `T_n` via powers of the companion matrix.
pub fn trib_matrix(n: u64) -> BigInt {
    let z = || BigInt::zero();
    let o = || BigInt::one();
    // (T_{k+2}, T_{k+1}, T_k)^t = C^k (1, 1, 0)^t
    let mut base: Mat3 = [[o(), o(), o()], [o(), z(), z()], [z(), o(), z()]];
    let mut acc: Mat3 = [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]];
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        k >>= 1;
    }
    // T_n is the third row applied to (T_2, T_1, T_0) = (1, 1, 0).
    &acc[2][0] + &acc[2][1]
}

/// `T_{n0}, ..., T_{n0+len-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TribWindow {
    pub start: u64,
    pub values: Vec<BigInt>,
}

impl TribWindow {
    pub fn new(start: u64, len: usize) -> TribWindow {
        let mut values = Vec::with_capacity(len);
        if len > 0 {
            let (mut a, mut b, mut c) = (trib(start), trib(start + 1), trib(start + 2));
            for _ in 0..len {
                let next = &a + &b + &c;
                values.push(std::mem::replace(&mut a, std::mem::replace(&mut b, std::mem::replace(&mut c, next))));
            }
        }
        TribWindow { start, values }
    }

    pub fn get(&self, n: u64) -> Option<&BigInt> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i as usize))
    }

    pub fn satisfies_recurrence(&self) -> bool {
        self.values.windows(4).all(|w| w[3] == &w[2] + &w[1] + &w[0])
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

type Mat3m = [[u64; 3]; 3];

fn mat_mul_mod(x: &Mat3m, y: &Mat3m, m: u64) -> Mat3m {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(0u64, |s, k| (s + mulmod(x[i][k], y[k][j], m)) % m))
    })
}

/// `T_n mod m` by matrix powering.
pub fn trib_mod(n: u64, m: u64) -> u64 {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return 0;
    }
    let mut base: Mat3m = [[1, 1, 1], [1, 0, 0], [0, 1, 0]];
    let mut acc: Mat3m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul_mod(&acc, &base, m);
        }
        base = mat_mul_mod(&base, &base, m);
        k >>= 1;
    }
    (acc[2][0] + acc[2][1]) % m
}

/// `T_0 .. T_{len-1} mod m` by iteration.
pub fn trib_mod_table(len: usize, m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let (mut a, mut b, mut c) = (0u64, 1 % m, 1 % m);
    for _ in 0..len {
        out.push(a);
        let next = ((a as u128 + b as u128 + c as u128) % m as u128) as u64;
        (a, b, c) = (b, c, next);
    }
    out
}

/// Least period of the Tribonacci sequence modulo `m`, found by scanning
/// states from the seed until the seed state recurs.
pub fn period_mod(m: u64) -> Result<u64, TribError> {
    if m < 2 {
        return Err(TribError::Precondition("modulus must be at least 2".into()));
    }
    let limit = 6u128 * (m as u128).pow(3);
    let seed = (0u64, 1u64, 1u64);
    let (mut a, mut b, mut c) = seed;
    let mut k: u128 = 0;
    loop {
        let next = ((a as u128 + b as u128 + c as u128) % m as u128) as u64;
        (a, b, c) = (b, c, next);
        k += 1;
        if (a, b, c) == seed {
            return Ok(k as u64);
        }
        if k > limit {
            return Err(TribError::PeriodScanOverflow(m));
        }
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The dominant root of X^3 - X^2 - X - 1.
pub fn alpha() -> Real {
    Real::from_fn(|p| refine_root(&PolyZ::psi(), (&rat(1, 1), &rat(2, 1)), p + 4).map(|b| b.with_prec(p)))
}

/// C_alpha = (alpha - 1)/(4 alpha - 6), the real root of 44X^3 - 44X^2 + 12X - 1.
pub fn c_alpha() -> Real {
    Real::from_fn(|p| refine_root(&PolyZ::c_alpha_poly(), (&rat(1, 2), &rat(1, 1)), p + 4).map(|b| b.with_prec(p)))
}

pub fn log_alpha() -> Real {
    alpha().ln()
}

/// |beta| = |gamma| = alpha^(-1/2).
pub fn beta_abs() -> Real {
    Real::int(1).div(&alpha().sqrt())
}

/// |C_beta|, from |C_beta|^2 C_alpha = 1/44.
pub fn c_beta_abs() -> Real {
    Real::int(1).div(&c_alpha().scale_int(44)).sqrt()
}

/// Certified enclosures of the field constants at one precision.
#[derive(Clone, Debug)]
pub struct FieldConstants {
    pub alpha: Ball,
    pub beta_abs: Ball,
    pub c_alpha: Ball,
    pub c_beta_abs: Ball,
    pub psi: PolyZ,
    pub p_poly: PolyZ,
}

impl FieldConstants {
    pub fn at(prec: u32) -> Result<FieldConstants, ArithError> {
        Ok(FieldConstants {
            alpha: alpha().eval(prec)?,
            beta_abs: beta_abs().eval(prec)?,
            c_alpha: c_alpha().eval(prec)?,
            c_beta_abs: c_beta_abs().eval(prec)?,
            psi: PolyZ::psi(),
            p_poly: PolyZ::c_alpha_poly(),
        })
    }

    /// The numeric ranges every enclosure must sit in.
    pub fn within_documented_ranges(&self) -> bool {
        let inside = |b: &Ball, lo: &str, hi: &str| {
            b.certainly_gt(&Ball::from_decimal(lo, 64).unwrap()) && b.certainly_lt(&Ball::from_decimal(hi, 64).unwrap())
        };
        inside(&self.alpha, "1.83", "1.84")
            && inside(&self.beta_abs, "0.73", "0.74")
            && inside(&self.c_alpha, "0.61", "0.62")
            && inside(&self.c_beta_abs, "0.19", "0.20")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub n_max: u64,
    pub passed: bool,
    pub first_failure: Option<u64>,
    pub max_prec_used: u32,
    pub notes: Vec<String>,
}

/// Runs `decide(n, T_n, alpha^(n-1), alpha)` for n = 0..=n_max, raising
/// precision whenever a single n cannot be decided. `decide` returns
/// `Some(true)` (certified), `Some(false)` (certified violation) or `None`.
fn sweep(
    name: &str,
    n_max: u64,
    policy: Precision,
    mut decide: impl FnMut(u64, &BigInt, &Ball, &Ball) -> Option<bool>,
) -> Result<SweepReport, ArithError> {
    let a = alpha();
    let mut report = SweepReport {
        name: name.into(),
        n_max,
        passed: true,
        first_failure: None,
        max_prec_used: policy.start,
        notes: vec![],
    };
    let (mut t0, mut t1, mut t2) = (BigInt::zero(), BigInt::one(), BigInt::one());
    let mut levels = policy.levels().peekable();
    let mut prec = *levels.peek().unwrap();
    let mut al = a.eval(prec + 32)?;
    let mut pw = Ball::one().with_prec(prec + 32).div(&al)?;
    let mut n = 0u64;
    while n <= n_max {
        match decide(n, &t0, &pw, &al) {
            Some(true) => {
                let next = &t0 + &t1 + &t2;
                (t0, t1, t2) = (t1, t2, next);
                pw = pw.mul(&al);
                n += 1;
            }
            Some(false) => {
                report.passed = false;
                report.first_failure = Some(n);
                return Ok(report);
            }
            None => {
                levels.next();
                match levels.peek() {
                    Some(&p) => {
                        prec = p;
                        report.max_prec_used = p;
                        al = a.eval(prec + 32)?;
                        pw = al.pow_i(n as i64 - 1)?;
                    }
                    None => {
                        report.passed = false;
                        report.first_failure = Some(n);
                        report.notes.push(format!("uncertifiable at n = {n} within cap {} bits", policy.cap));
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Certifies |T_n - C_alpha alpha^(n-1)| < 1/2 for all n <= n_max.
pub fn binet_residual_check(n_max: u64, policy: Precision) -> Result<SweepReport, ArithError> {
    let ca = c_alpha();
    let mut cache: Option<(u32, Ball)> = None;
    sweep("binet_residual", n_max, policy, |_, t, pw, _| {
        let p = pw.prec();
        if cache.as_ref().map(|c| c.0) != Some(p) {
            cache = Some((p, ca.eval(p).ok()?));
        }
        let v = cache.as_ref().unwrap().1.mul(pw);
        // Form the residual first: T_n +- 1/2 would round the 1/2 away once T_n is large.
        let r = v.sub(&Ball::exact_int(t.clone()).with_prec(p)).abs();
        let half = Ball::from_ratio(&BigInt::one(), &BigInt::from(2), p).unwrap();
        if r.certainly_lt(&half) {
            Some(true)
        } else if half.certainly_le(&r) {
            Some(false)
        } else {
            None
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeOutcome {
    pub n: u64,
    /// alpha^(n-2) versus T_n
    pub left: Relation,
    /// T_n versus alpha^(n-1)
    pub right: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub sweep: SweepReport,
    /// Strict inequalities hold for every 3 <= n <= n_max.
    pub strict_from_3: bool,
    /// Exact outcomes at n = 1 and n = 2.
    pub edges: Vec<EdgeOutcome>,
}

impl GrowthReport {
    /// Strict for n >= 3, and at the edges the non-strict version holds.
    pub fn passed(&self) -> bool {
        self.strict_from_3 && self.edges.iter().all(|e| e.left != Relation::Greater && e.right != Relation::Greater)
    }
}

fn relate(a: &Ball, b: &Ball) -> Option<Relation> {
    if a.certainly_lt(b) {
        Some(Relation::Less)
    } else if b.certainly_lt(a) {
        Some(Relation::Greater)
    } else if a.is_exact() && b.is_exact() && a.lo() == b.lo() {
        Some(Relation::Equal)
    } else {
        None
    }
}

/// Certifies alpha^(n-2) < T_n < alpha^(n-1) for 3 <= n <= n_max and
/// reports the exact outcome at n = 1, 2 (where a power alpha^0 = 1 occurs).
pub fn growth_check(n_max: u64, policy: Precision) -> Result<GrowthReport, ArithError> {
    let mut edges = vec![];
    let sweep = sweep("growth", n_max, policy, |n, t, pw, al| {
        if n == 0 {
            return Some(true);
        }
        let tb = Ball::exact_int(t.clone());
        let upper = if n == 1 { Ball::one() } else { pw.clone() };
        let lower = match n {
            1 => pw.div(al).ok()?,
            2 => Ball::one(),
            _ => pw.div(al).ok()?,
        };
        let left = relate(&lower, &tb)?;
        let right = relate(&tb, &upper)?;
        if n <= 2 {
            if !edges.iter().any(|e: &EdgeOutcome| e.n == n) {
                edges.push(EdgeOutcome { n, left, right });
            }
            return Some(true);
        }
        Some(left == Relation::Less && right == Relation::Less)
    })?;
    let strict_from_3 = sweep.passed;
    Ok(GrowthReport { sweep, strict_from_3, edges })
}
