//! p-adic valuations of T_{n+d} - T_n.
//!
//! For a residue class n = n0 + period z the difference is a p-adic analytic
//! function of z. With C the companion matrix of X^3 - X^2 - X - 1 and
//! period = e p^s, C^period = exp(p^s log C^e), so
//!
//!   2 (T_{n+d} - T_n) = tr(G exp(z M)),  M = p^s log(C^e),
//!   G = (C^d - I)(C - I)(2C - 3I)^{-1} C^{n0 - 1}.
//!
//! Truncating log and exp gives a polynomial F(z) that is exact mod p^{N_F}
//! for every z in Z_p. All series work is on 3x3 integer matrices mod p^W.

mod hensel;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::trib::{period_mod, trib_mod_table, TribError};

pub use hensel::{hensel_bound, smin_bound, smin_prime, smin_table, HenselOutcome, SminReport, SminRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("unsupported prime {0}")]
    Prime(u32),
    #[error("precision budget exceeded; raise N+slack ({0})")]
    PrecisionBudget(String),
    #[error("lifting ambiguous: {live} live classes at depth {depth}")]
    Ambiguous { depth: u32, live: usize },
    #[error("invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Trib(#[from] TribError),
}

/// Extra p-adic digits carried through every division.
pub const SLACK: u32 = 64;
pub const DEFAULT_N: u32 = 128;
pub const DEFAULT_K0: u32 = 8;
pub const DEFAULT_TRUNC_LOG: u32 = 120;

/// Exact valuation of an integer; `None` for zero.
pub fn nu_int(x: &BigInt, p: u32) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// Exact valuation of a rational; `None` stands for infinity.
pub fn nu_p(x: &BigRational, p: u32) -> Option<i64> {
    let a = nu_int(x.numer(), p)? as i64;
    let b = nu_int(x.denom(), p).expect("denominator is nonzero") as i64;
    Some(a - b)
}

fn nu_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Valuation of an integer known mod p^w, capped at w.
fn nu_mod(x: &BigInt, p: u32, w: u32) -> u32 {
    nu_int(x, p).map_or(w, |v| v.min(w))
}

type Mat = [[BigInt; 3]; 3];

fn ident() -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from((i == j) as u8)))
}

fn companion() -> Mat {
    // multiplication by x on the basis 1, x, x^2 modulo x^3 - x^2 - x - 1
    let c = [[0, 0, 1], [1, 0, 1], [0, 1, 1]];
    c.map(|r| r.map(BigInt::from))
}

fn mat_mul(a: &Mat, b: &Mat, m: Option<&BigInt>) -> Mat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let s: BigInt = (0..3).map(|k| &a[i][k] * &b[k][j]).sum();
            match m {
                Some(m) => s.mod_floor(m),
                None => s,
            }
        })
    })
}

fn mat_lin(a: &Mat, b: &Mat, cb: i64, m: &BigInt) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| (&a[i][j] + &b[i][j] * cb).mod_floor(m)))
}

fn mat_scale(a: &Mat, c: &BigInt, m: &BigInt) -> Mat {
    a.clone().map(|r| r.map(|x| (x * c).mod_floor(m)))
}

fn mat_pow(a: &Mat, mut e: u64, m: Option<&BigInt>) -> Mat {
    let mut acc = ident();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base, m);
        }
        base = mat_mul(&base, &base, m);
        e >>= 1;
    }
    acc
}

fn trace(a: &Mat) -> BigInt {
    &a[0][0] + &a[1][1] + &a[2][2]
}

fn minor(a: &Mat, r: [usize; 2], c: [usize; 2]) -> BigInt {
    &a[r[0]][c[0]] * &a[r[1]][c[1]] - &a[r[0]][c[1]] * &a[r[1]][c[0]]
}

fn det(a: &Mat) -> BigInt {
    &a[0][0] * minor(a, [1, 2], [1, 2]) - &a[0][1] * minor(a, [1, 2], [0, 2]) + &a[0][2] * minor(a, [1, 2], [0, 1])
}

/// Sum of the principal 2x2 minors (second symmetric function of the eigenvalues).
fn sym2(a: &Mat) -> BigInt {
    minor(a, [0, 1], [0, 1]) + minor(a, [0, 2], [0, 2]) + minor(a, [1, 2], [1, 2])
}

fn min_nu(a: &Mat, p: u32, w: u32) -> u32 {
    a.iter().flatten().map(|x| nu_mod(x, p, w)).min().unwrap()
}

pub(crate) fn inv_mod(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = x.mod_floor(m).extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

fn mat_inv_mod(a: &Mat, m: &BigInt) -> Option<Mat> {
    let di = inv_mod(&det(a), m)?;
    let idx = |k: usize| -> [usize; 2] {
        match k {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    };
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let cof = minor(a, idx(j), idx(i));
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            (signed * &di).mod_floor(m)
        })
    }))
}

fn pow_big(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn u64_pow(p: u32, e: u32) -> Option<u64> {
    (p as u64).checked_pow(e)
}

/// All n0 in [1, period(p^k0)] with p^k0 | T_{n0+d} - T_{n0}.
pub fn scan_residues(d: u64, p: u32, k0: u32) -> Result<Vec<u64>, PadicError> {
    Ok(ResidueTable::new(p, k0, d)?.scan(d))
}

/// T mod p^k0 over one period plus the largest shift, shared across d.
pub struct ResidueTable {
    pub p: u32,
    pub k0: u32,
    pub period: u64,
    table: Vec<u64>,
}

impl ResidueTable {
    pub fn new(p: u32, k0: u32, d_max: u64) -> Result<ResidueTable, PadicError> {
        let m = u64_pow(p, k0).ok_or_else(|| PadicError::Invariant("p^k0 overflows u64".into()))?;
        let period = period_mod(m)?;
        if period > 1_000_000 {
            return Err(PadicError::Invariant(format!("period {period} too large for a direct scan")));
        }
        let table = trib_mod_table((period + d_max + 1) as usize, m);
        Ok(ResidueTable { p, k0, period, table })
    }

    pub fn scan(&self, d: u64) -> Vec<u64> {
        assert!(d >= 1 && (self.period + d) < self.table.len() as u64, "shift out of table range");
        (1..=self.period).filter(|&n| self.table[(n + d) as usize] == self.table[n as usize]).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PadicContext {
    pub p: u32,
    /// f = F / 2 is known mod p^n.
    pub n: u32,
    /// Precision of F = 2 f.
    pub n_f: u32,
    /// Working precision n_f + SLACK.
    pub work: u32,
    pub k0: u32,
    pub e: u64,
    pub s: u32,
    pub period: u64,
    pub trunc_log: u32,
    /// Smallest log truncation the tail estimate allows.
    pub trunc_log_min: u32,
    pub trunc_exp: u32,
    /// Entry valuations of X = I - C^e and X^3.
    pub nu_x: u32,
    pub nu_x3: u32,
    /// Entry valuation of M = p^s log(C^e).
    pub nu_m: u32,
    /// Symmetric functions of the eigenvalues of log(C^e), mod p^n.
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub sym: Vec<BigInt>,
    #[serde(skip)]
    m_mat: Mat,
    #[serde(skip)]
    modulus: BigInt,
}

/// The log tail sum_{n > t} p^s X^n / n has valuation at least n_f once
/// s + w(n) - nu_p(n) >= n_f for all n > t, with w(n) = max(n v1, floor(n/3) v3).
fn log_truncation(p: u32, s: u32, v1: u32, v3: u32, n_f: u32) -> Result<u32, PadicError> {
    if v1 == 0 && v3 == 0 {
        return Err(PadicError::Invariant("I - C^e is not topologically nilpotent".into()));
    }
    let ok = |n: u64| {
        let w = (n * v1 as u64).max((n / 3) * v3 as u64);
        s as u64 + w >= n_f as u64 + nu_u64(n, p as u64) as u64
    };
    // Past this point w grows at slope >= 1/3 and nu_p(n) <= log2(n) cannot catch up.
    let hi = 4 * (n_f as u64 + s as u64) + 64;
    let last_bad = (1..=hi).rev().find(|&n| !ok(n)).unwrap_or(0);
    Ok(last_bad as u32)
}

/// Smallest t with k nu_m - nu_p(k!) >= n_f for all k > t, via nu_p(k!) <= (k - 1)/(p - 1).
fn exp_truncation(p: u32, nu_m: u32, n_f: u32) -> Result<u32, PadicError> {
    let (p, v, nf) = (p as u64, nu_m as u64, n_f as u64);
    if v * (p - 1) <= 1 {
        return Err(PadicError::Invariant("exp series does not converge".into()));
    }
    let k = (1..).find(|&k: &u64| k * v * (p - 1) >= nf * (p - 1) + k - 1).unwrap();
    Ok((k - 1) as u32)
}

/// Context with the default K0 = 8.
pub fn build_context(p: u32, n: u32) -> Result<PadicContext, PadicError> {
    build_context_with(p, n, DEFAULT_K0, DEFAULT_TRUNC_LOG)
}

pub fn build_context_with(p: u32, n: u32, k0: u32, trunc_log_floor: u32) -> Result<PadicContext, PadicError> {
    if p != 2 && p != 3 {
        return Err(PadicError::Prime(p));
    }
    let n_f = n + nu_u64(2, p as u64);
    let work = n_f + SLACK;
    let modulus = pow_big(p, work);
    let e = period_mod(p as u64)?;
    let period = period_mod(u64_pow(p, k0).ok_or_else(|| PadicError::Invariant("p^k0 overflows".into()))?)?;
    if period % e != 0 {
        return Err(PadicError::Invariant(format!("period {period} not a multiple of {e}")));
    }
    let ratio = period / e;
    let s = nu_u64(ratio, p as u64);
    if u64_pow(p, s) != Some(ratio) {
        return Err(PadicError::Invariant(format!("period {period} is not {e} * {p}^s")));
    }
    let c = companion();
    let ce = mat_pow(&c, e, None);
    let x: Mat = std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from((i == j) as u8) - &ce[i][j]));
    let x3 = mat_mul(&mat_mul(&x, &x, None), &x, None);
    let nu_x = min_nu(&x, p, u32::MAX);
    let nu_x3 = min_nu(&x3, p, u32::MAX);
    let trunc_log_min = log_truncation(p, s, nu_x, nu_x3, n_f)?;
    let trunc_log = trunc_log_min.max(trunc_log_floor);

    // M = -sum_{k <= trunc_log} p^s X^k / k; the division by k costs nu_p(k) <= s digits.
    let mut m_mat: Mat = Default::default();
    let mut xk = ident();
    for k in 1..=trunc_log as u64 {
        xk = mat_mul(&xk, &x, Some(&modulus));
        let vk = nu_u64(k, p as u64);
        if vk > s {
            return Err(PadicError::PrecisionBudget(format!("1/{k} needs {vk} digits, scaling gives {s}")));
        }
        let unit = BigInt::from(k / (p as u64).pow(vk));
        let coef = pow_big(p, s - vk) * inv_mod(&unit, &modulus).unwrap();
        m_mat = mat_lin(&m_mat, &mat_scale(&xk, &coef, &modulus), -1, &modulus);
    }
    let nu_m = min_nu(&m_mat, p, work);
    let trunc_exp = exp_truncation(p, nu_m, n_f)?;

    let mod_n = pow_big(p, n);
    let shrink = |v: BigInt, k: u32| -> Result<BigInt, PadicError> {
        let pk = pow_big(p, s * k);
        if !v.mod_floor(&pk).is_zero() {
            return Err(PadicError::Invariant(format!("symmetric function {k} is not a p-adic integer")));
        }
        Ok((v / pk).mod_floor(&mod_n))
    };
    let sym = vec![
        shrink(trace(&m_mat).mod_floor(&modulus), 1)?,
        shrink(sym2(&m_mat).mod_floor(&modulus), 2)?,
        shrink(det(&m_mat).mod_floor(&modulus), 3)?,
    ];
    if s * 3 + n > work {
        return Err(PadicError::PrecisionBudget("symmetric functions lose more than the slack".into()));
    }
    Ok(PadicContext {
        p,
        n,
        n_f,
        work,
        k0,
        e,
        s,
        period,
        trunc_log,
        trunc_log_min,
        trunc_exp,
        nu_x,
        nu_x3,
        nu_m,
        sym,
        m_mat,
        modulus,
    })
}

/// F(z) = sum_k coeffs[k] z^k = 2 (T_{n+d} - T_n) mod p^{n_f}, n = n0 + period z.
#[derive(Clone, Debug, Serialize)]
pub struct ValuationPoly {
    pub p: u32,
    pub d: u64,
    pub n0: u64,
    pub period: u64,
    pub n_f: u32,
    /// nu_p(2): subtract from nu_p(F) to get nu_p(T_{n+d} - T_n).
    pub shift: u32,
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub coeffs: Vec<BigInt>,
    /// Valuation of each coefficient (capped at n_f).
    pub coeff_nu: Vec<u32>,
}

impl ValuationPoly {
    pub fn modulus(&self) -> BigInt {
        pow_big(self.p, self.n_f)
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        let m = self.modulus();
        let z = z.mod_floor(&m);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| (acc * &z + c).mod_floor(&m))
    }

    /// Coefficients of F(r + p^j t) as a polynomial in t, mod p^{n_f}.
    pub fn taylor(&self, r: &BigInt, j: u32) -> Vec<BigInt> {
        let m = self.modulus();
        let step = pow_big(self.p, j);
        let deg = self.coeffs.len();
        let mut out = Vec::with_capacity(deg);
        let mut step_i = BigInt::one();
        for i in 0..deg {
            // sum_k C(k, i) a_k r^(k - i) by Horner on k descending
            let mut acc = BigInt::zero();
            for k in (i..deg).rev() {
                acc = (acc * r + binom(k, i) * &self.coeffs[k]).mod_floor(&m);
            }
            out.push((acc * &step_i).mod_floor(&m));
            step_i = (step_i * &step).mod_floor(&m);
        }
        out
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn factorial_parts(k: u32, p: u32) -> (u32, BigInt) {
    let mut v = 0;
    let mut unit = BigInt::one();
    for i in 1..=k as u64 {
        let vi = nu_u64(i, p as u64);
        v += vi;
        unit *= i / (p as u64).pow(vi);
    }
    (v, unit)
}

/// 2 (T_{n+d} - T_n) mod m for n = n0 + period z, via matrix powers.
fn direct_value(d: u64, n0: u64, period: u64, z: u64, m: &BigInt) -> BigInt {
    let n = n0 + period * z;
    let diff: BigInt = trib_mod_big(n + d, m) - trib_mod_big(n, m);
    (diff * 2u32).mod_floor(m)
}

/// The x^2 coefficient of x^(k+1) is T_k.
fn trib_mod_big(k: u64, m: &BigInt) -> BigInt {
    mat_pow(&companion(), k + 1, Some(m))[2][0].clone()
}

pub fn valuation_poly(ctx: &PadicContext, d: u64, n0: u64) -> Result<ValuationPoly, PadicError> {
    if d == 0 || n0 == 0 {
        return Err(PadicError::Invariant("need d >= 1 and n0 >= 1".into()));
    }
    let (p, m) = (ctx.p, &ctx.modulus);
    let c = companion();
    let id = ident();
    let two_c_minus_3 = mat_lin(&mat_scale(&c, &BigInt::from(2), m), &id, -3, m);
    let inv = mat_inv_mod(&two_c_minus_3, m)
        .ok_or_else(|| PadicError::Invariant("2C - 3I is not invertible mod p".into()))?;
    let g = [mat_lin(&mat_pow(&c, d, Some(m)), &id, -1, m), mat_lin(&c, &id, -1, m), inv, mat_pow(&c, n0 - 1, Some(m))]
        .iter()
        .fold(ident(), |acc, f| mat_mul(&acc, f, Some(m)));

    // u_k = tr(G M^k): u_0..u_2 directly, the rest by Cayley-Hamilton.
    let gm = mat_mul(&g, &ctx.m_mat, Some(m));
    let gm2 = mat_mul(&gm, &ctx.m_mat, Some(m));
    let (a, b, cc) = (
        trace(&ctx.m_mat).mod_floor(m),
        sym2(&ctx.m_mat).mod_floor(m),
        det(&ctx.m_mat).mod_floor(m),
    );
    let mut u = vec![trace(&g).mod_floor(m), trace(&gm).mod_floor(m), trace(&gm2).mod_floor(m)];
    while u.len() <= ctx.trunc_exp as usize {
        let k = u.len();
        let next = (&a * &u[k - 1] - &b * &u[k - 2] + &cc * &u[k - 3]).mod_floor(m);
        u.push(next);
    }
    let check = trace(&mat_mul(&gm2, &ctx.m_mat, Some(m))).mod_floor(m);
    if u.len() > 3 && u[3] != check {
        return Err(PadicError::Invariant("power-sum recurrence disagrees with the trace".into()));
    }
    let u = &u[..=ctx.trunc_exp as usize];

    let m_f = pow_big(p, ctx.n_f);
    let mut coeffs = Vec::with_capacity(u.len());
    for (k, uk) in u.iter().enumerate() {
        let (vf, unit) = factorial_parts(k as u32, p);
        if vf > SLACK {
            return Err(PadicError::PrecisionBudget(format!("{k}! consumes {vf} digits")));
        }
        let pv = pow_big(p, vf);
        if !uk.mod_floor(&pv).is_zero() {
            return Err(PadicError::Invariant(format!("u_{k}/{k}! is not a p-adic integer")));
        }
        let ck = (uk / &pv * inv_mod(&unit, m).unwrap()).mod_floor(&m_f);
        coeffs.push(ck);
    }
    let coeff_nu = coeffs.iter().map(|c| nu_mod(c, p, ctx.n_f)).collect();
    let poly = ValuationPoly { p, d, n0, period: ctx.period, n_f: ctx.n_f, shift: ctx.n_f - ctx.n, coeffs, coeff_nu };
    for z in [0u64, 1, 2] {
        if poly.eval(&BigInt::from(z)) != direct_value(d, n0, ctx.period, z, &m_f) {
            return Err(PadicError::Invariant(format!("F({z}) disagrees with direct evaluation")));
        }
    }
    Ok(poly)
}

/// Exact nu_p(T_{n+d} - T_n); `None` when the difference vanishes.
pub fn exact_nu_diff(n: u64, d: u64, p: u32) -> Option<u32> {
    let t = crate::trib::trib;
    nu_int(&(t(n + d) - t(n)), p)
}
