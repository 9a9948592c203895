//! Integral LLL, approximation lattices and de Weger's reduction of a
//! linear form in logarithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{floor_scaled, ArithError, Ball, Precision, Real};
use crate::baker::{round_up, SIG_DIGITS};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a basis: columns are linearly dependent")]
    NotABasis,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("M too small (M = {m}): c2^2 does not exceed T^2 + S; enlarge M")]
    MTooSmall { m: String },
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A full-rank lattice in Z^k; `basis[j]` is the j-th basis (column) vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub basis: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Nearest integer to `a / b` (b > 0), ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let twice: BigInt = a * 2u32 + b;
    twice.div_floor(&(b * 2u32))
}

fn round_rat(x: &BigRational) -> BigInt {
    round_div(x.numer(), x.denom())
}

impl Lattice {
    pub fn new(basis: Vec<Vec<BigInt>>) -> Result<Lattice, LatticeError> {
        let k = basis.len();
        if k == 0 || basis.iter().any(|b| b.len() != k) {
            return Err(LatticeError::Dimension(format!("need a square basis, got {k} vectors")));
        }
        Ok(Lattice { basis })
    }

    pub fn from_columns_i64(cols: &[&[i64]]) -> Result<Lattice, LatticeError> {
        Lattice::new(cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Determinant of the matrix with the basis vectors as columns (Bareiss).
    pub fn det(&self) -> BigInt {
        let k = self.rank();
        // Work on rows = basis vectors; det(A^T) = det(A).
        let mut m = self.basis.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for i in 0..k {
            if m[i][i].is_zero() {
                match (i + 1..k).find(|&r| !m[r][i].is_zero()) {
                    Some(r) => {
                        m.swap(i, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for r in i + 1..k {
                for c in i + 1..k {
                    let v = &m[i][i] * &m[r][c] - &m[r][i] * &m[i][c];
                    m[r][c] = v / &prev;
                }
                m[r][i] = BigInt::zero();
            }
            prev = m[i][i].clone();
        }
        sign * &m[k - 1][k - 1]
    }

    /// Exact Gram–Schmidt data: `mu[i][j]` for j < i and `|b*_i|^2`.
    pub fn gram_schmidt(&self) -> GramSchmidt {
        let k = self.rank();
        let mut bstar: Vec<Vec<BigRational>> = vec![];
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut norms: Vec<BigRational> = vec![];
        for i in 0..k {
            let mut v: Vec<BigRational> = self.basis[i].iter().map(rat).collect();
            for j in 0..i {
                let num: BigRational = self.basis[i].iter().zip(&bstar[j]).map(|(a, b)| rat(a) * b).sum();
                let m = if norms[j].is_zero() { BigRational::zero() } else { num / &norms[j] };
                for (x, y) in v.iter_mut().zip(&bstar[j]) {
                    *x -= &m * y;
                }
                mu[i][j] = m;
            }
            mu[i][i] = BigRational::one();
            norms.push(v.iter().map(|x| x * x).sum());
            bstar.push(v);
        }
        GramSchmidt { mu, norms }
    }

    /// Checks size reduction and the Lovász condition with factor 3/4 in
    /// exact rationals.
    pub fn is_lll_reduced(&self) -> bool {
        let gs = self.gram_schmidt();
        let half = BigRational::new(1.into(), 2.into());
        let three_q = BigRational::new(3.into(), 4.into());
        for i in 0..self.rank() {
            for j in 0..i {
                if gs.mu[i][j].abs() > half {
                    return false;
                }
            }
            if i > 0 {
                let m = &gs.mu[i][i - 1];
                if gs.norms[i] < (&three_q - m * m) * &gs.norms[i - 1] {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<BigRational>>,
    pub norms: Vec<BigRational>,
}

/// LLL with factor 3/4, all arithmetic in integers (Cohen, Alg. 2.6.7).
/// The result is verified in exact rationals before it is returned.
pub fn lll_reduce(lat: &Lattice) -> Result<Lattice, LatticeError> {
    let n = lat.rank();
    if lat.det().is_zero() {
        return Err(LatticeError::NotABasis);
    }
    // 1-based indices as in the textbook; slot 0 unused except d[0] = 1.
    let mut b: Vec<Vec<BigInt>> = std::iter::once(vec![]).chain(lat.basis.iter().cloned()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    if n == 1 {
        return Ok(lat.clone());
    }
    let mut k = 2usize;
    let mut kmax = 1usize;

    fn red(k: usize, l: usize, b: &mut [Vec<BigInt>], d: &[BigInt], lam: &mut [Vec<BigInt>]) {
        let twice: BigInt = &lam[k][l] * 2u32;
        if twice.abs() <= d[l] {
            return;
        }
        let q = round_div(&lam[k][l], &d[l]);
        let bl = b[l].clone();
        for (x, y) in b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        lam[k][l] -= &q * &d[l];
        for i in 1..l {
            let t = &q * &lam[l][i];
            lam[k][i] -= t;
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(LatticeError::NotABasis);
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &d, &mut lam);
            let lhs = &d[k] * &d[k - 2] * 4;
            let rhs = &d[k - 1] * &d[k - 1] * 3 - &lam[k][k - 1] * &lam[k][k - 1] * 4;
            if lhs < rhs {
                // swap b_k and b_{k-1}
                b.swap(k, k - 1);
                for j in 1..k - 1 {
                    let t = std::mem::take(&mut lam[k][j]);
                    lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &d, &mut lam);
                }
                k += 1;
                break;
            }
        }
    }
    let out = Lattice { basis: b.into_iter().skip(1).collect() };
    debug_assert_eq!(out.det().abs(), lat.det().abs());
    if out.det().abs() != lat.det().abs() || !out.is_lll_reduced() {
        // Unreachable for a correct implementation; kept as a hard check.
        return Err(LatticeError::Invalid("LLL output failed verification".into()));
    }
    Ok(out)
}

/// Solves `B z = v` over Q, B having the basis vectors as columns.
pub fn coordinates(lat: &Lattice, v: &[BigInt]) -> Result<Vec<BigRational>, LatticeError> {
    let k = lat.rank();
    if v.len() != k {
        return Err(LatticeError::Dimension(format!("vector of length {} for rank {k}", v.len())));
    }
    // augmented rows: row r = (B[r][0..k] | v[r]) with B[r][c] = basis[c][r]
    let mut m: Vec<Vec<BigRational>> =
        (0..k).map(|r| (0..k).map(|c| rat(&lat.basis[c][r])).chain(std::iter::once(rat(&v[r]))).collect()).collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero()).ok_or(LatticeError::NotABasis)?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..k {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[k].clone()).collect())
}

/// Lattice-gap constants, all squared to stay rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    /// max_j |b_1|^2 / |b*_j|^2
    pub c1_sq: BigRational,
    /// sigma^2 |b_1|^2 / c1^2, a lower bound for l(L, v)^2
    pub c2_sq: BigRational,
    pub sigma: BigRational,
    pub v_in_lattice: bool,
}

/// de Weger's lower bound for the distance from `v` to the reduced lattice.
/// `sigma` is the distance to the nearest integer of the last non-integral
/// coordinate of `v` in the basis, or 1 when `v` lies in the lattice.
pub fn lattice_gap(lat: &Lattice, v: &[BigInt]) -> Result<Gap, LatticeError> {
    let z = coordinates(lat, v)?;
    let gs = lat.gram_schmidt();
    let b1 = rat(&dot(&lat.basis[0], &lat.basis[0]));
    let c1_sq = gs.norms.iter().map(|n| &b1 / n).max().expect("nonempty");
    let last = z.iter().rposition(|zi| !zi.is_integer());
    let (sigma, inside) = match last {
        Some(i) => ((&z[i] - rat(&round_rat(&z[i]))).abs(), false),
        None => (BigRational::one(), true),
    };
    let c2_sq = &sigma * &sigma * &b1 / &c1_sq;
    Ok(Gap { c1_sq, c2_sq, sigma, v_in_lattice: inside })
}

/// Exact squared distance from `v` to the lattice, by Fincke–Pohst
/// enumeration on the Gram–Schmidt data of a reduced basis.
pub fn closest_distance_sq(lat: &Lattice, v: &[BigInt]) -> Result<BigRational, LatticeError> {
    let k = lat.rank();
    if v.len() != k {
        return Err(LatticeError::Dimension(format!("vector of length {} for rank {k}", v.len())));
    }
    let gs = lat.gram_schmidt();
    // Coordinates of v along b*_j.
    let mut bstar: Vec<Vec<BigRational>> = vec![];
    for i in 0..k {
        let mut w: Vec<BigRational> = lat.basis[i].iter().map(rat).collect();
        for j in 0..i {
            for (x, y) in w.iter_mut().zip(&bstar[j]) {
                *x -= &gs.mu[i][j] * y;
            }
        }
        bstar.push(w);
    }
    let vt: Vec<BigRational> =
        (0..k).map(|j| v.iter().zip(&bstar[j]).map(|(a, b)| rat(a) * b).sum::<BigRational>() / &gs.norms[j]).collect();

    struct Search<'a> {
        k: usize,
        mu: &'a [Vec<BigRational>],
        norms: &'a [BigRational],
        vt: &'a [BigRational],
        coeffs: Vec<BigInt>,
        best: Option<BigRational>,
    }

    impl Search<'_> {
        fn rec(&mut self, i: usize, partial: BigRational) {
            let mut c = self.vt[i].clone();
            for l in i + 1..self.k {
                c -= rat(&self.coeffs[l]) * &self.mu[l][i];
            }
            let cands: Vec<BigInt> = match &self.best {
                None => vec![round_rat(&c)],
                Some(best) => {
                    if *best <= partial {
                        return;
                    }
                    let room = (best - &partial) / &self.norms[i];
                    let r = (room.ceil().to_integer()).sqrt() + 1;
                    let lo = (&c - rat(&r)).floor().to_integer();
                    let hi = (&c + rat(&r)).ceil().to_integer();
                    let mut v: Vec<BigInt> = num_iter(&lo, &hi);
                    v.sort_by_key(|a| (rat(a) - &c).abs());
                    v
                }
            };
            for a in cands {
                let diff = rat(&a) - &c;
                let p = &partial + &diff * &diff * &self.norms[i];
                if let Some(best) = &self.best {
                    if p >= *best {
                        continue;
                    }
                }
                self.coeffs[i] = a;
                if i == 0 {
                    self.best = Some(p);
                } else {
                    self.rec(i - 1, p);
                }
            }
            self.coeffs[i] = BigInt::zero();
        }
    }

    fn num_iter(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
        let mut out = vec![];
        let mut x = lo.clone();
        while &x <= hi {
            out.push(x.clone());
            x += 1;
        }
        out
    }

    let mut s = Search { k, mu: &gs.mu, norms: &gs.norms, vt: &vt, coeffs: vec![BigInt::zero(); k], best: None };
    // A first greedy descent sets the radius, a second pass is exhaustive.
    s.rec(k - 1, BigRational::zero());
    s.rec(k - 1, BigRational::zero());
    Ok(s.best.expect("greedy descent always yields a point"))
}

/// A real with a printable description.
#[derive(Clone, Debug)]
pub struct Term {
    pub label: String,
    pub value: Real,
}

impl Term {
    pub fn new(label: &str, value: Real) -> Term {
        Term { label: label.to_string(), value }
    }
}

/// |eta_0 + a_1 eta_1 + ... + a_k eta_k| <= c3 exp(-c4 H) with |a_i| <= A_i.
#[derive(Clone, Debug)]
pub struct ReductionProblem {
    pub name: String,
    pub etas: Vec<Term>,
    pub eta0: Term,
    pub m: BigInt,
    /// Exact decimal bounds A_i.
    pub a: Vec<String>,
    pub c3: Term,
    pub c4: Term,
}

/// How the lower bound for the distance l(L, v) is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    /// de Weger's sigma-based bound.
    Lemma,
    /// The exact distance, by enumeration.
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionOutcome {
    pub name: String,
    pub m: String,
    pub retries: u32,
    pub method: GapMethod,
    pub h_max: u64,
    /// H bound before rounding down, rounded up to 4 digits.
    pub h_real: String,
    pub c1_sq: String,
    pub c2_sq: String,
    /// Lower bound for |Lambda| whenever H exceeds h_max.
    pub lambda_lower: String,
    pub degenerate_possible: bool,
}

fn rat_ball(r: &BigRational, prec: u32) -> Result<Ball, ArithError> {
    Ball::from_ratio(r.numer(), r.denom(), prec)
}

fn ratio_str(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    round_up(&rat_ball(r, 64).expect("nonzero denominator"), SIG_DIGITS)
}

pub fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// `"1e112"` for powers of ten, the digits otherwise.
pub fn m_label(m: &BigInt) -> String {
    let s = m.to_string();
    if s.len() > 1 && s.starts_with('1') && s[1..].bytes().all(|c| c == b'0') {
        format!("1e{}", s.len() - 1)
    } else {
        s
    }
}

const PREC: Precision = Precision { start: 256, cap: 4096 };

/// Identity top block, last row floor(M eta_i); target (0, ..., -floor(M eta_0)).
pub fn build_approx_lattice(prob: &ReductionProblem) -> Result<(Lattice, Vec<BigInt>), LatticeError> {
    let k = prob.etas.len();
    let mut cols = vec![];
    for (i, eta) in prob.etas.iter().enumerate() {
        let mut c = vec![BigInt::zero(); k];
        if i + 1 < k {
            c[i] = BigInt::one();
        }
        c[k - 1] = floor_scaled(&eta.value, &prob.m, PREC)?;
        cols.push(c);
    }
    let mut v = vec![BigInt::zero(); k];
    v[k - 1] = -floor_scaled(&prob.eta0.value, &prob.m, PREC)?;
    Ok((Lattice::new(cols)?, v))
}

fn check_problem(prob: &ReductionProblem) -> Result<Vec<Ball>, LatticeError> {
    if prob.etas.is_empty() || prob.a.len() != prob.etas.len() {
        return Err(LatticeError::Invalid("need one bound A_i per eta_i".into()));
    }
    let a: Vec<Ball> = prob.a.iter().map(|s| Ball::from_decimal(s, 256)).collect::<Result<_, _>>()?;
    let one = Ball::one();
    if a.iter().any(|x| x.certainly_lt(&one)) {
        return Err(LatticeError::Invalid("A_i < 1".into()));
    }
    let mb = Ball::exact_int(prob.m.clone());
    if a.iter().any(|x| x.certainly_gt(&mb)) {
        return Err(LatticeError::Invalid("M below max A_i".into()));
    }
    for t in [&prob.c3, &prob.c4] {
        if !t.value.eval(64)?.is_positive() {
            return Err(LatticeError::Invalid(format!("{} must be positive", t.label)));
        }
    }
    Ok(a)
}

/// Reduced lattice for a problem, so that many targets can share it.
pub struct Prepared {
    pub lattice: Lattice,
    pub last_row: BigInt,
}

pub fn prepare(prob: &ReductionProblem) -> Result<Prepared, LatticeError> {
    let (lat, _) = build_approx_lattice(prob)?;
    let last_row = lat.basis[lat.rank() - 1][lat.rank() - 1].clone();
    Ok(Prepared { lattice: lll_reduce(&lat)?, last_row })
}

/// The bound on H from one lattice at one M, or `MTooSmall`.
pub fn deweger_step(prob: &ReductionProblem, prep: &Prepared, method: GapMethod) -> Result<ReductionOutcome, LatticeError> {
    let a = check_problem(prob)?;
    let k = a.len();
    let mut v = vec![BigInt::zero(); k];
    v[k - 1] = -floor_scaled(&prob.eta0.value, &prob.m, PREC)?;
    let (c1_sq, c2_sq) = match method {
        GapMethod::Lemma => {
            let g = lattice_gap(&prep.lattice, &v)?;
            (g.c1_sq, g.c2_sq)
        }
        GapMethod::Exact => {
            let g = lattice_gap(&prep.lattice, &v)?;
            (g.c1_sq, closest_distance_sq(&prep.lattice, &v)?)
        }
    };
    let w = 256 + prob.m.bits() as u32;
    let s = a[..k - 1].iter().fold(Ball::zero(), |acc, x| acc.add(&x.sqr()));
    let t = a.iter().fold(Ball::one(), |acc, x| acc.add(x)).mul_pow2(-1);
    let c2b = rat_ball(&c2_sq, w)?;
    let too_small = || LatticeError::MTooSmall { m: m_label(&prob.m) };
    if !c2b.certainly_gt(&t.sqr().add(&s)) {
        return Err(too_small());
    }
    let root = c2b.sub(&s).sqrt()?.sub(&t);
    if !root.is_positive() {
        return Err(too_small());
    }
    let mb = Ball::exact_int(prob.m.clone()).with_prec(w);
    let h = mb.mul(&prob.c3.value.eval(w)?).ln()?.sub(&root.ln()?).div(&prob.c4.value.eval(w)?)?;
    let h_max = h.hi().floor();
    let h_max = if h_max.is_negative() { 0 } else { h_max.to_u64().expect("H bound fits u64") };
    let lambda_lower = crate::baker::round_down(&root.div(&mb)?, SIG_DIGITS);
    let degenerate_possible = (-&v[k - 1]).is_multiple_of(&prep.last_row);
    Ok(ReductionOutcome {
        name: prob.name.clone(),
        m: m_label(&prob.m),
        retries: 0,
        method,
        h_max,
        h_real: round_up(&h, SIG_DIGITS),
        c1_sq: ratio_str(&c1_sq),
        c2_sq: ratio_str(&c2_sq),
        lambda_lower,
        degenerate_possible,
    })
}

/// Retries allowed after "M too small", each multiplying M by 10.
pub const MAX_RETRIES: u32 = 3;

/// de Weger reduction with automatic escalation of M.
pub fn deweger_bound(prob: &ReductionProblem, method: GapMethod) -> Result<ReductionOutcome, LatticeError> {
    let mut p = prob.clone();
    for retry in 0..=MAX_RETRIES {
        let prep = prepare(&p)?;
        match deweger_step(&p, &prep, method) {
            Ok(mut out) => {
                out.retries = retry;
                return Ok(out);
            }
            Err(LatticeError::MTooSmall { .. }) if retry < MAX_RETRIES => p.m *= 10,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

/// A family of problems differing only in eta_0 (e.g. indexed by d),
/// sharing lattices across the family. Returns per-member outcomes.
pub fn deweger_family(
    base: &ReductionProblem,
    eta0s: &[Term],
    method: GapMethod,
    exec: Exec,
) -> Result<Vec<ReductionOutcome>, LatticeError> {
    let mut preps: Vec<(BigInt, Prepared)> = vec![];
    let mut m = base.m.clone();
    for _ in 0..=MAX_RETRIES {
        preps.push((m.clone(), prepare(&ReductionProblem { m: m.clone(), ..base.clone() })?));
        m *= 10;
    }
    exec.try_map(eta0s, |eta0| {
        for (retry, (m, prep)) in preps.iter().enumerate() {
            let p = ReductionProblem { m: m.clone(), eta0: eta0.clone(), ..base.clone() };
            match deweger_step(&p, prep, method) {
                Ok(mut out) => {
                    out.retries = retry as u32;
                    return Ok(out);
                }
                Err(LatticeError::MTooSmall { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(LatticeError::MTooSmall { m: m_label(&preps.last().expect("prepared").0) })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(cols: &[&[i64]]) -> Lattice {
        Lattice::from_columns_i64(cols).unwrap()
    }

    #[test]
    fn identity_is_reduced() {
        let id = lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(lll_reduce(&id).unwrap(), id);
    }

    #[test]
    fn two_by_two_euclid() {
        let l = lll_reduce(&lat(&[&[1, 0], &[1_000_000_000, 1]])).unwrap();
        for b in &l.basis {
            let n: BigInt = dot(b, b);
            assert_eq!(n, BigInt::one());
        }
    }

    #[test]
    fn small_basis_keeps_determinant() {
        let l0 = lat(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let l = lll_reduce(&l0).unwrap();
        assert_eq!(l0.det().abs(), BigInt::from(3));
        assert_eq!(l.det().abs(), l0.det().abs());
        assert!(l.is_lll_reduced());
    }

    #[test]
    fn dependent_columns_rejected() {
        assert_eq!(lll_reduce(&lat(&[&[1, 2], &[2, 4]])), Err(LatticeError::NotABasis));
    }

    #[test]
    fn gap_on_identity() {
        let id = lat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let g = lattice_gap(&id, &[BigInt::zero(), BigInt::zero(), BigInt::zero()]).unwrap();
        assert!(g.v_in_lattice);
        assert_eq!(g.c1_sq, BigRational::one());
        assert_eq!(g.c2_sq, BigRational::one());
    }

    #[test]
    fn one_dimensional_lattice() {
        let prob = ReductionProblem {
            name: "half".into(),
            etas: vec![Term::new("1/2", Real::ratio(1, 2))],
            eta0: Term::new("0", Real::int(0)),
            m: BigInt::from(10),
            a: vec!["1".into()],
            c3: Term::new("1", Real::int(1)),
            c4: Term::new("1", Real::int(1)),
        };
        let (l, _) = build_approx_lattice(&prob).unwrap();
        assert_eq!(l.basis, vec![vec![BigInt::from(5)]]);
    }

    #[test]
    fn closest_distance_small() {
        let l = lll_reduce(&lat(&[&[2, 0], &[0, 3]])).unwrap();
        let d = closest_distance_sq(&l, &[BigInt::from(1), BigInt::from(1)]).unwrap();
        assert_eq!(d, BigRational::from_integer(2.into()));
    }

    #[test]
    fn m_labels() {
        assert_eq!(m_label(&pow10(112)), "1e112");
        assert_eq!(m_label(&BigInt::from(37)), "37");
    }
}
