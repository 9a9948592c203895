//! Continued fractions of certified reals and Legendre's criterion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Ball, Precision, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("quotient uncertifiable: remainder {index} straddles an integer at precision cap {cap} bits")]
    QuotientUncertifiable { index: usize, cap: u32 },
    #[error("cannot parse mu `{0}`")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CfExpansion {
    pub mu: String,
    #[serde(serialize_with = "crate::ser::big_vec")]
    pub partial_quotients: Vec<BigInt>,
    /// (p_i, q_i) for i = 0..=N.
    #[serde(serialize_with = "crate::ser::big_pairs")]
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Precision (bits) at which every quotient was certified.
    pub prec: u32,
}

/// Expands `mu` until a denominator exceeds `m`. All quotients are
/// certified at one precision; on failure the whole expansion is redone at
/// twice the precision.
pub fn cf_expand(label: &str, mu: &Real, m: &BigInt, policy: Precision) -> Result<CfExpansion, CfError> {
    let mut last_fail = 0;
    for prec in policy.levels() {
        match expand_at(mu, m, prec)? {
            Ok((a, conv)) => {
                return Ok(CfExpansion { mu: label.to_string(), partial_quotients: a, convergents: conv, prec });
            }
            Err(index) => last_fail = index,
        }
    }
    Err(CfError::QuotientUncertifiable { index: last_fail, cap: policy.cap })
}

type Expansion = (Vec<BigInt>, Vec<(BigInt, BigInt)>);

fn expand_at(mu: &Real, m: &BigInt, prec: u32) -> Result<Result<Expansion, usize>, ArithError> {
    let mut x = mu.eval(prec)?;
    let mut a = vec![];
    let mut conv: Vec<(BigInt, BigInt)> = vec![];
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    loop {
        let i = a.len();
        let Some(ai) = x.unique_floor() else { return Ok(Err(i)) };
        let p = &ai * &p1 + &p2;
        let q = &ai * &q1 + &q2;
        a.push(ai.clone());
        conv.push((p.clone(), q.clone()));
        if &q > m {
            return Ok(Ok((a, conv)));
        }
        let frac = x.sub(&Ball::exact_int(ai));
        if frac.contains_zero() {
            return Ok(Err(i + 1));
        }
        x = frac.recip()?;
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
    }
}

impl CfExpansion {
    /// Minimal N with q_N > M.
    pub fn index_beyond(&self, m: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > m)
    }

    /// p_i q_{i-1} - p_{i-1} q_i = (-1)^(i-1) for every computed i >= 1.
    pub fn convergent_identity_holds(&self) -> bool {
        self.convergents.windows(2).enumerate().all(|(j, w)| {
            let i = j + 1;
            let v = &w[1].0 * &w[0].1 - &w[0].0 * &w[1].1;
            let want = if (i - 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            v == want
        })
    }

    /// |mu - p_i/q_i| < 1/q_i^2 for every convergent, certified with balls.
    pub fn legendre_certified(&self, mu: &Real) -> Result<bool, ArithError> {
        let x = mu.eval(self.prec + 64)?;
        for (p, q) in &self.convergents {
            let w = self.prec + 64 + 2 * q.bits() as u32;
            let r = Ball::from_ratio(p, q, w)?;
            let err = x.sub(&r).abs();
            let cap = Ball::from_ratio(&BigInt::one(), &(q * q), w)?;
            // An exact convergent (rational mu) has zero error.
            if !(err.certainly_lt(&cap)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// a(M): the largest partial quotient a_i over i <= N, N minimal with q_N > M.
pub fn legendre_floor(exp: &CfExpansion, m: &BigInt) -> Option<BigInt> {
    let n = exp.index_beyond(m)?;
    exp.partial_quotients[..=n].iter().max().cloned()
}

/// 1/(a(M) + 2): for 0 < s < M, |mu - r/s| > gap / s^2.
pub fn legendre_gap(exp: &CfExpansion, m: &BigInt) -> Option<BigRational> {
    let a = legendre_floor(exp, m)?;
    Some(BigRational::new(BigInt::one(), a + 2))
}

/// Parses the forms accepted on the command line: `logA/logB`, `sqrtK`,
/// `golden` (or `phi`), `p/q`, and decimals.
pub fn parse_mu(s: &str) -> Result<Real, CfError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || CfError::Parse(s.to_string());
    let log_of = |x: &str| -> Result<Real, CfError> {
        let v: u64 = x.strip_prefix("log").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if v < 2 {
            return Err(bad());
        }
        Ok(Real::int(v).ln())
    };
    if t == "golden" || t == "phi" || t == "(1+sqrt5)/2" {
        return Ok(Real::int(5).sqrt().add(&Real::int(1)).div(&Real::int(2)));
    }
    if let Some(k) = t.strip_prefix("sqrt") {
        let v: u64 = k.parse().map_err(|_| bad())?;
        return Ok(Real::int(v).sqrt());
    }
    if let Some((a, b)) = t.split_once('/') {
        if a.starts_with("log") {
            return Ok(log_of(a)?.div(&log_of(b)?));
        }
        let p: i64 = a.parse().map_err(|_| bad())?;
        let q: i64 = b.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Real::ratio(p, q));
    }
    if t.starts_with("log") {
        return log_of(&t);
    }
    Real::decimal(&t).map_err(|_| bad())
}

/// Lower bound log 2 / ((a(M) + 2) * s_max) for |u log 2 + v log 3| with
/// 0 < |v| <= s_max, from Legendre applied to log 3 / log 2.
pub fn legendre_log_lower(exp: &CfExpansion, m: &BigInt, s_max: &Ball, prec: u32) -> Option<Result<Ball, ArithError>> {
    let a = legendre_floor(exp, m)?;
    Some((|| {
        let l2 = Ball::exact_int(2).with_prec(prec).ln()?;
        l2.div(&Ball::exact_int(a + 2).mul(s_max))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(s: &str, m: u64) -> CfExpansion {
        cf_expand(s, &parse_mu(s).unwrap(), &BigInt::from(m), Precision::default()).unwrap()
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        let e = expand("golden", 100);
        assert!(e.partial_quotients.iter().all(|a| a == &BigInt::one()));
        let qs: Vec<BigInt> = e.convergents.iter().map(|c| c.1.clone()).collect();
        let fib: Vec<BigInt> = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(qs[..fib.len()], fib[..]);
        assert_eq!(legendre_floor(&e, &BigInt::from(100)), Some(BigInt::one()));
        assert_eq!(legendre_gap(&e, &BigInt::from(100)), Some(BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn log3_over_log2_prefix() {
        let e = expand("log3/log2", 1_000_000);
        let want: Vec<BigInt> = [1, 1, 1, 2, 2, 3, 1, 5].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(e.partial_quotients[..8], want[..]);
        assert!(e.convergent_identity_holds());
        assert!(e.legendre_certified(&parse_mu("log3/log2").unwrap()).unwrap());
    }

    #[test]
    fn small_threshold() {
        let e = expand("log3/log2", 10);
        // q = 1, 1, 2, 5, 12: N = 4
        assert_eq!(e.index_beyond(&BigInt::from(10)), Some(4));
        assert_eq!(legendre_floor(&e, &BigInt::from(10)), Some(BigInt::from(2)));
    }

    #[test]
    fn rational_mu_is_uncertifiable() {
        let r = cf_expand("7/3", &Real::ratio(7, 3), &BigInt::from(1000), Precision { start: 64, cap: 256 });
        assert!(matches!(r, Err(CfError::QuotientUncertifiable { .. })));
    }

    #[test]
    fn parse_forms() {
        assert!(parse_mu("log3/log2").is_ok());
        assert!(parse_mu("sqrt2").is_ok());
        assert!(parse_mu("1/3").is_ok());
        assert!(parse_mu("log1/log2").is_err());
        assert!(parse_mu("banana").is_err());
    }
}
