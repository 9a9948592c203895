//! Reals as precision-indexed ball producers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{ArithError, Ball};

/// Adaptive precision policy: start, then double until `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start: 128, cap: 8192 }
    }
}

impl Precision {
    pub fn with_cap(cap: u32) -> Self {
        Precision { start: 128.min(cap), cap }
    }

    /// Runs `step` at increasing precision until it returns `Some`.
    pub fn certify<T>(
        &self,
        what: &str,
        mut step: impl FnMut(u32) -> Result<Option<T>, ArithError>,
    ) -> Result<T, ArithError> {
        let mut prec = self.start.max(16);
        loop {
            if let Some(v) = step(prec)? {
                return Ok(v);
            }
            if prec >= self.cap {
                return Err(ArithError::Uncertifiable { what: what.to_string(), cap: self.cap });
            }
            prec = (prec * 2).min(self.cap);
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        let mut next = Some(self.start.max(16));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap { None } else { Some((cur * 2).min(cap)) };
            Some(cur)
        })
    }
}

type Producer = dyn Fn(u32) -> Result<Ball, ArithError> + Send + Sync;

/// A real number known through enclosures at any requested precision.
/// Evaluating at precision `p` returns a ball whose radius is roughly
/// `2^-p` relative to its magnitude.
#[derive(Clone)]
pub struct Real(Arc<Producer>);

const GUARD: u32 = 24;

impl std::fmt::Debug for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.eval(64) {
            Ok(b) => write!(f, "Real({b})"),
            Err(e) => write!(f, "Real(<{e}>)"),
        }
    }
}

impl Real {
    pub fn from_fn(f: impl Fn(u32) -> Result<Ball, ArithError> + Send + Sync + 'static) -> Real {
        Real(Arc::new(f))
    }

    /// An exactly known dyadic value.
    pub fn exact(b: Ball) -> Real {
        Real::from_fn(move |p| Ok(b.clone().with_prec(p)))
    }

    pub fn int(v: impl Into<BigInt>) -> Real {
        Real::exact(Ball::exact_int(v))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Real {
        let (n, d) = (num.into(), den.into());
        Real::from_fn(move |p| Ball::from_ratio(&n, &d, p))
    }

    pub fn decimal(s: &str) -> Result<Real, ArithError> {
        Ball::from_decimal(s, 64)?;
        let s = s.to_string();
        Ok(Real::from_fn(move |p| Ball::from_decimal(&s, p)))
    }

    pub fn eval(&self, prec: u32) -> Result<Ball, ArithError> {
        (self.0)(prec)
    }

    pub fn ln(&self) -> Real {
        let x = self.clone();
        Real::from_fn(move |p| x.eval(p + GUARD)?.ln().map(|b| b.with_prec(p)))
    }

    pub fn sqrt(&self) -> Real {
        let x = self.clone();
        Real::from_fn(move |p| x.eval(p + GUARD)?.sqrt().map(|b| b.with_prec(p)))
    }

    pub fn add(&self, o: &Real) -> Real {
        let (a, b) = (self.clone(), o.clone());
        Real::from_fn(move |p| Ok(a.eval(p + GUARD)?.add(&b.eval(p + GUARD)?).with_prec(p)))
    }

    pub fn sub(&self, o: &Real) -> Real {
        let (a, b) = (self.clone(), o.clone());
        Real::from_fn(move |p| Ok(a.eval(p + GUARD)?.sub(&b.eval(p + GUARD)?).with_prec(p)))
    }

    pub fn mul(&self, o: &Real) -> Real {
        let (a, b) = (self.clone(), o.clone());
        Real::from_fn(move |p| Ok(a.eval(p + GUARD)?.mul(&b.eval(p + GUARD)?).with_prec(p)))
    }

    pub fn div(&self, o: &Real) -> Real {
        let (a, b) = (self.clone(), o.clone());
        Real::from_fn(move |p| Ok(a.eval(p + GUARD)?.div(&b.eval(p + GUARD)?)?.with_prec(p)))
    }

    pub fn neg(&self) -> Real {
        let a = self.clone();
        Real::from_fn(move |p| Ok(a.eval(p)?.neg()))
    }

    pub fn scale_int(&self, k: impl Into<BigInt>) -> Real {
        self.mul(&Real::int(k))
    }

    pub fn pow_u(&self, n: u64) -> Real {
        let a = self.clone();
        let extra = 64 - n.leading_zeros();
        Real::from_fn(move |p| Ok(a.eval(p + GUARD + extra)?.pow_u(n).with_prec(p)))
    }

    pub fn pow_i(&self, n: i64) -> Real {
        if n >= 0 {
            self.pow_u(n as u64)
        } else {
            Real::int(1).div(&self.pow_u(n.unsigned_abs()))
        }
    }
}

/// `floor(M * eta)`, refining `eta` until the enclosure of `M * eta` has
/// radius below 1/4 and lies between two consecutive integers.
pub fn floor_scaled(eta: &Real, m: &BigInt, policy: Precision) -> Result<BigInt, ArithError> {
    assert!(m >= &BigInt::one(), "M must be positive");
    let mb = Ball::exact_int(m.clone());
    let extra = m.bits() as u32;
    for prec in policy.levels() {
        let e = eta.eval(prec + extra)?;
        let y = e.mul(&mb);
        let small = y.radius_log2().is_none_or(|r| r <= -2);
        if small {
            if let Some(f) = y.unique_floor() {
                return Ok(f);
            }
        }
    }
    Err(ArithError::FloorUncertifiable { cap: policy.cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn floor_of_exact_half() {
        let half = Real::ratio(1, 2);
        assert_eq!(floor_scaled(&half, &BigInt::from(10), Precision::default()).unwrap(), BigInt::from(5));
    }

    #[test]
    fn floor_of_million_log2() {
        let l2 = Real::int(2).ln();
        let f = floor_scaled(&l2, &BigInt::from(1_000_000), Precision::default()).unwrap();
        assert_eq!(f, BigInt::from(693147));
    }

    #[test]
    fn straddling_enclosure_is_rejected() {
        // A producer that never resolves whether the value is below or above 1/2.
        let fuzzy = Real::from_fn(|p| {
            Ok(Ball::from_parts(BigInt::from(1) << (p as u64 - 1), BigUint::from(1u32), -(p as i64), p))
        });
        let r = floor_scaled(&fuzzy, &BigInt::from(2), Precision { start: 128, cap: 1024 });
        assert_eq!(r, Err(ArithError::FloorUncertifiable { cap: 1024 }));
    }

    #[test]
    fn certify_escalates_then_gives_up() {
        let mut seen = vec![];
        let r: Result<(), _> = Precision { start: 128, cap: 512 }.certify("never", |p| {
            seen.push(p);
            Ok(None)
        });
        assert!(r.is_err());
        assert_eq!(seen, vec![128, 256, 512]);
    }

    #[test]
    fn composed_expression_intersects_across_precisions() {
        let alpha_like = Real::int(3).sqrt().add(&Real::ratio(1, 7)).ln();
        let lo = alpha_like.eval(100).unwrap();
        let hi = alpha_like.eval(400).unwrap();
        assert!(lo.overlaps(&hi));
        assert!(hi.radius_log2().unwrap() <= lo.radius_log2().unwrap());
    }
}
