//! Dyadic midpoint-radius balls with outward rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// The set `[(mid - rad) * 2^exp, (mid + rad) * 2^exp]`.
///
/// `prec` is the number of mantissa bits kept by operations producing this
/// value; binary operations work at the larger of the two precisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    exp: i64,
    prec: u32,
}

pub const DEFAULT_PREC: u32 = 128;

/// `floor(m / 2^s)` for any sign of `m`.
pub(crate) fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.is_negative() {
        let mag = m.magnitude();
        let q = (mag + ((BigUint::one() << s) - 1u32)) >> s;
        -BigInt::from(q)
    } else {
        m >> s
    }
}

/// `ceil(m / 2^s)`.
pub(crate) fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    -floor_shr(&-m, s)
}

fn ceil_shr_u(m: &BigUint, s: u64) -> BigUint {
    if s == 0 {
        return m.clone();
    }
    (m + ((BigUint::one() << s) - 1u32)) >> s
}

fn mag(m: &BigInt) -> BigUint {
    m.magnitude().clone()
}

/// Exact dyadic `m * 2^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            floor_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            ceil_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        mant_to_f64(&self.mant, self.exp)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        if sa != sb || sa == Sign::NoSign {
            return sign_rank(sa).cmp(&sign_rank(sb));
        }
        // Same nonzero sign: compare magnitudes via top-bit positions first.
        let ta = self.mant.bits() as i64 + self.exp;
        let tb = other.mant.bits() as i64 + other.exp;
        let mag_order = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << (self.exp - e) as u64;
            let b = other.mant.magnitude() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            mag_order.reverse()
        } else {
            mag_order
        }
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn mant_to_f64(m: &BigInt, exp: i64) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    let bits = m.bits() as i64;
    let shift = (bits - 60).max(0);
    let top = floor_shr(m, shift as u64).to_f64().unwrap_or(0.0);
    let e = exp + shift;
    // Scale in two steps to avoid spurious overflow of 2^e.
    if e.abs() > 2000 {
        return if e > 0 { top.signum() * f64::INFINITY } else { 0.0 };
    }
    let half = (e / 2) as i32;
    top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

impl Ball {
    pub fn exact_int(v: impl Into<BigInt>) -> Ball {
        Ball { mid: v.into(), rad: BigUint::zero(), exp: 0, prec: DEFAULT_PREC }
    }

    pub fn zero() -> Ball {
        Ball::exact_int(0)
    }

    pub fn one() -> Ball {
        Ball::exact_int(1)
    }

    pub fn from_dyadic(d: &Dyadic) -> Ball {
        Ball { mid: d.mant.clone(), rad: BigUint::zero(), exp: d.exp, prec: DEFAULT_PREC }
    }

    /// Raw constructor; `rad` is in units of `2^exp`.
    pub fn from_parts(mid: BigInt, rad: BigUint, exp: i64, prec: u32) -> Ball {
        let mut b = Ball { mid, rad, exp, prec };
        b.normalize();
        b
    }

    /// Smallest ball (at scale `2^exp`) holding `[lo, hi] * 2^exp`.
    pub fn from_endpoints(lo: &BigInt, hi: &BigInt, exp: i64, prec: u32) -> Ball {
        debug_assert!(lo <= hi);
        let sum: BigInt = lo + hi;
        let mid = floor_shr(&sum, 1);
        let r1 = mag(&(hi - &mid));
        let r2 = mag(&(&mid - lo));
        Ball::from_parts(mid, r1.max(r2), exp, prec)
    }

    /// Enclosure of the rational `num/den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Result<Ball, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let s = prec as i64 + 4 + den.bits() as i64 - num.bits() as i64;
        let (q, r, exp) = if s >= 0 {
            let (q, r) = (&num << s as u64).div_mod_floor(&den);
            (q, r, -s)
        } else {
            let d2 = &den << (-s) as u64;
            let (q, r) = num.div_mod_floor(&d2);
            (q, r, -s)
        };
        let rad = if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        // value = (q + r/den') * 2^exp with 0 <= r/den' < 1: centre at q, radius 1.
        Ok(Ball::from_parts(q, rad, exp, prec))
    }

    /// Parses decimal literals such as `5.6e15`, `1e-3`, `42`.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Ball, ArithError> {
        let (num, den) = parse_decimal(s).ok_or_else(|| ArithError::Parse(s.to_string()))?;
        Ball::from_ratio(&num, &den, prec)
    }

    pub fn from_f64_exact(x: f64) -> Ball {
        assert!(x.is_finite());
        if x == 0.0 {
            return Ball::zero();
        }
        let bits = x.abs().to_bits();
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, exp) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        let mut mid = BigInt::from(m);
        if x < 0.0 {
            mid = -mid;
        }
        Ball { mid, rad: BigUint::zero(), exp, prec: DEFAULT_PREC }
    }

    pub fn with_prec(mut self, prec: u32) -> Ball {
        self.prec = prec;
        self.normalize();
        self
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn mid_dyadic(&self) -> Dyadic {
        Dyadic::new(self.mid.clone(), self.exp)
    }

    pub fn lo(&self) -> Dyadic {
        Dyadic::new(&self.mid - BigInt::from(self.rad.clone()), self.exp)
    }

    pub fn hi(&self) -> Dyadic {
        Dyadic::new(&self.mid + BigInt::from(self.rad.clone()), self.exp)
    }

    /// Radius as a dyadic number.
    pub fn radius(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.rad.clone()), self.exp)
    }

    /// log2 of the radius rounded up, or `None` for an exact ball.
    pub fn radius_log2(&self) -> Option<i64> {
        if self.rad.is_zero() {
            None
        } else {
            Some(self.rad.bits() as i64 + self.exp)
        }
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo() <= d && d <= &self.hi()
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Dyadic::new(v.clone(), 0))
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid.magnitude() > &self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.magnitude() > &self.rad
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Ball) -> bool {
        self.hi() < other.lo()
    }

    pub fn certainly_le(&self, other: &Ball) -> bool {
        self.hi() <= other.lo()
    }

    pub fn certainly_gt(&self, other: &Ball) -> bool {
        other.certainly_lt(self)
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !(self.certainly_lt(other) || other.certainly_lt(self))
    }

    pub fn to_f64(&self) -> f64 {
        mant_to_f64(&self.mid, self.exp)
    }

    pub fn upper_f64(&self) -> f64 {
        self.hi().to_f64()
    }

    pub fn lower_f64(&self) -> f64 {
        self.lo().to_f64()
    }

    /// Floors of both endpoints.
    pub fn floor_bounds(&self) -> (BigInt, BigInt) {
        (self.lo().floor(), self.hi().floor())
    }

    /// The unique integer floor if the ball does not straddle an integer.
    pub fn unique_floor(&self) -> Option<BigInt> {
        let (a, b) = self.floor_bounds();
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    /// Smallest integer certainly above the ball.
    pub fn ceil_upper(&self) -> BigInt {
        self.hi().ceil()
    }

    fn normalize(&mut self) {
        let p = self.prec.max(16) as i64;
        let mb = self.mid.bits() as i64;
        let rb = self.rad.bits() as i64;
        let s = (mb - p - 4).max(rb - 32);
        if s > 0 {
            let s = s as u64;
            let nm = floor_shr(&self.mid, s);
            let lost = (&nm << s) != self.mid;
            self.rad = ceil_shr_u(&self.rad, s) + u32::from(lost);
            self.mid = nm;
            self.exp += s as i64;
        }
        if self.mid.is_zero() && self.rad.is_zero() {
            self.exp = 0;
        }
    }

    fn top(&self) -> i64 {
        self.exp + (self.mid.bits().max(self.rad.bits()) as i64)
    }

    /// Mantissa and radius rescaled to exponent `e` (rounding outward).
    fn align(&self, e: i64) -> (BigInt, BigUint) {
        if e <= self.exp {
            let s = (self.exp - e) as u64;
            (&self.mid << s, &self.rad << s)
        } else {
            let s = (e - self.exp) as u64;
            let m = floor_shr(&self.mid, s);
            let r = ceil_shr_u(&self.rad, s) + 1u32;
            (m, r)
        }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let top = self.top().max(o.top());
        let floor_e = top - prec as i64 - 8;
        let e = floor_e.max(self.exp.min(o.exp));
        let (m1, r1) = self.align(e);
        let (m2, r2) = o.align(e);
        Ball::from_parts(m1 + m2, r1 + r2, e, prec)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let a1 = mag(&self.mid);
        let a2 = mag(&o.mid);
        let rad = &a1 * &o.rad + &a2 * &self.rad + &self.rad * &o.rad;
        Ball::from_parts(&self.mid * &o.mid, rad, self.exp + o.exp, prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        self.mul(&Ball::exact_int(k.clone()))
    }

    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn sqr(&self) -> Ball {
        self.mul(self)
    }

    pub fn div(&self, o: &Ball) -> Result<Ball, ArithError> {
        if o.contains_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let prec = self.prec.max(o.prec);
        let (m1, r1, e1) = (&self.mid, &self.rad, self.exp);
        let (m2, r2, e2) = (&o.mid, &o.rad, o.exp);
        let am1 = mag(m1);
        let am2 = mag(m2);
        let s = (prec as i64 + 8 + m2.bits() as i64 - m1.bits() as i64).max(0) as u64;
        let q = (m1 << s).div_floor(m2);
        // |x/y - m1/m2| <= (r1|m2| + |m1|r2) / (|m2|(|m2| - r2)), scaled by 2^s.
        let num: BigUint = (r1 * &am2 + &am1 * r2) << s;
        let den: BigUint = &am2 * (&am2 - r2);
        let err = if num.is_zero() { BigUint::zero() } else { num.div_ceil(&den) };
        Ok(Ball::from_parts(q, err + 1u32, e1 - e2 - s as i64, prec))
    }

    pub fn recip(&self) -> Result<Ball, ArithError> {
        Ball::one().with_prec(self.prec).div(self)
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() {
            let hi = mag(&self.mid) + &self.rad;
            let h = BigInt::from(hi);
            Ball::from_endpoints(&BigInt::zero(), &h, self.exp, self.prec)
        } else if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Hull of two balls.
    pub fn union(&self, o: &Ball) -> Ball {
        let prec = self.prec.max(o.prec);
        let lo = self.lo().min(o.lo());
        let hi = self.hi().max(o.hi());
        let e = lo.exp.min(hi.exp);
        let l = &lo.mant << (lo.exp - e) as u64;
        let h = &hi.mant << (hi.exp - e) as u64;
        Ball::from_endpoints(&l, &h, e, prec)
    }

    pub fn max(&self, o: &Ball) -> Ball {
        if o.certainly_le(self) {
            self.clone()
        } else if self.certainly_le(o) {
            o.clone()
        } else {
            let lo = self.lo().max(o.lo());
            let hi = self.hi().max(o.hi());
            let e = lo.exp.min(hi.exp);
            let l = &lo.mant << (lo.exp - e) as u64;
            let h = &hi.mant << (hi.exp - e) as u64;
            Ball::from_endpoints(&l, &h, e, self.prec.max(o.prec))
        }
    }

    pub fn pow_u(&self, mut n: u64) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one().with_prec(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<Ball, ArithError> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            self.pow_u(n.unsigned_abs()).recip()
        }
    }

    pub fn sqrt(&self) -> Result<Ball, ArithError> {
        let lo = self.lo();
        if lo.mant.is_negative()
            && self.hi().mant.is_negative() {
                return Err(ArithError::SqrtNegative);
            }
        let prec = self.prec;
        let hi = self.hi();
        // Work at exponent e (even) with mantissas carrying ~2*prec bits.
        let want = 2 * (prec as i64 + 8);
        let e_top = hi.exp + hi.mant.bits() as i64;
        let mut e = (e_top - want).min(self.exp);
        if e.rem_euclid(2) != 0 {
            e -= 1;
        }
        let scale = |d: &Dyadic| -> BigInt {
            if d.exp >= e {
                &d.mant << (d.exp - e) as u64
            } else {
                floor_shr(&d.mant, (e - d.exp) as u64)
            }
        };
        let lo_m = scale(&lo).max(BigInt::zero());
        let hi_m = {
            let d = &hi;
            if d.exp >= e {
                &d.mant << (d.exp - e) as u64
            } else {
                ceil_shr(&d.mant, (e - d.exp) as u64)
            }
        };
        let slo = lo_m.magnitude().sqrt();
        let shi_f = hi_m.magnitude().sqrt();
        let shi = if &shi_f * &shi_f == *hi_m.magnitude() { shi_f } else { shi_f + 1u32 };
        Ok(Ball::from_endpoints(&BigInt::from(slo), &BigInt::from(shi), e / 2, prec))
    }

    /// Natural logarithm.
    pub fn ln(&self) -> Result<Ball, ArithError> {
        let lo = self.lo();
        if !lo.mant.is_positive() {
            return Err(ArithError::LogNonPositive);
        }
        let hi = self.hi();
        let wp = self.prec + 16;
        let (l, _) = ln_dyadic_bounds(lo.mant.magnitude(), lo.exp, wp);
        let (_, u) = ln_dyadic_bounds(hi.mant.magnitude(), hi.exp, wp);
        Ok(Ball::from_endpoints(&l, &u, -(wp as i64), self.prec))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6e} ± {:.1e}", self.to_f64(), self.radius().to_f64())
    }
}

fn parse_decimal(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    let e10 = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    if e10 >= 0 {
        Some((num * num_traits::pow(ten, e10 as usize), BigInt::one()))
    } else {
        Some((num, num_traits::pow(ten, (-e10) as usize)))
    }
}

/// Fixed-point `atanh(a/c)` for `0 <= a/c <= 1/5`, scaled by `2^w`.
/// Returns `(s, err)` with `s <= 2^w atanh(a/c) <= s + err`.
fn atanh_fixed(a: &BigUint, c: &BigUint, w: u64) -> (BigUint, u64) {
    if a.is_zero() {
        return (BigUint::zero(), 0);
    }
    let a2 = a * a;
    let c2 = c * c;
    let mut p = (a << w) / c;
    let mut sum = BigUint::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += &p / (2 * j + 1);
        p = (&p * &a2) / &c2;
        j += 1;
    }
    // Truncation of each of the j terms costs < 2 units; the tail starting
    // at a vanished power is below 2(j+1) units since t^2 <= 1/25.
    (sum, 2 * j + 2 * (j + 1) + 2)
}

/// Bounds `(L, U)` with `L <= 2^wp ln(m 2^e) <= U`.
pub(crate) fn ln_dyadic_bounds(m: &BigUint, e: i64, wp: u32) -> (BigInt, BigInt) {
    assert!(!m.is_zero());
    let guard = 32u64;
    let w = wp as u64 + guard;
    let b = m.bits() as i64;
    // m 2^e = y 2^k with y = m / 2^(b-1) in [1, 2); shift to [0.75, 1.5).
    let half = BigUint::one() << (b - 1) as u64;
    let mut k = e + b - 1;
    let mut den = half.clone();
    // y > 1.5  <=>  2m > 3 * 2^(b-1)
    if m * 2u32 > &half * 3u32 {
        den = &half << 1;
        k += 1;
    }
    // t = (m - den)/(m + den), |t| <= 1/5.
    let (neg, a) = if m >= &den { (false, m - &den) } else { (true, &den - m) };
    let c = m + &den;
    let (s, err) = atanh_fixed(&a, &c, w);
    let s: BigInt = BigInt::from(s) * 2u32;
    let err: BigInt = BigInt::from(err) * 2u32;
    let (t_lo, t_hi) = if neg { (-&s - &err, -s) } else { (s.clone(), s + err) };
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let kk = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 { (&kk * &l2_lo, &kk * &l2_hi) } else { (&kk * &l2_hi, &kk * &l2_lo) };
    let lo = t_lo + k_lo;
    let hi = t_hi + k_hi;
    (floor_shr(&lo, guard), ceil_shr(&hi, guard))
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    let (s, err) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
    let s: BigInt = BigInt::from(s) * 2u32;
    let err: BigInt = BigInt::from(err) * 2u32;
    (s.clone(), s + err)
}

impl std::ops::Add for &Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        Ball::add(self, o)
    }
}

impl std::ops::Sub for &Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        Ball::sub(self, o)
    }
}

impl std::ops::Mul for &Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        Ball::mul(self, o)
    }
}

impl std::ops::Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Ball {
        Ball::from_decimal(s, 200).unwrap()
    }

    #[test]
    fn floor_shr_rounds_down() {
        assert_eq!(floor_shr(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(floor_shr(&BigInt::from(5), 1), BigInt::from(2));
        assert_eq!(ceil_shr(&BigInt::from(5), 1), BigInt::from(3));
        assert_eq!(ceil_shr(&BigInt::from(-5), 1), BigInt::from(-2));
    }

    #[test]
    fn decimal_parsing() {
        let x = b("5.6e15");
        assert!(x.is_exact());
        assert_eq!(x.unique_floor().unwrap(), BigInt::from(5_600_000_000_000_000u64));
        let y = b("1e-3");
        assert!(!y.contains(&Dyadic::new(BigInt::from(1), -10)));
        assert!((y.to_f64() - 1e-3).abs() < 1e-15);
        assert!(Ball::from_decimal("abc", 64).is_err());
    }

    #[test]
    fn ln_of_two_and_three() {
        let l2 = Ball::exact_int(2).with_prec(200).ln().unwrap();
        assert!((l2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l2.radius_log2().unwrap() < -190);
        let l3 = Ball::exact_int(3).with_prec(200).ln().unwrap();
        assert!((l3.to_f64() - 3f64.ln()).abs() < 1e-15);
        let small = b("1e-30").ln().unwrap();
        assert!((small.to_f64() + 30.0 * 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_of_exact_one_is_exact_zero() {
        let z = Ball::one().ln().unwrap();
        assert!(z.is_exact() && z.contains_zero());
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(matches!(Ball::zero().ln(), Err(ArithError::LogNonPositive)));
        let straddle = Ball::from_parts(BigInt::from(1), BigUint::from(2u32), 0, 64);
        assert!(straddle.ln().is_err());
    }

    #[test]
    fn division_and_sqrt() {
        let third = Ball::one().with_prec(128).div(&Ball::exact_int(3)).unwrap();
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        let s2 = Ball::exact_int(2).with_prec(128).sqrt().unwrap();
        let sq = s2.sqr();
        assert!(sq.contains_int(&BigInt::from(2)));
        assert!(s2.radius_log2().unwrap() < -120);
        let four = Ball::exact_int(4).sqrt().unwrap();
        assert!(four.contains_int(&BigInt::from(2)));
        assert!(Ball::exact_int(-1).sqrt().is_err());
        assert!(Ball::one().div(&Ball::zero()).is_err());
    }

    #[test]
    fn adding_tiny_to_one_keeps_precision() {
        let one = Ball::one().with_prec(128);
        let tiny = Ball::exact_int(1).mul_pow2(-100);
        let s = one.add(&tiny);
        assert!(s.is_exact());
        let far = Ball::exact_int(1).mul_pow2(-10_000);
        let t = one.add(&far);
        assert!(t.contains(&Dyadic::new(BigInt::from(1), 0)));
        assert!(t.radius_log2().unwrap() < -120);
    }

    #[test]
    fn dyadic_ordering() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let c = Dyadic::new(BigInt::from(1), 0);
        let d = Dyadic::new(BigInt::from(-7), 5);
        assert!(c < a && d < c && d < a);
        assert_eq!(Dyadic::new(BigInt::from(2), 0).cmp(&Dyadic::new(BigInt::from(1), 1)), Ordering::Equal);
    }

    #[test]
    fn f64_roundtrip() {
        for x in [1.5, -0.1, 1e300, 3e-300] {
            assert_eq!(Ball::from_f64_exact(x).to_f64(), x);
        }
    }
}
