//! Integer polynomials, Sturm sequences and certified real roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ArithError, Ball, DEFAULT_PREC};

/// Integer polynomial, coefficients stored constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    /// `coeffs[i]` multiplies `X^i`; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> PolyZ {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        assert!(!coeffs.is_empty() && !coeffs.last().unwrap().is_zero(), "zero polynomial");
        PolyZ { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> PolyZ {
        PolyZ::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// X^3 - X^2 - X - 1.
    pub fn psi() -> PolyZ {
        PolyZ::from_i64(&[-1, -1, -1, 1])
    }

    /// 44X^3 - 44X^2 + 12X - 1, the minimal polynomial of C_alpha.
    pub fn c_alpha_poly() -> PolyZ {
        PolyZ::from_i64(&[-1, 12, -44, 44])
    }

    /// X^6 + X^5 + 2X^4 + 3X^3 + 2X^2 + X + 1.
    pub fn q_sextic() -> PolyZ {
        PolyZ::from_i64(&[1, 1, 2, 3, 2, 1, 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_ball(&self, x: &Ball) -> Ball {
        let mut acc = Ball::zero().with_prec(x.prec());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Ball::exact_int(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> PolyZ {
        if self.degree() == 0 {
            return PolyZ::from_i64(&[0]);
        }
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        PolyZ::new(c)
    }

    fn rat_coeffs(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Sturm chain over the rationals.
    fn sturm(&self) -> Vec<Vec<BigRational>> {
        let mut chain = vec![self.rat_coeffs(), self.derivative().rat_coeffs()];
        loop {
            let n = chain.len();
            if chain[n - 1].iter().all(|c| c.is_zero()) {
                chain.pop();
                break;
            }
            let r = rat_rem(&chain[n - 2], &chain[n - 1]);
            if r.iter().all(|c| c.is_zero()) {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        chain
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.sturm();
        let va = variations(&chain, a);
        let vb = variations(&chain, b);
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots in `[a, b]`.
    pub fn count_roots_closed(&self, a: &BigRational, b: &BigRational) -> usize {
        let at_a = usize::from(self.eval_rat(a).is_zero());
        self.count_roots(a, b) + at_a
    }

    /// Cauchy bound: all roots satisfy |z| < bound.
    pub fn root_bound(&self) -> BigRational {
        let lead = BigRational::from_integer(self.leading().abs());
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| BigRational::from_integer(c.abs()) / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }

    /// Disjoint rational intervals each holding exactly one real root,
    /// sorted increasingly. Roots are distinct roots of the polynomial.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        let b = self.root_bound();
        let mut out = vec![];
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = self.count_roots_closed(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            if self.eval_rat(&mid).is_zero() {
                // Nudge the split point off the root.
                let w = (&hi - &lo) / BigRational::from_integer(1024.into());
                let m2 = &mid + &w;
                stack.push((m2.clone(), hi));
                stack.push((lo, m2));
            } else {
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r: Vec<BigRational> = a.to_vec();
    let db = b.iter().rposition(|c| !c.is_zero()).expect("division by zero polynomial");
    loop {
        let dr = match r.iter().rposition(|c| !c.is_zero()) {
            Some(d) => d,
            None => return vec![BigRational::zero()],
        };
        if dr < db {
            r.truncate(dr + 1);
            return r;
        }
        let f = &r[dr] / &b[db];
        let shift = dr - db;
        for i in 0..=db {
            let t = &f * &b[i];
            r[i + shift] -= t;
        }
        r[dr] = BigRational::zero();
    }
}

fn eval_coeffs(c: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for k in c.iter().rev() {
        acc = acc * x + k;
    }
    acc
}

fn variations(chain: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in chain {
        let s = eval_coeffs(p, x);
        let sg = if s.is_positive() {
            1
        } else if s.is_negative() {
            -1
        } else {
            0
        };
        if sg != 0 {
            if last != 0 && sg != last {
                v += 1;
            }
            last = sg;
        }
    }
    v
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Largest dyadic `k/2^bits <= x` as a rational.
fn dyadic_floor(x: &BigRational, bits: u64) -> BigRational {
    let scaled = x * BigRational::from_integer(BigInt::one() << bits);
    BigRational::new(scaled.floor().to_integer(), BigInt::one() << bits)
}

/// Encloses the unique root of `poly` in the closed interval `[a, b]` in a
/// ball of radius at most `2^-target_bits`.
pub fn refine_root(
    poly: &PolyZ,
    interval: (&BigRational, &BigRational),
    target_bits: u32,
) -> Result<Ball, ArithError> {
    let (a0, b0) = interval;
    assert!(a0 <= b0, "interval endpoints out of order");
    let n = poly.count_roots_closed(a0, b0);
    if n == 0 {
        return Err(ArithError::RootNotIsolated);
    }
    if n > 1 {
        return Err(ArithError::IntervalNotIsolating);
    }
    let (mut a, mut b) = (a0.clone(), b0.clone());
    let fa = poly.eval_rat(&a);
    let fb = poly.eval_rat(&b);
    if fa.is_zero() {
        b = a.clone();
    } else if fb.is_zero() {
        a = b.clone();
    } else if sign(&fa) == sign(&fb) {
        // Unique root of even multiplicity: no sign change to bisect on.
        return Err(ArithError::RootNotIsolated);
    }
    let sa = sign(&poly.eval_rat(&a));
    let dpoly = poly.derivative();
    let target = BigRational::new(BigInt::one(), BigInt::one() << (target_bits as u64 + 1));
    let two = BigRational::from_integer(2.into());
    while &b - &a > target {
        let width = &b - &a;
        // Newton from the midpoint, rounded to a dyadic grid finer than width^2.
        let mid = (&a + &b) / &two;
        let d = dpoly.eval_rat(&mid);
        let mut advanced = false;
        if !d.is_zero() {
            let x = &mid - poly.eval_rat(&mid) / d;
            let wbits = bits_of_inverse(&width);
            let gbits = (2 * wbits + 8).min(target_bits as u64 + 16);
            let xg = dyadic_floor(&x, gbits);
            let delta = BigRational::new(BigInt::one(), BigInt::one() << (gbits - 4).max(1));
            let lo = &xg - &delta;
            let hi = &xg + &delta;
            if lo > a && hi < b {
                let sl = sign(&poly.eval_rat(&lo));
                let sh = sign(&poly.eval_rat(&hi));
                if sl == 0 {
                    a = lo.clone();
                    b = lo;
                    advanced = true;
                } else if sh == 0 {
                    a = hi.clone();
                    b = hi;
                    advanced = true;
                } else if sl == sa && sh != sa {
                    a = lo;
                    b = hi;
                    advanced = true;
                }
            }
        }
        if !advanced {
            let sm = sign(&poly.eval_rat(&mid));
            if sm == 0 {
                a = mid.clone();
                b = mid;
            } else if sm == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
    }
    // Outward-rounded dyadic enclosure.
    let k = target_bits as u64 + 2;
    let scale = BigRational::from_integer(BigInt::one() << k);
    let lo = (&a * &scale).floor().to_integer();
    let hi = (&b * &scale).ceil().to_integer();
    Ok(Ball::from_endpoints(&lo, &hi, -(k as i64), target_bits.max(DEFAULT_PREC) + 8))
}

fn bits_of_inverse(w: &BigRational) -> u64 {
    // floor(log2(1/w)) for 0 < w, clamped at 0.
    let inv = w.recip();
    let q = inv.to_integer();
    if q.is_zero() {
        0
    } else {
        q.bits() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn psi_root_in_known_range() {
        let b = refine_root(&PolyZ::psi(), (&r(1, 1), &r(2, 1)), 64).unwrap();
        assert!(b.certainly_gt(&Ball::from_decimal("1.83", 80).unwrap()));
        assert!(b.certainly_lt(&Ball::from_decimal("1.84", 80).unwrap()));
        assert!(b.radius_log2().unwrap() <= -64);
    }

    #[test]
    fn linear_root_exact() {
        let b = refine_root(&PolyZ::from_i64(&[-2, 1]), (&r(1, 1), &r(3, 1)), 10).unwrap();
        assert!(b.contains_int(&BigInt::from(2)));
        assert!(b.radius_log2().is_none_or(|e| e <= -10));
    }

    #[test]
    fn c_alpha_root_in_known_range() {
        let b = refine_root(&PolyZ::c_alpha_poly(), (&r(1, 2), &r(1, 1)), 64).unwrap();
        assert!(b.certainly_gt(&Ball::from_decimal("0.61", 80).unwrap()));
        assert!(b.certainly_lt(&Ball::from_decimal("0.62", 80).unwrap()));
    }

    #[test]
    fn isolation_errors() {
        let p = PolyZ::from_i64(&[2, -3, 1]); // (X-1)(X-2)
        assert_eq!(refine_root(&p, (&r(0, 1), &r(3, 1)), 32), Err(ArithError::IntervalNotIsolating));
        assert_eq!(refine_root(&p, (&r(3, 1), &r(4, 1)), 32), Err(ArithError::RootNotIsolated));
        let sq = PolyZ::from_i64(&[1, -2, 1]); // (X-1)^2
        assert_eq!(refine_root(&sq, (&r(0, 1), &r(3, 1)), 32), Err(ArithError::RootNotIsolated));
    }

    #[test]
    fn high_precision_root_is_tight() {
        let b = refine_root(&PolyZ::psi(), (&r(1, 1), &r(2, 1)), 4096).unwrap();
        assert!(b.radius_log2().unwrap() <= -4096);
        let v = PolyZ::psi().eval_ball(&b.clone().with_prec(4200));
        assert!(v.contains_zero());
    }

    #[test]
    fn sturm_counts() {
        let p = PolyZ::psi();
        assert_eq!(p.isolate_real_roots().len(), 1);
        let q = PolyZ::q_sextic();
        assert_eq!(q.isolate_real_roots().len(), 0);
        let cubic3 = PolyZ::from_i64(&[-6, 11, -6, 1]); // (X-1)(X-2)(X-3)
        let iso = cubic3.isolate_real_roots();
        assert_eq!(iso.len(), 3);
        assert!(iso.windows(2).all(|w| w[0].1 <= w[1].0));
    }
}
