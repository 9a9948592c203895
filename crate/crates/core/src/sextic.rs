//! Exact arithmetic in the splitting field of X^3 - X^2 - X - 1.
//!
//! The field is Q[x, y] / (x^3 - x^2 - x - 1, y^2 + (x - 1) y + x^2 - x - 1),
//! where x plays alpha and y one complex conjugate root; the other is
//! 1 - x - y. Elements of the order Z[x, y] have integer coordinates on the
//! basis x^i y^j (i < 3, j < 2), so equality tests are exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::trib::TribError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sextic {
    /// c[i + 3 j] multiplies x^i y^j.
    c: [BigInt; 6],
}

type Cubic = [BigInt; 3];

fn cubic_mul(a: &Cubic, b: &Cubic) -> Cubic {
    let mut t: [BigInt; 5] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            t[i + j] += &a[i] * &b[j];
        }
    }
    // x^4 = x^3 + x^2 + x, x^3 = x^2 + x + 1
    for k in (3..5).rev() {
        let top = std::mem::take(&mut t[k]);
        t[k - 1] += &top;
        t[k - 2] += &top;
        t[k - 3] += &top;
    }
    [t[0].clone(), t[1].clone(), t[2].clone()]
}

fn cubic_add(a: &Cubic, b: &Cubic) -> Cubic {
    std::array::from_fn(|i| &a[i] + &b[i])
}

fn cubic_neg(a: &Cubic) -> Cubic {
    std::array::from_fn(|i| -&a[i])
}

impl Sextic {
    pub fn from_coords(c: [i64; 6]) -> Sextic {
        Sextic { c: c.map(BigInt::from) }
    }

    pub fn int(v: i64) -> Sextic {
        Sextic::from_coords([v, 0, 0, 0, 0, 0])
    }

    pub fn alpha() -> Sextic {
        Sextic::from_coords([0, 1, 0, 0, 0, 0])
    }

    pub fn beta() -> Sextic {
        Sextic::from_coords([0, 0, 0, 1, 0, 0])
    }

    pub fn gamma() -> Sextic {
        Sextic::from_coords([1, -1, 0, -1, 0, 0])
    }

    pub fn coords(&self) -> &[BigInt; 6] {
        &self.c
    }

    fn halves(&self) -> (Cubic, Cubic) {
        (
            [self.c[0].clone(), self.c[1].clone(), self.c[2].clone()],
            [self.c[3].clone(), self.c[4].clone(), self.c[5].clone()],
        )
    }

    fn from_halves(a: Cubic, b: Cubic) -> Sextic {
        let [a0, a1, a2] = a;
        let [b0, b1, b2] = b;
        Sextic { c: [a0, a1, a2, b0, b1, b2] }
    }

    pub fn add(&self, o: &Sextic) -> Sextic {
        Sextic { c: std::array::from_fn(|i| &self.c[i] + &o.c[i]) }
    }

    pub fn sub(&self, o: &Sextic) -> Sextic {
        Sextic { c: std::array::from_fn(|i| &self.c[i] - &o.c[i]) }
    }

    pub fn mul(&self, o: &Sextic) -> Sextic {
        let (a0, a1) = self.halves();
        let (b0, b1) = o.halves();
        // (a0 + a1 y)(b0 + b1 y) with y^2 = (1 - x) y + (1 + x - x^2)
        let p0 = cubic_mul(&a0, &b0);
        let p1 = cubic_add(&cubic_mul(&a0, &b1), &cubic_mul(&a1, &b0));
        let p2 = cubic_mul(&a1, &b1);
        let one_minus_x: Cubic = [BigInt::one(), -BigInt::one(), BigInt::zero()];
        let c0: Cubic = [BigInt::one(), BigInt::one(), -BigInt::one()];
        let r0 = cubic_add(&p0, &cubic_mul(&p2, &c0));
        let r1 = cubic_add(&p1, &cubic_mul(&p2, &one_minus_x));
        Sextic::from_halves(r0, r1)
    }

    pub fn neg(&self) -> Sextic {
        let (a, b) = self.halves();
        Sextic::from_halves(cubic_neg(&a), cubic_neg(&b))
    }

    pub fn pow(&self, mut n: u32) -> Sextic {
        let mut acc = Sextic::int(1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn max_abs_coord(&self) -> BigInt {
        self.c.iter().map(|v| v.abs()).max().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaPair {
    pub u: u32,
    pub v: u32,
    pub equal: bool,
    /// Largest coordinate of the cross-multiplied difference (0 iff equal).
    pub margin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub pairs: Vec<GammaPair>,
    pub passed: bool,
}

/// Tests (1 - g^v)/(1 - g^u) = (1 - a^v)/(1 - a^u) exactly, as
/// (1 - g^v)(1 - a^u) - (1 - a^v)(1 - g^u) = 0, with g a complex conjugate of a.
pub fn gamma_pair(u: u32, v: u32) -> Result<GammaPair, TribError> {
    if v < 1 || u <= v {
        return Err(TribError::Precondition(format!("need 1 <= v < u, got u = {u}, v = {v}")));
    }
    let one = Sextic::int(1);
    let a = Sextic::alpha();
    let g = Sextic::gamma();
    let lhs = one.sub(&g.pow(v)).mul(&one.sub(&a.pow(u)));
    let rhs = one.sub(&a.pow(v)).mul(&one.sub(&g.pow(u)));
    let diff = lhs.sub(&rhs);
    Ok(GammaPair { u, v, equal: diff.is_zero(), margin: diff.max_abs_coord().to_string() })
}

/// All pairs 1 <= v <= 4, 2 <= u <= 7, u > v.
pub fn gamma_lemma_check() -> GammaReport {
    let mut pairs = vec![];
    for v in 1..=4 {
        for u in 2..=7 {
            if u > v {
                pairs.push(gamma_pair(u, v).expect("pair in range"));
            }
        }
    }
    let passed = pairs.iter().all(|p| !p.equal);
    GammaReport { pairs, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_satisfy_their_polynomials() {
        let one = Sextic::int(1);
        for r in [Sextic::alpha(), Sextic::beta(), Sextic::gamma()] {
            let v = r.pow(3).sub(&r.pow(2)).sub(&r).sub(&one);
            assert!(v.is_zero());
        }
        // alpha + beta + gamma = 1 and alpha beta gamma = 1
        let s = Sextic::alpha().add(&Sextic::beta()).add(&Sextic::gamma());
        assert_eq!(s, one);
        let p = Sextic::alpha().mul(&Sextic::beta()).mul(&Sextic::gamma());
        assert_eq!(p, one);
    }

    #[test]
    fn multiplication_is_commutative_and_associative() {
        let x = Sextic::from_coords([3, -1, 2, 5, 0, -4]);
        let y = Sextic::from_coords([-2, 7, 1, 1, -3, 2]);
        let z = Sextic::from_coords([1, 1, -1, 0, 2, 9]);
        assert_eq!(x.mul(&y), y.mul(&x));
        assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn first_pair_differs() {
        let p = gamma_pair(2, 1).unwrap();
        assert!(!p.equal);
    }

    #[test]
    fn eighteen_pairs_one_exact_equality() {
        let r = gamma_lemma_check();
        assert_eq!(r.pairs.len(), 18);
        let equal: Vec<_> = r.pairs.iter().filter(|p| p.equal).map(|p| (p.u, p.v)).collect();
        assert_eq!(equal, vec![(4, 3)]);
        assert!(!r.passed);
    }

    #[test]
    fn ratio_at_four_three_is_one_half_for_every_root() {
        // 1 + t + t^2 + t^3 = 2 t^3 on roots of the cubic, so
        // (1 - t^3)/(1 - t^4) = t^3 / (2 t^3) = 1/2.
        for t in [Sextic::alpha(), Sextic::beta(), Sextic::gamma()] {
            let one = Sextic::int(1);
            let num = one.sub(&t.pow(3)).mul(&Sextic::int(2));
            let den = one.sub(&t.pow(4));
            assert_eq!(num, den);
        }
    }

    #[test]
    fn domain_guard() {
        assert!(gamma_pair(1, 1).is_err());
        assert!(gamma_pair(3, 0).is_err());
    }
}
