//! Linear forms in logarithms: Matveev lower bounds, the Bugeaud–Laurent
//! p-adic estimate, heights, the Guzmán–Luca inversion and the chains of
//! absolute bounds built from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{refine_root, ArithError, Ball, PolyZ};
use crate::trib::log_alpha;
use crate::Scenario;

/// Working precision for certificate evaluation. Far more than the four
/// significant digits that are kept.
pub const CHAIN_PREC: u32 = 256;
/// Significant decimal digits kept when a derived constant is rounded up.
pub const SIG_DIGITS: u32 = 4;
/// Allowed excess of a derived constant over the published one.
pub const SLACK: &str = "1.05";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BakerError {
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("threshold too small: T must exceed (4m^2)^m = {0}")]
    ThresholdTooSmall(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("chain mismatch at {link}: derived {derived} exceeds {reference} by more than the slack")]
    ChainMismatch { link: String, derived: String, reference: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

// ---------------------------------------------------------------------------
// Expressions with an audit trail

/// A closed arithmetic expression over exact decimals, logarithms and the
/// dominant Tribonacci root. Certificates keep the expression so that the
/// stored value can be recomputed from scratch.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Dec(String),
    LogAlpha,
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
    Sum(Vec<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Prod(Vec<Expr>),
    Quot(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Max(Vec<Expr>),
    /// A labelled input; evaluates to its inner expression.
    Named(String, Box<Expr>),
}

pub fn dec(s: &str) -> Expr {
    Expr::Dec(s.to_string())
}

pub fn ln(e: Expr) -> Expr {
    Expr::Ln(Box::new(e))
}

fn ln_dec(s: &str) -> Expr {
    ln(dec(s))
}

fn quot(a: Expr, b: Expr) -> Expr {
    Expr::Quot(Box::new(a), Box::new(b))
}

fn pow(a: Expr, k: u32) -> Expr {
    Expr::Pow(Box::new(a), k)
}

fn named(label: &str, value: &str) -> Expr {
    Expr::Named(label.to_string(), Box::new(dec(value)))
}

impl Expr {
    pub fn eval(&self, prec: u32) -> Result<Ball, ArithError> {
        let p = prec + 16;
        Ok(match self {
            Expr::Dec(s) => Ball::from_decimal(s, p)?,
            Expr::LogAlpha => log_alpha().eval(p)?,
            Expr::Ln(a) => a.eval(p)?.ln()?,
            Expr::Sqrt(a) => a.eval(p)?.sqrt()?,
            Expr::Sum(v) => {
                let mut acc = Ball::zero();
                for e in v {
                    acc = acc.add(&e.eval(p)?);
                }
                acc
            }
            Expr::Diff(a, b) => a.eval(p)?.sub(&b.eval(p)?),
            Expr::Prod(v) => {
                let mut acc = Ball::one();
                for e in v {
                    acc = acc.mul(&e.eval(p)?);
                }
                acc
            }
            Expr::Quot(a, b) => a.eval(p)?.div(&b.eval(p)?)?,
            Expr::Pow(a, k) => a.eval(p + 8)?.pow_u(*k as u64),
            Expr::Max(v) => {
                let mut it = v.iter();
                let mut acc = it.next().expect("max of nothing").eval(p)?;
                for e in it {
                    acc = acc.max(&e.eval(p)?);
                }
                acc
            }
            Expr::Named(_, a) => a.eval(prec)?,
        }
        .with_prec(prec))
    }

    /// Labelled inputs in order of first appearance.
    pub fn inputs(&self) -> Vec<(String, String)> {
        let mut out = vec![];
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(String, String)>) {
        match self {
            Expr::Named(l, a) => {
                if !out.iter().any(|(k, _)| k == l) {
                    out.push((l.clone(), a.to_string()));
                }
            }
            Expr::Ln(a) | Expr::Sqrt(a) | Expr::Pow(a, _) => a.collect(out),
            Expr::Diff(a, b) | Expr::Quot(a, b) => {
                a.collect(out);
                b.collect(out);
            }
            Expr::Sum(v) | Expr::Prod(v) | Expr::Max(v) => v.iter().for_each(|e| e.collect(out)),
            Expr::Dec(_) | Expr::LogAlpha => {}
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Expr], sep: &str| -> fmt::Result {
            for (i, e) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{e}")?;
            }
            Ok(())
        };
        match self {
            Expr::Dec(s) => write!(f, "{s}"),
            Expr::LogAlpha => write!(f, "log(alpha)"),
            Expr::Ln(a) => write!(f, "log({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Sum(v) => {
                write!(f, "(")?;
                join(f, v, " + ")?;
                write!(f, ")")
            }
            Expr::Diff(a, b) => write!(f, "({a} - {b})"),
            Expr::Prod(v) => join(f, v, "*"),
            Expr::Quot(a, b) => write!(f, "({a})/({b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
            Expr::Max(v) => {
                write!(f, "max(")?;
                join(f, v, ", ")?;
                write!(f, ")")
            }
            Expr::Named(l, _) => write!(f, "[{l}]"),
        }
    }
}

// ---------------------------------------------------------------------------
// Decimal rounding

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `ceil(v / 10^s)` (or floor) for the exact dyadic upper (lower) end.
fn scaled_round(mant: &BigInt, exp: i64, s: i64, up: bool) -> BigInt {
    let mut num = mant.clone();
    let mut den = BigInt::one();
    if exp >= 0 {
        num <<= exp as u64;
    } else {
        den <<= (-exp) as u64;
    }
    if s >= 0 {
        den *= pow10(s as u32);
    } else {
        num *= pow10((-s) as u32);
    }
    if up {
        num.div_ceil(&den)
    } else {
        num.div_floor(&den)
    }
}

fn round_decimal(mant: &BigInt, exp: i64, sig: u32, up: bool) -> String {
    if mant.is_zero() {
        return "0".into();
    }
    let approx = crate::arith::Dyadic::new(mant.abs(), exp).to_f64();
    let mut k = approx.log10().floor() as i64;
    loop {
        let q = scaled_round(mant, exp, k - sig as i64 + 1, up);
        let qa = q.abs();
        if qa >= pow10(sig) {
            k += 1;
            continue;
        }
        if qa < pow10(sig - 1) {
            if qa.is_zero() {
                return "0".into();
            }
            k -= 1;
            continue;
        }
        let digits = qa.to_string();
        let sign = if q.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        return if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        };
    }
}

/// Smallest `sig`-digit decimal that is at least every point of `b`.
pub fn round_up(b: &Ball, sig: u32) -> String {
    let h = b.hi();
    round_decimal(&h.mant, h.exp, sig, true)
}

/// Largest `sig`-digit decimal that is at most every point of `b`.
pub fn round_down(b: &Ball, sig: u32) -> String {
    let l = b.lo();
    round_decimal(&l.mant, l.exp, sig, false)
}

// ---------------------------------------------------------------------------
// Heights

/// Absolute logarithmic height of a root of the primitive irreducible `poly`.
/// Roots off the real line are handled when they form a single conjugate
/// pair, whose common modulus follows from the constant term.
pub fn log_height(poly: &PolyZ, prec: u32) -> Result<Ball, ArithError> {
    let d = poly.degree();
    if d == 0 || !poly.leading().is_positive() || poly.coeffs()[0].is_zero() {
        return Err(ArithError::RootsUncertified);
    }
    let work = prec + 32;
    let real: Vec<Ball> = poly
        .isolate_real_roots()
        .iter()
        .map(|(a, b)| refine_root(poly, (a, b), work))
        .collect::<Result<_, _>>()?;
    let lead = Ball::exact_int(poly.leading().clone()).with_prec(work);
    let one = Ball::one().with_prec(work);
    let mut sum = lead.ln()?;
    for r in &real {
        sum = sum.add(&r.abs().max(&one).ln()?);
    }
    match d - real.len() {
        0 => {}
        2 => {
            // |lambda|^2 = |a_0| / (a_d * prod |real roots|)
            let mut den = lead.clone();
            for r in &real {
                den = den.mul(&r.abs());
            }
            let a0 = Ball::exact_int(poly.coeffs()[0].abs()).with_prec(work);
            let m2 = a0.div(&den)?;
            // Two conjugates each contribute log max(|lambda|, 1) = max(log |lambda|^2, 0).
            sum = sum.add(&m2.ln()?.max(&Ball::zero()));
        }
        _ => return Err(ArithError::RootsUncertified),
    }
    sum.div(&Ball::exact_int(d as i64)).map(|b| b.with_prec(prec))
}

// ---------------------------------------------------------------------------
// Matveev

#[derive(Clone, Debug)]
pub struct MatveevInstance {
    pub t: u32,
    pub d: u32,
    pub b: BigInt,
    pub a: Vec<Ball>,
}

impl MatveevInstance {
    pub fn check(&self) -> Result<(), BakerError> {
        let min_a = Ball::from_decimal("0.16", 64)?;
        if self.t < 2 {
            return Err(BakerError::Invariant(format!("t = {} < 2", self.t)));
        }
        if self.d < 1 {
            return Err(BakerError::Invariant("D = 0".into()));
        }
        if self.b < BigInt::from(3) {
            return Err(BakerError::Invariant(format!("B = {} < 3", self.b)));
        }
        if self.a.len() != self.t as usize {
            return Err(BakerError::Invariant(format!("{} values A_i for t = {}", self.a.len(), self.t)));
        }
        if self.a.iter().any(|a| a.certainly_lt(&min_a)) {
            return Err(BakerError::Invariant("some A_i < 0.16".into()));
        }
        Ok(())
    }
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D)`.
pub fn matveev_constant(t: u32, d: u32) -> Expr {
    let ts = t.to_string();
    let ds = d.to_string();
    Expr::Prod(vec![
        dec("1.4"),
        pow(dec("30"), t + 3),
        pow(dec(&ts), 4),
        Expr::Sqrt(Box::new(dec(&ts))),
        pow(dec(&ds), 2),
        Expr::Sum(vec![dec("1"), ln_dec(&ds)]),
    ])
}

/// The `K` with `log |Gamma| > -K`.
pub fn matveev_lower(inst: &MatveevInstance, prec: u32) -> Result<Ball, BakerError> {
    inst.check()?;
    let c = matveev_constant(inst.t, inst.d).eval(prec + 16)?;
    let b = Ball::exact_int(inst.b.clone()).with_prec(prec + 16);
    let mut k = c.mul(&Ball::one().add(&b.ln()?));
    for a in &inst.a {
        k = k.mul(a);
    }
    Ok(k.with_prec(prec))
}

// ---------------------------------------------------------------------------
// Bugeaud–Laurent

#[derive(Clone, Debug)]
pub struct BLInstance {
    pub p: u32,
    pub g: u32,
    pub d: u32,
    pub h1: Ball,
    pub h2: Ball,
    pub b1: BigInt,
    pub b2: BigInt,
}

impl BLInstance {
    pub fn check(&self, prec: u32) -> Result<(), BakerError> {
        if self.p != 2 && self.p != 3 {
            return Err(BakerError::Invariant(format!("p = {} not in {{2, 3}}", self.p)));
        }
        if self.g < 1 || self.d < 1 {
            return Err(BakerError::Invariant("g and D must be positive".into()));
        }
        if !self.b1.is_positive() || !self.b2.is_positive() {
            return Err(BakerError::Invariant("b1, b2 must be positive".into()));
        }
        let floor = Ball::exact_int(self.p).with_prec(prec).ln()?.div(&Ball::exact_int(self.d))?;
        if self.h1.certainly_lt(&floor) || self.h2.certainly_lt(&floor) {
            return Err(BakerError::Invariant("h' below log p / D".into()));
        }
        Ok(())
    }
}

/// `E = max(log E' + log log p + 0.4, 10, 10 log p)`, `E' = b1/h2 + b2/h1`.
pub fn bl_e(inst: &BLInstance, prec: u32) -> Result<Ball, ArithError> {
    let p = Ball::exact_int(inst.p).with_prec(prec);
    let lp = p.ln()?;
    let e1 = Ball::exact_int(inst.b1.clone())
        .with_prec(prec)
        .div(&inst.h2)?
        .add(&Ball::exact_int(inst.b2.clone()).with_prec(prec).div(&inst.h1)?);
    let first = e1.ln()?.add(&lp.ln()?).add(&Ball::from_decimal("0.4", prec)?);
    Ok(first.max(&Ball::exact_int(10)).max(&lp.mul_int(&BigInt::from(10))))
}

/// Upper bound on `nu_p(lambda_1^b1 lambda_2^b2 - 1)`.
pub fn bl_upper(inst: &BLInstance, prec: u32) -> Result<Ball, BakerError> {
    let w = prec + 16;
    inst.check(w)?;
    let e = bl_e(inst, w)?;
    let p = Ball::exact_int(inst.p).with_prec(w);
    let lead = Ball::exact_int(24 * inst.p * inst.g)
        .with_prec(w)
        .div(&Ball::exact_int(inst.p - 1).mul(&p.ln()?.pow_u(4)))?;
    let d4 = Ball::exact_int(inst.d).pow_u(4);
    Ok(lead.mul(&e.sqr()).mul(&d4).mul(&inst.h1).mul(&inst.h2).with_prec(prec))
}

// ---------------------------------------------------------------------------
// Guzmán–Luca and the growth window

/// `2^m T (log T)^m`, an upper bound for any `z` with `z / (log z)^m < T`.
pub fn guzman_luca(m: u32, t: &Ball) -> Result<Ball, BakerError> {
    if m < 1 {
        return Err(BakerError::Invariant("m = 0".into()));
    }
    let threshold = Ball::exact_int(4 * m * m).pow_u(m as u64);
    if !t.certainly_gt(&threshold) {
        return Err(BakerError::ThresholdTooSmall(threshold.to_string()));
    }
    let prec = t.prec().max(64);
    let two_m = Ball::one().with_prec(prec).mul_pow2(m as i64);
    Ok(two_m.mul(t).mul(&t.ln()?.pow_u(m as u64)))
}

/// Range of `X = x log 2 + y log 3` for a solution at level `n > 310`:
/// `(n log alpha - 3, n log alpha + 60 (log(n log alpha))^2)`.
pub fn x_window(n: u64, prec: u32) -> Result<(Ball, Ball), BakerError> {
    if n <= 310 {
        return Err(BakerError::HypothesisViolated(format!("n = {n} <= 310")));
    }
    let w = prec + 16;
    let nl = Ball::exact_int(n).with_prec(w).mul(&log_alpha().eval(w)?);
    let lo = nl.sub(&Ball::exact_int(3));
    let hi = nl.add(&nl.ln()?.sqr().mul_int(&BigInt::from(60)));
    Ok((lo.with_prec(prec), hi.with_prec(prec)))
}

// ---------------------------------------------------------------------------
// Bound chains

#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    /// Machine key, unique within a chain.
    pub id: String,
    /// Which step of the chain this link belongs to.
    pub lemma: String,
    pub name: String,
    /// Power of `log n` multiplying the constant ("" for an absolute bound).
    pub shape: String,
    pub formula: String,
    pub inputs: Vec<(String, String)>,
    /// Derived value, rounded up.
    pub value: String,
    pub reference: Option<String>,
    /// Value passed downstream: max(value, reference).
    pub propagated: String,
    #[serde(skip)]
    pub expr: Expr,
}

impl BoundCertificate {
    /// Recomputes the value from the stored expression.
    pub fn reevaluate(&self) -> Result<String, ArithError> {
        Ok(round_up(&self.expr.eval(CHAIN_PREC)?, SIG_DIGITS))
    }

    /// derived / reference, if there is a published counterpart.
    pub fn ratio(&self) -> Option<f64> {
        let p: f64 = self.reference.as_ref()?.parse().ok()?;
        let v: f64 = self.value.parse().ok()?;
        Some(v / p)
    }
}

struct Chain {
    lemma: String,
    certs: Vec<BoundCertificate>,
}

impl Chain {
    fn get(&self, id: &str) -> Expr {
        let c = self.certs.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no link {id}"));
        named(id, &c.propagated)
    }

    fn step(&mut self, lemma: &str) {
        self.lemma = lemma.to_string();
    }

    fn link(&mut self, id: &str, name: &str, shape: &str, expr: Expr, reference: Option<&str>) -> Result<(), BakerError> {
        let b = expr.eval(CHAIN_PREC)?;
        let value = round_up(&b, SIG_DIGITS);
        let propagated = match reference {
            Some(p) => {
                let pb = Ball::from_decimal(p, CHAIN_PREC)?;
                let vb = Ball::from_decimal(&value, CHAIN_PREC)?;
                let cap = pb.mul(&Ball::from_decimal(SLACK, CHAIN_PREC)?);
                if !vb.certainly_le(&cap) {
                    return Err(BakerError::ChainMismatch {
                        link: format!("{}/{id}", self.lemma),
                        derived: value,
                        reference: p.to_string(),
                    });
                }
                if vb.certainly_gt(&pb) {
                    value.clone()
                } else {
                    p.to_string()
                }
            }
            None => value.clone(),
        };
        self.certs.push(BoundCertificate {
            id: id.to_string(),
            lemma: self.lemma.clone(),
            name: name.to_string(),
            shape: shape.to_string(),
            formula: expr.to_string(),
            inputs: expr.inputs(),
            value,
            reference: reference.map(str::to_string),
            propagated,
            expr,
        });
        Ok(())
    }
}

/// Lower limits on n at which the chain's log factors are absorbed.
pub const N_MIN_LOW: &str = "311";
pub const N_MIN_HIGH: &str = "36100";

/// Degree and `g` values of the p-adic step: the field Q(alpha, beta) has
/// degree 6, and `g` is 3 at p = 2 and 13 at p = 3.
const BL_DEGREE: u32 = 6;
const G2: u32 = 3;
const G3: u32 = 13;

fn inv_log(n: &str, k: u32) -> Expr {
    quot(dec("1"), pow(ln_dec(n), k))
}

fn one_plus_inv_log(n: &str) -> Expr {
    Expr::Sum(vec![dec("1"), inv_log(n, 1)])
}

fn la() -> Expr {
    Expr::LogAlpha
}

/// `24 p g / ((p - 1)(log p)^4)`.
fn bl_lead(p: u32, g: u32) -> Expr {
    quot(dec(&(24 * p * g).to_string()), Expr::Prod(vec![dec(&(p - 1).to_string()), pow(ln_dec(&p.to_string()), 4)]))
}

/// Largest excess of `E` over `log n` at `n >= n_min`, using
/// `E' < n / log alpha`; the p-adic step needs it to be at most 1.
fn e_excess(p: u32) -> Expr {
    let lp = ln_dec(&p.to_string());
    Expr::Max(vec![
        Expr::Sum(vec![ln(quot(dec("1"), la())), ln(lp.clone()), dec("0.4")]),
        Expr::Diff(Box::new(dec("10")), Box::new(ln_dec(N_MIN_HIGH))),
        Expr::Diff(Box::new(Expr::Prod(vec![dec("10"), lp])), Box::new(ln_dec(N_MIN_HIGH))),
    ])
}

fn guzman_luca_expr(m: u32, t: Expr) -> Expr {
    Expr::Prod(vec![pow(dec("2"), m), t.clone(), pow(ln(t), m)])
}

/// Chain of absolute bounds for the scenario. Each coefficient multiplies
/// the power of `log n` recorded in `shape`.
pub fn bound_chain(scenario: Scenario) -> Result<Vec<BoundCertificate>, BakerError> {
    let mut ch = Chain { lemma: String::new(), certs: vec![] };
    match scenario {
        Scenario::Positive => positive_chain(&mut ch)?,
        Scenario::Negative => negative_chain(&mut ch)?,
        Scenario::Zero => return Ok(vec![]),
    }
    for p in [2u32, 3] {
        let c = ch.certs.iter().find(|c| c.id == format!("e_excess_p{p}")).expect("e link");
        if !Ball::from_decimal(&c.value, 64)?.certainly_le(&Ball::one()) {
            return Err(BakerError::ChainMismatch { link: c.id.clone(), derived: c.value.clone(), reference: "1".into() });
        }
    }
    Ok(ch.certs)
}

fn heights_fixed(with_c_alpha: bool) -> Vec<Expr> {
    let mut v = vec![
        Expr::Prod(vec![dec("3"), ln_dec("2")]),
        Expr::Prod(vec![dec("3"), ln_dec("3")]),
        la(),
    ];
    if with_c_alpha {
        v.push(ln_dec("44"));
    }
    v
}

fn padic_links(ch: &mut Chain, gap: &str, lg: u32, reference: [&str; 6]) -> Result<(), BakerError> {
    // lg: power of log n in the gap bound n - n2 < gap (log n)^lg.
    let shape = |k: u32| if k == 1 { "log n".to_string() } else { format!("(log n)^{k}") };
    for (p, published) in [(2u32, reference[0]), (3, reference[1])] {
        let e = Expr::Prod(vec![
            Expr::Sum(vec![Expr::Prod(vec![dec("6"), ch.get(gap)]), Expr::Prod(vec![dec("30"), inv_log(N_MIN_LOW, lg)])]),
            quot(la(), ln_dec(&p.to_string())),
        ]);
        ch.link(&format!("nu_p{p}"), &format!("nu_{p} of the beta-gamma factor"), &shape(lg), e, Some(published))?;
    }
    let h = Expr::Sum(vec![
        Expr::Prod(vec![quot(dec("8"), dec("3")), la(), ch.get(gap)]),
        Expr::Prod(vec![
            Expr::Sum(vec![dec("4"), Expr::Prod(vec![quot(dec("32"), dec("3")), la()])]),
            inv_log(N_MIN_LOW, lg),
        ]),
    ]);
    ch.link("h_prime", "modified height of lambda_2", &shape(lg), h, Some(reference[2]))?;
    for p in [2u32, 3] {
        ch.link(&format!("e_excess_p{p}"), &format!("E - log n at p = {p}"), "", e_excess(p), None)?;
    }
    let bl = Expr::Prod(vec![
        dec("24"),
        pow(one_plus_inv_log(N_MIN_HIGH), 2),
        pow(dec(&BL_DEGREE.to_string()), 4),
        la(),
        ch.get("h_prime"),
    ]);
    ch.link("bl_coeff", "Bugeaud-Laurent coefficient", &shape(lg + 2), bl, Some(reference[3]))?;
    // Case 2 (dependent lambda's) gives 3 log n; it is folded in by max.
    let case2 = Expr::Prod(vec![dec("3"), inv_log(N_MIN_HIGH, lg + 1)]);
    for (p, g, id, published) in [(2u32, G2, "x_min", reference[4]), (3, G3, "y_min", reference[5])] {
        let case1 = Expr::Sum(vec![
            Expr::Prod(vec![ch.get("bl_coeff"), bl_lead(p, g), quot(dec("1"), dec("24"))]),
            Expr::Prod(vec![ch.get(&format!("nu_p{p}")), inv_log(N_MIN_HIGH, 2)]),
        ]);
        ch.link(id, &format!("{id} coefficient"), &shape(lg + 2), Expr::Max(vec![case1, case2.clone()]), Some(published))?;
    }
    Ok(())
}

fn positive_chain(ch: &mut Chain) -> Result<(), BakerError> {
    let l311 = one_plus_inv_log(N_MIN_LOW);

    ch.step("pos-1");
    let mut k = vec![matveev_constant(4, 3)];
    k.extend(heights_fixed(true));
    k.push(l311.clone());
    ch.link("matveev_k1", "Matveev constant, n - n1", "log n", Expr::Prod(k), Some("5.6e15"))?;
    let e = quot(Expr::Sum(vec![ch.get("matveev_k1"), quot(ln_dec("10"), ln_dec(N_MIN_LOW))]), la());
    ch.link("n_minus_n1", "n - n1", "log n", e, Some("9.6e15"))?;

    ch.step("pos-2");
    let e = Expr::Sum(vec![
        Expr::Prod(vec![ch.get("n_minus_n1"), la()]),
        quot(Expr::Sum(vec![ln_dec("44"), Expr::Prod(vec![dec("2"), ln_dec("1.55")])]), ln_dec(N_MIN_LOW)),
    ]);
    ch.link("a4", "A_4 height bound", "log n", e, Some("5.7e15"))?;
    let mut k = vec![matveev_constant(4, 3)];
    k.extend(heights_fixed(false));
    k.push(ch.get("a4"));
    k.push(l311);
    ch.link("matveev_k2", "Matveev constant, X - X1", "(log n)^2", Expr::Prod(k), Some("8.4e30"))?;
    let e = Expr::Sum(vec![ch.get("matveev_k2"), quot(ln_dec("3"), pow(ln_dec(N_MIN_LOW), 2))]);
    ch.link("x_minus_x1", "X - X1", "(log n)^2", e, Some("8.5e30"))?;

    ch.step("pos-3");
    padic_links(ch, "n_minus_n1", 1, ["5.7e16", "3.2e16", "1.6e16", "3.7e20", "1e22", "5e21"])?;

    ch.step("pos-4");
    let e = Expr::Prod(vec![Expr::Sum(vec![ln_dec("2"), ln_dec("3")]), Expr::Max(vec![ch.get("x_min"), ch.get("y_min")])]);
    ch.link("x3", "X_3", "(log n)^3", e, Some("1.8e22"))?;
    let e = Expr::Sum(vec![ch.get("x3"), Expr::Prod(vec![dec("3"), ch.get("x_minus_x1"), inv_log(N_MIN_HIGH, 1)])]);
    ch.link("x_coeff", "X", "(log n)^3", e, Some("2.44e30"))?;
    let e = quot(Expr::Sum(vec![ch.get("x_coeff"), Expr::Prod(vec![dec("3"), inv_log(N_MIN_HIGH, 3)])]), la());
    ch.link("n_over_log3", "n / (log n)^3", "", e, Some("4.1e30"))?;
    ch.link("n_bound", "n", "", guzman_luca_expr(3, ch.get("n_over_log3")), Some("1.2e37"))?;
    final_xy_links(ch, ["7.4e36", "1.1e37", "6.8e36"])
}

fn negative_chain(ch: &mut Chain) -> Result<(), BakerError> {
    let l311 = one_plus_inv_log(N_MIN_LOW);

    ch.step("neg-1");
    let mut k = vec![matveev_constant(4, 3)];
    k.extend(heights_fixed(true));
    k.push(l311);
    ch.link("matveev_k1", "Matveev constant, X - X1", "log n", Expr::Prod(k), Some("5.5e15"))?;
    let e = Expr::Sum(vec![ch.get("matveev_k1"), quot(ln_dec("3"), ln_dec(N_MIN_LOW))]);
    ch.link("x_minus_x1", "X - X1", "log n", e, Some("5.55e15"))?;

    ch.step("neg-2");
    // log(n1 log alpha) < log n since log alpha < 1.
    let e = quot(
        Expr::Sum(vec![
            dec("60"),
            quot(ln_dec("3"), pow(ln_dec(N_MIN_LOW), 2)),
            Expr::Prod(vec![ch.get("matveev_k1"), inv_log(N_MIN_LOW, 1)]),
        ]),
        la(),
    );
    ch.link("n_minus_n1", "n - n1", "(log n)^2", e, Some("2e15"))?;

    ch.step("neg-3");
    padic_links(ch, "n_minus_n1", 2, ["1.1e16", "6.7e15", "3.3e15", "7.6e19", "2e21", "1.1e21"])?;

    ch.step("neg-4");
    let e = Expr::Prod(vec![Expr::Sum(vec![ln_dec("2"), ln_dec("3")]), Expr::Max(vec![ch.get("x_min"), ch.get("y_min")])]);
    ch.link("x4", "X_4", "(log n)^4", e, Some("3.6e21"))?;
    let e = Expr::Sum(vec![ch.get("x4"), Expr::Prod(vec![dec("4"), ch.get("x_minus_x1"), inv_log(N_MIN_HIGH, 3)])]);
    ch.link("x_coeff", "X", "(log n)^4", e, Some("3.61e21"))?;
    let e = quot(Expr::Sum(vec![ch.get("x_coeff"), Expr::Prod(vec![dec("3"), inv_log(N_MIN_HIGH, 4)])]), la());
    ch.link("n_over_log4", "n / (log n)^4", "", e, Some("6e21"))?;
    ch.link("n_bound", "n", "", guzman_luca_expr(4, ch.get("n_over_log4")), Some("6.1e29"))?;
    final_xy_links(ch, ["3.8e29", "5.5e29", "3.5e29"])
}

fn final_xy_links(ch: &mut Chain, reference: [&str; 3]) -> Result<(), BakerError> {
    let nl = Expr::Prod(vec![ch.get("n_bound"), la()]);
    let e = Expr::Sum(vec![nl.clone(), Expr::Prod(vec![dec("60"), pow(ln(nl), 2)])]);
    ch.link("x_total", "X = x log 2 + y log 3", "", e, Some(reference[0]))?;
    ch.link("x_bound", "x", "", quot(ch.get("x_total"), ln_dec("2")), Some(reference[1]))?;
    ch.link("y_bound", "y", "", quot(ch.get("x_total"), ln_dec("3")), Some(reference[2]))?;
    Ok(())
}

/// Looks up a link of a chain by id.
pub fn find<'a>(chain: &'a [BoundCertificate], id: &str) -> Option<&'a BoundCertificate> {
    chain.iter().find(|c| c.id == id)
}

// ---------------------------------------------------------------------------
// Final window algebra

/// Box implied by small x_min, y_min and a reduced `X - X_1` bound:
/// `X < x_min log 2 + y_min log 3 + 2 c_X`, then x, y, n from X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalBox {
    pub x_total_lt: u64,
    pub x_lt: u64,
    pub y_lt: u64,
    pub n_lt: u64,
}

pub fn final_box(x_min: u64, y_min: u64, c_x: u64, prec: u32) -> Result<FinalBox, ArithError> {
    let w = prec.max(64);
    let l2 = Ball::exact_int(2).with_prec(w).ln()?;
    let l3 = Ball::exact_int(3).with_prec(w).ln()?;
    let x = Ball::exact_int(x_min).mul(&l2).add(&Ball::exact_int(y_min).mul(&l3)).add(&Ball::exact_int(2 * c_x));
    let lt = |b: &Ball| -> u64 {
        let c = b.ceil_upper();
        let c = if b.contains_int(&c) { c + 1 } else { c };
        c.try_into().expect("bound fits u64")
    };
    let x_total_lt = lt(&x);
    let xt = Ball::exact_int(x_total_lt).with_prec(w);
    Ok(FinalBox {
        x_total_lt,
        x_lt: lt(&xt.div(&l2)?),
        y_lt: lt(&xt.div(&l3)?),
        n_lt: lt(&xt.add(&Ball::exact_int(3)).div(&log_alpha().eval(w)?)?),
    })
}
