//! Digit-by-digit lifting of z and the resulting x_min / y_min caps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{build_context, nu_int, valuation_poly, PadicError, ResidueTable, ValuationPoly, DEFAULT_K0, DEFAULT_N};
use crate::exec::Exec;

/// Live classes allowed per level: both digits explored to depth 8.
fn live_budget(p: u32) -> usize {
    (p as usize).pow(8)
}

#[derive(Clone, Debug, Serialize)]
pub struct HenselOutcome {
    pub p: u32,
    pub d: u64,
    pub n0: u64,
    /// max nu_p(T_{n+d} - T_n) over n = n0 + period z <= n_cap; `None` if the class is empty.
    pub max_valuation: Option<u32>,
    #[serde(serialize_with = "crate::ser::opt_big")]
    pub witness_n: Option<BigInt>,
    pub depth: u32,
    pub nodes: usize,
    pub max_live: usize,
}

fn derivative_at(poly: &ValuationPoly, r: &BigInt, m: &BigInt) -> BigInt {
    poly.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(BigInt::zero(), |acc, (k, c)| (acc * r + c * k).mod_floor(m))
}

/// Exhaustive lifting over z in [0, zcap], skipping n = 1. A class z = r + p^j t is closed
/// once nu(F(r)) is strictly below a lower bound for every other Taylor
/// coefficient, since then nu(F) is constant on the class. A class holding a
/// single admissible z is evaluated directly.
pub fn hensel_bound(poly: &ValuationPoly, n_cap: &BigInt) -> Result<HenselOutcome, PadicError> {
    let p = poly.p;
    let mut out = HenselOutcome {
        p,
        d: poly.d,
        n0: poly.n0,
        max_valuation: None,
        witness_n: None,
        depth: 0,
        nodes: 0,
        max_live: 1,
    };
    let n0 = BigInt::from(poly.n0);
    if &n0 > n_cap {
        return Ok(out);
    }
    let period = BigInt::from(poly.period);
    let zcap = (n_cap - &n0).div_floor(&period);
    let m = poly.modulus();
    // Taylor coefficient i >= 2 at step p^j has valuation >= i j + min_{k >= i} nu(a_k).
    let tail_min: Vec<u32> = (0..poly.coeff_nu.len())
        .map(|i| poly.coeff_nu[i..].iter().copied().min().unwrap_or(u32::MAX))
        .collect();
    let mut best: Option<(u32, BigInt)> = None;
    let mut record = |v: u32, r: &BigInt| {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, r.clone()));
        }
    };
    let mut live = vec![BigInt::zero()];
    let mut j = 0u32;
    let mut step = BigInt::one();
    while !live.is_empty() {
        let mut next = vec![];
        for r in live {
            out.nodes += 1;
            if r > zcap {
                continue;
            }
            let b0 = poly.eval(&r);
            let v0 = nu_int(&b0, p).unwrap_or(poly.n_f);
            if &r + &step > zcap {
                // T_1 = T_2 is the only vanishing difference; n = 1 is excluded by convention.
                if poly.n0 == 1 && r.is_zero() {
                    continue;
                }
                if v0 >= poly.n_f {
                    return Err(PadicError::PrecisionBudget(format!(
                        "F vanishes mod p^{} at d = {}, n0 = {}",
                        poly.n_f, poly.d, poly.n0
                    )));
                }
                record(v0, &r);
                continue;
            }
            let b1 = (derivative_at(poly, &r, &m) * &step).mod_floor(&m);
            let mut rest = nu_int(&b1, p).unwrap_or(poly.n_f);
            for (i, &t) in tail_min.iter().enumerate().skip(2) {
                rest = rest.min(t.saturating_add(i as u32 * j));
            }
            if v0 < rest {
                record(v0, &r);
                continue;
            }
            for t in 0..p {
                next.push(&r + &step * t);
            }
        }
        if next.len() > live_budget(p) {
            return Err(PadicError::Ambiguous { depth: j + 1, live: next.len() });
        }
        out.max_live = out.max_live.max(next.len());
        live = next;
        if !live.is_empty() {
            j += 1;
            step *= p;
        }
    }
    out.depth = j;
    if let Some((v, r)) = best {
        out.max_valuation = Some(v - poly.shift);
        out.witness_n = Some(n0 + period * r);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SminRow {
    pub p: u32,
    pub d: u64,
    pub residues: usize,
    /// Upper bound on nu_p(T_{n+d} - T_n) over 0 <= n <= n_cap.
    pub bound: u32,
    #[serde(serialize_with = "crate::ser::opt_big")]
    pub witness_n: Option<BigInt>,
    pub nodes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SminReport {
    pub d_max: u64,
    #[serde(serialize_with = "crate::ser::big")]
    pub n_cap: BigInt,
    pub k0: u32,
    /// Precision N used for each prime, after any escalation.
    pub precision: Vec<(u32, u32)>,
    /// Caps on x_min and y_min.
    pub x_min_bound: u32,
    pub y_min_bound: u32,
    pub nonempty: Vec<(u32, usize)>,
    pub rows: Vec<SminRow>,
}

/// Per-d bounds for one prime at precision `n`.
pub fn smin_table(p: u32, d_max: u64, n_cap: &BigInt, n: u32, exec: Exec) -> Result<Vec<SminRow>, PadicError> {
    if d_max == 0 {
        return Ok(vec![]);
    }
    let ctx = build_context(p, n)?;
    let table = ResidueTable::new(p, DEFAULT_K0, d_max)?;
    let ds: Vec<u64> = (1..=d_max).collect();
    exec.try_map(&ds, |&d| {
        let residues = table.scan(d);
        // n = 0 lies below every class: nu_p(T_d - T_0) directly.
        let at_zero = nu_int(&crate::trib::trib(d), p).unwrap_or(0);
        let mut row = SminRow { p, d, residues: residues.len(), bound: at_zero.max(DEFAULT_K0 - 1), witness_n: None, nodes: 0 };
        if at_zero > DEFAULT_K0 - 1 {
            row.witness_n = Some(BigInt::zero());
        }
        for n0 in residues {
            let poly = valuation_poly(&ctx, d, n0)?;
            let h = hensel_bound(&poly, n_cap)?;
            row.nodes += h.nodes;
            if let Some(v) = h.max_valuation {
                if v > row.bound || (v == row.bound && row.witness_n.is_none()) {
                    row.bound = v;
                    row.witness_n = h.witness_n;
                }
            }
        }
        Ok(row)
    })
}

const N_CEILING: u32 = 320;

/// [`smin_table`] for one prime, raising the precision N by 64 whenever a
/// class exhausts it. Returns the rows and the N that succeeded.
pub fn smin_prime(p: u32, d_max: u64, n_cap: &BigInt, exec: Exec) -> Result<(Vec<SminRow>, u32), PadicError> {
    let mut n = DEFAULT_N;
    loop {
        match smin_table(p, d_max, n_cap, n, exec) {
            Err(PadicError::PrecisionBudget(_)) if n + 64 <= N_CEILING => n += 64,
            other => return Ok((other?, n)),
        }
    }
}

/// max over 1 <= d <= d_max and n <= n_cap of nu_2 and nu_3 of T_{n+d} - T_n.
pub fn smin_bound(d_max: u64, n_cap: &BigInt, exec: Exec) -> Result<SminReport, PadicError> {
    let mut rows = vec![];
    let mut precision = vec![];
    let mut nonempty = vec![];
    let mut caps = vec![];
    for p in [2u32, 3] {
        let (table, n) = smin_prime(p, d_max, n_cap, exec)?;
        precision.push((p, n));
        nonempty.push((p, table.iter().filter(|r| r.residues > 0).count()));
        caps.push(table.iter().map(|r| r.bound).max().unwrap_or(DEFAULT_K0 - 1));
        rows.extend(table);
    }
    Ok(SminReport {
        d_max,
        n_cap: n_cap.clone(),
        k0: DEFAULT_K0,
        precision,
        x_min_bound: caps[0],
        y_min_bound: caps[1],
        nonempty,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{exact_nu_diff, scan_residues};

    fn cap(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn shift_nine_below_126() {
        let ctx = build_context(2, 128).unwrap();
        let poly = valuation_poly(&ctx, 9, 167).unwrap();
        let n_cap = cap("12000000000000000000000000000000000000");
        let h = hensel_bound(&poly, &n_cap).unwrap();
        let v = h.max_valuation.unwrap();
        assert!(v < 126, "{v}");
        let w = h.witness_n.unwrap();
        assert!(w <= n_cap);
        assert_eq!(h.max_live, 2);
    }

    #[test]
    fn small_cap_matches_brute_force() {
        let ctx = build_context(2, 64).unwrap();
        for d in [1u64, 9, 20, 37] {
            for n0 in scan_residues(d, 2, 8).unwrap() {
                let poly = valuation_poly(&ctx, d, n0).unwrap();
                let h = hensel_bound(&poly, &BigInt::from(6000)).unwrap();
                let brute = (0..)
                    .map(|z| n0 + 512 * z)
                    .take_while(|&n| n <= 6000)
                    .filter(|&n| n != 1)
                    .map(|n| exact_nu_diff(n, d, 2).unwrap())
                    .max();
                assert_eq!(h.max_valuation, brute, "d = {d}, n0 = {n0}");
            }
        }
    }

    #[test]
    fn empty_class_above_cap() {
        let ctx = build_context(2, 64).unwrap();
        let poly = valuation_poly(&ctx, 9, 505).unwrap();
        let h = hensel_bound(&poly, &BigInt::from(300)).unwrap();
        assert_eq!(h.max_valuation, None);
    }

    #[test]
    fn degenerate_shift_range() {
        let r = smin_bound(0, &BigInt::from(1000), Exec::Sequential).unwrap();
        assert_eq!((r.x_min_bound, r.y_min_bound), (7, 7));
    }
}
