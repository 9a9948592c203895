//! Staged reduction of the absolute bounds to a searchable box.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, Ball, Precision, Real};
use crate::baker::{self, round_up, BakerError, BoundCertificate, FinalBox, CHAIN_PREC, SIG_DIGITS};
use crate::cfrac::{self, CfError};
use crate::exec::Exec;
use crate::lattice::{deweger_bound, deweger_family, pow10, GapMethod, LatticeError, ReductionOutcome, ReductionProblem, Term};
use crate::padic::{smin_bound, PadicError, SminReport};
use crate::trib::{alpha, c_alpha, log_alpha};
use crate::Scenario;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no reduction applies to scenario {0}")]
    NotApplicable(Scenario),
    #[error("chain link `{0}` missing")]
    Missing(String),
    #[error(transparent)]
    Baker(#[from] BakerError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReduceConfig {
    pub gap: GapMethod,
    /// Starting M exponents for the two lattice stages (None = reference values).
    pub m_first: Option<u32>,
    pub m_second: Option<u32>,
    pub cf_m: u32,
    pub exec: Exec,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { gap: GapMethod::Exact, m_first: None, m_second: None, cf_m: 48, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub id: String,
    pub outcome: ReductionOutcome,
    /// Value carried forward (after hypotheses such as n - n1 >= 5).
    pub bound: u64,
    pub reference: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub d: u64,
    pub h_max: u64,
    pub retries: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CfStage {
    pub mu: String,
    pub m: String,
    pub index: usize,
    pub a_m: String,
    pub log_lower: String,
    /// c3 obtained from the Legendre bound, and the one used.
    pub c3_derived: String,
    pub c3_used: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PadicStage {
    pub d_max: u64,
    pub n_cap: String,
    pub x_min_derived: u32,
    pub y_min_derived: u32,
    pub reference_cap: u32,
    pub x_min_used: u64,
    pub y_min_used: u64,
    pub report: SminReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceReport {
    pub scenario: Scenario,
    pub a_bounds: Vec<(String, String)>,
    pub stages: Vec<Stage>,
    pub family: Vec<FamilyRow>,
    pub cf: Option<CfStage>,
    pub c_x: u64,
    pub d_max: u64,
    pub padic: PadicStage,
    pub final_box: FinalBox,
    pub reference_box: FinalBox,
    pub timings: Vec<(String, f64)>,
}

fn prop(chain: &[BoundCertificate], id: &str) -> Result<String, PipelineError> {
    Ok(baker::find(chain, id).ok_or_else(|| PipelineError::Missing(id.into()))?.propagated.clone())
}

fn problem(name: &str, m: u32, a: &[String], eta0: Term, c3: Term, c4: Term) -> ReductionProblem {
    ReductionProblem {
        name: name.into(),
        etas: vec![
            Term::new("log 2", Real::int(2).ln()),
            Term::new("log 3", Real::int(3).ln()),
            Term::new("log alpha", log_alpha()),
        ],
        eta0,
        m: pow10(m),
        a: a.to_vec(),
        c3,
        c4,
    }
}

fn log_c_alpha() -> Term {
    Term::new("log C_alpha", c_alpha().ln())
}

fn decimal_term(s: &str) -> Result<Term, ArithError> {
    Ok(Term::new(s, Real::decimal(s)?))
}

/// Published final boxes and p-adic caps.
pub fn reference_box(scenario: Scenario) -> Option<(FinalBox, u32)> {
    match scenario {
        Scenario::Positive => Some((FinalBox { x_total_lt: 578, x_lt: 834, y_lt: 527, n_lt: 962 }, 127)),
        Scenario::Negative => Some((FinalBox { x_total_lt: 549, x_lt: 793, y_lt: 500, n_lt: 914 }, 152)),
        Scenario::Zero => None,
    }
}

struct Clock(Vec<(String, f64)>, Instant);

impl Clock {
    fn lap(&mut self, name: &str) {
        self.0.push((name.into(), self.1.elapsed().as_secs_f64()));
        self.1 = Instant::now();
    }
}

pub fn reduce(scenario: Scenario, cfg: &ReduceConfig) -> Result<ReduceReport, PipelineError> {
    let (reference, reference_cap) = reference_box(scenario).ok_or(PipelineError::NotApplicable(scenario))?;
    let mut clock = Clock(vec![], Instant::now());
    let chain = baker::bound_chain(scenario)?;
    let a: Vec<String> = ["x_bound", "y_bound", "n_bound"].iter().map(|id| prop(&chain, id)).collect::<Result<_, _>>()?;
    let a_bounds = ["x_bound", "y_bound", "n_bound"].iter().map(|s| s.to_string()).zip(a.clone()).collect();
    clock.lap("bounds");
    let mut stages = vec![];
    let mut family = vec![];
    let mut cf = None;
    let (c_x, d_max) = match scenario {
        Scenario::Positive => {
            let m1 = cfg.m_first.unwrap_or(112);
            let p = problem("n - n1", m1, &a, log_c_alpha(), decimal_term("15")?, Term::new("log alpha", log_alpha()));
            let out = deweger_bound(&p, cfg.gap)?;
            // the linear form needs n - n1 >= 5
            let d_max = out.h_max.max(4);
            stages.push(Stage { id: "n_minus_n1".into(), bound: d_max, reference: 285, outcome: out });
            clock.lap("lll_n_minus_n1");

            let m2 = cfg.m_second.unwrap_or(113);
            let base = problem("X - X1", m2, &a, log_c_alpha(), decimal_term("4.5")?, Term::new("1", Real::int(1)));
            let ds: Vec<u64> = (1..=d_max).collect();
            let eta0s: Vec<Term> = ds
                .iter()
                .map(|&d| Term::new(&format!("log C_alpha (alpha^{d} - 1)"), c_alpha().mul(&alpha().pow_u(d).sub(&Real::int(1))).ln()))
                .collect();
            let outs = deweger_family(&base, &eta0s, cfg.gap, cfg.exec)?;
            family = ds.iter().zip(&outs).map(|(&d, o)| FamilyRow { d, h_max: o.h_max, retries: o.retries }).collect();
            let worst = outs.into_iter().max_by_key(|o| o.h_max).expect("d_max >= 4");
            // the linear form needs X - X1 >= 2
            let c_x = worst.h_max.max(1);
            stages.push(Stage { id: "x_minus_x1".into(), bound: c_x, reference: 174, outcome: worst });
            clock.lap("lll_x_minus_x1");
            (c_x, d_max)
        }
        Scenario::Negative => {
            let m1 = cfg.m_first.unwrap_or(90);
            let p = problem("X - X1", m1, &a, log_c_alpha(), decimal_term("4.5")?, Term::new("1", Real::int(1)));
            let out = deweger_bound(&p, cfg.gap)?;
            let c_x = out.h_max.max(1);
            stages.push(Stage { id: "x_minus_x1".into(), bound: c_x, reference: 138, outcome: out });
            clock.lap("lll_x_minus_x1");

            let stage = legendre_stage(&a[1], cfg.cf_m)?;
            let c3 = decimal_term(&stage.c3_used)?;
            cf = Some(stage);
            clock.lap("legendre");

            let m2 = cfg.m_second.unwrap_or(90);
            let p = problem("n - n1", m2, &a, log_c_alpha(), c3, Term::new("log alpha", log_alpha()));
            let out = deweger_bound(&p, cfg.gap)?;
            // the linear form needs n - n1 >= 123
            let d_max = out.h_max.max(122);
            stages.push(Stage { id: "n_minus_n1".into(), bound: d_max, reference: 417, outcome: out });
            clock.lap("lll_n_minus_n1");
            (c_x, d_max)
        }
        Scenario::Zero => unreachable!(),
    };

    let n_cap = decimal_int_ceil(&a[2])?;
    let rep = smin_bound(d_max, &n_cap, cfg.exec)?;
    clock.lap("padic");
    let x_used = rep.x_min_bound.max(reference_cap) as u64;
    let y_used = rep.y_min_bound.max(reference_cap) as u64;
    let final_box = baker::final_box(x_used, y_used, c_x, CHAIN_PREC)?;
    let padic = PadicStage {
        d_max,
        n_cap: a[2].clone(),
        x_min_derived: rep.x_min_bound,
        y_min_derived: rep.y_min_bound,
        reference_cap,
        x_min_used: x_used,
        y_min_used: y_used,
        report: rep,
    };
    clock.lap("final_box");
    Ok(ReduceReport {
        scenario,
        a_bounds,
        stages,
        family,
        cf,
        c_x,
        d_max,
        padic,
        final_box,
        reference_box: reference,
        timings: clock.0,
    })
}

/// Smallest integer >= a decimal such as "1.2e37".
pub fn decimal_int_ceil(s: &str) -> Result<BigInt, ArithError> {
    Ok(Ball::from_decimal(s, 256)?.ceil_upper())
}

/// Legendre on log 3 / log 2 gives |u log 2 + v log 3| > L for 0 < |v| <= A_2,
/// hence 2^x 3^y < K alpha^n with K = 1.5 / (L alpha), and a third solution
/// yields |x log 2 + y log 3 - (n - 1) log alpha - log C_alpha| < c3 alpha^-(n - n1)
/// with c3 = 1.5 (K + 2) alpha / C_alpha.
pub fn legendre_stage(y_bound: &str, cf_m: u32) -> Result<CfStage, PipelineError> {
    const REFERENCE_C3: &str = "1.5e50";
    let m = pow10(cf_m);
    let mu = cfrac::parse_mu("log3/log2")?;
    let exp = cfrac::cf_expand("log3/log2", &mu, &m, Precision::default())?;
    let index = exp.index_beyond(&m).expect("expansion stops beyond M");
    let a_m = cfrac::legendre_floor(&exp, &m).expect("index exists");
    let prec = CHAIN_PREC;
    let s_max = Ball::from_decimal(y_bound, prec)?;
    let lower = cfrac::legendre_log_lower(&exp, &m, &s_max, prec).expect("index exists")?;
    let al = alpha().eval(prec)?;
    let k = Ball::from_decimal("1.5", prec)?.div(&lower.mul(&al))?;
    let c3 = Ball::from_decimal("1.5", prec)?.mul(&k.add(&Ball::exact_int(2))).mul(&al).div(&c_alpha().eval(prec)?)?;
    let c3_derived = round_up(&c3, SIG_DIGITS);
    let reference = Ball::from_decimal(REFERENCE_C3, prec)?;
    let c3_used = if c3.certainly_lt(&reference) { REFERENCE_C3.to_string() } else { c3_derived.clone() };
    Ok(CfStage {
        mu: "log3/log2".into(),
        m: format!("1e{cf_m}"),
        index,
        a_m: a_m.to_string(),
        log_lower: baker::round_down(&lower, SIG_DIGITS),
        c3_derived,
        c3_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_constants() {
        let s = legendre_stage("3.5e29", 48).unwrap();
        assert_eq!((s.index, s.a_m.as_str()), (100, "55"));
        assert_eq!(s.log_lower, "3.474e-32");
        assert_eq!(s.c3_used, "1.5e50");
        let c3: f64 = s.c3_derived.parse().unwrap();
        assert!(c3 > 1e32 && c3 < 1.2e32, "{c3}");
    }

    #[test]
    fn zero_scenario_has_no_reduction() {
        assert!(matches!(reduce(Scenario::Zero, &ReduceConfig::default()), Err(PipelineError::NotApplicable(_))));
    }

    #[test]
    fn decimal_caps() {
        assert_eq!(decimal_int_ceil("1.2e37").unwrap(), "12000000000000000000000000000000000000".parse().unwrap());
        assert_eq!(decimal_int_ceil("6.1e29").unwrap(), "610000000000000000000000000000".parse().unwrap());
    }
}
