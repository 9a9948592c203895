//! Enumeration of c = T_n - 2^x 3^y over a box and grouping by c.
//!
//! Grouping uses c mod (2^61 - 1) as a key: phase 1 streams (key, index)
//! pairs into partitions (memory or spill files), phase 2 sorts each
//! partition and verifies every run of equal keys with exact integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::Scenario;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("spill storage: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    All,
    Positive,
    Negative,
    Zero,
}

impl Sign {
    fn admits(self, o: Ordering) -> bool {
        match self {
            Sign::All => true,
            Sign::Positive => o == Ordering::Greater,
            Sign::Negative => o == Ordering::Less,
            Sign::Zero => o == Ordering::Equal,
        }
    }

    pub fn of(s: Scenario) -> Sign {
        match s {
            Scenario::Positive => Sign::Positive,
            Scenario::Negative => Sign::Negative,
            Scenario::Zero => Sign::Zero,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::All => "all",
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Zero => "zero",
        })
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Sign::All),
            "positive" | "c_positive" | "pos" => Ok(Sign::Positive),
            "negative" | "c_negative" | "neg" => Ok(Sign::Negative),
            "zero" | "c_zero" => Ok(Sign::Zero),
            _ => Err(format!("unknown sign `{s}`")),
        }
    }
}

/// Inclusive bounds on n, x, y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub n_max: u64,
    pub x_max: u64,
    pub y_max: u64,
    pub sign: Sign,
    pub min_reps: usize,
}

/// Indices beyond this make T_n and the packed indices unwieldy.
const MAX_SIDE: u64 = 1 << 20;

impl SearchBox {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.min_reps == 0 {
            return Err(SearchError::InvalidBox("min_reps must be at least 1".into()));
        }
        if self.n_max >= MAX_SIDE || self.x_max >= MAX_SIDE || self.y_max >= MAX_SIDE {
            return Err(SearchError::InvalidBox(format!("sides must be below {MAX_SIDE}")));
        }
        Ok(())
    }

    /// n = 0 and 2..=n_max (n = 1 duplicates n = 2).
    pub fn ns(&self) -> Vec<u64> {
        std::iter::once(0).chain(2..=self.n_max).collect()
    }

    /// Number of (n, x, y) before sign filtering.
    pub fn combinations(&self) -> u128 {
        self.ns().len() as u128 * (self.x_max as u128 + 1) * (self.y_max as u128 + 1)
    }

    /// The box the reductions leave for each scenario.
    pub fn reduced(s: Scenario) -> SearchBox {
        match s {
            Scenario::Positive => SearchBox { n_max: 962, x_max: 833, y_max: 526, sign: Sign::Positive, min_reps: 4 },
            Scenario::Negative => SearchBox { n_max: 913, x_max: 792, y_max: 499, sign: Sign::Negative, min_reps: 5 },
            Scenario::Zero => SearchBox { n_max: 9, x_max: 3, y_max: 4, sign: Sign::Zero, min_reps: 1 },
        }
    }

    /// A box that runs in minutes on a laptop.
    pub fn desk(s: Scenario) -> SearchBox {
        SearchBox { n_max: 350, x_max: 350, y_max: 225, ..SearchBox::reduced(s) }
    }

    fn contains(&self, other: &SearchBox) -> bool {
        self.n_max >= other.n_max && self.x_max >= other.x_max && self.y_max >= other.y_max
    }

    fn fingerprint(&self, parts: usize) -> String {
        format!("{}-{}-{}-{}-{}-p{}", self.n_max, self.x_max, self.y_max, self.sign, self.min_reps, parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rep {
    pub n: u64,
    pub x: u64,
    pub y: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepRecord {
    #[serde(with = "big_str")]
    pub c: BigInt,
    pub reps: Vec<Rep>,
}

mod big_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn pow23(x: u64, y: u64) -> BigInt {
    num_traits::pow(BigInt::from(2), x as usize) * num_traits::pow(BigInt::from(3), y as usize)
}

const KEY_MOD: u64 = (1 << 61) - 1;

/// Precomputed T_n, their logs and residues, and residues of 2^x 3^y.
struct Tables {
    bx: SearchBox,
    t: Vec<BigInt>,
    ln_t: Vec<f64>,
    t_key: Vec<u64>,
    pow2_key: Vec<u64>,
    pow3_key: Vec<u64>,
}

fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_f64().expect("small").ln();
    }
    let top = (v >> (bits - 64)).to_f64().expect("64 bits");
    top.ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

fn mulmod(a: u64, b: u64) -> u64 {
    // Mersenne reduction: 2^61 = 1 mod KEY_MOD
    let t = a as u128 * b as u128;
    let s = (t as u64 & KEY_MOD) + (t >> 61) as u64;
    let s = (s & KEY_MOD) + (s >> 61);
    if s >= KEY_MOD {
        s - KEY_MOD
    } else {
        s
    }
}

impl Tables {
    fn new(bx: SearchBox) -> Tables {
        let mut t = Vec::with_capacity(bx.n_max as usize + 1);
        let (mut a, mut b, mut c) = (BigInt::zero(), BigInt::from(1), BigInt::from(1));
        for _ in 0..=bx.n_max {
            t.push(a.clone());
            let next = &a + &b + &c;
            (a, b, c) = (b, c, next);
        }
        let ln_t = t.iter().map(|v| if v.is_zero() { f64::NEG_INFINITY } else { ln_big(v) }).collect();
        let m = BigInt::from(KEY_MOD);
        let t_key = t.iter().map(|v| v.mod_floor(&m).to_u64().expect("reduced")).collect();
        let powers = |base: u64, len: u64| {
            let mut out = vec![1u64];
            for _ in 0..len {
                out.push(mulmod(*out.last().unwrap(), base));
            }
            out
        };
        Tables { bx, t, ln_t, t_key, pow2_key: powers(2, bx.x_max), pow3_key: powers(3, bx.y_max) }
    }

    /// Sign of T_n - 2^x 3^y; floats decide unless within 1e-9 of a tie.
    fn compare(&self, n: u64, x: u64, y: u64) -> Ordering {
        if n == 0 {
            return Ordering::Less;
        }
        let d = self.ln_t[n as usize] - (x as f64 * std::f64::consts::LN_2 + y as f64 * 3f64.ln());
        if d > 1e-9 {
            Ordering::Greater
        } else if d < -1e-9 {
            Ordering::Less
        } else {
            self.t[n as usize].cmp(&pow23(x, y))
        }
    }

    /// Sign restriction plus the pruning rules: c >= 0 forces x, y < n,
    /// c < 0 forces (n - 2) log alpha < 2 max(x log 2, y log 3).
    fn admits(&self, n: u64, x: u64, y: u64) -> bool {
        let sign = self.bx.sign;
        if matches!(sign, Sign::Positive | Sign::Zero) && (x >= n || y >= n) {
            return false;
        }
        if sign == Sign::Negative && n >= 2 {
            const LOG_ALPHA: f64 = 0.609_377_863_436_012_7;
            let m = (x as f64 * std::f64::consts::LN_2).max(y as f64 * 3f64.ln());
            if (n - 2) as f64 * LOG_ALPHA >= 2.0 * m + 1e-9 {
                return false;
            }
        }
        sign.admits(self.compare(n, x, y))
    }

    fn key(&self, n: u64, x: u64, y: u64) -> u64 {
        let p = mulmod(self.pow2_key[x as usize], self.pow3_key[y as usize]);
        (self.t_key[n as usize] + KEY_MOD - p) % KEY_MOD
    }

    fn c(&self, r: Rep) -> BigInt {
        &self.t[r.n as usize] - pow23(r.x, r.y)
    }

    fn pack(&self, n: u64, x: u64, y: u64) -> u64 {
        (n * (self.bx.x_max + 1) + x) * (self.bx.y_max + 1) + y
    }

    fn unpack(&self, i: u64) -> Rep {
        let y = i % (self.bx.y_max + 1);
        let r = i / (self.bx.y_max + 1);
        Rep { n: r / (self.bx.x_max + 1), x: r % (self.bx.x_max + 1), y }
    }

    /// Admitted (x, y) for one n, in order.
    fn row(&self, n: u64) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..=self.bx.x_max).flat_map(move |x| (0..=self.bx.y_max).map(move |y| (x, y))).filter(move |&(x, y)| self.admits(n, x, y))
    }
}

/// Every admitted (c, n, x, y), exact, in (n, x, y) order.
pub fn enumerate(bx: &SearchBox) -> impl Iterator<Item = (BigInt, u64, u64, u64)> {
    let tables = Tables::new(*bx);
    bx.ns().into_iter().flat_map(move |n| {
        let rows: Vec<(u64, u64)> = tables.row(n).collect();
        let t = tables.t[n as usize].clone();
        rows.into_iter().map(move |(x, y)| (&t - pow23(x, y), n, x, y))
    })
}

#[derive(Clone, Debug, Default)]
pub struct CountOptions {
    pub exec: Exec,
    /// Force the spill path (and keep checkpoints here).
    pub spill_dir: Option<PathBuf>,
    /// Admitted combinations above which the spill path is used.
    pub memory_limit: Option<u64>,
}

/// Admitted combinations kept in memory by default.
pub const MEMORY_LIMIT: u64 = 10_000_000;
/// Entries per spill partition.
const PART_SIZE: u64 = 2_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct CountStats {
    pub combinations: u128,
    pub admitted: u64,
    pub partitions: usize,
    pub spilled: bool,
    pub resumed_partitions: usize,
    pub seconds: f64,
}

/// Records with at least `min_reps` representations, sorted by c.
pub fn count_representations(bx: &SearchBox, opts: &CountOptions) -> Result<(Vec<RepRecord>, CountStats), SearchError> {
    bx.validate()?;
    let start = Instant::now();
    let tables = Tables::new(*bx);
    let ns = bx.ns();
    let counts = opts.exec.map(&ns, |&n| tables.row(n).count() as u64);
    let admitted: u64 = counts.iter().sum();
    let limit = opts.memory_limit.unwrap_or(MEMORY_LIMIT);
    let spill = opts.spill_dir.is_some() || admitted > limit;
    let mut stats = CountStats {
        combinations: bx.combinations(),
        admitted,
        partitions: 1,
        spilled: spill,
        resumed_partitions: 0,
        seconds: 0.0,
    };
    let records = if !spill {
        let entries: Vec<Vec<(u64, u64)>> = opts.exec.map(&ns, |&n| tables.row(n).map(|(x, y)| (tables.key(n, x, y), tables.pack(n, x, y))).collect());
        group(&tables, entries.concat())
    } else {
        let parts = admitted.div_ceil(PART_SIZE).max(1) as usize;
        stats.partitions = parts;
        let tmp;
        let dir = match &opts.spill_dir {
            Some(d) => d.clone(),
            None => {
                tmp = tempfile::tempdir()?;
                tmp.path().to_path_buf()
            }
        };
        let (recs, resumed) = spill_run(&tables, &ns, parts, &dir, opts.exec)?;
        stats.resumed_partitions = resumed;
        recs
    };
    stats.seconds = start.elapsed().as_secs_f64();
    Ok((records, stats))
}

/// Sorts by key and verifies each run of equal keys exactly.
fn group(tables: &Tables, mut entries: Vec<(u64, u64)>) -> Vec<RepRecord> {
    let min = tables.bx.min_reps;
    entries.sort_unstable();
    let mut out = vec![];
    for run in entries.chunk_by(|a, b| a.0 == b.0) {
        if run.len() < min {
            continue;
        }
        let mut by_c: BTreeMap<BigInt, Vec<Rep>> = BTreeMap::new();
        for &(_, i) in run {
            let r = tables.unpack(i);
            by_c.entry(tables.c(r)).or_default().push(r);
        }
        for (c, mut reps) in by_c {
            if reps.len() >= min {
                reps.sort();
                reps.dedup();
                out.push(RepRecord { c, reps });
            }
        }
    }
    out.sort_by(|a, b| a.c.cmp(&b.c));
    out
}

fn write_atomic(path: &Path, data: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, data)?;
    fs::rename(tmp, path)
}

/// Phase 1 writes `spill-<p>.bin`; phase 2 turns each into `part-<p>.jsonl`.
/// Markers carry the box fingerprint so a rerun resumes only a matching run.
fn spill_run(tables: &Tables, ns: &[u64], parts: usize, dir: &Path, exec: Exec) -> Result<(Vec<RepRecord>, usize), SearchError> {
    fs::create_dir_all(dir)?;
    let fp = tables.bx.fingerprint(parts);
    let phase1 = dir.join("phase1.done");
    let done_ok = |p: &Path| fs::read_to_string(p).map(|s| s.trim() == fp).unwrap_or(false);
    if !done_ok(&phase1) {
        let writers: Vec<Mutex<BufWriter<File>>> = (0..parts)
            .map(|p| File::create(dir.join(format!("spill-{p}.bin"))).map(|f| Mutex::new(BufWriter::new(f))))
            .collect::<Result<_, _>>()?;
        for p in 0..parts {
            let _ = fs::remove_file(dir.join(format!("part-{p}.done")));
        }
        let flush = |p: usize, buf: &mut Vec<u8>| -> std::io::Result<()> {
            writers[p].lock().expect("writer lock").write_all(buf)?;
            buf.clear();
            Ok(())
        };
        exec.try_map(ns, |&n| -> std::io::Result<()> {
            let mut bufs: Vec<Vec<u8>> = vec![vec![]; parts];
            for (x, y) in tables.row(n) {
                let k = tables.key(n, x, y);
                let p = (k % parts as u64) as usize;
                bufs[p].extend_from_slice(&k.to_le_bytes());
                bufs[p].extend_from_slice(&tables.pack(n, x, y).to_le_bytes());
                if bufs[p].len() >= 1 << 16 {
                    flush(p, &mut bufs[p])?;
                }
            }
            for (p, buf) in bufs.iter_mut().enumerate() {
                flush(p, buf)?;
            }
            Ok(())
        })?;
        for w in writers {
            w.into_inner().expect("writer lock").flush()?;
        }
        write_atomic(&phase1, fp.as_bytes())?;
    }
    let ids: Vec<usize> = (0..parts).collect();
    let results = exec.try_map(&ids, |&p| -> Result<(Vec<RepRecord>, bool), SearchError> {
        let marker = dir.join(format!("part-{p}.done"));
        let out = dir.join(format!("part-{p}.jsonl"));
        if done_ok(&marker) {
            let recs = BufReader::new(File::open(&out)?)
                .lines()
                .map(|l| serde_json::from_str(&l?).map_err(|e| SearchError::Checkpoint(e.to_string())))
                .collect::<Result<Vec<RepRecord>, _>>()?;
            return Ok((recs, true));
        }
        let mut raw = vec![];
        File::open(dir.join(format!("spill-{p}.bin")))?.read_to_end(&mut raw)?;
        let entries = raw
            .chunks_exact(16)
            .map(|c| (u64::from_le_bytes(c[..8].try_into().unwrap()), u64::from_le_bytes(c[8..].try_into().unwrap())))
            .collect();
        let recs = group(tables, entries);
        let mut text = String::new();
        for r in &recs {
            text.push_str(&serde_json::to_string(r).map_err(|e| SearchError::Checkpoint(e.to_string()))?);
            text.push('\n');
        }
        write_atomic(&out, text.as_bytes())?;
        write_atomic(&marker, fp.as_bytes())?;
        let _ = fs::remove_file(dir.join(format!("spill-{p}.bin")));
        Ok((recs, false))
    })?;
    let resumed = results.iter().filter(|r| r.1).count();
    let mut all: Vec<RepRecord> = results.into_iter().flat_map(|r| r.0).collect();
    all.sort_by(|a, b| a.c.cmp(&b.c));
    Ok((all, resumed))
}

/// n <= n_max with T_n = 2^x 3^y, as (n, x, y).
pub fn smoothness_scan(n_max: u64) -> Vec<Rep> {
    let mut out = vec![];
    let (mut a, mut b, mut c) = (BigInt::zero(), BigInt::from(1), BigInt::from(1));
    let three = BigInt::from(3);
    for n in 0..=n_max {
        if !a.is_zero() {
            let x = a.trailing_zeros().unwrap_or(0);
            let mut rest = &a >> x;
            let mut y = 0;
            loop {
                let (q, r) = rest.div_rem(&three);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                y += 1;
            }
            if rest == BigInt::from(1) {
                out.push(Rep { n, x, y });
            }
        }
        let next = &a + &b + &c;
        (a, b, c) = (b, c, next);
    }
    out
}

fn rec(c: i64, reps: &[(u64, u64, u64)]) -> RepRecord {
    RepRecord { c: BigInt::from(c), reps: reps.iter().map(|&(n, x, y)| Rep { n, x, y }).collect() }
}

/// The classification the search must reproduce.
pub fn expected_records(s: Scenario) -> Vec<RepRecord> {
    match s {
        Scenario::Zero => vec![rec(0, &[(2, 0, 0), (3, 1, 0), (4, 2, 0), (7, 3, 1), (9, 0, 4)])],
        Scenario::Positive => vec![rec(1, &[(3, 0, 0), (4, 0, 1), (5, 1, 1), (6, 2, 1)])],
        Scenario::Negative => vec![
            rec(-8, &[(0, 3, 0), (2, 0, 2), (4, 2, 1), (7, 5, 0), (12, 9, 0)]),
            rec(-2, &[(0, 1, 0), (2, 0, 1), (3, 2, 0), (4, 1, 1), (5, 0, 2)]),
        ],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioCheck {
    pub scenario: Scenario,
    pub search_box: SearchBox,
    pub found: Vec<RepRecord>,
    pub missing: Vec<RepRecord>,
    pub extra: Vec<RepRecord>,
    pub passed: bool,
    /// The box is smaller than the one the reductions leave.
    pub reduced_box: bool,
    pub warnings: Vec<String>,
    pub stats: CountStats,
}

pub fn verify_scenario(s: Scenario, bx: &SearchBox, opts: &CountOptions) -> Result<ScenarioCheck, SearchError> {
    let (found, stats) = count_representations(bx, opts)?;
    let mut warnings = vec![];
    let in_box = |r: &RepRecord| r.reps.iter().all(|p| p.n <= bx.n_max && p.x <= bx.x_max && p.y <= bx.y_max);
    let expected: Vec<RepRecord> = expected_records(s).into_iter().filter(in_box).collect();
    if expected.len() < expected_records(s).len() {
        warnings.push("box excludes some expected representations".into());
    }
    let before = expected.len();
    let expected: Vec<RepRecord> = expected.into_iter().filter(|r| r.reps.len() >= bx.min_reps).collect();
    if expected.len() < before {
        warnings.push(format!("min_reps {} excludes some expected records", bx.min_reps));
    }
    if stats.admitted == 0 {
        warnings.push("empty box: vacuous pass".into());
    }
    let missing: Vec<RepRecord> = expected.iter().filter(|e| !found.contains(e)).cloned().collect();
    let extra: Vec<RepRecord> = found.iter().filter(|f| !expected.contains(f)).cloned().collect();
    let reduced_box = !bx.contains(&SearchBox::reduced(s));
    if reduced_box {
        warnings.push("reduced box: covers a sub-box of the reduced search region".into());
    }
    Ok(ScenarioCheck {
        scenario: s,
        search_box: *bx,
        passed: missing.is_empty() && extra.is_empty(),
        found,
        missing,
        extra,
        reduced_box,
        warnings,
        stats,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub checks: Vec<ScenarioCheck>,
    pub passed: bool,
}

pub fn verify_theorems(boxes: &[(Scenario, SearchBox)], opts: &CountOptions) -> Result<TheoremReport, SearchError> {
    let checks = boxes.iter().map(|(s, b)| verify_scenario(*s, b, opts)).collect::<Result<Vec<_>, _>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(TheoremReport { checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bx(n: u64, x: u64, y: u64, sign: Sign, min_reps: usize) -> SearchBox {
        SearchBox { n_max: n, x_max: x, y_max: y, sign, min_reps }
    }

    #[test]
    fn zero_solutions_in_small_box() {
        let got: Vec<(u64, u64, u64)> = enumerate(&bx(9, 3, 4, Sign::Zero, 1)).map(|(c, n, x, y)| {
            assert!(c.is_zero());
            (n, x, y)
        }).collect();
        assert_eq!(got, vec![(2, 0, 0), (3, 1, 0), (4, 2, 0), (7, 3, 1), (9, 0, 4)]);
    }

    #[test]
    fn unrestricted_count() {
        let b = bx(10, 10, 10, Sign::All, 1);
        assert_eq!(enumerate(&b).count(), 10 * 11 * 11);
        assert_eq!(b.combinations(), 1210);
        assert!(enumerate(&b).all(|(_, n, _, _)| n != 1));
    }

    #[test]
    fn only_n_zero() {
        let b = bx(0, 2, 2, Sign::All, 1);
        assert!(enumerate(&b).all(|(_, n, _, _)| n == 0));
        assert_eq!(enumerate(&b).count(), 9);
    }

    #[test]
    fn smoothness() {
        let ns: Vec<u64> = smoothness_scan(200).iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![1, 2, 3, 4, 7, 9]);
        assert!(smoothness_scan(0).is_empty());
        assert!(!smoothness_scan(12).iter().any(|r| r.n == 12));
    }

    #[test]
    fn theorem_records_hold_exactly() {
        for s in Scenario::ALL {
            for r in expected_records(s) {
                for p in &r.reps {
                    assert_eq!(crate::trib::trib(p.n) - pow23(p.x, p.y), r.c);
                }
            }
        }
    }

    #[test]
    fn small_boxes_match_naive_grouping() {
        for (sign, min) in [(Sign::Positive, 4), (Sign::Negative, 5), (Sign::Zero, 1), (Sign::All, 3)] {
            let b = bx(40, 40, 25, sign, min);
            let mut naive: BTreeMap<BigInt, Vec<Rep>> = BTreeMap::new();
            for n in b.ns() {
                for x in 0..=b.x_max {
                    for y in 0..=b.y_max {
                        let c = crate::trib::trib(n) - pow23(x, y);
                        let ok = match sign {
                            Sign::All => true,
                            Sign::Positive => c > BigInt::zero(),
                            Sign::Negative => c < BigInt::zero(),
                            Sign::Zero => c.is_zero(),
                        };
                        if ok {
                            naive.entry(c).or_default().push(Rep { n, x, y });
                        }
                    }
                }
            }
            let want: Vec<RepRecord> = naive.into_iter().filter(|(_, r)| r.len() >= min).map(|(c, reps)| RepRecord { c, reps }).collect();
            let (got, _) = count_representations(&b, &CountOptions::default()).unwrap();
            assert_eq!(got, want, "{sign}");
        }
    }

    #[test]
    fn spill_path_agrees_and_resumes() {
        let b = bx(60, 60, 40, Sign::Negative, 5);
        let (mem, _) = count_representations(&b, &CountOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let opts = CountOptions { spill_dir: Some(dir.path().to_path_buf()), memory_limit: Some(0), ..Default::default() };
        let (a, s1) = count_representations(&b, &opts).unwrap();
        assert!(s1.spilled);
        assert_eq!(a, mem);
        let (again, s2) = count_representations(&b, &opts).unwrap();
        assert_eq!(again, mem);
        assert_eq!(s2.resumed_partitions, s2.partitions);
    }

    #[test]
    fn invalid_box() {
        assert!(count_representations(&bx(5, 5, 5, Sign::All, 0), &CountOptions::default()).is_err());
    }
}
