//! Experiment drivers with seeded manifests and CSV / SVG outputs.
//!
//! Every driver is a pure function of its config: samples run in parallel
//! and are merged back in config order, so rerunning a manifest reproduces
//! its CSV files byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{cyclic_reduce, Alphabet, Chain, Word};
use crate::lp::{scl, Mode, Number};
use crate::quasimorphism::rigidity_certificate;
use crate::sampling::{scale, subword_stats, RandomWordSpec};
use crate::tripods::{assemble_upper_bound, default_edge_length};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a CSV column changes.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub rank: usize,
    pub n: usize,
    pub seeds: Vec<u64>,
    pub ell_max: usize,
    pub conditioned: bool,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        PhaseConfig { rank: 2, n: 10_000, seeds: (0..10).collect(), ell_max: 11, conditioned: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityConfig {
    pub rank: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub step: usize,
    pub seeds: Vec<u64>,
    pub mode: Mode,
    pub certificate_epsilon: f64,
    pub tripod_epsilon: f64,
    pub rounding_budget: u64,
    /// Skip certificate and tripod bounds.
    pub scl_only: bool,
}

impl Default for RigidityConfig {
    fn default() -> Self {
        RigidityConfig {
            rank: 2,
            n_min: 40,
            n_max: 60,
            step: 10,
            seeds: (0..20).collect(),
            mode: Mode::Inexact,
            certificate_epsilon: 0.25,
            tripod_epsilon: 0.1,
            rounding_budget: 1 << 12,
            scl_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceConfig {
    pub rank: usize,
    pub words: Vec<String>,
    /// Coordinates run over `j/grid` for `j` in `-grid..=grid`.
    pub grid: u32,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ExperimentConfig {
    Phase(PhaseConfig),
    Rigidity(RigidityConfig),
    Slice(SliceConfig),
}

/// Parses a bare experiment config such as `{"command": "phase", ...}`.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    serde_json::from_str(text).map_err(|e| Error::Syntax { pos: e.column(), msg: e.to_string() })
}

impl ExperimentConfig {
    pub fn command(&self) -> &'static str {
        match self {
            ExperimentConfig::Phase(_) => "phase",
            ExperimentConfig::Rigidity(_) => "rigidity",
            ExperimentConfig::Slice(_) => "slice",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: ExperimentConfig,
    pub artifact_version: String,
    pub csv_schema: u32,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax { pos: e.column(), msg: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(io)?)
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, |v| v.to_string())
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// phase

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub ell: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub m: f64,
    pub rows: Vec<PhaseRow>,
}

/// `A_ℓ` of seeded random words for `ℓ = 1..=ell_max`, counted linearly.
pub fn phase(cfg: &PhaseConfig) -> Result<PhaseResult> {
    let alphabet = Alphabet::new(cfg.rank)?;
    if cfg.ell_max == 0 || cfg.ell_max > cfg.n {
        return Err(Error::Range(format!("ell_max {} outside 1..={}", cfg.ell_max, cfg.n)));
    }
    if cfg.seeds.is_empty() {
        return Err(Error::Range("no seeds".into()));
    }
    let per_seed: Vec<Vec<f64>> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let mut spec = RandomWordSpec::new(alphabet, cfg.n, seed);
            if cfg.conditioned {
                spec = spec.conditioned();
            }
            let v = spec.sample()?;
            (1..=cfg.ell_max)
                .map(|ell| Ok(subword_stats(&v, ell, false)?.inverse_asymmetry()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let rows = (0..cfg.ell_max)
        .map(|i| {
            let xs: Vec<f64> = per_seed.iter().map(|s| s[i]).collect();
            PhaseRow {
                ell: i + 1,
                mean: xs.iter().sum::<f64>() / xs.len() as f64,
                min: xs.iter().cloned().fold(f64::INFINITY, f64::min),
                max: xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    Ok(PhaseResult { m: scale(cfg.n, cfg.rank), rows })
}

impl PhaseResult {
    pub fn csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| vec![r.ell.to_string(), r.mean.to_string(), r.min.to_string(), r.max.to_string()])
            .collect();
        csv_bytes(&["ell", "mean", "min", "max"], &rows)
    }

    /// Mean curve as a polyline, plus a vertical marker at `m`.
    pub fn svg(&self) -> String {
        let w = self.rows.len().max(1) as f64 + 1.0;
        let pts: Vec<String> = self.rows.iter().map(|r| format!("{},{}", r.ell, 1.0 - r.mean)).collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} 1\" data-m=\"{m}\">\n\
             <polyline id=\"mean\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\" points=\"{pts}\"/>\n\
             <line id=\"m\" x1=\"{m}\" y1=\"0\" x2=\"{m}\" y2=\"1\" stroke=\"gray\" stroke-width=\"0.01\"/>\n\
             </svg>\n",
            m = self.m,
            pts = pts.join(" ")
        )
    }
}

// ---------------------------------------------------------------------------
// rigidity

/// `n·log(2k−1) / (6·log n)`.
pub fn theory_value(n: usize, rank: usize) -> f64 {
    n as f64 * ((2 * rank - 1) as f64).ln() / (6.0 * (n as f64).ln())
}

/// `n/12 · (log n / (2 log(2k−1)) + 1/(2k−2))⁻¹`.
pub fn heuristic_value(n: usize, rank: usize) -> f64 {
    let b = ((2 * rank - 1) as f64).ln();
    n as f64 / 12.0 / ((n as f64).ln() / (2.0 * b) + 1.0 / (2 * rank - 2) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub seed: u64,
    /// Cyclic core of the sampled word.
    pub word: String,
    pub mode: Mode,
    pub scl: Option<Number>,
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
    pub theory: f64,
    pub heuristic: f64,
    pub errors: Vec<String>,
}

impl ExperimentRow {
    /// `scl · 12 · (log n / (2 log(2k−1)) + 1/(2k−2)) / n`.
    pub fn normalized(&self) -> Option<f64> {
        self.scl.as_ref().map(|s| s.to_f64() / self.heuristic)
    }

    pub fn sandwich_holds(&self) -> bool {
        let (Some(s), Some(lo), Some(hi)) = (&self.scl, &self.lower, &self.upper) else {
            return true;
        };
        match s {
            Number::Exact(s) => lo <= s && s <= hi,
            Number::Float(s) => ratio_f64(lo) <= s + 1e-9 && *s <= ratio_f64(hi) + 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub samples: usize,
    pub solved: usize,
    /// Exact when every solve at this `n` was exact.
    pub mean_scl: Option<Number>,
    pub mean_normalized: Option<f64>,
    pub mean_lower: Option<BigRational>,
    pub mean_upper: Option<BigRational>,
    pub theory: f64,
    pub heuristic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityResult {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SummaryRow>,
}

fn rigidity_sample(cfg: &RigidityConfig, alphabet: Alphabet, n: usize, seed: u64) -> ExperimentRow {
    let mut row = ExperimentRow {
        n,
        seed,
        word: String::new(),
        mode: cfg.mode,
        scl: None,
        lower: None,
        upper: None,
        theory: theory_value(n, cfg.rank),
        heuristic: heuristic_value(n, cfg.rank),
        errors: Vec::new(),
    };
    let v = match RandomWordSpec::new(alphabet, n, seed).conditioned().sample() {
        Ok(v) => cyclic_reduce(&v).0.word().clone(),
        Err(e) => {
            row.errors.push(format!("sample: {e}"));
            return row;
        }
    };
    row.word = v.to_string();
    match scl(&Chain::single(cfg.rank, &v), cfg.mode) {
        Ok(r) => {
            row.mode = r.mode;
            row.scl = Some(r.value);
        }
        Err(e) => row.errors.push(format!("scl: {e}")),
    }
    if cfg.scl_only {
        return row;
    }
    match rigidity_certificate(&v, cfg.rank, cfg.certificate_epsilon).and_then(|c| c.lower_bound_value()) {
        Ok(lo) => row.lower = Some(lo),
        Err(e) => row.errors.push(format!("certificate: {e}")),
    }
    let l = default_edge_length(v.len().max(2), cfg.rank, cfg.tripod_epsilon).min(v.len() / 2).max(1);
    match assemble_upper_bound(&v, l, cfg.rounding_budget) {
        Ok(a) => row.upper = Some(a.upper_bound),
        Err(e) => row.errors.push(format!("tripod: {e}")),
    }
    row
}

fn mean_rational<'a>(xs: impl Iterator<Item = &'a BigRational>) -> Option<BigRational> {
    let (sum, count) = xs.fold((BigRational::zero(), 0u64), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / BigRational::from_integer(BigInt::from(count)))
}

fn summarize(n: usize, rank: usize, rows: &[&ExperimentRow]) -> SummaryRow {
    let solved: Vec<&Number> = rows.iter().filter_map(|r| r.scl.as_ref()).collect();
    let mean_scl = if solved.is_empty() {
        None
    } else if solved.iter().all(|s| s.exact().is_some()) {
        mean_rational(solved.iter().filter_map(|s| s.exact())).map(Number::Exact)
    } else {
        Some(Number::Float(solved.iter().map(|s| s.to_f64()).sum::<f64>() / solved.len() as f64))
    };
    let norms: Vec<f64> = rows.iter().filter_map(|r| r.normalized()).collect();
    SummaryRow {
        n,
        samples: rows.len(),
        solved: solved.len(),
        mean_scl,
        mean_normalized: (!norms.is_empty()).then(|| norms.iter().sum::<f64>() / norms.len() as f64),
        mean_lower: mean_rational(rows.iter().filter_map(|r| r.lower.as_ref())),
        mean_upper: mean_rational(rows.iter().filter_map(|r| r.upper.as_ref())),
        theory: theory_value(n, rank),
        heuristic: heuristic_value(n, rank),
    }
}

pub fn rigidity(cfg: &RigidityConfig) -> Result<RigidityResult> {
    let alphabet = Alphabet::new(cfg.rank)?;
    if cfg.mode == Mode::Auto {
        return Err(Error::Range("rigidity mode must be exact or inexact".into()));
    }
    if cfg.step == 0 || cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::Range(format!("bad length range {}..={} step {}", cfg.n_min, cfg.n_max, cfg.step)));
    }
    let ns: Vec<usize> = (cfg.n_min..=cfg.n_max).step_by(cfg.step).collect();
    if let Some(&n) = ns.iter().find(|&&n| n % 2 == 1) {
        return Err(Error::Parity(n));
    }
    let tasks: Vec<(usize, u64)> = ns.iter().flat_map(|&n| cfg.seeds.iter().map(move |&s| (n, s))).collect();
    let rows: Vec<ExperimentRow> =
        tasks.par_iter().map(|&(n, seed)| rigidity_sample(cfg, alphabet, n, seed)).collect();
    let summary = ns
        .iter()
        .map(|&n| {
            let at: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == n).collect();
            summarize(n, cfg.rank, &at)
        })
        .collect();
    Ok(RigidityResult { rows, summary })
}

impl RigidityResult {
    pub fn csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.seed.to_string(),
                    r.word.clone(),
                    r.mode.to_string(),
                    opt(&r.scl),
                    opt(&r.scl.as_ref().map(|s| s.to_f64())),
                    opt(&r.lower),
                    opt(&r.upper),
                    r.theory.to_string(),
                    r.heuristic.to_string(),
                    opt(&r.normalized()),
                    r.errors.join("; "),
                ]
            })
            .collect();
        csv_bytes(
            &[
                "n", "seed", "word", "mode", "scl", "scl_f64", "lower", "upper", "theory", "heuristic", "normalized",
                "errors",
            ],
            &rows,
        )
    }

    pub fn summary_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .summary
            .iter()
            .map(|s| {
                vec![
                    s.n.to_string(),
                    s.samples.to_string(),
                    s.solved.to_string(),
                    opt(&s.mean_scl),
                    opt(&s.mean_scl.as_ref().map(|x| x.to_f64())),
                    opt(&s.mean_normalized),
                    opt(&s.mean_lower),
                    opt(&s.mean_upper),
                    s.theory.to_string(),
                    s.heuristic.to_string(),
                ]
            })
            .collect();
        csv_bytes(
            &[
                "n", "samples", "solved", "mean_scl", "mean_scl_f64", "mean_normalized", "mean_lower", "mean_upper",
                "theory", "heuristic",
            ],
            &rows,
        )
    }
}

// ---------------------------------------------------------------------------
// slice

#[derive(Debug, Clone, PartialEq)]
pub struct SlicePoint {
    pub t: Vec<BigRational>,
    pub scl: Number,
}

impl SlicePoint {
    /// `t / scl`, or `None` when `scl = 0`.
    pub fn boundary(&self) -> Option<Vec<f64>> {
        let s = self.scl.to_f64();
        (s > 0.0).then(|| self.t.iter().map(|x| ratio_f64(x) / s).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceResult {
    pub dimension: usize,
    pub points: Vec<SlicePoint>,
    /// `|scl(v₁+v₂) − scl(v₁) − scl(v₂)|`.
    pub additivity_defect: Number,
    /// Largest `|scl(t) − scl(−t)|` over the grid.
    pub symmetry_defect: f64,
    /// Largest `scl((t+s)/2) − (scl(t)+scl(s))/2` over grid midpoints.
    pub convexity_defect: f64,
}

impl SliceResult {
    pub fn tolerance(&self) -> f64 {
        match self.additivity_defect {
            Number::Exact(_) => 0.0,
            Number::Float(_) => 1e-6,
        }
    }

    pub fn symmetric(&self) -> bool {
        self.symmetry_defect <= self.tolerance()
    }

    pub fn convex(&self) -> bool {
        self.convexity_defect <= self.tolerance()
    }

    pub fn scl_at(&self, t: &[BigRational]) -> Option<&Number> {
        self.points.iter().find(|p| p.t == t).map(|p| &p.scl)
    }
}

fn grid_vectors(d: usize, g: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (-g..=g).map(move |j| [v.clone(), vec![j]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|&j| j != 0));
    out
}

fn number_diff(a: &Number, b: &Number) -> Number {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => Number::Exact(x - y),
        _ => Number::Float(a.to_f64() - b.to_f64()),
    }
}

pub fn slice(cfg: &SliceConfig) -> Result<SliceResult> {
    let alphabet = Alphabet::new(cfg.rank)?;
    let d = cfg.words.len();
    if !(2..=3).contains(&d) {
        return Err(Error::Range(format!("slice needs 2 or 3 words, got {d}")));
    }
    if cfg.grid == 0 {
        return Err(Error::Range("grid must be positive".into()));
    }
    let words: Vec<Word> = cfg.words.iter().map(|w| alphabet.reduced_word(w)).collect::<Result<_>>()?;
    for w in &words {
        let c = Chain::single(cfg.rank, w);
        if !c.homologically_trivial() {
            return Err(Error::NotABoundary(format!("{w}")));
        }
    }
    let g = cfg.grid as i64;
    let denom = BigRational::from_integer(BigInt::from(g));
    let grid = grid_vectors(d, g);
    let chain_at = |t: &[BigRational]| {
        let terms = t.iter().zip(&words).filter(|(x, _)| !x.is_zero()).map(|(x, w)| (x.clone(), w.clone())).collect();
        Chain::new(cfg.rank, terms)
    };
    let points: Vec<SlicePoint> = grid
        .par_iter()
        .map(|j| {
            let t: Vec<BigRational> =
                j.iter().map(|&x| BigRational::from_integer(BigInt::from(x)) / &denom).collect();
            let value = scl(&chain_at(&t), cfg.mode)?.value;
            Ok(SlicePoint { t, scl: value })
        })
        .collect::<Result<_>>()?;
    let one = BigRational::from_integer(BigInt::from(1));
    let solo = |i: usize| -> Result<Number> {
        let mut t = vec![BigRational::zero(); d];
        t[i] = one.clone();
        Ok(scl(&chain_at(&t), cfg.mode)?.value)
    };
    let both = {
        let mut t = vec![BigRational::zero(); d];
        t[0] = one.clone();
        t[1] = one.clone();
        scl(&chain_at(&t), cfg.mode)?.value
    };
    let defect = number_diff(&number_diff(&both, &solo(0)?), &solo(1)?);
    let additivity_defect = match defect {
        Number::Exact(x) => Number::Exact(x.abs()),
        Number::Float(x) => Number::Float(x.abs()),
    };
    let index: std::collections::HashMap<&Vec<i64>, &Number> = grid.iter().zip(points.iter().map(|p| &p.scl)).collect();
    let mut symmetry_defect: f64 = 0.0;
    let mut convexity_defect: f64 = f64::NEG_INFINITY;
    for (j, s) in &index {
        let neg: Vec<i64> = j.iter().map(|x| -x).collect();
        symmetry_defect = symmetry_defect.max(exact_gap(s, index[&neg]).abs());
    }
    for a in &grid {
        for b in &grid {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if sum.iter().any(|x| x % 2 != 0) || sum.iter().all(|&x| x == 0) {
                continue;
            }
            let mid: Vec<i64> = sum.iter().map(|x| x / 2).collect();
            let gap = midpoint_gap(index[&mid], index[a], index[b]);
            convexity_defect = convexity_defect.max(gap);
        }
    }
    Ok(SliceResult {
        dimension: d,
        points,
        additivity_defect,
        symmetry_defect,
        convexity_defect: convexity_defect.max(0.0),
    })
}

fn exact_gap(a: &Number, b: &Number) -> f64 {
    match number_diff(a, b) {
        Number::Exact(x) => ratio_f64(&x),
        Number::Float(x) => x,
    }
}

/// `scl(mid) − (scl(a)+scl(b))/2`, exact when all three are.
fn midpoint_gap(mid: &Number, a: &Number, b: &Number) -> f64 {
    match (mid, a, b) {
        (Number::Exact(m), Number::Exact(x), Number::Exact(y)) => {
            let two = BigRational::from_integer(BigInt::from(2));
            let gap = m - (x + y) / two;
            if gap.is_positive() {
                ratio_f64(&gap).max(f64::MIN_POSITIVE)
            } else {
                ratio_f64(&gap)
            }
        }
        _ => mid.to_f64() - (a.to_f64() + b.to_f64()) / 2.0,
    }
}

impl SliceResult {
    pub fn csv(&self) -> Result<Vec<u8>> {
        let d = self.dimension;
        let mut header: Vec<String> = (1..=d).map(|i| format!("t{i}")).collect();
        header.extend(["scl".into(), "scl_f64".into()]);
        header.extend((1..=d).map(|i| format!("x{i}")));
        let rows: Vec<Vec<String>> = self
            .points
            .iter()
            .map(|p| {
                let mut r: Vec<String> = p.t.iter().map(|x| x.to_string()).collect();
                r.push(p.scl.to_string());
                r.push(p.scl.to_f64().to_string());
                match p.boundary() {
                    Some(b) => r.extend(b.iter().map(|x| x.to_string())),
                    None => r.extend(std::iter::repeat_n(String::new(), d)),
                }
                r
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        csv_bytes(&header, &rows)
    }

    /// Boundary points of the unit ball in the first two coordinates, by angle.
    pub fn svg(&self) -> String {
        let mut pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.t[2..].iter().all(|x| x.is_zero()))
            .filter_map(|p| p.boundary().map(|b| (b[0], b[1])))
            .collect();
        pts.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
        let r = pts.iter().map(|(x, y)| x.abs().max(y.abs())).fold(1e-9, f64::max) * 1.1;
        let pts: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
             <polygon id=\"ball\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" points=\"{}\"/>\n\
             </svg>\n",
            -r,
            -r,
            2.0 * r,
            2.0 * r,
            r / 100.0,
            pts.join(" ")
        )
    }
}

// ---------------------------------------------------------------------------
// running and replaying

fn outputs(config: &ExperimentConfig) -> Result<Vec<(String, Vec<u8>)>> {
    Ok(match config {
        ExperimentConfig::Phase(c) => {
            let r = phase(c)?;
            vec![("phase.csv".into(), r.csv()?), ("phase.svg".into(), r.svg().into_bytes())]
        }
        ExperimentConfig::Rigidity(c) => {
            let r = rigidity(c)?;
            vec![("rigidity.csv".into(), r.csv()?), ("rigidity_summary.csv".into(), r.summary_csv()?)]
        }
        ExperimentConfig::Slice(c) => {
            let r = slice(c)?;
            let mut out = vec![("slice.csv".into(), r.csv()?)];
            if r.dimension == 2 {
                out.push(("slice.svg".into(), r.svg().into_bytes()));
            }
            out
        }
    })
}

/// Runs an experiment, writing its outputs and `manifest.json` into `out`.
pub fn run(config: &ExperimentConfig, out: &Path) -> Result<RunManifest> {
    let started_unix = now();
    let files = outputs(config)?;
    fs::create_dir_all(out).map_err(io)?;
    let mut digests = Vec::new();
    for (name, bytes) in &files {
        fs::write(out.join(name), bytes).map_err(io)?;
        digests.push(OutputDigest { file: name.clone(), sha256: sha256_hex(bytes) });
    }
    let manifest = RunManifest {
        command: config.command().into(),
        config: config.clone(),
        artifact_version: ARTIFACT_VERSION.into(),
        csv_schema: CSV_SCHEMA,
        started_unix,
        finished_unix: now(),
        outputs: digests,
    };
    fs::write(out.join("manifest.json"), manifest.to_json()).map_err(io)?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub manifest: RunManifest,
    pub out: PathBuf,
    /// `(file, recorded digest, replayed digest)`.
    pub files: Vec<(String, String, String)>,
}

impl ReplayReport {
    pub fn identical(&self) -> bool {
        self.files.iter().all(|(_, a, b)| a == b)
    }
}

/// Reruns the config recorded in a manifest and compares output digests.
pub fn replay(manifest: &RunManifest, out: &Path) -> Result<ReplayReport> {
    let rerun = run(&manifest.config, out)?;
    let files = manifest
        .outputs
        .iter()
        .map(|o| {
            let got = rerun.outputs.iter().find(|r| r.file == o.file).map_or_else(String::new, |r| r.sha256.clone());
            (o.file.clone(), o.sha256.clone(), got)
        })
        .collect();
    Ok(ReplayReport { manifest: manifest.clone(), out: out.to_path_buf(), files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_formulas() {
        assert!((theory_value(240, 2) - 8.018).abs() < 1e-3);
        assert!((heuristic_value(240, 2) - 6.679).abs() < 1e-3);
    }

    #[test]
    fn grid_has_no_origin() {
        let g = grid_vectors(2, 1);
        assert_eq!(g.len(), 8);
        assert_eq!(grid_vectors(3, 2).len(), 124);
    }

    #[test]
    fn config_round_trip() {
        let c = ExperimentConfig::Rigidity(RigidityConfig::default());
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"command\":\"rigidity\""));
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), c);
    }
}
