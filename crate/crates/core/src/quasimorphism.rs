//! Counting quasimorphisms, their homogenization on cyclic words, and
//! lower-bound certificates for scl via Bavard duality.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatgraph::Check;
use crate::group::{Alphabet, CyclicWord, Word};
use crate::sampling::{block_length, random_reduced_word_with, rng, scale};

/// Upper bound on the defect of any homogenized small counting quasimorphism.
pub const HOMOGENIZED_DEFECT: u32 = 6;

/// Largest number of letters the periodic packing DP will scan.
const DENSITY_SCAN_CAP: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountingSet {
    words: Vec<Word>,
    by_len: BTreeMap<usize, HashSet<Word>>,
}

impl CountingSet {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<Self> {
        let unique: BTreeSet<Word> = words.into_iter().collect();
        if unique.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidSet);
        }
        let mut by_len: BTreeMap<usize, HashSet<Word>> = BTreeMap::new();
        for w in &unique {
            by_len.entry(w.len()).or_default().insert(w.clone());
        }
        Ok(CountingSet { words: unique.into_iter().collect(), by_len })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.by_len.keys().next_back().copied().unwrap_or(0)
    }

    pub fn inverse(&self) -> CountingSet {
        CountingSet::new(self.words.iter().map(|w| w.inverse())).expect("inverses are nonempty")
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.by_len.get(&w.len()).is_some_and(|s| s.contains(w))
    }

    fn rank_hint(&self) -> usize {
        self.words.iter().filter_map(|w| w.max_generator()).max().map_or(2, |g| (g + 1).max(2))
    }
}

/// Maximal number of disjoint copies of elements of `s` in `w`.
pub fn count_disjoint(s: &CountingSet, w: &Word) -> u64 {
    let n = w.len();
    let mut f = vec![0u64; n + 1];
    for t in 1..=n {
        let mut best = f[t - 1];
        for (&len, set) in &s.by_len {
            if len > t {
                break;
            }
            if set.contains(&Word::from_letters_unchecked(&w.letters()[t - len..t])) {
                best = best.max(f[t - len] + 1);
            }
        }
        f[t] = best;
    }
    f[n]
}

/// `(c_S(w), h_S(w))` where `h_S = c_S − c_{S⁻¹}`.
pub fn small_count(s: &CountingSet, w: &Word) -> (u64, i64) {
    let c = count_disjoint(s, w);
    let ci = count_disjoint(&s.inverse(), w);
    (c, c as i64 - ci as i64)
}

/// Asymptotic number of disjoint copies of `s` per period in `w^∞`.
pub fn packing_density(s: &CountingSet, w: &CyclicWord) -> Result<BigRational> {
    let p = w.len();
    if p == 0 || s.is_empty() {
        return Ok(BigRational::zero());
    }
    let word = w.word();
    // lengths of members of S ending at each position of the period
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); p];
    for (&len, set) in &s.by_len {
        for (i, slot) in ends.iter_mut().enumerate() {
            let start = (i + 1 + p * len - len) % p;
            if set.contains(&word.cyclic_subword(start, len)) {
                slot.push(len);
            }
        }
    }
    let window = s.max_len();
    let mut f: Vec<i64> = vec![0];
    let mut seen: HashMap<Vec<i64>, (usize, i64)> = HashMap::new();
    let mut n = 0usize;
    loop {
        for i in 0..p {
            let t = f.len();
            let mut best = f[t - 1];
            for &len in &ends[i] {
                if len <= t {
                    best = best.max(f[t - len] + 1);
                }
            }
            f.push(best);
        }
        n += 1;
        let t = f.len() - 1;
        if t >= window {
            let state: Vec<i64> = (1..=window).map(|k| f[t] - f[t - k]).collect();
            if let Some(&(n0, f0)) = seen.get(&state) {
                return Ok(BigRational::new(BigInt::from(f[t] - f0), BigInt::from((n - n0) as i64)));
            }
            seen.insert(state, (n, f[t]));
        }
        if f.len() > DENSITY_SCAN_CAP {
            return Err(Error::Capacity("packing density did not become periodic".into()));
        }
    }
}

/// Homogenization `h̄_S(w) = lim h_S(wⁿ)/n`, as an exact rational.
pub fn homogenized_qm(s: &CountingSet, w: &CyclicWord) -> Result<BigRational> {
    Ok(packing_density(s, w)? - packing_density(&s.inverse(), w)?)
}

/// Largest `|h_S(gh) − h_S(g) − h_S(h)|` over random pairs with
/// `|g|, |h| ≤ max_len`. Half of the pairs are built so that `g` and `h`
/// cancel partially.
pub fn defect_probe(s: &CountingSet, trials: u64, max_len: usize, seed: u64) -> u64 {
    let alphabet = Alphabet::new(s.rank_hint()).expect("rank between 2 and 26");
    let inv = s.inverse();
    let h = |w: &Word| count_disjoint(s, w) as i64 - count_disjoint(&inv, w) as i64;
    let mut r = rng(seed);
    let mut worst = 0u64;
    for _ in 0..trials {
        let lg = r.random_range(0..=max_len);
        let g = random_reduced_word_with(&mut r, alphabet, lg);
        let hw = if r.random_bool(0.5) && !g.is_empty() {
            let cut = r.random_range(1..=g.len());
            let tail = Word::from_letters_unchecked(&g.letters()[g.len() - cut..]).inverse();
            let extra_len = r.random_range(0..=max_len.saturating_sub(cut));
            let extra = random_reduced_word_with(&mut r, alphabet, extra_len);
            tail.mul(&extra)
        } else {
            let lh = r.random_range(0..=max_len);
            random_reduced_word_with(&mut r, alphabet, lh)
        };
        let d = (h(&g.mul(&hw)) - h(&g) - h(&hw)).unsigned_abs();
        worst = worst.max(d);
    }
    worst
}

/// A self-contained lower bound `scl(v) ≥ h̄_{S′}(v) / 12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Canonical rotation of the cyclic word.
    pub word: String,
    pub rank: usize,
    pub epsilon: f64,
    /// `log n / log(2k−1)`.
    pub m: f64,
    /// `1 + ε`.
    pub multiplier: f64,
    pub block_length: usize,
    pub offset: usize,
    /// The tiling blocks in order.
    pub blocks: Vec<String>,
    /// Blocks whose inverse is not a subword of the cyclic word, sorted.
    pub s_prime: Vec<String>,
    /// `h̄_{S′}(v)` as `p/q`.
    pub value: String,
    pub defect_bound: u32,
    /// `value / (2 · defect_bound)` as `p/q`.
    pub lower_bound: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Syntax { pos: e.column(), msg: e.to_string() })
    }

    pub fn lower_bound_value(&self) -> Result<BigRational> {
        parse_rational(&self.lower_bound)
    }

    pub fn value_rational(&self) -> Result<BigRational> {
        parse_rational(&self.value)
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Syntax { pos: 0, msg: format!("not a rational: {text:?}") };
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn certificate_word(v: &Word, rank: usize) -> Result<CyclicWord> {
    if !v.is_cyclically_reduced() {
        return Err(Error::Degenerate("word is not cyclically reduced".into()));
    }
    if !v.in_commutator_subgroup(rank) {
        let ab: Vec<String> = v.abelianization(rank).iter().map(|x| x.to_string()).collect();
        return Err(Error::NotABoundary(format!("({})", ab.join(", "))));
    }
    if v.len() < 4 {
        return Err(Error::Degenerate(format!("word of length {} is too short", v.len())));
    }
    CyclicWord::new(v)
}

fn cyclic_subwords(v: &Word, len: usize) -> HashSet<Word> {
    (0..v.len()).map(|i| v.cyclic_subword(i, len)).collect()
}

/// Certificate with blocks tiling the canonical rotation from position 0.
pub fn rigidity_certificate(v: &Word, rank: usize, epsilon: f64) -> Result<Certificate> {
    rigidity_certificate_at(v, rank, epsilon, 0)
}

pub fn rigidity_certificate_at(v: &Word, rank: usize, epsilon: f64, offset: usize) -> Result<Certificate> {
    Alphabet::new(rank)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Range(format!("epsilon must be positive, got {epsilon}")));
    }
    let cw = certificate_word(v, rank)?;
    let w = cw.word();
    let n = w.len();
    let m = scale(n, rank);
    let multiplier = 1.0 + epsilon;
    let b = block_length(multiplier, m).max(1);
    if b > n {
        return Err(Error::Degenerate(format!("block length {b} exceeds word length {n}")));
    }
    let count = n / b;
    let blocks: Vec<Word> = (0..count).map(|i| w.cyclic_subword((offset + i * b) % n, b)).collect();
    let present = cyclic_subwords(w, b);
    let s_prime: BTreeSet<Word> = blocks.iter().filter(|s| !present.contains(&s.inverse())).cloned().collect();
    let set = CountingSet::new(s_prime.iter().cloned())?;
    let value = homogenized_qm(&set, &cw)?;
    let lower = &value / BigRational::from_integer(BigInt::from(2 * HOMOGENIZED_DEFECT));
    Ok(Certificate {
        word: w.to_string(),
        rank,
        epsilon,
        m,
        multiplier,
        block_length: b,
        offset,
        blocks: blocks.iter().map(|s| s.to_string()).collect(),
        s_prime: s_prime.iter().map(|s| s.to_string()).collect(),
        value: value.to_string(),
        defect_bound: HOMOGENIZED_DEFECT,
        lower_bound: lower.to_string(),
    })
}

/// Tries every offset below the block length and keeps the largest value
/// (smallest offset on ties).
pub fn best_offset_certificate(v: &Word, rank: usize, epsilon: f64) -> Result<Certificate> {
    let first = rigidity_certificate_at(v, rank, epsilon, 0)?;
    let mut best = first.clone();
    let mut best_value = first.value_rational()?;
    for offset in 1..first.block_length {
        let c = rigidity_certificate_at(v, rank, epsilon, offset)?;
        let val = c.value_rational()?;
        if val > best_value {
            best_value = val;
            best = c;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub checks: Vec<Check>,
    /// The verified bound, present when every check passed.
    pub lower_bound: Option<String>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-derives everything a certificate claims from its own fields.
pub fn verify_certificate(cert: &Certificate) -> CertificateCheck {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check { name: name.to_string(), passed, detail });
    };
    let parsed = Alphabet::new(cert.rank).and_then(|a| Ok((a, a.reduced_word(&cert.word)?)));
    let (alphabet, v) = match parsed {
        Ok(x) => x,
        Err(e) => {
            push("word", false, e.to_string());
            return CertificateCheck { checks, lower_bound: None };
        }
    };
    let cw = match certificate_word(&v, cert.rank) {
        Ok(cw) => cw,
        Err(e) => {
            push("word", false, e.to_string());
            return CertificateCheck { checks, lower_bound: None };
        }
    };
    push("word", true, format!("length {}", v.len()));
    let n = v.len();
    let b = cert.block_length;
    let blocks_ok = b > 0
        && b <= n
        && cert.blocks.len() == n / b
        && cert.blocks.iter().enumerate().all(|(i, s)| {
            alphabet
                .reduced_word(s)
                .map(|s| s.len() == b && s == v.cyclic_subword((cert.offset + i * b) % n, b))
                .unwrap_or(false)
        });
    push("blocks", blocks_ok, format!("{} blocks of length {b}", cert.blocks.len()));
    let block_set: HashSet<&String> = cert.blocks.iter().collect();
    let present = if b > 0 && b <= n { cyclic_subwords(&v, b) } else { HashSet::new() };
    let mut s_prime = Vec::new();
    let mut filter_ok = true;
    for s in &cert.s_prime {
        match alphabet.reduced_word(s) {
            Ok(w) if block_set.contains(s) && !present.contains(&w.inverse()) => s_prime.push(w),
            _ => filter_ok = false,
        }
    }
    push("filtered set", filter_ok, format!("{} words", cert.s_prime.len()));
    let value = CountingSet::new(s_prime).and_then(|set| homogenized_qm(&set, &cw));
    let claimed = cert.value_rational();
    let value_ok = matches!((&value, &claimed), (Ok(a), Ok(b)) if a == b);
    push(
        "value",
        value_ok,
        format!("recomputed {}, claimed {}", value.as_ref().map(|v| v.to_string()).unwrap_or_default(), cert.value),
    );
    let defect_ok = cert.defect_bound >= HOMOGENIZED_DEFECT;
    push("defect bound", defect_ok, format!("{}", cert.defect_bound));
    let bound = claimed
        .as_ref()
        .ok()
        .map(|v| v / BigRational::from_integer(BigInt::from(2 * cert.defect_bound)));
    let bound_ok = match (&bound, cert.lower_bound_value()) {
        (Some(a), Ok(b)) => *a == b,
        _ => false,
    };
    push("lower bound", bound_ok, format!("claimed {}", cert.lower_bound));
    let all = checks.iter().all(|c| c.passed);
    CertificateCheck { checks, lower_bound: all.then(|| cert.lower_bound.clone()) }
}

pub fn verify_certificate_json(text: &str) -> Result<CertificateCheck> {
    Ok(verify_certificate(&Certificate::from_json(text)?))
}

/// Approximate value of a certificate's lower bound.
pub fn lower_bound_f64(cert: &Certificate) -> f64 {
    cert.lower_bound_value().ok().and_then(|r| r.to_f64()).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Alphabet::new(2).unwrap().word(s).unwrap()
    }

    fn set(words: &[&str]) -> CountingSet {
        CountingSet::new(words.iter().map(|s| w(s))).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn cyc(s: &str) -> CyclicWord {
        CyclicWord::new(&w(s)).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(small_count(&set(&["ab"]), &w("abab")), (2, 2));
        assert_eq!(small_count(&set(&["aa"]), &w("aaa")).0, 1);
        assert_eq!(small_count(&set(&["ab"]), &w("BABA")).1, -2);
        assert_eq!(CountingSet::new(vec![Word::empty()]), Err(Error::InvalidSet));
    }

    #[test]
    fn homogenized_examples() {
        assert_eq!(homogenized_qm(&set(&["ab"]), &cyc("ab")).unwrap(), q(1, 1));
        assert_eq!(homogenized_qm(&set(&["ab"]), &cyc("abab")).unwrap(), q(2, 1));
        assert_eq!(homogenized_qm(&set(&["ab", "AB"]), &cyc("abAB")).unwrap(), q(2, 1));
        assert_eq!(homogenized_qm(&set(&["aa"]), &cyc("a")).unwrap(), q(1, 2));
    }

    #[test]
    fn defect_examples() {
        let s = set(&["ab"]);
        assert!(defect_probe(&s, 2000, 40, 1) <= 3);
        let h = |x: &Word| small_count(&s, x).1;
        assert_eq!(h(&w("ab")) - h(&w("a")) - h(&w("b")), 1);
        assert_eq!(h(&Word::empty()), 0);
    }

    #[test]
    fn abab_certificate() {
        let c = rigidity_certificate(&w("abAB"), 2, 0.25).unwrap();
        assert_eq!(c.block_length, 2);
        assert_eq!(c.blocks, vec!["ab", "AB"]);
        assert_eq!(c.s_prime, vec!["ab", "AB"]);
        assert_eq!(c.value, "2");
        assert_eq!(c.lower_bound, "1/6");
        assert!(verify_certificate(&c).passed());
        let mut bad = c.clone();
        bad.value = "3".into();
        bad.lower_bound = "1/4".into();
        assert!(!verify_certificate(&bad).passed());
        let mut bad = c;
        bad.s_prime.push("BA".into());
        assert!(!verify_certificate(&bad).passed());
    }

    #[test]
    fn certificate_errors() {
        assert!(matches!(rigidity_certificate(&w("ab"), 2, 0.25), Err(Error::NotABoundary(_))));
        assert!(matches!(rigidity_certificate(&w("aA"), 2, 0.25), Err(_)));
    }
}
