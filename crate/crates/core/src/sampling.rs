//! Random reduced words and subword statistics.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with `seed_from_u64`, so a
//! `(spec, seed)` pair determines its output on every platform.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Alphabet, Letter, Word};

pub type WordRng = ChaCha8Rng;

pub fn rng(seed: u64) -> WordRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default cap on rejection-sampling draws.
pub const DEFAULT_RETRY_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomWordSpec {
    pub alphabet: Alphabet,
    pub n: usize,
    pub seed: u64,
    pub conditioned: bool,
}

impl RandomWordSpec {
    pub fn new(alphabet: Alphabet, n: usize, seed: u64) -> Self {
        RandomWordSpec { alphabet, n, seed, conditioned: false }
    }

    pub fn conditioned(mut self) -> Self {
        self.conditioned = true;
        self
    }

    /// Draws from the spec; conditioned specs use [`DEFAULT_RETRY_CAP`].
    pub fn sample(&self) -> Result<Word> {
        if self.conditioned {
            random_commutator_word(self, DEFAULT_RETRY_CAP)
        } else {
            Ok(random_reduced_word(self))
        }
    }
}

/// `m(n, k) = log n / log(2k - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleParameters {
    pub m: f64,
    pub multiplier: f64,
    pub epsilon: f64,
}

impl ScaleParameters {
    pub fn new(n: usize, rank: usize, multiplier: f64, epsilon: f64) -> Self {
        ScaleParameters { m: scale(n, rank), multiplier, epsilon }
    }

    /// `ceil(L * m)`.
    pub fn block_length(&self) -> usize {
        block_length(self.multiplier, self.m)
    }
}

pub fn scale(n: usize, rank: usize) -> f64 {
    (n as f64).ln() / ((2 * rank - 1) as f64).ln()
}

pub fn block_length(multiplier: f64, m: f64) -> usize {
    (multiplier * m).ceil() as usize
}

/// Draws a uniform element of `F_n` into `buf`.
fn fill_reduced(rng: &mut WordRng, alphabet: Alphabet, n: usize, buf: &mut Vec<Letter>) {
    buf.clear();
    let size = alphabet.size() as u8;
    if n == 0 {
        return;
    }
    let mut prev = Letter(rng.random_range(0..size));
    buf.push(prev);
    for _ in 1..n {
        // uniform over the 2k - 1 letters that do not cancel `prev`
        let mut c = rng.random_range(0..size - 1);
        if c >= prev.inverse().0 {
            c += 1;
        }
        prev = Letter(c);
        buf.push(prev);
    }
}

pub fn random_reduced_word(spec: &RandomWordSpec) -> Word {
    let mut rng = rng(spec.seed);
    random_reduced_word_with(&mut rng, spec.alphabet, spec.n)
}

pub fn random_reduced_word_with(rng: &mut WordRng, alphabet: Alphabet, n: usize) -> Word {
    let mut buf = Vec::with_capacity(n);
    fill_reduced(rng, alphabet, n, &mut buf);
    Word::from_reduced(buf)
}

fn balanced(letters: &[Letter], rank: usize, sums: &mut [i64]) -> bool {
    sums[..rank].iter_mut().for_each(|s| *s = 0);
    for l in letters {
        sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
    }
    sums[..rank].iter().all(|&s| s == 0)
}

/// Uniform element of `F_n ∩ [F, F]` by rejection.
pub fn random_commutator_word(spec: &RandomWordSpec, retry_cap: u64) -> Result<Word> {
    let mut rng = rng(spec.seed);
    random_commutator_word_with(&mut rng, spec.alphabet, spec.n, retry_cap)
}

pub fn random_commutator_word_with(
    rng: &mut WordRng,
    alphabet: Alphabet,
    n: usize,
    retry_cap: u64,
) -> Result<Word> {
    if n % 2 == 1 {
        return Err(Error::Parity(n));
    }
    let mut buf = Vec::with_capacity(n);
    let mut sums = vec![0i64; alphabet.rank()];
    for _ in 0..retry_cap {
        fill_reduced(rng, alphabet, n, &mut buf);
        if balanced(&buf, alphabet.rank(), &mut sums) {
            return Ok(Word::from_reduced(buf));
        }
    }
    Err(Error::Exhaustion(retry_cap))
}

/// Occurrence counts of all subwords of a fixed length.
#[derive(Debug, Clone)]
pub struct CountingMeasure {
    pub length: usize,
    pub word_length: usize,
    pub cyclic: bool,
    pub counts: HashMap<Word, u64>,
}

impl CountingMeasure {
    pub fn count(&self, sigma: &Word) -> u64 {
        self.counts.get(sigma).copied().unwrap_or(0)
    }

    pub fn total_mass(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `A_l(v) = (1 / 2n) * sum_w |C_w(v) - C_{w^-1}(v)|`.
    pub fn inverse_asymmetry(&self) -> f64 {
        let mut total: u64 = 0;
        for (w, &c) in &self.counts {
            total += c.abs_diff(self.count(&w.inverse()));
        }
        // words whose inverse occurs but which do not occur themselves
        for (w, &c) in &self.counts {
            let inv = w.inverse();
            if !self.counts.contains_key(&inv) {
                total += c;
            }
        }
        total as f64 / (2.0 * self.word_length as f64)
    }

    /// `C_f(v) = sum_sigma f(sigma) C_sigma(v)` over subwords of this length.
    pub fn integrate<F: Fn(&Word) -> f64>(&self, f: F) -> f64 {
        self.counts.iter().map(|(w, &c)| f(w) * c as f64).sum()
    }

    /// `H_f(v) = C_f(v) - C_f(v^-1)`.
    pub fn antisymmetrized<F: Fn(&Word) -> f64>(&self, f: F) -> f64 {
        self.counts
            .iter()
            .map(|(w, &c)| (f(w) - f(&w.inverse())) * c as f64)
            .sum()
    }
}

/// Counts every occurrence (overlaps included) of every length-`len` subword.
pub fn subword_stats(v: &Word, len: usize, cyclic: bool) -> Result<CountingMeasure> {
    let n = v.len();
    if len == 0 || len > n {
        return Err(Error::Range(format!("subword length {len} for a word of length {n}")));
    }
    if cyclic && !v.is_cyclically_reduced() {
        return Err(Error::Degenerate(format!("{v} is not cyclically reduced")));
    }
    let starts = if cyclic { n } else { n - len + 1 };
    let mut counts: HashMap<Word, u64> = HashMap::new();
    for s in 0..starts {
        let w = if cyclic {
            v.cyclic_subword(s, len)
        } else {
            Word::from_reduced(v.letters()[s..s + len].to_vec())
        };
        *counts.entry(w).or_insert(0) += 1;
    }
    Ok(CountingMeasure { length: len, word_length: n, cyclic, counts })
}

/// Inverse-subword statistics of the blocks of length `ceil(L m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseMassReport {
    pub multiplier: f64,
    pub block_length: usize,
    pub card_s: usize,
    pub inverse_mass: u64,
    pub card_s_prime: usize,
}

pub fn inverse_subword_mass(v: &Word, rank: usize, multiplier: f64) -> Result<InverseMassReport> {
    let len = block_length(multiplier, scale(v.len(), rank));
    inverse_subword_mass_at(v, multiplier, len)
}

/// Same as [`inverse_subword_mass`] with an explicit block length.
pub fn inverse_subword_mass_at(v: &Word, multiplier: f64, len: usize) -> Result<InverseMassReport> {
    let stats = subword_stats(v, len, true)?;
    let inv = subword_stats(&v.inverse(), len, true)?;
    let card_s = stats.counts.len();
    let inverse_mass = stats.counts.keys().map(|s| inv.count(s)).sum();
    let card_s_prime = stats.counts.keys().filter(|s| stats.count(&s.inverse()) == 0).count();
    Ok(InverseMassReport { multiplier, block_length: len, card_s, inverse_mass, card_s_prime })
}

/// Number of reduced words `u` of length `m` with `a u b` reduced.
pub fn bridging_count(a: Letter, b: Letter, m: usize, alphabet: Alphabet) -> BigUint {
    let size = alphabet.size();
    // row vector e_a * T^(m + 1), T[x][y] = 1 unless y = x^-1
    let mut row = vec![BigUint::zero(); size];
    row[a.index()] = BigUint::one();
    for _ in 0..=m {
        let total: BigUint = row.iter().sum();
        row = (0..size)
            .map(|y| &total - &row[Letter(y as u8).inverse().index()])
            .collect();
    }
    row[b.index()].clone()
}

/// Monte-Carlo estimate of `|F'_n| / |F_n|` and of `fraction * n^(k/2)`.
pub fn commutator_fraction(alphabet: Alphabet, n: usize, trials: u64, seed: u64) -> (Ratio<u64>, f64) {
    if n % 2 == 1 || trials == 0 {
        return (Ratio::zero(), 0.0);
    }
    const CHUNK: u64 = 1 << 14;
    let chunks = trials.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng(seed.wrapping_add(c.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            let todo = CHUNK.min(trials - c * CHUNK);
            let mut buf = Vec::with_capacity(n);
            let mut sums = vec![0i64; alphabet.rank()];
            (0..todo)
                .filter(|_| {
                    fill_reduced(&mut rng, alphabet, n, &mut buf);
                    balanced(&buf, alphabet.rank(), &mut sums)
                })
                .count() as u64
        })
        .sum();
    let frac = Ratio::new(hits, trials);
    let fitted = hits as f64 / trials as f64 * (n as f64).powf(alphabet.rank() as f64 / 2.0);
    (frac, fitted)
}

/// Occurrence start positions of `sigma` in the linear word `v`.
pub fn occurrences(v: &Word, sigma: &Word) -> Vec<usize> {
    let (n, l) = (v.len(), sigma.len());
    if l == 0 || l > n {
        return Vec::new();
    }
    (0..=n - l).filter(|&i| v.letters()[i..i + l] == *sigma.letters()).collect()
}

/// Distinct subwords of `v` (linear) of every length in `1..=max_len`.
pub fn distinct_subwords(v: &Word, max_len: usize) -> HashSet<Word> {
    let mut out = HashSet::new();
    for l in 1..=max_len.min(v.len()) {
        for i in 0..=v.len() - l {
            out.insert(Word::from_reduced(v.letters()[i..i + l].to_vec()));
        }
    }
    out
}
