//! Free groups of rank `k`: letters, reduced words, cyclic words and
//! rational chains in the space of homogenized boundaries.
//!
//! Generators are written `a, b, c, ...` and their inverses `A, B, C, ...`.
//! Letters are ordered `a < A < b < B < ...`; that order is used for the
//! canonical (least) rotation of a cyclic word.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    rank: usize,
}

impl Alphabet {
    pub fn new(rank: usize) -> Result<Self> {
        if !(2..=26).contains(&rank) {
            return Err(Error::Rank(rank));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, `2k`.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size() as u8).map(Letter)
    }

    pub fn letter(&self, c: char) -> Result<Letter> {
        let l = Letter::from_char(c).ok_or(Error::Alphabet { letter: c, rank: self.rank })?;
        if l.generator() >= self.rank {
            return Err(Error::Alphabet { letter: c, rank: self.rank });
        }
        Ok(l)
    }

    /// Parses and freely reduces a word.
    pub fn word(&self, text: &str) -> Result<Word> {
        let letters = text
            .chars()
            .map(|c| self.letter(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(reduce(&letters))
    }

    /// Parses a word that must already be reduced as written.
    pub fn reduced_word(&self, text: &str) -> Result<Word> {
        let w = self.word(text)?;
        if w.len() != text.chars().count() {
            return Err(Error::Syntax { pos: 0, msg: format!("{text:?} is not reduced") });
        }
        Ok(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.letters().iter().all(|l| l.generator() < self.rank)
    }
}

/// A generator or inverse generator; code `2 * generator + inverted`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(pub u8);

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        Letter((2 * generator + inverted as usize) as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Index into `0..2k`.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Some(Letter::new(c as usize - 'A' as usize, true)),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() as u8) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps letters that the caller knows to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        Word(letters)
    }

    /// Wraps letters without reducing them; used for diagnostics and for
    /// labels assembled from reduced pieces.
    pub(crate) fn from_letters_unchecked(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        reduce(&v)
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        reduce(&v)
    }

    /// Exponent sum of every generator.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut out = vec![0i64; rank];
        for l in &self.0 {
            out[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        out
    }

    pub fn in_commutator_subgroup(&self, rank: usize) -> bool {
        self.abelianization(rank).iter().all(|&e| e == 0)
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    /// Cyclic subword of length `len` starting at `start`.
    pub fn cyclic_subword(&self, start: usize, len: usize) -> Word {
        let n = self.len();
        Word((0..len).map(|i| self.0[(start + i) % n]).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for Word {
    type Output = Letter;
    fn index(&self, i: usize) -> &Letter {
        &self.0[i]
    }
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

/// Free reduction.
pub fn reduce(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// A cyclically reduced word up to rotation, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Fails unless `w` is cyclically reduced.
    pub fn new(w: &Word) -> Result<Self> {
        if !w.is_cyclically_reduced() {
            return Err(Error::Degenerate(format!("{w} is not cyclically reduced")));
        }
        Ok(CyclicWord(Word(least_rotation(w.letters()))))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(Word(least_rotation(self.0.inverse().letters())))
    }

    /// Writes the word as `root^p` with `root` primitive.
    pub fn root(&self) -> (CyclicWord, usize) {
        let n = self.len();
        if n == 0 {
            return (self.clone(), 1);
        }
        let period = minimal_period(self.0.letters());
        if n % period == 0 {
            let root = Word(self.0.letters()[..period].to_vec());
            (CyclicWord(Word(least_rotation(root.letters()))), n / period)
        } else {
            (self.clone(), 1)
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Least rotation (Booth's algorithm).
pub(crate) fn least_rotation(s: &[Letter]) -> Vec<Letter> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let at = |i: usize| s[i % n];
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let (a, b) = (at(i + k), at(j + k));
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    let start = i.min(j);
    (0..n).map(|t| at(start + t)).collect()
}

/// Smallest `p` with `s[i] == s[i + p]` for all valid `i`.
fn minimal_period(s: &[Letter]) -> usize {
    let n = s.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// Splits `w = conjugator * core * conjugator^-1` with `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let l = w.letters();
    let (mut i, mut j) = (0usize, l.len());
    while j > i + 1 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    let core = Word(l[i..j].to_vec());
    let conj = Word(l[..i].to_vec());
    (CyclicWord(Word(least_rotation(core.letters()))), conj)
}

/// Same as [`cyclic_reduce`] but keeps the core in its original rotation.
pub fn cyclic_core(w: &Word) -> Word {
    let l = w.letters();
    let (mut i, mut j) = (0usize, l.len());
    while j > i + 1 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    Word(l[i..j].to_vec())
}

/// A finite rational combination of conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    rank: usize,
    terms: Vec<(BigRational, Word)>,
    homologically_trivial: bool,
}

impl Chain {
    pub fn zero(rank: usize) -> Self {
        Chain { rank, terms: Vec::new(), homologically_trivial: true }
    }

    pub fn new(rank: usize, terms: Vec<(BigRational, Word)>) -> Self {
        let mut c = Chain { rank, terms, homologically_trivial: false };
        c.terms.retain(|(t, _)| !t.is_zero());
        c.homologically_trivial = c.abelianization().iter().all(|x| x.is_zero());
        c
    }

    pub fn single(rank: usize, w: &Word) -> Self {
        Chain::new(rank, vec![(BigRational::one(), w.clone())])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(BigRational, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn homologically_trivial(&self) -> bool {
        self.homologically_trivial
    }

    /// Sum of word lengths.
    pub fn total_length(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).sum()
    }

    pub fn abelianization(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.rank];
        for (t, w) in &self.terms {
            for (g, e) in w.abelianization(self.rank).into_iter().enumerate() {
                out[g] += t * BigRational::from_integer(BigInt::from(e));
            }
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Chain {
        Chain::new(self.rank, self.terms.iter().map(|(t, w)| (t * q, w.clone())).collect())
    }

    pub fn negate(&self) -> Chain {
        self.scale(&-BigRational::one())
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Chain::new(self.rank.max(other.rank), terms)
    }

    /// Canonical form in homogenized boundaries: cyclically reduced
    /// primitive words with positive coefficients, no word appearing together
    /// with its inverse, sorted.
    pub fn normalize(&self) -> Chain {
        let mut acc: BTreeMap<CyclicWord, BigRational> = BTreeMap::new();
        for (t, w) in &self.terms {
            let (core, _) = cyclic_reduce(w);
            if core.is_empty() {
                continue;
            }
            let (root, p) = core.root();
            let coeff = t * BigRational::from_integer(BigInt::from(p));
            let inv = root.inverse();
            // represent the pair {u, u^-1} by its smaller member
            let (key, c) = if inv < root { (inv, -coeff) } else { (root, coeff) };
            *acc.entry(key).or_insert_with(BigRational::zero) += c;
        }
        let mut terms: Vec<(BigRational, Word)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| if c.is_negative() { (-c, w.inverse().0) } else { (c, w.0) })
            .collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Chain::new(self.rank, terms)
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, w)) in self.terms.iter().enumerate() {
            let neg = t.is_negative();
            let mag = t.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Parses `[sign] [coeff '*'] word { ('+'|'-') [coeff '*'] word }` where
/// `coeff` is an integer or `p/q`. Whitespace between tokens is ignored.
pub fn parse_chain(text: &str, alphabet: &Alphabet) -> Result<Chain> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(err(pos, "empty chain"));
            }
            break;
        }
        let mut sign = BigRational::one();
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -sign;
                pos += 1
            }
            _ if !first => return Err(err(pos, "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        skip_ws(&mut pos);
        let mut coeff = BigRational::one();
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let num: BigInt = text[start..pos].parse().map_err(|_| err(start, "bad integer"))?;
            let mut den = BigInt::one();
            if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                let ds = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if ds == pos {
                    return Err(err(ds, "expected denominator"));
                }
                den = text[ds..pos].parse().map_err(|_| err(ds, "bad integer"))?;
                if den.is_zero() {
                    return Err(err(ds, "zero denominator"));
                }
            }
            coeff = BigRational::new(num, den);
            skip_ws(&mut pos);
            if pos >= bytes.len() || bytes[pos] != b'*' {
                return Err(err(pos, "expected '*' after coefficient"));
            }
            pos += 1;
            skip_ws(&mut pos);
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
            pos += 1;
        }
        if start == pos {
            return Err(err(pos, "expected a word"));
        }
        let word = alphabet.word(&text[start..pos])?;
        terms.push((sign * coeff, word));
    }
    Ok(Chain::new(alphabet.rank(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduce_examples() {
        let a = f2();
        assert_eq!(a.word("abBA").unwrap().to_string(), "");
        assert_eq!(a.word("aabBA").unwrap().to_string(), "a");
        assert_eq!(a.word("abAB").unwrap().to_string(), "abAB");
    }

    #[test]
    fn rank_and_alphabet_errors() {
        assert_eq!(Alphabet::new(1), Err(Error::Rank(1)));
        let a = f2();
        assert!(matches!(a.word("abc"), Err(Error::Alphabet { letter: 'c', rank: 2 })));
        assert!(matches!(a.word("ab1"), Err(Error::Alphabet { .. })));
    }

    #[test]
    fn invert_examples() {
        let a = f2();
        assert_eq!(a.word("abAB").unwrap().inverse().to_string(), "baBA");
        assert_eq!(Word::empty().inverse(), Word::empty());
        assert_eq!(a.word("aab").unwrap().inverse().to_string(), "BAA");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let a = f2();
        let (core, conj) = cyclic_reduce(&a.word("Baab").unwrap());
        assert_eq!(core, CyclicWord::new(&a.word("aa").unwrap()).unwrap());
        assert_eq!(conj.to_string(), "B");
        let (core, conj) = cyclic_reduce(&a.word("abAB").unwrap());
        assert_eq!(core.len(), 4);
        assert!(conj.is_empty());
        let w = a.word("aBA").unwrap();
        let (core, conj) = cyclic_reduce(&w);
        assert_eq!(core.to_string(), "B");
        assert_eq!(conj.to_string(), "a");
        assert_eq!(conj.mul(core.word()).mul(&conj.inverse()), w);
    }

    #[test]
    fn least_rotation_and_roots() {
        let a = f2();
        let c = CyclicWord::new(&a.word("bABa").unwrap()).unwrap();
        assert_eq!(c.to_string(), "abAB");
        let (r, p) = CyclicWord::new(&a.word("babababa").unwrap()).unwrap().root();
        assert_eq!((r.to_string().as_str(), p), ("ab", 4));
        let (r, p) = CyclicWord::new(&a.word("aab").unwrap()).unwrap().root();
        assert_eq!((r.to_string().as_str(), p), ("aab", 1));
        assert!(CyclicWord::new(&a.word("abA").unwrap()).is_err());
    }

    #[test]
    fn abelianization_examples() {
        let a = f2();
        let c = parse_chain("abAB", &a).unwrap();
        assert_eq!(c.abelianization(), vec![q(0, 1), q(0, 1)]);
        let c = parse_chain("aab", &a).unwrap();
        assert_eq!(c.abelianization(), vec![q(2, 1), q(1, 1)]);
        let c = parse_chain("ab - ba", &a).unwrap();
        assert_eq!(c.abelianization(), vec![q(0, 1), q(0, 1)]);
        assert!(c.homologically_trivial());
    }

    #[test]
    fn normalize_examples() {
        let a = f2();
        let c = parse_chain("abAB + baBA", &a).unwrap().normalize();
        assert!(c.is_zero());
        // least rotation of baBA is aBAb
        let c = parse_chain("-abAB", &a).unwrap().normalize();
        assert_eq!(c.to_string(), "aBAb");
        let c = parse_chain("-1*abAB", &a).unwrap().normalize();
        assert_eq!(c.terms(), &[(q(1, 1), a.word("aBAb").unwrap())][..]);
        let c = parse_chain("abab", &a).unwrap().normalize();
        assert_eq!(c.to_string(), "2*ab");
        let c = parse_chain("abAB", &a).unwrap().negate().normalize();
        let expect = CyclicWord::new(&a.word("baBA").unwrap()).unwrap();
        assert_eq!(c.terms()[0].1, *expect.word());
        assert_eq!(c.terms()[0].0, q(1, 1));
    }

    #[test]
    fn parse_examples() {
        let a = f2();
        let c = parse_chain("abAB", &a).unwrap();
        assert_eq!(c.terms(), &[(q(1, 1), a.word("abAB").unwrap())][..]);
        let c = parse_chain("1/2*abAB + 3*aabAAB", &a).unwrap();
        assert_eq!(c.terms().len(), 2);
        assert_eq!(c.terms()[0].0, q(1, 2));
        assert_eq!(c.terms()[1].0, q(3, 1));
        assert!(parse_chain("abAB - abAB", &a).unwrap().normalize().is_zero());
    }

    #[test]
    fn parse_errors() {
        let a = f2();
        assert!(matches!(parse_chain("", &a), Err(Error::Syntax { .. })));
        assert!(matches!(parse_chain("1/2 abAB", &a), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_chain("abAB abAB", &a), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_chain("2/0*ab", &a), Err(Error::Syntax { .. })));
        assert!(matches!(parse_chain("abcABC", &a), Err(Error::Alphabet { .. })));
    }
}
