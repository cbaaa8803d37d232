//! Square and triangle pieces for a chain and the gluing LP they span.
//!
//! Positions are the letters of the chain's cyclic words, numbered
//! consecutively. The gap after position `p` is identified with `p`.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use super::simplex::StandardLp;
use crate::error::{Error, Result};
use crate::group::{Chain, Letter, Word};

/// A letter of one of the chain's words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub word: usize,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct PieceSystem {
    rank: usize,
    words: Vec<Word>,
    coefficients: Vec<BigRational>,
    offsets: Vec<usize>,
    letters: Vec<Letter>,
    word_of: Vec<usize>,
    squares: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

/// The gluing LP together with its column and row meaning.
#[derive(Debug, Clone)]
pub struct GluingLp {
    pub lp: StandardLp,
    /// Squares occupy columns `0..square_count`, triangles follow.
    pub square_count: usize,
    pub triangle_count: usize,
    /// Gap pairs `(g, h)` with `g < h`, one balance row each, in row order.
    pub balance_pairs: Vec<(usize, usize)>,
    /// First coverage row; coverage row of position `p` is `coverage_start + p`.
    pub coverage_start: usize,
}

/// Canonical rotation of a cyclic triple: the lexicographically least one.
pub fn canonical_triangle(t: [usize; 3]) -> [usize; 3] {
    let r1 = [t[1], t[2], t[0]];
    let r2 = [t[2], t[0], t[1]];
    *[t, r1, r2].iter().min().unwrap()
}

impl PieceSystem {
    /// Pieces for a normalized, homologically trivial chain.
    pub fn new(chain: &Chain) -> Result<Self> {
        if !chain.homologically_trivial() {
            return Err(Error::NotABoundary(format_abelian(chain)));
        }
        let c = if chain.is_normalized() { chain.clone() } else { chain.normalize() };
        let (coefficients, words): (Vec<_>, Vec<_>) = c.terms().iter().cloned().unzip();
        Ok(Self::from_words(c.rank(), words, coefficients))
    }

    /// Pieces for an explicit list of cyclically reduced words, without
    /// normalization.
    pub fn from_words(rank: usize, words: Vec<Word>, coefficients: Vec<BigRational>) -> Self {
        let mut sys = Self::positions_only(rank, words, coefficients);
        let letters = &sys.letters;
        let g = letters.len();
        let mut squares = Vec::new();
        for p in 0..g {
            for q in p + 1..g {
                if letters[q] == letters[p].inverse() {
                    squares.push([p, q]);
                }
            }
        }
        sys.triangles = (0..g)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut out = Vec::new();
                for b in a..g {
                    for c in a..g {
                        let t = [a, b, c];
                        if canonical_triangle(t) == t {
                            out.push(t);
                        }
                    }
                }
                out
            })
            .collect();
        sys.squares = squares;
        sys
    }

    /// Positions and adjacency only; the piece lists are left empty. Enough
    /// for gluing pieces chosen by other means.
    pub fn positions_only(rank: usize, words: Vec<Word>, coefficients: Vec<BigRational>) -> Self {
        let mut offsets = Vec::with_capacity(words.len() + 1);
        let mut letters = Vec::new();
        let mut word_of = Vec::new();
        for (j, w) in words.iter().enumerate() {
            offsets.push(letters.len());
            letters.extend_from_slice(w.letters());
            word_of.extend(std::iter::repeat(j).take(w.len()));
        }
        offsets.push(letters.len());
        PieceSystem { rank, words, coefficients, offsets, letters, word_of, squares: Vec::new(), triangles: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// Number of positions, which is also the number of gaps.
    pub fn position_count(&self) -> usize {
        self.letters.len()
    }

    pub fn position(&self, p: usize) -> Position {
        let w = self.word_of[p];
        Position { word: w, index: p - self.offsets[w] }
    }

    pub fn letter(&self, p: usize) -> Letter {
        self.letters[p]
    }

    pub fn word_of(&self, p: usize) -> usize {
        self.word_of[p]
    }

    pub fn next(&self, p: usize) -> usize {
        let w = self.word_of[p];
        if p + 1 == self.offsets[w + 1] {
            self.offsets[w]
        } else {
            p + 1
        }
    }

    pub fn prev(&self, p: usize) -> usize {
        let w = self.word_of[p];
        if p == self.offsets[w] {
            self.offsets[w + 1] - 1
        } else {
            p - 1
        }
    }

    pub fn squares(&self) -> &[[usize; 2]] {
        &self.squares
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// The two directed interfaces of square `{p, q}`.
    pub fn square_sides(&self, s: [usize; 2]) -> [(usize, usize); 2] {
        let [p, q] = s;
        [(p, self.prev(q)), (q, self.prev(p))]
    }

    pub fn triangle_sides(t: [usize; 3]) -> [(usize, usize); 3] {
        [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
    }

    /// The position whose letter is read when a square is entered through
    /// the interface `(g, h)`.
    pub fn letter_entered(&self, side: (usize, usize)) -> usize {
        self.next(side.1)
    }

    pub fn gluing_lp(&self) -> GluingLp {
        let g = self.position_count();
        let mut pair_row: HashMap<(usize, usize), usize> = HashMap::new();
        let mut balance_pairs = Vec::new();
        let mut row_of = |a: usize, b: usize, pairs: &mut Vec<(usize, usize)>| -> Option<(usize, i64)> {
            if a == b {
                return None;
            }
            let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            let r = *pair_row.entry(key).or_insert_with(|| {
                pairs.push(key);
                pairs.len() - 1
            });
            Some((r, sign))
        };
        let mut columns: Vec<Vec<(usize, i64)>> = Vec::with_capacity(self.squares.len() + self.triangles.len());
        let mut square_cover = Vec::with_capacity(self.squares.len());
        for &s in &self.squares {
            let mut col = Vec::new();
            for (a, b) in self.square_sides(s) {
                if let Some(e) = row_of(a, b, &mut balance_pairs) {
                    col.push(e);
                }
            }
            columns.push(col);
            square_cover.push(s);
        }
        for &t in &self.triangles {
            let mut col = Vec::new();
            for (a, b) in Self::triangle_sides(t) {
                if let Some(e) = row_of(a, b, &mut balance_pairs) {
                    col.push(e);
                }
            }
            columns.push(col);
        }
        // Sort balance rows so the row order does not depend on discovery.
        let mut order: Vec<usize> = (0..balance_pairs.len()).collect();
        order.sort_by_key(|&i| balance_pairs[i]);
        let mut rank_of = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rank_of[old] = new;
        }
        let balance_pairs: Vec<(usize, usize)> = order.iter().map(|&i| balance_pairs[i]).collect();
        let coverage_start = balance_pairs.len();
        for col in columns.iter_mut() {
            merge_entries(col, &rank_of);
        }
        for (k, s) in square_cover.iter().enumerate() {
            columns[k].push((coverage_start + s[0], 1));
            columns[k].push((coverage_start + s[1], 1));
        }
        let mut rhs = vec![BigRational::from_integer(0.into()); coverage_start];
        for p in 0..g {
            rhs.push(self.coefficients[self.word_of[p]].clone());
        }
        let mut cost = vec![0; self.squares.len()];
        cost.extend(std::iter::repeat(1).take(self.triangles.len()));
        GluingLp {
            lp: StandardLp { rows: coverage_start + g, columns, cost, rhs },
            square_count: self.squares.len(),
            triangle_count: self.triangles.len(),
            balance_pairs,
            coverage_start,
        }
    }
}

fn merge_entries(col: &mut Vec<(usize, i64)>, rank_of: &[usize]) {
    for e in col.iter_mut() {
        e.0 = rank_of[e.0];
    }
    col.sort_unstable();
    let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for &(r, v) in col.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => merged.push((r, v)),
        }
    }
    merged.retain(|e| e.1 != 0);
    *col = merged;
}

pub(crate) fn format_abelian(chain: &Chain) -> String {
    let parts: Vec<String> = chain.abelianization().iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Enumerates all pieces of a chain.
pub fn enumerate_pieces(chain: &Chain) -> Result<PieceSystem> {
    PieceSystem::new(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_chain, Alphabet};

    #[test]
    fn abab_pieces() {
        let al = Alphabet::new(2).unwrap();
        let sys = enumerate_pieces(&parse_chain("abAB", &al).unwrap()).unwrap();
        assert_eq!(sys.position_count(), 4);
        assert_eq!(sys.squares(), &[[0, 2], [1, 3]]);
        assert_eq!(sys.triangles().len(), 24);
    }

    #[test]
    fn zero_chain_is_empty() {
        let al = Alphabet::new(2).unwrap();
        let sys = enumerate_pieces(&parse_chain("abAB + baBA", &al).unwrap()).unwrap();
        assert_eq!(sys.position_count(), 0);
        assert!(sys.triangles().is_empty());
    }

    #[test]
    fn not_a_boundary() {
        let al = Alphabet::new(2).unwrap();
        let err = enumerate_pieces(&parse_chain("ab", &al).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotABoundary(_)));
    }

    #[test]
    fn triangle_counts() {
        for g in 1..8usize {
            let count = (0..g)
                .flat_map(|a| (0..g).flat_map(move |b| (0..g).map(move |c| [a, b, c])))
                .filter(|&t| canonical_triangle(t) == t)
                .count();
            assert_eq!(count, (g * g * g + 2 * g) / 3);
        }
    }
}
