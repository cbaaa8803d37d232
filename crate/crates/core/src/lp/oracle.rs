//! Brute-force search for small integral gluings, independent of the
//! simplex solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::pieces::PieceSystem;
use crate::error::{Error, Result};
use crate::group::Chain;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Value(BigRational),
    NoWitness,
}

/// Smallest `T / 4N` over integral gluings with coverage multiplicity
/// `N ≤ budget` and at most `budget` triangles.
pub fn scl_oracle_small(chain: &Chain, budget: usize) -> Result<OracleResult> {
    if !chain.homologically_trivial() {
        return Err(Error::NotABoundary(super::pieces::format_abelian(chain)));
    }
    let c = chain.normalize();
    if c.is_zero() {
        return Ok(OracleResult::Value(BigRational::zero()));
    }
    if c.total_length() > 12 || budget > 8 {
        return Err(Error::Range("oracle needs chain length ≤ 12 and budget ≤ 8".into()));
    }
    let sys = PieceSystem::new(&c)?;
    let g = sys.position_count();
    let mut best: Option<BigRational> = None;
    for n in 1..=budget {
        let mut need = Vec::with_capacity(g);
        let mut integral = true;
        for p in 0..g {
            let r = &sys.coefficients()[sys.word_of(p)] * BigRational::from_integer(BigInt::from(n));
            if !r.is_integer() {
                integral = false;
                break;
            }
            need.push(r.to_integer().to_i64().unwrap_or(i64::MAX));
        }
        if !integral {
            continue;
        }
        // Only triangle counts that beat the current best are worth trying.
        let cap = match &best {
            None => budget as i64,
            Some(b) => {
                let limit = b * BigRational::from_integer(BigInt::from(4 * n));
                let max_t = limit.ceil().to_integer().to_i64().unwrap_or(0) - 1;
                max_t.min(budget as i64)
            }
        };
        if cap < 0 {
            continue;
        }
        let cap = cap as usize;
        let mut search = Search { sys: &sys, g, cap, best_t: None };
        let mut counts = vec![0u32; sys.squares().len()];
        search.squares(&mut need, &mut counts, 0);
        if let Some(t) = search.best_t {
            let v = BigRational::new(BigInt::from(t), BigInt::from(4 * n));
            if best.as_ref().map_or(true, |b| v < *b) {
                best = Some(v);
            }
        }
    }
    Ok(best.map_or(OracleResult::NoWitness, OracleResult::Value))
}

struct Search<'a> {
    sys: &'a PieceSystem,
    g: usize,
    cap: usize,
    best_t: Option<usize>,
}

impl Search<'_> {
    /// Distributes the coverage requirement over squares, position by
    /// position, then searches triangles for each complete assignment.
    fn squares(&mut self, need: &mut [i64], counts: &mut [u32], from: usize) {
        let Some(p) = (0..self.g).find(|&p| need[p] > 0) else {
            self.triangles_for(counts);
            return;
        };
        let candidates: Vec<usize> = (from..self.sys.squares().len())
            .filter(|&i| {
                let [a, b] = self.sys.squares()[i];
                (a == p || b == p) && need[a] > 0 && need[b] > 0
            })
            .collect();
        for &i in &candidates {
            let [a, b] = self.sys.squares()[i];
            need[a] -= 1;
            need[b] -= 1;
            counts[i] += 1;
            // Non-decreasing square index avoids permuted duplicates.
            self.squares(need, counts, i);
            counts[i] -= 1;
            need[a] += 1;
            need[b] += 1;
        }
    }

    fn triangles_for(&mut self, counts: &[u32]) {
        let g = self.g;
        let mut d = vec![0i32; g * g];
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, b) in self.sys.square_sides(self.sys.squares()[i]) {
                add_side(&mut d, g, a, b, c as i32);
            }
        }
        let mut parity = vec![0u8; g];
        let limit = match self.best_t {
            Some(t) => t.saturating_sub(1),
            None => self.cap,
        };
        for t in 0..=limit {
            if dfs(&mut d, &mut parity, g, t) {
                self.best_t = Some(t);
                self.cap = t;
                return;
            }
        }
    }
}

fn add_side(d: &mut [i32], g: usize, a: usize, b: usize, c: i32) {
    if a < b {
        d[a * g + b] += c;
    } else if b < a {
        d[b * g + a] -= c;
    }
}

fn add_triangle(d: &mut [i32], parity: &mut [u8], g: usize, t: [usize; 3], sign: i32) {
    for (a, b) in PieceSystem::triangle_sides(t) {
        if a == b {
            parity[a] ^= 1;
        } else {
            add_side(d, g, a, b, sign);
        }
    }
}

/// Can exactly `left` triangles cancel the imbalance `d` and the
/// self-interface parities?
fn dfs(d: &mut [i32], parity: &mut [u8], g: usize, left: usize) -> bool {
    let mut total = 0i64;
    let mut first = None;
    for a in 0..g {
        for b in a + 1..g {
            let v = d[a * g + b];
            if v != 0 {
                total += v.unsigned_abs() as i64;
                if first.is_none() {
                    first = Some((a, b, v));
                }
            }
        }
    }
    let odd = parity.iter().position(|&x| x == 1);
    if total == 0 && odd.is_none() {
        return left == 0;
    }
    if left == 0 || total > 3 * left as i64 {
        return false;
    }
    let choices: Vec<[usize; 3]> = match first {
        Some((a, b, v)) => {
            // A surplus of (a,b) needs a triangle containing (b,a), and vice versa.
            let (x, y) = if v > 0 { (b, a) } else { (a, b) };
            (0..g).map(|h| [x, y, h]).collect()
        }
        None => {
            let a = odd.unwrap();
            (0..g).map(|h| [a, a, h]).collect()
        }
    };
    for t in choices {
        add_triangle(d, parity, g, t, 1);
        let ok = dfs(d, parity, g, left - 1);
        add_triangle(d, parity, g, t, -1);
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_chain, Alphabet};

    fn chain(s: &str) -> Chain {
        parse_chain(s, &Alphabet::new(2).unwrap()).unwrap()
    }

    #[test]
    fn abab_witness() {
        assert_eq!(
            scl_oracle_small(&chain("abAB"), 2).unwrap(),
            OracleResult::Value(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(scl_oracle_small(&chain("abAB"), 1).unwrap(), OracleResult::NoWitness);
        assert_eq!(scl_oracle_small(&chain("abAB + baBA"), 3).unwrap(), OracleResult::Value(BigRational::zero()));
    }
}
