//! Subword digraphs `X_i`: vertices are the reduced words of length `i`,
//! edges the reduced words of length `i + 1`, each running from its prefix
//! to its suffix. Spectra of the transition matrices, exact closed-walk
//! counts, vertex Cheeger constants and two tail-bound evaluators.

use std::collections::HashMap;
use std::fmt::Write;

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Alphabet, Letter, Word};
use crate::sampling;

/// Default cap on the number of vertices of a digraph.
pub const DEFAULT_VERTEX_CAP: usize = 1 << 16;
/// Largest digraph handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 2000;
/// Largest digraph searched exhaustively for its Cheeger constant.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct SubwordDigraph {
    pub alphabet: Alphabet,
    pub level: usize,
    /// `F_i` in lexicographic letter order.
    pub vertices: Vec<Word>,
    /// Edge list `(tail, head)` in the order of `F_{i+1}`.
    pub edges: Vec<(usize, usize)>,
    pub out: Vec<Vec<usize>>,
}

fn reduced_words(alphabet: &Alphabet, len: usize) -> Vec<Vec<Letter>> {
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(words.len() * alphabet.size());
        for w in &words {
            for l in alphabet.letters() {
                if w.last().is_some_and(|&p| p == l.inverse()) {
                    continue;
                }
                let mut u = w.clone();
                u.push(l);
                next.push(u);
            }
        }
        words = next;
    }
    words
}

/// `|F_i| = 2k(2k-1)^{i-1}`, or `None` on overflow.
pub fn sphere_size(rank: usize, i: usize) -> Option<usize> {
    let mut s = 2 * rank;
    for _ in 1..i {
        s = s.checked_mul(2 * rank - 1)?;
    }
    Some(s)
}

pub fn build_digraph(alphabet: &Alphabet, level: usize) -> Result<SubwordDigraph> {
    build_digraph_capped(alphabet, level, DEFAULT_VERTEX_CAP)
}

pub fn build_digraph_capped(alphabet: &Alphabet, level: usize, cap: usize) -> Result<SubwordDigraph> {
    if level == 0 {
        return Err(Error::Range("level must be at least 1".into()));
    }
    let size = sphere_size(alphabet.rank(), level).filter(|&s| s <= cap);
    let Some(size) = size else {
        return Err(Error::Capacity(format!("level {level} has more than {cap} vertices")));
    };
    let vertices: Vec<Vec<Letter>> = reduced_words(alphabet, level);
    debug_assert_eq!(vertices.len(), size);
    let index: HashMap<&[Letter], usize> = vertices.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut edges = Vec::new();
    let mut out = vec![Vec::new(); size];
    for e in reduced_words(alphabet, level + 1) {
        let t = index[&e[..level]];
        let h = index[&e[1..]];
        edges.push((t, h));
        out[t].push(h);
    }
    let d = 2 * alphabet.rank() - 1;
    let mut indeg = vec![0usize; size];
    for &(_, h) in &edges {
        indeg[h] += 1;
    }
    if out.iter().any(|o| o.len() != d) || indeg.iter().any(|&x| x != d) {
        return Err(Error::Internal("subword digraph is not regular".into()));
    }
    Ok(SubwordDigraph {
        alphabet: alphabet.clone(),
        level,
        vertices: vertices.iter().map(|w| Word::from_letters_unchecked(w)).collect(),
        edges,
        out,
    })
}

impl SubwordDigraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self) -> usize {
        2 * self.alphabet.rank() - 1
    }

    /// Transition matrix with exact entries.
    pub fn transition_exact(&self) -> Vec<Vec<Ratio<i64>>> {
        let n = self.vertex_count();
        let step = Ratio::new(1, self.degree() as i64);
        let mut p = vec![vec![Ratio::from_integer(0); n]; n];
        for &(t, h) in &self.edges {
            p[t][h] += step;
        }
        p
    }

    pub fn transition(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        let step = 1.0 / self.degree() as f64;
        let mut p = DMatrix::zeros(n, n);
        for &(t, h) in &self.edges {
            p[(t, h)] += step;
        }
        p
    }

    /// Sparse triplet text: a header line `rows cols nnz`, then one
    /// `row col value` line per nonzero with exact rational values.
    pub fn to_triplets(&self) -> String {
        let mut entries: Vec<(usize, usize)> = self.edges.clone();
        entries.sort_unstable();
        let mut out = String::from("# sclab transition matrix\n");
        let mut merged: Vec<(usize, usize, i64)> = Vec::new();
        for (t, h) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == t && last.1 == h => last.2 += 1,
                _ => merged.push((t, h, 1)),
            }
        }
        let _ = writeln!(out, "{} {} {}", self.vertex_count(), self.vertex_count(), merged.len());
        for (t, h, c) in merged {
            let _ = writeln!(out, "{t} {h} {}", Ratio::new(c, self.degree() as i64));
        }
        out
    }

    /// `tr(A^j)` for `j = 1..=max_power`, counted as closed walks.
    pub fn closed_walks(&self, max_power: usize) -> Result<Vec<u128>> {
        let n = self.vertex_count();
        let mut traces = vec![0u128; max_power];
        let overflow = || Error::Capacity("closed walk count overflows".into());
        for s in 0..n {
            let mut cur = vec![0u128; n];
            cur[s] = 1;
            for tr in traces.iter_mut() {
                let mut next = vec![0u128; n];
                for (v, &c) in cur.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for &h in &self.out[v] {
                        next[h] = next[h].checked_add(c).ok_or_else(overflow)?;
                    }
                }
                cur = next;
                *tr = tr.checked_add(cur[s]).ok_or_else(overflow)?;
            }
        }
        Ok(traces)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub rank: usize,
    pub level: usize,
    pub vertices: usize,
    /// Eigenvalues of `P` as `(re, im)`, by decreasing modulus.
    pub eigenvalues: Vec<(f64, f64)>,
    /// Smallest nonzero eigenvalue of `Id − (P + Pᵀ)/2`.
    pub lambda1: f64,
    /// `tr(A^j)` for `j = 1..=J`, as decimal strings.
    pub traces: Vec<String>,
}

impl SpectralReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|(a, b)| a.hypot(*b)).collect()
    }
}

pub fn spectral_report(g: &SubwordDigraph, max_power: usize) -> Result<SpectralReport> {
    let n = g.vertex_count();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity(format!("{n} vertices exceed the dense limit {DENSE_LIMIT}")));
    }
    let p = g.transition();
    let mut eigenvalues: Vec<(f64, f64)> = p.clone().complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect();
    eigenvalues.sort_by(|a, b| {
        let (ma, mb) = (a.0.hypot(a.1), b.0.hypot(b.1));
        mb.total_cmp(&ma).then(b.0.total_cmp(&a.0)).then(b.1.total_cmp(&a.1))
    });
    let sym = DMatrix::<f64>::identity(n, n) - (&p + p.transpose()) * 0.5;
    let mut lap: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    lap.sort_by(f64::total_cmp);
    let lambda1 = lap.get(1).copied().unwrap_or(0.0);
    let traces = g.closed_walks(max_power)?.iter().map(|t| t.to_string()).collect();
    Ok(SpectralReport { rank: g.alphabet.rank(), level: g.level, vertices: n, eigenvalues, lambda1, traces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheegerReport {
    /// `|∂U| / |U|` as an exact fraction.
    pub h: String,
    pub h_value: f64,
    pub witness: Vec<String>,
    pub boundary: Vec<String>,
    pub method: SearchMethod,
}

impl CheegerReport {
    pub fn ratio(&self) -> Ratio<i64> {
        self.h.parse().expect("h is a fraction")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn out_boundary(g: &SubwordDigraph, u: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.vertex_count()];
    for &x in u {
        inside[x] = true;
    }
    let mut b: Vec<usize> = u.iter().flat_map(|&x| g.out[x].iter().copied()).filter(|&y| !inside[y]).collect();
    b.sort_unstable();
    b.dedup();
    b
}

fn report(g: &SubwordDigraph, u: Vec<usize>, method: SearchMethod) -> CheegerReport {
    let b = out_boundary(g, &u);
    let h = Ratio::new(b.len() as i64, u.len() as i64);
    CheegerReport {
        h: h.to_string(),
        h_value: *h.numer() as f64 / *h.denom() as f64,
        witness: u.iter().map(|&x| g.vertices[x].to_string()).collect(),
        boundary: b.iter().map(|&x| g.vertices[x].to_string()).collect(),
        method,
    }
}

/// Vertex Cheeger constant `min |∂U|/|U|` over nonempty `U` with
/// `|U| ≤ |X|/2`, where `∂U` is the set of out-neighbours outside `U`.
/// Exhaustive up to [`EXHAUSTIVE_LIMIT`] vertices; otherwise a seeded
/// local search that only bounds `h` from above.
pub fn cheeger_constant(g: &SubwordDigraph, seed: u64) -> CheegerReport {
    if g.vertex_count() <= EXHAUSTIVE_LIMIT {
        let u = exhaustive(g);
        report(g, u, SearchMethod::Exhaustive)
    } else {
        let u = sampled(g, seed, 200);
        report(g, u, SearchMethod::Sampled)
    }
}

fn exhaustive(g: &SubwordDigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let nbr: Vec<u32> = g.out.iter().map(|o| o.iter().fold(0u32, |m, &h| m | (1 << h))).collect();
    let mut reach = vec![0u32; 1 << n];
    let mut best: Option<(Ratio<i64>, Vec<usize>)> = None;
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        reach[mask as usize] = reach[(mask & (mask - 1)) as usize] | nbr[low];
        let size = mask.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let h = Ratio::new((reach[mask as usize] & !mask).count_ones() as i64, size as i64);
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some((bh, bu)) => h < *bh || (h == *bh && members < *bu),
        };
        if better {
            best = Some((h, members));
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}

/// Random restarts of a greedy descent over single-vertex moves.
fn sampled(g: &SubwordDigraph, seed: u64, restarts: usize) -> Vec<usize> {
    let n = g.vertex_count();
    let mut rng = sampling::rng(seed);
    let score = |u: &[usize]| Ratio::new(out_boundary(g, u).len() as i64, u.len() as i64);
    let mut best: Option<(Ratio<i64>, Vec<usize>)> = None;
    for _ in 0..restarts {
        let size = rng.random_range(1..=n / 2);
        let mut inside = vec![false; n];
        let mut u: Vec<usize> = Vec::new();
        while u.len() < size {
            let x = rng.random_range(0..n);
            if !inside[x] {
                inside[x] = true;
                u.push(x);
            }
        }
        u.sort_unstable();
        let mut cur = score(&u);
        loop {
            let mut improved = false;
            for x in 0..n {
                let mut cand = u.clone();
                if inside[x] {
                    if cand.len() == 1 {
                        continue;
                    }
                    cand.retain(|&y| y != x);
                } else {
                    if 2 * (cand.len() + 1) > n {
                        continue;
                    }
                    cand.push(x);
                    cand.sort_unstable();
                }
                let s = score(&cand);
                if s < cur {
                    inside[x] = !inside[x];
                    u = cand;
                    cur = s;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((bh, bu)) => cur < *bh || (cur == *bh && u < *bu),
        };
        if better {
            best = Some((cur, u));
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBoundQuery {
    /// `N_q · exp(−λ₁ n γ² / 8)`.
    Lezaud { lambda1: f64, n: f64, gamma: f64, n_q: f64 },
    /// `exp(−δ² n p / 3)`.
    Chernoff { n: f64, p: f64, delta: f64 },
}

pub fn tail_bound(q: TailBoundQuery) -> Result<f64> {
    let unit = |x: f64| x > 0.0 && x <= 1.0;
    match q {
        TailBoundQuery::Lezaud { lambda1, n, gamma, n_q } => {
            if !(lambda1 > 0.0 && n > 0.0 && n_q > 0.0 && unit(gamma)) {
                return Err(Error::Range(format!("invalid Lezaud query {q:?}")));
            }
            Ok(n_q * (-lambda1 * n * gamma * gamma / 8.0).exp())
        }
        TailBoundQuery::Chernoff { n, p, delta } => {
            if !(n > 0.0 && unit(p) && unit(delta)) {
                return Err(Error::Range(format!("invalid Chernoff query {q:?}")));
            }
            Ok((-delta * delta * n * p / 3.0).exp())
        }
    }
}

/// Edge frequencies of `X_i` along the cyclic word `v`, indexed like
/// `g.edges`.
pub fn edge_frequencies(g: &SubwordDigraph, v: &Word) -> Vec<f64> {
    let n = v.len();
    let l = g.level + 1;
    let index: HashMap<Word, usize> =
        reduced_words(&g.alphabet, l).into_iter().enumerate().map(|(i, w)| (Word::from_letters_unchecked(&w), i)).collect();
    let mut counts = vec![0u64; g.edge_count()];
    for i in 0..n {
        if let Some(&e) = index.get(&v.cyclic_subword(i, l)) {
            counts[e] += 1;
        }
    }
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn sizes() {
        let g = build_digraph(&f2(), 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 12));
        let a = g.vertices.iter().position(|w| w.to_string() == "a").unwrap();
        assert!(g.out[a].contains(&a));
        let g = build_digraph(&f2(), 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (12, 36));
        assert!(matches!(build_digraph(&f2(), 20), Err(Error::Capacity(_))));
    }

    #[test]
    fn tail_bounds() {
        let l = tail_bound(TailBoundQuery::Lezaud { lambda1: 2.0 / 3.0, n: 900.0, gamma: 0.1, n_q: 2.0 }).unwrap();
        assert!((l - 2.0 * (-0.75f64).exp()).abs() < 1e-12);
        let c = tail_bound(TailBoundQuery::Chernoff { n: 1000.0, p: 0.1, delta: 0.3 }).unwrap();
        assert!((c - (-3.0f64).exp()).abs() < 1e-12);
        let tiny = tail_bound(TailBoundQuery::Lezaud { lambda1: 2.0 / 3.0, n: 900.0, gamma: 1e-9, n_q: 2.0 }).unwrap();
        assert!((tiny - 2.0).abs() < 1e-9);
        assert!(tail_bound(TailBoundQuery::Chernoff { n: 1.0, p: 0.0, delta: 0.5 }).is_err());
    }

    #[test]
    fn triplets() {
        let g = build_digraph(&f2(), 1).unwrap();
        let t = g.to_triplets();
        assert!(t.contains("4 4 12"));
        assert!(t.lines().skip(2).all(|l| l.ends_with("1/3")));
    }
}
