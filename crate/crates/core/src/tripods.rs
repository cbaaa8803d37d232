//! Tripods and joints in a cyclic word, the boundary imbalance of the
//! uniform tripod measure, and an integral assembler that turns tripods into
//! a fatgraph certifying an upper bound on scl.
//!
//! Positions of the cyclic word `v` are `0..n`; the gap after position `p`
//! is called `p`. A tripod copy with segments `xY`, `yZ`, `zX` starting at
//! `i1`, `i2`, `i3` has its corners at the gaps `i + L - 1` between the two
//! halves of each segment.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fatgraph::{glue_pieces, verify_fatgraph, Fatgraph};
use crate::group::{cyclic_reduce, Chain, CyclicWord, Letter, Word};
use crate::lp::pieces::PieceSystem;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripodCopy {
    pub x: Word,
    pub y: Word,
    pub z: Word,
    /// Starts of the occurrences of `xY`, `yZ`, `zX`.
    pub starts: [usize; 3],
}

impl TripodCopy {
    pub fn corners(&self, n: usize, edge_length: usize) -> [usize; 3] {
        self.starts.map(|i| (i + edge_length - 1) % n)
    }
}

/// A maximal joint: the occurrence of `label` at `x_start` paired with the
/// occurrence of its inverse at `inverse_start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointCopy {
    pub x_start: usize,
    pub inverse_start: usize,
    pub len: usize,
}

impl JointCopy {
    pub fn iota(self) -> JointCopy {
        JointCopy { x_start: self.inverse_start, inverse_start: self.x_start, len: self.len }
    }

    pub fn label(&self, v: &CyclicWord) -> Word {
        v.word().cyclic_subword(self.x_start, self.len)
    }

    /// The tripod side `(g, h)` this joint starts from.
    pub fn side(&self, n: usize) -> (usize, usize) {
        ((self.inverse_start + n - 1) % n, (self.x_start + self.len - 1) % n)
    }
}

#[derive(Debug, Clone)]
pub struct TripodEnumeration {
    pub edge_length: usize,
    pub copies: Vec<TripodCopy>,
    /// Number of abstract tripods with this edge length in the free group.
    pub abstract_count: BigUint,
}

/// `(2k)(2k-1)(2k-2)(2k-1)^{3(L-1)} / 3`.
pub fn abstract_tripod_count(rank: usize, edge_length: usize) -> BigUint {
    let k = rank as u64;
    let base = BigUint::from(2 * k) * BigUint::from(2 * k - 1) * BigUint::from(2 * k - 2);
    let tail = num_traits::pow(BigUint::from(2 * k - 1), 3 * (edge_length - 1));
    base * tail / BigUint::from(3u32)
}

/// Default edge length `⌊(1/2 − ε)·m⌋`, at least 1.
pub fn default_edge_length(n: usize, rank: usize, epsilon: f64) -> usize {
    let m = crate::sampling::scale(n, rank);
    (((0.5 - epsilon) * m).floor() as usize).max(1)
}

fn check_edge_length(n: usize, edge_length: usize) -> Result<()> {
    if edge_length == 0 || 2 * edge_length > n {
        return Err(Error::Range(format!("edge length {edge_length} outside 1..={}", n / 2)));
    }
    Ok(())
}

fn inverse_of(s: &[Letter]) -> Vec<Letter> {
    s.iter().rev().map(|l| l.inverse()).collect()
}

/// Calls `f(starts)` for every tripod copy, with `starts[0]` the smallest.
pub fn for_each_tripod<F: FnMut([usize; 3])>(v: &CyclicWord, edge_length: usize, mut f: F) -> Result<()> {
    let n = v.len();
    check_edge_length(n, edge_length)?;
    let l = edge_length;
    let doubled: Vec<Letter> = v.word().letters().iter().chain(v.word().letters()).copied().collect();
    let seg = |i: usize| &doubled[i..i + 2 * l];
    let mut by_prefix: HashMap<&[Letter], Vec<usize>> = HashMap::new();
    let mut by_segment: HashMap<&[Letter], Vec<usize>> = HashMap::new();
    for i in 0..n {
        by_prefix.entry(&doubled[i..i + l]).or_default().push(i);
        by_segment.entry(seg(i)).or_default().push(i);
    }
    let mut want = Vec::with_capacity(2 * l);
    for i1 in 0..n {
        let x = &doubled[i1..i1 + l];
        let y = inverse_of(&doubled[i1 + l..i1 + 2 * l]);
        let Some(i2s) = by_prefix.get(y.as_slice()) else { continue };
        let from = i2s.partition_point(|&i| i <= i1);
        for &i2 in &i2s[from..] {
            let z = inverse_of(&doubled[i2 + l..i2 + 2 * l]);
            if z[l - 1] == x[l - 1] || z[l - 1] == y[l - 1] || x[l - 1] == y[l - 1] {
                continue;
            }
            want.clear();
            want.extend_from_slice(&z);
            want.extend(inverse_of(x));
            let Some(i3s) = by_segment.get(want.as_slice()) else { continue };
            let from = i3s.partition_point(|&i| i <= i1);
            for &i3 in &i3s[from..] {
                f([i1, i2, i3]);
            }
        }
    }
    Ok(())
}

/// All tripod copies of edge length `L` in `v`, each listed once.
pub fn enumerate_tripods(v: &CyclicWord, edge_length: usize, rank: usize) -> Result<TripodEnumeration> {
    let l = edge_length;
    let w = v.word();
    let mut copies = Vec::new();
    for_each_tripod(v, l, |starts| {
        let [i1, i2, i3] = starts;
        copies.push(TripodCopy {
            x: w.cyclic_subword(i1, l),
            y: w.cyclic_subword(i2, l),
            z: w.cyclic_subword(i3, l),
            starts,
        });
    })?;
    copies.sort();
    Ok(TripodEnumeration { edge_length: l, copies, abstract_count: abstract_tripod_count(rank, l) })
}

/// Length of the maximal strip pairing `v[h - t]` with `v[g + 1 + t]`.
fn strip_length(v: &[Letter], g: usize, h: usize) -> usize {
    let n = v.len();
    let arc = (h + n - g) % n;
    let mut len = 0;
    while 2 * (len + 1) < arc + 1 && v[(h + n - len) % n] == v[(g + 1 + len) % n].inverse() {
        len += 1;
    }
    len
}

/// The maximal joint a tripod side `(g, h)` lands on.
pub fn joint_of_side(v: &CyclicWord, g: usize, h: usize) -> JointCopy {
    let n = v.len();
    let len = strip_length(v.word().letters(), g, h);
    JointCopy { x_start: (h + n + 1 - len) % n, inverse_start: (g + 1) % n, len }
}

/// Rational measure on tripod copies, keyed by their corners.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripodMeasure {
    pub weights: BTreeMap<[usize; 3], BigRational>,
}

impl TripodMeasure {
    pub fn uniform(v: &CyclicWord, edge_length: usize) -> Result<Self> {
        let n = v.len();
        let mut weights = BTreeMap::new();
        let one = BigRational::from_integer(1.into());
        for_each_tripod(v, edge_length, |s| {
            weights.insert(s.map(|i| (i + edge_length - 1) % n), one.clone());
        })?;
        Ok(TripodMeasure { weights })
    }

    pub fn add(&self, other: &TripodMeasure) -> TripodMeasure {
        let mut weights = self.weights.clone();
        for (k, w) in &other.weights {
            *weights.entry(*k).or_insert_with(BigRational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        TripodMeasure { weights }
    }

    pub fn mass(&self) -> BigRational {
        self.weights.values().fold(BigRational::zero(), |a, w| a + w)
    }

    /// Push-forward to maximal joints.
    pub fn boundary(&self, v: &CyclicWord) -> BTreeMap<JointCopy, BigRational> {
        let mut out: BTreeMap<JointCopy, BigRational> = BTreeMap::new();
        for (c, w) in &self.weights {
            for (g, h) in PieceSystem::triangle_sides(*c) {
                *out.entry(joint_of_side(v, g, h)).or_insert_with(BigRational::zero) += w;
            }
        }
        out.retain(|_, w| !w.is_zero());
        out
    }

    /// `|∂μ − ι∂μ|` in total variation.
    pub fn imbalance(&self, v: &CyclicWord) -> BigRational {
        joint_imbalance(&self.boundary(v))
    }
}

pub fn iota_image(b: &BTreeMap<JointCopy, BigRational>) -> BTreeMap<JointCopy, BigRational> {
    b.iter().map(|(j, w)| (j.iota(), w.clone())).collect()
}

pub fn joint_imbalance(b: &BTreeMap<JointCopy, BigRational>) -> BigRational {
    let zero = BigRational::zero();
    let mut total = BigRational::zero();
    for (j, w) in b {
        let other = b.get(&j.iota()).unwrap_or(&zero);
        total += (w - other).abs();
        if !b.contains_key(&j.iota()) {
            total += w;
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImbalanceReport {
    pub imbalance: BigRational,
    pub mass: BigRational,
    /// `|∂μ|`.
    pub boundary_mass: BigRational,
    /// Set when `v` has no tripods of this edge length.
    pub empty: bool,
}

impl ImbalanceReport {
    pub fn ratio(&self) -> f64 {
        if self.empty {
            return 0.0;
        }
        (&self.imbalance / &self.mass).to_f64().unwrap_or(f64::NAN)
    }
}

/// Imbalance of the uniform (unit weight) measure on tripod copies,
/// computed without storing the copies.
pub fn imbalance_statistic(v: &CyclicWord, edge_length: usize) -> Result<ImbalanceReport> {
    let n = v.len();
    let letters = v.word().letters();
    let mut sides: HashMap<(u32, u32), u64> = HashMap::new();
    let mut mass = 0u64;
    for_each_tripod(v, edge_length, |s| {
        mass += 1;
        let c = s.map(|i| ((i + edge_length - 1) % n) as u32);
        for (g, h) in [(c[0], c[1]), (c[1], c[2]), (c[2], c[0])] {
            *sides.entry((g, h)).or_default() += 1;
        }
    })?;
    if mass == 0 {
        let z = BigRational::zero();
        return Ok(ImbalanceReport { imbalance: z.clone(), mass: z.clone(), boundary_mass: z, empty: true });
    }
    let mut keys: Vec<(u32, u32)> = sides.keys().copied().collect();
    keys.sort_unstable();
    let mut imbalance = 0u64;
    for (g, h) in keys {
        let a = sides[&(g, h)];
        let (g, h) = (g as usize, h as usize);
        let len = strip_length(letters, g, h);
        let partner = (((h + n - len) % n) as u32, ((g + len) % n) as u32);
        match sides.get(&partner) {
            Some(&b) => imbalance += a.abs_diff(b),
            None => imbalance += 2 * a,
        }
    }
    let r = |x: u64| BigRational::from_integer(BigInt::from(x));
    Ok(ImbalanceReport { imbalance: r(imbalance), mass: r(mass), boundary_mass: r(3 * mass), empty: false })
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub fatgraph: Fatgraph,
    pub upper_bound: BigRational,
    pub multiplicity: u64,
    pub edge_length: usize,
    pub tripods: usize,
    pub matched_joints: usize,
    pub short_rectangles: usize,
    pub fill_triangles: usize,
}

/// Builds a fatgraph bounding `N·v` from all tripod copies of edge length
/// `L`: matched joints become long rectangles, positions are topped up to
/// the largest coverage `N` with short rectangles, and the remaining
/// interface imbalance is closed off with fans of triangles. Fails when `N`
/// would exceed `rounding_budget`.
pub fn assemble_upper_bound(v: &Word, edge_length: usize, rounding_budget: u64) -> Result<Assembly> {
    let rank = v.max_generator().map_or(1, |g| g + 1);
    let chain = Chain::single(rank, v);
    if !chain.homologically_trivial() {
        return Err(Error::NotABoundary(crate::lp::pieces::format_abelian(&chain)));
    }
    let (cw, _) = cyclic_reduce(v);
    if cw.is_empty() {
        return Ok(Assembly {
            fatgraph: Fatgraph::empty(rank),
            upper_bound: BigRational::zero(),
            multiplicity: 1,
            edge_length,
            tripods: 0,
            matched_joints: 0,
            short_rectangles: 0,
            fill_triangles: 0,
        });
    }
    let n = cw.len();
    let letters = cw.word().letters().to_vec();
    let sys = PieceSystem::positions_only(rank, vec![cw.word().clone()], vec![BigRational::from_integer(1.into())]);

    let mut tripods: Vec<[usize; 3]> = Vec::new();
    for_each_tripod(&cw, edge_length, |s| tripods.push(s.map(|i| (i + edge_length - 1) % n)))?;

    let mut side_count: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for t in &tripods {
        for s in PieceSystem::triangle_sides(*t) {
            *side_count.entry(s).or_default() += 1;
        }
    }
    let mut squares: BTreeMap<[usize; 2], u64> = BTreeMap::new();
    let mut coverage = vec![0u64; n];
    let mut matched_joints = 0;
    for (&(g, h), &a) in &side_count {
        let j = joint_of_side(&cw, g, h);
        let partner = j.iota().side(n);
        if partner <= (g, h) {
            continue;
        }
        let b = side_count.get(&partner).copied().unwrap_or(0);
        let m = a.min(b);
        if m == 0 {
            continue;
        }
        matched_joints += m as usize;
        for t in 0..j.len {
            let p = (h + n - t) % n;
            let q = (g + 1 + t) % n;
            *squares.entry([p.min(q), p.max(q)]).or_default() += m;
            coverage[p] += m;
            coverage[q] += m;
        }
    }
    let target = coverage.iter().copied().max().unwrap_or(0).max(1);
    if target > rounding_budget {
        return Err(Error::AssemblyFailure(format!("multiplicity {target} exceeds the budget {rounding_budget}")));
    }

    let short_rectangles = fill_coverage(&letters, &mut coverage, target, &mut squares)?;

    let mut net: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut push = |a: usize, b: usize, c: i64| {
        if a < b {
            *net.entry((a, b)).or_default() += c;
        } else if b < a {
            *net.entry((b, a)).or_default() -= c;
        }
    };
    for t in &tripods {
        for (a, b) in PieceSystem::triangle_sides(*t) {
            push(a, b, 1);
        }
    }
    for (s, &c) in &squares {
        for (a, b) in sys.square_sides(*s) {
            push(a, b, c as i64);
        }
    }
    // Every surplus interface (a, b) needs a triangle side (b, a).
    let mut required: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&(a, b), &c) in &net {
        let (from, to) = if c > 0 { (b, a) } else { (a, b) };
        for _ in 0..c.unsigned_abs() {
            required.entry(from).or_default().push(to);
        }
    }
    let mut fill: Vec<[usize; 3]> = Vec::new();
    for cycle in cycle_decomposition(required)? {
        for i in 1..cycle.len() - 1 {
            fill.push([cycle[0], cycle[i], cycle[i + 1]]);
        }
    }

    let mut triangles: BTreeMap<[usize; 3], u64> = BTreeMap::new();
    for t in tripods.iter().chain(&fill) {
        *triangles.entry(*t).or_default() += 1;
    }
    let sq: Vec<([usize; 2], u64)> = squares.into_iter().collect();
    let tr: Vec<([usize; 3], u64)> = triangles.into_iter().collect();
    let fatgraph = glue_pieces(&sys, &sq, &tr, target).map_err(|e| Error::AssemblyFailure(e.to_string()))?;
    let report = verify_fatgraph(&fatgraph, &chain);
    if !report.passed() {
        let why: Vec<String> = report.failures().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(Error::AssemblyFailure(why.join("; ")));
    }
    Ok(Assembly {
        upper_bound: fatgraph.scl_value(),
        fatgraph,
        multiplicity: target,
        edge_length,
        tripods: tripods.len(),
        matched_joints,
        short_rectangles,
        fill_triangles: fill.len(),
    })
}

/// Tops every position up to `target` with squares, laying the longest
/// available rectangle first. Ties go to the least `(p, q)`.
fn fill_coverage(
    letters: &[Letter],
    coverage: &mut [u64],
    target: u64,
    squares: &mut BTreeMap<[usize; 2], u64>,
) -> Result<usize> {
    let n = letters.len();
    let mut deficit: Vec<u64> = coverage.iter().map(|&c| target - c).collect();
    let run = |deficit: &[u64], p: usize, q: usize| {
        let mut s = 0;
        while 2 * s < n {
            let (a, b) = ((p + n - s) % n, (q + s) % n);
            if a == b || letters[b] != letters[a].inverse() || deficit[a] == 0 || deficit[b] == 0 {
                break;
            }
            s += 1;
        }
        s
    };
    let mut added = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for p in (0..n).filter(|&p| deficit[p] > 0) {
            for q in (0..n).filter(|&q| deficit[q] > 0 && letters[q] == letters[p].inverse()) {
                let len = run(&deficit, p, q);
                if best.map_or(true, |b| len > b.0) {
                    best = Some((len, p, q));
                }
            }
        }
        let Some((len, p, q)) = best else { break };
        for s in 0..len {
            let (a, b) = ((p + n - s) % n, (q + s) % n);
            if deficit[a] == 0 || deficit[b] == 0 {
                break;
            }
            *squares.entry([a.min(b), a.max(b)]).or_default() += 1;
            deficit[a] -= 1;
            deficit[b] -= 1;
            coverage[a] += 1;
            coverage[b] += 1;
            added += 1;
        }
    }
    if let Some(p) = deficit.iter().position(|&d| d > 0) {
        return Err(Error::AssemblyFailure(format!("no inverse letter left for position {p}")));
    }
    Ok(added)
}

/// Splits a balanced directed multigraph into simple cycles, each found as
/// a shortest cycle through the least remaining edge.
fn cycle_decomposition(mut out: BTreeMap<usize, Vec<usize>>) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    loop {
        out.retain(|_, v| !v.is_empty());
        let Some((&u, heads)) = out.iter_mut().next() else { break };
        heads.sort_unstable();
        let v = heads.remove(0);
        let path = shortest_path(&out, v, u)
            .ok_or_else(|| Error::AssemblyFailure("interface imbalance is not a union of cycles".into()))?;
        for w in path.windows(2) {
            let list = out.get_mut(&w[0]).unwrap();
            let k = list.iter().position(|&x| x == w[1]).unwrap();
            list.swap_remove(k);
        }
        let mut cycle = vec![u];
        cycle.extend(&path[..path.len() - 1]);
        cycles.push(cycle);
    }
    Ok(cycles)
}

fn shortest_path(out: &BTreeMap<usize, Vec<usize>>, from: usize, to: usize) -> Option<Vec<usize>> {
    if from == to {
        return Some(vec![from]);
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(a) = queue.pop_front() {
        let mut next: Vec<usize> = out.get(&a).cloned().unwrap_or_default();
        next.sort_unstable();
        next.dedup();
        for b in next {
            if parent.contains_key(&b) {
                continue;
            }
            parent.insert(b, a);
            if b == to {
                let mut path = vec![to];
                let mut c = to;
                while c != from {
                    c = parent[&c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Alphabet;

    fn cw(s: &str) -> CyclicWord {
        CyclicWord::new(&Alphabet::new(2).unwrap().word(s).unwrap()).unwrap()
    }

    #[test]
    fn abstract_counts() {
        assert_eq!(abstract_tripod_count(2, 1), BigUint::from(8u32));
        assert_eq!(abstract_tripod_count(2, 2), BigUint::from(8u32 * 27));
        // Ordered triples of distinct letters, up to rotation.
        let mut n = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if a != b && b != c && a != c {
                        n += 1;
                    }
                }
            }
        }
        assert_eq!(n / 3, 8);
    }

    #[test]
    fn range_errors() {
        assert!(matches!(enumerate_tripods(&cw("abAB"), 3, 2), Err(Error::Range(_))));
        assert!(matches!(enumerate_tripods(&cw("abAB"), 0, 2), Err(Error::Range(_))));
    }

    #[test]
    fn no_tripods_in_commutator() {
        let e = enumerate_tripods(&cw("abAB"), 1, 2).unwrap();
        assert!(e.copies.is_empty());
        let r = imbalance_statistic(&cw("abAB"), 1).unwrap();
        assert!(r.empty);
        assert!(r.mass.is_zero());
    }

    #[test]
    fn joint_iota_is_involution() {
        let v = cw("aabABBAbab");
        let n = v.len();
        for g in 0..n {
            for h in 0..n {
                let l = v.word().letters();
                if g == h || l[(h + 1) % n] == l[g].inverse() {
                    continue;
                }
                let j = joint_of_side(&v, g, h);
                if j.len == 0 {
                    continue;
                }
                let back = joint_of_side(&v, j.iota().side(n).0, j.iota().side(n).1);
                assert_eq!(back, j.iota());
                assert_eq!(back.iota(), j);
            }
        }
    }

    #[test]
    fn abab_assembly() {
        let v = Alphabet::new(2).unwrap().word("abAB").unwrap();
        let a = assemble_upper_bound(&v, 1, 16).unwrap();
        assert_eq!(a.upper_bound, BigRational::new(1.into(), 2.into()));
    }
}
