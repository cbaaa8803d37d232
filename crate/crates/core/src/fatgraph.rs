//! Fatgraphs assembled from square and triangle pieces, and the accounting
//! checks that make them certificates for upper bounds on scl.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Chain, CyclicWord, Letter, Word};
use crate::lp::pieces::PieceSystem;

/// An edge from slot `tail.1` of vertex `tail.0` to slot `head.1` of vertex
/// `head.0`. Reading the edge from tail to head gives `label`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatEdge {
    pub tail: (usize, usize),
    pub head: (usize, usize),
    pub label: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fatgraph {
    pub rank: usize,
    /// Valence of each vertex; slots `0..valence` are in cyclic order.
    pub valences: Vec<usize>,
    pub edges: Vec<FatEdge>,
    /// Annulus components, recorded by the label of their core.
    pub loops: Vec<Word>,
    pub multiplicity: u64,
    /// Euler characteristic claimed by whoever built the graph.
    pub euler_characteristic: i64,
}

impl Fatgraph {
    pub fn empty(rank: usize) -> Self {
        Fatgraph { rank, valences: Vec::new(), edges: Vec::new(), loops: Vec::new(), multiplicity: 1, euler_characteristic: 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.valences.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `V − E` computed from the structure.
    pub fn structural_euler(&self) -> i64 {
        self.valences.len() as i64 - self.edges.len() as i64
    }

    pub fn total_edge_length(&self) -> usize {
        self.edges.iter().map(|e| e.label.len()).sum::<usize>()
    }

    pub fn is_trivalent(&self) -> bool {
        self.valences.iter().all(|&v| v == 3)
    }

    /// `−χ / 2N`.
    pub fn scl_value(&self) -> BigRational {
        BigRational::new(BigInt::from(-self.euler_characteristic), BigInt::from(2 * self.multiplicity.max(1)))
    }

    /// Boundary components as letter sequences, in traversal order. Each
    /// component is read along the surface's boundary orientation.
    pub fn boundary(&self) -> Result<Vec<Vec<Letter>>> {
        let mut out_dart: Vec<Vec<Option<usize>>> = self.valences.iter().map(|&v| vec![None; v]).collect();
        let mut place = |slot: (usize, usize), dart: usize| -> Result<()> {
            let cell = out_dart
                .get_mut(slot.0)
                .and_then(|v| v.get_mut(slot.1))
                .ok_or_else(|| Error::Internal(format!("slot {slot:?} does not exist")))?;
            if cell.is_some() {
                return Err(Error::Internal(format!("slot {slot:?} used twice")));
            }
            *cell = Some(dart);
            Ok(())
        };
        for (e, edge) in self.edges.iter().enumerate() {
            place(edge.tail, 2 * e)?;
            place(edge.head, 2 * e + 1)?;
        }
        let mut out = Vec::new();
        for slots in &out_dart {
            if slots.iter().any(|s| s.is_none()) {
                return Err(Error::Internal("vertex slot without an edge".into()));
            }
        }
        let arrive = |d: usize| -> (usize, usize) {
            let e = &self.edges[d / 2];
            if d % 2 == 0 {
                e.head
            } else {
                e.tail
            }
        };
        let mut seen = vec![false; 2 * self.edges.len()];
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut letters = Vec::new();
            let mut d = start;
            loop {
                seen[d] = true;
                let e = &self.edges[d / 2];
                if d % 2 == 0 {
                    letters.extend_from_slice(e.label.letters());
                } else {
                    letters.extend(e.label.letters().iter().rev().map(|l| l.inverse()));
                }
                let (v, s) = arrive(d);
                d = out_dart[v][(s + 1) % self.valences[v]].unwrap();
                if d == start {
                    break;
                }
            }
            out.push(letters);
        }
        for w in &self.loops {
            out.push(w.letters().to_vec());
            out.push(w.inverse().letters().to_vec());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct EdgeView {
            tail: (usize, usize),
            head: (usize, usize),
            label: String,
        }
        #[derive(Serialize)]
        struct View {
            rank: usize,
            multiplicity: u64,
            euler_characteristic: i64,
            valences: Vec<usize>,
            edges: Vec<EdgeView>,
            loops: Vec<String>,
        }
        let view = View {
            rank: self.rank,
            multiplicity: self.multiplicity,
            euler_characteristic: self.euler_characteristic,
            valences: self.valences.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeView { tail: e.tail, head: e.head, label: e.label.to_string() })
                .collect(),
            loops: self.loops.iter().map(|w| w.to_string()).collect(),
        };
        serde_json::to_value(view).expect("fatgraph view serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub vertices: usize,
    pub edges: usize,
    pub multiplicity: u64,
    pub euler_characteristic: i64,
    /// `−χ/2N` as a string `p/q`.
    pub scl_value: String,
    /// Total edge length over the number of edges.
    pub average_edge_length: Option<f64>,
    /// Total edge length over `E + Σ(valence − 3)`.
    pub alternative_edge_length: Option<f64>,
    /// `n log(2k−1) / (12 ℓ log n)` for chains with a single word.
    pub predicted_scl: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

fn is_cyclically_reduced(letters: &[Letter]) -> bool {
    let n = letters.len();
    (0..n).all(|i| letters[(i + 1) % n] != letters[i].inverse())
}

pub fn verify_fatgraph(y: &Fatgraph, chain: &Chain) -> VerificationReport {
    let mut checks = Vec::new();
    let target = chain.normalize();
    let n_mult = BigRational::from_integer(BigInt::from(y.multiplicity));

    match y.boundary() {
        Err(e) => checks.push(check("boundary", false, e.to_string())),
        Ok(components) => {
            let mut degrees: BTreeMap<CyclicWord, BigRational> = BTreeMap::new();
            let mut problems = Vec::new();
            let mut capped = 0;
            for comp in &components {
                // A letterless boundary circle bounds a disc; capping it
                // never increases -χ⁻, so the bound stands.
                if comp.is_empty() {
                    capped += 1;
                    continue;
                }
                if !is_cyclically_reduced(comp) {
                    problems.push(format!("boundary {} is not reduced", Word::from_letters_unchecked(comp)));
                    continue;
                }
                let cw = CyclicWord::new(&Word::from_letters_unchecked(comp)).expect("cyclically reduced");
                let (root, p) = cw.root();
                *degrees.entry(root).or_insert_with(BigRational::zero) += BigRational::from_integer(BigInt::from(p));
            }
            let mut expected: BTreeMap<CyclicWord, BigRational> = BTreeMap::new();
            for (r, w) in target.terms() {
                let cw = CyclicWord::new(w).expect("normalized chain");
                expected.insert(cw, r * &n_mult);
            }
            if degrees != expected {
                let show = |m: &BTreeMap<CyclicWord, BigRational>| {
                    m.iter().map(|(w, r)| format!("{r}*{w}")).collect::<Vec<_>>().join(" + ")
                };
                problems.push(format!("boundary {} differs from N*c = {}", show(&degrees), show(&expected)));
            }
            checks.push(check("boundary", problems.is_empty(), problems.join("; ")));
            checks.push(check("capped components", true, format!("{capped} letterless boundary circles")));

            let boundary_len: usize = components.iter().map(|c| c.len()).sum();
            let edge_len = y.total_edge_length() + y.loops.iter().map(|w| w.len()).sum::<usize>();
            checks.push(check(
                "boundary length",
                boundary_len == 2 * edge_len,
                format!("boundary length {boundary_len}, edge length {edge_len}"),
            ));
        }
    }

    let v = y.vertex_count() as i64;
    let e = y.edge_count() as i64;
    checks.push(check(
        "euler characteristic",
        y.euler_characteristic == v - e,
        format!("claimed {}, V - E = {}", y.euler_characteristic, v - e),
    ));
    if y.is_trivalent() {
        let ok = 2 * e == 3 * v && 3 * -y.euler_characteristic == e;
        checks.push(check("trivalent accounting", ok, format!("V = {v}, E = {e}")));
    }
    let ends: usize = y.valences.iter().sum();
    checks.push(check("edge ends", ends == 2 * y.edges.len(), format!("valence sum {ends}, edges {e}")));

    let total = y.total_edge_length() as f64;
    let average_edge_length = (e > 0).then(|| total / e as f64);
    let extra: i64 = y.valences.iter().map(|&d| d as i64 - 3).sum();
    let alternative_edge_length = (e + extra > 0).then(|| total / (e + extra) as f64);
    let predicted_scl = match (target.terms(), average_edge_length) {
        ([(r, w)], Some(lm)) if lm > 0.0 && w.len() > 1 => {
            let n = w.len() as f64;
            let base = (2 * y.rank - 1) as f64;
            let m = n.ln() / base.ln();
            let ell = lm / m;
            Some(r.to_f64().unwrap_or(1.0) * n * base.ln() / (12.0 * ell * n.ln()))
        }
        _ => None,
    };
    VerificationReport {
        checks,
        vertices: y.vertex_count(),
        edges: y.edge_count(),
        multiplicity: y.multiplicity,
        euler_characteristic: y.euler_characteristic,
        scl_value: y.scl_value().to_string(),
        average_edge_length,
        alternative_edge_length,
        predicted_scl,
    }
}

/// Glues integral multiplicities of pieces into a fatgraph. Interfaces are
/// paired in sorted order; square chains become labelled edges and closed
/// square chains become annuli.
pub fn glue_pieces(
    sys: &PieceSystem,
    squares: &[([usize; 2], u64)],
    triangles: &[([usize; 3], u64)],
    multiplicity: u64,
) -> Result<Fatgraph> {
    let mut sq: Vec<[usize; 2]> = Vec::new();
    for &(s, c) in squares {
        sq.extend(std::iter::repeat(s).take(c as usize));
    }
    let mut tri: Vec<[usize; 3]> = Vec::new();
    for &(t, c) in triangles {
        tri.extend(std::iter::repeat(t).take(c as usize));
    }
    let s_sides = 2 * sq.len();
    let total = s_sides + 3 * tri.len();
    let side_key = |id: usize| -> (usize, usize) {
        if id < s_sides {
            sys.square_sides(sq[id / 2])[id % 2]
        } else {
            let k = id - s_sides;
            PieceSystem::triangle_sides(tri[k / 3])[k % 3]
        }
    };
    let mut by_key: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for id in 0..total {
        by_key.entry(side_key(id)).or_default().push(id);
    }
    let mut partner = vec![usize::MAX; total];
    for (&(a, b), ids) in &by_key {
        if a == b {
            if ids.len() % 2 == 1 {
                return Err(Error::Internal(format!("odd number of interfaces ({a},{a})")));
            }
            for pair in ids.chunks(2) {
                partner[pair[0]] = pair[1];
                partner[pair[1]] = pair[0];
            }
        } else if a < b {
            let empty = Vec::new();
            let other = by_key.get(&(b, a)).unwrap_or(&empty);
            if other.len() != ids.len() {
                return Err(Error::Internal(format!("unbalanced interfaces ({a},{b})")));
            }
            for (&x, &y) in ids.iter().zip(other) {
                partner[x] = y;
                partner[y] = x;
            }
        } else if !by_key.contains_key(&(b, a)) {
            return Err(Error::Internal(format!("unbalanced interfaces ({b},{a})")));
        }
    }

    let mut square_used = vec![false; sq.len()];
    let mut side_used = vec![false; total];
    let mut edges = Vec::new();
    for start in s_sides..total {
        if side_used[start] {
            continue;
        }
        side_used[start] = true;
        let mut letters = Vec::new();
        let mut cur = partner[start];
        while cur < s_sides {
            letters.push(sys.letter(sys.letter_entered(side_key(cur))));
            square_used[cur / 2] = true;
            cur = partner[cur ^ 1];
        }
        side_used[cur] = true;
        let slot = |id: usize| ((id - s_sides) / 3, (id - s_sides) % 3);
        edges.push(FatEdge { tail: slot(start), head: slot(cur), label: Word::from_letters_unchecked(&letters) });
    }
    let mut loops = Vec::new();
    for i in 0..sq.len() {
        if square_used[i] {
            continue;
        }
        let mut letters = Vec::new();
        let mut cur = 2 * i;
        loop {
            letters.push(sys.letter(sys.letter_entered(side_key(cur))));
            square_used[cur / 2] = true;
            cur = partner[cur ^ 1];
            if cur == 2 * i {
                break;
            }
        }
        loops.push(Word::from_letters_unchecked(&letters));
    }
    let valences = vec![3; tri.len()];
    let euler = valences.len() as i64 - edges.len() as i64;
    Ok(Fatgraph { rank: sys.rank(), valences, edges, loops, multiplicity, euler_characteristic: euler })
}

/// Scales rational multiplicities to integers: the least common denominator,
/// doubled when some gap carries an odd number of self-interfaces.
pub fn integral_scaling(
    squares: &[([usize; 2], BigRational)],
    triangles: &[([usize; 3], BigRational)],
) -> Result<(u64, Vec<([usize; 2], u64)>, Vec<([usize; 3], u64)>)> {
    let mut lcm = BigInt::from(1);
    for r in squares.iter().map(|s| &s.1).chain(triangles.iter().map(|t| &t.1)) {
        lcm = num_integer::Integer::lcm(&lcm, r.denom());
    }
    let mut n = lcm.to_u64().ok_or_else(|| Error::Capacity("common denominator too large".into()))?;
    let scale = |r: &BigRational, n: u64| -> Result<u64> {
        (r * BigRational::from_integer(BigInt::from(n)))
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Capacity("multiplicity too large".into()))
    };
    let mut self_sides: HashMap<usize, u64> = HashMap::new();
    for (t, r) in triangles {
        let c = scale(r, n)?;
        for (a, b) in PieceSystem::triangle_sides(*t) {
            if a == b {
                *self_sides.entry(a).or_default() += c;
            }
        }
    }
    if self_sides.values().any(|c| c % 2 == 1) {
        n *= 2;
    }
    let sq = squares.iter().map(|(s, r)| Ok((*s, scale(r, n)?))).collect::<Result<Vec<_>>>()?;
    let tr = triangles.iter().map(|(t, r)| Ok((*t, scale(r, n)?))).collect::<Result<Vec<_>>>()?;
    Ok((n, sq, tr))
}
