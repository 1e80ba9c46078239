//! Minimum-weight perfect-matching decoding.
//!
//! Defects are paired along lattice shortest paths. Candidate pairs come
//! from a sparsifier; the matching itself is an exact blossom solve over
//! those candidates, retried on the complete graph whenever the sparse
//! candidate set admits no perfect matching.

mod blossom;
mod delaunay;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::code::{cut_parities, syndrome, ErrorChain, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::distance::{BfsTree, UNREACHED};
use crate::lattice::PeriodicLattice;

pub use blossom::max_weight_matching;

/// Largest defect count accepted by [`brute_force_matching`].
pub const BRUTE_FORCE_MAX: usize = 12;

/// How candidate pairs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Sparsifier {
    Complete,
    /// Each defect links to its `k` nearest defects by graph distance; the
    /// relation is symmetrized.
    Knn(usize),
    /// Edges of the flat-torus Delaunay triangulation of defect positions.
    Delaunay,
}

impl Default for Sparsifier {
    fn default() -> Self {
        Sparsifier::Knn(6)
    }
}

impl fmt::Display for Sparsifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sparsifier::Complete => write!(f, "complete"),
            Sparsifier::Knn(k) => write!(f, "knn({k})"),
            Sparsifier::Delaunay => write!(f, "delaunay"),
        }
    }
}

impl FromStr for Sparsifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "complete" => return Ok(Sparsifier::Complete),
            "delaunay" => return Ok(Sparsifier::Delaunay),
            "knn" => return Ok(Sparsifier::default()),
            _ => {}
        }
        let k = t
            .strip_prefix("knn")
            .map(|r| r.trim_start_matches(['(', ':', '-', '=']).trim_end_matches(')'))
            .and_then(|r| r.parse::<usize>().ok());
        match k {
            Some(k) if k >= 1 => Ok(Sparsifier::Knn(k)),
            _ => Err(Error::OutOfRange(format!(
                "unknown sparsifier {s:?} (expected complete, delaunay or knn(k))"
            ))),
        }
    }
}

impl From<Sparsifier> for String {
    fn from(s: Sparsifier) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Sparsifier {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A candidate pair: node indices `a < b` and their graph distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateEdge {
    pub a: usize,
    pub b: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectGraph {
    nodes: Vec<usize>,
    edges: Vec<CandidateEdge>,
    sparsifier: Sparsifier,
}

impl DefectGraph {
    /// Defect vertex ids, ascending.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Candidates sorted by `(a, b)`.
    pub fn edges(&self) -> &[CandidateEdge] {
        &self.edges
    }

    /// The sparsifier that produced the candidate set. After a fallback this
    /// is [`Sparsifier::Complete`].
    pub fn sparsifier(&self) -> Sparsifier {
        self.sparsifier
    }

    /// Stored shortest path of candidate `k`, as edge ids from `b` to `a`.
    pub fn path(&self, lat: &PeriodicLattice, k: usize) -> Vec<usize> {
        let c = self.edges[k];
        shortest_path(lat, &mut BfsTree::new(lat.num_vertices()), self.nodes[c.a], self.nodes[c.b])
    }
}

/// Defect pairs as vertex ids `(u, v)`, `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    LogicalFailure,
}

impl Outcome {
    pub fn is_success(self) -> bool {
        self == Outcome::Success
    }

    /// Readout value: +1 on success, −1 on a logical failure.
    pub fn sign(self) -> f64 {
        if self.is_success() {
            1.0
        } else {
            -1.0
        }
    }
}

/// Reusable decoding workspace bound to one lattice.
pub struct Decoder<'a> {
    lat: &'a PeriodicLattice,
    sparsifier: Sparsifier,
    tree: BfsTree,
    node_of: Vec<u32>,
}

const NOT_A_NODE: u32 = u32::MAX;

impl<'a> Decoder<'a> {
    pub fn new(lat: &'a PeriodicLattice, sparsifier: Sparsifier) -> Self {
        Decoder {
            lat,
            sparsifier,
            tree: BfsTree::new(lat.num_vertices()),
            node_of: vec![NOT_A_NODE; lat.num_vertices()],
        }
    }

    pub fn lattice(&self) -> &'a PeriodicLattice {
        self.lat
    }

    pub fn sparsifier(&self) -> Sparsifier {
        self.sparsifier
    }

    /// Candidate graph without the perfect-matching check.
    fn candidates(&mut self, syn: &Syndrome, sparsifier: Sparsifier) -> Result<DefectGraph> {
        let nodes = syn.defects().to_vec();
        if nodes.len() % 2 == 1 {
            return Err(Error::ContractViolation(format!(
                "cannot pair an odd number ({}) of defects",
                nodes.len()
            )));
        }
        if let Some(&v) = nodes.iter().find(|&&v| v >= self.lat.num_vertices()) {
            return Err(Error::OutOfRange(format!("defect {v} is not a vertex of the lattice")));
        }
        let n = nodes.len();
        for (i, &v) in nodes.iter().enumerate() {
            self.node_of[v] = i as u32;
        }
        // Small syndromes are always matched exactly over every pair.
        let sparsifier = match sparsifier {
            Sparsifier::Knn(k) if k + 1 >= n => Sparsifier::Complete,
            Sparsifier::Delaunay if n <= 4 => Sparsifier::Complete,
            s => s,
        };
        let mut edges = Vec::new();
        match sparsifier {
            Sparsifier::Complete => {
                for i in 0..n {
                    let mut left = n - 1 - i;
                    let node_of = &self.node_of;
                    if left == 0 {
                        break;
                    }
                    self.tree.run(self.lat, nodes[i], |v, d| {
                        let j = node_of[v];
                        if j != NOT_A_NODE && j as usize > i {
                            left -= 1;
                            if left == 0 {
                                return Some(d);
                            }
                        }
                        None
                    });
                    for (j, &v) in nodes.iter().enumerate().skip(i + 1) {
                        let d = self.tree.dist[v];
                        if d == UNREACHED {
                            return Err(Error::MalformedLattice("lattice is disconnected".into()));
                        }
                        edges.push(CandidateEdge { a: i, b: j, weight: d });
                    }
                }
            }
            Sparsifier::Knn(k) => {
                let mut found: Vec<(u32, usize)> = Vec::new();
                for (i, &start) in nodes.iter().enumerate() {
                    found.clear();
                    let node_of = &self.node_of;
                    let mut count = 0;
                    self.tree.run(self.lat, start, |v, d| {
                        let j = node_of[v];
                        if j != NOT_A_NODE && j as usize != i {
                            found.push((d, j as usize));
                            count += 1;
                            if count == k {
                                return Some(d);
                            }
                        }
                        None
                    });
                    found.sort_unstable();
                    for &(d, j) in found.iter().take(k) {
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        edges.push(CandidateEdge { a, b, weight: d });
                    }
                }
            }
            Sparsifier::Delaunay => {
                let positions: Vec<[f64; 2]> = nodes.iter().map(|&v| self.lat.position_f64(v)).collect();
                let pairs = delaunay::torus_delaunay_pairs(&positions);
                if pairs.is_empty() {
                    for v in &nodes {
                        self.node_of[*v] = NOT_A_NODE;
                    }
                    return self.candidates(syn, Sparsifier::Complete);
                }
                let mut neighbours = vec![Vec::new(); n];
                for &(a, b) in &pairs {
                    neighbours[a].push(b);
                }
                let upper = |i: usize, list: &Vec<usize>| list.iter().filter(|&&j| j > i).count();
                for i in 0..n {
                    let mut left = upper(i, &neighbours[i]);
                    if left == 0 {
                        continue;
                    }
                    let targets = &neighbours[i];
                    let node_of = &self.node_of;
                    self.tree.run(self.lat, nodes[i], |v, d| {
                        let j = node_of[v];
                        if j != NOT_A_NODE && j as usize > i && targets.contains(&(j as usize)) {
                            left -= 1;
                            if left == 0 {
                                return Some(d);
                            }
                        }
                        None
                    });
                    for &j in targets.iter().filter(|&&j| j > i) {
                        edges.push(CandidateEdge { a: i, b: j, weight: self.tree.dist[nodes[j]] });
                    }
                }
            }
        }
        for v in &nodes {
            self.node_of[*v] = NOT_A_NODE;
        }
        edges.sort_unstable_by_key(|e| (e.a, e.b));
        edges.dedup_by_key(|e| (e.a, e.b));
        Ok(DefectGraph { nodes, edges, sparsifier })
    }

    /// Candidate graph for `syn`, densified to complete if the sparse
    /// candidates admit no perfect matching.
    pub fn build(&mut self, syn: &Syndrome) -> Result<DefectGraph> {
        let graph = self.candidates(syn, self.sparsifier)?;
        if graph.sparsifier == Sparsifier::Complete || solve(&graph).is_some() {
            return Ok(graph);
        }
        self.candidates(syn, Sparsifier::Complete)
    }

    /// Minimum-weight pairing of the defects in `syn`.
    pub fn matching(&mut self, syn: &Syndrome) -> Result<Matching> {
        let graph = self.candidates(syn, self.sparsifier)?;
        if let Some(m) = solve(&graph) {
            return Ok(m);
        }
        let graph = self.candidates(syn, Sparsifier::Complete)?;
        solve(&graph).ok_or(Error::NoPerfectMatching)
    }

    pub fn correction(&mut self, matching: &Matching) -> ErrorChain {
        let mut chain = ErrorChain::empty(self.lat.num_edges());
        for &(u, v) in &matching.pairs {
            for e in shortest_path(self.lat, &mut self.tree, u, v) {
                chain.flip(e);
            }
        }
        chain
    }

    /// Correction chain for the syndrome of `error`.
    pub fn decode(&mut self, error: &ErrorChain) -> Result<ErrorChain> {
        let syn = syndrome(self.lat, error);
        let m = self.matching(&syn)?;
        Ok(self.correction(&m))
    }

    pub fn judge(&mut self, error: &ErrorChain) -> Outcome {
        let correction = self.decode(error).expect("a syndrome always has even size and a perfect matching");
        if cut_parities(self.lat, &error.compose(&correction)).is_trivial() {
            Outcome::Success
        } else {
            Outcome::LogicalFailure
        }
    }
}

/// Stored shortest path between `u` and `v`: edge ids from `v` to `u`.
fn shortest_path(lat: &PeriodicLattice, tree: &mut BfsTree, u: usize, v: usize) -> Vec<usize> {
    tree.run(lat, u, |w, d| (w == v).then_some(d));
    let mut out = Vec::new();
    tree.path_to(lat, v, &mut out);
    out
}

/// Exact blossom solve over the candidate edges; `None` without a perfect
/// matching.
fn solve(graph: &DefectGraph) -> Option<Matching> {
    let n = graph.nodes.len();
    if n == 0 {
        return Some(Matching::default());
    }
    let top = graph.edges.iter().map(|e| e.weight as i64).max().unwrap_or(0) + 1;
    let input: Vec<(usize, usize, i64)> = graph.edges.iter().map(|e| (e.a, e.b, top - e.weight as i64)).collect();
    let mate = max_weight_matching(n, &input, true);
    if mate.iter().any(Option::is_none) {
        return None;
    }
    let mut pairs = Vec::with_capacity(n / 2);
    let mut total = 0u64;
    for e in &graph.edges {
        if mate[e.a] == Some(e.b) {
            pairs.push((graph.nodes[e.a], graph.nodes[e.b]));
            total += e.weight as u64;
        }
    }
    Some(Matching { pairs, total_weight: total })
}

pub fn build_defect_graph(lat: &PeriodicLattice, syn: &Syndrome, sparsifier: Sparsifier) -> Result<DefectGraph> {
    Decoder::new(lat, sparsifier).build(syn)
}

/// Minimum-weight perfect matching restricted to the candidate edges.
pub fn mwpm(graph: &DefectGraph) -> Result<Matching> {
    solve(graph).ok_or(Error::NoPerfectMatching)
}

/// Exhaustive minimum over all perfect matchings of the candidate edges
/// (the global optimum when `graph` is complete). Among equal totals the
/// lexicographically smallest pairing wins.
pub fn brute_force_matching(graph: &DefectGraph) -> Result<Matching> {
    let n = graph.nodes.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge(format!("brute-force matching of {n} defects (limit {BRUTE_FORCE_MAX})")));
    }
    let mut w = vec![vec![None; n]; n];
    for e in &graph.edges {
        w[e.a][e.b] = Some(e.weight as u64);
        w[e.b][e.a] = Some(e.weight as u64);
    }

    fn go(w: &[Vec<Option<u64>>], used: &mut [bool], cur: &mut Vec<(usize, usize)>, cost: u64, best: &mut Option<(u64, Vec<(usize, usize)>)>) {
        let Some(i) = used.iter().position(|u| !u) else {
            if best.as_ref().is_none_or(|b| cost < b.0) {
                *best = Some((cost, cur.clone()));
            }
            return;
        };
        used[i] = true;
        for j in i + 1..w.len() {
            if let (false, Some(c)) = (used[j], w[i][j]) {
                used[j] = true;
                cur.push((i, j));
                go(w, used, cur, cost + c, best);
                cur.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }

    let mut best = None;
    go(&w, &mut vec![false; n], &mut Vec::new(), 0, &mut best);
    let (total, pairs) = best.ok_or(Error::NoPerfectMatching)?;
    Ok(Matching {
        pairs: pairs.into_iter().map(|(a, b)| (graph.nodes[a], graph.nodes[b])).collect(),
        total_weight: total,
    })
}

/// One stored shortest path per matched pair, composed.
pub fn correction_chain(lat: &PeriodicLattice, matching: &Matching) -> ErrorChain {
    Decoder::new(lat, Sparsifier::Complete).correction(matching)
}

/// Decode with the default sparsifier and report whether the residual chain
/// is homologically trivial.
pub fn decode_and_judge(lat: &PeriodicLattice, error: &ErrorChain) -> Outcome {
    decode_and_judge_with(lat, error, Sparsifier::default())
}

pub fn decode_and_judge_with(lat: &PeriodicLattice, error: &ErrorChain, sparsifier: Sparsifier) -> Outcome {
    Decoder::new(lat, sparsifier).judge(error)
}
