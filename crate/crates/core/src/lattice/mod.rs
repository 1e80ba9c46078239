//! Periodic lattices embedded on the flat unit torus.
//!
//! A lattice is held as a combinatorial map. Edge `e` owns two darts, `2e`
//! running from `endpoints[0]` to `endpoints[1]` and `2e + 1` running back.
//! Every vertex keeps its darts in counter-clockwise order (the rotation
//! system); faces are the orbits of "arrive at a vertex, leave by the dart
//! just clockwise of the one you came in on", which traces each face
//! counter-clockwise with the face on the left.
//!
//! Vertex positions are exact rationals in `[0, 1)²` and each edge carries the
//! exact displacement from its first endpoint to its second, so wrap-around
//! (and therefore homology) is never subject to rounding.

pub(crate) mod distance;
mod families;
mod io;

pub use distance::DistanceTable;
pub use io::LatticeFile;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact torus coordinate.
pub type Coord = Ratio<i64>;

/// Exact average degree.
pub type Degree = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Square,
    Triangular,
    /// Honeycomb, built as the dual of the triangular lattice.
    Hexagonal,
    /// Square lattice with two edges removed from every 3x3 block.
    ReducedSquare,
    /// Square lattice with two face-splitting chords added to every 3x3 block.
    Union,
    /// Square lattice whose every edge is replaced by `n` parallel sub-edges.
    Subedge(u32),
}

impl Family {
    pub const ALL_FIXED: [Family; 5] = [
        Family::Square,
        Family::Triangular,
        Family::Hexagonal,
        Family::ReducedSquare,
        Family::Union,
    ];

    /// Sizes must be a multiple of this.
    pub fn cell_size(self) -> usize {
        match self {
            Family::ReducedSquare | Family::Union => 3,
            _ => 1,
        }
    }

    pub fn check_size(self, size: usize) -> Result<()> {
        families::check_size(self, size)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Square => write!(f, "square"),
            Family::Triangular => write!(f, "triangular"),
            Family::Hexagonal => write!(f, "hexagonal"),
            Family::ReducedSquare => write!(f, "reduced_square"),
            Family::Union => write!(f, "union"),
            Family::Subedge(n) => write!(f, "subedge({n})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "square" => return Ok(Family::Square),
            "triangular" => return Ok(Family::Triangular),
            "hexagonal" | "honeycomb" => return Ok(Family::Hexagonal),
            "reduced_square" | "reduced-square" => return Ok(Family::ReducedSquare),
            "union" => return Ok(Family::Union),
            _ => {}
        }
        // subedge(n), subedge:n or subedge-n
        if let Some(rest) = lower.strip_prefix("subedge") {
            let digits = rest
                .trim_start_matches(['(', ':', '-', '_'])
                .trim_end_matches(')');
            if let Ok(n) = digits.parse::<u32>() {
                return Ok(Family::Subedge(n));
            }
        }
        Err(Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which lattice of the primal/dual pair carries the defects being simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Primal,
    Dual,
}

impl Sector {
    pub fn flip(self) -> Sector {
        match self {
            Sector::Primal => Sector::Dual,
            Sector::Dual => Sector::Primal,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Primal => "primal",
            Sector::Dual => "dual",
        })
    }
}

impl FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "primal" => Ok(Sector::Primal),
            "dual" => Ok(Sector::Dual),
            other => Err(Error::OutOfRange(format!("sector `{other}` (expected primal or dual)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub endpoints: [usize; 2],
    /// Displacement from `endpoints[0]` to `endpoints[1]`, unwrapped.
    pub shift: [Coord; 2],
    /// How many times the straight segment wraps across `x = 0` and `y = 0`.
    pub winding: [i8; 2],
}

/// Degree distribution of one unit cell: `(degree, weight)` with weights
/// summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitCellSpec {
    pub degree_multiset: Vec<(usize, Ratio<i64>)>,
}

impl UnitCellSpec {
    pub fn average_degree(&self) -> Degree {
        self.degree_multiset
            .iter()
            .map(|&(d, w)| w * Ratio::from_integer(d as i64))
            .sum()
    }
}

#[derive(Clone, Debug)]
pub struct PeriodicLattice {
    family: Family,
    sector: Sector,
    linear_size: usize,
    positions: Vec<[Coord; 2]>,
    edges: Vec<Edge>,
    faces: Vec<Vec<usize>>,
    face_darts: Vec<Vec<usize>>,
    dart_face: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    rotation_index: Vec<usize>,
    /// `(neighbour, edge)` per vertex, in rotation order.
    incidence: Vec<Vec<(usize, usize)>>,
    /// Edges crossing the reference cuts at `x = 0` and `y = 0`.
    cuts: [FixedBitSet; 2],
}

#[inline]
pub(crate) fn wrap(x: Coord) -> Coord {
    x - x.floor()
}

impl PeriodicLattice {
    /// Generate a lattice of the given family with `size` cells per torus
    /// direction.
    pub fn generate(family: Family, size: usize) -> Result<Self> {
        families::generate(family, size)
    }

    /// Assemble a lattice from positions, edges and the counter-clockwise
    /// dart order around each vertex. Faces are traced from the rotation.
    pub(crate) fn from_rotation(
        family: Family,
        sector: Sector,
        linear_size: usize,
        positions: Vec<[Coord; 2]>,
        mut edges: Vec<Edge>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n_vertices = positions.len();
        let n_darts = 2 * edges.len();
        if rotation.len() != n_vertices {
            return Err(Error::MalformedLattice("rotation length differs from vertex count".into()));
        }
        let mut rotation_index = vec![usize::MAX; n_darts];
        for (v, darts) in rotation.iter().enumerate() {
            for (k, &d) in darts.iter().enumerate() {
                if d >= n_darts || rotation_index[d] != usize::MAX {
                    return Err(Error::MalformedLattice(format!("dart {d} repeated or out of range")));
                }
                if edges[d >> 1].endpoints[d & 1] != v {
                    return Err(Error::MalformedLattice(format!("dart {d} listed at vertex {v}")));
                }
                rotation_index[d] = k;
            }
        }
        if rotation_index.contains(&usize::MAX) {
            return Err(Error::MalformedLattice("dart missing from rotation system".into()));
        }

        for (e, edge) in edges.iter_mut().enumerate() {
            let [a, b] = edge.endpoints;
            if a == b {
                return Err(Error::MalformedLattice(format!("edge {e} is a self-loop")));
            }
            let mut winding = [0i8; 2];
            for k in 0..2 {
                let end = positions[a][k] + edge.shift[k];
                if wrap(end) != positions[b][k] {
                    return Err(Error::MalformedLattice(format!(
                        "edge {e}: shift inconsistent with endpoint positions"
                    )));
                }
                winding[k] = end.floor().to_integer() as i8;
            }
            edge.winding = winding;
        }

        let mut lat = PeriodicLattice {
            family,
            sector,
            linear_size,
            positions,
            edges,
            faces: Vec::new(),
            face_darts: Vec::new(),
            dart_face: vec![usize::MAX; n_darts],
            rotation,
            rotation_index,
            incidence: Vec::new(),
            cuts: [FixedBitSet::new(), FixedBitSet::new()],
        };

        for start in 0..n_darts {
            if lat.dart_face[start] != usize::MAX {
                continue;
            }
            let id = lat.face_darts.len();
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                lat.dart_face[d] = id;
                orbit.push(d);
                d = lat.face_successor(d);
                if d == start {
                    break;
                }
            }
            lat.faces.push(orbit.iter().map(|d| d >> 1).collect());
            lat.face_darts.push(orbit);
        }

        lat.incidence = lat
            .rotation
            .iter()
            .map(|darts| darts.iter().map(|&d| (lat.dart_target(d), d >> 1)).collect())
            .collect();

        for axis in 0..2 {
            let mut cut = FixedBitSet::with_capacity(lat.num_edges());
            for (e, edge) in lat.edges.iter().enumerate() {
                cut.set(e, edge.winding[axis] % 2 != 0);
            }
            lat.cuts[axis] = cut;
        }

        lat.validate()?;
        Ok(lat)
    }

    fn validate(&self) -> Result<()> {
        let (v, e, f) = (self.num_vertices(), self.num_edges(), self.num_faces());
        if v + f != e {
            return Err(Error::MalformedLattice(format!(
                "Euler characteristic {} != 0 (V={v}, E={e}, F={f})",
                v as i64 - e as i64 + f as i64
            )));
        }
        if let Some(v) = (0..v).find(|&v| self.degree(v) < 2) {
            return Err(Error::MalformedLattice(format!("vertex {v} has degree < 2")));
        }
        if !self.is_connected() {
            return Err(Error::MalformedLattice("graph is disconnected".into()));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        if self.num_vertices() == 0 {
            return false;
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.incidence[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.num_vertices()
    }

    /// Next dart along the face to the left of `d`.
    fn face_successor(&self, d: usize) -> usize {
        let back = d ^ 1;
        let v = self.dart_origin(back);
        let ring = &self.rotation[v];
        let k = self.rotation_index[back];
        ring[(k + ring.len() - 1) % ring.len()]
    }

    #[inline]
    pub fn dart_origin(&self, d: usize) -> usize {
        self.edges[d >> 1].endpoints[d & 1]
    }

    #[inline]
    pub fn dart_target(&self, d: usize) -> usize {
        self.edges[d >> 1].endpoints[1 - (d & 1)]
    }

    fn dart_shift(&self, d: usize) -> [Coord; 2] {
        let s = self.edges[d >> 1].shift;
        if d & 1 == 0 {
            s
        } else {
            [-s[0], -s[1]]
        }
    }

    /// Exchange vertices and faces. Dual vertex `f` sits at the centroid of
    /// primal face `f`, dual edge `e` crosses primal edge `e`, and dual face
    /// `v` surrounds primal vertex `v`.
    pub fn dual(&self) -> PeriodicLattice {
        // Centroid of each face relative to the origin of each of its darts.
        let mut centroid_offset = vec![[Coord::from_integer(0); 2]; 2 * self.num_edges()];
        let mut dual_positions = Vec::with_capacity(self.num_faces());
        for darts in &self.face_darts {
            let mut unwrapped = Vec::with_capacity(darts.len());
            let mut cursor = [Coord::from_integer(0); 2];
            for &d in darts {
                unwrapped.push(cursor);
                let s = self.dart_shift(d);
                cursor = [cursor[0] + s[0], cursor[1] + s[1]];
            }
            let k = Coord::from_integer(darts.len() as i64);
            let centre = [
                unwrapped.iter().map(|p| p[0]).sum::<Coord>() / k,
                unwrapped.iter().map(|p| p[1]).sum::<Coord>() / k,
            ];
            for (&d, p) in darts.iter().zip(&unwrapped) {
                centroid_offset[d] = [centre[0] - p[0], centre[1] - p[1]];
            }
            let base = self.positions[self.dart_origin(darts[0])];
            dual_positions.push([wrap(base[0] + centre[0]), wrap(base[1] + centre[1])]);
        }

        let dual_edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, edge)| {
                let (left, right) = (centroid_offset[2 * e], centroid_offset[2 * e + 1]);
                Edge {
                    endpoints: [self.dart_face[2 * e], self.dart_face[2 * e + 1]],
                    shift: [
                        edge.shift[0] + right[0] - left[0],
                        edge.shift[1] + right[1] - left[1],
                    ],
                    winding: [0, 0],
                }
            })
            .collect();

        let mut dual = PeriodicLattice::from_rotation(
            self.family,
            self.sector.flip(),
            self.linear_size,
            dual_positions,
            dual_edges,
            self.face_darts.clone(),
        )
        .expect("dual of a valid lattice is valid");

        // Renumber dual faces after the primal vertex they surround.
        let mut order = vec![usize::MAX; dual.num_faces()];
        for (f, darts) in dual.face_darts.iter().enumerate() {
            let v = self.dart_target(darts[0]);
            debug_assert!(darts.iter().all(|&d| self.dart_target(d) == v));
            order[v] = f;
        }
        assert!(order.iter().all(|&f| f != usize::MAX), "dual faces must biject onto primal vertices");
        let faces = order.iter().map(|&f| dual.faces[f].clone()).collect();
        let face_darts: Vec<Vec<usize>> = order.iter().map(|&f| dual.face_darts[f].clone()).collect();
        for (v, darts) in face_darts.iter().enumerate() {
            for &d in darts {
                dual.dart_face[d] = v;
            }
        }
        dual.faces = faces;
        dual.face_darts = face_darts;
        dual
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Provenance label, e.g. `union` or `union:dual`.
    pub fn family_tag(&self) -> String {
        match self.sector {
            Sector::Primal => self.family.to_string(),
            Sector::Dual => format!("{}:dual", self.family),
        }
    }

    pub fn linear_size(&self) -> usize {
        self.linear_size
    }

    pub fn num_vertices(&self) -> usize {
        self.positions.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Face boundaries as cyclic lists of edge ids.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn positions(&self) -> &[[Coord; 2]] {
        &self.positions
    }

    pub fn position_f64(&self, v: usize) -> [f64; 2] {
        let p = self.positions[v];
        [ratio_to_f64(p[0]), ratio_to_f64(p[1])]
    }

    /// `(neighbour, edge)` pairs around `v`, counter-clockwise. Parallel
    /// edges appear once each.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// `2|E| / |V|`, exact.
    pub fn average_degree(&self) -> Degree {
        Ratio::new(2 * self.num_edges() as i64, self.num_vertices() as i64)
    }

    /// Average degree of the dual, `2|E| / |F|`, without building it.
    pub fn dual_average_degree(&self) -> Degree {
        Ratio::new(2 * self.num_edges() as i64, self.num_faces() as i64)
    }

    pub fn unit_cell(&self) -> UnitCellSpec {
        let max = (0..self.num_vertices()).map(|v| self.degree(v)).max().unwrap_or(0);
        let mut counts = vec![0i64; max + 1];
        for v in 0..self.num_vertices() {
            counts[self.degree(v)] += 1;
        }
        let n = self.num_vertices() as i64;
        UnitCellSpec {
            degree_multiset: counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(d, &c)| (d, Ratio::new(c, n)))
                .collect(),
        }
    }

    /// `(q, q̄, 2/q + 2/q̄)`; the last entry is exactly one on a torus.
    pub fn check_euler_duality(&self) -> (Degree, Degree, Ratio<i64>) {
        let q = self.average_degree();
        let qbar = self.dual_average_degree();
        let two = Ratio::from_integer(2);
        (q, qbar, two / q + two / qbar)
    }

    /// Edges of the fixed reference cut across `x = 0` (`axis = 0`) or
    /// `y = 0` (`axis = 1`): those whose segment wraps an odd number of times.
    pub fn reference_cut(&self, axis: usize) -> impl Iterator<Item = usize> + '_ {
        self.cuts[axis].ones()
    }

    pub(crate) fn cut_mask(&self, axis: usize) -> &FixedBitSet {
        &self.cuts[axis]
    }

    /// Breadth-first distances from each source.
    pub fn graph_distances(&self, sources: &[usize]) -> Result<DistanceTable> {
        if sources.is_empty() {
            return Err(Error::OutOfRange("graph_distances needs at least one source".into()));
        }
        if let Some(&s) = sources.iter().find(|&&s| s >= self.num_vertices()) {
            return Err(Error::OutOfRange(format!("source vertex {s} out of range")));
        }
        Ok(DistanceTable::compute(self, sources))
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile::from_lattice(self)
    }
}

pub(crate) fn ratio_to_f64(r: Coord) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// If `b` is `a` up to a relabelling of vertices and faces with edge ids held
/// fixed, return the vertex map `a -> b`.
pub fn edge_id_isomorphism(a: &PeriodicLattice, b: &PeriodicLattice) -> Option<Vec<usize>> {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.num_faces() != b.num_faces() {
        return None;
    }
    let signature = |lat: &PeriodicLattice, v: usize| {
        let mut ids: Vec<usize> = lat.incident(v).iter().map(|&(_, e)| e).collect();
        ids.sort_unstable();
        ids
    };
    let mut by_signature = std::collections::HashMap::new();
    for v in 0..b.num_vertices() {
        if by_signature.insert(signature(b, v), v).is_some() {
            return None;
        }
    }
    let map: Vec<usize> = (0..a.num_vertices())
        .map(|v| by_signature.get(&signature(a, v)).copied())
        .collect::<Option<_>>()?;
    let edges_match = a.edges().iter().zip(b.edges()).all(|(ea, eb)| {
        let [x, y] = ea.endpoints;
        let (mx, my) = (map[x], map[y]);
        (mx, my) == (eb.endpoints[0], eb.endpoints[1]) || (my, mx) == (eb.endpoints[0], eb.endpoints[1])
    });
    let face_key = |f: &Vec<usize>| {
        let mut s = f.clone();
        s.sort_unstable();
        s
    };
    let mut fa: Vec<_> = a.faces().iter().map(face_key).collect();
    let mut fb: Vec<_> = b.faces().iter().map(face_key).collect();
    fa.sort();
    fb.sort();
    (edges_match && fa == fb).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn square_counts() {
        let lat = PeriodicLattice::generate(Family::Square, 16).unwrap();
        assert_eq!((lat.num_vertices(), lat.num_edges(), lat.num_faces()), (256, 512, 256));
        assert_eq!(lat.average_degree(), r(4, 1));
        assert!(lat.faces().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn table_degrees() {
        let rs = PeriodicLattice::generate(Family::ReducedSquare, 15).unwrap();
        assert_eq!(rs.average_degree(), r(32, 9));
        assert_eq!(rs.dual_average_degree(), r(32, 7));
        let un = PeriodicLattice::generate(Family::Union, 15).unwrap();
        assert_eq!(un.average_degree(), r(40, 9));
        assert_eq!(un.dual_average_degree(), r(40, 11));
        let tri = PeriodicLattice::generate(Family::Triangular, 6).unwrap();
        assert_eq!(tri.average_degree(), r(6, 1));
        assert_eq!(tri.dual().average_degree(), r(3, 1));
        let hex = PeriodicLattice::generate(Family::Hexagonal, 6).unwrap();
        assert_eq!(hex.average_degree(), r(3, 1));
    }

    #[test]
    fn subedge_is_multigraph_square() {
        let lat = PeriodicLattice::generate(Family::Subedge(2), 6).unwrap();
        assert_eq!(lat.average_degree(), r(8, 1));
        assert_eq!(lat.dual_average_degree(), r(8, 3));
        assert_eq!(lat.check_euler_duality().2, r(1, 1));
        let digons = lat.faces().iter().filter(|f| f.len() == 2).count();
        assert_eq!(digons, 2 * 36);
        let one = PeriodicLattice::generate(Family::Subedge(1), 5).unwrap();
        let sq = PeriodicLattice::generate(Family::Square, 5).unwrap();
        assert!(edge_id_isomorphism(&one, &sq).is_some());
    }

    #[test]
    fn unit_cell_average_matches() {
        for fam in Family::ALL_FIXED {
            let lat = PeriodicLattice::generate(fam, 6).unwrap();
            let cell = lat.unit_cell();
            let total: Ratio<i64> = cell.degree_multiset.iter().map(|&(_, w)| w).sum();
            assert_eq!(total, r(1, 1));
            assert_eq!(cell.average_degree(), lat.average_degree(), "{fam}");
        }
        let rs = PeriodicLattice::generate(Family::ReducedSquare, 9).unwrap();
        assert_eq!(rs.unit_cell().degree_multiset, vec![(3, r(4, 9)), (4, r(5, 9))]);
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(matches!(
            PeriodicLattice::generate(Family::ReducedSquare, 14),
            Err(Error::InvalidSize { .. })
        ));
        assert!(PeriodicLattice::generate(Family::Square, 1).is_err());
        assert!(PeriodicLattice::generate(Family::Subedge(0), 4).is_err());
    }

    #[test]
    fn dual_is_involution() {
        for fam in [Family::Square, Family::Triangular, Family::ReducedSquare, Family::Union, Family::Subedge(3)] {
            let lat = PeriodicLattice::generate(fam, 6).unwrap();
            let dual = lat.dual();
            assert_eq!(dual.num_vertices(), lat.num_faces());
            assert_eq!(dual.sector(), Sector::Dual);
            let back = dual.dual();
            let map = edge_id_isomorphism(&lat, &back).expect("isomorphic");
            assert!(map.iter().enumerate().all(|(i, &j)| i == j));
        }
    }

    #[test]
    fn dual_faces_surround_primal_vertices() {
        let lat = PeriodicLattice::generate(Family::Union, 6).unwrap();
        let dual = lat.dual();
        for v in 0..lat.num_vertices() {
            let mut around: Vec<usize> = lat.incident(v).iter().map(|&(_, e)| e).collect();
            let mut face = dual.faces()[v].clone();
            around.sort_unstable();
            face.sort_unstable();
            assert_eq!(around, face);
        }
    }

    #[test]
    fn reference_cuts_cover_one_row() {
        let lat = PeriodicLattice::generate(Family::Square, 8).unwrap();
        assert_eq!(lat.reference_cut(0).count(), 8);
        assert_eq!(lat.reference_cut(1).count(), 8);
        let dual = lat.dual();
        assert_eq!(dual.reference_cut(0).count(), 8);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("subedge(3)".parse::<Family>().unwrap(), Family::Subedge(3));
        assert_eq!("subedge:2".parse::<Family>().unwrap(), Family::Subedge(2));
        assert_eq!("reduced_square".parse::<Family>().unwrap(), Family::ReducedSquare);
        assert!("pentagonal".parse::<Family>().is_err());
        for fam in Family::ALL_FIXED {
            assert_eq!(fam.to_string().parse::<Family>().unwrap(), fam);
        }
    }
}
