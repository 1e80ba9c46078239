//! Generators for the lattice families.
//!
//! Everything except the honeycomb is a decoration of the `L x L` square
//! grid, so the generators share one builder that places vertex `(i, j)` at
//! `(i/L, j/L)` and orders darts around each vertex by direction.

use super::{Coord, Edge, Family, PeriodicLattice, Sector};
use crate::error::{Error, Result};

/// Edges removed from each 3x3 block of the reduced-square lattice, as
/// `(horizontal?, i, j)` for the edge leaving block-local vertex `(i, j)`
/// to the east (horizontal) or north. The two edges are parallel rungs of
/// one column, leaving four degree-3 vertices, six squares and one 1x3
/// rectangle per block.
const REDUCED_SQUARE_REMOVED: [(bool, usize, usize); 2] = [(true, 0, 0), (true, 0, 1)];

/// Chords added to each 3x3 block of the union lattice, as `(rising?, i, j)`
/// for the diagonal of the square whose lower-left corner is block-local
/// `(i, j)`. The chords share no vertex, giving four degree-5 vertices.
const UNION_CHORDS: [(bool, usize, usize); 2] = [(true, 0, 0), (true, 2, 1)];

struct EdgeSpec {
    from: usize,
    to: usize,
    step: [i64; 2],
    /// Tie-break for parallel edges leaving in the same direction; larger
    /// bends leave further counter-clockwise.
    bend: i64,
}

struct GridBuilder {
    size: usize,
    edges: Vec<EdgeSpec>,
}

impl GridBuilder {
    fn new(size: usize) -> Self {
        GridBuilder { size, edges: Vec::new() }
    }

    fn vertex(&self, i: usize, j: usize) -> usize {
        (j % self.size) * self.size + (i % self.size)
    }

    fn push(&mut self, i: usize, j: usize, step: [i64; 2], bend: i64) {
        let n = self.size as i64;
        let ti = (i as i64 + step[0]).rem_euclid(n) as usize;
        let tj = (j as i64 + step[1]).rem_euclid(n) as usize;
        self.edges.push(EdgeSpec {
            from: self.vertex(i, j),
            to: self.vertex(ti, tj),
            step,
            bend,
        });
    }

    fn build(self, family: Family) -> Result<PeriodicLattice> {
        let n = self.size as i64;
        let positions: Vec<[Coord; 2]> = (0..self.size * self.size)
            .map(|v| {
                let (i, j) = ((v % self.size) as i64, (v / self.size) as i64);
                [Coord::new(i, n), Coord::new(j, n)]
            })
            .collect();

        let mut keyed: Vec<Vec<(f64, i64, usize)>> = vec![Vec::new(); positions.len()];
        for (e, spec) in self.edges.iter().enumerate() {
            let (dx, dy) = (spec.step[0] as f64, spec.step[1] as f64);
            keyed[spec.from].push((dy.atan2(dx), spec.bend, 2 * e));
            keyed[spec.to].push(((-dy).atan2(-dx), -spec.bend, 2 * e + 1));
        }
        let rotation = keyed
            .into_iter()
            .map(|mut darts| {
                darts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                darts.into_iter().map(|(_, _, d)| d).collect()
            })
            .collect();

        let edges = self
            .edges
            .iter()
            .map(|s| Edge {
                endpoints: [s.from, s.to],
                shift: [Coord::new(s.step[0], n), Coord::new(s.step[1], n)],
                winding: [0, 0],
            })
            .collect();
        PeriodicLattice::from_rotation(family, Sector::Primal, self.size, positions, edges, rotation)
    }
}

pub(super) fn check_size(family: Family, size: usize) -> Result<()> {
    if let Family::Subedge(n) = family {
        if n < 1 {
            return Err(Error::OutOfRange("subedge multiplicity must be at least 1".into()));
        }
    }
    let invalid = |reason: String| Error::InvalidSize {
        family: family.to_string(),
        size,
        reason,
    };
    if size < 2 {
        return Err(invalid("need at least 2 cells per direction".into()));
    }
    let cell = family.cell_size();
    if !size.is_multiple_of(cell) {
        return Err(invalid(format!("must be divisible by {cell} (the unit cell is {cell}x{cell})")));
    }
    Ok(())
}

pub(super) fn generate(family: Family, size: usize) -> Result<PeriodicLattice> {
    check_size(family, size)?;
    match family {
        Family::Square => square_like(size, 1, |_, _| true, &[]).build(family),
        Family::Subedge(n) => square_like(size, n as usize, |_, _| true, &[]).build(family),
        Family::Triangular => {
            let mut b = GridBuilder::new(size);
            for j in 0..size {
                for i in 0..size {
                    b.push(i, j, [1, 0], 0);
                    b.push(i, j, [0, 1], 0);
                    b.push(i, j, [1, 1], 0);
                }
            }
            b.build(family)
        }
        Family::Hexagonal => {
            let mut hex = generate(Family::Triangular, size)?.dual();
            hex.family = Family::Hexagonal;
            hex.sector = Sector::Primal;
            Ok(hex)
        }
        Family::ReducedSquare => {
            let removed = |horizontal: bool, v: (usize, usize)| {
                !REDUCED_SQUARE_REMOVED
                    .iter()
                    .any(|&(h, i, j)| h == horizontal && (v.0 % 3, v.1 % 3) == (i, j))
            };
            square_like(size, 1, removed, &[]).build(family)
        }
        Family::Union => square_like(size, 1, |_, _| true, &UNION_CHORDS).build(family),
    }
}

/// Square grid with each kept edge repeated `multiplicity` times, plus
/// diagonal chords repeated per 3x3 block.
fn square_like(
    size: usize,
    multiplicity: usize,
    keep: impl Fn(bool, (usize, usize)) -> bool,
    chords: &[(bool, usize, usize)],
) -> GridBuilder {
    let mut b = GridBuilder::new(size);
    let m = multiplicity as i64;
    for j in 0..size {
        for i in 0..size {
            for (horizontal, step) in [(true, [1, 0]), (false, [0, 1])] {
                if keep(horizontal, (i, j)) {
                    for k in 0..m {
                        b.push(i, j, step, 2 * k - (m - 1));
                    }
                }
            }
            for &(rising, ci, cj) in chords {
                if (i % 3, j % 3) == (ci, cj) {
                    if rising {
                        b.push(i, j, [1, 1], 0);
                    } else {
                        b.push(i + 1, j, [-1, 1], 0);
                    }
                }
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_square_faces() {
        let lat = generate(Family::ReducedSquare, 6).unwrap();
        let mut sizes: Vec<usize> = lat.faces().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 6 * 4);
        assert_eq!(sizes.iter().filter(|&&s| s == 8).count(), 4);
        assert_eq!(sizes.len(), 7 * 4);
    }

    #[test]
    fn union_faces() {
        let lat = generate(Family::Union, 6).unwrap();
        let triangles = lat.faces().iter().filter(|f| f.len() == 3).count();
        let squares = lat.faces().iter().filter(|f| f.len() == 4).count();
        assert_eq!((triangles, squares), (4 * 4, 7 * 4));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(Family::Union, 9).unwrap().to_file();
        let b = generate(Family::Union, 9).unwrap().to_file();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn smallest_tori_are_valid() {
        for fam in [Family::Square, Family::Triangular, Family::Hexagonal, Family::Subedge(2)] {
            generate(fam, 2).unwrap();
        }
        generate(Family::ReducedSquare, 3).unwrap();
        generate(Family::Union, 3).unwrap();
    }
}
