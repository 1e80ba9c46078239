use std::collections::VecDeque;

use super::PeriodicLattice;

pub(crate) const UNREACHED: u32 = u32::MAX;
pub(crate) const NO_EDGE: u32 = u32::MAX;

/// Breadth-first shortest-path trees from a set of sources.
///
/// Among equally short paths the predecessor of every vertex is the
/// smallest-id edge leading one step closer to the source, so the stored
/// paths are canonical.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    sources: Vec<usize>,
    dist: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
}

/// One tree, reusable across calls to avoid reallocation.
pub(crate) struct BfsTree {
    pub dist: Vec<u32>,
    pub pred: Vec<u32>,
    queue: VecDeque<usize>,
    touched: Vec<usize>,
}

impl BfsTree {
    pub fn new(n: usize) -> Self {
        BfsTree {
            dist: vec![UNREACHED; n],
            pred: vec![NO_EDGE; n],
            queue: VecDeque::new(),
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = UNREACHED;
            self.pred[v] = NO_EDGE;
        }
        self.touched.clear();
        self.queue.clear();
    }

    /// Grow the tree layer by layer. `stop(v, d)` is called once per vertex
    /// when it is settled; returning `Some(limit)` finishes every layer up
    /// to distance `limit` and then stops.
    pub fn run(&mut self, lat: &PeriodicLattice, source: usize, mut stop: impl FnMut(usize, u32) -> Option<u32>) {
        self.reset();
        self.dist[source] = 0;
        self.touched.push(source);
        self.queue.push_back(source);
        let mut limit = u32::MAX;
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du > limit {
                break;
            }
            if let Some(l) = stop(u, du) {
                limit = limit.min(l);
            }
            if du >= limit {
                continue;
            }
            for &(w, e) in lat.incident(u) {
                let e = e as u32;
                if self.dist[w] == UNREACHED {
                    self.dist[w] = du + 1;
                    self.pred[w] = e;
                    self.touched.push(w);
                    self.queue.push_back(w);
                } else if self.dist[w] == du + 1 && e < self.pred[w] {
                    self.pred[w] = e;
                }
            }
        }
    }

    /// Edge ids along the stored path from `target` back to the source.
    pub fn path_to(&self, lat: &PeriodicLattice, mut target: usize, out: &mut Vec<usize>) {
        debug_assert!(self.dist[target] != UNREACHED);
        while self.dist[target] != 0 {
            let e = self.pred[target] as usize;
            out.push(e);
            let [a, b] = lat.edge(e).endpoints;
            target = if a == target { b } else { a };
        }
    }
}

impl DistanceTable {
    pub(super) fn compute(lat: &PeriodicLattice, sources: &[usize]) -> Self {
        let mut tree = BfsTree::new(lat.num_vertices());
        let mut dist = Vec::with_capacity(sources.len());
        let mut pred = Vec::with_capacity(sources.len());
        for &s in sources {
            tree.run(lat, s, |_, _| None);
            dist.push(tree.dist.clone());
            pred.push(tree.pred.clone());
        }
        DistanceTable {
            sources: sources.to_vec(),
            dist,
            pred,
        }
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// Distance from the `k`-th source to vertex `v`.
    pub fn distance(&self, k: usize, v: usize) -> u32 {
        self.dist[k][v]
    }

    /// Predecessor edge of `v` in the `k`-th tree, `None` at the source.
    pub fn predecessor(&self, k: usize, v: usize) -> Option<usize> {
        let p = self.pred[k][v];
        (p != NO_EDGE).then_some(p as usize)
    }

    /// Edge ids of the canonical shortest path from vertex `v` to the `k`-th
    /// source.
    pub fn path(&self, lat: &PeriodicLattice, k: usize, mut v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dist[k][v] as usize);
        while let Some(e) = self.predecessor(k, v) {
            out.push(e);
            let [a, b] = lat.edge(e).endpoints;
            v = if a == v { b } else { a };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::lattice::{Family, PeriodicLattice};

    fn square(l: usize) -> PeriodicLattice {
        PeriodicLattice::generate(Family::Square, l).unwrap()
    }

    #[test]
    fn trivial_distances() {
        let lat = square(6);
        let t = lat.graph_distances(&[0]).unwrap();
        assert_eq!(t.distance(0, 0), 0);
        for &(w, _) in lat.incident(0) {
            assert_eq!(t.distance(0, w), 1);
        }
        // torus wrap: farthest point is (3, 3)
        assert_eq!(t.distance(0, 3 * 6 + 3), 6);
        assert_eq!((0..36).map(|v| t.distance(0, v)).max(), Some(6));
        assert!(lat.graph_distances(&[]).is_err());
    }

    /// Enumerate every walk of length `len` from `s` to `t` that never
    /// revisits a vertex.
    fn all_shortest_paths(lat: &PeriodicLattice, s: usize, t: usize, len: usize) -> Vec<Vec<usize>> {
        fn go(lat: &PeriodicLattice, at: usize, t: usize, left: usize, path: &mut Vec<usize>, seen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                if at == t {
                    out.push(path.clone());
                }
                return;
            }
            for &(w, e) in lat.incident(at) {
                if seen.contains(&w) {
                    continue;
                }
                path.push(e);
                seen.push(w);
                go(lat, w, t, left - 1, path, seen, out);
                seen.pop();
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(lat, s, t, len, &mut Vec::new(), &mut vec![s], &mut out);
        out
    }

    #[test]
    fn diagonal_of_a_plaquette_has_two_tied_paths() {
        let lat = square(16);
        let (s, t) = (0, 16 + 1);
        let table = lat.graph_distances(&[s]).unwrap();
        assert_eq!(table.distance(0, t), 2);
        let paths = all_shortest_paths(&lat, s, t, 2);
        assert_eq!(paths.len(), 2);
        assert!(all_shortest_paths(&lat, s, t, 1).is_empty());
        // The stored path is traced from `t`; each step takes the
        // smallest-id edge toward the source.
        let stored = table.path(&lat, 0, t);
        let expected = paths
            .iter()
            .map(|p| p.iter().rev().copied().collect::<Vec<_>>())
            .min()
            .unwrap();
        assert_eq!(stored, expected);
        assert_eq!(table.path(&lat, 0, t), stored);
    }

    #[test]
    fn distances_match_brute_force_on_small_lattices() {
        for fam in [Family::ReducedSquare, Family::Union, Family::Hexagonal] {
            let lat = PeriodicLattice::generate(fam, 3).unwrap();
            let table = lat.graph_distances(&[0]).unwrap();
            for v in 0..lat.num_vertices() {
                let d = table.distance(0, v) as usize;
                if d > 0 {
                    assert!(!all_shortest_paths(&lat, 0, v, d).is_empty());
                    assert!(all_shortest_paths(&lat, 0, v, d - 1).is_empty());
                }
                assert_eq!(table.path(&lat, 0, v).len(), d);
            }
        }
    }
}
