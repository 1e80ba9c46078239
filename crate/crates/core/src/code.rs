//! Error chains, syndromes and homology on a periodic lattice.
//!
//! Only one error type is modelled: a chain of flipped edges whose boundary
//! lives on the vertices. The other sector is handled by running the same
//! code on the dual lattice.

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::PeriodicLattice;

/// A set of flipped edges. Composition is symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErrorChain {
    bits: FixedBitSet,
}

impl ErrorChain {
    pub fn empty(num_edges: usize) -> Self {
        ErrorChain {
            bits: FixedBitSet::with_capacity(num_edges),
        }
    }

    /// Chain of the given edges; an edge listed twice cancels.
    pub fn from_edges(num_edges: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut chain = ErrorChain::empty(num_edges);
        for e in edges {
            chain.flip(e);
        }
        chain
    }

    pub fn full(num_edges: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(num_edges);
        bits.insert_range(..);
        ErrorChain { bits }
    }

    pub fn num_edges(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn flip(&mut self, e: usize) {
        self.bits.toggle(e);
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        self.bits.contains(e)
    }

    /// Number of flipped edges.
    pub fn weight(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Flipped edge ids, ascending.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn compose(&self, other: &ErrorChain) -> ErrorChain {
        let mut out = self.clone();
        out.compose_in_place(other);
        out
    }

    pub fn compose_in_place(&mut self, other: &ErrorChain) {
        assert_eq!(self.num_edges(), other.num_edges(), "chains belong to different lattices");
        self.bits.symmetric_difference_with(&other.bits);
    }

    pub(crate) fn bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

/// Vertices with odd flip parity, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Syndrome {
    defects: Vec<usize>,
}

impl Syndrome {
    pub fn from_defects(mut defects: Vec<usize>) -> Self {
        defects.sort_unstable();
        defects.dedup();
        Syndrome { defects }
    }

    pub fn defects(&self) -> &[usize] {
        &self.defects
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn symmetric_difference(&self, other: &Syndrome) -> Syndrome {
        let (a, b) = (&self.defects, &other.defects);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Syndrome { defects: out }
    }
}

/// Winding parities of a closed chain across the two reference cuts.
/// `h[0]` counts crossings of the `x = 0` cut, so a loop running once
/// around the torus horizontally has class `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyClass {
    pub h: [bool; 2],
}

impl HomologyClass {
    pub const TRIVIAL: HomologyClass = HomologyClass { h: [false, false] };

    pub fn is_trivial(self) -> bool {
        self == Self::TRIVIAL
    }

    pub fn compose(self, other: HomologyClass) -> HomologyClass {
        HomologyClass {
            h: [self.h[0] ^ other.h[0], self.h[1] ^ other.h[1]],
        }
    }
}

pub fn syndrome(lat: &PeriodicLattice, chain: &ErrorChain) -> Syndrome {
    let mut parity = vec![false; lat.num_vertices()];
    for e in chain.edges() {
        let [a, b] = lat.edge(e).endpoints;
        parity[a] ^= true;
        parity[b] ^= true;
    }
    Syndrome {
        defects: parity
            .iter()
            .enumerate()
            .filter(|(_, &odd)| odd)
            .map(|(v, _)| v)
            .collect(),
    }
}

pub fn compose(a: &ErrorChain, b: &ErrorChain) -> ErrorChain {
    a.compose(b)
}

/// Homology class of a boundary-free chain.
pub fn homology_class(lat: &PeriodicLattice, chain: &ErrorChain) -> Result<HomologyClass> {
    let s = syndrome(lat, chain);
    if !s.is_empty() {
        return Err(Error::ContractViolation(format!(
            "homology class requested for a chain with {} boundary vertices",
            s.len()
        )));
    }
    Ok(cut_parities(lat, chain))
}

/// Crossing parities without checking that the chain is closed.
pub(crate) fn cut_parities(lat: &PeriodicLattice, chain: &ErrorChain) -> HomologyClass {
    let crossing = |axis| chain.bits().intersection_count(lat.cut_mask(axis)) % 2 == 1;
    HomologyClass {
        h: [crossing(0), crossing(1)],
    }
}

/// Boundary of face `f`, a contractible loop.
pub fn face_boundary(lat: &PeriodicLattice, f: usize) -> ErrorChain {
    ErrorChain::from_edges(lat.num_edges(), lat.faces()[f].iter().copied())
}

/// Flip every edge independently with probability `p`.
pub fn sample_iid_errors<R: Rng + ?Sized>(lat: &PeriodicLattice, p: f64, rng: &mut R) -> Result<ErrorChain> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("error probability {p} outside [0, 1]")));
    }
    let mut chain = ErrorChain::empty(lat.num_edges());
    for e in 0..lat.num_edges() {
        if rng.gen::<f64>() < p {
            chain.flip(e);
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Family, PeriodicLattice};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square(l: usize) -> PeriodicLattice {
        PeriodicLattice::generate(Family::Square, l).unwrap()
    }

    /// Horizontal edges of the bottom row.
    fn horizontal_loop(lat: &PeriodicLattice) -> ErrorChain {
        let l = lat.linear_size();
        ErrorChain::from_edges(lat.num_edges(), (0..l).map(|i| 2 * i))
    }

    #[test]
    fn single_edge_syndrome() {
        let lat = square(6);
        assert!(syndrome(&lat, &ErrorChain::empty(lat.num_edges())).is_empty());
        for e in [0, 7, 71] {
            let chain = ErrorChain::from_edges(lat.num_edges(), [e]);
            let [a, b] = lat.edge(e).endpoints;
            assert_eq!(syndrome(&lat, &chain), Syndrome::from_defects(vec![a, b]));
        }
    }

    #[test]
    fn face_loops_are_closed_and_trivial() {
        let lat = square(6);
        for f in 0..lat.num_faces() {
            let loop_ = face_boundary(&lat, f);
            assert_eq!(loop_.weight(), 4);
            // explicit parity count
            let mut count = vec![0; lat.num_vertices()];
            for e in loop_.edges() {
                for v in lat.edge(e).endpoints {
                    count[v] += 1;
                }
            }
            assert!(count.iter().all(|c| c % 2 == 0));
            assert_eq!(homology_class(&lat, &loop_).unwrap(), HomologyClass::TRIVIAL);
        }
    }

    #[test]
    fn non_contractible_loops() {
        let lat = square(6);
        let h = horizontal_loop(&lat);
        assert!(syndrome(&lat, &h).is_empty());
        assert_eq!(homology_class(&lat, &h).unwrap().h, [true, false]);
        let v = ErrorChain::from_edges(lat.num_edges(), (0..6).map(|j| 2 * (6 * j) + 1));
        assert_eq!(homology_class(&lat, &v).unwrap().h, [false, true]);
        assert!(homology_class(&lat, &h.compose(&v)).unwrap().h == [true, true]);
        assert!(homology_class(&lat, &ErrorChain::from_edges(lat.num_edges(), [3])).is_err());
    }

    #[test]
    fn compose_identities() {
        let lat = square(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = sample_iid_errors(&lat, 0.3, &mut rng).unwrap();
        assert!(a.compose(&a).is_empty());
        assert_eq!(a.compose(&ErrorChain::empty(lat.num_edges())), a);
    }

    #[test]
    fn iid_extremes_and_bounds() {
        let lat = square(8);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(sample_iid_errors(&lat, 0.0, &mut rng).unwrap().is_empty());
        assert_eq!(sample_iid_errors(&lat, 1.0, &mut rng).unwrap(), ErrorChain::full(lat.num_edges()));
        assert!(sample_iid_errors(&lat, 1.5, &mut rng).is_err());
        assert!(sample_iid_errors(&lat, -0.1, &mut rng).is_err());
    }

    #[test]
    fn iid_flip_fraction_is_binomial() {
        let lat = square(32);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10_000;
        let total: usize = (0..n).map(|_| sample_iid_errors(&lat, 0.1, &mut rng).unwrap().weight()).sum();
        let trials = (n * lat.num_edges()) as f64;
        let mean = total as f64 / trials;
        let sigma = (0.1 * 0.9 / trials).sqrt();
        assert!((mean - 0.1).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let lat = square(8);
        let a = sample_iid_errors(&lat, 0.2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_iid_errors(&lat, 0.2, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dual_syndrome_is_face_parity_on_primal() {
        // X-type flips on the primal are detected by face operators, which are
        // the vertex operators of the dual.
        for fam in [Family::Square, Family::ReducedSquare, Family::Union] {
            let lat = PeriodicLattice::generate(fam, 6).unwrap();
            let dual = lat.dual();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            for _ in 0..20 {
                let chain = sample_iid_errors(&lat, 0.15, &mut rng).unwrap();
                let odd_faces: Vec<usize> = (0..lat.num_faces())
                    .filter(|&f| lat.faces()[f].iter().filter(|&&e| chain.contains(e)).count() % 2 == 1)
                    .collect();
                assert_eq!(syndrome(&dual, &chain).defects(), odd_faces.as_slice());
            }
        }
    }

    #[test]
    fn dual_loop_homology() {
        let lat = square(6);
        let dual = lat.dual();
        // The vertical primal edges of one row are crossed by a horizontal
        // dual loop.
        let row = ErrorChain::from_edges(lat.num_edges(), (0..6).map(|i| 2 * i + 1));
        assert!(syndrome(&dual, &row).is_empty());
        assert_eq!(homology_class(&dual, &row).unwrap().h, [true, false]);
    }
}
