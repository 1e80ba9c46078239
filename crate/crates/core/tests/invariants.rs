use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_core::code::{compose, face_boundary, homology_class, syndrome, ErrorChain};
use toric_core::decoder::{Decoder, Sparsifier};
use toric_core::dynamics::{RateModel, SimState};
use toric_core::experiments::sector_lattice;
use toric_core::lattice::edge_id_isomorphism;
use toric_core::{Family, PeriodicLattice, Sector};

fn families() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Square),
        Just(Family::Triangular),
        Just(Family::Hexagonal),
        Just(Family::ReducedSquare),
        Just(Family::Union),
        (2u32..=3).prop_map(Family::Subedge),
    ]
}

fn sectors() -> impl Strategy<Value = Sector> {
    prop_oneof![Just(Sector::Primal), Just(Sector::Dual)]
}

fn lattice(family: Family, sector: Sector) -> PeriodicLattice {
    let l = if family.cell_size() == 3 { 6 } else { 5 };
    sector_lattice(family, sector, l).unwrap()
}

fn chain(lat: &PeriodicLattice, bits: &[bool]) -> ErrorChain {
    let n = lat.num_edges();
    ErrorChain::from_edges(n, (0..n).filter(|&e| bits[e % bits.len()]))
}

fn random_chain(lat: &PeriodicLattice, seed: u64, p: f64) -> ErrorChain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    toric_core::code::sample_iid_errors(lat, p, &mut rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn syndrome_is_a_homomorphism(family in families(), sector in sectors(), a in any::<u64>(), b in any::<u64>()) {
        let lat = lattice(family, sector);
        let x = random_chain(&lat, a, 0.3);
        let y = random_chain(&lat, b, 0.3);
        let sx = syndrome(&lat, &x);
        prop_assert_eq!(sx.len() % 2, 0);
        prop_assert_eq!(syndrome(&lat, &compose(&x, &y)), sx.symmetric_difference(&syndrome(&lat, &y)));
    }

    #[test]
    fn homology_ignores_face_boundaries(family in families(), sector in sectors(), seed in any::<u64>(), faces in prop::collection::vec(any::<prop::sample::Index>(), 1..6)) {
        let lat = lattice(family, sector);
        let x = random_chain(&lat, seed, 0.2);
        let h = homology_class(&lat, &x).ok();
        let mut y = x.clone();
        for f in &faces {
            y.compose_in_place(&face_boundary(&lat, f.index(lat.num_faces())));
        }
        prop_assert_eq!(syndrome(&lat, &y), syndrome(&lat, &x));
        prop_assert_eq!(homology_class(&lat, &y).ok(), h);
    }

    #[test]
    fn homology_composes(family in families(), sector in sectors(), a in any::<u64>(), b in any::<u64>()) {
        let lat = lattice(family, sector);
        let mut dec = Decoder::new(&lat, Sparsifier::Complete);
        // close both chains into cycles so their classes are defined
        let x = random_chain(&lat, a, 0.2);
        let y = random_chain(&lat, b, 0.2);
        let cx = compose(&x, &dec.decode(&x).unwrap());
        let cy = compose(&y, &dec.decode(&y).unwrap());
        let hx = homology_class(&lat, &cx).unwrap();
        let hy = homology_class(&lat, &cy).unwrap();
        prop_assert_eq!(homology_class(&lat, &compose(&cx, &cy)).unwrap(), hx.compose(hy));
    }

    #[test]
    fn dual_is_an_involution(family in families(), bits in prop::collection::vec(any::<bool>(), 1..20)) {
        let lat = lattice(family, Sector::Primal);
        let twice = lat.dual().dual();
        prop_assert!(edge_id_isomorphism(&lat, &twice).is_some());
        prop_assert_eq!(lat.dual().num_vertices(), lat.num_faces());
        prop_assert_eq!(lat.dual().num_faces(), lat.num_vertices());
        let x = chain(&lat, &bits);
        prop_assert_eq!(syndrome(&twice, &x).len(), syndrome(&lat, &x).len());
    }

    #[test]
    fn correction_clears_syndrome(family in families(), sector in sectors(), seed in any::<u64>(), p in 0.0f64..0.3) {
        let lat = lattice(family, sector);
        let x = random_chain(&lat, seed, p);
        for sp in [Sparsifier::Complete, Sparsifier::Knn(6), Sparsifier::Delaunay] {
            let c = Decoder::new(&lat, sp).decode(&x).unwrap();
            prop_assert!(syndrome(&lat, &compose(&x, &c)).is_empty());
        }
    }

    #[test]
    fn outcome_is_stabilizer_invariant(family in families(), sector in sectors(), seed in any::<u64>(), f in any::<prop::sample::Index>()) {
        let lat = lattice(family, sector);
        let mut dec = Decoder::new(&lat, Sparsifier::Complete);
        let x = random_chain(&lat, seed, 0.12);
        let y = compose(&x, &face_boundary(&lat, f.index(lat.num_faces())));
        prop_assert_eq!(dec.judge(&x), dec.judge(&y));
    }

    #[test]
    fn gillespie_bookkeeping_stays_consistent(family in families(), seed in any::<u64>(), t in 0.2f64..1.0, steps in 1usize..300) {
        let lat = lattice(family, Sector::Primal);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = SimState::new(&lat, RateModel::new(t).unwrap());
        for _ in 0..steps {
            state.gillespie_step(&mut rng);
        }
        prop_assert!(state.check_consistency().is_ok());
        prop_assert_eq!(syndrome(&lat, state.chain()).len(), state.num_defects());
        let rel = (state.total_rate() - state.recompute_total_rate()).abs() / state.recompute_total_rate();
        prop_assert!(rel < 1e-9);
    }
}
