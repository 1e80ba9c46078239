//! Thermal spin-flip dynamics of the non-interacting toric code.
//!
//! Each edge flips at a rate fixed by how many of its endpoints carry a
//! defect: none (pair creation, energy change `+2J`), one (hop, `0`) or two
//! (pair annihilation, `-2J`). The bath is Ohmic with an infinite cutoff.
//!
//! Energies are measured in units of the single-defect energy `J`, so the
//! only physical parameter is `T/J`.

mod master;

pub use master::{marginal_defect_density, master_equation_oracle, MasterSolution};

use rand::Rng;

use crate::code::{syndrome, ErrorChain};
use crate::error::{Error, Result};
use crate::lattice::PeriodicLattice;

/// Transition class of an edge, indexed by its number of occupied endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RateClass {
    Create = 0,
    Hop = 1,
    Annihilate = 2,
}

impl RateClass {
    pub const ALL: [RateClass; 3] = [RateClass::Create, RateClass::Hop, RateClass::Annihilate];

    fn from_occupation(n: u8) -> RateClass {
        RateClass::ALL[n as usize]
    }

    /// Energy gained by the system when an edge of this class flips.
    pub fn energy_change(self) -> f64 {
        match self {
            RateClass::Create => 2.0,
            RateClass::Hop => 0.0,
            RateClass::Annihilate => -2.0,
        }
    }

    /// Bath frequency `ω` at which an edge of this class flips (energy given
    /// to the bath).
    pub fn omega(self) -> f64 {
        -self.energy_change()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateModel {
    t_over_j: f64,
    kappa: f64,
    hop_override: bool,
}

impl RateModel {
    /// Default normalization: `κ` chosen so that `γ(2J) = 1`, and hopping
    /// forced to the same rate.
    pub fn new(t_over_j: f64) -> Result<Self> {
        Self::normalized(t_over_j, true)
    }

    /// Pure Ohmic rates, `γ(0) = 2κT`, with the same `γ(2J) = 1` time unit.
    pub fn ohmic(t_over_j: f64) -> Result<Self> {
        Self::normalized(t_over_j, false)
    }

    fn normalized(t_over_j: f64, hop_override: bool) -> Result<Self> {
        check_temperature(t_over_j)?;
        // γ(2) = 2κ·2 / (1 - e^{-2/T}) = 1
        let kappa = -(-2.0 / t_over_j).exp_m1() / 4.0;
        Ok(RateModel {
            t_over_j,
            kappa,
            hop_override,
        })
    }

    pub fn with_kappa(t_over_j: f64, kappa: f64, hop_override: bool) -> Result<Self> {
        check_temperature(t_over_j)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::OutOfRange(format!("kappa must be positive, got {kappa}")));
        }
        Ok(RateModel {
            t_over_j,
            kappa,
            hop_override,
        })
    }

    pub fn t_over_j(&self) -> f64 {
        self.t_over_j
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn hop_override(&self) -> bool {
        self.hop_override
    }

    /// Ohmic spectral function `2κ ω / (1 - e^{-ω/T})`, continuous at 0.
    pub fn bath_gamma(&self, omega: f64) -> f64 {
        let t = self.t_over_j;
        if omega == 0.0 {
            return 2.0 * self.kappa * t;
        }
        let denom = -(-omega / t).exp_m1();
        let g = 2.0 * self.kappa * omega / denom;
        if g.is_nan() {
            0.0
        } else {
            g.abs()
        }
    }

    /// Transition rate at bath frequency `omega`, honouring the hop override.
    pub fn gamma(&self, omega: f64) -> f64 {
        if omega == 0.0 && self.hop_override {
            self.bath_gamma(2.0)
        } else {
            self.bath_gamma(omega)
        }
    }

    pub fn rate(&self, class: RateClass) -> f64 {
        self.gamma(class.omega())
    }

    pub fn create_rate(&self) -> f64 {
        self.rate(RateClass::Create)
    }

    pub fn hop_rate(&self) -> f64 {
        self.rate(RateClass::Hop)
    }

    pub fn annihilate_rate(&self) -> f64 {
        self.rate(RateClass::Annihilate)
    }

    fn class_rates(&self) -> [f64; 3] {
        RateClass::ALL.map(|c| self.rate(c))
    }
}

fn check_temperature(t_over_j: f64) -> Result<()> {
    if t_over_j > 0.0 && t_over_j.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("temperature T/J must be positive, got {t_over_j}")))
    }
}

/// Fermi-Dirac defect density `(e^{J/T} + 1)^{-1}`.
pub fn equilibrium_defect_density(t_over_j: f64) -> f64 {
    1.0 / ((1.0 / t_over_j).exp() + 1.0)
}

/// Gillespie state: current chain, defect occupation and edges pooled by
/// rate class so an event is chosen in constant time.
#[derive(Clone, Debug)]
pub struct SimState<'a> {
    lat: &'a PeriodicLattice,
    model: RateModel,
    rates: [f64; 3],
    chain: ErrorChain,
    occupied: Vec<bool>,
    n_defects: usize,
    class_of: Vec<u8>,
    pools: [Vec<u32>; 3],
    pool_index: Vec<u32>,
    time: f64,
}

impl<'a> SimState<'a> {
    /// Defect-free start at `t = 0`.
    pub fn new(lat: &'a PeriodicLattice, model: RateModel) -> Self {
        Self::from_chain(lat, model, ErrorChain::empty(lat.num_edges()))
    }

    pub fn from_chain(lat: &'a PeriodicLattice, model: RateModel, chain: ErrorChain) -> Self {
        let mut occupied = vec![false; lat.num_vertices()];
        let defects = syndrome(lat, &chain);
        for &v in defects.defects() {
            occupied[v] = true;
        }
        let mut pools: [Vec<u32>; 3] = Default::default();
        let mut class_of = vec![0u8; lat.num_edges()];
        let mut pool_index = vec![0u32; lat.num_edges()];
        for (e, edge) in lat.edges().iter().enumerate() {
            let c = occupied[edge.endpoints[0]] as u8 + occupied[edge.endpoints[1]] as u8;
            class_of[e] = c;
            pool_index[e] = pools[c as usize].len() as u32;
            pools[c as usize].push(e as u32);
        }
        SimState {
            lat,
            model,
            rates: model.class_rates(),
            chain,
            n_defects: defects.len(),
            occupied,
            class_of,
            pools,
            pool_index,
            time: 0.0,
        }
    }

    pub fn lattice(&self) -> &'a PeriodicLattice {
        self.lat
    }

    pub fn model(&self) -> &RateModel {
        &self.model
    }

    pub fn chain(&self) -> &ErrorChain {
        &self.chain
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn num_defects(&self) -> usize {
        self.n_defects
    }

    pub fn is_occupied(&self, v: usize) -> bool {
        self.occupied[v]
    }

    pub fn defects(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupied.iter().enumerate().filter(|(_, &o)| o).map(|(v, _)| v)
    }

    pub fn class_count(&self, class: RateClass) -> usize {
        self.pools[class as usize].len()
    }

    pub fn edge_class(&self, e: usize) -> RateClass {
        RateClass::from_occupation(self.class_of[e])
    }

    /// Rate and bath frequency of flipping edge `e` now.
    pub fn edge_rate(&self, e: usize) -> (f64, f64) {
        let class = self.edge_class(e);
        (self.rates[class as usize], class.omega())
    }

    /// Total flip rate maintained from the class pools.
    pub fn total_rate(&self) -> f64 {
        (0..3).map(|c| self.pools[c].len() as f64 * self.rates[c]).sum()
    }

    /// Total flip rate summed edge by edge from the current occupations.
    pub fn recompute_total_rate(&self) -> f64 {
        self.lat
            .edges()
            .iter()
            .map(|edge| {
                let c = self.occupied[edge.endpoints[0]] as usize + self.occupied[edge.endpoints[1]] as usize;
                self.rates[c]
            })
            .sum()
    }

    /// Draw the waiting time to the next flip.
    pub fn draw_waiting_time<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        -(1.0 - u).ln() / self.total_rate()
    }

    /// Pick an edge with probability proportional to its rate.
    pub fn select_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let weights: [f64; 3] = std::array::from_fn(|c| self.pools[c].len() as f64 * self.rates[c]);
        let mut u = rng.gen::<f64>() * (weights[0] + weights[1] + weights[2]);
        let mut class = 2;
        for (c, &w) in weights.iter().enumerate() {
            if u < w {
                class = c;
                break;
            }
            u -= w;
        }
        // Rounding can land u past the last weight; fall back to the last
        // non-empty class.
        while self.pools[class].is_empty() {
            class -= 1;
        }
        let pool = &self.pools[class];
        pool[rng.gen_range(0..pool.len())] as usize
    }

    /// Flip edge `e`, updating occupations and the pools of every edge
    /// touching its endpoints.
    pub fn flip(&mut self, e: usize) {
        self.chain.flip(e);
        let [a, b] = self.lat.edge(e).endpoints;
        for v in [a, b] {
            self.occupied[v] = !self.occupied[v];
            if self.occupied[v] {
                self.n_defects += 1;
            } else {
                self.n_defects -= 1;
            }
        }
        let lat = self.lat;
        for v in [a, b] {
            for &(_, f) in lat.incident(v) {
                self.reclassify(f);
            }
        }
    }

    fn reclassify(&mut self, e: usize) {
        let [a, b] = self.lat.edge(e).endpoints;
        let new = self.occupied[a] as u8 + self.occupied[b] as u8;
        let old = self.class_of[e];
        if new == old {
            return;
        }
        let pool = &mut self.pools[old as usize];
        let idx = self.pool_index[e] as usize;
        let last = *pool.last().expect("edge is in its pool");
        pool.swap_remove(idx);
        if last as usize != e {
            self.pool_index[last as usize] = idx as u32;
        }
        self.pool_index[e] = self.pools[new as usize].len() as u32;
        self.pools[new as usize].push(e as u32);
        self.class_of[e] = new;
    }

    /// One Gillespie event: draw the waiting time, pick an edge, flip it.
    pub fn gillespie_step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (f64, usize) {
        let dt = self.draw_waiting_time(rng);
        let e = self.select_edge(rng);
        self.time += dt;
        self.flip(e);
        (dt, e)
    }

    /// Run until `t_max`, calling `observe(state, t)` at each sample time
    /// with the state occupied at that instant. Returns the number of flips.
    pub fn evolve<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        t_max: f64,
        sample_times: &[f64],
        mut observe: impl FnMut(&SimState<'a>, f64),
    ) -> usize {
        debug_assert!(sample_times.windows(2).all(|w| w[0] <= w[1]));
        let mut next = sample_times.partition_point(|&t| t < self.time);
        let mut flips = 0;
        loop {
            let event_time = self.time + self.draw_waiting_time(rng);
            while next < sample_times.len() && sample_times[next] < event_time && sample_times[next] <= t_max {
                observe(self, sample_times[next]);
                next += 1;
            }
            if event_time > t_max {
                self.time = t_max;
                break;
            }
            let e = self.select_edge(rng);
            self.time = event_time;
            self.flip(e);
            flips += 1;
        }
        flips
    }

    /// Check every cached quantity against a recomputation from scratch.
    pub fn check_consistency(&self) -> Result<()> {
        let s = syndrome(self.lat, &self.chain);
        let occ: Vec<usize> = self.defects().collect();
        if s.defects() != occ.as_slice() || self.n_defects != occ.len() {
            return Err(Error::ContractViolation("defects differ from the chain's syndrome".into()));
        }
        for (e, edge) in self.lat.edges().iter().enumerate() {
            let c = self.occupied[edge.endpoints[0]] as u8 + self.occupied[edge.endpoints[1]] as u8;
            if c != self.class_of[e] || self.pools[c as usize][self.pool_index[e] as usize] as usize != e {
                return Err(Error::ContractViolation(format!("edge {e} sits in the wrong pool")));
            }
        }
        let (fast, slow) = (self.total_rate(), self.recompute_total_rate());
        if (fast - slow).abs() > 1e-12 * slow.max(1.0) {
            return Err(Error::ContractViolation(format!("total rate {fast} != {slow}")));
        }
        Ok(())
    }
}
