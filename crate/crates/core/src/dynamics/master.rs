//! Exact integration of the rate equation over all `2^|E|` chains of a tiny
//! lattice.

use crate::error::{Error, Result};
use crate::lattice::PeriodicLattice;

use super::RateModel;

/// Largest system the oracle will enumerate.
pub const MAX_EDGES: usize = 12;

#[derive(Clone, Debug)]
pub struct MasterSolution {
    /// Probability of each chain, indexed by the chain's edge bitmask.
    pub probabilities: Vec<f64>,
    /// Step size of the accepted integration.
    pub step: f64,
}

struct Generator {
    n_edges: usize,
    /// Flip rate of edge `i` out of state `s`, at `s * n_edges + i`.
    rates: Vec<f64>,
    out: Vec<f64>,
}

impl Generator {
    fn new(lat: &PeriodicLattice, model: &RateModel) -> Self {
        let n_edges = lat.num_edges();
        let class_rates = model.class_rates();
        let n_states = 1usize << n_edges;
        let mut rates = vec![0.0; n_states * n_edges];
        let mut out = vec![0.0; n_states];
        for s in 0..n_states {
            let occ = occupation(lat, s);
            for (i, edge) in lat.edges().iter().enumerate() {
                let [a, b] = edge.endpoints;
                let c = ((occ >> a) & 1) + ((occ >> b) & 1);
                let r = class_rates[c as usize];
                rates[s * n_edges + i] = r;
                out[s] += r;
            }
        }
        Generator { n_edges, rates, out }
    }

    fn max_rate(&self) -> f64 {
        self.out.iter().copied().fold(0.0, f64::max)
    }

    /// `dp/dt` for each state: inflow from every single-flip neighbour minus
    /// outflow.
    fn apply(&self, p: &[f64], dp: &mut [f64]) {
        let n = self.n_edges;
        for (s, d) in dp.iter_mut().enumerate() {
            let mut inflow = 0.0;
            for i in 0..n {
                let from = s ^ (1 << i);
                inflow += self.rates[from * n + i] * p[from];
            }
            *d = inflow - self.out[s] * p[s];
        }
    }

    fn integrate(&self, t: f64, steps: usize) -> Vec<f64> {
        let n_states = self.out.len();
        let mut p = vec![0.0; n_states];
        p[0] = 1.0;
        if steps == 0 {
            return p;
        }
        let h = t / steps as f64;
        let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n_states], vec![0.0; n_states], vec![0.0; n_states], vec![0.0; n_states]);
        let mut tmp = vec![0.0; n_states];
        for _ in 0..steps {
            self.apply(&p, &mut k1);
            for s in 0..n_states {
                tmp[s] = p[s] + 0.5 * h * k1[s];
            }
            self.apply(&tmp, &mut k2);
            for s in 0..n_states {
                tmp[s] = p[s] + 0.5 * h * k2[s];
            }
            self.apply(&tmp, &mut k3);
            for s in 0..n_states {
                tmp[s] = p[s] + h * k3[s];
            }
            self.apply(&tmp, &mut k4);
            for s in 0..n_states {
                p[s] += h / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
            }
        }
        p
    }
}

/// Defect occupation bitmask of the chain with edge bitmask `state`.
fn occupation(lat: &PeriodicLattice, state: usize) -> u64 {
    let mut occ = 0u64;
    for (i, edge) in lat.edges().iter().enumerate() {
        if state >> i & 1 == 1 {
            occ ^= 1 << edge.endpoints[0];
            occ ^= 1 << edge.endpoints[1];
        }
    }
    occ
}

/// Probabilities of every chain at time `t`, starting from the empty chain.
///
/// Fixed-step RK4, starting at a step no larger than `0.02 / R_max` and
/// halving until successive answers agree to `1e-8`.
pub fn master_equation_oracle(lat: &PeriodicLattice, model: &RateModel, t: f64) -> Result<MasterSolution> {
    if lat.num_edges() > MAX_EDGES {
        return Err(Error::TooLarge(format!(
            "master equation needs |E| <= {MAX_EDGES}, lattice has {}",
            lat.num_edges()
        )));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange(format!("time {t} must be finite and non-negative")));
    }
    let gen = Generator::new(lat, model);
    if t == 0.0 {
        return Ok(MasterSolution {
            probabilities: gen.integrate(0.0, 0),
            step: 0.0,
        });
    }
    let mut steps = (t * gen.max_rate() / 0.02).ceil().max(1.0) as usize;
    let mut coarse = gen.integrate(t, steps);
    for _ in 0..8 {
        steps *= 2;
        let fine = gen.integrate(t, steps);
        let diff = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        coarse = fine;
        if diff < 1e-8 {
            break;
        }
    }
    let total: f64 = coarse.iter().sum();
    debug_assert!((total - 1.0).abs() < 1e-9, "probability leaked: {total}");
    Ok(MasterSolution {
        probabilities: coarse,
        step: t / steps as f64,
    })
}

/// Expected fraction of vertices carrying a defect.
pub fn marginal_defect_density(lat: &PeriodicLattice, probabilities: &[f64]) -> f64 {
    let mean: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(s, p)| p * occupation(lat, s).count_ones() as f64)
        .sum();
    mean / lat.num_vertices() as f64
}
