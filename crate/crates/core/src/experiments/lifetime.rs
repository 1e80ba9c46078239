//! Thermal decay of the stored logical value and the resulting lifetime.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{Decoder, Sparsifier};
use crate::dynamics::{RateModel, SimState};
use crate::error::{Error, Result};
use crate::lattice::PeriodicLattice;
use crate::rng::stream;

/// Ensemble of decoded readouts along thermal trajectories.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub family: String,
    pub sector: String,
    #[serde(rename = "L")]
    pub linear_size: usize,
    pub t_over_j: f64,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_runs: usize,
    /// `ok[r][k]`: run `r` decoded correctly at `times[k]`.
    #[serde(skip)]
    pub ok: Vec<Vec<bool>>,
}

impl DecayCurve {
    /// First time the mean falls below `level`, linearly interpolated.
    pub fn crossing(&self, level: f64) -> Option<f64> {
        crossing_time(&self.times, &self.mean, level)
    }

    /// Largest drop of the mean per unit time between samples.
    pub fn max_slope(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.mean.windows(2))
            .map(|(t, m)| (m[0] - m[1]) / (t[1] - t[0]))
            .fold(0.0, f64::max)
    }

    /// Mean slope between the `hi` and `lo` crossings, `(hi − lo)/(t_lo − t_hi)`.
    pub fn transition_slope(&self, hi: f64, lo: f64) -> Option<f64> {
        let (a, b) = (self.crossing(hi)?, self.crossing(lo)?);
        (b > a).then(|| (hi - lo) / (b - a))
    }
}

fn crossing_time(times: &[f64], mean: &[f64], level: f64) -> Option<f64> {
    let k = mean.iter().position(|&m| m < level)?;
    if k == 0 {
        return Some(times[0]);
    }
    let (m0, m1) = (mean[k - 1], mean[k]);
    Some(times[k - 1] + (times[k] - times[k - 1]) * (m0 - level) / (m0 - m1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    pub n_runs: usize,
    pub seed: u64,
    pub sparsifier: Sparsifier,
}

/// Each run starts from the error-free state; at every sample time a copy
/// of the chain is decoded and the readout recorded as ±1.
pub fn decay_curve(lat: &PeriodicLattice, model: RateModel, times: &[f64], opts: DecayOptions) -> Result<DecayCurve> {
    if opts.n_runs == 0 {
        return Err(Error::OutOfRange("decay curves need at least one run".into()));
    }
    if times.is_empty() || times.windows(2).any(|w| w[0] > w[1]) || times[0] < 0.0 {
        return Err(Error::OutOfRange("sample times must be non-empty, non-negative and sorted".into()));
    }
    let t_max = *times.last().expect("non-empty");
    let ok: Vec<Vec<bool>> = (0..opts.n_runs)
        .into_par_iter()
        .map_init(
            || Decoder::new(lat, opts.sparsifier),
            |decoder, r| {
                let mut rng = stream(opts.seed, &[r as u64]);
                let mut state = SimState::new(lat, model);
                let mut row = Vec::with_capacity(times.len());
                state.evolve(&mut rng, t_max, times, |s, _| {
                    row.push(s.chain().is_empty() || decoder.judge(s.chain()).is_success());
                });
                while row.len() < times.len() {
                    row.push(decoder.judge(state.chain()).is_success());
                }
                row
            },
        )
        .collect();
    let n = opts.n_runs as f64;
    let mut mean = Vec::with_capacity(times.len());
    let mut stderr = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let good = ok.iter().filter(|row| row[k]).count() as f64;
        let m = (2.0 * good - n) / n;
        mean.push(m);
        let var = if opts.n_runs > 1 { (1.0 - m * m) * n / (n - 1.0) } else { 0.0 };
        stderr.push((var / n).sqrt());
    }
    Ok(DecayCurve {
        family: lat.family().to_string(),
        sector: lat.sector().to_string(),
        linear_size: lat.linear_size(),
        t_over_j: model.t_over_j(),
        times: times.to_vec(),
        mean,
        stderr,
        n_runs: opts.n_runs,
        ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifetimeOptions {
    pub n_runs: usize,
    pub seed: u64,
    pub sparsifier: Sparsifier,
    /// Initial simulated window; extended once by `window_growth`.
    pub t_max: f64,
    pub n_samples: usize,
    pub window_growth: f64,
    pub criterion: f64,
    pub bootstrap: usize,
}

impl LifetimeOptions {
    pub fn new(n_runs: usize, seed: u64, t_max: f64) -> Self {
        LifetimeOptions {
            n_runs,
            seed,
            sparsifier: Sparsifier::default(),
            t_max,
            n_samples: 80,
            window_growth: 3.0,
            criterion: 0.5,
            bootstrap: 400,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LifetimeResult {
    pub family: String,
    pub sector: String,
    #[serde(rename = "L")]
    pub linear_size: usize,
    pub t_over_j: f64,
    pub tau: f64,
    /// Bootstrap standard error over runs.
    pub tau_err: f64,
    pub criterion: f64,
    /// Crossing times at mean levels 0.25 and 0.75, where reached.
    pub sensitivity: Vec<(f64, Option<f64>)>,
    pub curve: DecayCurve,
}

/// Time at which the mean decoded readout crosses `opts.criterion`.
pub fn estimate_lifetime(lat: &PeriodicLattice, model: RateModel, opts: &LifetimeOptions) -> Result<LifetimeResult> {
    if !(opts.t_max > 0.0) || opts.n_samples < 2 {
        return Err(Error::OutOfRange("lifetime window must be positive with at least two samples".into()));
    }
    if !(opts.criterion > -1.0 && opts.criterion < 1.0) {
        return Err(Error::OutOfRange(format!("crossing level {} outside (-1, 1)", opts.criterion)));
    }
    let decay = DecayOptions { n_runs: opts.n_runs, seed: opts.seed, sparsifier: opts.sparsifier };
    let grid = |t_max: f64| -> Vec<f64> {
        (0..opts.n_samples).map(|k| t_max * k as f64 / (opts.n_samples - 1) as f64).collect()
    };
    let mut curve = decay_curve(lat, model, &grid(opts.t_max), decay)?;
    if curve.crossing(opts.criterion).is_none() {
        curve = decay_curve(lat, model, &grid(opts.t_max * opts.window_growth), decay)?;
    }
    let tau = curve.crossing(opts.criterion).ok_or_else(|| {
        Error::NoCrossing(format!(
            "mean readout of {} L = {} at T/J = {} stays above {} up to t = {}",
            lat.family_tag(),
            lat.linear_size(),
            model.t_over_j(),
            opts.criterion,
            curve.times.last().copied().unwrap_or(0.0)
        ))
    })?;

    let mut rng = stream(opts.seed, &[u64::MAX]);
    let runs = curve.ok.len();
    let mut reps = Vec::with_capacity(opts.bootstrap);
    let mut counts = vec![0usize; curve.times.len()];
    for _ in 0..opts.bootstrap {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..runs {
            let row = &curve.ok[rng.gen_range(0..runs)];
            for (c, &good) in counts.iter_mut().zip(row) {
                *c += good as usize;
            }
        }
        let mean: Vec<f64> = counts.iter().map(|&g| (2.0 * g as f64 - runs as f64) / runs as f64).collect();
        if let Some(t) = crossing_time(&curve.times, &mean, opts.criterion) {
            reps.push(t);
        }
    }
    let tau_err = if reps.len() >= 2 {
        let m = reps.iter().sum::<f64>() / reps.len() as f64;
        (reps.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (reps.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let sensitivity = [0.25, 0.75].iter().map(|&c| (c, curve.crossing(c))).collect();
    Ok(LifetimeResult {
        family: curve.family.clone(),
        sector: curve.sector.clone(),
        linear_size: curve.linear_size,
        t_over_j: curve.t_over_j,
        tau,
        tau_err,
        criterion: opts.criterion,
        sensitivity,
        curve,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    /// Mean defects per vertex over runs and the sampling window.
    pub density: f64,
    pub stderr: f64,
    pub n_runs: usize,
}

/// Long-time defect density: each run is sampled at ten evenly spaced
/// times in `[t_eq, 2 t_eq]`.
pub fn anyon_density_check(lat: &PeriodicLattice, model: RateModel, t_eq: f64, n_runs: usize, seed: u64) -> Result<DensityEstimate> {
    if n_runs == 0 || !(t_eq >= 0.0) {
        return Err(Error::OutOfRange("density check needs n_runs ≥ 1 and t_eq ≥ 0".into()));
    }
    let times: Vec<f64> = (0..10).map(|k| t_eq * (1.0 + k as f64 / 9.0)).collect();
    let nv = lat.num_vertices() as f64;
    let per_run: Vec<f64> = (0..n_runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, &[r as u64]);
            let mut state = SimState::new(lat, model);
            let mut sum = 0.0;
            let mut k = 0;
            state.evolve(&mut rng, times[9], &times, |s, _| {
                sum += s.num_defects() as f64 / nv;
                k += 1;
            });
            while k < times.len() {
                sum += state.num_defects() as f64 / nv;
                k += 1;
            }
            sum / times.len() as f64
        })
        .collect();
    let n = n_runs as f64;
    let density = per_run.iter().sum::<f64>() / n;
    let var = if n_runs > 1 { per_run.iter().map(|d| (d - density).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Ok(DensityEstimate { density, stderr: (var / n).sqrt(), n_runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::equilibrium_defect_density;
    use crate::lattice::Family;

    #[test]
    fn crossing_time_interpolates() {
        let t = [0.0, 1.0, 2.0];
        assert_eq!(crossing_time(&t, &[1.0, 0.6, 0.2], 0.5), Some(1.25));
        assert_eq!(crossing_time(&t, &[1.0, 0.9, 0.8], 0.5), None);
    }

    #[test]
    fn decay_starts_at_one_and_is_reproducible() {
        let lat = PeriodicLattice::generate(Family::Square, 8).unwrap();
        let model = RateModel::new(0.5).unwrap();
        let times = [0.0, 1.0, 4.0];
        let opts = DecayOptions { n_runs: 50, seed: 3, sparsifier: Sparsifier::default() };
        let a = decay_curve(&lat, model, &times, opts).unwrap();
        assert_eq!(a.mean[0], 1.0);
        assert!(a.mean.iter().all(|m| (-1.0..=1.0).contains(m)));
        assert_eq!(a, decay_curve(&lat, model, &times, opts).unwrap());
    }

    #[test]
    fn equilibrium_density_at_high_temperature() {
        let lat = PeriodicLattice::generate(Family::Square, 16).unwrap();
        let est = anyon_density_check(&lat, RateModel::new(0.5).unwrap(), 30.0, 100, 4).unwrap();
        let want = equilibrium_defect_density(0.5);
        assert!((est.density - want).abs() < 0.1 * want, "{est:?} vs {want}");
    }
}
