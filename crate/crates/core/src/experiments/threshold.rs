//! Error-tolerance thresholds from i.i.d. noise.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::sample_iid_errors;
use crate::decoder::{Decoder, Sparsifier};
use crate::error::{Error, Result};
use crate::lattice::{Family, Sector};
use crate::rng::stream;

use super::sector_lattice;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub family: Family,
    pub sector: Sector,
    pub sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub sparsifier: Sparsifier,
    /// Parametric bootstrap replicates for the interval.
    pub bootstrap: usize,
}

impl ThresholdConfig {
    pub fn new(family: Family, sector: Sector, sizes: Vec<usize>, p_grid: Vec<f64>, samples: usize, seed: u64) -> Self {
        ThresholdConfig {
            family,
            sector,
            sizes,
            p_grid,
            samples,
            seed,
            sparsifier: Sparsifier::default(),
            bootstrap: 400,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    #[serde(rename = "L")]
    pub linear_size: usize,
    pub p: f64,
    pub n_success: u64,
    pub n_total: u64,
}

impl ThresholdPoint {
    pub fn success_rate(&self) -> f64 {
        self.n_success as f64 / self.n_total as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: Family,
    pub sector: Sector,
    pub seed: u64,
    /// Ordered by size, then by position in the p grid.
    pub points: Vec<ThresholdPoint>,
    /// Crossing of each consecutive pair of sizes.
    pub pair_crossings: Vec<f64>,
    pub p_c: f64,
    /// Bootstrap standard error of `p_c`.
    pub p_c_err: f64,
    /// 95% percentile interval.
    pub ci: (f64, f64),
}

/// Success counts for every `(L, p)` in the grid.
pub fn success_grid(cfg: &ThresholdConfig) -> Result<Vec<ThresholdPoint>> {
    if cfg.samples == 0 {
        return Err(Error::OutOfRange("threshold runs need at least one sample per point".into()));
    }
    if let Some(p) = cfg.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::OutOfRange(format!("error probability {p} outside [0, 1]")));
    }
    let lattices = cfg
        .sizes
        .iter()
        .map(|&l| sector_lattice(cfg.family, cfg.sector, l))
        .collect::<Result<Vec<_>>>()?;
    let work: Vec<(usize, usize)> = (0..cfg.sizes.len())
        .flat_map(|li| (0..cfg.p_grid.len()).map(move |pi| (li, pi)))
        .collect();
    Ok(work
        .par_iter()
        .map(|&(li, pi)| {
            let lat = &lattices[li];
            let l = cfg.sizes[li];
            let p = cfg.p_grid[pi];
            let mut decoder = Decoder::new(lat, cfg.sparsifier);
            let mut ok = 0;
            for s in 0..cfg.samples {
                let mut rng = stream(cfg.seed, &[l as u64, pi as u64, s as u64]);
                let err = sample_iid_errors(lat, p, &mut rng).expect("p validated");
                ok += decoder.judge(&err).is_success() as u64;
            }
            ThresholdPoint { linear_size: l, p, n_success: ok, n_total: cfg.samples as u64 }
        })
        .collect())
}

/// Where the larger size's success curve drops below the smaller one's.
/// Among several sign changes of the difference `d` the one maximizing
/// `Σ_{j≤i} d_j − Σ_{j>i} d_j` wins, so isolated noisy flips in the tails
/// lose to the bracket that separates the bulk of positive and negative
/// differences; the root is linearly interpolated.
pub fn crossing(p_grid: &[f64], small: &[f64], large: &[f64]) -> Option<f64> {
    let d: Vec<f64> = large.iter().zip(small).map(|(a, b)| a - b).collect();
    let total: f64 = d.iter().sum();
    let mut before = 0.0;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..d.len().saturating_sub(1) {
        before += d[i];
        let (d0, d1) = (d[i], d[i + 1]);
        if d0 > 0.0 && d1 <= 0.0 || d0 >= 0.0 && d1 < 0.0 {
            let score = 2.0 * before - total;
            let root = p_grid[i] + (p_grid[i + 1] - p_grid[i]) * d0 / (d0 - d1);
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, root));
            }
        }
    }
    best.map(|(_, root)| root)
}

fn rates_by_size(points: &[ThresholdPoint], n_sizes: usize, n_p: usize, counts: &[u64]) -> Vec<Vec<f64>> {
    (0..n_sizes)
        .map(|li| (0..n_p).map(|pi| counts[li * n_p + pi] as f64 / points[li * n_p + pi].n_total as f64).collect())
        .collect()
}

fn pooled_crossing(p_grid: &[f64], rates: &[Vec<f64>]) -> Option<(f64, Vec<f64>)> {
    let pairs: Option<Vec<f64>> = rates.windows(2).map(|w| crossing(p_grid, &w[0], &w[1])).collect();
    let pairs = pairs?;
    Some((pairs.iter().sum::<f64>() / pairs.len() as f64, pairs))
}

/// Threshold from the crossing of finite-size success curves, averaged
/// over consecutive size pairs, with a parametric bootstrap interval.
pub fn estimate_threshold(cfg: &ThresholdConfig) -> Result<ThresholdResult> {
    if cfg.sizes.len() < 2 {
        return Err(Error::OutOfRange("threshold estimation needs at least two sizes".into()));
    }
    if cfg.p_grid.len() < 2 || cfg.p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("p grid must hold at least two strictly increasing values".into()));
    }
    let mut sorted = cfg.clone();
    sorted.sizes.sort_unstable();
    let points = success_grid(&sorted)?;
    from_points(&sorted, points)
}

/// Analysis step of [`estimate_threshold`] on already measured counts.
pub fn from_points(cfg: &ThresholdConfig, points: Vec<ThresholdPoint>) -> Result<ThresholdResult> {
    let (ns, np) = (cfg.sizes.len(), cfg.p_grid.len());
    let counts: Vec<u64> = points.iter().map(|p| p.n_success).collect();
    let rates = rates_by_size(&points, ns, np, &counts);
    let (p_c, pair_crossings) = pooled_crossing(&cfg.p_grid, &rates).ok_or_else(|| {
        Error::NoCrossing(format!(
            "success curves of {} {} for L = {:?} do not cross within p ∈ [{}, {}]",
            cfg.family,
            cfg.sector,
            cfg.sizes,
            cfg.p_grid[0],
            cfg.p_grid[np - 1]
        ))
    })?;

    let mut rng = stream(cfg.seed, &[u64::MAX]);
    let mut reps: Vec<f64> = (0..cfg.bootstrap)
        .filter_map(|_| {
            let resampled: Vec<u64> = points
                .iter()
                .map(|pt| {
                    let rate = pt.success_rate();
                    Binomial::new(pt.n_total, rate).expect("valid binomial").sample(&mut rng)
                })
                .collect();
            pooled_crossing(&cfg.p_grid, &rates_by_size(&points, ns, np, &resampled)).map(|c| c.0)
        })
        .collect();
    reps.sort_unstable_by(|a, b| a.total_cmp(b));
    let (p_c_err, ci) = if reps.len() >= 2 {
        let m = reps.iter().sum::<f64>() / reps.len() as f64;
        let var = reps.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;
        let q = |f: f64| reps[((f * (reps.len() - 1) as f64).round() as usize).min(reps.len() - 1)];
        (var.sqrt(), (q(0.025), q(0.975)))
    } else {
        (0.0, (p_c, p_c))
    };
    Ok(ThresholdResult {
        family: cfg.family,
        sector: cfg.sector,
        seed: cfg.seed,
        points,
        pair_crossings,
        p_c,
        p_c_err,
        ci,
    })
}
