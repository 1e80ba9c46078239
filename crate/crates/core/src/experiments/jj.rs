//! Coherence of a Josephson-junction array memory as a function of lattice
//! degree.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dynamics::RateModel;
use crate::error::{Error, Result};
use crate::lattice::{Family, PeriodicLattice, Sector};

use super::formulas::pc_from_degree;
use super::lifetime::{estimate_lifetime, LifetimeOptions};
use super::sector_lattice;

/// Junction constant in the vertex coupling.
pub const ALPHA: f64 = 1.61;

/// Largest `J/T` for which a direct simulation is attempted.
pub const MAX_SIMULATED_J_OVER_T: f64 = 5.0;
/// Smallest `J/T` for which a direct simulation is compared. Below it the
/// dropped `+1` of the formula dominates any comparison.
pub const MIN_SIMULATED_J_OVER_T: f64 = 2.0;

/// Dual degree from `2/q + 2/q̄ = 1`.
pub fn dual_degree(q: f64) -> f64 {
    2.0 * q / (q - 2.0)
}

/// `(J_v/E_C, J_f/E_C)` at `x = E_J/E_C`.
pub fn jj_couplings(x: f64, q: f64) -> Result<(f64, f64)> {
    if !(x > 1.0) {
        return Err(Error::OutOfRange(format!(
            "x = {x} is outside the toric-code regime, which needs x = E_J/E_C > 1"
        )));
    }
    if !(q > 2.0) {
        return Err(Error::OutOfRange(format!("average degree q = {q} must exceed 2")));
    }
    let jv = x.powf(0.75) * (-q * ALPHA * x.sqrt()).exp();
    let jf = x / dual_degree(q);
    Ok((jv, jf))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JJRow {
    pub q: f64,
    pub q_bar: f64,
    pub jv_over_ec: f64,
    pub jf_over_ec: f64,
    /// Primal lifetime; may be `+∞`.
    pub tau_p: f64,
    pub tau_d: f64,
    pub coherence: f64,
    /// Directly simulated primal lifetime, when attempted.
    pub simulated_tau_p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JJScan {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
    pub rows: Vec<JJRow>,
    /// `q` of the row with the largest coherence (first on ties).
    pub best_q: f64,
}

/// Simulation settings for the cross-check rows.
#[derive(Clone, Debug, PartialEq)]
pub struct JJSimulation {
    pub linear_size: usize,
    pub lifetime: LifetimeOptions,
}

/// Lattice family whose primal degree is exactly `q`, if one exists.
pub fn family_with_degree(q: f64) -> Option<(Family, Sector)> {
    let mut candidates: Vec<(Family, Sector)> = Family::ALL_FIXED.iter().map(|&f| (f, Sector::Primal)).collect();
    candidates.extend((2..=4).map(|n| (Family::Subedge(n), Sector::Primal)));
    candidates.extend(Family::ALL_FIXED.iter().map(|&f| (f, Sector::Dual)));
    candidates.into_iter().find(|&(f, s)| {
        let l = f.cell_size() * 2;
        let Ok(lat) = sector_lattice(f, s, l) else { return false };
        let d: Ratio<i64> = lat.average_degree();
        (*d.numer() as f64 / *d.denom() as f64 - q).abs() < 1e-9
    })
}

/// Lifetimes as printed: `τ_p = 2(μq+ν)/(q−2)·exp(J_v/T)` and
/// `τ_d = 2(μq̄+ν)/(q̄−2)·exp(x q̄/T)`, without the `+1` of the general
/// lifetime law. `simulate` additionally runs the primal dynamics for rows
/// with a matching lattice and a simulable `J_v/T`.
pub fn jj_coherence_scan(x: f64, t: f64, q_grid: &[f64], mu: f64, nu: f64, simulate: Option<&JJSimulation>) -> Result<JJScan> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange(format!("temperature T = {t} must be positive")));
    }
    if q_grid.is_empty() {
        return Err(Error::OutOfRange("empty degree grid".into()));
    }
    let mut rows = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let (jv, jf) = jj_couplings(x, q)?;
        let q_bar = dual_degree(q);
        let tau_p = 2.0 * pc_from_degree(q, mu, nu)? * (jv / t).exp();
        let tau_d = 2.0 * pc_from_degree(q_bar, mu, nu)? * (x * q_bar / t).exp();
        let simulated_tau_p = match simulate {
            Some(sim) if (MIN_SIMULATED_J_OVER_T..=MAX_SIMULATED_J_OVER_T).contains(&(jv / t)) => {
                match family_with_degree(q) {
                    Some((family, sector)) => {
                        let lat = fitting_lattice(family, sector, sim.linear_size)?;
                        let model = RateModel::new(t / jv)?;
                        Some(estimate_lifetime(&lat, model, &sim.lifetime)?.tau)
                    }
                    None => None,
                }
            }
            _ => None,
        };
        rows.push(JJRow {
            q,
            q_bar,
            jv_over_ec: jv,
            jf_over_ec: jf,
            tau_p,
            tau_d,
            coherence: tau_p.min(tau_d),
            simulated_tau_p,
        });
    }
    let best_q = rows
        .iter()
        .fold(None::<&JJRow>, |best, r| match best {
            Some(b) if b.coherence >= r.coherence => Some(b),
            _ => Some(r),
        })
        .map(|r| r.q)
        .expect("non-empty grid");
    Ok(JJScan { x, t, alpha: ALPHA, rows, best_q })
}

/// The size nearest `l` that the family accepts.
fn fitting_lattice(family: Family, sector: Sector, l: usize) -> Result<PeriodicLattice> {
    let c = family.cell_size();
    sector_lattice(family, sector, (l / c).max(1) * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::formulas::{DEGREE_LAW_MU as MU, DEGREE_LAW_NU as NU};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn couplings_reference_values() {
        // arbitrary-precision evaluations at x = 1.01
        let want = [(3.0, 0.0078548259), (10.0 / 3.0, 0.0045803929), (4.0, 0.0015575252), (6.0, 6.12396e-5)];
        for (q, jv) in want {
            assert!(rel(jj_couplings(1.01, q).unwrap().0, jv) < 1e-6, "q = {q}");
        }
        assert!((jj_couplings(1.01, 3.0).unwrap().1 - 1.01 / 6.0).abs() < 1e-15);
        assert!(jj_couplings(1.0, 3.0).is_err());
        assert!(jj_couplings(1.5, 2.0).is_err());
        let jv: Vec<f64> = [3.0, 3.5, 4.0, 5.0, 6.0].iter().map(|&q| jj_couplings(2.0, q).unwrap().0).collect();
        assert!(jv.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn hexagonal_beats_square_at_low_temperature() {
        let grid = [3.0, 10.0 / 3.0, 4.0, 5.0, 6.0];
        let scan = jj_coherence_scan(1.01, 0.003, &grid, MU, NU, None).unwrap();
        assert_eq!(scan.best_q, 3.0);
        let want_tau_p = [4.94456660616, 1.29816, 0.341842306, 0.167373, 0.127374];
        for (row, want) in scan.rows.iter().zip(want_tau_p) {
            assert!(rel(row.tau_p, want) < 1e-5, "q = {}: {}", row.q, row.tau_p);
            assert_eq!(row.coherence, row.tau_p.min(row.tau_d));
        }
        // x q̄ / T = 2020 overflows
        assert_eq!(scan.rows[0].tau_d, f64::INFINITY);
        assert_eq!(scan.rows[0].coherence, scan.rows[0].tau_p);
        assert!(scan.rows.iter().all(|r| r.simulated_tau_p.is_none()));
    }

    #[test]
    fn degrees_map_to_families() {
        assert_eq!(family_with_degree(4.0), Some((Family::Square, Sector::Primal)));
        assert_eq!(family_with_degree(3.0), Some((Family::Hexagonal, Sector::Primal)));
        assert_eq!(family_with_degree(32.0 / 9.0), Some((Family::ReducedSquare, Sector::Primal)));
        assert_eq!(family_with_degree(40.0 / 11.0), Some((Family::Union, Sector::Dual)));
        assert_eq!(family_with_degree(8.0), Some((Family::Subedge(2), Sector::Primal)));
        assert_eq!(family_with_degree(5.0), None);
    }
}
