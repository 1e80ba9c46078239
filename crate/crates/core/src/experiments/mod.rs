//! Threshold, lifetime and Josephson-junction experiments, and the closed
//! forms they are compared with.

pub mod formulas;
pub mod jj;
pub mod lifetime;
pub mod output;
pub mod threshold;

pub use formulas::{
    epsilon_from_lifetime, fit_mu_nu, lifetime_formula, lifetime_from_degree, pc_from_degree, subedge_effective_p,
    subedge_threshold, DegreeFit, DegreePoint, DEGREE_LAW_MU, DEGREE_LAW_NU,
};
pub use jj::{dual_degree, jj_couplings, jj_coherence_scan, JJRow, JJScan, JJSimulation, ALPHA};
pub use lifetime::{anyon_density_check, decay_curve, estimate_lifetime, DecayCurve, DecayOptions, DensityEstimate, LifetimeOptions, LifetimeResult};
pub use threshold::{estimate_threshold, ThresholdConfig, ThresholdPoint, ThresholdResult};

use crate::error::Result;
use crate::lattice::{Family, PeriodicLattice, Sector};

/// The lattice whose vertices carry the defects of `sector`.
pub fn sector_lattice(family: Family, sector: Sector, size: usize) -> Result<PeriodicLattice> {
    let lat = PeriodicLattice::generate(family, size)?;
    Ok(match sector {
        Sector::Primal => lat,
        Sector::Dual => lat.dual(),
    })
}
