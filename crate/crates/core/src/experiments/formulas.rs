//! Closed-form threshold and lifetime laws.

use serde::{Deserialize, Serialize};

use crate::dynamics::equilibrium_defect_density;
use crate::error::{Error, Result};

/// Slope of the empirical degree law `p_c(q) = (μq + ν)/(q − 2)`.
pub const DEGREE_LAW_MU: f64 = 0.0231;
/// Intercept of the same law.
pub const DEGREE_LAW_NU: f64 = 0.111;

/// Probability of a net flip on an edge made of `n` parallel sub-edges that
/// each flip independently with probability `p`.
pub fn subedge_effective_p(p: f64, n: u32) -> Result<f64> {
    if !(0.0..=0.5).contains(&p) || n == 0 {
        return Err(Error::OutOfRange(format!("subedge_effective_p needs 0 ≤ p ≤ 1/2 and n ≥ 1 (got p = {p}, n = {n})")));
    }
    Ok(0.5 * (1.0 - (1.0 - 2.0 * p).powi(n as i32)))
}

/// Sub-edge error rate at which the net edge error reaches `p_c_square`.
pub fn subedge_threshold(p_c_square: f64, n: u32) -> Result<f64> {
    if !(0.0..=0.5).contains(&p_c_square) || n == 0 {
        return Err(Error::OutOfRange(format!(
            "subedge_threshold needs 0 ≤ p_c ≤ 1/2 and n ≥ 1 (got p_c = {p_c_square}, n = {n})"
        )));
    }
    Ok(0.5 * (1.0 - (1.0 - 2.0 * p_c_square).powf(1.0 / n as f64)))
}

/// `τ = 2 p_c (e^{J/T} + 1)`.
pub fn lifetime_formula(p_c: f64, t_over_j: f64) -> Result<f64> {
    if !(p_c > 0.0 && p_c < 0.5) {
        return Err(Error::OutOfRange(format!("p_c = {p_c} outside (0, 1/2)")));
    }
    if !(t_over_j > 0.0) {
        return Err(Error::OutOfRange(format!("T/J = {t_over_j} must be positive")));
    }
    Ok(2.0 * p_c / equilibrium_defect_density(t_over_j))
}

/// `ε = p_c (e^{J/T} + 1) / τ`, the constant relating defect density and
/// error accumulation.
pub fn epsilon_from_lifetime(p_c: f64, t_over_j: f64, tau: f64) -> f64 {
    p_c / equilibrium_defect_density(t_over_j) / tau
}

pub fn pc_from_degree(q: f64, mu: f64, nu: f64) -> Result<f64> {
    if !(q > 2.0) {
        return Err(Error::OutOfRange(format!("average degree q = {q} must exceed 2")));
    }
    Ok((mu * q + nu) / (q - 2.0))
}

pub fn lifetime_from_degree(q: f64, t_over_j: f64, mu: f64, nu: f64) -> Result<f64> {
    if !(t_over_j > 0.0) {
        return Err(Error::OutOfRange(format!("T/J = {t_over_j} must be positive")));
    }
    Ok(2.0 * pc_from_degree(q, mu, nu)? / equilibrium_defect_density(t_over_j))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreePoint {
    pub q: f64,
    pub p_c: f64,
    /// One-sigma uncertainty, 0 when unknown.
    pub p_c_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeFit {
    pub points: Vec<DegreePoint>,
    pub mu: f64,
    pub nu: f64,
    /// `p_c − p_c(q; μ, ν)` per point.
    pub residuals: Vec<f64>,
}

/// Ordinary least squares for `p_c (q − 2) = μ q + ν`.
pub fn fit_mu_nu(points: &[DegreePoint]) -> Result<DegreeFit> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!("need at least 2 points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|p| !(p.q > 2.0)) {
        return Err(Error::OutOfRange(format!("average degree q = {} must exceed 2", p.q)));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for p in points {
        let y = p.p_c * (p.q - 2.0);
        sx += p.q;
        sy += y;
        sxx += p.q * p.q;
        sxy += p.q * y;
    }
    let det = n * sxx - sx * sx;
    if det.abs() <= 1e-12 * (n * sxx).max(1.0) {
        return Err(Error::DegenerateFit("all points share the same degree".into()));
    }
    let mu = (n * sxy - sx * sy) / det;
    let nu = (sy - mu * sx) / n;
    let residuals = points.iter().map(|p| p.p_c - (mu * p.q + nu) / (p.q - 2.0)).collect();
    Ok(DegreeFit { points: points.to_vec(), mu, nu, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn subedge_identities() {
        for n in [1, 2, 7] {
            assert_eq!(subedge_effective_p(0.0, n).unwrap(), 0.0);
            assert!(close(subedge_effective_p(0.5, n).unwrap(), 0.5, 1e-15));
        }
        assert!(close(subedge_effective_p(0.137, 1).unwrap(), 0.137, 1e-15));
        assert!(close(subedge_threshold(0.104, 1).unwrap(), 0.104, 1e-15));
        assert!(subedge_effective_p(0.6, 2).is_err());
        assert!(subedge_effective_p(0.1, 0).is_err());
    }

    #[test]
    fn subedge_reference_values() {
        // 50-digit evaluations
        assert!(close(subedge_threshold(0.11, 2).unwrap(), 0.0584119566836, 1e-12));
        assert!(close(subedge_effective_p(0.0584, 2).unwrap(), 0.10997888, 1e-8));
        for n in [2, 3, 5, 9] {
            let pn = subedge_threshold(0.11, n).unwrap();
            assert!(close(subedge_effective_p(pn, n).unwrap(), 0.11, 1e-14));
        }
        // n p_n tends to -ln(1 - 2 p_c) / 2
        let limit = -(1.0f64 - 0.22).ln() / 2.0;
        assert!(close(limit, 0.1242306796, 1e-9));
        assert!(close(100.0 * subedge_threshold(0.11, 100).unwrap(), 0.1240764748, 1e-9));
    }

    #[test]
    fn lifetime_reference_values() {
        assert!(close(lifetime_formula(0.1, 0.3).unwrap(), 5.80632, 1e-5));
        assert!(close(lifetime_formula(0.13, 0.3).unwrap(), 7.54822, 1e-5));
        assert!(close(lifetime_formula(0.1, 1e9).unwrap(), 0.4, 1e-8));
        assert!(lifetime_formula(0.0, 0.3).is_err());
        assert!(lifetime_formula(0.1, 0.0).is_err());
        let tau = lifetime_formula(0.12, 0.31).unwrap();
        assert!(close(epsilon_from_lifetime(0.12, 0.31, tau), 0.5, 1e-14));
    }

    #[test]
    fn degree_law_reference_values() {
        let (mu, nu) = (DEGREE_LAW_MU, DEGREE_LAW_NU);
        assert!(close(pc_from_degree(4.0, mu, nu).unwrap(), 0.1017, 1e-12));
        assert!(close(pc_from_degree(32.0 / 9.0, mu, nu).unwrap(), 0.124157142857, 1e-11));
        assert!(close(lifetime_from_degree(4.0, 0.3, mu, nu).unwrap(), 5.90503, 1e-5));
        assert!(pc_from_degree(2.0, mu, nu).is_err());
    }

    #[test]
    fn fit_recovers_exact_parameters() {
        let pts: Vec<DegreePoint> = [3.0, 6.0]
            .iter()
            .map(|&q| DegreePoint { q, p_c: pc_from_degree(q, 0.0231, 0.111).unwrap(), p_c_err: 0.0 })
            .collect();
        let fit = fit_mu_nu(&pts).unwrap();
        assert!(close(fit.mu, 0.0231, 1e-12) && close(fit.nu, 0.111, 1e-12));
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        assert!(fit_mu_nu(&pts[..1]).is_err());
        let same = vec![pts[0].clone(), pts[0].clone()];
        assert!(matches!(fit_mu_nu(&same), Err(Error::DegenerateFit(_))));
    }
}
