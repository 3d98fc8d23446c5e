//! Mean-field picture for the regime where the critical fitness exceeds 1.

use super::critical_fitness;
use crate::error::{ModelError, Result};

/// Critical birth probabilities `1/2 < 2/(3+r) < 1/(1+r)`.
pub fn critical_points(r: f64) -> (f64, f64, f64) {
    (0.5, 2.0 / (3.0 + r), 1.0 / (r + 1.0))
}

/// Exponent `gamma = (1 - p - p r) / (2p - 1)` of the leftmost-site decay.
pub fn meanfield_gamma(p: f64, r: f64) -> Result<f64> {
    if p <= 0.5 {
        return Err(ModelError::Domain(format!(
            "mean-field exponent needs p > 1/2, got {p}"
        )));
    }
    Ok((1.0 - p - p * r) / (2.0 * p - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanFieldPhase {
    /// `None` in phase 4, where the exponent is not defined.
    pub gamma: Option<f64>,
    pub phase: u8,
    pub pc0: f64,
    pub pc1: f64,
    pub pc2: f64,
}

impl MeanFieldPhase {
    /// Predicted growth exponent `1 - gamma` of the number of sites.
    pub fn site_growth_exponent(&self) -> Option<f64> {
        self.gamma.map(|g| 1.0 - g)
    }
}

/// Phase 1 above `1/(1+r)`, phase 2 on `(2/(3+r), 1/(1+r)]`, phase 3 on
/// `(1/2, 2/(3+r)]`, phase 4 at or below `1/2`.
pub fn classify_phase(p: f64, r: f64) -> MeanFieldPhase {
    let (pc0, pc1, pc2) = critical_points(r);
    let phase = if p <= pc0 {
        4
    } else if p <= pc1 {
        3
    } else if p <= pc2 {
        2
    } else {
        1
    };
    MeanFieldPhase {
        gamma: meanfield_gamma(p, r).ok(),
        phase,
        pc0,
        pc1,
        pc2,
    }
}

/// Distance `y_t = (f_c - 1) / (C t^gamma - 1)` of the leftmost site from 1.
pub fn meanfield_y(t: f64, c: f64, p: f64, r: f64) -> Result<f64> {
    let gamma = meanfield_gamma(p, r)?;
    let denom = c * t.powf(gamma) - 1.0;
    if denom <= 0.0 {
        return Err(ModelError::Domain(format!(
            "C t^gamma = {} <= 1 (pre-asymptotic)",
            denom + 1.0
        )));
    }
    Ok((critical_fitness(p, r) - 1.0) / denom)
}

/// Approximate number of sites `r p t y_t`.
pub fn meanfield_sites(t: f64, c: f64, p: f64, r: f64) -> Result<f64> {
    Ok(r * p * t * meanfield_y(t, c, p, r)?)
}
