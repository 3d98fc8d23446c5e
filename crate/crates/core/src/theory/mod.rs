//! Closed-form quantities: critical fitness, candidate site-size laws,
//! moment criterion, focal-mutant growth and the mean-field phases.

mod laws;
mod meanfield;
mod special;

pub use laws::{
    bas_geometric, bas_success, consistent_shape, pk_proof_consistent, pk_pure_birth,
    pk_theorem_stated, theorem_shape, LawKind, TheoreticalLaw,
};
pub use meanfield::{
    classify_phase, critical_points, meanfield_gamma, meanfield_sites, meanfield_y, MeanFieldPhase,
};
pub use special::{ln_gamma, ln_gamma_ratio, log_beta};

use crate::error::{ModelError, Result};

/// `(1 - p) / (p r)`; exceeds 1 when mutants cannot outrun deletions.
pub fn critical_fitness(p: f64, r: f64) -> f64 {
    (1.0 - p) / (p * r)
}

/// Asymptotic mean size of sites above the critical fitness,
/// `(2p - 1) / (p (1 + r) - 1)`: individuals accumulate at rate `2p - 1`
/// while sites arrive at rate `p r (1 - f_c)`.
pub fn mass_balance_mean(p: f64, r: f64) -> Result<f64> {
    if p * r <= 1.0 - p {
        return Err(ModelError::Domain(format!(
            "mass balance needs p r > 1 - p, got p={p}, r={r}"
        )));
    }
    Ok((2.0 * p - 1.0) / (p * (1.0 + r) - 1.0))
}

/// Whether the theorem-stated law has a finite `m`-th moment:
/// `r > 1 - (2p-1) / (2p-1 + (1-p) m)`, i.e. shape constant `> m`.
///
/// Evaluated in the cleared-denominator form `(2p-1) r > m (1-p)(1-r)`, which
/// keeps the strict boundary (shape exactly `m`) on the `false` side.
pub fn moment_exists(m: u32, p: f64, r: f64) -> bool {
    (2.0 * p - 1.0) * r > m as f64 * (1.0 - p) * (1.0 - r)
}

/// Exponent of focal growth from the one-individual-per-step recursion, `p (1 - r)`.
pub fn focal_exponent_check_chain(p: f64, r: f64) -> f64 {
    p * (1.0 - r)
}

/// Exponent from the per-birth attachment rate above the critical fitness,
/// `p (1 - r) / (2p - 1)`.
pub fn focal_exponent_hat_chain(p: f64, r: f64) -> f64 {
    p * (1.0 - r) / (2.0 * p - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMode {
    /// `Gamma(A+1) Gamma(B+1+d) / (Gamma(A+1+d) Gamma(B+1))` with
    /// `A = (2p-1) ell`, `B = (2p-1) n`, `d = p (1 - r)`.
    GammaRatio,
    /// `prod_{k=A+1}^{B} (k + d) / k`; needs integer `A`, `B`.
    ExactProduct,
}

/// Expected size at step `n` of a site founded by a mutant at step `ell`.
pub fn expected_focal_growth(ell: f64, n: f64, p: f64, r: f64, mode: GrowthMode) -> Result<f64> {
    if ell.is_nan() || ell < 1.0 {
        return Err(ModelError::Domain(format!("ell must be >= 1, got {ell}")));
    }
    if ell >= n {
        return Err(ModelError::Domain(format!(
            "need ell < n, got ell={ell}, n={n}"
        )));
    }
    let scale = 2.0 * p - 1.0;
    let d = p * (1.0 - r);
    let (a, b) = (scale * ell, scale * n);
    match mode {
        GrowthMode::GammaRatio => {
            Ok((ln_gamma_ratio(b + 1.0, d) - ln_gamma_ratio(a + 1.0, d)).exp())
        }
        GrowthMode::ExactProduct => {
            let (ai, bi) = (a.round(), b.round());
            if (a - ai).abs() > 1e-9 || (b - bi).abs() > 1e-9 {
                return Err(ModelError::Domain(format!(
                    "exact product needs integer bounds, got ({a}, {b})"
                )));
            }
            let mut prod = 1.0;
            let mut k = ai as u64 + 1;
            while k <= bi as u64 {
                prod *= (k as f64 + d) / k as f64;
                k += 1;
            }
            Ok(prod)
        }
    }
}
