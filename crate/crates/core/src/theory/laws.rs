use std::fmt;
use std::str::FromStr;

use super::special::log_beta;
use crate::error::{ModelError, Result};

/// Candidate closed-form laws for the size of a site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    /// `c B(1 + c, k)` with `c = (2p-1) r / ((1-r)(1-p))`.
    TheoremStated,
    /// `c B(1 + c, k)` with `c = (2p-1) / (p (1-r))`, the constant produced by
    /// the pure-birth reduction above the critical fitness.
    ProofConsistent,
    /// `B((2-r)/(1-r), k) / (1-r)`, the pure-birth (`p = 1`) law.
    PureBirth,
    /// Geometric with success probability `(pr - (1-p)) / (2p - 1)`.
    BasGeometric,
}

impl LawKind {
    pub const ALL: [LawKind; 4] = [
        LawKind::TheoremStated,
        LawKind::ProofConsistent,
        LawKind::PureBirth,
        LawKind::BasGeometric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawKind::TheoremStated => "theorem",
            LawKind::ProofConsistent => "consistent",
            LawKind::PureBirth => "pure-birth",
            LawKind::BasGeometric => "bas-geometric",
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "theorem" | "theorem-stated" => Ok(LawKind::TheoremStated),
            "consistent" | "proof-consistent" => Ok(LawKind::ProofConsistent),
            "pure-birth" | "pure" => Ok(LawKind::PureBirth),
            "bas-geometric" | "bas" | "geometric" => Ok(LawKind::BasGeometric),
            other => Err(ModelError::InvalidParams(format!("unknown law {other:?}"))),
        }
    }
}

fn require_regime(p: f64, r: f64) -> Result<()> {
    if p * r > 1.0 - p {
        Ok(())
    } else {
        Err(ModelError::Domain(format!(
            "law needs p r > 1 - p, got p={p}, r={r}"
        )))
    }
}

/// Shape constant of the theorem-stated Beta law.
pub fn theorem_shape(p: f64, r: f64) -> Result<f64> {
    if p >= 1.0 {
        return Err(ModelError::Domain(
            "theorem-stated constant undefined at p = 1".into(),
        ));
    }
    require_regime(p, r)?;
    Ok((2.0 * p - 1.0) * r / ((1.0 - r) * (1.0 - p)))
}

/// Shape constant `1 / (1 - r_hat) = (2p - 1) / (p (1 - r))`.
pub fn consistent_shape(p: f64, r: f64) -> Result<f64> {
    require_regime(p, r)?;
    Ok((2.0 * p - 1.0) / (p * (1.0 - r)))
}

fn beta_pmf(c: f64, k: u64) -> f64 {
    c * log_beta(1.0 + c, k as f64)
        .expect("positive Beta arguments")
        .exp()
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(ModelError::Domain("site size k must be >= 1".into()))
    } else {
        Ok(())
    }
}

pub fn pk_theorem_stated(k: u64, p: f64, r: f64) -> Result<f64> {
    check_k(k)?;
    Ok(beta_pmf(theorem_shape(p, r)?, k))
}

pub fn pk_proof_consistent(k: u64, p: f64, r: f64) -> Result<f64> {
    check_k(k)?;
    Ok(beta_pmf(consistent_shape(p, r)?, k))
}

pub fn pk_pure_birth(k: u64, r: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    beta_pmf(1.0 / (1.0 - r), k)
}

/// Success probability of the geometric site-size law.
pub fn bas_success(p: f64, r: f64) -> Result<f64> {
    let q = (p * r - (1.0 - p)) / (2.0 * p - 1.0);
    if q > 0.0 && q <= 1.0 {
        Ok(q)
    } else {
        Err(ModelError::Domain(format!(
            "geometric parameter {q} outside (0, 1]"
        )))
    }
}

pub fn bas_geometric(k: u64, p: f64, r: f64) -> Result<f64> {
    check_k(k)?;
    let q = bas_success(p, r)?;
    Ok(q * (1.0 - q).powi((k - 1) as i32))
}

/// A site-size law with its parameters bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoreticalLaw {
    pub kind: LawKind,
    pub p: f64,
    pub r: f64,
    shape: f64,
}

impl TheoreticalLaw {
    pub fn new(kind: LawKind, p: f64, r: f64) -> Result<Self> {
        let shape = match kind {
            LawKind::TheoremStated => theorem_shape(p, r)?,
            LawKind::ProofConsistent => consistent_shape(p, r)?,
            LawKind::PureBirth => {
                if !(r > 0.0 && r < 1.0) {
                    return Err(ModelError::Domain(format!("r={r} outside (0, 1)")));
                }
                1.0 / (1.0 - r)
            }
            LawKind::BasGeometric => bas_success(p, r)?,
        };
        Ok(Self { kind, p, r, shape })
    }

    /// Beta shape `c`, or the success probability for the geometric law.
    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self.kind {
            LawKind::BasGeometric => self.shape * (1.0 - self.shape).powi((k - 1) as i32),
            _ => beta_pmf(self.shape, k),
        }
    }

    /// Closed-form mean: `c / (c - 1)` for the Beta laws (infinite when
    /// `c <= 1`), `1 / q` for the geometric law.
    pub fn mean(&self) -> f64 {
        match self.kind {
            LawKind::BasGeometric => 1.0 / self.shape,
            _ if self.shape > 1.0 => self.shape / (self.shape - 1.0),
            _ => f64::INFINITY,
        }
    }

    /// Probabilities of sizes `1..k_max-1` followed by the pooled tail
    /// `P(K >= k_max)`.
    pub fn binned(&self, k_max: u64) -> Result<Vec<f64>> {
        if k_max < 2 {
            return Err(ModelError::Domain("k_max must be >= 2".into()));
        }
        let mut out: Vec<f64> = (1..k_max).map(|k| self.pmf(k)).collect();
        let head: f64 = out.iter().sum();
        if out.iter().any(|q| !q.is_finite() || *q < 0.0) || head > 1.0 + 1e-9 {
            return Err(ModelError::NotNormalizable(format!(
                "{} has head mass {head}",
                self.kind
            )));
        }
        out.push((1.0 - head).max(0.0));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: f64 = 0.75;
    const R: f64 = 0.5;

    #[test]
    fn theorem_stated_values() {
        assert!((pk_theorem_stated(1, P, R).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((pk_theorem_stated(2, P, R).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((pk_theorem_stated(3, P, R).unwrap() - 1.0 / 15.0).abs() < 1e-14);
        assert!(pk_theorem_stated(1, 1.0, R).is_err());
    }

    #[test]
    fn proof_consistent_values() {
        assert!((pk_proof_consistent(1, P, R).unwrap() - 4.0 / 7.0).abs() < 1e-14);
        for r in [0.1, 0.5, 0.9] {
            for k in 1..20 {
                let a = pk_proof_consistent(k, 1.0, r).unwrap();
                let b = pk_pure_birth(k, r);
                assert!((a - b).abs() < 1e-15 * b.max(1e-300) + 1e-300);
            }
        }
    }

    #[test]
    fn pure_birth_closed_form() {
        for k in 1..200u64 {
            let kf = k as f64;
            let want = 4.0 / (kf * (kf + 1.0) * (kf + 2.0));
            assert!((pk_pure_birth(k, 0.5) - want).abs() < 1e-12 * want);
        }
        assert!((pk_pure_birth(1, 0.5) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_values() {
        assert!((bas_success(P, R).unwrap() - 0.25).abs() < 1e-15);
        assert!((bas_geometric(1, P, R).unwrap() - 0.25).abs() < 1e-15);
        let law = TheoreticalLaw::new(LawKind::BasGeometric, P, R).unwrap();
        assert!((law.mean() - 4.0).abs() < 1e-12);
        assert_eq!(bas_success(0.75, 1.0).unwrap(), 1.0);
        assert!(bas_geometric(1, 0.6, 0.5).is_err());
    }

    #[test]
    fn law_means() {
        let thm = TheoreticalLaw::new(LawKind::TheoremStated, P, R).unwrap();
        let con = TheoreticalLaw::new(LawKind::ProofConsistent, P, R).unwrap();
        assert!((thm.mean() - 2.0).abs() < 1e-12);
        assert!((con.mean() - 4.0).abs() < 1e-12);
        let pure = TheoreticalLaw::new(LawKind::PureBirth, 1.0, 0.5).unwrap();
        assert!((pure.mean() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn binned_pools_the_tail() {
        let law = TheoreticalLaw::new(LawKind::PureBirth, 1.0, 0.5).unwrap();
        let b = law.binned(3).unwrap();
        assert_eq!(b.len(), 3);
        assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((b[2] - (1.0 - 2.0 / 3.0 - 1.0 / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn parse_names() {
        for kind in LawKind::ALL {
            assert_eq!(kind.name().parse::<LawKind>().unwrap(), kind);
        }
        assert!("nope".parse::<LawKind>().is_err());
    }
}
