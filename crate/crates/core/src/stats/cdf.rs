use crate::error::{ModelError, Result};
use crate::model::PopulationState;

/// Empirical distribution of site fitnesses, `F(f) = #{sites <= f} / #sites`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessCDF {
    sorted: Vec<f64>,
}

impl FitnessCDF {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(ModelError::NoSites);
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, f: f64) -> f64 {
        self.sorted.partition_point(|&x| x <= f) as f64 / self.sorted.len() as f64
    }

    /// `F(f-)`.
    pub fn left_limit(&self, f: f64) -> f64 {
        self.sorted.partition_point(|&x| x < f) as f64 / self.sorted.len() as f64
    }
}

pub fn fitness_cdf(state: &PopulationState) -> Result<FitnessCDF> {
    FitnessCDF::from_values(state.sites_by_fitness().map(|(_, s)| s.fitness).collect())
}

/// Limit law of site fitnesses: uniform on `[f_c, 1]`.
pub fn limit_cdf(f: f64, fc: f64) -> Result<f64> {
    if fc >= 1.0 {
        return Err(ModelError::LimitCdfUndefined);
    }
    Ok(((f - fc).max(0.0) / (1.0 - fc)).min(1.0))
}

/// Kolmogorov distance between the empirical site CDF and the limit law.
///
/// The limit is continuous, so the supremum is attained at a jump of `F`,
/// either at the jump itself or just before it.
pub fn ks_distance(cdf: &FitnessCDF, fc: f64) -> Result<f64> {
    let n = cdf.len() as f64;
    let mut sup = limit_cdf(fc, fc)?.abs();
    let mut i = 0;
    let xs = cdf.values();
    while i < xs.len() {
        let x = xs[i];
        let below = i as f64 / n;
        while i < xs.len() && xs[i] == x {
            i += 1;
        }
        let at = i as f64 / n;
        let g = limit_cdf(x, fc)?;
        sup = sup.max((at - g).abs()).max((below - g).abs());
    }
    Ok(sup)
}
