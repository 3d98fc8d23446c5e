use crate::error::{ModelError, Result};

/// Model parameters: birth probability `p`, mutation probability `r`,
/// step horizon and master seed.
///
/// `p = 1` is admitted (pure-birth regime); the death branch then never fires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub p: f64,
    pub r: f64,
    pub steps: u64,
    pub seed: u64,
}

impl Params {
    pub fn new(p: f64, r: f64, steps: u64, seed: u64) -> Result<Self> {
        let params = Self { p, r, steps, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(ModelError::InvalidParams(format!(
                "p must lie in (0, 1], got {}",
                self.p
            )));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(ModelError::InvalidParams(format!(
                "r must lie in (0, 1), got {}",
                self.r
            )));
        }
        Ok(())
    }

    /// Critical fitness `(1 - p) / (p r)`.
    pub fn critical_fitness(&self) -> f64 {
        crate::theory::critical_fitness(self.p, self.r)
    }

    /// True when sites above the critical fitness persist (`p r > 1 - p`).
    pub fn supercritical(&self) -> bool {
        self.p * self.r > 1.0 - self.p
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_steps(self, steps: u64) -> Self {
        Self { steps, ..self }
    }
}
