//! Estimators over population snapshots and trajectories.

mod adjudicate;
mod cdf;
mod fit;
mod focal;
mod hist;

pub use adjudicate::{law_adjudicate, tv_distance, Adjudication, LawDistance};
pub use cdf::{fitness_cdf, ks_distance, limit_cdf, FitnessCDF};
pub use fit::{power_fit, slope_fit, PowerFit};
pub use focal::{
    focal_mutant_track, geometric_checkpoints, FocalSummary, FocalTrack, FocalTracker, FocalWindow,
};
pub use hist::{
    joint_histogram, mean_site_size, size_histogram, FitnessWindow, SizeHistogram, SizeLaw,
};

use crate::chains::project_lr;
use crate::error::{ModelError, Result};
use crate::model::{Event, Observer, PopulationState};

/// Associative, commutative combination of per-replicate accumulators.
pub trait Merge {
    fn merge(&mut self, other: &Self);
}

/// `R^f / N`: share of the population on `(f, 1]`.
pub fn mass_ratio(state: &PopulationState, f: f64) -> Result<f64> {
    if state.total() == 0 {
        return Err(ModelError::NoSites);
    }
    let lr = project_lr(state, f);
    Ok(lr.right as f64 / lr.total() as f64)
}

/// Indices at which the population is extinct.
pub fn extinction_times(totals: &[u64]) -> Vec<usize> {
    totals
        .iter()
        .enumerate()
        .filter_map(|(i, &n)| (n == 0).then_some(i))
        .collect()
}

/// Counts steps that end with an empty population.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtinctionCounter {
    pub extinct_steps: u64,
    pub observed_steps: u64,
}

impl Observer for ExtinctionCounter {
    fn observe(&mut self, _: u64, state: &PopulationState, _: &Event) -> Result<(), String> {
        self.observed_steps += 1;
        if state.total() == 0 {
            self.extinct_steps += 1;
        }
        Ok(())
    }
}

impl Merge for ExtinctionCounter {
    fn merge(&mut self, other: &Self) {
        self.extinct_steps += other.extinct_steps;
        self.observed_steps += other.observed_steps;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Site;

    #[test]
    fn mass_ratio_examples() {
        let s = PopulationState::from_sites(&[
            Site {
                fitness: 0.2,
                count: 3,
                birth_time: 0,
            },
            Site {
                fitness: 0.8,
                count: 5,
                birth_time: 0,
            },
        ])
        .unwrap();
        assert_eq!(mass_ratio(&s, 0.5).unwrap(), 5.0 / 8.0);
        assert_eq!(mass_ratio(&s, 0.1).unwrap(), 1.0);
        assert_eq!(mass_ratio(&s, 0.9).unwrap(), 0.0);
        assert!(mass_ratio(&PopulationState::empty(), 0.5).is_err());
    }

    #[test]
    fn extinction_examples() {
        assert_eq!(extinction_times(&[1, 0, 1, 0]), vec![1, 3]);
        assert!(extinction_times(&[1, 2, 3]).is_empty());
        assert_eq!(extinction_times(&[0, 0, 0]), vec![0, 1, 2]);
    }
}
