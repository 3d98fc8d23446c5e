use std::collections::BTreeMap;

use super::Merge;
use crate::error::{ModelError, Result};
use crate::model::PopulationState;

/// Closed fitness interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessWindow {
    pub lo: f64,
    pub hi: f64,
}

impl FitnessWindow {
    pub const FULL: FitnessWindow = FitnessWindow { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, f: f64) -> bool {
        f >= self.lo && f <= self.hi
    }
}

impl Default for FitnessWindow {
    fn default() -> Self {
        Self::FULL
    }
}

/// Number of sites of each size inside a fitness window.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeHistogram {
    counts: BTreeMap<u64, u64>,
    window: FitnessWindow,
}

/// Size marginal of the normalized joint law. With no sites the law is the
/// point mass at `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SizeLaw {
    PointMassAtZero,
    Probabilities(BTreeMap<u64, f64>),
}

impl SizeHistogram {
    pub fn new(window: FitnessWindow) -> Self {
        Self {
            counts: BTreeMap::new(),
            window,
        }
    }

    pub fn window(&self) -> FitnessWindow {
        self.window
    }

    pub fn add(&mut self, k: u64) {
        self.add_n(k, 1);
    }

    pub fn add_n(&mut self, k: u64, n: u64) {
        if n > 0 {
            *self.counts.entry(k).or_insert(0) += n;
        }
    }

    pub fn get(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of sites.
    pub fn sites(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Number of individuals, `sum k h(k)`.
    pub fn individuals(&self) -> u64 {
        self.counts.iter().map(|(k, v)| k * v).sum()
    }

    pub fn max_size(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    pub fn normalized(&self) -> SizeLaw {
        let total = self.sites();
        if total == 0 {
            return SizeLaw::PointMassAtZero;
        }
        SizeLaw::Probabilities(
            self.counts
                .iter()
                .map(|(&k, &v)| (k, v as f64 / total as f64))
                .collect(),
        )
    }

    /// Proportions of sizes `1..k_max-1` followed by the pooled tail `k >= k_max`.
    pub fn binned(&self, k_max: u64) -> Result<Vec<f64>> {
        let total = self.sites();
        if total == 0 {
            return Err(ModelError::EmptyHistogram);
        }
        Ok(self
            .binned_counts(k_max)
            .into_iter()
            .map(|c| c as f64 / total as f64)
            .collect())
    }

    /// Site counts of sizes `1..k_max-1` followed by the pooled tail.
    pub fn binned_counts(&self, k_max: u64) -> Vec<u64> {
        let k_max = k_max.max(2);
        let mut out = vec![0u64; k_max as usize];
        for (&k, &v) in &self.counts {
            let idx = (k.clamp(1, k_max) - 1) as usize;
            out[idx] += v;
        }
        out
    }
}

impl Merge for SizeHistogram {
    fn merge(&mut self, other: &Self) {
        for (&k, &v) in &other.counts {
            self.add_n(k, v);
        }
    }
}

pub fn size_histogram(state: &PopulationState, window: FitnessWindow) -> SizeHistogram {
    let mut h = SizeHistogram::new(window);
    for (_, s) in state.sites_by_fitness() {
        if window.contains(s.fitness) {
            h.add(s.count);
        }
    }
    h
}

/// Size histograms over `bins` equal-width fitness cells (the last cell is
/// closed at 1); a finite-cell view of the joint size/fitness law.
pub fn joint_histogram(state: &PopulationState, bins: usize) -> Vec<SizeHistogram> {
    let bins = bins.max(1);
    let nb = bins as f64;
    let mut out: Vec<SizeHistogram> = (0..bins)
        .map(|i| SizeHistogram::new(FitnessWindow::new(i as f64 / nb, (i + 1) as f64 / nb)))
        .collect();
    for (_, s) in state.sites_by_fitness() {
        let idx = ((s.fitness * nb) as usize).min(bins - 1);
        out[idx].add(s.count);
    }
    out
}

pub fn mean_site_size(h: &SizeHistogram) -> Result<f64> {
    let sites = h.sites();
    if sites == 0 {
        return Err(ModelError::EmptyHistogram);
    }
    Ok(h.individuals() as f64 / sites as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Site;

    fn st() -> PopulationState {
        PopulationState::from_sites(&[
            Site {
                fitness: 0.7,
                count: 2,
                birth_time: 0,
            },
            Site {
                fitness: 0.9,
                count: 1,
                birth_time: 0,
            },
        ])
        .unwrap()
    }

    #[test]
    fn histogram_examples() {
        let h = size_histogram(&st(), FitnessWindow::FULL);
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
        let h = size_histogram(&st(), FitnessWindow::new(0.8, 1.0));
        assert_eq!(h.iter().collect::<Vec<_>>(), vec![(1, 1)]);
        let h = size_histogram(&PopulationState::empty(), FitnessWindow::FULL);
        assert!(h.is_empty());
        assert_eq!(h.normalized(), SizeLaw::PointMassAtZero);
    }

    #[test]
    fn mean_examples() {
        let mut h = SizeHistogram::new(FitnessWindow::FULL);
        h.add(2);
        h.add(4);
        assert_eq!(mean_site_size(&h).unwrap(), 3.0);
        let mut h = SizeHistogram::new(FitnessWindow::FULL);
        h.add_n(1, 17);
        assert_eq!(mean_site_size(&h).unwrap(), 1.0);
        let mut h = SizeHistogram::new(FitnessWindow::FULL);
        h.add_n(1, 2);
        h.add(2);
        h.add(4);
        assert_eq!(mean_site_size(&h).unwrap(), 2.0);
        assert!(mean_site_size(&SizeHistogram::new(FitnessWindow::FULL)).is_err());
    }

    #[test]
    fn binning_pools_tail() {
        let mut h = SizeHistogram::new(FitnessWindow::FULL);
        h.add_n(1, 2);
        h.add(3);
        h.add(9);
        assert_eq!(h.binned_counts(3), vec![2, 0, 2]);
        let b = h.binned(3).unwrap();
        assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merge_is_order_independent() {
        let mut a = SizeHistogram::new(FitnessWindow::FULL);
        a.add(1);
        a.add(3);
        let mut b = SizeHistogram::new(FitnessWindow::FULL);
        b.add(3);
        b.add(5);
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.get(3), 2);
    }

    #[test]
    fn joint_cells_partition_sites() {
        let cells = joint_histogram(&st(), 20);
        assert_eq!(cells.len(), 20);
        assert_eq!(cells.iter().map(|h| h.sites()).sum::<u64>(), 2);
        assert_eq!(cells[14].get(2), 1);
        assert_eq!(cells[18].get(1), 1);
    }
}
