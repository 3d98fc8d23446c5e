use super::Merge;
use crate::error::{ModelError, Result};
use crate::model::{Event, Observer, PopulationState, Simulation, SiteId};

/// Which mutant to follow: the first one born in `[first_step, last_step]`,
/// optionally only if its fitness exceeds `min_fitness`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalWindow {
    pub first_step: u64,
    pub last_step: Option<u64>,
    pub min_fitness: Option<f64>,
}

impl FocalWindow {
    pub fn from(first_step: u64) -> Self {
        Self {
            first_step,
            last_step: None,
            min_fitness: None,
        }
    }

    /// Only a mutant born exactly at `step` qualifies.
    pub fn exactly(step: u64) -> Self {
        Self {
            first_step: step,
            last_step: Some(step),
            min_fitness: None,
        }
    }

    pub fn above(mut self, fitness: f64) -> Self {
        self.min_fitness = Some(fitness);
        self
    }

    fn admits(&self, step: u64, fitness: f64) -> bool {
        step >= self.first_step
            && self.last_step.is_none_or(|l| step <= l)
            && self.min_fitness.is_none_or(|m| fitness > m)
    }
}

/// Size of a followed site at the requested checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalTrack {
    pub birth_step: u64,
    pub fitness: f64,
    pub site: SiteId,
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    pub alive: bool,
}

impl FocalTrack {
    /// Indicator that the mutant has exactly `k` individuals at checkpoint `n`
    /// (it received `k - 1` attachments net of deaths).
    pub fn has_size(&self, k: u64, n: u64) -> Option<bool> {
        self.checkpoints
            .iter()
            .position(|&c| c == n)
            .map(|i| self.counts[i] == k)
    }
}

/// Observer that locks onto the first qualifying mutant and samples its
/// count at each checkpoint. Checkpoints before the birth record 0.
#[derive(Debug, Clone)]
pub struct FocalTracker {
    window: FocalWindow,
    checkpoints: Vec<u64>,
    next: usize,
    site: Option<(SiteId, u64, f64)>,
    counts: Vec<u64>,
    alive: bool,
}

impl FocalTracker {
    pub fn new(window: FocalWindow, mut checkpoints: Vec<u64>) -> Self {
        checkpoints.sort_unstable();
        checkpoints.dedup();
        Self {
            window,
            checkpoints,
            next: 0,
            site: None,
            counts: Vec::new(),
            alive: false,
        }
    }

    /// Whether a qualifying mutant has been found.
    pub fn is_locked(&self) -> bool {
        self.site.is_some()
    }

    pub fn finish(self) -> Result<FocalTrack> {
        let (site, birth_step, fitness) = self.site.ok_or(ModelError::NoFocalMutant)?;
        Ok(FocalTrack {
            birth_step,
            fitness,
            site,
            checkpoints: self.checkpoints,
            counts: self.counts,
            alive: self.alive,
        })
    }
}

impl Observer for FocalTracker {
    fn observe(&mut self, step: u64, state: &PopulationState, event: &Event) -> Result<(), String> {
        match self.site {
            None => {
                if let Event::MutantBirth {
                    site,
                    fitness,
                    from_empty: false,
                } = *event
                {
                    if self.window.admits(step, fitness) {
                        self.site = Some((site, step, fitness));
                        self.alive = true;
                    }
                }
            }
            Some((site, ..)) if self.alive => self.alive = state.is_alive(site),
            Some(_) => {}
        }
        while self.next < self.checkpoints.len() && self.checkpoints[self.next] <= step {
            let count = match self.site {
                Some((site, ..)) if self.alive => state.count(site),
                _ => 0,
            };
            self.counts.push(count);
            self.next += 1;
        }
        Ok(())
    }
}

/// Runs `sim` up to the last checkpoint while following the first mutant
/// admitted by `window`. Gives up as soon as a bounded window closes empty.
pub fn focal_mutant_track(
    mut sim: Simulation,
    window: FocalWindow,
    checkpoints: &[u64],
) -> Result<FocalTrack> {
    let mut tracker = FocalTracker::new(window, checkpoints.to_vec());
    let horizon = checkpoints.iter().copied().max().unwrap_or(0);
    if let Some(last) = window.last_step {
        let upto = last.min(horizon).saturating_sub(sim.state().step());
        sim.advance(upto, &mut [&mut tracker])?;
        if !tracker.is_locked() {
            return Err(ModelError::NoFocalMutant);
        }
    }
    let remaining = horizon.saturating_sub(sim.state().step());
    sim.advance(remaining, &mut [&mut tracker])?;
    tracker.finish()
}

/// Geometric schedule `ceil(ell * 1.25^j)` up to `n`, always ending at `n`.
pub fn geometric_checkpoints(ell: u64, n: u64, ratio: f64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let c = (ell.max(1) as f64 * ratio.powi(j)).ceil() as u64;
        if c > n {
            break;
        }
        if out.last() != Some(&c) {
            out.push(c);
        }
        j += 1;
    }
    if out.last() != Some(&n) {
        out.push(n);
    }
    out
}

/// Running mean and variance of focal sizes per checkpoint across replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalSummary {
    pub checkpoints: Vec<u64>,
    pub replicates: u64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl FocalSummary {
    pub fn new(checkpoints: Vec<u64>) -> Self {
        let n = checkpoints.len();
        Self {
            checkpoints,
            replicates: 0,
            sum: vec![0.0; n],
            sum_sq: vec![0.0; n],
        }
    }

    pub fn push(&mut self, track: &FocalTrack) {
        for (i, &c) in track.counts.iter().enumerate() {
            self.sum[i] += c as f64;
            self.sum_sq[i] += (c * c) as f64;
        }
        self.replicates += 1;
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.sum[i] / self.replicates as f64
    }

    /// Standard error of the mean at checkpoint `i`.
    pub fn std_error(&self, i: usize) -> f64 {
        let n = self.replicates as f64;
        let m = self.mean(i);
        let var = (self.sum_sq[i] / n - m * m) * n / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

impl Merge for FocalSummary {
    fn merge(&mut self, other: &Self) {
        assert_eq!(self.checkpoints, other.checkpoints);
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self.replicates += other.replicates;
    }
}
