use std::collections::BTreeMap;
use std::io::{self, Write};

use super::weights::WeightTree;
use crate::error::{ModelError, Result};
use crate::format::fmt_sig17;

/// Identity of a site: its slot in insertion order. Slots are never reused,
/// so an identity stays valid (and dead) after its site is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteId(pub usize);

/// A live fitness level with its population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub fitness: f64,
    pub count: u64,
    /// Index of the step whose mutant founded the site (0 for the initial site).
    pub birth_time: u64,
}

/// Full configuration of the population process.
///
/// Counts live in an append-only [`WeightTree`] indexed by [`SiteId`], which
/// gives weighted attachment in `O(log m)`. A second index keyed by fitness
/// gives the least-fit site and membership tests in `O(log m)`.
#[derive(Debug, Clone)]
pub struct PopulationState {
    fitness: Vec<f64>,
    birth: Vec<u64>,
    weights: WeightTree,
    // fitness bit pattern -> slot; bit order equals numeric order on [0, 1].
    by_fitness: BTreeMap<u64, usize>,
    step: u64,
}

#[inline]
fn key(f: f64) -> u64 {
    // -0.0 and +0.0 share a key.
    (f + 0.0).to_bits()
}

impl Default for PopulationState {
    fn default() -> Self {
        Self::new()
    }
}

impl PopulationState {
    /// One individual at fitness 0, step 0.
    pub fn new() -> Self {
        let mut s = Self::empty();
        s.insert_site(0.0, 0);
        s
    }

    /// The empty configuration.
    pub fn empty() -> Self {
        Self {
            fitness: Vec::new(),
            birth: Vec::new(),
            weights: WeightTree::new(),
            by_fitness: BTreeMap::new(),
            step: 0,
        }
    }

    /// Builds a state from explicit sites (step 0). Sites are assigned
    /// identities in the order given.
    pub fn from_sites(sites: &[Site]) -> Result<Self> {
        let mut s = Self::empty();
        for site in sites {
            if !(0.0..=1.0).contains(&site.fitness) {
                return Err(ModelError::InvalidParams(format!(
                    "fitness {} outside [0, 1]",
                    site.fitness
                )));
            }
            if site.count == 0 {
                return Err(ModelError::InvalidParams("site with zero count".into()));
            }
            if s.contains_fitness(site.fitness) {
                return Err(ModelError::InvalidParams(format!(
                    "duplicate fitness {}",
                    site.fitness
                )));
            }
            let id = s.insert_site(site.fitness, site.birth_time);
            for _ in 1..site.count {
                s.attach(id);
            }
        }
        Ok(s)
    }

    pub fn total(&self) -> u64 {
        self.weights.total()
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub(crate) fn advance_step(&mut self) {
        self.step += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.by_fitness.is_empty()
    }

    /// Number of live sites.
    pub fn site_count(&self) -> usize {
        self.by_fitness.len()
    }

    /// Number of slots ever allocated, live or dead.
    pub fn slots(&self) -> usize {
        self.fitness.len()
    }

    pub fn count(&self, id: SiteId) -> u64 {
        self.weights.get(id.0)
    }

    pub fn is_alive(&self, id: SiteId) -> bool {
        id.0 < self.fitness.len() && self.weights.get(id.0) > 0
    }

    pub fn site(&self, id: SiteId) -> Option<Site> {
        self.is_alive(id).then(|| Site {
            fitness: self.fitness[id.0],
            count: self.weights.get(id.0),
            birth_time: self.birth[id.0],
        })
    }

    /// Fitness of a slot; defined for dead slots too.
    pub fn fitness_of(&self, id: SiteId) -> f64 {
        self.fitness[id.0]
    }

    pub fn contains_fitness(&self, f: f64) -> bool {
        self.by_fitness.contains_key(&key(f))
    }

    /// Live sites in identity (insertion) order.
    pub fn sites(&self) -> impl Iterator<Item = (SiteId, Site)> + '_ {
        (0..self.fitness.len()).filter_map(move |i| self.site(SiteId(i)).map(|s| (SiteId(i), s)))
    }

    /// Live sites in increasing fitness.
    pub fn sites_by_fitness(&self) -> impl Iterator<Item = (SiteId, Site)> + '_ {
        self.by_fitness.values().map(move |&i| {
            (
                SiteId(i),
                Site {
                    fitness: self.fitness[i],
                    count: self.weights.get(i),
                    birth_time: self.birth[i],
                },
            )
        })
    }

    pub fn least_fit(&self) -> Result<SiteId> {
        self.by_fitness
            .values()
            .next()
            .map(|&i| SiteId(i))
            .ok_or(ModelError::EmptyLeastFit)
    }

    pub fn min_fitness(&self) -> Option<f64> {
        self.least_fit().ok().map(|id| self.fitness[id.0])
    }

    /// Site whose cumulative count interval, scanning live sites in identity
    /// order, contains `u * total`. A site with count `k` is selected with
    /// probability `k / total` when `u` is uniform.
    pub fn sample_attachment(&self, u: f64) -> Result<SiteId> {
        let total = self.total();
        if total == 0 {
            return Err(ModelError::EmptyAttachment);
        }
        let target = ((u * total as f64) as u64).min(total - 1);
        Ok(SiteId(self.weights.find(target)))
    }

    /// Adds a new site with count 1. The fitness must not be occupied.
    pub fn insert_site(&mut self, fitness: f64, birth_time: u64) -> SiteId {
        let fitness = fitness + 0.0;
        let slot = self.weights.push(1);
        self.fitness.push(fitness);
        self.birth.push(birth_time);
        let prev = self.by_fitness.insert(key(fitness), slot);
        assert!(prev.is_none(), "fitness {fitness} already occupied");
        SiteId(slot)
    }

    pub fn attach(&mut self, id: SiteId) {
        debug_assert!(self.is_alive(id));
        self.weights.increment(id.0);
    }

    /// Removes one individual from `id`; returns true if the site vanished.
    pub fn remove_one(&mut self, id: SiteId) -> bool {
        self.weights.decrement(id.0);
        if self.weights.get(id.0) == 0 {
            self.by_fitness.remove(&key(self.fitness[id.0]));
            true
        } else {
            false
        }
    }

    /// Writes the `sites.csv` snapshot: header `fitness,count,birth_time`,
    /// one row per live site in increasing fitness.
    pub fn write_sites_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "fitness,count,birth_time")?;
        for (_, s) in self.sites_by_fitness() {
            writeln!(w, "{},{},{}", fmt_sig17(s.fitness), s.count, s.birth_time)?;
        }
        Ok(())
    }

    /// Checks internal consistency between the two indexes.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut sum = 0;
        let mut live = 0;
        for i in 0..self.fitness.len() {
            let c = self.weights.get(i);
            sum += c;
            if c > 0 {
                live += 1;
                if self.by_fitness.get(&key(self.fitness[i])) != Some(&i) {
                    return Err(format!("slot {i} missing from fitness index"));
                }
            }
        }
        if sum != self.total() {
            return Err(format!("total {} != sum of counts {sum}", self.total()));
        }
        if live != self.by_fitness.len() {
            return Err(format!(
                "{live} live slots but {} indexed fitnesses",
                self.by_fitness.len()
            ));
        }
        Ok(())
    }
}
