use std::collections::BTreeMap;

use crate::params::Params;
use crate::rng::{StreamRng, UniformSource};
use crate::stats::{FitnessWindow, SizeHistogram};

/// Site-count chains of the uniform-attachment, whole-site-deletion model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasState {
    /// Total number of occupied sites.
    Sites(u64),
    /// Occupied sites on `[0, f]` and on `(f, 1]`.
    Split {
        left_sites: u64,
        right_sites: u64,
        f: f64,
    },
}

impl BasState {
    fn down(self) -> Self {
        match self {
            BasState::Sites(n) => BasState::Sites(n.saturating_sub(1)),
            BasState::Split {
                left_sites,
                right_sites,
                f,
            } if left_sites > 0 => BasState::Split {
                left_sites: left_sites - 1,
                right_sites,
                f,
            },
            BasState::Split {
                left_sites,
                right_sites,
                f,
            } => BasState::Split {
                left_sites,
                right_sites: right_sites.saturating_sub(1),
                f,
            },
        }
    }
}

// Branch probabilities in layout order.
fn layout(state: &BasState, p: f64, r: f64) -> Vec<(BasState, f64)> {
    match *state {
        BasState::Sites(n) => vec![
            (BasState::Sites(n + 1), p * r),
            (*state, p * (1.0 - r)),
            (state.down(), 1.0 - p),
        ],
        BasState::Split {
            left_sites: 0,
            right_sites: 0,
            f,
        } => vec![
            (
                BasState::Split {
                    left_sites: 1,
                    right_sites: 0,
                    f,
                },
                f * p,
            ),
            (
                BasState::Split {
                    left_sites: 0,
                    right_sites: 1,
                    f,
                },
                (1.0 - f) * p,
            ),
            (*state, 1.0 - p),
        ],
        BasState::Split {
            left_sites,
            right_sites,
            f,
        } => vec![
            (
                BasState::Split {
                    left_sites: left_sites + 1,
                    right_sites,
                    f,
                },
                f * p * r,
            ),
            (
                BasState::Split {
                    left_sites,
                    right_sites: right_sites + 1,
                    f,
                },
                (1.0 - f) * p * r,
            ),
            (*state, p * (1.0 - r)),
            (state.down(), 1.0 - p),
        ],
    }
}

/// Exact kernel in layout order. Entries may repeat a target (the reflected
/// death at 0 lands on the hold state); zero-probability entries are dropped.
pub fn bas_probs(state: &BasState, params: &Params) -> Vec<(BasState, f64)> {
    layout(state, params.p, params.r)
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .collect()
}

/// Inverse-transform step over the layout `[birth of a site | hold | death]`.
pub fn bas_step(state: &BasState, params: &Params, u: f64) -> BasState {
    let mut acc = 0.0;
    let branches = layout(state, params.p, params.r);
    let last = branches.len() - 1;
    for (i, (next, w)) in branches.into_iter().enumerate() {
        acc += w;
        if u < acc || i == last {
            return next;
        }
    }
    unreachable!()
}

/// Full population of the uniform-attachment variant: a non-mutant birth
/// joins a uniformly chosen live site, a death removes the whole least-fit site.
#[derive(Debug, Clone)]
pub struct BasPopulation {
    fitness: Vec<f64>,
    counts: Vec<u64>,
    live: Vec<usize>,
    live_pos: Vec<usize>,
    by_fitness: BTreeMap<u64, usize>,
    total: u64,
    step: u64,
}

impl Default for BasPopulation {
    fn default() -> Self {
        Self::new()
    }
}

impl BasPopulation {
    /// One individual at fitness 0.
    pub fn new() -> Self {
        let mut pop = Self {
            fitness: Vec::new(),
            counts: Vec::new(),
            live: Vec::new(),
            live_pos: Vec::new(),
            by_fitness: BTreeMap::new(),
            total: 0,
            step: 0,
        };
        pop.insert(0.0);
        pop
    }

    fn insert(&mut self, f: f64) {
        let slot = self.fitness.len();
        self.fitness.push(f);
        self.counts.push(1);
        self.live_pos.push(self.live.len());
        self.live.push(slot);
        self.by_fitness.insert(f.to_bits(), slot);
        self.total += 1;
    }

    fn remove_min(&mut self) {
        let Some((_, slot)) = self.by_fitness.pop_first() else {
            return;
        };
        self.total -= self.counts[slot];
        self.counts[slot] = 0;
        let pos = self.live_pos[slot];
        self.live.swap_remove(pos);
        if let Some(&moved) = self.live.get(pos) {
            self.live_pos[moved] = pos;
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn site_count(&self) -> usize {
        self.live.len()
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Same draw order as the preferential model: branch, mutant, then the
    /// fitness or the uniform site position.
    pub fn step<S: UniformSource + ?Sized>(&mut self, params: &Params, src: &mut S) {
        self.step += 1;
        if src.next_uniform() < params.p {
            if src.next_uniform() < params.r || self.live.is_empty() {
                let f = loop {
                    let f = src.next_uniform();
                    if !self.by_fitness.contains_key(&f.to_bits()) {
                        break f;
                    }
                };
                self.insert(f);
            } else {
                let u = src.next_uniform();
                let idx = ((u * self.live.len() as f64) as usize).min(self.live.len() - 1);
                self.counts[self.live[idx]] += 1;
                self.total += 1;
            }
        } else {
            self.remove_min();
        }
    }

    /// `(fitness, count)` of live sites in increasing fitness.
    pub fn sites(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.by_fitness
            .values()
            .map(|&s| (self.fitness[s], self.counts[s]))
    }

    pub fn histogram(&self, window: FitnessWindow) -> SizeHistogram {
        let mut h = SizeHistogram::new(window);
        for (f, k) in self.sites() {
            if window.contains(f) {
                h.add(k);
            }
        }
        h
    }
}

/// Runs the full uniform-attachment population for `steps` steps and returns
/// the site-size histogram of sites above the critical fitness.
pub fn bas_full_simulate(params: &Params, steps: u64, seed: u64) -> SizeHistogram {
    let mut rng = StreamRng::new(seed);
    let mut pop = BasPopulation::new();
    for _ in 0..steps {
        pop.step(params, &mut rng);
    }
    let fc = params.critical_fitness().min(1.0);
    pop.histogram(FitnessWindow::new(fc, 1.0))
}
