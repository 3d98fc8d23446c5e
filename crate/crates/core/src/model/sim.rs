use super::state::{PopulationState, SiteId};
use crate::error::{ModelError, Result};
use crate::params::Params;
use crate::rng::{StreamRng, UniformSource};

/// Which branch of the birth/death rules fired in a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    /// A new site with a fresh uniform fitness. `from_empty` marks a
    /// non-mutant birth into an empty population, which also draws its
    /// fitness uniformly.
    MutantBirth {
        site: SiteId,
        fitness: f64,
        from_empty: bool,
    },
    AttachBirth {
        site: SiteId,
        fitness: f64,
    },
    Death {
        site: SiteId,
        fitness: f64,
        removed_site: bool,
    },
    /// Death drawn on an empty population; nothing changes.
    Hold,
}

impl Event {
    /// Change in the total population caused by the event.
    pub fn delta(&self) -> i64 {
        match self {
            Event::MutantBirth { .. } | Event::AttachBirth { .. } => 1,
            Event::Death { .. } => -1,
            Event::Hold => 0,
        }
    }

    pub fn is_mutant(&self) -> bool {
        matches!(
            self,
            Event::MutantBirth {
                from_empty: false,
                ..
            }
        )
    }
}

fn fresh_fitness<S: UniformSource + ?Sized>(state: &PopulationState, src: &mut S) -> f64 {
    loop {
        let f = src.next_uniform();
        if !state.contains_fitness(f) {
            return f;
        }
    }
}

/// Advances `state` by one step.
///
/// Draw order is fixed: `u1` picks birth (`u1 < p`) or death; on birth `u2`
/// picks mutant (`u2 < r`) or attachment; then `u3` is either the mutant's
/// fitness or the attachment position. A fitness already occupied by a live
/// site is redrawn. Deaths consume only `u1`.
pub fn step<S: UniformSource + ?Sized>(
    state: &mut PopulationState,
    params: &Params,
    src: &mut S,
) -> Event {
    state.advance_step();
    let now = state.step();
    let u1 = src.next_uniform();
    if u1 < params.p {
        let u2 = src.next_uniform();
        if u2 < params.r || state.is_empty() {
            let fitness = fresh_fitness(state, src);
            let site = state.insert_site(fitness, now);
            Event::MutantBirth {
                site,
                fitness,
                from_empty: u2 >= params.r,
            }
        } else {
            let u3 = src.next_uniform();
            let site = state
                .sample_attachment(u3)
                .expect("nonempty state has an attachment target");
            state.attach(site);
            Event::AttachBirth {
                site,
                fitness: state.fitness_of(site),
            }
        }
    } else {
        match state.least_fit() {
            Ok(site) => {
                let removed_site = state.remove_one(site);
                Event::Death {
                    site,
                    fitness: state.fitness_of(site),
                    removed_site,
                }
            }
            Err(_) => Event::Hold,
        }
    }
}

/// Callback invoked after every step with the step index, the new state and
/// the event that produced it.
pub trait Observer {
    fn observe(&mut self, step: u64, state: &PopulationState, event: &Event) -> Result<(), String>;
}

impl<F> Observer for F
where
    F: FnMut(u64, &PopulationState, &Event) -> Result<(), String>,
{
    fn observe(&mut self, step: u64, state: &PopulationState, event: &Event) -> Result<(), String> {
        self(step, state, event)
    }
}

/// A population process bound to its own random stream.
#[derive(Debug, Clone)]
pub struct Simulation {
    params: Params,
    state: PopulationState,
    rng: StreamRng,
}

impl Simulation {
    /// Starts from the single individual at fitness 0, stream keyed by `params.seed`.
    pub fn new(params: Params) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            state: PopulationState::new(),
            rng: StreamRng::new(params.seed),
        })
    }

    /// Replicate `replicate` of a multi-replicate experiment.
    pub fn for_replicate(params: Params, replicate: u64) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            state: PopulationState::new(),
            rng: StreamRng::for_replicate(params.seed, replicate),
        })
    }

    /// Replaces the initial state (used for empty-start experiments).
    pub fn with_state(mut self, state: PopulationState) -> Self {
        self.state = state;
        self
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn state(&self) -> &PopulationState {
        &self.state
    }

    pub fn into_state(self) -> PopulationState {
        self.state
    }

    pub fn step(&mut self) -> Event {
        step(&mut self.state, &self.params, &mut self.rng)
    }

    /// Advances `n` steps without observers.
    pub fn burn_in(&mut self, n: u64) {
        for _ in 0..n {
            self.step();
        }
    }

    /// Advances `n` steps, calling every observer after each one.
    pub fn advance(&mut self, n: u64, observers: &mut [&mut dyn Observer]) -> Result<()> {
        for _ in 0..n {
            let event = self.step();
            let now = self.state.step();
            for obs in observers.iter_mut() {
                obs.observe(now, &self.state, &event)
                    .map_err(|message| ModelError::Observer { step: now, message })?;
            }
        }
        Ok(())
    }

    /// Runs the remaining `params.steps` horizon.
    pub fn run(mut self, observers: &mut [&mut dyn Observer]) -> Result<PopulationState> {
        let remaining = self.params.steps.saturating_sub(self.state.step());
        self.advance(remaining, observers)?;
        Ok(self.state)
    }
}

/// Applies `params.steps` steps from the initial condition.
pub fn run(params: Params, observers: &mut [&mut dyn Observer]) -> Result<PopulationState> {
    Simulation::new(params)?.run(observers)
}
