//! The full population process: birth of mutants, preferential attachment,
//! deletion at the least-fit site.

mod sim;
mod state;
mod weights;

pub use sim::{run, step, Event, Observer, Simulation};
pub use state::{PopulationState, Site, SiteId};
pub use weights::WeightTree;
