//! Companion Markov chains: the exact mass split `(L, R)` at a fitness
//! level, the spatially homogeneous epsilon-chains with their monotone
//! coupling, and the uniform-attachment whole-site-deletion variant.

mod bas;
mod eps;
mod lr;

pub use bas::{bas_full_simulate, bas_probs, bas_step, BasPopulation, BasState};
pub use eps::{eps_coupled_step, eps_probs, CouplingLayout, EpsilonFamily, Violation};
pub use lr::{lr_probs, lr_step, project_lr, LRState, Move, Transition};
