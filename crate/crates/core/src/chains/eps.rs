use super::lr::{kernel, left_prob, pick, LRState, Move, Transition};
use crate::params::Params;

/// Exact kernel of the epsilon-chain: same boundary behaviour as the
/// mass-split chain, but in the interior the non-mutant lands left with the
/// fixed share `eps` instead of `L / N`.
pub fn eps_probs(state: &LRState, eps: f64, params: &Params) -> Vec<Transition> {
    let a = left_prob(state, params.p, params.r, eps);
    kernel(state, params.p, a)
}

/// How a shared uniform is mapped onto each chain's branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingLayout {
    /// `[0, a)` left, `[a, p)` right, `[p, 1)` death for every chain. The left
    /// interval grows with epsilon, which keeps the family ordered pathwise.
    #[default]
    Monotone,
    /// Odd grid positions place the left interval at `[p - a, p)`. Breaks the
    /// ordering; exists as a negative control for the checker.
    Alternating,
}

/// Chains for an ascending grid of epsilon values driven by shared uniforms.
#[derive(Debug, Clone)]
pub struct EpsilonFamily {
    pub grid: Vec<f64>,
    pub states: Vec<LRState>,
    pub p: f64,
    pub r: f64,
    pub layout: CouplingLayout,
}

/// A broken ordering between grid positions `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub lower: usize,
    pub upper: usize,
    pub lower_state: LRState,
    pub upper_state: LRState,
}

impl EpsilonFamily {
    /// Every chain starts from `start`. The grid is sorted ascending.
    pub fn new(mut grid: Vec<f64>, start: LRState, params: &Params) -> Self {
        grid.sort_by(f64::total_cmp);
        let states = vec![start; grid.len()];
        Self {
            grid,
            states,
            p: params.p,
            r: params.r,
            layout: CouplingLayout::Monotone,
        }
    }

    pub fn with_layout(mut self, layout: CouplingLayout) -> Self {
        self.layout = layout;
        self
    }

    /// First pair of grid positions violating `L(e) <= L(e')`, `R(e) >= R(e')`.
    ///
    /// All chains share `N`, so checking adjacent positions is enough for a
    /// total order, but the full scan also catches broken layouts where `N`
    /// could diverge.
    pub fn first_violation(&self) -> Option<Violation> {
        for i in 0..self.states.len() {
            for j in i + 1..self.states.len() {
                let (a, b) = (self.states[i], self.states[j]);
                if a.left > b.left || a.right < b.right {
                    return Some(Violation {
                        lower: i,
                        upper: j,
                        lower_state: a,
                        upper_state: b,
                    });
                }
            }
        }
        None
    }

    pub fn state_for(&self, eps: f64) -> Option<&LRState> {
        self.grid
            .iter()
            .position(|&e| e == eps)
            .map(|i| &self.states[i])
    }
}

/// Moves every chain of the family with the same uniform `u`.
pub fn eps_coupled_step(family: &mut EpsilonFamily, u: f64) {
    let (p, r) = (family.p, family.r);
    for (i, (state, &eps)) in family.states.iter_mut().zip(&family.grid).enumerate() {
        let a = left_prob(state, p, r, eps);
        let empty = state.total() == 0;
        let mv = match family.layout {
            CouplingLayout::Alternating if i % 2 == 1 => {
                if u < p - a {
                    Move::Right
                } else if u < p {
                    Move::Left
                } else {
                    pick(u, p, a, empty)
                }
            }
            _ => pick(u, p, a, empty),
        };
        *state = state.apply(mv);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::lr_step;
    use crate::rng::{StreamRng, UniformSource};

    fn params() -> Params {
        Params::new(0.75, 0.5, 0, 0).unwrap()
    }

    fn pairs(ts: Vec<Transition>) -> Vec<((u64, u64), f64)> {
        ts.into_iter()
            .map(|t| ((t.to.left, t.to.right), t.prob))
            .collect()
    }

    #[test]
    fn interior_kernel_at_extreme_eps() {
        let s = LRState::new(1, 1, 0.5);
        let one = pairs(eps_probs(&s, 1.0, &params()));
        assert_eq!(
            one,
            vec![
                ((2, 1), 9.0 / 16.0),
                ((1, 2), 3.0 / 16.0),
                ((0, 1), 4.0 / 16.0)
            ]
        );
        let zero = pairs(eps_probs(&s, 0.0, &params()));
        assert_eq!(
            zero,
            vec![
                ((2, 1), 3.0 / 16.0),
                ((1, 2), 9.0 / 16.0),
                ((0, 1), 4.0 / 16.0)
            ]
        );
    }

    #[test]
    fn shared_uniform_examples() {
        let s = LRState::new(1, 1, 0.5);
        let mut fam = EpsilonFamily::new(vec![0.0, 1.0], s, &params());
        eps_coupled_step(&mut fam, 0.2);
        assert_eq!(fam.states[0], LRState::new(1, 2, 0.5));
        assert_eq!(fam.states[1], LRState::new(2, 1, 0.5));

        let mut fam = EpsilonFamily::new(vec![0.0, 0.5, 1.0], s, &params());
        eps_coupled_step(&mut fam, 0.99);
        assert!(fam.states.iter().all(|st| *st == LRState::new(0, 1, 0.5)));

        let mut fam = EpsilonFamily::new(vec![0.3, 0.3], s, &params());
        let mut rng = StreamRng::new(5);
        for _ in 0..1000 {
            eps_coupled_step(&mut fam, rng.next_uniform());
            assert_eq!(fam.states[0], fam.states[1]);
        }
    }

    #[test]
    fn family_stays_ordered_and_sandwiches_the_mass_split_chain() {
        let p = params();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let start = LRState::new(0, 0, 0.4);
        let mut fam = EpsilonFamily::new(grid, start, &p);
        let mut lr = start;
        let mut rng = StreamRng::new(11);
        for _ in 0..10_000 {
            let u = rng.next_uniform();
            eps_coupled_step(&mut fam, u);
            lr = lr_step(&lr, &p, u);
            assert_eq!(fam.first_violation(), None);
            let lo = fam.state_for(0.0).unwrap();
            let hi = fam.state_for(1.0).unwrap();
            assert!(lo.left <= lr.left && lr.left <= hi.left);
            assert!(hi.right <= lr.right && lr.right <= lo.right);
        }
    }

    #[test]
    fn alternating_layout_is_caught() {
        let p = params();
        let mut fam = EpsilonFamily::new(vec![0.0, 0.5, 1.0], LRState::new(0, 0, 0.5), &p)
            .with_layout(CouplingLayout::Alternating);
        let mut rng = StreamRng::new(1);
        let mut seen = false;
        for _ in 0..1000 {
            eps_coupled_step(&mut fam, rng.next_uniform());
            if fam.first_violation().is_some() {
                seen = true;
                break;
            }
        }
        assert!(seen);
    }
}
