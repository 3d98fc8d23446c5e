use crate::model::PopulationState;
use crate::params::Params;

/// Population mass split at fitness `f`: `left` on `[0, f]`, `right` on `(f, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LRState {
    pub left: u64,
    pub right: u64,
    pub f: f64,
}

impl LRState {
    pub fn new(left: u64, right: u64, f: f64) -> Self {
        Self { left, right, f }
    }

    pub fn total(&self) -> u64 {
        self.left + self.right
    }

    pub fn apply(self, mv: Move) -> Self {
        match mv {
            Move::Left => Self {
                left: self.left + 1,
                ..self
            },
            Move::Right => Self {
                right: self.right + 1,
                ..self
            },
            // Deaths hit the least-fit individual, which is on the left if any.
            Move::Down if self.left > 0 => Self {
                left: self.left - 1,
                ..self
            },
            Move::Down if self.right > 0 => Self {
                right: self.right - 1,
                ..self
            },
            Move::Down | Move::Hold => self,
        }
    }
}

/// One branch of a chain kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Down,
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub mv: Move,
    pub to: LRState,
    pub prob: f64,
}

/// Probability of a left move when the interior attachment share is `share`.
///
/// Boundary cases ignore `share`: from `(0, 0)` the newborn is uniform; from
/// `(0, R)` only a mutant can land left; from `(L, 0)` every non-mutant lands
/// left.
pub(crate) fn left_prob(state: &LRState, p: f64, r: f64, share: f64) -> f64 {
    let f = state.f;
    match (state.left, state.right) {
        (0, 0) => f * p,
        (0, _) => f * p * r,
        (_, 0) => f * p * r + p * (1.0 - r),
        _ => f * p * r + p * (1.0 - r) * share,
    }
}

/// Kernel with the interval layout `[0, a)` left, `[a, p)` right, `[p, 1)` death.
pub(crate) fn kernel(state: &LRState, p: f64, a: f64) -> Vec<Transition> {
    let down = if state.total() == 0 {
        Move::Hold
    } else {
        Move::Down
    };
    [(Move::Left, a), (Move::Right, p - a), (down, 1.0 - p)]
        .into_iter()
        .filter(|&(_, prob)| prob > 0.0)
        .map(|(mv, prob)| Transition {
            mv,
            to: state.apply(mv),
            prob,
        })
        .collect()
}

pub(crate) fn pick(u: f64, p: f64, a: f64, empty: bool) -> Move {
    if u < a {
        Move::Left
    } else if u < p {
        Move::Right
    } else if empty {
        Move::Hold
    } else {
        Move::Down
    }
}

fn lr_share(state: &LRState) -> f64 {
    let n = state.total();
    if n == 0 {
        0.0
    } else {
        state.left as f64 / n as f64
    }
}

/// Exact one-step kernel of the mass-split chain, ordered left, right, down/hold.
pub fn lr_probs(state: &LRState, params: &Params) -> Vec<Transition> {
    let a = left_prob(state, params.p, params.r, lr_share(state));
    kernel(state, params.p, a)
}

/// Inverse-transform sample of [`lr_probs`] with the uniform `u`.
pub fn lr_step(state: &LRState, params: &Params, u: f64) -> LRState {
    let a = left_prob(state, params.p, params.r, lr_share(state));
    state.apply(pick(u, params.p, a, state.total() == 0))
}

/// Splits the population of `state` at fitness `f`.
pub fn project_lr(state: &PopulationState, f: f64) -> LRState {
    let mut left = 0;
    let mut right = 0;
    for (_, s) in state.sites_by_fitness() {
        if s.fitness <= f {
            left += s.count;
        } else {
            right += s.count;
        }
    }
    LRState { left, right, f }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Site;

    fn params() -> Params {
        Params::new(0.75, 0.5, 0, 0).unwrap()
    }

    fn as_pairs(ts: &[Transition]) -> Vec<((u64, u64), f64)> {
        ts.iter()
            .map(|t| ((t.to.left, t.to.right), t.prob))
            .collect()
    }

    fn assert_kernel(got: Vec<Transition>, want: &[((u64, u64), f64)]) {
        let got = as_pairs(&got);
        assert_eq!(got.len(), want.len(), "{got:?}");
        for (g, w) in got.iter().zip(want) {
            assert_eq!(g.0, w.0);
            assert!((g.1 - w.1).abs() < 1e-15, "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn empty_case() {
        let k = lr_probs(&LRState::new(0, 0, 2.0 / 3.0), &params());
        assert_kernel(k, &[((1, 0), 0.5), ((0, 1), 0.25), ((0, 0), 0.25)]);
    }

    #[test]
    fn left_empty_case() {
        let k = lr_probs(&LRState::new(0, 4, 0.5), &params());
        assert_kernel(
            k,
            &[
                ((1, 4), 3.0 / 16.0),
                ((0, 5), 9.0 / 16.0),
                ((0, 3), 4.0 / 16.0),
            ],
        );
    }

    #[test]
    fn right_empty_case() {
        let k = lr_probs(&LRState::new(3, 0, 0.5), &params());
        assert_kernel(
            k,
            &[
                ((4, 0), 9.0 / 16.0),
                ((3, 1), 3.0 / 16.0),
                ((2, 0), 4.0 / 16.0),
            ],
        );
    }

    #[test]
    fn interior_case() {
        let k = lr_probs(&LRState::new(2, 3, 0.5), &params());
        assert_kernel(
            k,
            &[
                ((3, 3), 27.0 / 80.0),
                ((2, 4), 33.0 / 80.0),
                ((1, 3), 20.0 / 80.0),
            ],
        );
    }

    #[test]
    fn step_examples() {
        let p = params();
        assert_eq!(
            lr_step(&LRState::new(0, 0, 2.0 / 3.0), &p, 0.99),
            LRState::new(0, 0, 2.0 / 3.0)
        );
        assert_eq!(
            lr_step(&LRState::new(0, 4, 0.5), &p, 0.0),
            LRState::new(1, 4, 0.5)
        );
        assert_eq!(
            lr_step(&LRState::new(2, 3, 0.5), &p, 0.8),
            LRState::new(1, 3, 0.5)
        );
    }

    #[test]
    fn pure_birth_has_no_death_branch() {
        let p = Params::new(1.0, 0.5, 0, 0).unwrap();
        let k = lr_probs(&LRState::new(2, 3, 0.5), &p);
        assert_eq!(k.len(), 2);
        assert!((k.iter().map(|t| t.prob).sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projection_examples() {
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
        assert_eq!(project_lr(&s, 0.5), LRState::new(3, 5, 0.5));
        assert_eq!(project_lr(&s, 1.0), LRState::new(8, 0, 1.0));
        let e = PopulationState::empty();
        assert_eq!(project_lr(&e, 0.5), LRState::new(0, 0, 0.5));
    }
}
